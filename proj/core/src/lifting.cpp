#include "sdanc/lifting.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/core.h>

#include "sdanc/errors.hpp"

namespace sdanc {

FastSampler::FastSampler(double period, int ratio) : h(period), L(ratio) {
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw std::invalid_argument(fmt::format("sampling period must be positive, got {}", period));
  }
  if (ratio < 1) {
    throw std::invalid_argument(fmt::format("fast-sampling ratio must be >= 1, got {}", ratio));
  }
}

LiftedDiscretization discretize_lifted(const ContinuousStateSpace& sys, FastSampler grid) {
  if (!sys.is_siso()) {
    throw ModelError(fmt::format("lifted discretization needs a SISO plant, got {}x{}",
                                 sys.outputs(), sys.inputs()));
  }
  if (!sys.is_strictly_proper()) {
    throw ModelError("lifted discretization needs a strictly proper plant (D = 0)");
  }
  const FastSampler checked(grid.h, grid.L);
  const auto n = sys.states();

  LiftedDiscretization lift;
  lift.grid = checked;
  lift.Ch.resize(checked.L, n);
  lift.Dh.resize(checked.L);

  // Cumulative integrals at the left endpoint of the current subinterval.
  RowVector lambda_prev = RowVector::Zero(n);
  double theta_prev = 0.0;
  VanLoanResult full;
  for (int l = 0; l < checked.L; ++l) {
    // Evaluate at (l+1) h / L directly rather than accumulating a step,
    // so the last endpoint is exactly h.
    const double t = checked.h * (l + 1) / checked.L;
    full = vanloan(sys, t);
    const RowVector lambda = full.lambda.row(0);
    const double theta = full.theta(0, 0);
    lift.Ch.row(l) = lambda - lambda_prev;
    lift.Dh(l) = theta - theta_prev;
    lambda_prev = lambda;
    theta_prev = theta;
  }
  lift.Ah = full.phi;
  lift.Bh = full.gamma.col(0);
  return lift;
}

LiftedDiscretization discretize_lifted(const ContinuousStateSpace& sys, double h, int L) {
  return discretize_lifted(sys, FastSampler(h, L));
}

FhStepResult fh_step(const LiftedDiscretization& lift, const Vector& eta, double x_d) {
  if (eta.size() != lift.states()) {
    throw DimensionError(fmt::format("F_h state has {} entries, filter has {} states", eta.size(),
                                     lift.states()));
  }
  return {lift.Ah * eta + lift.Bh * x_d, lift.Ch * eta + lift.Dh * x_d};
}

double l2_norm(std::span<const double> samples, double dt) {
  if (samples.empty()) throw std::invalid_argument("l2_norm of an empty trace");
  if (!(dt > 0.0)) throw std::invalid_argument("l2_norm grid spacing must be positive");
  double sum = 0.0;
  for (double e : samples) sum += e * e;
  return std::sqrt(sum * dt);
}

}  // namespace sdanc
