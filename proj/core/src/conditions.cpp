#include "sdanc/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/core.h>

#include "sdanc/adaptive.hpp"
#include "sdanc/errors.hpp"

namespace sdanc {

namespace {

double spectral_norm_sym(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

double lambda_max(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

}  // namespace

std::vector<Matrix> cumulative_gram(const Matrix& u_blocks, Eigen::Index taps, double h) {
  if (taps < 1) throw DimensionError("need at least one tap");
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(u_blocks.rows()) + 1);
  out.push_back(Matrix::Zero(taps, taps));
  for (Eigen::Index n = 0; n < u_blocks.rows(); ++n) {
    out.push_back(out.back() + interval_gram(u_blocks, n, taps, h));
  }
  return out;
}

LmsConditionReport check_lms_conditions(const Matrix& u_blocks, double mu, Eigen::Index taps, double h,
                                        const LmsCheckOptions& options) {
  if (u_blocks.rows() == 0 || u_blocks.cols() == 0) {
    throw std::invalid_argument("check_lms_conditions needs a non-empty trace");
  }
  if (!(mu > 0.0)) throw std::invalid_argument(fmt::format("step size must be positive, got {}", mu));
  if (!(h > 0.0)) throw std::invalid_argument("sampling period must be positive");

  LmsConditionReport r;
  r.mu = mu;
  r.epsilon_threshold = options.epsilon;
  r.intervals = static_cast<long>(u_blocks.rows());

  Matrix phi = Matrix::Zero(taps, taps);
  std::vector<double> norms;
  norms.reserve(static_cast<std::size_t>(u_blocks.rows()) + 1);
  norms.push_back(0.0);
  for (Eigen::Index n = 0; n < u_blocks.rows(); ++n) {
    const Matrix increment = interval_gram(u_blocks, n, taps, h);
    phi += increment;
    const double norm = spectral_norm_sym(phi);
    norms.push_back(norm);
    r.gamma = std::max(r.gamma, norm);
    r.max_lambda = std::max(r.max_lambda, lambda_max(phi));
    r.epsilon = std::max(r.epsilon, mu * spectral_norm_sym(increment));
  }

  const bool finite = std::isfinite(r.gamma) && std::isfinite(r.max_lambda);
  r.degenerate = finite && r.gamma == 0.0;

  const auto last = norms.size() - 1;
  const auto tail_start = static_cast<std::size_t>(
      std::floor(static_cast<double>(last) * (1.0 - std::clamp(options.tail_fraction, 0.0, 1.0))));
  r.tail_growth = r.gamma > 0.0 ? (norms[last] - norms[tail_start]) / r.gamma : 0.0;

  r.bounded = finite;
  r.mu_bound = r.max_lambda > 0.0 ? 2.0 / r.max_lambda : std::numeric_limits<double>::infinity();
  r.step_size_ok = finite && mu < r.mu_bound;
  r.slowly_varying = finite && r.epsilon <= options.epsilon;
  return r;
}

}  // namespace sdanc
