#include "sdanc/adaptive.hpp"

#include <cmath>
#include <limits>

#include <fmt/core.h>

#include "sdanc/errors.hpp"
#include "sdanc/tolerances.hpp"

namespace sdanc {

namespace {

Eigen::Index intervals_in(double horizon, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("sampling period must be positive");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  const double ratio = horizon / h;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument(fmt::format("horizon {} is not a multiple of h = {}", horizon, h));
  }
  return static_cast<Eigen::Index>(rounded);
}

}  // namespace

Matrix interval_gram(const Matrix& u_blocks, Eigen::Index n, Eigen::Index taps, double h) {
  const double dt = h / static_cast<double>(u_blocks.cols());
  Matrix g = Matrix::Zero(taps, taps);
  for (Eigen::Index k = 0; k < taps && n - k >= 0; ++k) {
    for (Eigen::Index j = k; j < taps && n - j >= 0; ++j) {
      const double v = u_blocks.row(n - k).dot(u_blocks.row(n - j)) / dt;
      g(k, j) = v;
      g(j, k) = v;
    }
  }
  return g;
}

WienerProblem build_wiener(const Matrix& u_blocks, const Matrix& d_samples, Eigen::Index taps,
                           double horizon, double h) {
  if (taps < 1) throw DimensionError("Wiener problem needs at least one tap");
  if (u_blocks.rows() != d_samples.rows() || u_blocks.cols() != d_samples.cols()) {
    throw DimensionError(fmt::format("u blocks are {}x{}, d samples are {}x{}", u_blocks.rows(),
                                     u_blocks.cols(), d_samples.rows(), d_samples.cols()));
  }
  if (u_blocks.cols() < 1) throw DimensionError("traces need at least one subinterval per period");
  const auto intervals = intervals_in(horizon, h);
  if (intervals > u_blocks.rows()) {
    throw DimensionError(fmt::format("horizon {} needs {} intervals, traces hold {}", horizon, intervals,
                                     u_blocks.rows()));
  }
  const double dt = h / static_cast<double>(u_blocks.cols());

  WienerProblem p;
  p.horizon = horizon;
  p.phi = Matrix::Zero(taps, taps);
  p.beta = Vector::Zero(taps);
  for (Eigen::Index n = 0; n < intervals; ++n) {
    p.phi += interval_gram(u_blocks, n, taps, h);
    for (Eigen::Index k = 0; k < taps && n - k >= 0; ++k) {
      p.beta(k) += d_samples.row(n).dot(u_blocks.row(n - k));
    }
    p.d_energy += d_samples.row(n).squaredNorm() * dt;
  }
  return p;
}

FirFilter wiener_solve(const WienerProblem& problem) {
  const auto n = problem.taps();
  if (problem.phi.rows() != n || problem.phi.cols() != n) {
    throw DimensionError("Phi and beta sizes disagree");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(problem.phi, Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues().minCoeff();
  const double lmax = eig.eigenvalues().maxCoeff();
  const double condition = lmin > 0.0 ? lmax / lmin : std::numeric_limits<double>::infinity();
  if (!(lmax > 0.0) || !(condition <= Tolerances::wiener_max_condition)) {
    throw SingularMatrixError(
        fmt::format("Phi is singular or ill-conditioned (condition number {:.3g})", condition), condition);
  }
  Eigen::LLT<Matrix> llt(problem.phi);
  if (llt.info() != Eigen::Success) {
    throw SingularMatrixError("Phi is not positive definite", condition);
  }
  Vector alpha = llt.solve(problem.beta);
  // One step of iterative refinement.
  alpha += llt.solve(problem.beta - problem.phi * alpha);
  const double residual = (problem.phi * alpha - problem.beta).norm();
  if (residual > Tolerances::wiener_residual * std::max(problem.beta.norm(), 1e-300)) {
    throw SingularMatrixError(fmt::format("Wiener-Hopf residual {:.3g} too large", residual), condition);
  }
  return FirFilter(alpha);
}

Vector gradient(const WienerProblem& problem, const Vector& alpha) {
  if (alpha.size() != problem.taps()) {
    throw DimensionError(fmt::format("alpha has {} taps, problem has {}", alpha.size(), problem.taps()));
  }
  return 2.0 * (problem.phi * alpha - problem.beta);
}

double cost(const WienerProblem& problem, const Vector& alpha) {
  if (alpha.size() != problem.taps()) {
    throw DimensionError(fmt::format("alpha has {} taps, problem has {}", alpha.size(), problem.taps()));
  }
  return problem.d_energy - 2.0 * alpha.dot(problem.beta) + alpha.dot(problem.phi * alpha);
}

std::vector<Vector> sd_run(const WienerProblem& problem, const Vector& alpha0, double mu, long n_steps) {
  if (!(mu >= 0.0)) throw std::invalid_argument(fmt::format("step size must be >= 0, got {}", mu));
  if (alpha0.size() != problem.taps()) {
    throw DimensionError(fmt::format("alpha0 has {} taps, problem has {}", alpha0.size(), problem.taps()));
  }
  std::vector<Vector> iterates;
  iterates.reserve(static_cast<std::size_t>(n_steps) + 1);
  iterates.push_back(alpha0);
  for (long i = 0; i < n_steps; ++i) {
    const Vector& a = iterates.back();
    iterates.push_back(a + mu * (problem.beta - problem.phi * a));
  }
  return iterates;
}

AdaptiveState AdaptiveState::initial(const LiftedDiscretization& lift, const Vector& alpha0) {
  if (alpha0.size() < 1) throw DimensionError("adaptive filter needs at least one tap");
  AdaptiveState s;
  s.alpha = alpha0;
  s.delta = Vector::Zero(alpha0.size());
  s.eta = Vector::Zero(lift.states());
  s.u_history.assign(static_cast<std::size_t>(alpha0.size()), Vector::Zero(lift.ratio()));
  return s;
}

void update_taps(AdaptiveState& state, double mu) { state.alpha += mu * state.delta; }

void accumulate(AdaptiveState& state, const LiftedDiscretization& lift, const Vector& e_block, double x_d) {
  if (e_block.size() != lift.ratio()) {
    throw DimensionError(fmt::format("error block has {} samples, fast-sampling ratio is {}", e_block.size(),
                                     lift.ratio()));
  }
  auto [eta_next, u_now] = fh_step(lift, state.eta, x_d);
  state.u_history.push_front(std::move(u_now));
  state.u_history.pop_back();
  state.xd_history.push_front(x_d);
  if (static_cast<Eigen::Index>(state.xd_history.size()) > state.alpha.size()) state.xd_history.pop_back();
  for (Eigen::Index k = 0; k < state.delta.size(); ++k) {
    state.delta(k) += e_block.dot(state.u_history[static_cast<std::size_t>(k)]);
  }
  state.eta = std::move(eta_next);
  ++state.n;
}

AdaptiveState sdfx_lms_step(AdaptiveState state, const LiftedDiscretization& lift, double mu,
                            const Vector& e_block, double x_d) {
  update_taps(state, mu);
  accumulate(state, lift, e_block, x_d);
  return state;
}

SdfxLms::SdfxLms(LiftedDiscretization lift, double mu, const Vector& alpha0)
    : lift_(std::move(lift)), mu_(mu), state_(AdaptiveState::initial(lift_, alpha0)) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw std::invalid_argument("step size must be finite and >= 0");
}

FirFilter SdfxLms::next_taps() {
  update_taps(state_, mu_);
  return FirFilter(state_.alpha);
}

void SdfxLms::observe(double x_d, const Vector& e_block) { accumulate(state_, lift_, e_block, x_d); }

ConventionalFxLms::ConventionalFxLms(const ContinuousStateSpace& secondary, double h, double mu,
                                     const Vector& alpha0)
    : nf_(secondary.states()), mu_(mu), alpha_(alpha0), delta_(Vector::Zero(alpha0.size())) {
  if (!secondary.is_siso() || !secondary.is_strictly_proper()) {
    throw ModelError("secondary path must be SISO and strictly proper");
  }
  if (alpha0.size() < 1) throw DimensionError("adaptive filter needs at least one tap");
  // States [zeta; v] with v' = C zeta, input held over one period.
  const auto n = nf_ + 1;
  Matrix aug = Matrix::Zero(n + 1, n + 1);
  aug.topLeftCorner(nf_, nf_) = secondary.a();
  aug.block(nf_, 0, 1, nf_) = secondary.c();
  aug.block(0, n, nf_, 1) = secondary.b();
  const Matrix e = expm(aug * h);
  ad_ = e.topLeftCorner(n, n);
  bd_ = e.block(0, n, n, 1);
  model_state_ = Vector::Zero(n);
  r_history_.assign(static_cast<std::size_t>(alpha0.size()), 0.0);
}

FirFilter ConventionalFxLms::next_taps() {
  alpha_ += mu_ * delta_;
  return FirFilter(alpha_);
}

void ConventionalFxLms::observe(double x_d, double e_sample) {
  model_state_(nf_) = 0.0;
  model_state_ = ad_ * model_state_ + bd_ * x_d;
  r_history_.push_front(model_state_(nf_));
  r_history_.pop_back();
  for (Eigen::Index k = 0; k < delta_.size(); ++k) {
    delta_(k) += e_sample * r_history_[static_cast<std::size_t>(k)];
  }
}

}  // namespace sdanc
