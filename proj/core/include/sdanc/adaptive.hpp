#pragma once

#include <deque>
#include <vector>

#include "sdanc/fir.hpp"
#include "sdanc/lifting.hpp"
#include "sdanc/lti.hpp"

namespace sdanc {

/// Normal equations of the continuous-time cost over [0, horizon]:
///   J(a) = d_energy - 2 a'beta + a' Phi a.
struct WienerProblem {
  Matrix phi;
  Vector beta;
  double d_energy = 0.0;
  double horizon = 0.0;

  Eigen::Index taps() const noexcept { return beta.size(); }
};

/// Gram contribution of one sampling interval n to Phi:
///   G_kl = sum_l U[n-k]_l U[n-k']_l / (h/L),
/// i.e. the inner product of the piecewise-constant projections of the
/// shifted signals. `u_blocks` has one row per interval and L columns of
/// subinterval integrals; rows before 0 are zero.
Matrix interval_gram(const Matrix& u_blocks, Eigen::Index n, Eigen::Index taps, double h);

/// Phi and beta from blocked traces on [0, horizon].
///
/// `u_blocks(n, l)` is the integral of u over the l-th subinterval of
/// interval n; `d_samples(n, l)` is d at the left endpoint of that
/// subinterval. d is held and u integrated per subinterval, so
/// beta_k = sum_n d[n]' U[n-k]. Phi is the Gram matrix of the block
/// averages, symmetric and positive semidefinite by construction.
WienerProblem build_wiener(const Matrix& u_blocks, const Matrix& d_samples, Eigen::Index taps,
                           double horizon, double h);

/// alpha_opt = Phi^{-1} beta by Cholesky. Throws SingularMatrixError when Phi
/// is not positive definite or its condition number exceeds
/// Tolerances::wiener_max_condition.
FirFilter wiener_solve(const WienerProblem& problem);

/// 2 (Phi a - beta).
Vector gradient(const WienerProblem& problem, const Vector& alpha);
/// d_energy - 2 a'beta + a' Phi a.
double cost(const WienerProblem& problem, const Vector& alpha);

/// Steepest descent  a[n+1] = a[n] + mu (beta - Phi a[n]).
/// Returns n_steps + 1 iterates starting with alpha0.
std::vector<Vector> sd_run(const WienerProblem& problem, const Vector& alpha0, double mu,
                           long n_steps);

/// State of the sampled-data filtered-x adaptation.
struct AdaptiveState {
  Vector alpha;                 // filter taps
  Vector delta;                 // cumulative direction, int_0^{nh} e(t) u(t - kh) dt
  Vector eta;                   // F_h filter state
  std::deque<Vector> u_history; // U[n-k], k = 0..N-1, newest first
  std::deque<double> xd_history;
  long n = 0;

  static AdaptiveState initial(const LiftedDiscretization& lift, const Vector& alpha0);
};

/// alpha <- alpha + mu * delta. Gives the taps used on the coming interval.
void update_taps(AdaptiveState& state, double mu);

/// Records interval n: U[n] = Ch eta + Dh x_d enters the history,
/// delta_k += e_block' U[n-k], eta advances.
void accumulate(AdaptiveState& state, const LiftedDiscretization& lift, const Vector& e_block,
                double x_d);

/// update_taps followed by accumulate.
AdaptiveState sdfx_lms_step(AdaptiveState state, const LiftedDiscretization& lift, double mu,
                            const Vector& e_block, double x_d);

/// Owning wrapper used by the closed-loop runner.
class SdfxLms {
 public:
  SdfxLms(LiftedDiscretization lift, double mu, const Vector& alpha0);

  /// Taps for the next interval (applies the pending update).
  FirFilter next_taps();
  /// `e_block` holds e at n h + l h/L, l = 0..L-1.
  void observe(double x_d, const Vector& e_block);

  const AdaptiveState& state() const noexcept { return state_; }
  const LiftedDiscretization& lift() const noexcept { return lift_; }
  int ratio() const noexcept { return lift_.grid.L; }
  double mu() const noexcept { return mu_; }

 private:
  LiftedDiscretization lift_;
  double mu_;
  AdaptiveState state_;
};

/// Textbook discrete-time filtered-x LMS with the same cumulative update
/// direction, error sampled once per period. The secondary-path model is
/// the step-invariant discretization of [F; integral of F output]; the
/// filtered reference is the increment of the integrator state over one
/// period.
class ConventionalFxLms {
 public:
  ConventionalFxLms(const ContinuousStateSpace& secondary, double h, double mu, const Vector& alpha0);

  FirFilter next_taps();
  void observe(double x_d, double e_sample);

  const Vector& alpha() const noexcept { return alpha_; }
  const Vector& delta() const noexcept { return delta_; }
  /// Filtered reference r[n-k], newest first.
  const std::deque<double>& filtered_history() const noexcept { return r_history_; }

 private:
  Matrix ad_;
  Vector bd_;
  Eigen::Index nf_;
  double mu_;
  Vector alpha_;
  Vector delta_;
  Vector model_state_;
  std::deque<double> r_history_;
};

}  // namespace sdanc
