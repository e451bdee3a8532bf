#pragma once

#include <vector>

#include "sdanc/lti.hpp"

namespace sdanc {

struct LmsCheckOptions {
  /// Largest accepted ||mu (Phi[n] - Phi[n-1])||.
  double epsilon = 0.1;
  /// Window (fraction of the run) over which tail_growth is measured.
  double tail_fraction = 0.25;
};

/// Numerical check of the three sufficient conditions for uniform
/// exponential stability of  a[n+1] = (I - mu Phi[n]) a[n],
/// Phi[n] = int_0^{nh} u(t - kh) u(t - lh) dt (blocked rule).
struct LmsConditionReport {
  double mu = 0.0;
  double gamma = 0.0;        // max_n ||Phi[n]||
  double max_lambda = 0.0;   // max_n lambda_max(Phi[n])
  double mu_bound = 0.0;     // 2 / max_lambda (+inf when degenerate)
  double epsilon = 0.0;      // max_n ||mu (Phi[n] - Phi[n-1])||
  double epsilon_threshold = 0.0;
  // Relative growth of ||Phi[n]|| over the final tail_fraction of the run.
  // Informational: a finite record always has a finite gamma.
  double tail_growth = 0.0;
  long intervals = 0;

  bool bounded = false;         // condition 1
  bool step_size_ok = false;    // condition 2
  bool slowly_varying = false;  // condition 3
  bool degenerate = false;      // Phi[n] == 0 throughout

  bool all_pass() const noexcept { return bounded && step_size_ok && slowly_varying; }
};

/// Phi[0], ..., Phi[n_intervals]; Phi[0] = 0.
std::vector<Matrix> cumulative_gram(const Matrix& u_blocks, Eigen::Index taps, double h);

LmsConditionReport check_lms_conditions(const Matrix& u_blocks, double mu, Eigen::Index taps, double h,
                                        const LmsCheckOptions& options = {});

}  // namespace sdanc
