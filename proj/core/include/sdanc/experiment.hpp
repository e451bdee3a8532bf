#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sdanc/conditions.hpp"
#include "sdanc/config.hpp"
#include "sdanc/lifting.hpp"

namespace sdanc {

/// Fast-rate and per-period series of one closed-loop run.
struct SimTrace {
  FastSampler grid;  // simulation grid (ratio M)
  std::vector<double> t, x, d, w, e, u;  // fast instants
  std::vector<double> xd, yd;            // per period
  Matrix alpha;                          // taps used on each interval (rows)
  std::vector<double> delta_norm;        // ||delta[n+1]|| after each interval
  Matrix u_blocks;                       // per interval, M subinterval integrals of u
  Matrix d_samples;                      // per interval, d at the M left endpoints

  long intervals() const noexcept { return static_cast<long>(xd.size()); }
};

struct RunResult {
  int L = 1;
  double mu = 0.0;
  SimTrace trace;
  double e_norm = 0.0;  // +inf once the run diverged
  double d_norm = 0.0;
  double w_norm = 0.0;
  bool diverged = false;
  Vector final_alpha;
  LmsConditionReport conditions;
  double wall_seconds = 0.0;
};

/// Closed loop with the sampled-data filtered-x update at ratio `L`
/// (config.L when unset) and step `mu` (config.mu when unset). The loop is
/// simulated on a grid of `trace_ratio` subintervals per period
/// (effective_trace_ratio(config) when unset); it must be a multiple of L.
RunResult run_single(const SimConfig& config, std::optional<int> L = {}, std::optional<double> mu = {},
                     std::optional<int> trace_ratio = {});

struct ComparisonReport {
  RunResult proposed;      // ratio config.L
  RunResult conventional;  // ratio 1
  double ratio = 0.0;      // ||e||_proposed / ||e||_conventional
};

/// Both arms share the noise, plants and simulation grid.
ComparisonReport run_comparison(const SimConfig& config);

struct SweepRow {
  double mu = 0.0;
  double norm_conventional = 0.0;
  double norm_proposed = 0.0;
  LmsConditionReport conditions_conventional;
  LmsConditionReport conditions_proposed;
};

struct SweepReport {
  std::vector<SweepRow> rows;  // sorted by mu
  double threshold = 10.0;
  /// Largest mu for which every mu' <= mu on the scan stays below threshold,
  /// refined by bisection against the first failing point.
  double mu_star_conventional = 0.0;
  double mu_star_proposed = 0.0;
  /// False when the scan never crossed the threshold (mu_star is a lower bound).
  bool crossed_conventional = false;
  bool crossed_proposed = false;
  double width_ratio = 0.0;  // mu_star_proposed / mu_star_conventional
  /// Rows over threshold whose step-size condition still passes.
  std::vector<std::string> inconsistent_rows;
};

SweepReport run_mu_sweep(const SimConfig& config, std::vector<double> mus);

struct BodeRow {
  double omega = 0.0;
  double f_mag = 0.0;
  double p_mag = 0.0;
};

/// Log-spaced magnitude responses of F and P.
std::vector<BodeRow> emit_bode(const SimConfig& config);

/// Sum adjacent columns of fast blocks down to ratio L.
Matrix coarsen_blocks(const Matrix& blocks, int L);

/// U[n] for a whole x_d record through the F_h filter at ratio L.
Matrix filtered_blocks(const LiftedDiscretization& lift, std::span<const double> x_d);

}  // namespace sdanc
