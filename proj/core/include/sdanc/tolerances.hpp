#pragma once

namespace sdanc {

// Numerical thresholds used by library checks. Test suites cite these
// directly so a single edit moves every dependent assertion.
struct Tolerances {
  // Largest condition number accepted by the Wiener-Hopf solve.
  static constexpr double wiener_max_condition = 1e12;
  // Relative residual ||Phi a - beta|| / ||beta|| required after the solve.
  static constexpr double wiener_residual = 1e-8;
  // Symmetry slack for Gram matrices.
  static constexpr double symmetry = 1e-10;
  // Eigenvalues above -psd_slack count as nonnegative.
  static constexpr double psd_slack = 1e-10;
  // Any |e(t)| beyond this aborts a closed-loop run; the norm is reported as +inf.
  static constexpr double divergence_cutoff = 1e9;
  // Real part below -stability_margin counts as a stable pole.
  static constexpr double stability_margin = 0.0;
};

}  // namespace sdanc
