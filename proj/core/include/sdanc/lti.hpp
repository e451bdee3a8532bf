#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sdanc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// Continuous-time LTI system  x' = A x + B u,  y = C x + D u.
///
/// Immutable after construction. The constructor checks that the four
/// blocks agree on the state, input and output dimensions.
class ContinuousStateSpace {
 public:
  ContinuousStateSpace(Matrix a, Matrix b, Matrix c, Matrix d);
  /// Strictly proper convenience form (D = 0).
  ContinuousStateSpace(Matrix a, Matrix b, Matrix c);

  const Matrix& a() const noexcept { return a_; }
  const Matrix& b() const noexcept { return b_; }
  const Matrix& c() const noexcept { return c_; }
  const Matrix& d() const noexcept { return d_; }

  Eigen::Index states() const noexcept { return a_.rows(); }
  Eigen::Index inputs() const noexcept { return b_.cols(); }
  Eigen::Index outputs() const noexcept { return c_.rows(); }

  bool is_siso() const noexcept { return inputs() == 1 && outputs() == 1; }
  bool is_strictly_proper() const noexcept { return d_.isZero(0.0); }
  /// All eigenvalues of A in the open left half plane.
  bool is_stable() const;
  /// Largest real part among the eigenvalues of A (-inf for a static gain).
  double spectral_abscissa() const;

 private:
  Matrix a_, b_, c_, d_;
};

/// One resonant term  gain * w^2 / (s^2 + 2 zeta w s + w^2).
struct ResonantSection {
  double gain = 1.0;
  double damping = 0.1;
  double frequency = 1.0;
};

/// Plant of the form
///   gain * prod_i 1/(s + p_i) * sum_k resonant_k(s).
/// An empty section list drops the parallel bank (factor 1).
struct SectionBank {
  double gain = 1.0;
  std::vector<double> first_order_poles;
  std::vector<ResonantSection> sections;
};

/// Realize a SectionBank: controllable canonical form per section, first-order
/// factors chained in series, resonant sections summed in parallel, overall
/// gain on the output row. Throws ModelError for unstable or improper banks.
ContinuousStateSpace from_second_order_bank(const SectionBank& bank);

/// Positional form: one entry per resonant section in `gains`, `dampings`
/// and `frequencies`; `overall_gain` multiplies the whole product.
ContinuousStateSpace from_second_order_bank(std::span<const double> gains,
                                            std::span<const double> dampings,
                                            std::span<const double> frequencies,
                                            std::span<const double> first_order_poles,
                                            double overall_gain = 1.0);

/// `first` feeds `second`: transfer function second(s) * first(s).
ContinuousStateSpace series(const ContinuousStateSpace& first,
                            const ContinuousStateSpace& second);
/// Sum of outputs for a shared input.
ContinuousStateSpace parallel(const ContinuousStateSpace& lhs,
                              const ContinuousStateSpace& rhs);
ContinuousStateSpace negate(const ContinuousStateSpace& sys);
/// Static identity of width `n` (no states).
ContinuousStateSpace identity_system(Eigen::Index n = 1);

/// C (j w I - A)^{-1} B + D.
Eigen::MatrixXcd freq_response(const ContinuousStateSpace& sys, double omega);
/// Scalar response of a SISO system.
std::complex<double> freq_response_siso(const ContinuousStateSpace& sys, double omega);

/// Matrix exponential (scaling and squaring, degree-13 Pade).
Matrix expm(const Matrix& m);

/// Exponential and integral blocks over [0, t]:
///   phi    = e^{A t}
///   gamma  = int_0^t e^{A s} ds B
///   lambda = int_0^t C e^{A s} ds
///   theta  = int_0^t int_0^r C e^{A s} B ds dr
struct VanLoanResult {
  Matrix phi;
  Matrix gamma;
  Matrix theta;
  Matrix lambda;
};

/// All four blocks from one exponential of the block-triangular matrix
///   [0 C 0; 0 A B; 0 0 0] * t.
VanLoanResult vanloan(const ContinuousStateSpace& sys, double t);

}  // namespace sdanc
