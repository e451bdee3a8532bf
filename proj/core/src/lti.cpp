#include "sdanc/lti.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include <fmt/core.h>
#include <unsupported/Eigen/MatrixFunctions>

#include "sdanc/errors.hpp"
#include "sdanc/tolerances.hpp"

namespace sdanc {

ContinuousStateSpace::ContinuousStateSpace(Matrix a, Matrix b, Matrix c, Matrix d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
  if (a_.rows() != a_.cols()) {
    throw DimensionError(fmt::format("A must be square, got {}x{}", a_.rows(), a_.cols()));
  }
  if (b_.rows() != a_.rows()) {
    throw DimensionError(fmt::format("B has {} rows, A has {}", b_.rows(), a_.rows()));
  }
  if (c_.cols() != a_.rows()) {
    throw DimensionError(fmt::format("C has {} columns, A has {}", c_.cols(), a_.rows()));
  }
  if (d_.rows() != c_.rows() || d_.cols() != b_.cols()) {
    throw DimensionError(fmt::format("D is {}x{}, expected {}x{}", d_.rows(), d_.cols(),
                                     c_.rows(), b_.cols()));
  }
  if (!a_.allFinite() || !b_.allFinite() || !c_.allFinite() || !d_.allFinite()) {
    throw ModelError("state-space matrices contain non-finite entries");
  }
}

ContinuousStateSpace::ContinuousStateSpace(Matrix a, Matrix b, Matrix c)
    : ContinuousStateSpace(a, b, c, Matrix::Zero(c.rows(), b.cols())) {}

double ContinuousStateSpace::spectral_abscissa() const {
  if (states() == 0) return -std::numeric_limits<double>::infinity();
  Eigen::EigenSolver<Matrix> solver(a_, /*computeEigenvectors=*/false);
  return solver.eigenvalues().real().maxCoeff();
}

bool ContinuousStateSpace::is_stable() const {
  return spectral_abscissa() < -Tolerances::stability_margin;
}

namespace {

ContinuousStateSpace first_order(double pole) {
  return {Matrix::Constant(1, 1, -pole), Matrix::Ones(1, 1), Matrix::Ones(1, 1)};
}

ContinuousStateSpace resonant(const ResonantSection& s) {
  const double w2 = s.frequency * s.frequency;
  Matrix a(2, 2);
  a << 0.0, 1.0, -w2, -2.0 * s.damping * s.frequency;
  Matrix b(2, 1);
  b << 0.0, 1.0;
  Matrix c(1, 2);
  c << s.gain * w2, 0.0;
  return {a, b, c};
}

}  // namespace

ContinuousStateSpace from_second_order_bank(const SectionBank& bank) {
  if (!std::isfinite(bank.gain)) throw ModelError("bank gain must be finite");
  if (bank.first_order_poles.empty() && bank.sections.empty()) {
    throw ModelError("bank has neither first-order poles nor resonant sections (improper)");
  }
  for (double p : bank.first_order_poles) {
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw ModelError(fmt::format("first-order pole {} is not stable (requires p > 0)", p));
    }
  }
  for (const auto& s : bank.sections) {
    if (!(s.damping > 0.0) || !std::isfinite(s.damping)) {
      throw ModelError(fmt::format("section damping {} is not stable (requires zeta > 0)", s.damping));
    }
    if (!(s.frequency > 0.0) || !std::isfinite(s.frequency)) {
      throw ModelError(fmt::format("section frequency {} must be positive", s.frequency));
    }
    if (!std::isfinite(s.gain)) throw ModelError("section gain must be finite");
  }

  std::optional<ContinuousStateSpace> chain;
  for (double p : bank.first_order_poles) {
    chain = chain ? series(*chain, first_order(p)) : first_order(p);
  }
  std::optional<ContinuousStateSpace> sum;
  for (const auto& s : bank.sections) {
    sum = sum ? parallel(*sum, resonant(s)) : resonant(s);
  }
  ContinuousStateSpace sys = chain && sum ? series(*chain, *sum) : (chain ? *chain : *sum);
  return {sys.a(), sys.b(), bank.gain * sys.c(), bank.gain * sys.d()};
}

ContinuousStateSpace from_second_order_bank(std::span<const double> gains,
                                            std::span<const double> dampings,
                                            std::span<const double> frequencies,
                                            std::span<const double> first_order_poles,
                                            double overall_gain) {
  if (gains.size() != dampings.size() || gains.size() != frequencies.size()) {
    throw DimensionError(fmt::format("section lists differ in length: gains {}, dampings {}, frequencies {}",
                                     gains.size(), dampings.size(), frequencies.size()));
  }
  SectionBank bank;
  bank.gain = overall_gain;
  bank.first_order_poles.assign(first_order_poles.begin(), first_order_poles.end());
  for (std::size_t i = 0; i < gains.size(); ++i) {
    bank.sections.push_back({gains[i], dampings[i], frequencies[i]});
  }
  return from_second_order_bank(bank);
}

ContinuousStateSpace series(const ContinuousStateSpace& first, const ContinuousStateSpace& second) {
  if (first.outputs() != second.inputs()) {
    throw DimensionError(fmt::format("series: first has {} outputs, second has {} inputs",
                                     first.outputs(), second.inputs()));
  }
  const auto n1 = first.states();
  const auto n2 = second.states();
  Matrix a = Matrix::Zero(n1 + n2, n1 + n2);
  a.topLeftCorner(n1, n1) = first.a();
  a.bottomLeftCorner(n2, n1) = second.b() * first.c();
  a.bottomRightCorner(n2, n2) = second.a();
  Matrix b(n1 + n2, first.inputs());
  b << first.b(), second.b() * first.d();
  Matrix c(second.outputs(), n1 + n2);
  c << second.d() * first.c(), second.c();
  return {a, b, c, second.d() * first.d()};
}

ContinuousStateSpace parallel(const ContinuousStateSpace& lhs, const ContinuousStateSpace& rhs) {
  if (lhs.inputs() != rhs.inputs() || lhs.outputs() != rhs.outputs()) {
    throw DimensionError(fmt::format("parallel: {}x{} and {}x{} systems", lhs.outputs(), lhs.inputs(),
                                     rhs.outputs(), rhs.inputs()));
  }
  const auto n1 = lhs.states();
  const auto n2 = rhs.states();
  Matrix a = Matrix::Zero(n1 + n2, n1 + n2);
  a.topLeftCorner(n1, n1) = lhs.a();
  a.bottomRightCorner(n2, n2) = rhs.a();
  Matrix b(n1 + n2, lhs.inputs());
  b << lhs.b(), rhs.b();
  Matrix c(lhs.outputs(), n1 + n2);
  c << lhs.c(), rhs.c();
  return {a, b, c, lhs.d() + rhs.d()};
}

ContinuousStateSpace negate(const ContinuousStateSpace& sys) {
  return {sys.a(), sys.b(), -sys.c(), -sys.d()};
}

ContinuousStateSpace identity_system(Eigen::Index n) {
  return {Matrix(0, 0), Matrix(0, n), Matrix(n, 0), Matrix::Identity(n, n)};
}

Eigen::MatrixXcd freq_response(const ContinuousStateSpace& sys, double omega) {
  const auto n = sys.states();
  const Eigen::MatrixXcd d = sys.d().cast<std::complex<double>>();
  if (n == 0) return d;
  Eigen::MatrixXcd resolvent = -sys.a().cast<std::complex<double>>();
  resolvent.diagonal().array() += std::complex<double>(0.0, omega);
  const Eigen::MatrixXcd x = resolvent.partialPivLu().solve(sys.b().cast<std::complex<double>>());
  return sys.c().cast<std::complex<double>>() * x + d;
}

std::complex<double> freq_response_siso(const ContinuousStateSpace& sys, double omega) {
  if (!sys.is_siso()) throw ModelError("freq_response_siso requires a SISO system");
  return freq_response(sys, omega)(0, 0);
}

Matrix expm(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionError(fmt::format("expm needs a square matrix, got {}x{}", m.rows(), m.cols()));
  }
  if (m.rows() == 0) return m;
  return m.exp();
}

VanLoanResult vanloan(const ContinuousStateSpace& sys, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument(fmt::format("vanloan horizon must be positive, got {}", t));
  }
  const auto n = sys.states();
  const auto m = sys.inputs();
  const auto p = sys.outputs();
  const auto size = p + n + m;
  Matrix big = Matrix::Zero(size, size);
  big.block(0, p, p, n) = sys.c();
  big.block(p, p, n, n) = sys.a();
  big.block(p, p + n, n, m) = sys.b();
  const Matrix e = expm(big * t);
  return VanLoanResult{
      .phi = e.block(p, p, n, n),
      .gamma = e.block(p, p + n, n, m),
      .theta = e.block(0, p + n, p, m),
      .lambda = e.block(0, p, p, n),
  };
}

}  // namespace sdanc
