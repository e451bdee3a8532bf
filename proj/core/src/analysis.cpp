#include "sdanc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/core.h>

#include "sdanc/errors.hpp"

namespace sdanc {

namespace {

using cd = std::complex<double>;

// Evaluates a SISO transfer function many times. Uses the modal form
// sum_i r_i / (s - p_i) when A is well diagonalizable, the resolvent
// solve otherwise.
class TransferEvaluator {
 public:
  explicit TransferEvaluator(const ContinuousStateSpace& sys) : sys_(sys) {
    const auto n = sys.states();
    if (n == 0) return;
    Eigen::EigenSolver<Matrix> eig(sys.a());
    if (eig.info() != Eigen::Success) return;
    const Eigen::MatrixXcd v = eig.eigenvectors();
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(v);
    if (!lu.isInvertible()) return;
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(v);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= 0.0 || sv(0) / sv(sv.size() - 1) > 1e8) return;
    const Eigen::VectorXcd left = sys.c().row(0).cast<cd>() * v;
    const Eigen::VectorXcd right = lu.solve(sys.b().col(0).cast<cd>());
    poles_ = eig.eigenvalues();
    residues_ = left.cwiseProduct(right);
    // Spot check against the resolvent form.
    for (double w : {0.0, 1.0, 10.0}) {
      const cd direct = freq_response_siso(sys, w);
      if (std::abs(modal(w) - direct) > 1e-9 * std::max(1.0, std::abs(direct))) {
        poles_.resize(0);
        residues_.resize(0);
        return;
      }
    }
  }

  cd operator()(double omega) const {
    if (poles_.size() > 0) return modal(omega);
    return freq_response_siso(sys_, omega);
  }

 private:
  cd modal(double omega) const {
    const cd s(0.0, omega);
    cd acc = sys_.d()(0, 0);
    for (Eigen::Index i = 0; i < poles_.size(); ++i) acc += residues_(i) / (s - poles_(i));
    return acc;
  }

  const ContinuousStateSpace& sys_;
  Eigen::VectorXcd poles_;
  Eigen::VectorXcd residues_;
};

void require_spectral_inputs(const ContinuousStateSpace& F, double h) {
  if (!F.is_siso()) throw ModelError("spectral bound needs a SISO secondary path");
  if (!F.is_strictly_proper()) {
    throw ModelError("spectral bound needs a strictly proper F: the alias sum does not decay otherwise");
  }
  if (!(h > 0.0)) throw std::invalid_argument("sampling period must be positive");
}

}  // namespace

cd zoh_response(double omega, double h) {
  // h e^{-j w h / 2} sinc(w h / 2), finite at w = 0.
  const double half = 0.5 * omega * h;
  const double sinc = std::abs(half) < 1e-8 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
  return h * sinc * std::polar(1.0, -half);
}

cd dtft(std::span<const double> x_d, double omega, double h) {
  cd acc = 0.0;
  const cd step = std::polar(1.0, -omega * h);
  // Horner from the tail keeps the rotation exact at each power.
  for (auto it = x_d.rbegin(); it != x_d.rend(); ++it) acc = acc * step + *it;
  return acc;
}

cd u_spectrum(const ContinuousStateSpace& F, cd xd_spectrum, double h, double omega) {
  return freq_response_siso(F, omega) * zoh_response(omega, h) * xd_spectrum;
}

SpectralBound spectral_bound(const ContinuousStateSpace& F, std::span<const double> x_d, double h,
                             int grid_size, int n_alias) {
  require_spectral_inputs(F, h);
  if (grid_size < 1) throw std::invalid_argument("grid size must be positive");
  if (n_alias < 0) throw std::invalid_argument("alias count must be >= 0");

  const TransferEvaluator transfer(F);
  const double period = 2.0 * std::numbers::pi / h;
  SpectralBound out;
  out.h = h;
  out.n_alias = n_alias;
  out.omega.resize(static_cast<std::size_t>(grid_size));
  out.S.resize(static_cast<std::size_t>(grid_size));
  for (int i = 0; i < grid_size; ++i) {
    const double w = -std::numbers::pi / h + (i + 0.5) * period / grid_size;
    const double xd_energy = std::norm(dtft(x_d, w, h));
    double alias_sum = 0.0;
    // X_d is 2 pi / h periodic, so it factors out of the alias sum.
    for (int n = -n_alias; n <= n_alias; ++n) {
      const double wn = w + n * period;
      alias_sum += std::norm(transfer(wn) * zoh_response(wn, h));
    }
    out.omega[static_cast<std::size_t>(i)] = w;
    out.S[static_cast<std::size_t>(i)] = xd_energy * alias_sum / h;
  }
  out.S_inf = *std::max_element(out.S.begin(), out.S.end());
  out.mu_max = out.S_inf > 0.0 ? 2.0 / out.S_inf : std::numeric_limits<double>::infinity();
  return out;
}

double alias_truncation_change(const ContinuousStateSpace& F, std::span<const double> x_d, double h,
                               int grid_size, int n_alias) {
  const double coarse = spectral_bound(F, x_d, h, grid_size, n_alias).S_inf;
  const double fine = spectral_bound(F, x_d, h, grid_size, 2 * n_alias).S_inf;
  if (fine == 0.0) return 0.0;
  return std::abs(fine - coarse) / fine;
}

ParsevalReport parseval_check(const WienerProblem& problem, const SpectralBound& bound, double h) {
  if (bound.S.empty()) throw std::invalid_argument("empty spectral grid");
  const auto n = problem.taps();
  const double grid = static_cast<double>(bound.S.size());
  ParsevalReport report;
  report.phi_spectral = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index l = 0; l < n; ++l) {
      double acc = 0.0;
      for (std::size_t i = 0; i < bound.S.size(); ++i) {
        acc += bound.S[i] * std::cos(bound.omega[i] * static_cast<double>(k - l) * h);
      }
      report.phi_spectral(k, l) = acc / grid;
    }
  }
  const double scale = problem.phi.cwiseAbs().maxCoeff();
  if (scale > 0.0) {
    report.max_rel_deviation = (problem.phi - report.phi_spectral).cwiseAbs().maxCoeff() / scale;
  } else {
    report.max_rel_deviation = report.phi_spectral.cwiseAbs().maxCoeff();
  }
  const double p00 = problem.phi(0, 0);
  report.phi00_rel_deviation =
      p00 > 0.0 ? std::abs(p00 - report.phi_spectral(0, 0)) / p00 : std::abs(report.phi_spectral(0, 0));
  return report;
}

}  // namespace sdanc
