#pragma once

#include <complex>
#include <span>
#include <vector>

#include "sdanc/adaptive.hpp"
#include "sdanc/lti.hpp"

namespace sdanc {

/// Zero-order hold response (1 - e^{-j w h}) / (j w); equals h at w = 0.
std::complex<double> zoh_response(double omega, double h);

/// X_d(e^{j w h}) = sum_n x_d[n] e^{-j w n h} over a finite record.
std::complex<double> dtft(std::span<const double> x_d, double omega, double h);

/// Fourier transform of u = F H_h x_d:  F(jw) H0(jw) X_d(e^{jwh}).
std::complex<double> u_spectrum(const ContinuousStateSpace& F, std::complex<double> xd_spectrum, double h,
                                double omega);

/// Aliased energy spectrum of u on the Nyquist band.
///
///   S(jw) = (1/h) sum_{|n| <= n_alias} |u^(jw + 2 pi n j / h)|^2
///
/// sampled at the midpoints of a uniform grid over (-pi/h, pi/h).
struct SpectralBound {
  std::vector<double> omega;
  std::vector<double> S;
  double S_inf = 0.0;
  int n_alias = 0;
  double mu_max = 0.0;  // 2 / S_inf, +inf when S_inf == 0
  double h = 1.0;
};

/// Requires a strictly proper F so the alias sum converges. Throws ModelError
/// otherwise.
SpectralBound spectral_bound(const ContinuousStateSpace& F, std::span<const double> x_d, double h,
                             int grid_size = 4096, int n_alias = 64);

/// Relative change of S_inf when n_alias doubles.
double alias_truncation_change(const ContinuousStateSpace& F, std::span<const double> x_d, double h,
                               int grid_size, int n_alias);

/// Phi rebuilt from the spectrum,
///   Phi_kl = (h / 2 pi) int_{-pi/h}^{pi/h} S(jw) e^{j w (k-l) h} dw,
/// compared entrywise with a Wiener problem built from time-domain traces.
struct ParsevalReport {
  Matrix phi_spectral;
  double max_rel_deviation = 0.0;  // max |Phi - Phi_spectral| / max|Phi|
  double phi00_rel_deviation = 0.0;
};

ParsevalReport parseval_check(const WienerProblem& problem, const SpectralBound& bound, double h);

}  // namespace sdanc
