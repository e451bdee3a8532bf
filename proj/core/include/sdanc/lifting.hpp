#pragma once

#include <span>

#include "sdanc/lti.hpp"

namespace sdanc {

/// Fast sampling grid: period h split into L subintervals, instants
/// n h + l h / L for l = 0..L-1.
struct FastSampler {
  double h = 1.0;
  int L = 1;

  FastSampler() = default;
  FastSampler(double period, int ratio);

  double sub_period() const noexcept { return h / L; }
  double instant(long n, int l) const noexcept { return n * h + l * sub_period(); }
};

/// Lifted discretization of F H_h with fast-sampled output blocks.
///
///   eta[n+1] = Ah eta[n] + Bh x[n]
///   U[n]     = Ch eta[n] + Dh x[n]
///
/// Row l of Ch / Dh integrates the free / forced response of F over
/// [l h/L, (l+1) h/L), so U[n] holds the subinterval integrals of the plant
/// output driven by the held input.
struct LiftedDiscretization {
  Matrix Ah;
  Vector Bh;
  Matrix Ch;
  Vector Dh;
  FastSampler grid;

  Eigen::Index states() const noexcept { return Ah.rows(); }
  int ratio() const noexcept { return grid.L; }
};

/// Requires a SISO, strictly proper plant. The blocks are differences of
/// cumulative Van Loan integrals evaluated at the subinterval endpoints.
LiftedDiscretization discretize_lifted(const ContinuousStateSpace& sys, FastSampler grid);
LiftedDiscretization discretize_lifted(const ContinuousStateSpace& sys, double h, int L);

struct FhStepResult {
  Vector eta;
  Vector U;
};

/// One step of the F_h digital filter.
FhStepResult fh_step(const LiftedDiscretization& lift, const Vector& eta, double x_d);

/// sqrt(sum_i e_i^2 * dt): the piecewise-constant L2 rule on a grid of
/// spacing dt with e_i taken at the left endpoints.
double l2_norm(std::span<const double> samples, double dt);

}  // namespace sdanc
