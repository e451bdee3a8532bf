#pragma once

#include <deque>
#include <variant>
#include <vector>

#include "sdanc/fir.hpp"
#include "sdanc/lifting.hpp"
#include "sdanc/lti.hpp"

namespace sdanc {

/// Noise produced by an autonomous LTI system: x(t) = C e^{A t} x0.
struct AutonomousSignal {
  Matrix A;
  RowVector C;
  Vector x0;
};

/// Externally supplied samples, held constant over [i dt, (i+1) dt).
/// Zero after the last sample.
struct SampledWaveform {
  std::vector<double> samples;
  double dt = 0.0;
};

using NoiseSource = std::variant<AutonomousSignal, SampledWaveform>;

/// Sum of damped sinusoids  sum_i a_i e^{-s_i t} sin(w_i t + phi_i)
/// as a block-diagonal autonomous system (two states per term).
AutonomousSignal damped_sinusoid_bank(std::span<const double> amplitudes,
                                      std::span<const double> frequencies,
                                      std::span<const double> decay_rates,
                                      std::span<const double> phases);

/// Value of the noise at time t (direct evaluation, not recursive).
double evaluate(const NoiseSource& noise, double t);

struct HybridLoopState {
  Vector zeta_p;     // primary path
  Vector zeta_f;     // secondary path, driven by the held filter output
  Vector gen_state;  // noise generator (empty for sampled waveforms)
  Vector zeta_u;     // F driven by the held reference, u = F H_h x_d
  std::deque<double> xd_history;  // newest first
  long n = 0;
};

/// Everything observed over one sampling interval [n h, (n+1) h).
/// Fast vectors hold values at the left endpoints of the grid subintervals.
struct HybridStep {
  double x_d = 0.0;
  double y_d = 0.0;
  Vector x;
  Vector d;
  Vector w;
  Vector e;
  Vector u;
  Vector u_blocks;  // subinterval integrals of u
};

/// Exact simulation of the loop
///   x -> P -> d,   x -> S_h -> K -> H_h -> F -> w,   e = d - w
/// on a fast grid. Each subinterval is advanced with matrix exponentials, so
/// there is no integration error beyond rounding.
class HybridLoop {
 public:
  HybridLoop(const ContinuousStateSpace& primary, const ContinuousStateSpace& secondary,
             NoiseSource noise, FastSampler grid);

  /// Advance one sampling period with filter taps `taps`.
  HybridStep step(const FirFilter& taps);

  const HybridLoopState& state() const noexcept { return state_; }
  const FastSampler& grid() const noexcept { return grid_; }
  Eigen::Index secondary_states() const noexcept { return phi_f_.rows(); }

 private:
  double reference_sample() const;

  FastSampler grid_;
  NoiseSource noise_;
  bool autonomous_ = true;
  RowVector c_p_;
  RowVector c_f_;
  RowVector c_g_;
  Matrix joint_phi_;  // [generator; primary] over one subinterval
  Matrix phi_p_;      // primary alone (sampled waveform case)
  Vector gamma_p_;
  Matrix phi_f_;
  Vector gamma_f_;
  RowVector lambda_f_;
  double theta_f_ = 0.0;
  HybridLoopState state_;
};

/// Entries of a fast vector at the instants of a coarser ratio L (stride M/L).
Vector decimate_block(const Vector& fast, int L);

}  // namespace sdanc
