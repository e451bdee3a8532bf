#include "sdanc/hybrid_loop.hpp"

#include <cmath>

#include <fmt/core.h>

#include "sdanc/errors.hpp"

namespace sdanc {

FirFilter::FirFilter(Eigen::Index n) : taps_(Eigen::VectorXd::Zero(n)) {
  if (n < 1) throw DimensionError(fmt::format("FIR filter needs at least one tap, got {}", n));
}

FirFilter::FirFilter(Eigen::VectorXd taps) : taps_(std::move(taps)) {
  if (taps_.size() < 1) throw DimensionError("FIR filter needs at least one tap");
  if (!taps_.allFinite()) throw std::invalid_argument("FIR taps must be finite");
}

double FirFilter::apply(std::span<const double> history) const {
  double y = 0.0;
  const auto n = std::min<Eigen::Index>(size(), static_cast<Eigen::Index>(history.size()));
  for (Eigen::Index k = 0; k < n; ++k) y += taps_(k) * history[k];
  return y;
}

AutonomousSignal damped_sinusoid_bank(std::span<const double> amplitudes,
                                      std::span<const double> frequencies,
                                      std::span<const double> decay_rates,
                                      std::span<const double> phases) {
  const auto count = amplitudes.size();
  if (frequencies.size() != count || decay_rates.size() != count || phases.size() != count) {
    throw DimensionError(fmt::format(
        "damped sinusoid lists differ in length: {} amplitudes, {} frequencies, {} decay rates, {} phases",
        count, frequencies.size(), decay_rates.size(), phases.size()));
  }
  const auto n = static_cast<Eigen::Index>(2 * count);
  AutonomousSignal sig{Matrix::Zero(n, n), RowVector::Zero(n), Vector::Zero(n)};
  for (std::size_t i = 0; i < count; ++i) {
    const double sigma = decay_rates[i];
    const double w = frequencies[i];
    if (!(sigma > 0.0)) {
      throw ModelError(fmt::format("decay rate {} must be positive for a square-integrable signal", sigma));
    }
    if (!(w >= 0.0) || !std::isfinite(w)) throw ModelError(fmt::format("frequency {} must be >= 0", w));
    const auto j = static_cast<Eigen::Index>(2 * i);
    sig.A(j, j) = -sigma;
    sig.A(j, j + 1) = w;
    sig.A(j + 1, j) = -w;
    sig.A(j + 1, j + 1) = -sigma;
    // z(t) = e^{-sigma t} [cos wt, -sin wt]
    sig.x0(j) = 1.0;
    sig.C(j) = amplitudes[i] * std::sin(phases[i]);
    sig.C(j + 1) = -amplitudes[i] * std::cos(phases[i]);
  }
  return sig;
}

double evaluate(const NoiseSource& noise, double t) {
  if (const auto* sig = std::get_if<AutonomousSignal>(&noise)) {
    if (t < 0.0) return 0.0;
    return (sig->C * expm(sig->A * t) * sig->x0)(0);
  }
  const auto& wave = std::get<SampledWaveform>(noise);
  if (t < 0.0) return 0.0;
  const auto i = static_cast<std::size_t>(std::floor(t / wave.dt + 1e-9));
  return i < wave.samples.size() ? wave.samples[i] : 0.0;
}

HybridLoop::HybridLoop(const ContinuousStateSpace& primary, const ContinuousStateSpace& secondary,
                       NoiseSource noise, FastSampler grid)
    : grid_(grid.h, grid.L), noise_(std::move(noise)) {
  for (const auto* sys : {&primary, &secondary}) {
    if (!sys->is_siso() || !sys->is_strictly_proper()) {
      throw ModelError("primary and secondary paths must be SISO and strictly proper");
    }
    if (!sys->is_stable()) throw ModelError("primary and secondary paths must be stable");
  }
  const double tau = grid_.sub_period();
  c_p_ = primary.c().row(0);
  c_f_ = secondary.c().row(0);

  const auto vf = vanloan(secondary, tau);
  phi_f_ = vf.phi;
  gamma_f_ = vf.gamma.col(0);
  lambda_f_ = vf.lambda.row(0);
  theta_f_ = vf.theta(0, 0);

  const auto np = primary.states();
  if (const auto* sig = std::get_if<AutonomousSignal>(&noise_)) {
    const auto ng = sig->A.rows();
    if (sig->A.cols() != ng || sig->C.size() != ng || sig->x0.size() != ng) {
      throw DimensionError("autonomous noise generator has inconsistent dimensions");
    }
    Matrix joint = Matrix::Zero(ng + np, ng + np);
    joint.topLeftCorner(ng, ng) = sig->A;
    joint.bottomLeftCorner(np, ng) = primary.b() * sig->C;
    joint.bottomRightCorner(np, np) = primary.a();
    joint_phi_ = expm(joint * tau);
    c_g_ = sig->C;
    state_.gen_state = sig->x0;
  } else {
    const auto& wave = std::get<SampledWaveform>(noise_);
    if (std::abs(wave.dt - tau) > 1e-9 * tau) {
      throw DimensionError(fmt::format("waveform spacing {} must equal the fast grid spacing {}", wave.dt, tau));
    }
    for (double v : wave.samples) {
      if (!std::isfinite(v)) throw ModelError("waveform contains non-finite samples");
    }
    autonomous_ = false;
    const auto vp = vanloan(primary, tau);
    phi_p_ = vp.phi;
    gamma_p_ = vp.gamma.col(0);
    state_.gen_state = Vector(0);
  }
  state_.zeta_p = Vector::Zero(np);
  state_.zeta_f = Vector::Zero(secondary.states());
  state_.zeta_u = Vector::Zero(secondary.states());
}

double HybridLoop::reference_sample() const {
  if (autonomous_) return c_g_.dot(state_.gen_state);
  const auto& wave = std::get<SampledWaveform>(noise_);
  const auto i = static_cast<std::size_t>(state_.n) * static_cast<std::size_t>(grid_.L);
  return i < wave.samples.size() ? wave.samples[i] : 0.0;
}

HybridStep HybridLoop::step(const FirFilter& taps) {
  const int m = grid_.L;
  HybridStep out;
  out.x_d = reference_sample();

  state_.xd_history.push_front(out.x_d);
  while (static_cast<Eigen::Index>(state_.xd_history.size()) > taps.size()) state_.xd_history.pop_back();
  double y = 0.0;
  for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(state_.xd_history.size()); ++k) {
    y += taps[k] * state_.xd_history[static_cast<std::size_t>(k)];
  }
  out.y_d = y;

  out.x.resize(m);
  out.d.resize(m);
  out.w.resize(m);
  out.e.resize(m);
  out.u.resize(m);
  out.u_blocks.resize(m);

  const auto ng = state_.gen_state.size();
  const auto np = state_.zeta_p.size();
  const SampledWaveform* wave = autonomous_ ? nullptr : &std::get<SampledWaveform>(noise_);
  Vector joint(ng + np);
  for (int l = 0; l < m; ++l) {
    double x_now = 0.0;
    if (autonomous_) {
      x_now = c_g_.dot(state_.gen_state);
    } else {
      const auto i = static_cast<std::size_t>(state_.n) * static_cast<std::size_t>(m) + static_cast<std::size_t>(l);
      x_now = i < wave->samples.size() ? wave->samples[i] : 0.0;
    }
    out.x(l) = x_now;
    out.d(l) = c_p_.dot(state_.zeta_p);
    out.w(l) = c_f_.dot(state_.zeta_f);
    out.e(l) = out.d(l) - out.w(l);
    out.u(l) = c_f_.dot(state_.zeta_u);
    out.u_blocks(l) = lambda_f_.dot(state_.zeta_u) + theta_f_ * out.x_d;

    if (autonomous_) {
      joint << state_.gen_state, state_.zeta_p;
      joint = joint_phi_ * joint;
      state_.gen_state = joint.head(ng);
      state_.zeta_p = joint.tail(np);
    } else {
      state_.zeta_p = phi_p_ * state_.zeta_p + gamma_p_ * x_now;
    }
    state_.zeta_f = phi_f_ * state_.zeta_f + gamma_f_ * out.y_d;
    state_.zeta_u = phi_f_ * state_.zeta_u + gamma_f_ * out.x_d;
  }
  ++state_.n;
  return out;
}

Vector decimate_block(const Vector& fast, int L) {
  const auto m = fast.size();
  if (L < 1 || m % L != 0) {
    throw DimensionError(fmt::format("cannot take ratio-{} samples from a block of {}", L, m));
  }
  const auto stride = m / L;
  Vector out(L);
  for (int l = 0; l < L; ++l) out(l) = fast(l * stride);
  return out;
}

}  // namespace sdanc
