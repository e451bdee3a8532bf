#include "sdanc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include <fmt/core.h>

#include "sdanc/adaptive.hpp"
#include "sdanc/errors.hpp"
#include "sdanc/hybrid_loop.hpp"

namespace sdanc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// x(nh) for n = 0..count-1, independent of the closed loop.
std::vector<double> reference_record(const NoiseSource& noise, double h, long count) {
  std::vector<double> out(static_cast<std::size_t>(count), 0.0);
  if (const auto* sig = std::get_if<AutonomousSignal>(&noise)) {
    const Matrix step = expm(sig->A * h);
    Vector g = sig->x0;
    for (auto& v : out) {
      v = sig->C.dot(g);
      g = step * g;
    }
    return out;
  }
  const auto& wave = std::get<SampledWaveform>(noise);
  const auto stride = static_cast<std::size_t>(std::llround(h / wave.dt));
  for (std::size_t n = 0; n < out.size(); ++n) {
    const auto i = n * stride;
    out[n] = i < wave.samples.size() ? wave.samples[i] : 0.0;
  }
  return out;
}

long interval_count(const SimConfig& config) { return std::lround(config.T / config.h); }

template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  unsigned threads = workers > 0 ? static_cast<unsigned>(workers) : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(std::max<std::size_t>(count, 1)));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next++; i < count; i = next++) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct StabilityEdge {
  double mu_star = 0.0;
  bool crossed = false;
};

StabilityEdge find_edge(const SimConfig& config, int L, int trace_ratio, const std::vector<double>& mus,
                        const std::vector<double>& norms, double threshold, int refine_steps) {
  const auto first_bad = std::find_if(norms.begin(), norms.end(), [&](double v) { return !(v < threshold); });
  if (first_bad == norms.end()) return {mus.back(), false};
  const auto i = static_cast<std::size_t>(first_bad - norms.begin());
  double lo = i == 0 ? 0.0 : mus[i - 1];
  double hi = mus[i];
  for (int s = 0; s < refine_steps; ++s) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= 0.0) break;
    const double norm = run_single(config, L, mid, trace_ratio).e_norm;
    (norm < threshold ? lo : hi) = mid;
  }
  return {lo, true};
}

}  // namespace

Matrix coarsen_blocks(const Matrix& blocks, int L) {
  const auto m = blocks.cols();
  if (L < 1 || m % L != 0) {
    throw DimensionError(fmt::format("cannot coarsen {} subintervals to ratio {}", m, L));
  }
  const auto group = m / L;
  Matrix out = Matrix::Zero(blocks.rows(), L);
  for (int l = 0; l < L; ++l) out.col(l) = blocks.middleCols(l * group, group).rowwise().sum();
  return out;
}

Matrix filtered_blocks(const LiftedDiscretization& lift, std::span<const double> x_d) {
  Matrix out(static_cast<Eigen::Index>(x_d.size()), lift.ratio());
  Vector eta = Vector::Zero(lift.states());
  for (std::size_t n = 0; n < x_d.size(); ++n) {
    auto [next, u] = fh_step(lift, eta, x_d[n]);
    out.row(static_cast<Eigen::Index>(n)) = u.transpose();
    eta = std::move(next);
  }
  return out;
}

RunResult run_single(const SimConfig& config, std::optional<int> L, std::optional<double> mu,
                     std::optional<int> trace_ratio) {
  validate(config);
  const auto started = std::chrono::steady_clock::now();
  RunResult r;
  r.L = L.value_or(config.L);
  r.mu = mu.value_or(config.mu);
  const int m = trace_ratio.value_or(effective_trace_ratio(config));
  if (r.L < 1) throw ConfigError("sim.L", fmt::format("must be >= 1, got {}", r.L));
  if (!(r.mu >= 0.0) || !std::isfinite(r.mu)) throw ConfigError("sim.mu", fmt::format("must be >= 0, got {}", r.mu));
  if (m < 1 || m % r.L != 0) {
    throw ConfigError("sim.trace_ratio", fmt::format("{} is not a multiple of L = {}", m, r.L));
  }

  const auto F = secondary_path(config);
  const auto P = primary_path(config);
  const auto noise = make_noise(config);
  const FastSampler grid(config.h, m);
  HybridLoop loop(P, F, noise, grid);
  const auto lift = discretize_lifted(F, config.h, r.L);
  Vector alpha0 = Vector::Zero(config.N);
  if (!config.alpha0.empty()) alpha0 = Eigen::Map<const Vector>(config.alpha0.data(), config.N);
  SdfxLms lms(lift, r.mu, alpha0);

  const long intervals = interval_count(config);
  auto& tr = r.trace;
  tr.grid = grid;
  const auto fast = static_cast<std::size_t>(intervals * m);
  for (auto* v : {&tr.t, &tr.x, &tr.d, &tr.w, &tr.e, &tr.u}) v->reserve(fast);
  tr.alpha = Matrix::Zero(intervals, config.N);
  tr.u_blocks = Matrix::Zero(intervals, m);
  tr.d_samples = Matrix::Zero(intervals, m);

  for (long n = 0; n < intervals; ++n) {
    const FirFilter taps = lms.next_taps();
    const HybridStep step = loop.step(taps);
    tr.xd.push_back(step.x_d);
    tr.yd.push_back(step.y_d);
    tr.alpha.row(n) = taps.taps().transpose();
    tr.u_blocks.row(n) = step.u_blocks.transpose();
    tr.d_samples.row(n) = step.d.transpose();
    for (int l = 0; l < m; ++l) {
      tr.t.push_back(grid.instant(n, l));
      tr.x.push_back(step.x(l));
      tr.d.push_back(step.d(l));
      tr.w.push_back(step.w(l));
      tr.e.push_back(step.e(l));
      tr.u.push_back(step.u(l));
    }
    const bool blew_up = !step.e.allFinite() || step.e.cwiseAbs().maxCoeff() > config.divergence_cutoff;
    if (blew_up) {
      r.diverged = true;
      tr.alpha.conservativeResize(n + 1, Eigen::NoChange);
      tr.u_blocks.conservativeResize(n + 1, Eigen::NoChange);
      tr.d_samples.conservativeResize(n + 1, Eigen::NoChange);
      break;
    }
    lms.observe(step.x_d, decimate_block(step.e, r.L));
    tr.delta_norm.push_back(lms.state().delta.norm());
  }

  const double dt = grid.sub_period();
  r.e_norm = r.diverged ? kInf : l2_norm(tr.e, dt);
  r.d_norm = l2_norm(tr.d, dt);
  r.w_norm = r.diverged ? kInf : l2_norm(tr.w, dt);
  r.final_alpha = lms.state().alpha;

  if (r.mu > 0.0) {
    const auto xd = reference_record(noise, config.h, intervals);
    r.conditions = check_lms_conditions(filtered_blocks(lift, xd), r.mu, config.N, config.h, config.check);
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return r;
}

ComparisonReport run_comparison(const SimConfig& config) {
  validate(config);
  const int m = effective_trace_ratio(config);
  ComparisonReport c;
  c.proposed = run_single(config, config.L, config.mu, m);
  c.conventional = run_single(config, 1, config.mu, m);
  const double num = c.proposed.e_norm;
  const double den = c.conventional.e_norm;
  if (num == den) {
    c.ratio = 1.0;
  } else {
    c.ratio = num / den;
  }
  return c;
}

SweepReport run_mu_sweep(const SimConfig& config, std::vector<double> mus) {
  validate(config);
  if (mus.empty()) throw ConfigError("sweep.mu", "step-size list is empty");
  for (double v : mus) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("sweep.mu", fmt::format("{} must be >= 0", v));
  }
  std::sort(mus.begin(), mus.end());
  mus.erase(std::unique(mus.begin(), mus.end()), mus.end());

  const int m = effective_trace_ratio(config);
  const std::size_t count = mus.size();
  std::vector<RunResult> runs(2 * count);
  parallel_for(2 * count, config.workers, [&](std::size_t i) {
    const bool proposed = i % 2 == 1;
    RunResult r = run_single(config, proposed ? config.L : 1, mus[i / 2], m);
    r.trace = SimTrace{};
    runs[i] = std::move(r);
  });

  SweepReport report;
  report.threshold = config.threshold;
  std::vector<double> conv(count), prop(count);
  for (std::size_t i = 0; i < count; ++i) {
    SweepRow row;
    row.mu = mus[i];
    row.norm_conventional = runs[2 * i].e_norm;
    row.norm_proposed = runs[2 * i + 1].e_norm;
    row.conditions_conventional = runs[2 * i].conditions;
    row.conditions_proposed = runs[2 * i + 1].conditions;
    conv[i] = row.norm_conventional;
    prop[i] = row.norm_proposed;
    if (row.mu > 0.0) {
      if (!(row.norm_conventional < config.threshold) && row.conditions_conventional.step_size_ok) {
        report.inconsistent_rows.push_back(fmt::format("mu={} conventional", row.mu));
      }
      if (!(row.norm_proposed < config.threshold) && row.conditions_proposed.step_size_ok) {
        report.inconsistent_rows.push_back(fmt::format("mu={} proposed", row.mu));
      }
    }
    report.rows.push_back(std::move(row));
  }

  StabilityEdge edges[2];
  parallel_for(2, config.workers, [&](std::size_t i) {
    edges[i] = i == 0 ? find_edge(config, 1, m, mus, conv, config.threshold, config.refine_steps)
                      : find_edge(config, config.L, m, mus, prop, config.threshold, config.refine_steps);
  });
  report.mu_star_conventional = edges[0].mu_star;
  report.crossed_conventional = edges[0].crossed;
  report.mu_star_proposed = edges[1].mu_star;
  report.crossed_proposed = edges[1].crossed;
  report.width_ratio = report.mu_star_conventional > 0.0 ? report.mu_star_proposed / report.mu_star_conventional
                                                         : kInf;
  return report;
}

std::vector<BodeRow> emit_bode(const SimConfig& config) {
  validate(config);
  const auto F = secondary_path(config);
  const auto P = primary_path(config);
  std::vector<BodeRow> rows;
  const double lo = std::log10(config.bode_omega_min);
  const double hi = std::log10(config.bode_omega_max);
  for (int i = 0; i < config.bode_points; ++i) {
    const double w = std::pow(10.0, lo + (hi - lo) * i / (config.bode_points - 1));
    rows.push_back({w, std::abs(freq_response_siso(F, w)), std::abs(freq_response_siso(P, w))});
  }
  return rows;
}

}  // namespace sdanc
