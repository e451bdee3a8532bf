#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sdanc/conditions.hpp"
#include "sdanc/hybrid_loop.hpp"
#include "sdanc/lti.hpp"

namespace sdanc {

/// Plant of SectionBank form. Section dampings default to the shared
/// `SimConfig::zeta` when `dampings` is empty.
struct PlantSpec {
  double gain = 1.0;
  std::vector<double> first_order_poles;
  std::vector<double> frequencies;
  std::vector<double> section_gains;
  std::vector<double> dampings;
};

/// Damped-sinusoid bank or an external waveform file (one sample per line,
/// spacing `waveform_dt`). Phases are drawn from `seed` when not given.
struct NoiseSpec {
  std::vector<double> amplitudes;
  std::vector<double> frequencies;
  std::vector<double> decay_rates;
  std::optional<std::vector<double>> phases;
  std::uint64_t seed = 1;
  std::string waveform_path;
  double waveform_dt = 0.0;
};

struct SimConfig {
  PlantSpec secondary;  // F(s)
  PlantSpec primary;    // P(s)
  double zeta = 0.1;

  double h = 1.0;
  int L = 8;
  int N = 8;
  double mu = 0.1;
  double T = 100.0;
  /// Simulation grid subdivisions per period; 0 picks a default
  /// (see effective_trace_ratio).
  int trace_ratio = 0;
  std::vector<double> alpha0;
  double divergence_cutoff = 1e9;

  NoiseSpec noise;

  std::vector<double> sweep_mu;
  double threshold = 10.0;
  int refine_steps = 10;
  int workers = 0;  // 0 = hardware concurrency

  LmsCheckOptions check;

  double bode_omega_min = 0.1;
  double bode_omega_max = 100.0;
  int bode_points = 400;

  std::string output_dir = "out";
};

/// Defaults: the two resonant plants with peaks at 1..4 rad/s (F) and
/// 1.2..4.8 rad/s (P), h = 1, L = 8, N = 8, mu = 0.1, T = 100, and six
/// damped sinusoids straddling the Nyquist frequency.
SimConfig default_config();

/// Parses `key = value` lines (dotted keys, `#` comments, comma-separated
/// lists) on top of `base`. Throws ConfigError naming the key on failure.
SimConfig parse_config(std::string_view text, SimConfig base = default_config());
SimConfig load_config(const std::filesystem::path& path, SimConfig base = default_config());

/// Throws ConfigError for the first invalid field.
void validate(const SimConfig& config);

ContinuousStateSpace build_plant(const PlantSpec& spec, double zeta);
ContinuousStateSpace secondary_path(const SimConfig& config);
ContinuousStateSpace primary_path(const SimConfig& config);

/// Phases in [0, 2 pi) from a 64-bit Mersenne twister; identical on every
/// platform for a given seed.
std::vector<double> random_phases(std::uint64_t seed, std::size_t count);

NoiseSource make_noise(const SimConfig& config);

/// Simulation grid ratio: `trace_ratio` when set, else h / waveform_dt for an
/// external waveform, else lcm(L, 8).
int effective_trace_ratio(const SimConfig& config);

std::vector<double> parse_list(std::string_view key, std::string_view value);

}  // namespace sdanc
