#include "sdanc/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include <fmt/core.h>

#include "sdanc/errors.hpp"

namespace sdanc {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError(std::string(key), fmt::format("'{}' is not a number", text));
  }
  return value;
}

long long parse_integer(std::string_view key, std::string_view text) {
  text = trim(text);
  long long value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError(std::string(key), fmt::format("'{}' is not an integer", text));
  }
  return value;
}

int parse_int(std::string_view key, std::string_view text) {
  const auto v = parse_integer(key, text);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError(std::string(key), "integer out of range");
  }
  return static_cast<int>(v);
}

using Setter = std::function<void(SimConfig&, std::string_view key, std::string_view value)>;

void add_plant_keys(std::map<std::string, Setter, std::less<>>& table, const std::string& prefix,
                    PlantSpec SimConfig::*member) {
  table[prefix + ".gain"] = [member](SimConfig& c, auto k, auto v) { (c.*member).gain = parse_double(k, v); };
  table[prefix + ".first_order_poles"] = [member](SimConfig& c, auto k, auto v) {
    (c.*member).first_order_poles = parse_list(k, v);
  };
  table[prefix + ".frequencies"] = [member](SimConfig& c, auto k, auto v) {
    (c.*member).frequencies = parse_list(k, v);
  };
  table[prefix + ".section_gains"] = [member](SimConfig& c, auto k, auto v) {
    (c.*member).section_gains = parse_list(k, v);
  };
  table[prefix + ".dampings"] = [member](SimConfig& c, auto k, auto v) {
    (c.*member).dampings = parse_list(k, v);
  };
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const auto table = [] {
    std::map<std::string, Setter, std::less<>> t;
    t["sim.h"] = [](SimConfig& c, auto k, auto v) { c.h = parse_double(k, v); };
    t["sim.L"] = [](SimConfig& c, auto k, auto v) { c.L = parse_int(k, v); };
    t["sim.N"] = [](SimConfig& c, auto k, auto v) { c.N = parse_int(k, v); };
    t["sim.mu"] = [](SimConfig& c, auto k, auto v) { c.mu = parse_double(k, v); };
    t["sim.T"] = [](SimConfig& c, auto k, auto v) { c.T = parse_double(k, v); };
    t["sim.trace_ratio"] = [](SimConfig& c, auto k, auto v) { c.trace_ratio = parse_int(k, v); };
    t["sim.alpha0"] = [](SimConfig& c, auto k, auto v) { c.alpha0 = parse_list(k, v); };
    t["sim.divergence_cutoff"] = [](SimConfig& c, auto k, auto v) { c.divergence_cutoff = parse_double(k, v); };
    t["plant.zeta"] = [](SimConfig& c, auto k, auto v) { c.zeta = parse_double(k, v); };
    add_plant_keys(t, "plant.F", &SimConfig::secondary);
    add_plant_keys(t, "plant.P", &SimConfig::primary);
    t["noise.amplitudes"] = [](SimConfig& c, auto k, auto v) { c.noise.amplitudes = parse_list(k, v); };
    t["noise.frequencies"] = [](SimConfig& c, auto k, auto v) { c.noise.frequencies = parse_list(k, v); };
    t["noise.decay_rates"] = [](SimConfig& c, auto k, auto v) { c.noise.decay_rates = parse_list(k, v); };
    t["noise.phases"] = [](SimConfig& c, auto k, auto v) { c.noise.phases = parse_list(k, v); };
    t["noise.seed"] = [](SimConfig& c, auto k, auto v) {
      const auto s = parse_integer(k, v);
      if (s < 0) throw ConfigError(std::string(k), "seed must be non-negative");
      c.noise.seed = static_cast<std::uint64_t>(s);
    };
    t["noise.waveform"] = [](SimConfig& c, auto, auto v) { c.noise.waveform_path = std::string(trim(v)); };
    t["noise.waveform_dt"] = [](SimConfig& c, auto k, auto v) { c.noise.waveform_dt = parse_double(k, v); };
    t["sweep.mu"] = [](SimConfig& c, auto k, auto v) { c.sweep_mu = parse_list(k, v); };
    t["sweep.threshold"] = [](SimConfig& c, auto k, auto v) { c.threshold = parse_double(k, v); };
    t["sweep.refine_steps"] = [](SimConfig& c, auto k, auto v) { c.refine_steps = parse_int(k, v); };
    t["sweep.workers"] = [](SimConfig& c, auto k, auto v) { c.workers = parse_int(k, v); };
    t["check.epsilon"] = [](SimConfig& c, auto k, auto v) { c.check.epsilon = parse_double(k, v); };
    t["check.tail_fraction"] = [](SimConfig& c, auto k, auto v) { c.check.tail_fraction = parse_double(k, v); };
    t["bode.omega_min"] = [](SimConfig& c, auto k, auto v) { c.bode_omega_min = parse_double(k, v); };
    t["bode.omega_max"] = [](SimConfig& c, auto k, auto v) { c.bode_omega_max = parse_double(k, v); };
    t["bode.points"] = [](SimConfig& c, auto k, auto v) { c.bode_points = parse_int(k, v); };
    t["output.dir"] = [](SimConfig& c, auto, auto v) { c.output_dir = std::string(trim(v)); };
    return t;
  }();
  return table;
}

void require(bool ok, const char* field, const std::string& message) {
  if (!ok) throw ConfigError(field, message);
}

void validate_plant(const PlantSpec& p, const std::string& prefix, double zeta) {
  const auto fail = [&](const char* leaf, const std::string& msg) { throw ConfigError(prefix + "." + leaf, msg); };
  if (!std::isfinite(p.gain)) fail("gain", "must be finite");
  if (p.first_order_poles.empty() && p.frequencies.empty()) {
    fail("first_order_poles", "plant needs at least one pole or resonant section");
  }
  for (double v : p.first_order_poles) {
    if (!(v > 0.0)) fail("first_order_poles", fmt::format("pole {} is unstable (need > 0)", v));
  }
  for (double v : p.frequencies) {
    if (!(v > 0.0)) fail("frequencies", fmt::format("section frequency {} must be positive", v));
  }
  if (p.section_gains.size() != p.frequencies.size()) {
    fail("section_gains", fmt::format("has {} entries, frequencies has {}", p.section_gains.size(),
                                      p.frequencies.size()));
  }
  if (!p.dampings.empty() && p.dampings.size() != p.frequencies.size()) {
    fail("dampings", fmt::format("has {} entries, frequencies has {}", p.dampings.size(), p.frequencies.size()));
  }
  for (double v : p.dampings) {
    if (!(v > 0.0)) fail("dampings", fmt::format("damping {} is not stable (need > 0)", v));
  }
  if (p.dampings.empty() && !p.frequencies.empty() && !(zeta > 0.0)) {
    throw ConfigError("plant.zeta", fmt::format("damping {} is not stable (need > 0)", zeta));
  }
}

}  // namespace

std::vector<double> parse_list(std::string_view key, std::string_view value) {
  std::vector<double> out;
  value = trim(value);
  if (value.empty()) return out;
  std::size_t start = 0;
  while (start <= value.size()) {
    const auto comma = value.find(',', start);
    const auto item = value.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    out.push_back(parse_double(key, item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

SimConfig default_config() {
  SimConfig c;
  // F(s) = 1/(s+1.1) * (1/20) sum_{k=1..4} k^2 / (s^2 + 2 zeta k s + k^2)
  c.secondary.gain = 1.0 / 20.0;
  c.secondary.first_order_poles = {1.1};
  c.secondary.frequencies = {1.0, 2.0, 3.0, 4.0};
  c.secondary.section_gains = {1.0, 1.0, 1.0, 1.0};
  // P(s) = 1.2*1.3/((s+1.2)(s+1.3)) * (1/20) sum_k (1.2k)^2 / (s^2 + 2 zeta 1.2k s + (1.2k)^2)
  c.primary.gain = 1.2 * 1.3 / 20.0;
  c.primary.first_order_poles = {1.2, 1.3};
  c.primary.frequencies = {1.2, 2.4, 3.6, 4.8};
  c.primary.section_gains = {1.0, 1.0, 1.0, 1.0};

  c.noise.amplitudes = {1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  c.noise.frequencies = {0.5, 1.2, 2.0, 2.8, 3.6, 4.5};
  c.noise.decay_rates = {0.01, 0.01, 0.01, 0.01, 0.01, 0.01};

  for (int i = 1; i <= 20; ++i) c.sweep_mu.push_back(0.075 * i);
  return c;
}

SimConfig parse_config(std::string_view text, SimConfig base) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    auto line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    ++line_no;
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("line {}", line_no), fmt::format("expected 'key = value', got '{}'", line));
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto& table = setters();
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError(std::string(key), "unknown key");
    it->second(base, key, value);
  }
  return base;
}

SimConfig load_config(const std::filesystem::path& path, SimConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", fmt::format("cannot open '{}'", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), std::move(base));
}

void validate(const SimConfig& c) {
  require(c.h > 0.0 && std::isfinite(c.h), "sim.h", fmt::format("must be positive, got {}", c.h));
  require(c.L >= 1, "sim.L", fmt::format("must be >= 1, got {}", c.L));
  require(c.N >= 1, "sim.N", fmt::format("must be >= 1, got {}", c.N));
  require(c.mu >= 0.0 && std::isfinite(c.mu), "sim.mu", fmt::format("must be finite and >= 0, got {}", c.mu));
  require(c.T > 0.0 && std::isfinite(c.T), "sim.T", fmt::format("must be positive, got {}", c.T));
  const double periods = c.T / c.h;
  require(std::abs(periods - std::round(periods)) <= 1e-9 * std::max(1.0, periods), "sim.T",
          fmt::format("{} is not a multiple of h = {}", c.T, c.h));
  require(c.trace_ratio >= 0, "sim.trace_ratio", "must be >= 0");
  require(c.trace_ratio == 0 || c.trace_ratio % c.L == 0, "sim.trace_ratio",
          fmt::format("{} is not a multiple of L = {}", c.trace_ratio, c.L));
  require(c.alpha0.empty() || static_cast<int>(c.alpha0.size()) == c.N, "sim.alpha0",
          fmt::format("has {} taps, N = {}", c.alpha0.size(), c.N));
  require(c.divergence_cutoff > 0.0, "sim.divergence_cutoff", "must be positive");

  validate_plant(c.secondary, "plant.F", c.zeta);
  validate_plant(c.primary, "plant.P", c.zeta);

  const auto& n = c.noise;
  if (!n.waveform_path.empty()) {
    require(n.waveform_dt > 0.0, "noise.waveform_dt", "must be positive when noise.waveform is set");
    const double per_period = c.h / n.waveform_dt;
    const auto m = std::lround(per_period);
    require(m >= 1 && std::abs(per_period - static_cast<double>(m)) <= 1e-9 * per_period, "noise.waveform_dt",
            fmt::format("h / waveform_dt = {} is not an integer", per_period));
    require(c.trace_ratio != 0 || m % c.L == 0, "noise.waveform_dt",
            fmt::format("{} samples per period is not a multiple of L = {}", m, c.L));
    require(c.trace_ratio == 0 || c.trace_ratio == m, "sim.trace_ratio",
            fmt::format("must equal the {} waveform samples per period", m));
  } else {
    const auto count = n.amplitudes.size();
    require(n.frequencies.size() == count, "noise.frequencies",
            fmt::format("has {} entries, noise.amplitudes has {}", n.frequencies.size(), count));
    require(n.decay_rates.size() == count, "noise.decay_rates",
            fmt::format("has {} entries, noise.amplitudes has {}", n.decay_rates.size(), count));
    require(!n.phases || n.phases->size() == count, "noise.phases",
            fmt::format("has {} entries, noise.amplitudes has {}", n.phases ? n.phases->size() : 0, count));
    for (double s : n.decay_rates) {
      require(s > 0.0, "noise.decay_rates", fmt::format("{} must be positive (signal must be square integrable)", s));
    }
    for (double w : n.frequencies) require(w >= 0.0, "noise.frequencies", fmt::format("{} must be >= 0", w));
  }

  for (double m : c.sweep_mu) require(m >= 0.0 && std::isfinite(m), "sweep.mu", fmt::format("{} must be >= 0", m));
  require(c.threshold > 0.0, "sweep.threshold", "must be positive");
  require(c.refine_steps >= 0, "sweep.refine_steps", "must be >= 0");
  require(c.workers >= 0, "sweep.workers", "must be >= 0");
  require(c.check.epsilon > 0.0, "check.epsilon", "must be positive");
  require(c.check.tail_fraction > 0.0 && c.check.tail_fraction <= 1.0, "check.tail_fraction", "must be in (0, 1]");
  require(c.bode_omega_min > 0.0 && c.bode_omega_max > c.bode_omega_min, "bode.omega_min",
          "need 0 < omega_min < omega_max");
  require(c.bode_points >= 2, "bode.points", "must be >= 2");
}

ContinuousStateSpace build_plant(const PlantSpec& spec, double zeta) {
  SectionBank bank;
  bank.gain = spec.gain;
  bank.first_order_poles = spec.first_order_poles;
  for (std::size_t i = 0; i < spec.frequencies.size(); ++i) {
    const double damping = spec.dampings.empty() ? zeta : spec.dampings[i];
    const double gain = i < spec.section_gains.size() ? spec.section_gains[i] : 1.0;
    bank.sections.push_back({gain, damping, spec.frequencies[i]});
  }
  return from_second_order_bank(bank);
}

ContinuousStateSpace secondary_path(const SimConfig& config) { return build_plant(config.secondary, config.zeta); }
ContinuousStateSpace primary_path(const SimConfig& config) { return build_plant(config.primary, config.zeta); }

std::vector<double> random_phases(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::vector<double> out(count);
  for (auto& p : out) {
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    p = 2.0 * std::numbers::pi * unit;
  }
  return out;
}

NoiseSource make_noise(const SimConfig& config) {
  const auto& n = config.noise;
  if (!n.waveform_path.empty()) {
    std::ifstream in(n.waveform_path);
    if (!in) throw ConfigError("noise.waveform", fmt::format("cannot open '{}'", n.waveform_path));
    SampledWaveform wave;
    wave.dt = n.waveform_dt;
    std::string line;
    while (std::getline(in, line)) {
      const auto t = trim(line);
      if (t.empty() || t.front() == '#') continue;
      wave.samples.push_back(parse_double("noise.waveform", t));
    }
    return wave;
  }
  const auto phases = n.phases ? *n.phases : random_phases(n.seed, n.amplitudes.size());
  return damped_sinusoid_bank(n.amplitudes, n.frequencies, n.decay_rates, phases);
}

int effective_trace_ratio(const SimConfig& config) {
  if (config.trace_ratio > 0) return config.trace_ratio;
  // An external waveform fixes the grid: one sample per subinterval.
  if (!config.noise.waveform_path.empty()) return static_cast<int>(std::lround(config.h / config.noise.waveform_dt));
  return std::lcm(config.L, 8);
}

}  // namespace sdanc
