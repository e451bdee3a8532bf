// anc-sim: command line harness for the sampled-data filtered-x experiments.
//
//   anc-sim run      single closed-loop run, fast/discrete traces + report
//   anc-sim compare  proposed (ratio L) vs conventional (ratio 1) on one fixture
//   anc-sim sweep    step-size sweep for both methods, stability edges
//   anc-sim bode     |F(jw)|, |P(jw)| on a log grid
//   anc-sim check    step-size / boundedness conditions for a saved trace

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include <fmt/core.h>

#include "CLI11.hpp"
#include "sdanc/conditions.hpp"
#include "sdanc/config.hpp"
#include "sdanc/csv.hpp"
#include "sdanc/errors.hpp"
#include "sdanc/experiment.hpp"
#include "sdanc/lifting.hpp"

namespace fs = std::filesystem;
using namespace sdanc;

namespace {

struct Options {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string mu;
  std::optional<int> L;
  std::optional<double> threshold;
  std::string trace_path;
};

SimConfig resolve(const Options& opt, bool mu_is_list) {
  SimConfig cfg = opt.config_path.empty() ? default_config() : load_config(opt.config_path);
  if (!opt.out_dir.empty()) cfg.output_dir = opt.out_dir;
  if (opt.seed) cfg.noise.seed = *opt.seed;
  if (opt.L) cfg.L = *opt.L;
  if (opt.threshold) cfg.threshold = *opt.threshold;
  if (!opt.mu.empty()) {
    const auto values = parse_list("--mu", opt.mu);
    if (mu_is_list) {
      cfg.sweep_mu = values;
    } else {
      if (values.size() != 1) throw ConfigError("--mu", "expects a single value for this command");
      cfg.mu = values.front();
    }
  }
  validate(cfg);
  return cfg;
}

fs::path prepare_out(const SimConfig& cfg) {
  fs::path out(cfg.output_dir);
  fs::create_directories(out);
  return out;
}

void print_conditions(const LmsConditionReport& r) {
  fmt::print("  gamma = {:.6g}  max lambda = {:.6g}  mu bound = {:.6g}  epsilon = {:.6g}\n", r.gamma, r.max_lambda,
             r.mu_bound, r.epsilon);
  fmt::print("  cond1 bounded: {}  cond2 step size: {}  cond3 slowly varying: {}{}\n", r.bounded ? "pass" : "FAIL",
             r.step_size_ok ? "pass" : "FAIL", r.slowly_varying ? "pass" : "FAIL",
             r.degenerate ? "  (degenerate: Phi = 0)" : "");
}

int cmd_run(const Options& opt) {
  const auto cfg = resolve(opt, false);
  const auto out = prepare_out(cfg);
  const auto run = run_single(cfg);
  csv::write_fast_trace(out / "fast_trace.csv", run.trace);
  csv::write_discrete_trace(out / "discrete_trace.csv", run.trace);
  csv::write_run_report(out / "report.csv", run);
  if (run.mu > 0.0) csv::write_conditions(out / "lms_conditions.csv", run.conditions);
  fmt::print("L = {}  mu = {}  ||e||_2 = {:.6g}  ||d||_2 = {:.6g}{}\n", run.L, run.mu, run.e_norm, run.d_norm,
             run.diverged ? "  (diverged)" : "");
  if (run.mu > 0.0) print_conditions(run.conditions);
  fmt::print("wall time {:.3f} s, output in {}\n", run.wall_seconds, out.string());
  return 0;
}

int cmd_compare(const Options& opt) {
  const auto cfg = resolve(opt, false);
  const auto out = prepare_out(cfg);
  const auto report = run_comparison(cfg);
  csv::write_fast_trace(out / "proposed_fast_trace.csv", report.proposed.trace);
  csv::write_fast_trace(out / "conventional_fast_trace.csv", report.conventional.trace);
  csv::write_discrete_trace(out / "proposed_discrete_trace.csv", report.proposed.trace);
  csv::write_discrete_trace(out / "conventional_discrete_trace.csv", report.conventional.trace);
  csv::write_comparison(out / "comparison.csv", report);
  fmt::print("conventional (L=1): ||e||_2 = {:.6g}\n", report.conventional.e_norm);
  fmt::print("proposed     (L={}): ||e||_2 = {:.6g}\n", report.proposed.L, report.proposed.e_norm);
  fmt::print("ratio proposed/conventional = {:.4f}\n", report.ratio);
  return 0;
}

int cmd_sweep(const Options& opt) {
  const auto cfg = resolve(opt, true);
  const auto out = prepare_out(cfg);
  const auto report = run_mu_sweep(cfg, cfg.sweep_mu);
  csv::write_sweep(out / "sweep.csv", report);
  csv::write_sweep_summary(out / "sweep_summary.csv", report);
  fmt::print("{:>10} {:>16} {:>16}\n", "mu", "conventional", "proposed");
  for (const auto& r : report.rows) fmt::print("{:>10.4g} {:>16.6g} {:>16.6g}\n", r.mu, r.norm_conventional, r.norm_proposed);
  fmt::print("||e||_2 < {} up to mu = {:.4g} (conventional{}), {:.4g} (proposed{}); ratio {:.3f}\n", report.threshold,
             report.mu_star_conventional, report.crossed_conventional ? "" : ", not crossed",
             report.mu_star_proposed, report.crossed_proposed ? "" : ", not crossed", report.width_ratio);
  for (const auto& row : report.inconsistent_rows) {
    fmt::print("note: {} exceeds the threshold while the step-size condition passes\n", row);
  }
  return 0;
}

int cmd_bode(const Options& opt) {
  const auto cfg = resolve(opt, false);
  const auto out = prepare_out(cfg);
  csv::write_bode(out / "bode.csv", emit_bode(cfg), std::numbers::pi / cfg.h);
  fmt::print("wrote {}\n", (out / "bode.csv").string());
  return 0;
}

int cmd_check(const Options& opt) {
  const auto cfg = resolve(opt, false);
  if (opt.trace_path.empty()) throw ConfigError("--trace", "check needs a discrete trace CSV");
  if (!(cfg.mu > 0.0)) throw ConfigError("sim.mu", "check needs a positive step size");
  const auto table = csv::read_table(opt.trace_path);
  const auto xd = table.column("x_d");
  const auto lift = discretize_lifted(secondary_path(cfg), cfg.h, cfg.L);
  const auto report = check_lms_conditions(filtered_blocks(lift, xd), cfg.mu, cfg.N, cfg.h, cfg.check);
  const auto out = prepare_out(cfg);
  csv::write_conditions(out / "lms_conditions.csv", report);
  fmt::print("{} intervals, L = {}, N = {}, mu = {}\n", report.intervals, cfg.L, cfg.N, cfg.mu);
  print_conditions(report);
  return report.all_pass() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sampled-data filtered-x active noise control experiments"};
  app.require_subcommand(1);
  Options opt;

  const auto common = [&](CLI::App* sub, bool mu_list) {
    sub->add_option("--config", opt.config_path, "Key-value configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out_dir, "Output directory");
    sub->add_option("--seed", opt.seed, "Noise phase seed");
    sub->add_option("--mu", opt.mu, mu_list ? "Comma-separated step sizes" : "Step size");
    sub->add_option("--L", opt.L, "Fast-sampling ratio")->check(CLI::PositiveNumber);
    sub->add_option("--threshold", opt.threshold, "Error-norm threshold for the stability edge");
  };
  auto* run = app.add_subcommand("run", "Single closed-loop run");
  common(run, false);
  auto* compare = app.add_subcommand("compare", "Proposed vs conventional on one fixture");
  common(compare, false);
  auto* sweep = app.add_subcommand("sweep", "Step-size sweep for both methods");
  common(sweep, true);
  auto* bode = app.add_subcommand("bode", "Magnitude responses of F and P");
  common(bode, false);
  auto* check = app.add_subcommand("check", "Stability conditions for a saved discrete trace");
  common(check, false);
  check->add_option("--trace", opt.trace_path, "discrete_trace.csv from a previous run")
      ->required()
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(opt);
    if (compare->parsed()) return cmd_compare(opt);
    if (sweep->parsed()) return cmd_sweep(opt);
    if (bode->parsed()) return cmd_bode(opt);
    if (check->parsed()) return cmd_check(opt);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
