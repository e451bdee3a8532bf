#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "sdanc/experiment.hpp"

namespace sdanc::csv {

// Every file opens with a "# sdanc <kind> v<version>" line followed by a
// header row. Numbers are written with 17 significant digits so that
// identical runs produce identical bytes.
inline constexpr int kFormatVersion = 1;

void write_fast_trace(const std::filesystem::path& path, const SimTrace& trace);
void write_discrete_trace(const std::filesystem::path& path, const SimTrace& trace);
void write_conditions(const std::filesystem::path& path, const LmsConditionReport& report);
void write_run_report(const std::filesystem::path& path, const RunResult& run);
void write_comparison(const std::filesystem::path& path, const ComparisonReport& report);
void write_sweep(const std::filesystem::path& path, const SweepReport& report);
void write_sweep_summary(const std::filesystem::path& path, const SweepReport& report);
void write_bode(const std::filesystem::path& path, const std::vector<BodeRow>& rows, double nyquist);

/// Header names and rows of a file written by this module (comment lines skipped).
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Column by header name; throws std::out_of_range if absent.
  std::vector<double> column(const std::string& name) const;
};

Table read_table(const std::filesystem::path& path);

}  // namespace sdanc::csv
