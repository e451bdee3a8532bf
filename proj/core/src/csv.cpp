#include "sdanc/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <fmt/core.h>

namespace sdanc::csv {

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }

class Writer {
 public:
  Writer(const std::filesystem::path& path, std::string_view kind) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
    out_ << "# sdanc " << kind << " v" << kFormatVersion << '\n';
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

  ~Writer() { out_.flush(); }

 private:
  std::ofstream out_;
};

std::string flag(bool b) { return b ? "1" : "0"; }

void condition_rows(Writer& w, const LmsConditionReport& r) {
  w.row({"mu", num(r.mu)});
  w.row({"intervals", std::to_string(r.intervals)});
  w.row({"gamma", num(r.gamma)});
  w.row({"max_lambda", num(r.max_lambda)});
  w.row({"mu_bound", num(r.mu_bound)});
  w.row({"epsilon", num(r.epsilon)});
  w.row({"epsilon_threshold", num(r.epsilon_threshold)});
  w.row({"tail_growth", num(r.tail_growth)});
  w.row({"cond1_bounded", flag(r.bounded)});
  w.row({"cond2_step_size", flag(r.step_size_ok)});
  w.row({"cond3_slowly_varying", flag(r.slowly_varying)});
  w.row({"degenerate", flag(r.degenerate)});
}

}  // namespace

void write_fast_trace(const std::filesystem::path& path, const SimTrace& trace) {
  Writer w(path, "fast-trace");
  w.row({"t[s]", "x", "d", "w", "e", "u"});
  for (std::size_t i = 0; i < trace.t.size(); ++i) {
    w.row({num(trace.t[i]), num(trace.x[i]), num(trace.d[i]), num(trace.w[i]), num(trace.e[i]), num(trace.u[i])});
  }
}

void write_discrete_trace(const std::filesystem::path& path, const SimTrace& trace) {
  Writer w(path, "discrete-trace");
  std::vector<std::string> header{"n", "t[s]", "x_d", "y_d"};
  for (Eigen::Index k = 0; k < trace.alpha.cols(); ++k) header.push_back(fmt::format("alpha_{}", k));
  header.push_back("delta_norm");
  w.row(header);
  for (std::size_t n = 0; n < trace.xd.size(); ++n) {
    std::vector<std::string> cells{std::to_string(n), num(static_cast<double>(n) * trace.grid.h), num(trace.xd[n]),
                                   num(trace.yd[n])};
    for (Eigen::Index k = 0; k < trace.alpha.cols(); ++k) cells.push_back(num(trace.alpha(static_cast<Eigen::Index>(n), k)));
    cells.push_back(n < trace.delta_norm.size() ? num(trace.delta_norm[n]) : "nan");
    w.row(cells);
  }
}

void write_conditions(const std::filesystem::path& path, const LmsConditionReport& report) {
  Writer w(path, "lms-conditions");
  w.row({"key", "value"});
  condition_rows(w, report);
}

void write_run_report(const std::filesystem::path& path, const RunResult& run) {
  Writer w(path, "run-report");
  w.row({"key", "value"});
  w.row({"L", std::to_string(run.L)});
  w.row({"mu", num(run.mu)});
  w.row({"intervals", std::to_string(run.trace.intervals())});
  w.row({"e_norm", num(run.e_norm)});
  w.row({"d_norm", num(run.d_norm)});
  w.row({"w_norm", num(run.w_norm)});
  w.row({"diverged", flag(run.diverged)});
  for (Eigen::Index k = 0; k < run.final_alpha.size(); ++k) {
    w.row({fmt::format("alpha_{}", k), num(run.final_alpha(k))});
  }
}

void write_comparison(const std::filesystem::path& path, const ComparisonReport& report) {
  Writer w(path, "comparison");
  w.row({"method", "L", "mu", "e_norm", "d_norm", "w_norm", "diverged"});
  for (const auto* run : {&report.conventional, &report.proposed}) {
    w.row({run == &report.proposed ? "proposed" : "conventional", std::to_string(run->L), num(run->mu),
           num(run->e_norm), num(run->d_norm), num(run->w_norm), flag(run->diverged)});
  }
  w.row({"ratio", "", "", num(report.ratio), "", "", ""});
}

void write_sweep(const std::filesystem::path& path, const SweepReport& report) {
  Writer w(path, "mu-sweep");
  w.row({"mu", "e_norm_conventional", "e_norm_proposed", "cond2_conventional", "cond2_proposed",
         "mu_bound_conventional", "mu_bound_proposed"});
  for (const auto& r : report.rows) {
    w.row({num(r.mu), num(r.norm_conventional), num(r.norm_proposed), flag(r.conditions_conventional.step_size_ok),
           flag(r.conditions_proposed.step_size_ok), num(r.conditions_conventional.mu_bound),
           num(r.conditions_proposed.mu_bound)});
  }
}

void write_sweep_summary(const std::filesystem::path& path, const SweepReport& report) {
  Writer w(path, "mu-sweep-summary");
  w.row({"key", "value"});
  w.row({"threshold", num(report.threshold)});
  w.row({"mu_star_conventional", num(report.mu_star_conventional)});
  w.row({"mu_star_proposed", num(report.mu_star_proposed)});
  w.row({"crossed_conventional", flag(report.crossed_conventional)});
  w.row({"crossed_proposed", flag(report.crossed_proposed)});
  w.row({"width_ratio", num(report.width_ratio)});
  w.row({"inconsistent_rows", std::to_string(report.inconsistent_rows.size())});
}

void write_bode(const std::filesystem::path& path, const std::vector<BodeRow>& rows, double nyquist) {
  Writer w(path, "bode");
  w.row({"omega[rad/s]", "abs_F", "abs_P", "nyquist[rad/s]"});
  for (const auto& r : rows) w.row({num(r.omega), num(r.f_mag), num(r.p_mag), num(nyquist)});
}

std::vector<double> Table::column(const std::string& name) const {
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == name) {
      std::vector<double> out;
      out.reserve(rows.size());
      for (const auto& r : rows) out.push_back(c < r.size() ? r[c] : std::nan(""));
      return out;
    }
  }
  throw std::out_of_range(fmt::format("no column '{}'", name));
}

Table read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot read '{}'", path.string()));
  Table table;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
      continue;
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      try {
        row.push_back(c.empty() ? std::nan("") : std::stod(c));
      } catch (const std::exception&) {
        row.push_back(std::nan(""));
      }
    }
    table.rows.push_back(std::move(row));
  }
  if (!have_header) throw std::runtime_error(fmt::format("'{}' has no header row", path.string()));
  return table;
}

}  // namespace sdanc::csv
