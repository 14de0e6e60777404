#include "ethrisk/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <tuple>

#include "ethrisk/errors.hpp"
#include "json_fields.hpp"

namespace ethrisk {
namespace {

using detail::json;

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

Cell num(double v) { return Cell{false, v, {}}; }
Cell text(std::string s) { return Cell{true, 0.0, std::move(s)}; }

struct Moments {
  double mean = 0.0;
  double std = 0.0;
};

// Population statistics; NaN for an empty sample.
Moments moments(const std::vector<double>& xs) {
  if (xs.empty()) return {kNan, kNan};
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size()))};
}

template <typename Fn>
std::vector<double> collect(const EpisodeLog& log, Fn&& fn) {
  std::vector<double> out;
  out.reserve(log.records.size());
  for (const StepRecord& r : log.records) out.push_back(fn(r));
  return out;
}

bool is_critical(double ttc, double risk) {
  return std::isfinite(ttc) && ttc < kCriticalTtc && risk > kCriticalRisk;
}

// Per-run statistics that the summary aggregates across runs.
const std::vector<std::string> kRunStats = {
    "episode_return",    "episode_cost",   "ego_risk_mean",     "ego_risk_std",
    "other_risk_mean",   "other_risk_std", "ethical_cost_mean", "accel_mean",
    "accel_std",         "jerk_mean",      "jerk_std",          "abs_jerk_mean",
};

std::vector<double> run_stats(const EpisodeLog& log) {
  const Moments ego = moments(collect(log, [](const StepRecord& r) { return r.ego_risk; }));
  const Moments other = moments(collect(log, [](const StepRecord& r) { return r.max_other_risk; }));
  const Moments eth = moments(collect(log, [](const StepRecord& r) { return r.ethical_cost; }));
  const Moments acc = moments(collect(log, [](const StepRecord& r) { return r.accel; }));
  const Moments jerk = moments(collect(log, [](const StepRecord& r) { return r.jerk; }));
  const Moments abs_jerk =
      moments(collect(log, [](const StepRecord& r) { return std::abs(r.jerk); }));
  return {log.episode_return, log.episode_cost, ego.mean, ego.std,  other.mean, other.std,
          eth.mean,           acc.mean,         acc.std,  jerk.mean, jerk.std,  abs_jerk.mean};
}

std::string format_number(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_file(const std::filesystem::path& file, const std::string& content) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + file.string());
  out << content;
  if (!out) throw IoError("failed writing " + file.string());
}

}  // namespace

std::size_t BinSpec::index(double value) const {
  const double w = (hi - lo) / static_cast<double>(count);
  const double raw = std::floor((value - lo) / w);
  if (raw < 0.0) return 0;
  return std::min(static_cast<std::size_t>(raw), count - 1);
}

WorstCaseHistogram worst_case_histogram(std::span<const EpisodeLog> logs, const BinSpec& ttc_bins,
                                        const BinSpec& risk_bins) {
  if (logs.empty()) throw EmptyInput("worst-case histogram needs at least one log");
  WorstCaseHistogram h;
  h.ttc_bins = ttc_bins;
  h.risk_bins = risk_bins;
  h.counts.assign(ttc_bins.count, std::vector<std::size_t>(risk_bins.count, 0));
  for (const EpisodeLog& log : logs) {
    for (const StepRecord& r : log.records) {
      if (r.agent_count == 0) continue;
      if (!std::isfinite(r.min_ttc)) {
        ++h.infinite_ttc;
        continue;
      }
      ++h.counts[ttc_bins.index(r.min_ttc)][risk_bins.index(r.max_other_risk)];
      ++h.binned;
      if (is_critical(r.min_ttc, r.max_other_risk)) ++h.critical;
    }
  }
  return h;
}

Table runs_table(std::span<const EpisodeLog> logs) {
  Table t;
  t.columns = {"scenario", "policy", "mode", "seed", "steps", "terminal"};
  t.columns.insert(t.columns.end(), kRunStats.begin(), kRunStats.end());
  t.columns.insert(t.columns.end(), {"lambda_after", "min_ttc_s", "critical_steps"});
  for (const EpisodeLog& log : logs) {
    std::vector<Cell> row = {text(log.scenario),
                             text(log.policy),
                             text(std::string(to_string(log.mode))),
                             num(static_cast<double>(log.seed)),
                             num(static_cast<double>(log.records.size())),
                             text(std::string(to_string(log.terminal)))};
    for (double v : run_stats(log)) row.push_back(num(v));
    double min_ttc = kInfiniteTtc;
    std::size_t critical = 0;
    for (const StepRecord& r : log.records) {
      min_ttc = std::min(min_ttc, r.min_ttc);
      if (is_critical(r.min_ttc, r.max_other_risk)) ++critical;
    }
    row.push_back(num(log.lagrange_after.lambda));
    row.push_back(num(min_ttc));
    row.push_back(num(static_cast<double>(critical)));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table summary_table(std::span<const EpisodeLog> logs) {
  using Key = std::tuple<std::string, std::string, std::string>;
  std::map<Key, std::vector<std::vector<double>>> groups;
  for (const EpisodeLog& log : logs) {
    groups[{log.scenario, log.policy, std::string(to_string(log.mode))}].push_back(run_stats(log));
  }
  Table t;
  t.columns = {"scenario", "policy", "mode", "runs"};
  for (const std::string& s : kRunStats) {
    t.columns.push_back(s + "_mean");
    t.columns.push_back(s + "_std");
  }
  for (const auto& [key, runs] : groups) {
    std::vector<Cell> row = {text(std::get<0>(key)), text(std::get<1>(key)),
                             text(std::get<2>(key)), num(static_cast<double>(runs.size()))};
    for (std::size_t s = 0; s < kRunStats.size(); ++s) {
      std::vector<double> xs;
      for (const auto& run : runs) xs.push_back(run[s]);
      const Moments m = moments(xs);
      row.push_back(num(m.mean));
      row.push_back(num(m.std));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table heatmap_table(const WorstCaseHistogram& h) {
  Table t;
  t.columns = {"ttc_lo_s", "ttc_hi_s", "risk_lo", "risk_hi", "count"};
  for (std::size_t i = 0; i < h.ttc_bins.count; ++i) {
    for (std::size_t j = 0; j < h.risk_bins.count; ++j) {
      t.rows.push_back({num(h.ttc_bins.edge(i)), num(h.ttc_bins.edge(i + 1)),
                        num(h.risk_bins.edge(j)), num(h.risk_bins.edge(j + 1)),
                        num(static_cast<double>(h.counts[i][j]))});
    }
  }
  return t;
}

MetricsFormat metrics_format_from_string(std::string_view name) {
  if (name == "csv") return MetricsFormat::kCsv;
  if (name == "json") return MetricsFormat::kJson;
  throw ValidationError("format must be csv or json, got '" + std::string(name) + "'");
}

std::string table_to_csv(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out += (c ? "," : "") + quote_csv(table.columns[c]);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += row[c].is_text ? quote_csv(row[c].text) : format_number(row[c].number);
    }
    out += '\n';
  }
  return out;
}

std::string table_to_json(const Table& table) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    json obj = json::object();
    for (std::size_t c = 0; c < row.size(); ++c) {
      const Cell& cell = row[c];
      if (cell.is_text) {
        obj[table.columns[c]] = cell.text;
      } else if (std::isfinite(cell.number)) {
        obj[table.columns[c]] = cell.number;
      } else {
        obj[table.columns[c]] = nullptr;
      }
    }
    rows.push_back(std::move(obj));
  }
  return json{{"columns", table.columns}, {"rows", rows}}.dump(1) + "\n";
}

std::vector<std::filesystem::path> emit_metrics(std::span<const EpisodeLog> logs,
                                                MetricsFormat format,
                                                const std::filesystem::path& out_dir) {
  if (logs.empty()) throw EmptyInput("no episode logs to summarize");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  const WorstCaseHistogram h = worst_case_histogram(logs);
  Table worst;
  worst.columns = {"steps_with_agents", "binned", "infinite_ttc", "critical"};
  worst.rows.push_back({num(static_cast<double>(h.binned + h.infinite_ttc)),
                        num(static_cast<double>(h.binned)),
                        num(static_cast<double>(h.infinite_ttc)),
                        num(static_cast<double>(h.critical))});

  const std::vector<std::pair<std::string, Table>> tables = {
      {"runs", runs_table(logs)},
      {"summary", summary_table(logs)},
      {"heatmap", heatmap_table(h)},
      {"worst_case", worst},
  };
  std::vector<std::filesystem::path> written;
  for (const auto& [name, table] : tables) {
    const bool csv = format == MetricsFormat::kCsv;
    const auto file = out_dir / (name + (csv ? ".csv" : ".json"));
    write_file(file, csv ? table_to_csv(table) : table_to_json(table));
    written.push_back(file);
  }
  return written;
}

}  // namespace ethrisk
