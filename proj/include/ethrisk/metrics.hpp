#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ethrisk/runner.hpp"

namespace ethrisk {

inline constexpr double kCriticalTtc = 2.0;    // s
inline constexpr double kCriticalRisk = 0.25;

// Uniform bins from lo to hi; values equal to hi land in the last bin.
struct BinSpec {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t count = 1;

  std::size_t index(double value) const;
  double edge(std::size_t i) const { return lo + (hi - lo) * static_cast<double>(i) / count; }
};

inline constexpr BinSpec kDefaultTtcBins{0.0, 10.0, 20};
inline constexpr BinSpec kDefaultRiskBins{0.0, 1.0, 20};

struct WorstCaseHistogram {
  BinSpec ttc_bins;
  BinSpec risk_bins;
  std::vector<std::vector<std::size_t>> counts;  // [ttc bin][risk bin]
  std::size_t binned = 0;
  std::size_t infinite_ttc = 0;  // steps with agents but no finite TTC
  std::size_t critical = 0;      // TTC < 2 s and max other risk > 0.25
};

// Bins the per-step (min TTC, max other risk) pairs of every step that has at
// least one other agent. Throws EmptyInput when `logs` is empty.
WorstCaseHistogram worst_case_histogram(std::span<const EpisodeLog> logs,
                                        const BinSpec& ttc_bins = kDefaultTtcBins,
                                        const BinSpec& risk_bins = kDefaultRiskBins);

// A table whose rows share the column list. Cells are numbers (NaN for
// "not available", +inf allowed) or strings.
struct Cell {
  bool is_text = false;
  double number = 0.0;
  std::string text;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// One row per log.
Table runs_table(std::span<const EpisodeLog> logs);
// One row per (scenario, policy, mode): mean and population std of the
// per-run statistics across runs.
Table summary_table(std::span<const EpisodeLog> logs);
// Long-format histogram cells plus the critical and infinite counts.
Table heatmap_table(const WorstCaseHistogram& histogram);

enum class MetricsFormat { kCsv, kJson };

MetricsFormat metrics_format_from_string(std::string_view name);  // throws ValidationError

std::string table_to_csv(const Table& table);
std::string table_to_json(const Table& table);

// Writes runs, summary and heatmap files (runs.csv / runs.json, ...) into
// `out_dir`. Throws EmptyInput for no logs and IoError when writing fails.
std::vector<std::filesystem::path> emit_metrics(std::span<const EpisodeLog> logs,
                                                MetricsFormat format,
                                                const std::filesystem::path& out_dir);

}  // namespace ethrisk
