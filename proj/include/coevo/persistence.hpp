#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "coevo/experiment.hpp"

namespace coevo {

inline constexpr int kSchemaVersion = 1;

/// Raised for unreadable or unwritable files and malformed result files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed column order of result CSV files.
inline constexpr std::string_view kCsvColumns =
    "kind,n,lambda,chi,alpha,beta,epsilon,delta,r,trial,seed,hit,T_interactions,generations,wall_ms";

/// '#'-prefixed header (schema version, master seed, spec echo) followed by
/// the column line and one line per row.
std::string format_csv(const ResultTable& table);

/// Header lines ("# ..." without the prefix) and rows of a result CSV.
struct ParsedCsv {
  std::vector<std::string> header;
  std::vector<TrialRow> rows;
};

ParsedCsv parse_csv(std::string_view text);

/// Aggregates as JSON text, including the spec echo and master seed.
std::string format_aggregates_json(const ResultTable& table);
std::vector<CellAggregate> parse_aggregates_json(std::string_view text);

/// One line per (cell, metric): the cell parameters, then metric,value, for
/// metrics success_rate, hits, censored, median_T, q25_T, q75_T, mean_T.
std::string format_plot_data(const std::vector<CellAggregate>& aggregates);

/// Per-generation long-format series of a trajectory experiment.
std::string format_trajectory_csv(const TrajectoryResult& result);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

/// Writes path (CSV) and path + ".json" (aggregates).
void write_results(const ResultTable& table, const std::string& path);

}  // namespace coevo
