#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coevo/config.hpp"
#include "coevo/pdcoea.hpp"

namespace coevo {

/// Fully resolved parameters of one grid cell.
struct Cell {
  std::size_t index;
  std::size_t n;
  std::size_t lambda;
  double chi;
  double alpha;
  double beta;
  double epsilon;
  double delta;
  double r;
};

/// Cells of spec in canonical order. chi is resolved from delta when
/// spec.chi_from_delta is set.
std::vector<Cell> expand_grid(const ExperimentSpec& spec);

BilinearParams cell_game(const Cell& c);

/// Seed of trial `trial` in cell `cell`: child_seed(master, cell * trials + trial).
std::uint64_t unit_seed(const ExperimentSpec& spec, std::size_t cell, std::size_t trial);

struct TrialRow {
  std::string kind;
  std::size_t n;
  std::size_t lambda;
  double chi;
  double alpha;
  double beta;
  double epsilon;
  double delta;
  double r;
  std::size_t trial;
  std::uint64_t seed;
  bool hit;
  std::uint64_t T_interactions;
  std::uint64_t generations;
  double wall_ms;  // exempt from determinism
};

/// Summary of one cell. Quantiles use only the hits; censored trials count
/// toward the success rate alone.
struct CellAggregate {
  std::size_t n;
  std::size_t lambda;
  double chi;
  double alpha;
  double beta;
  double epsilon;
  double delta;
  double r;
  std::uint64_t budget_generations;  // 0 when unknown (recomputed from rows)
  std::size_t trials;
  std::size_t hits;
  std::size_t censored;
  double success_rate;
  std::optional<double> median_T;
  std::optional<double> q25_T;
  std::optional<double> q75_T;
  std::optional<double> mean_T;
};

struct ResultTable {
  ExperimentSpec spec;
  std::vector<std::uint64_t> budgets;  // per cell
  std::vector<TrialRow> rows;          // canonical order: cell, then trial
  std::vector<CellAggregate> aggregates;
};

/// Linear-interpolation quantile of sorted values (q in [0, 1]).
double quantile_sorted(const std::vector<double>& sorted, double q);

/// Groups rows by their cell parameters in first-appearance order.
std::vector<CellAggregate> aggregate_rows(const std::vector<TrialRow>& rows);

/// Budget in generations for a cell under spec's budget rule. The pilot
/// rule runs spec.pilot_runs trials on a separate seed domain with budget
/// spec.budget_cap and returns ceil(multiplier * median generations), where
/// censored pilots count at the cap.
std::uint64_t resolve_budget(const ExperimentSpec& spec, const Cell& cell);

/// Runs every (cell, trial) unit on spec.threads workers.
ResultTable run_experiment(const ExperimentSpec& spec);

/// Target predicate for a cell: the Bilinear epsilon target, or the
/// all-ones pair for TargetKind::Singleton.
TargetPredicate cell_target(const ExperimentSpec& spec, const Cell& cell);

PdcoeaConfig cell_config(const ExperimentSpec& spec, const Cell& cell, std::size_t trial,
                         std::uint64_t budget);

struct ThresholdPoint {
  double chi;
  double success_rate;
  std::size_t hits;
  std::size_t trials;
};

struct ThresholdSummary {
  std::vector<ThresholdPoint> points;  // sorted by chi
  bool non_increasing;
  /// Largest chi with a hit and smallest larger chi without one, when the
  /// curve collapses inside the grid.
  std::optional<double> last_success_chi;
  std::optional<double> first_zero_chi;
};

ThresholdSummary summarize_threshold(const ResultTable& table);

struct ScalingPoint {
  std::size_t n;
  std::size_t lambda;
  double success_rate;
  std::optional<double> median_T;
  std::optional<double> theorem9_reference;  // interactions, when defined
};

struct ScalingSummary {
  std::vector<ScalingPoint> points;
  std::optional<double> slope_in_n;       // log-log least squares at fixed lambda
  std::optional<double> rank_correlation; // Spearman, median T against n
  bool median_non_decreasing_in_n;
};

ScalingSummary summarize_scaling(const ResultTable& table);

/// Per-generation row of a trajectory run.
struct TrajectorySample {
  std::size_t cell;
  std::size_t trial;
  std::uint64_t generation;
  double predator_mean;
  double prey_mean;
  double p0;
  double q0;
  std::size_t prey_in_s0;
  std::size_t current_level;
  int phase;  // 2 from the first generation with p0 >= gamma0 onward
};

struct TrajectoryResult {
  ResultTable table;
  std::vector<TrajectorySample> samples;
  std::size_t successful_runs;
  std::size_t pre_hit_generations;       // over successful runs
  std::size_t pre_hit_without_s0;        // of those, with no prey in S0
  std::size_t descended_runs;            // mean |x| at hit < beta n + mean |x| at init / 2
  double s0_empty_fraction() const noexcept;
};

/// Runs every cell of spec with per-generation statistics recorded.
TrajectoryResult experiment_trajectory(const ExperimentSpec& spec);

}  // namespace coevo
