#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace coevo {

enum class ExperimentKind { RuntimeScaling, ErrorThreshold, Trajectory, LemmaChecks, BoundTable };
enum class BudgetRule { Explicit, Theorem9, Pilot };
enum class TargetKind { Bilinear, Singleton };

std::string_view to_string(ExperimentKind k) noexcept;
std::string_view to_string(BudgetRule b) noexcept;
std::string_view to_string(TargetKind t) noexcept;

/// One experiment: a grid of parameter cells, each run for `trials` trials.
/// Cells are the cartesian product of the list-valued fields in the order
/// n, lambda, chi, alpha, beta, epsilon, delta, r (last varies fastest).
/// The schema of the text form is documented in docs/config.md.
struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::RuntimeScaling;
  std::vector<std::size_t> n{50};
  std::vector<std::size_t> lambda{100};
  /// Mutation parameters. Ignored when chi_from_delta is set, in which case
  /// each cell uses theorem9_chi(delta).
  std::vector<double> chi{1.0};
  bool chi_from_delta = false;
  std::vector<double> alpha{0.9};
  std::vector<double> beta{0.05};
  std::vector<double> epsilon{0.1};
  std::vector<double> delta{0.01};
  std::vector<double> r{1.0};

  std::size_t trials = 10;
  std::uint64_t seed = 1;

  BudgetRule budget_rule = BudgetRule::Explicit;
  std::uint64_t budget_generations = 10000;
  double budget_factor = 1.0;  // multiplies the theorem-9 budget
  std::size_t pilot_runs = 10;
  double pilot_multiplier = 10.0;
  std::uint64_t budget_cap = 10000000;  // ceiling for derived budgets and pilots

  TargetKind target = TargetKind::Bilinear;
  std::size_t threads = 1;  // 0 picks the hardware concurrency
  std::string out;

  /// Throws std::invalid_argument for empty grids or out-of-range values.
  void validate() const;
};

/// Parses the flat key = value format. Later assignments override earlier
/// ones. Throws std::invalid_argument with the line number on errors.
ExperimentSpec parse_config(std::string_view text, ExperimentSpec base = {});

/// Applies one "key = value" assignment.
void apply_config_entry(ExperimentSpec& spec, std::string_view key, std::string_view value);

/// Reads and parses a config file. Throws std::runtime_error when the file
/// cannot be read.
ExperimentSpec load_config(const std::string& path, ExperimentSpec base = {});

/// Canonical text form of every field that affects results. threads and
/// out are left out so the echo is identical for any worker count.
std::string to_config_text(const ExperimentSpec& spec);

}  // namespace coevo
