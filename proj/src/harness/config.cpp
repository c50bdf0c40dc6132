#include "coevo/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace coevo {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view value) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto comma = value.find(',', start);
    parts.push_back(trim(value.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  for (auto p : parts) {
    if (p.empty()) throw std::invalid_argument(fmt::format("empty entry in list '{}'", value));
  }
  return parts;
}

template <typename T>
T parse_number(std::string_view s) {
  T v{};
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument(fmt::format("'{}' is not a valid number", s));
  }
  return v;
}

template <typename T>
std::vector<T> parse_list(std::string_view value) {
  std::vector<T> out;
  for (auto part : split_list(value)) out.push_back(parse_number<T>(part));
  return out;
}

bool parse_bool(std::string_view s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw std::invalid_argument(fmt::format("'{}' is not a boolean", s));
}

ExperimentKind parse_kind(std::string_view s) {
  if (s == "runtime-scaling") return ExperimentKind::RuntimeScaling;
  if (s == "error-threshold") return ExperimentKind::ErrorThreshold;
  if (s == "trajectory") return ExperimentKind::Trajectory;
  if (s == "lemma-checks") return ExperimentKind::LemmaChecks;
  if (s == "bound-table") return ExperimentKind::BoundTable;
  throw std::invalid_argument(fmt::format("unknown experiment kind '{}'", s));
}

TargetKind parse_target(std::string_view s) {
  if (s == "bilinear") return TargetKind::Bilinear;
  if (s == "singleton") return TargetKind::Singleton;
  throw std::invalid_argument(fmt::format("unknown target '{}'", s));
}

void parse_budget(ExperimentSpec& spec, std::string_view value) {
  if (value == "pilot") {
    spec.budget_rule = BudgetRule::Pilot;
  } else if (value.substr(0, 8) == "theorem9") {
    spec.budget_rule = BudgetRule::Theorem9;
    const auto rest = trim(value.substr(8));
    spec.budget_factor = 1.0;
    if (!rest.empty()) {
      if (rest.front() != '*') throw std::invalid_argument("budget: expected theorem9*FACTOR");
      spec.budget_factor = parse_number<double>(trim(rest.substr(1)));
    }
  } else {
    spec.budget_rule = BudgetRule::Explicit;
    spec.budget_generations = parse_number<std::uint64_t>(value);
  }
}

}  // namespace

std::string_view to_string(ExperimentKind k) noexcept {
  switch (k) {
    case ExperimentKind::RuntimeScaling: return "runtime-scaling";
    case ExperimentKind::ErrorThreshold: return "error-threshold";
    case ExperimentKind::Trajectory: return "trajectory";
    case ExperimentKind::LemmaChecks: return "lemma-checks";
    case ExperimentKind::BoundTable: return "bound-table";
  }
  return "?";
}

std::string_view to_string(BudgetRule b) noexcept {
  switch (b) {
    case BudgetRule::Explicit: return "explicit";
    case BudgetRule::Theorem9: return "theorem9";
    case BudgetRule::Pilot: return "pilot";
  }
  return "?";
}

std::string_view to_string(TargetKind t) noexcept {
  return t == TargetKind::Bilinear ? "bilinear" : "singleton";
}

void ExperimentSpec::validate() const {
  if (n.empty() || lambda.empty() || alpha.empty() || beta.empty() || epsilon.empty() ||
      delta.empty() || r.empty() || (!chi_from_delta && chi.empty())) {
    throw std::invalid_argument("config: every grid list needs at least one value");
  }
  for (auto v : n) {
    if (v == 0) throw std::invalid_argument("config: n must be positive");
  }
  for (auto v : lambda) {
    if (v == 0) throw std::invalid_argument("config: lambda must be positive");
  }
  if (trials == 0) throw std::invalid_argument("config: trials must be positive");
  if (budget_rule == BudgetRule::Explicit && budget_generations == 0) {
    throw std::invalid_argument("config: budget must be positive");
  }
  if (budget_rule == BudgetRule::Theorem9 && !(budget_factor > 0.0)) {
    throw std::invalid_argument("config: theorem9 budget factor must be positive");
  }
  if (budget_rule == BudgetRule::Pilot && (pilot_runs == 0 || !(pilot_multiplier > 0.0))) {
    throw std::invalid_argument("config: pilot_runs and pilot_multiplier must be positive");
  }
  if (budget_cap == 0) throw std::invalid_argument("config: budget_cap must be positive");
}

void apply_config_entry(ExperimentSpec& spec, std::string_view key, std::string_view value) {
  if (key == "kind") {
    spec.kind = parse_kind(value);
  } else if (key == "n") {
    spec.n = parse_list<std::size_t>(value);
  } else if (key == "lambda") {
    spec.lambda = parse_list<std::size_t>(value);
  } else if (key == "chi") {
    spec.chi_from_delta = value == "theorem9";
    if (!spec.chi_from_delta) spec.chi = parse_list<double>(value);
  } else if (key == "alpha") {
    spec.alpha = parse_list<double>(value);
  } else if (key == "beta") {
    spec.beta = parse_list<double>(value);
  } else if (key == "epsilon") {
    spec.epsilon = parse_list<double>(value);
  } else if (key == "delta") {
    spec.delta = parse_list<double>(value);
  } else if (key == "r") {
    spec.r = parse_list<double>(value);
  } else if (key == "trials") {
    spec.trials = parse_number<std::size_t>(value);
  } else if (key == "seed") {
    spec.seed = parse_number<std::uint64_t>(value);
  } else if (key == "budget") {
    parse_budget(spec, value);
  } else if (key == "pilot_runs") {
    spec.pilot_runs = parse_number<std::size_t>(value);
  } else if (key == "pilot_multiplier") {
    spec.pilot_multiplier = parse_number<double>(value);
  } else if (key == "budget_cap") {
    spec.budget_cap = parse_number<std::uint64_t>(value);
  } else if (key == "target") {
    spec.target = parse_target(value);
  } else if (key == "threads") {
    spec.threads = parse_number<std::size_t>(value);
  } else if (key == "out") {
    spec.out = std::string(value);
  } else if (key == "chi_from_delta") {
    spec.chi_from_delta = parse_bool(value);
  } else {
    throw std::invalid_argument(fmt::format("unknown key '{}'", key));
  }
}

ExperimentSpec parse_config(std::string_view text, ExperimentSpec spec) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    auto line = text.substr(start, end - start);
    start = end + 1;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument(fmt::format("line {}: expected key = value", line_no));
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    try {
      apply_config_entry(spec, key, value);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(fmt::format("line {}: {}", line_no, e.what()));
    }
  }
  spec.validate();
  return spec;
}

ExperimentSpec load_config(const std::string& path, ExperimentSpec base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot read config '{}'", path));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::move(base));
}

template <typename T>
std::string join_list(const std::vector<T>& v) {
  return fmt::format("{}", fmt::join(v, ", "));
}

std::string to_config_text(const ExperimentSpec& s) {
  std::string out;
  const auto line = [&out](std::string_view key, const auto& value) {
    out += fmt::format("{} = {}\n", key, value);
  };
  line("kind", to_string(s.kind));
  line("n", join_list(s.n));
  line("lambda", join_list(s.lambda));
  if (s.chi_from_delta) {
    line("chi", "theorem9");
  } else {
    line("chi", join_list(s.chi));
  }
  line("alpha", join_list(s.alpha));
  line("beta", join_list(s.beta));
  line("epsilon", join_list(s.epsilon));
  line("delta", join_list(s.delta));
  line("r", join_list(s.r));
  line("trials", s.trials);
  line("seed", s.seed);
  switch (s.budget_rule) {
    case BudgetRule::Explicit: line("budget", s.budget_generations); break;
    case BudgetRule::Theorem9: line("budget", fmt::format("theorem9*{}", s.budget_factor)); break;
    case BudgetRule::Pilot: line("budget", "pilot"); break;
  }
  line("pilot_runs", s.pilot_runs);
  line("pilot_multiplier", s.pilot_multiplier);
  line("budget_cap", s.budget_cap);
  line("target", to_string(s.target));
  return out;
}

}  // namespace coevo
