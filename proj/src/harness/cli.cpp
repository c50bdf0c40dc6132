#include "coevo/cli.hpp"

#include <cmath>
#include <stdexcept>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "coevo/checks.hpp"
#include "coevo/config.hpp"
#include "coevo/experiment.hpp"
#include "coevo/persistence.hpp"
#include "coevo/theory.hpp"

namespace coevo {

namespace {

struct CommonFlags {
  CLI::Option* seed_opt = nullptr;
  CLI::Option* trials_opt = nullptr;
  CLI::Option* budget_opt = nullptr;
  CLI::Option* threads_opt = nullptr;
  std::uint64_t seed = 1;
  std::size_t trials = 1;
  std::string budget;
  std::size_t threads = 1;
  std::string out;
  std::string config;
  std::vector<std::string> sets;
};

void add_common(CLI::App* sub, CommonFlags& f) {
  f.seed_opt = sub->add_option("--seed", f.seed, "master seed");
  f.trials_opt = sub->add_option("--trials", f.trials, "trials per cell");
  f.budget_opt = sub->add_option("--budget", f.budget, "generations, 'pilot' or 'theorem9*FACTOR'");
  f.threads_opt = sub->add_option("--threads", f.threads, "worker threads (0 = all cores)");
  sub->add_option("--out", f.out, "output path");
  sub->add_option("--config", f.config, "key = value config file")->check(CLI::ExistingFile);
  sub->add_option("--set", f.sets, "override one config entry, key=value")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
}

ExperimentSpec build_spec(ExperimentSpec spec, const CommonFlags& f) {
  if (!f.config.empty()) spec = load_config(f.config, spec);
  for (const auto& s : f.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(fmt::format("--set expects key=value, got '{}'", s));
    }
    const auto trim = [](std::string_view v) {
      const auto a = v.find_first_not_of(' ');
      if (a == std::string_view::npos) return std::string_view{};
      return v.substr(a, v.find_last_not_of(' ') - a + 1);
    };
    apply_config_entry(spec, trim(std::string_view(s).substr(0, eq)),
                       trim(std::string_view(s).substr(eq + 1)));
  }
  if (f.seed_opt->count() > 0) spec.seed = f.seed;
  if (f.trials_opt->count() > 0) spec.trials = f.trials;
  if (f.budget_opt->count() > 0) apply_config_entry(spec, "budget", f.budget);
  if (f.threads_opt->count() > 0) spec.threads = f.threads;
  if (!f.out.empty()) spec.out = f.out;
  spec.validate();
  return spec;
}

std::string format_optional(const std::optional<double>& v) {
  return v ? fmt::format("{}", *v) : std::string("-");
}

std::string aggregate_table(const std::vector<CellAggregate>& aggregates) {
  std::string out = "n,lambda,chi,alpha,beta,epsilon,budget,hits,trials,success_rate,median_T\n";
  for (const auto& a : aggregates) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", a.n, a.lambda, a.chi, a.alpha, a.beta,
                       a.epsilon, a.budget_generations, a.hits, a.trials, a.success_rate,
                       format_optional(a.median_T));
  }
  return out;
}

void emit_table(const ResultTable& table, std::ostream& out) {
  if (table.spec.out.empty()) {
    out << format_csv(table);
  } else {
    write_results(table, table.spec.out);
    fmt::print(out, "wrote {} and {}.json\n", table.spec.out, table.spec.out);
  }
}

int cmd_run(const ExperimentSpec& spec, std::ostream& out) {
  const ResultTable table = run_experiment(spec);
  out << "# spec\n";
  out << to_config_text(spec);
  for (const auto& r : table.rows) {
    fmt::print(out, "trial = {}\nseed = {}\nhit = {}\nT_interactions = {}\ngenerations = {}\n",
               r.trial, r.seed, r.hit, r.T_interactions, r.generations);
    fmt::print(out, "wall_ms = {:.3f}\n", r.wall_ms);
  }
  if (!spec.out.empty()) {
    write_results(table, spec.out);
    fmt::print(out, "wrote {}\n", spec.out);
  }
  return kExitOk;
}

int cmd_sweep(const ExperimentSpec& spec, std::ostream& out) {
  emit_table(run_experiment(spec), out);
  return kExitOk;
}

int cmd_threshold(const ExperimentSpec& spec, std::ostream& out) {
  const ResultTable table = run_experiment(spec);
  if (!spec.out.empty()) write_results(table, spec.out);
  const auto s = summarize_threshold(table);
  out << aggregate_table(table.aggregates);
  fmt::print(out, "reference ln 2 / (1 - 2 delta) = {} (delta = {})\n",
             error_threshold(spec.delta.front()), spec.delta.front());
  fmt::print(out, "success rate non-increasing in chi: {}\n", s.non_increasing);
  if (s.last_success_chi && s.first_zero_chi) {
    fmt::print(out, "transition between chi = {} and chi = {}\n", *s.last_success_chi,
               *s.first_zero_chi);
  } else {
    out << "no transition inside the grid\n";
  }
  return kExitOk;
}

int cmd_scaling(const ExperimentSpec& spec, std::ostream& out) {
  const ResultTable table = run_experiment(spec);
  if (!spec.out.empty()) write_results(table, spec.out);
  const auto s = summarize_scaling(table);
  out << "n,lambda,success_rate,median_T,theorem9_reference\n";
  for (const auto& p : s.points) {
    fmt::print(out, "{},{},{},{},{}\n", p.n, p.lambda, p.success_rate, format_optional(p.median_T),
               format_optional(p.theorem9_reference));
  }
  fmt::print(out, "log-log slope of median T in n: {}\n", format_optional(s.slope_in_n));
  fmt::print(out, "rank correlation of median T with n: {}\n",
             format_optional(s.rank_correlation));
  fmt::print(out, "median T non-decreasing in n: {}\n", s.median_non_decreasing_in_n);
  return kExitOk;
}

int cmd_trajectory(const ExperimentSpec& spec, std::ostream& out) {
  const TrajectoryResult res = experiment_trajectory(spec);
  if (!spec.out.empty()) {
    write_text_file(spec.out, format_trajectory_csv(res));
    write_results(res.table, spec.out + ".trials.csv");
  }
  out << aggregate_table(res.table.aggregates);
  fmt::print(out, "successful runs: {}\n", res.successful_runs);
  fmt::print(out, "pre-hit generations: {}, without prey in S0: {} (fraction {})\n",
             res.pre_hit_generations, res.pre_hit_without_s0, res.s0_empty_fraction());
  fmt::print(out, "runs whose predators descended: {} of {}\n", res.descended_runs,
             res.successful_runs);
  return kExitOk;
}

struct BoundFlags {
  std::string theorem = "9";
  std::size_t n = 100;
  std::size_t lambda = 100;
  double delta = 0.01;
  double chi = 0.0;
  CLI::Option* chi_opt = nullptr;
  double alpha = 0.9;
  double beta = 0.05;
  double epsilon = 0.1;
  double r = 1.0;
  double c_pp = 1.0;
  std::size_t m = 1;
  std::vector<double> z;
};

int cmd_bound(const BoundFlags& b, std::ostream& out) {
  if (b.theorem == "3") {
    Theorem3Inputs in{b.m, b.lambda, b.delta, b.z, b.c_pp};
    const auto t = theorem3_bound(in);
    fmt::print(out, "prefactor = {}\nlevel_term = {}\nsum_term = {}\nbound = {}\n", t.prefactor,
               t.level_term, t.sum_term, t.value);
  } else if (b.theorem == "9") {
    const double chi = b.chi_opt->count() > 0 ? b.chi : theorem9_chi(b.delta);
    Theorem9Inputs in{b.n, b.lambda, chi, b.alpha, b.beta, b.epsilon, b.r, b.c_pp};
    const auto t = theorem9_budget(in);
    fmt::print(out,
               "chi = {}\ndelta = {}\nprefactor = {}\npopulation_term = {}\nmutation_term = {}\n"
               "budget_interactions = {}\nbudget_generations = {}\n",
               chi, t.delta, t.prefactor, t.population_term, t.mutation_term, t.value,
               t.generations());
  } else if (b.theorem == "threshold") {
    fmt::print(out, "error_threshold = {}\n", error_threshold(b.delta));
  } else {
    throw std::invalid_argument(fmt::format("--theorem must be 3, 9 or threshold, got '{}'", b.theorem));
  }
  return kExitOk;
}

int cmd_emit_plots(const std::string& from, const std::string& path, std::ostream& out) {
  const auto parsed = parse_csv(read_text_file(from));
  const auto text = format_plot_data(aggregate_rows(parsed.rows));
  if (path.empty()) {
    out << text;
  } else {
    write_text_file(path, text);
    fmt::print(out, "wrote {}\n", path);
  }
  return kExitOk;
}

ExperimentSpec threshold_defaults() {
  ExperimentSpec s;
  s.kind = ExperimentKind::ErrorThreshold;
  s.n = {100};
  s.lambda = {100};
  s.chi = {0.05, 0.2, 0.5, 0.7, 1.0, 1.4};
  s.alpha = {0.0};
  s.beta = {1.0};
  s.epsilon = {1.0};
  s.target = TargetKind::Singleton;
  s.budget_generations = 10000;
  s.trials = 20;
  return s;
}

ExperimentSpec scaling_defaults() {
  ExperimentSpec s;
  s.kind = ExperimentKind::RuntimeScaling;
  s.n = {30, 50, 80};
  s.lambda = {100};
  s.chi_from_delta = true;
  s.delta = {0.01};
  s.budget_rule = BudgetRule::Pilot;
  s.trials = 30;
  return s;
}

ExperimentSpec trajectory_defaults() {
  ExperimentSpec s = scaling_defaults();
  s.kind = ExperimentKind::Trajectory;
  s.n = {100};
  return s;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pairwise dominance co-evolution on the Bilinear game"};
  app.require_subcommand(1);

  CommonFlags run_flags, sweep_flags, threshold_flags, scaling_flags, trajectory_flags;
  ExperimentSpec run_spec;
  run_spec.trials = 1;
  run_spec.n = {50};
  run_spec.lambda = {100};
  run_spec.chi = {1.0};
  std::string run_target = "bilinear";

  auto* run = app.add_subcommand("run", "run one trial and print its record");
  add_common(run, run_flags);
  run->add_option("--n", run_spec.n.front(), "genome length");
  run->add_option("--lambda", run_spec.lambda.front(), "population size");
  auto* run_chi = run->add_option("--chi", run_spec.chi.front(), "mutation parameter");
  run->add_option("--delta", run_spec.delta.front(), "delta; sets chi from it when --chi is absent");
  run->add_option("--alpha", run_spec.alpha.front());
  run->add_option("--beta", run_spec.beta.front());
  run->add_option("--epsilon", run_spec.epsilon.front());
  run->add_option("--target", run_target)->check(CLI::IsMember({"bilinear", "singleton"}));

  auto* sweep = app.add_subcommand("sweep", "run a grid from a config file");
  add_common(sweep, sweep_flags);
  auto* threshold = app.add_subcommand("threshold", "success rate against chi");
  add_common(threshold, threshold_flags);
  auto* scaling = app.add_subcommand("scaling", "runtime against n and lambda");
  add_common(scaling, scaling_flags);
  auto* trajectory = app.add_subcommand("trajectory", "per-generation statistics");
  add_common(trajectory, trajectory_flags);

  BoundFlags bound_flags;
  auto* bound = app.add_subcommand("bound", "evaluate the runtime bounds");
  bound->add_option("--theorem", bound_flags.theorem, "3, 9 or threshold");
  bound->add_option("--n", bound_flags.n);
  bound->add_option("--lambda", bound_flags.lambda);
  bound->add_option("--delta", bound_flags.delta);
  bound_flags.chi_opt = bound->add_option("--chi", bound_flags.chi);
  bound->add_option("--alpha", bound_flags.alpha);
  bound->add_option("--beta", bound_flags.beta);
  bound->add_option("--epsilon", bound_flags.epsilon);
  bound->add_option("--r", bound_flags.r);
  bound->add_option("--cpp", bound_flags.c_pp, "constant c''");
  bound->add_option("--m", bound_flags.m, "number of levels");
  bound->add_option("--z", bound_flags.z, "z_1 .. z_{m-1}");

  std::string suite = "all";
  std::uint64_t check_seed = 1;
  auto* check = app.add_subcommand("check", "run property suites");
  check->add_option("--suite", suite)->check(CLI::IsMember(check_suite_names()));
  check->add_option("--seed", check_seed);

  std::string plot_from;
  std::string plot_out;
  auto* plots = app.add_subcommand("emit-plots", "long-format plot data from a results CSV");
  plots->add_option("--from", plot_from, "results CSV")->required()->check(CLI::ExistingFile);
  plots->add_option("--out", plot_out, "output file (stdout when absent)");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("coevo");

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run->parsed()) {
      ExperimentSpec spec = run_spec;
      spec.chi_from_delta = run_chi->count() == 0 && run->count("--delta") > 0;
      spec.target = run_target == "singleton" ? TargetKind::Singleton : TargetKind::Bilinear;
      return cmd_run(build_spec(spec, run_flags), out);
    }
    if (sweep->parsed()) {
      if (sweep_flags.config.empty() && sweep_flags.sets.empty()) {
        throw std::invalid_argument("sweep needs --config or --set");
      }
      return cmd_sweep(build_spec(ExperimentSpec{}, sweep_flags), out);
    }
    if (threshold->parsed()) return cmd_threshold(build_spec(threshold_defaults(), threshold_flags), out);
    if (scaling->parsed()) return cmd_scaling(build_spec(scaling_defaults(), scaling_flags), out);
    if (trajectory->parsed()) {
      return cmd_trajectory(build_spec(trajectory_defaults(), trajectory_flags), out);
    }
    if (bound->parsed()) return cmd_bound(bound_flags, out);
    if (check->parsed()) {
      const auto report = run_check_suite(suite, check_seed);
      out << format_report(report);
      return report.passed() ? kExitOk : kExitCheckFailed;
    }
    if (plots->parsed()) return cmd_emit_plots(plot_from, plot_out, out);
  } catch (const std::invalid_argument& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kExitIo;
  }
  return kExitUsage;
}

}  // namespace coevo
