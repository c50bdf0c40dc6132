// Runs every acceptance criterion at its stated tolerance and prints one
// PASS/FAIL line per criterion. Exit status is nonzero when any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "coevo/checks.hpp"
#include "coevo/cli.hpp"
#include "coevo/config.hpp"
#include "coevo/experiment.hpp"
#include "coevo/random.hpp"
#include "coevo/theory.hpp"

using namespace coevo;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome combine(const std::vector<CheckLine>& lines) {
  Outcome o{!lines.empty(), {}};
  for (const auto& l : lines) {
    o.pass = o.pass && l.pass;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += fmt::format("{}{}: {}", l.pass ? "" : "FAILED ", l.name, l.detail);
  }
  return o;
}

Outcome onecount_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<CheckLine> lines;
  for (const auto& [a, b] : {std::pair{0.4, 0.6}, {0.9, 0.05}, {0.0, 1.0}}) {
    lines.push_back(check_onecount_equivalence(10, a, b, 1));
  }
  const double secs = seconds_since(t0);
  auto o = combine(lines);
  o.pass = o.pass && secs < 1.0;
  o.detail += fmt::format("; {:.3f} s for all three games", secs);
  return o;
}

Outcome dominance_structure() {
  std::vector<CheckLine> lines;
  for (const auto& [a, b] : {std::pair{0.4, 0.6}, {0.9, 0.05}, {0.0, 1.0}}) {
    lines.push_back(check_reflexivity(10, a, b));
  }
  lines.push_back(check_intransitivity(20, 0.4, 0.6));
  return combine(lines);
}

Outcome conditional_halves() { return combine({check_conditional_halves(100, 6, 10, 2)}); }

Outcome level_function_validator() { return combine(check_level_function_suite()); }

Outcome selection_oracle() { return combine({check_selection_oracle(20, 100000, 3)}); }

Outcome growth_lemmas() { return combine(check_growth_suite(25, 4)); }

Outcome inequality_suite() {
  auto lines = check_inequality_suite(1000000, 5);
  auto o = combine(lines);
  const auto sandwich = std::find_if(lines.begin(), lines.end(),
                                     [](const CheckLine& l) { return l.name == "sqrt-sandwich"; });
  o.pass = o.pass && sandwich != lines.end() &&
           sandwich->detail.rfind("1000000 points", 0) == 0;
  return o;
}

Outcome error_threshold_transition() {
  ExperimentSpec s;
  s.kind = ExperimentKind::ErrorThreshold;
  s.n = {100};
  s.lambda = {100};
  s.chi = {0.05, 0.7, 1.4};
  s.alpha = {0.0};
  s.beta = {1.0};
  s.epsilon = {1.0};
  s.target = TargetKind::Singleton;
  s.budget_rule = BudgetRule::Explicit;
  s.budget_generations = 10000;
  s.trials = 20;
  s.seed = 8;
  const auto summary = summarize_threshold(run_experiment(s));
  double at_high = -1.0;
  std::string rates;
  for (const auto& p : summary.points) {
    if (p.chi == 1.4) at_high = p.success_rate;
    rates += fmt::format(" chi={}:{}/{}", p.chi, p.hits, p.trials);
  }
  return {at_high == 0.0 && summary.non_increasing,
          fmt::format("success{}; non-increasing {}", rates, summary.non_increasing)};
}

Outcome theorem9_regime() {
  ExperimentSpec s;
  s.kind = ExperimentKind::RuntimeScaling;
  s.n = {30, 50, 80};
  s.lambda = {100};
  s.chi_from_delta = true;
  s.delta = {0.01};
  s.alpha = {0.9};
  s.beta = {0.05};
  s.epsilon = {0.1};
  s.budget_rule = BudgetRule::Pilot;
  s.pilot_runs = 10;
  s.pilot_multiplier = 10.0;
  s.trials = 30;
  s.seed = 9;
  const auto table = run_experiment(s);
  bool ok = true;
  std::string cells;
  for (const auto& a : table.aggregates) {
    ok = ok && a.success_rate >= 0.9;
    cells += fmt::format(" n={}:{}/{} median {} budget {}", a.n, a.hits, a.trials,
                         a.median_T ? fmt::format("{}", *a.median_T) : "-", a.budget_generations);
  }
  const bool multiples = std::all_of(table.rows.begin(), table.rows.end(), [](const TrialRow& r) {
    return r.T_interactions % r.lambda == 0;
  });
  const auto scaling = summarize_scaling(table);
  return {ok && multiples && scaling.median_non_decreasing_in_n,
          fmt::format("{}; T multiples of lambda {}; median non-decreasing {}", cells, multiples,
                      scaling.median_non_decreasing_in_n)};
}

Outcome s0_reflection() {
  ExperimentSpec s;
  s.kind = ExperimentKind::Trajectory;
  s.n = {100};
  s.lambda = {100};
  s.chi_from_delta = true;
  s.delta = {0.01};
  s.alpha = {0.9};
  s.beta = {0.05};
  s.epsilon = {0.1};
  s.budget_rule = BudgetRule::Pilot;
  s.trials = 30;
  s.seed = 10;
  const auto r = experiment_trajectory(s);
  const double frac = r.s0_empty_fraction();
  return {r.successful_runs >= 30 && frac >= 0.99,
          fmt::format("{} successful runs, {} of {} pre-hit generations without prey in S0 ({:.5f})",
                      r.successful_runs, r.pre_hit_without_s0, r.pre_hit_generations, frac)};
}

std::string strip_wall_time(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.rfind("wall_ms", 0) == 0) continue;
    if (!line.empty() && line.front() != '#' && line.find(',') != std::string::npos &&
        line.rfind("kind,", 0) != 0) {
      line = line.substr(0, line.rfind(','));
    }
    out += line + "\n";
  }
  return out;
}

Outcome determinism() {
  const auto invoke = [](std::vector<std::string> args) {
    args.insert(args.begin(), "coevo");
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return std::pair{code, out.str()};
  };
  const std::vector<std::vector<std::string>> commands{
      {"run", "--n", "50", "--lambda", "20", "--chi", "0.012", "--seed", "7", "--budget", "20000"},
      {"run", "--n", "40", "--lambda", "30", "--delta", "0.01", "--seed", "3", "--trials", "3",
       "--budget", "20000"},
      {"sweep", "--set", "n=20,30", "--set", "lambda=20", "--set", "chi=0.5,1", "--seed", "11",
       "--trials", "4", "--budget", "2000", "--threads", "1"},
  };
  std::size_t identical = 0;
  for (const auto& c : commands) {
    const auto a = invoke(c);
    const auto b = invoke(c);
    if (a.first == 0 && b.first == 0 && strip_wall_time(a.second) == strip_wall_time(b.second)) {
      ++identical;
    }
  }
  // Same sweep on three workers must match the single-worker output.
  auto threaded = commands.back();
  threaded.back() = "3";
  const bool workers = strip_wall_time(invoke(commands.back()).second) ==
                       strip_wall_time(invoke(threaded).second);
  return {identical == commands.size() && workers,
          fmt::format("{}/{} commands byte-identical on repeat; 1 vs 3 workers identical {}",
                      identical, commands.size(), workers)};
}

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

Outcome calculators() {
  RandomStream rng(12);
  const auto uni = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform01(); };
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    // theorem3_bound
    const std::size_t m = 1 + rng.uniform_below(20);
    const std::size_t lambda = 1 + rng.uniform_below(500);
    const double delta = uni(0.01, 1.0);
    const double cpp = uni(1.0, 5.0);
    std::vector<double> z(m - 1);
    for (auto& v : z) v = uni(0.01, 1.0);
    long double inv_sum = 0.0L;
    for (double v : z) inv_sum += 1.0L / v;
    const long double l = lambda;
    const long double t3 = (cpp * l / delta) * (m * l * l + 16.0L * inv_sum);
    worst = std::max(worst, rel_err(theorem3_bound({m, lambda, delta, z, cpp}).value,
                                    static_cast<double>(t3)));

    // theorem9_chi
    const double d9 = uni(1e-4, 1.0 / 41.0 - 1e-4);
    const long double chi_ref = 0.5L * std::log(42.0L / (41.0L * (1.0L + d9)));
    const double chi = theorem9_chi(d9);
    worst = std::max(worst, rel_err(chi, static_cast<double>(chi_ref)));

    // theorem9_budget
    const std::size_t n = 10 + rng.uniform_below(1000);
    const double alpha = uni(0.85, 1.0);
    const double eps = uni(0.01, alpha - 0.8);
    const double beta = uni(0.001, eps);
    const double r = uni(0.5, 3.0);
    const long double d_ref = (42.0L / 41.0L) * std::exp(-2.0L * chi) - 1.0L;
    const long double nl = n;
    const long double b_ref = (2.0L * r * cpp * l / d_ref) *
                              (l * l * nl + (23.0L * nl / chi) *
                                                std::log(1.0L / (beta * (1.0L - alpha + eps))));
    worst = std::max(worst, rel_err(theorem9_budget({n, lambda, chi, alpha, beta, eps, r, cpp}).value,
                                    static_cast<double>(b_ref)));

    // error_threshold
    const double de = uni(0.001, 0.49);
    const long double e_ref = std::log(2.0L) / (1.0L - 2.0L * de);
    worst = std::max(worst, rel_err(error_threshold(de), static_cast<double>(e_ref)));
  }
  return {worst <= 1e-12, fmt::format("40 evaluations, max relative error {:.3g}", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 one-count dominance equivalence", onecount_equivalence},
      {"2 reflexivity and intransitive cycle", dominance_structure},
      {"3 conditional half-probabilities", conditional_halves},
      {"4 level function validator", level_function_validator},
      {"5 selection distribution oracle", selection_oracle},
      {"6 growth inequalities", growth_lemmas},
      {"7 inequality suite", inequality_suite},
      {"8 error-threshold transition", error_threshold_transition},
      {"9 solvability at the derived mutation rate", theorem9_regime},
      {"10 no prey in S0 before the hit", s0_reflection},
      {"11 determinism", determinism},
      {"12 calculators", calculators},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o{false, {}};
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    if (!o.pass) ++failed;
    fmt::print("{} criterion {} ({:.1f} s): {}\n", o.pass ? "PASS" : "FAIL", name,
               seconds_since(t0), o.detail);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failed),
             criteria.size());
  return failed == 0 ? 0 : 1;
}
