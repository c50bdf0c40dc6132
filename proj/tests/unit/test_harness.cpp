#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "coevo/cli.hpp"
#include "coevo/config.hpp"
#include "coevo/experiment.hpp"
#include "coevo/persistence.hpp"
#include "coevo/random.hpp"
#include "coevo/theory.hpp"

using namespace coevo;

namespace {

ExperimentSpec quick_spec() {
  return parse_config(R"(
kind = runtime-scaling
n = 12, 16
lambda = 8
chi = 1.0
alpha = 0.5
beta = 0.25
epsilon = 0.25
trials = 3
seed = 99
budget = 400
)");
}

// Drops the last comma-separated field of every data line.
std::string without_wall_time(const std::string& csv) {
  std::istringstream in(csv);
  std::string line, out;
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() != '#') line = line.substr(0, line.rfind(','));
    out += line + "\n";
  }
  return out;
}

std::string drop_lines_with(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.rfind(key, 0) != 0) out += line + "\n";
  }
  return out;
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "coevo");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("coevo_test_" + name);
}

}  // namespace

TEST_CASE("config text parses lists, comments and budget rules") {
  const auto s = parse_config(R"(
# comment line
kind = error-threshold
n = 30, 50,80   # trailing comment
chi = 0.05,1.4
target = singleton
budget = theorem9*0.5
threads = 3
)");
  CHECK(s.kind == ExperimentKind::ErrorThreshold);
  CHECK(s.n == std::vector<std::size_t>{30, 50, 80});
  CHECK(s.chi == std::vector<double>{0.05, 1.4});
  CHECK(s.target == TargetKind::Singleton);
  CHECK(s.budget_rule == BudgetRule::Theorem9);
  CHECK(s.budget_factor == 0.5);
  CHECK(s.threads == 3);
  CHECK(parse_config("budget = pilot").budget_rule == BudgetRule::Pilot);
  CHECK(parse_config("chi = theorem9").chi_from_delta);
}

TEST_CASE("config errors carry line numbers") {
  const auto message = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const std::invalid_argument& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("n = 10\nbogus = 1\n").find("line 2") != std::string::npos);
  CHECK(message("n = 10,,20").find("line 1") != std::string::npos);
  CHECK(message("n = ten").find("line 1") != std::string::npos);
  CHECK(message("just text").find("line 1") != std::string::npos);
  CHECK_THROWS_AS(parse_config("trials = 0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("n = 0"), std::invalid_argument);
  CHECK_THROWS_AS(load_config("/nonexistent/coevo.cfg"), std::runtime_error);
}

TEST_CASE("config echo parses back to the same spec") {
  const auto s = quick_spec();
  const auto back = parse_config(to_config_text(s));
  CHECK(to_config_text(back) == to_config_text(s));
  CHECK(back.n == s.n);
  CHECK(back.seed == s.seed);
}

TEST_CASE("grid expansion is the full product in canonical order") {
  auto s = parse_config("n = 10, 20\nlambda = 4, 8\nchi = 0.5, 1, 2\n");
  const auto cells = expand_grid(s);
  REQUIRE(cells.size() == 12);
  for (std::size_t i = 0; i < cells.size(); ++i) CHECK(cells[i].index == i);
  CHECK(cells.front().n == 10);
  CHECK(cells.back().n == 20);
  s.chi_from_delta = true;
  s.delta = {0.01, 0.02};
  const auto derived = expand_grid(s);
  CHECK(derived.size() == 8);
  CHECK(derived[0].chi == doctest::Approx(theorem9_chi(0.01)));
}

TEST_CASE("unit seeds depend only on master seed, cell and trial") {
  const auto s = quick_spec();
  CHECK(unit_seed(s, 1, 2) == child_seed(99, 1 * 3 + 2));
  CHECK(unit_seed(s, 0, 0) != unit_seed(s, 0, 1));
}

TEST_CASE("one cell and one trial reduce to run_trial") {
  auto s = quick_spec();
  s.n = {12};
  s.trials = 1;
  const auto t = run_experiment(s);
  REQUIRE(t.rows.size() == 1);
  const auto cells = expand_grid(s);
  const auto rec = run_trial(cell_config(s, cells[0], 0, t.budgets[0]), cell_target(s, cells[0]));
  CHECK(t.rows[0].hit == rec.hit);
  CHECK(t.rows[0].T_interactions == rec.T_interactions);
  CHECK(t.rows[0].generations == rec.generations_run);
  CHECK(t.rows[0].seed == rec.seed);
}

TEST_CASE("two cells with three trials give six rows and two aggregates") {
  const auto t = run_experiment(quick_spec());
  CHECK(t.rows.size() == 6);
  CHECK(t.aggregates.size() == 2);
  for (const auto& a : t.aggregates) {
    CHECK(a.trials == 3);
    CHECK(a.hits + a.censored == 3);
    CHECK(a.budget_generations == 400);
  }
  for (const auto& r : t.rows) CHECK(r.T_interactions % r.lambda == 0);
}

TEST_CASE("results do not depend on the worker count") {
  auto s = quick_spec();
  s.threads = 1;
  const auto one = format_csv(run_experiment(s));
  s.threads = 3;
  const auto three = format_csv(run_experiment(s));
  CHECK(without_wall_time(one) == without_wall_time(three));
}

TEST_CASE("quantiles interpolate linearly") {
  const std::vector<double> v{1, 2, 3, 4};
  CHECK(quantile_sorted(v, 0.0) == 1.0);
  CHECK(quantile_sorted(v, 1.0) == 4.0);
  CHECK(quantile_sorted(v, 0.5) == 2.5);
  CHECK(quantile_sorted(v, 0.25) == 1.75);
  CHECK(quantile_sorted({7}, 0.3) == 7.0);
}

TEST_CASE("censored trials count toward the success rate only") {
  TrialRow hit{"x", 10, 4, 1, 0.5, 0.5, 0.5, 0.01, 1, 0, 1, true, 40, 10, 0.0};
  TrialRow miss = hit;
  miss.hit = false;
  miss.T_interactions = 4000;
  miss.generations = 1000;
  TrialRow hit2 = hit;
  hit2.T_interactions = 80;
  const auto a = aggregate_rows({hit, miss, hit2});
  REQUIRE(a.size() == 1);
  CHECK(a[0].hits == 2);
  CHECK(a[0].censored == 1);
  CHECK(a[0].success_rate == doctest::Approx(2.0 / 3.0));
  CHECK(*a[0].median_T == 60.0);
  CHECK(*a[0].mean_T == 60.0);
  const auto none = aggregate_rows({miss});
  CHECK_FALSE(none[0].median_T.has_value());
}

TEST_CASE("persisted rows and aggregates round-trip") {
  const auto t = run_experiment(quick_spec());
  const auto csv = format_csv(t);
  const auto parsed = parse_csv(csv);
  REQUIRE(parsed.rows.size() == t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& a = t.rows[i];
    const auto& b = parsed.rows[i];
    CHECK(a.kind == b.kind);
    CHECK(a.n == b.n);
    CHECK(a.chi == b.chi);
    CHECK(a.alpha == b.alpha);
    CHECK(a.seed == b.seed);
    CHECK(a.hit == b.hit);
    CHECK(a.T_interactions == b.T_interactions);
    CHECK(a.generations == b.generations);
  }
  const auto stored = parse_aggregates_json(format_aggregates_json(t));
  const auto recomputed = aggregate_rows(parsed.rows);
  REQUIRE(stored.size() == recomputed.size());
  for (std::size_t i = 0; i < stored.size(); ++i) {
    CHECK(stored[i].hits == recomputed[i].hits);
    CHECK(stored[i].censored == recomputed[i].censored);
    CHECK(stored[i].success_rate == recomputed[i].success_rate);
    CHECK(stored[i].median_T == recomputed[i].median_T);
    CHECK(stored[i].q25_T == recomputed[i].q25_T);
    CHECK(stored[i].q75_T == recomputed[i].q75_T);
    CHECK(stored[i].mean_T == recomputed[i].mean_T);
  }
}

TEST_CASE("results files are self-describing") {
  const auto t = run_experiment(quick_spec());
  const auto parsed = parse_csv(format_csv(t));
  const auto has = [&](const std::string& h) {
    return std::find(parsed.header.begin(), parsed.header.end(), h) != parsed.header.end();
  };
  CHECK(has("schema_version = 1"));
  CHECK(has("master_seed = 99"));
  CHECK(has("spec: n = 12, 16"));
  CHECK(format_csv(t).find(std::string(kCsvColumns)) != std::string::npos);
}

TEST_CASE("malformed results are rejected") {
  CHECK_THROWS_AS(parse_csv("# only a header\n"), IoError);
  CHECK_THROWS_AS(parse_csv(std::string(kCsvColumns) + "\nx,1,2\n"), IoError);
  CHECK_THROWS_AS(parse_aggregates_json("{not json"), IoError);
  CHECK_THROWS_AS(read_text_file("/nonexistent/coevo.csv"), IoError);
  CHECK_THROWS_AS(write_text_file("/nonexistent/dir/coevo.csv", "x"), IoError);
}

TEST_CASE("threshold summary finds the collapse") {
  ResultTable t;
  const auto agg = [](double chi, std::size_t hits) {
    CellAggregate a{};
    a.chi = chi;
    a.trials = 10;
    a.hits = hits;
    a.success_rate = hits / 10.0;
    return a;
  };
  t.aggregates = {agg(1.4, 0), agg(0.05, 9), agg(0.7, 0), agg(0.2, 5)};
  const auto s = summarize_threshold(t);
  REQUIRE(s.points.size() == 4);
  CHECK(s.points.front().chi == 0.05);
  CHECK(s.non_increasing);
  CHECK(*s.last_success_chi == 0.2);
  CHECK(*s.first_zero_chi == 0.7);
  t.aggregates.push_back(agg(2.0, 1));
  CHECK_FALSE(summarize_threshold(t).non_increasing);
}

TEST_CASE("trajectory samples cover every generation of every run") {
  auto s = parse_config("kind = trajectory\nn = 16\nlambda = 10\nchi = theorem9\ndelta = 0.01\n"
                        "alpha = 0.9\nbeta = 0.05\nepsilon = 0.1\ntrials = 3\nbudget = 5000\n");
  const auto r = experiment_trajectory(s);
  CHECK(r.table.rows.size() == 3);
  std::size_t expected = 0;
  for (const auto& row : r.table.rows) expected += row.generations + 1;
  CHECK(r.samples.size() == expected);
  for (const auto& smp : r.samples) {
    CHECK(smp.phase >= 1);
    CHECK(smp.phase <= 2);
  }
  CHECK(r.s0_empty_fraction() >= 0.0);
  CHECK(r.s0_empty_fraction() <= 1.0);
}

TEST_CASE("cli run is deterministic apart from wall time") {
  const std::vector<std::string> args{"run", "--n", "30", "--lambda", "20", "--chi", "0.012",
                                      "--seed", "7", "--budget", "3000"};
  const auto a = cli(args);
  const auto b = cli(args);
  CHECK(a.code == kExitOk);
  CHECK(a.out.find("wall_ms = ") != std::string::npos);
  CHECK(drop_lines_with(a.out, "wall_ms") == drop_lines_with(b.out, "wall_ms"));
}

TEST_CASE("cli exit codes") {
  CHECK(cli({"--help"}).code == kExitOk);
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"run", "--no-such-flag"}).code == kExitUsage);
  CHECK(cli({"frobnicate"}).code == kExitUsage);
  CHECK(cli({"check", "--suite", "nonsense"}).code == kExitUsage);
  CHECK(cli({"sweep", "--set", "n=0"}).code == kExitUsage);
  CHECK(cli({"sweep", "--set", "n=8", "--set", "lambda=4", "--set", "budget=5", "--set",
             "epsilon=0.25", "--out",
             "/nonexistent/dir/out.csv"})
            .code == kExitIo);
  CHECK(cli({"bound", "--theorem", "7"}).code == kExitUsage);
}

TEST_CASE("cli check suite prints a summary") {
  const auto r = cli({"check", "--suite", "dominance"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("11^4 quadruples verified") != std::string::npos);
}

TEST_CASE("cli bound prints the term breakdown") {
  const auto r = cli({"bound", "--theorem", "9", "--n", "100", "--lambda", "100", "--delta", "0.01"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("population_term = 1000000") != std::string::npos);
  CHECK(r.out.find("mutation_term = ") != std::string::npos);
  CHECK(r.out.find("budget_generations = ") != std::string::npos);
  const auto t = cli({"bound", "--theorem", "threshold", "--delta", "0.01"});
  CHECK(t.out.find("error_threshold = ") != std::string::npos);
}

TEST_CASE("cli sweep writes results and emit-plots reads them back") {
  const auto cfg = temp_path("sweep.cfg");
  const auto csv = temp_path("sweep.csv");
  const auto plot = temp_path("plot.csv");
  write_text_file(cfg.string(), to_config_text(quick_spec()));
  const auto r = cli({"sweep", "--config", cfg.string(), "--threads", "2", "--out", csv.string()});
  REQUIRE(r.code == kExitOk);
  CHECK(std::filesystem::exists(csv.string() + ".json"));
  const auto p = cli({"emit-plots", "--from", csv.string(), "--out", plot.string()});
  REQUIRE(p.code == kExitOk);
  const auto text = read_text_file(plot.string());
  CHECK(text.rfind("n,lambda,chi,alpha,beta,epsilon,delta,r,metric,value\n", 0) == 0);
  CHECK(text.find(",success_rate,") != std::string::npos);
  std::filesystem::remove(cfg);
  std::filesystem::remove(csv);
  std::filesystem::remove(csv.string() + ".json");
  std::filesystem::remove(plot);
}
