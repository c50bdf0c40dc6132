#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "coevo/bilinear.hpp"
#include "coevo/checks.hpp"
#include "coevo/cli.hpp"
#include "coevo/config.hpp"
#include "coevo/experiment.hpp"
#include "coevo/pdcoea.hpp"
#include "coevo/persistence.hpp"
#include "coevo/theory.hpp"

namespace py = pybind11;

namespace {

py::dict row_dict(const coevo::TrialRow& r) {
  py::dict d;
  d["kind"] = r.kind;
  d["n"] = r.n;
  d["lambda"] = r.lambda;
  d["chi"] = r.chi;
  d["alpha"] = r.alpha;
  d["beta"] = r.beta;
  d["epsilon"] = r.epsilon;
  d["delta"] = r.delta;
  d["r"] = r.r;
  d["trial"] = r.trial;
  d["seed"] = r.seed;
  d["hit"] = r.hit;
  d["T_interactions"] = r.T_interactions;
  d["generations"] = r.generations;
  d["wall_ms"] = r.wall_ms;
  return d;
}

}  // namespace

PYBIND11_MODULE(_coevo, m) {
  m.doc() = "Pairwise dominance co-evolution on the Bilinear game";

  py::class_<coevo::BilinearParams>(m, "BilinearParams")
      .def(py::init(&coevo::BilinearParams::make), py::arg("n"), py::arg("alpha"),
           py::arg("beta"), py::arg("epsilon"))
      .def_property_readonly("n", &coevo::BilinearParams::n)
      .def_property_readonly("alpha_n", &coevo::BilinearParams::alpha_n)
      .def_property_readonly("beta_n", &coevo::BilinearParams::beta_n)
      .def_property_readonly("target_low", &coevo::BilinearParams::target_low)
      .def("__repr__", &coevo::BilinearParams::describe);

  m.def("payoff_counts", &coevo::payoff_counts, py::arg("ones_x"), py::arg("ones_y"), py::arg("game"));
  m.def("worst_case_f_count", &coevo::worst_case_f_count, py::arg("ones_x"), py::arg("game"));
  m.def("dominates_by_onecounts", &coevo::dominates_by_onecounts, py::arg("x1"), py::arg("y1"),
        py::arg("x2"), py::arg("y2"), py::arg("game"));
  m.def(
      "intransitivity_witness",
      [](const coevo::BilinearParams& p) -> std::optional<std::vector<std::pair<std::int64_t, std::int64_t>>> {
        const auto c = coevo::intransitivity_witness(p);
        if (!c) return std::nullopt;
        std::vector<std::pair<std::int64_t, std::int64_t>> out;
        for (const auto& v : *c) out.emplace_back(v.x, v.y);
        return out;
      },
      py::arg("game"));

  m.def("theorem9_chi", &coevo::theorem9_chi, py::arg("delta"));
  m.def("theorem9_delta", &coevo::theorem9_delta, py::arg("chi"));
  m.def("error_threshold", &coevo::error_threshold, py::arg("delta"));
  m.def(
      "theorem3_bound",
      [](std::size_t m_levels, std::size_t lambda, double delta, std::vector<double> z, double c_pp) {
        return coevo::theorem3_bound({m_levels, lambda, delta, std::move(z), c_pp}).value;
      },
      py::arg("m"), py::arg("lambda_"), py::arg("delta"), py::arg("z"), py::arg("c_pp") = 1.0);
  m.def(
      "theorem9_budget",
      [](std::size_t n, std::size_t lambda, double chi, double alpha, double beta, double epsilon,
         double r, double c_pp) {
        return coevo::theorem9_budget({n, lambda, chi, alpha, beta, epsilon, r, c_pp}).value;
      },
      py::arg("n"), py::arg("lambda_"), py::arg("chi"), py::arg("alpha") = 0.9,
      py::arg("beta") = 0.05, py::arg("epsilon") = 0.1, py::arg("r") = 1.0, py::arg("c_pp") = 1.0);

  m.def(
      "run_trial",
      [](std::size_t n, std::size_t lambda, double chi, double alpha, double beta, double epsilon,
         std::uint64_t seed, std::uint64_t budget) {
        coevo::PdcoeaConfig cfg;
        cfg.lambda = lambda;
        cfg.chi = chi;
        cfg.seed = seed;
        cfg.budget_generations = budget;
        cfg.record_trajectory = false;
        cfg.game = coevo::BilinearParams::make(n, alpha, beta, epsilon);
        const auto rec = coevo::run_trial(cfg);
        py::dict d;
        d["hit"] = rec.hit;
        d["T_interactions"] = rec.T_interactions;
        d["generations"] = rec.generations_run;
        d["seed"] = rec.seed;
        return d;
      },
      py::arg("n"), py::arg("lambda_"), py::arg("chi"), py::arg("alpha") = 0.9,
      py::arg("beta") = 0.05, py::arg("epsilon") = 0.1, py::arg("seed") = 1,
      py::arg("budget") = 10000);

  m.def(
      "run_experiment",
      [](const std::string& config_text) {
        const auto spec = coevo::parse_config(config_text);
        coevo::ResultTable table;
        {
          py::gil_scoped_release release;
          table = coevo::run_experiment(spec);
        }
        py::list rows;
        for (const auto& r : table.rows) rows.append(row_dict(r));
        return rows;
      },
      py::arg("config_text"));
  m.def(
      "results_csv",
      [](const std::string& config_text) {
        const auto spec = coevo::parse_config(config_text);
        py::gil_scoped_release release;
        return coevo::format_csv(coevo::run_experiment(spec));
      },
      py::arg("config_text"));

  m.def(
      "check_suite",
      [](const std::string& suite, std::uint64_t seed) {
        const auto report = coevo::run_check_suite(suite, seed);
        return std::make_pair(report.passed(), coevo::format_report(report));
      },
      py::arg("suite"), py::arg("seed") = 1);

  m.def(
      "cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "coevo");
        std::ostringstream out, err;
        const int code = coevo::run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
