#include "coevo/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <fmt/format.h>

#include "coevo/levels.hpp"
#include "coevo/theory.hpp"

namespace coevo {

namespace {

constexpr std::uint64_t kPilotDomain = 0x70696c6f74ULL;

std::size_t worker_count(const ExperimentSpec& spec, std::size_t units) {
  std::size_t w = spec.threads;
  if (w == 0) w = std::max(1U, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(w, units));
}

// Runs fn(unit) for unit in [0, units) on the requested number of workers.
void parallel_for(std::size_t units, std::size_t workers,
                  const std::function<void(std::size_t)>& fn) {
  if (workers <= 1) {
    for (std::size_t u = 0; u < units; ++u) fn(u);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t u = next++; u < units; u = next++) fn(u);
      } catch (...) {
        errors[w] = std::current_exception();
        next = units;
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

using CellKey = std::tuple<std::size_t, std::size_t, double, double, double, double, double, double>;

CellKey key_of(const TrialRow& r) {
  return {r.n, r.lambda, r.chi, r.alpha, r.beta, r.epsilon, r.delta, r.r};
}

TrialRow row_for(const ExperimentSpec& spec, const Cell& c, std::size_t trial,
                 const TrialRecord& rec, double wall_ms) {
  return TrialRow{std::string(to_string(spec.kind)), c.n, c.lambda, c.chi, c.alpha, c.beta,
                  c.epsilon, c.delta, c.r, trial, rec.seed, rec.hit, rec.T_interactions,
                  rec.generations_run, wall_ms};
}

}  // namespace

std::vector<Cell> expand_grid(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<Cell> cells;
  const std::vector<double> unresolved{0.0};
  const auto& chis = spec.chi_from_delta ? unresolved : spec.chi;
  for (auto n : spec.n)
    for (auto lambda : spec.lambda)
      for (auto chi : chis)
        for (auto alpha : spec.alpha)
          for (auto beta : spec.beta)
            for (auto eps : spec.epsilon)
              for (auto delta : spec.delta)
                for (auto r : spec.r) {
                  const double c = spec.chi_from_delta ? theorem9_chi(delta) : chi;
                  cells.push_back({cells.size(), n, lambda, c, alpha, beta, eps, delta, r});
                }
  return cells;
}

BilinearParams cell_game(const Cell& c) {
  return BilinearParams::make(c.n, c.alpha, c.beta, c.epsilon);
}

std::uint64_t unit_seed(const ExperimentSpec& spec, std::size_t cell, std::size_t trial) {
  return child_seed(spec.seed, static_cast<std::uint64_t>(cell * spec.trials + trial));
}

TargetPredicate cell_target(const ExperimentSpec& spec, const Cell& cell) {
  if (spec.target == TargetKind::Singleton) {
    return singleton_target(BitVector::filled(cell.n, true), BitVector::filled(cell.n, true));
  }
  return {};
}

PdcoeaConfig cell_config(const ExperimentSpec& spec, const Cell& cell, std::size_t trial,
                         std::uint64_t budget) {
  PdcoeaConfig cfg;
  cfg.lambda = cell.lambda;
  cfg.chi = cell.chi;
  cfg.seed = unit_seed(spec, cell.index, trial);
  cfg.budget_generations = budget;
  cfg.game = cell_game(cell);
  cfg.record_trajectory = false;
  return cfg;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

std::vector<CellAggregate> aggregate_rows(const std::vector<TrialRow>& rows) {
  std::vector<CellAggregate> out;
  std::map<CellKey, std::size_t> slot;
  std::vector<std::vector<double>> hit_times;
  for (const auto& r : rows) {
    auto [it, fresh] = slot.try_emplace(key_of(r), out.size());
    if (fresh) {
      CellAggregate a{};
      a.n = r.n;
      a.lambda = r.lambda;
      a.chi = r.chi;
      a.alpha = r.alpha;
      a.beta = r.beta;
      a.epsilon = r.epsilon;
      a.delta = r.delta;
      a.r = r.r;
      out.push_back(a);
      hit_times.emplace_back();
    }
    auto& a = out[it->second];
    ++a.trials;
    if (r.hit) {
      ++a.hits;
      hit_times[it->second].push_back(static_cast<double>(r.T_interactions));
    } else {
      ++a.censored;
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto& a = out[i];
    auto& t = hit_times[i];
    a.success_rate = static_cast<double>(a.hits) / static_cast<double>(a.trials);
    if (t.empty()) continue;
    std::sort(t.begin(), t.end());
    a.median_T = quantile_sorted(t, 0.5);
    a.q25_T = quantile_sorted(t, 0.25);
    a.q75_T = quantile_sorted(t, 0.75);
    a.mean_T = std::accumulate(t.begin(), t.end(), 0.0) / static_cast<double>(t.size());
  }
  return out;
}

std::uint64_t resolve_budget(const ExperimentSpec& spec, const Cell& cell) {
  switch (spec.budget_rule) {
    case BudgetRule::Explicit:
      return spec.budget_generations;
    case BudgetRule::Theorem9: {
      Theorem9Inputs in;
      in.n = cell.n;
      in.lambda = cell.lambda;
      in.chi = cell.chi;
      in.alpha = cell.alpha;
      in.beta = cell.beta;
      in.epsilon = cell.epsilon;
      in.r = cell.r;
      const double g = std::ceil(theorem9_budget(in).generations() * spec.budget_factor);
      return static_cast<std::uint64_t>(
          std::clamp(g, 1.0, static_cast<double>(spec.budget_cap)));
    }
    case BudgetRule::Pilot: {
      std::vector<double> gens;
      const TargetPredicate target = cell_target(spec, cell);
      for (std::size_t i = 0; i < spec.pilot_runs; ++i) {
        PdcoeaConfig cfg = cell_config(spec, cell, 0, spec.budget_cap);
        cfg.seed = child_seed(spec.seed ^ kPilotDomain, cell.index * spec.pilot_runs + i);
        gens.push_back(static_cast<double>(run_trial(cfg, target).generations_run));
      }
      std::sort(gens.begin(), gens.end());
      const double b = std::ceil(spec.pilot_multiplier * quantile_sorted(gens, 0.5));
      return static_cast<std::uint64_t>(
          std::clamp(b, 1.0, static_cast<double>(spec.budget_cap)));
    }
  }
  return spec.budget_generations;
}

namespace {

// Rows are in cell order, so the first row of each aggregate names its cell.
void attach_aggregates(ResultTable& table) {
  table.aggregates = aggregate_rows(table.rows);
  const std::size_t trials = table.spec.trials;
  std::size_t row = 0;
  for (auto& a : table.aggregates) {
    a.budget_generations = table.budgets.at(row / trials);
    row += a.trials;
  }
}

}  // namespace

ResultTable run_experiment(const ExperimentSpec& spec) {
  ResultTable table;
  table.spec = spec;
  const std::vector<Cell> cells = expand_grid(spec);
  for (const auto& c : cells) table.budgets.push_back(resolve_budget(spec, c));

  const std::size_t units = cells.size() * spec.trials;
  std::vector<std::optional<TrialRow>> slots(units);
  parallel_for(units, worker_count(spec, units), [&](std::size_t u) {
    const Cell& cell = cells[u / spec.trials];
    const std::size_t trial = u % spec.trials;
    const PdcoeaConfig cfg = cell_config(spec, cell, trial, table.budgets[cell.index]);
    const auto t0 = std::chrono::steady_clock::now();
    const TrialRecord rec = run_trial(cfg, cell_target(spec, cell));
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    slots[u] = row_for(spec, cell, trial, rec, ms);
  });
  table.rows.reserve(units);
  for (auto& s : slots) table.rows.push_back(std::move(*s));
  attach_aggregates(table);
  return table;
}

ThresholdSummary summarize_threshold(const ResultTable& table) {
  std::map<double, ThresholdPoint> by_chi;
  for (const auto& a : table.aggregates) {
    auto& p = by_chi[a.chi];
    p.chi = a.chi;
    p.hits += a.hits;
    p.trials += a.trials;
  }
  ThresholdSummary s;
  s.non_increasing = true;
  for (auto& [chi, p] : by_chi) {
    p.success_rate = static_cast<double>(p.hits) / static_cast<double>(p.trials);
    if (!s.points.empty() && p.success_rate > s.points.back().success_rate) {
      s.non_increasing = false;
    }
    s.points.push_back(p);
  }
  for (std::size_t i = 0; i + 1 < s.points.size(); ++i) {
    if (s.points[i].hits > 0 && s.points[i + 1].hits == 0) {
      s.last_success_chi = s.points[i].chi;
      s.first_zero_chi = s.points[i + 1].chi;
    }
  }
  return s;
}

namespace {

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

std::optional<double> pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const auto n = static_cast<double>(a.size());
  if (a.size() < 2) return std::nullopt;
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0;
  double saa = 0;
  double sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0 || sbb == 0) return std::nullopt;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

ScalingSummary summarize_scaling(const ResultTable& table) {
  ScalingSummary s;
  s.median_non_decreasing_in_n = true;
  for (const auto& a : table.aggregates) {
    ScalingPoint p{a.n, a.lambda, a.success_rate, a.median_T, std::nullopt};
    try {
      Theorem9Inputs in;
      in.n = a.n;
      in.lambda = a.lambda;
      in.chi = a.chi;
      in.alpha = a.alpha;
      in.beta = a.beta;
      in.epsilon = a.epsilon;
      in.r = a.r;
      p.theorem9_reference = theorem9_budget(in).value;
    } catch (const std::invalid_argument&) {
    }
    s.points.push_back(p);
  }
  // Fits use the first lambda of the grid so that n is the only variable.
  if (s.points.empty()) return s;
  const std::size_t lambda0 = s.points.front().lambda;
  std::vector<std::pair<double, double>> series;
  for (const auto& p : s.points) {
    if (p.lambda == lambda0 && p.median_T) series.emplace_back(static_cast<double>(p.n), *p.median_T);
  }
  std::sort(series.begin(), series.end());
  for (std::size_t i = 1; i < series.size(); ++i) {
    if (series[i].second < series[i - 1].second) s.median_non_decreasing_in_n = false;
  }
  std::vector<double> ln_n;
  std::vector<double> ln_t;
  std::vector<double> ns;
  std::vector<double> ts;
  for (const auto& [n, t] : series) {
    ns.push_back(n);
    ts.push_back(t);
    if (t > 0) {
      ln_n.push_back(std::log(n));
      ln_t.push_back(std::log(t));
    }
  }
  if (ln_n.size() >= 2) {
    const double mx = std::accumulate(ln_n.begin(), ln_n.end(), 0.0) / static_cast<double>(ln_n.size());
    const double my = std::accumulate(ln_t.begin(), ln_t.end(), 0.0) / static_cast<double>(ln_t.size());
    double sxy = 0;
    double sxx = 0;
    for (std::size_t i = 0; i < ln_n.size(); ++i) {
      sxy += (ln_n[i] - mx) * (ln_t[i] - my);
      sxx += (ln_n[i] - mx) * (ln_n[i] - mx);
    }
    if (sxx > 0) s.slope_in_n = sxy / sxx;
  }
  s.rank_correlation = pearson(ranks(ns), ranks(ts));
  return s;
}

double TrajectoryResult::s0_empty_fraction() const noexcept {
  if (pre_hit_generations == 0) return 1.0;
  return static_cast<double>(pre_hit_without_s0) / static_cast<double>(pre_hit_generations);
}

TrajectoryResult experiment_trajectory(const ExperimentSpec& spec) {
  TrajectoryResult out{};
  out.table.spec = spec;
  const std::vector<Cell> cells = expand_grid(spec);
  for (const auto& c : cells) out.table.budgets.push_back(resolve_budget(spec, c));

  const std::size_t units = cells.size() * spec.trials;
  struct UnitResult {
    TrialRow row;
    std::vector<TrajectorySample> samples;
  };
  std::vector<std::optional<UnitResult>> slots(units);
  parallel_for(units, worker_count(spec, units), [&](std::size_t u) {
    const Cell& cell = cells[u / spec.trials];
    const std::size_t trial = u % spec.trials;
    const BilinearParams game = cell_game(cell);
    const LevelSequence levels = build_bilinear_levels(game);
    PdcoeaConfig cfg = cell_config(spec, cell, trial, out.table.budgets[cell.index]);
    cfg.record_trajectory = true;
    std::vector<std::size_t> level_of;
    const auto t0 = std::chrono::steady_clock::now();
    const TrialRecord rec = run_trial(cfg, cell_target(spec, cell), [&](const PairedPopulations& p) {
      level_of.push_back(current_level(p, levels, kGamma0));
    });
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    UnitResult res{row_for(spec, cell, trial, rec, ms), {}};
    res.row.kind = std::string(to_string(ExperimentKind::Trajectory));
    int phase = 1;
    for (std::size_t g = 0; g < rec.trajectory.size(); ++g) {
      const auto& t = rec.trajectory[g];
      if (t.p0 >= kGamma0) phase = 2;
      res.samples.push_back({cell.index, trial, t.generation, t.predator_mean, t.prey_mean, t.p0,
                             t.q0, t.prey_in_s0, level_of[g], phase});
    }
    slots[u] = std::move(res);
  });

  for (std::size_t u = 0; u < units; ++u) {
    const auto& row = slots[u]->row;
    const auto& samples = slots[u]->samples;
    if (row.hit) {
      ++out.successful_runs;
      for (const auto& t : samples) {
        if (t.generation >= row.generations) break;
        ++out.pre_hit_generations;
        if (t.prey_in_s0 == 0) ++out.pre_hit_without_s0;
      }
      const double beta_n = cell_game(cells[u / spec.trials]).beta_n();
      if (samples.back().predator_mean < beta_n + samples.front().predator_mean / 2.0) {
        ++out.descended_runs;
      }
    }
    out.table.rows.push_back(row);
    out.samples.insert(out.samples.end(), samples.begin(), samples.end());
  }
  attach_aggregates(out.table);
  return out;
}

}  // namespace coevo
