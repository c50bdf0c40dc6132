#include "coevo/persistence.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <json.hpp>

namespace coevo {

namespace {

using nlohmann::json;

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T field(std::string_view s, std::size_t line_no) {
  T v{};
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw IoError(fmt::format("results line {}: bad field '{}'", line_no, s));
  }
  return v;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> optional_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

std::string header_block(const ResultTable& table) {
  std::string out = "# coevo results\n";
  out += fmt::format("# schema_version = {}\n", kSchemaVersion);
  out += fmt::format("# master_seed = {}\n", table.spec.seed);
  out += fmt::format("# budgets = {}\n", fmt::join(table.budgets, ", "));
  const std::string spec_text = to_config_text(table.spec);
  std::string_view spec = spec_text;
  while (!spec.empty()) {
    const auto nl = spec.find('\n');
    out += fmt::format("# spec: {}\n", spec.substr(0, nl));
    if (nl == std::string_view::npos) break;
    spec.remove_prefix(nl + 1);
  }
  return out;
}

}  // namespace

std::string format_csv(const ResultTable& table) {
  std::string out = header_block(table);
  out += kCsvColumns;
  out += '\n';
  for (const auto& r : table.rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{:.3f}\n", r.kind, r.n, r.lambda,
                       r.chi, r.alpha, r.beta, r.epsilon, r.delta, r.r, r.trial, r.seed,
                       r.hit ? 1 : 0, r.T_interactions, r.generations, r.wall_ms);
  }
  return out;
}

ParsedCsv parse_csv(std::string_view text) {
  ParsedCsv out;
  bool columns_seen = false;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      auto h = line.substr(1);
      if (!h.empty() && h.front() == ' ') h.remove_prefix(1);
      out.header.emplace_back(h);
      continue;
    }
    if (!columns_seen) {
      if (line != kCsvColumns) throw IoError(fmt::format("results line {}: unexpected columns", line_no));
      columns_seen = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 15) {
      throw IoError(fmt::format("results line {}: expected 15 fields, got {}", line_no, f.size()));
    }
    TrialRow r{};
    r.kind = std::string(f[0]);
    r.n = field<std::size_t>(f[1], line_no);
    r.lambda = field<std::size_t>(f[2], line_no);
    r.chi = field<double>(f[3], line_no);
    r.alpha = field<double>(f[4], line_no);
    r.beta = field<double>(f[5], line_no);
    r.epsilon = field<double>(f[6], line_no);
    r.delta = field<double>(f[7], line_no);
    r.r = field<double>(f[8], line_no);
    r.trial = field<std::size_t>(f[9], line_no);
    r.seed = field<std::uint64_t>(f[10], line_no);
    r.hit = field<int>(f[11], line_no) != 0;
    r.T_interactions = field<std::uint64_t>(f[12], line_no);
    r.generations = field<std::uint64_t>(f[13], line_no);
    r.wall_ms = field<double>(f[14], line_no);
    out.rows.push_back(std::move(r));
  }
  if (!columns_seen) throw IoError("results: column line missing");
  return out;
}

std::string format_aggregates_json(const ResultTable& table) {
  json cells = json::array();
  for (const auto& a : table.aggregates) {
    cells.push_back({
        {"n", a.n},
        {"lambda", a.lambda},
        {"chi", a.chi},
        {"alpha", a.alpha},
        {"beta", a.beta},
        {"epsilon", a.epsilon},
        {"delta", a.delta},
        {"r", a.r},
        {"budget_generations", a.budget_generations},
        {"trials", a.trials},
        {"hits", a.hits},
        {"censored", a.censored},
        {"success_rate", a.success_rate},
        {"median_T", optional_number(a.median_T)},
        {"q25_T", optional_number(a.q25_T)},
        {"q75_T", optional_number(a.q75_T)},
        {"mean_T", optional_number(a.mean_T)},
    });
  }
  const json doc = {
      {"schema_version", kSchemaVersion},
      {"master_seed", table.spec.seed},
      {"spec", to_config_text(table.spec)},
      {"cells", cells},
  };
  return doc.dump(2) + "\n";
}

std::vector<CellAggregate> parse_aggregates_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(fmt::format("aggregates: {}", e.what()));
  }
  std::vector<CellAggregate> out;
  for (const auto& c : doc.at("cells")) {
    CellAggregate a{};
    a.n = c.at("n").get<std::size_t>();
    a.lambda = c.at("lambda").get<std::size_t>();
    a.chi = c.at("chi").get<double>();
    a.alpha = c.at("alpha").get<double>();
    a.beta = c.at("beta").get<double>();
    a.epsilon = c.at("epsilon").get<double>();
    a.delta = c.at("delta").get<double>();
    a.r = c.at("r").get<double>();
    a.budget_generations = c.at("budget_generations").get<std::uint64_t>();
    a.trials = c.at("trials").get<std::size_t>();
    a.hits = c.at("hits").get<std::size_t>();
    a.censored = c.at("censored").get<std::size_t>();
    a.success_rate = c.at("success_rate").get<double>();
    a.median_T = optional_from(c.at("median_T"));
    a.q25_T = optional_from(c.at("q25_T"));
    a.q75_T = optional_from(c.at("q75_T"));
    a.mean_T = optional_from(c.at("mean_T"));
    out.push_back(a);
  }
  return out;
}

std::string format_plot_data(const std::vector<CellAggregate>& aggregates) {
  std::string out = "n,lambda,chi,alpha,beta,epsilon,delta,r,metric,value\n";
  for (const auto& a : aggregates) {
    const auto cell = fmt::format("{},{},{},{},{},{},{},{}", a.n, a.lambda, a.chi, a.alpha,
                                  a.beta, a.epsilon, a.delta, a.r);
    const auto emit = [&](std::string_view metric, const std::optional<double>& v) {
      if (v) out += fmt::format("{},{},{}\n", cell, metric, *v);
    };
    emit("success_rate", a.success_rate);
    emit("hits", static_cast<double>(a.hits));
    emit("censored", static_cast<double>(a.censored));
    emit("median_T", a.median_T);
    emit("q25_T", a.q25_T);
    emit("q75_T", a.q75_T);
    emit("mean_T", a.mean_T);
  }
  return out;
}

std::string format_trajectory_csv(const TrajectoryResult& result) {
  std::string out = header_block(result.table);
  out += "cell,trial,generation,predator_mean,prey_mean,p0,q0,prey_in_s0,current_level,phase\n";
  for (const auto& s : result.samples) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", s.cell, s.trial, s.generation,
                       s.predator_mean, s.prey_mean, s.p0, s.q0, s.prey_in_s0, s.current_level,
                       s.phase);
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot read '{}'", path));
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError(fmt::format("write to '{}' failed", path));
}

void write_results(const ResultTable& table, const std::string& path) {
  write_text_file(path, format_csv(table));
  write_text_file(path + ".json", format_aggregates_json(table));
}

}  // namespace coevo
