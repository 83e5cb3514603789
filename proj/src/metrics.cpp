// Report serialization.
//
// Iteration table, one row per accepted step (k is the index of the new iterate):
//   solver, repetition, seed, k, N_k, D_k, delta, theta, f_train, f_test, cum_nfe
// where delta is the radius of the accepted trial, f_train = f_{N_k}(x_k) and
// f_test is the objective on the held-out split (NaN/null without one). Test
// evaluations are reporting only and are never charged to the nfe ledger.
//
// Summary table, one row per solver in canonical order:
//   dataset, solver, runs, failed_runs, mean_nfe, std_nfe, mean_iterations,
//   std_iterations, mean_final_sample_fraction, saving_pct
// saving_pct = 100 (1 - mean_nfe(iretr_d) / mean_nfe(solver)), empty/null if undefined.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <variant>

#include <json.hpp>

#include "iretr/experiment.hpp"

namespace iretr {

namespace {

using Cell = std::variant<std::string, std::int64_t, std::uint64_t, double, std::monostate>;

const std::vector<std::string> kIterationColumns = {
    "solver", "repetition", "seed",  "k",      "N_k",    "D_k",
    "delta",  "theta",      "f_train", "f_test", "cum_nfe"};

const std::vector<std::string> kSummaryColumns = {
    "dataset",         "solver",         "runs",
    "failed_runs",     "mean_nfe",       "std_nfe",
    "mean_iterations", "std_iterations", "mean_final_sample_fraction",
    "saving_pct"};

std::vector<std::vector<Cell>> iteration_rows(const Report& report) {
  std::vector<std::vector<Cell>> rows;
  for (const auto& e : report.runs) {
    for (const auto& r : e.result.trajectory) {
      rows.push_back({to_string(e.solver), std::int64_t{e.repetition}, e.result.seed,
                      std::int64_t{r.k + 1}, std::int64_t{r.n_next}, std::int64_t{r.hessian_size},
                      r.radius, r.theta, r.f_value, r.f_test, r.cum_nfe});
    }
  }
  return rows;
}

std::vector<std::vector<Cell>> summary_rows(const Report& report) {
  std::vector<std::vector<Cell>> rows;
  for (const auto& r : report.rows) {
    rows.push_back({r.dataset, r.solver, std::int64_t{r.runs}, std::int64_t{r.failed_runs},
                    r.mean_nfe, r.std_nfe, r.mean_iterations, r.std_iterations,
                    r.mean_final_sample_fraction,
                    r.saving_pct ? Cell{*r.saving_pct} : Cell{std::monostate{}}});
  }
  return rows;
}

std::string csv_cell(const Cell& c) {
  struct V {
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      return q + '"';
    }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(std::uint64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const {
      if (std::isnan(v)) return "nan";
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      return buf;
    }
    std::string operator()(std::monostate) const { return {}; }
  };
  return std::visit(V{}, c);
}

nlohmann::ordered_json json_cell(const Cell& c) {
  struct V {
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
    nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
    nlohmann::ordered_json operator()(std::uint64_t v) const { return v; }
    nlohmann::ordered_json operator()(double v) const {
      if (!std::isfinite(v)) return nullptr;
      return v;
    }
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
  };
  return std::visit(V{}, c);
}

void write_table(std::ostream& out, const std::vector<std::string>& columns,
                 const std::vector<std::vector<Cell>>& rows) {
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << '\n';
  }
}

nlohmann::ordered_json json_table(const std::vector<std::string>& columns,
                                  const std::vector<std::vector<Cell>>& rows) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[columns[i]] = json_cell(row[i]);
    arr.push_back(std::move(obj));
  }
  return arr;
}

}  // namespace

MetricsFormat parse_metrics_format(const std::string& name) {
  if (name == "csv") return MetricsFormat::csv;
  if (name == "json") return MetricsFormat::json;
  throw ConfigError("format must be csv or json, got '" + name + "'");
}

void write_iterations_csv(std::ostream& out, const Report& report) {
  write_table(out, kIterationColumns, iteration_rows(report));
}

void write_summary_csv(std::ostream& out, const Report& report) {
  write_table(out, kSummaryColumns, summary_rows(report));
}

std::string report_json(const Report& report) {
  nlohmann::ordered_json j;
  j["schema"] = "iretr-report/1";
  j["dataset"] = report.dataset;
  j["base_seed"] = report.base_seed;
  j["repetitions"] = report.repetitions;
  j["rng"] = Sampler::kAlgorithm;
  j["test_loss_charged"] = false;
  auto runs = nlohmann::ordered_json::array();
  for (const auto& e : report.runs) {
    nlohmann::ordered_json r;
    r["solver"] = to_string(e.solver);
    r["repetition"] = e.repetition;
    r["seed"] = e.result.seed;
    r["termination"] = to_string(e.result.termination);
    r["message"] = e.result.message;
    r["iterations"] = e.result.iterations();
    r["nfe_total"] = json_cell(e.result.nfe_total);
    r["final_sample_size"] = e.result.final_sample_size;
    r["final_grad_norm"] = json_cell(e.result.final_grad_norm);
    runs.push_back(std::move(r));
  }
  j["runs"] = std::move(runs);
  j["iterations"] = json_table(kIterationColumns, iteration_rows(report));
  j["summary"] = json_table(kSummaryColumns, summary_rows(report));
  j["warnings"] = report.warnings;
  return j.dump(1) + "\n";
}

void emit_metrics(const Report& report, MetricsFormat format, const std::filesystem::path& path) {
  auto open = [](const std::filesystem::path& p) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    return out;
  };
  if (format == MetricsFormat::json) {
    auto out = open(path);
    out << report_json(report);
    return;
  }
  {
    auto out = open(path);
    write_iterations_csv(out, report);
  }
  std::filesystem::path summary = path;
  summary.replace_filename(path.stem().string() + "_summary.csv");
  auto out = open(summary);
  write_summary_csv(out, report);
}

}  // namespace iretr
