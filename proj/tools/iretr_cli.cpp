// iretr: run solver experiments, print comparison tables, probe local rates.
//
// Exit codes: 0 success, 2 configuration error, 3 every run failed.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "iretr/experiment.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kAllRunsFailed = 3;

struct CommonFlags {
  std::string config;
  std::vector<std::string> settings;
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  std::optional<std::string> loss;
  std::optional<std::string> policy;
  std::vector<std::string> solvers;
  std::optional<std::string> out;
  std::optional<std::string> format;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("-c,--config", f.config, "key = value experiment file");
  cmd->add_option("--set", f.settings, "extra key=value setting (repeatable)");
  cmd->add_option("--seed", f.seed, "base seed; repetition r uses seed + r");
  cmd->add_option("--reps", f.reps, "repetitions per solver");
  cmd->add_option("--loss", f.loss, "logistic_l2 | sigmoid_ls");
  cmd->add_option("--policy", f.policy, "schedule policy for generic iretr: dynamic | geometric");
  cmd->add_option("--solver", f.solvers, "iretr_d | iretr_gg | statr_sh | statr_fh (repeatable)");
  cmd->add_option("--out", f.out, "output path");
  cmd->add_option("--format", f.format, "csv | json");
}

iretr::ExperimentSpec build_spec(const CommonFlags& f) {
  iretr::ExperimentSpec spec;
  if (!f.config.empty()) spec = iretr::load_experiment_spec(f.config);
  for (const auto& s : f.settings) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw iretr::ConfigError("--set expects key=value, got '" + s + "'");
    iretr::apply_setting(spec, s.substr(0, eq), s.substr(eq + 1));
  }
  if (f.seed) spec.base_seed = *f.seed;
  if (f.reps) spec.repetitions = *f.reps;
  if (f.loss) iretr::apply_setting(spec, "loss", *f.loss);
  if (!f.solvers.empty()) {
    spec.solvers.clear();
    for (const auto& s : f.solvers) {
      // "iretr" picks the variant from --policy (dynamic by default).
      if (s == "iretr") {
        const bool geometric = f.policy && *f.policy == "geometric";
        spec.solvers.push_back(geometric ? iretr::SolverKind::iretr_gg : iretr::SolverKind::iretr_d);
      } else {
        spec.solvers.push_back(iretr::parse_solver_kind(s));
      }
    }
  }
  if (f.policy) {
    if (*f.policy != "dynamic" && *f.policy != "geometric")
      throw iretr::ConfigError("--policy must be dynamic or geometric");
    iretr::apply_setting(spec, "policy", *f.policy);
  }
  if (f.out) spec.out = *f.out;
  if (f.format) iretr::apply_setting(spec, "format", *f.format);
  spec.validate();
  return spec;
}

int finish_report(const iretr::Report& report, const iretr::ExperimentSpec& spec, bool print_table) {
  if (print_table) iretr::print_comparison(std::cout, report);
  else
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
  const auto format = iretr::parse_metrics_format(spec.format);
  if (!spec.out.empty()) {
    iretr::emit_metrics(report, format, spec.out);
  } else if (!print_table) {
    if (format == iretr::MetricsFormat::json) std::cout << iretr::report_json(report);
    else iretr::write_iterations_csv(std::cout, report);
  }
  if (report.all_failed()) {
    std::cerr << "error: every run failed\n";
    return kAllRunsFailed;
  }
  return 0;
}

int probe(const iretr::RateProbeSpec& spec, const std::string& out_path, const std::string& format) {
  const auto runs = iretr::probe_rates(spec);
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write " + out_path);
  }
  std::ostream& out = out_path.empty() ? std::cout : file;
  char buf[160];
  if (format == "json") {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : runs) {
      nlohmann::ordered_json j;
      j["seed"] = r.seed;
      j["termination"] = iretr::to_string(r.termination);
      j["tail_max_linear"] = r.tail_max_linear;
      j["tail_max_quadratic"] = r.tail_max_quadratic;
      auto samples = nlohmann::ordered_json::array();
      for (const auto& s : r.samples)
        samples.push_back({{"k", s.k}, {"error", s.error}, {"linear_ratio", s.linear_ratio},
                           {"quadratic_ratio", s.quadratic_ratio}});
      j["samples"] = std::move(samples);
      arr.push_back(std::move(j));
    }
    out << arr.dump(1) << '\n';
  } else {
    out << "seed,k,error,linear_ratio,quadratic_ratio\n";
    for (const auto& r : runs)
      for (const auto& s : r.samples) {
        std::snprintf(buf, sizeof buf, "%llu,%d,%.17g,%.17g,%.17g\n",
                      static_cast<unsigned long long>(r.seed), s.k, s.error, s.linear_ratio,
                      s.quadratic_ratio);
        out << buf;
      }
  }
  std::cerr << "seed  tail_max_linear  tail_max_quadratic\n";
  for (const auto& r : runs) {
    std::snprintf(buf, sizeof buf, "%4llu  %15.6g  %18.6g\n", static_cast<unsigned long long>(r.seed),
                  r.tail_max_linear, r.tail_max_quadratic);
    std::cerr << buf;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subsampled trust-region solvers for finite sums"};
  app.require_subcommand(1);

  CommonFlags run_flags, bench_flags;
  auto* run = app.add_subcommand("run", "run an experiment and write the report");
  add_common(run, run_flags);
  auto* bench = app.add_subcommand("bench", "print the solver comparison table");
  add_common(bench, bench_flags);

  iretr::RateProbeSpec probe_spec;
  std::string probe_out;
  std::string probe_format = "csv";
  auto* probe_cmd = app.add_subcommand("probe-rates", "error ratios on synthetic quadratics");
  probe_cmd->add_option("--seed", probe_spec.base_seed, "first seed");
  probe_cmd->add_option("--reps", probe_spec.seeds, "number of seeds");
  probe_cmd->add_option("--N", probe_spec.N, "components");
  probe_cmd->add_option("--n", probe_spec.n, "dimension");
  probe_cmd->add_option("--hessian-fraction", probe_spec.hessian_fraction, "D / N; 1 = full Hessian");
  probe_cmd->add_option("--cg-rel-tol", probe_spec.cg_rel_tol, "CG relative residual tolerance");
  probe_cmd->add_option("--floor", probe_spec.floor, "relative error floor");
  probe_cmd->add_option("--tail", probe_spec.tail, "tail length");
  probe_cmd->add_option("--out", probe_out, "output path (stdout if empty)");
  probe_cmd->add_option("--format", probe_format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*run) {
      const auto spec = build_spec(run_flags);
      return finish_report(iretr::run_experiment(spec), spec, false);
    }
    if (*bench) {
      const auto spec = build_spec(bench_flags);
      return finish_report(iretr::run_experiment(spec), spec, true);
    }
    return probe(probe_spec, probe_out, probe_format);
  } catch (const iretr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const iretr::ParseError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
