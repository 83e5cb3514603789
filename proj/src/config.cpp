#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <unordered_map>

#include "iretr/experiment.hpp"

namespace iretr {

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::iretr_d: return "iretr_d";
    case SolverKind::iretr_gg: return "iretr_gg";
    case SolverKind::statr_sh: return "statr_sh";
    case SolverKind::statr_fh: return "statr_fh";
  }
  return "?";
}

SolverKind parse_solver_kind(const std::string& name) {
  for (SolverKind k : kAllSolvers)
    if (to_string(k) == name) return k;
  throw ConfigError("unknown solver '" + name + "' (expected iretr_d, iretr_gg, statr_sh, statr_fh)");
}

void ExperimentSpec::validate() const {
  if (repetitions < 1) throw ConfigError("reps must be at least 1");
  if (solvers.empty()) throw ConfigError("no solver selected");
  if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");
  if (!(source.train_fraction > 0.0 && source.train_fraction <= 1.0))
    throw ConfigError("train_fraction must lie in (0, 1]");
  if (source.kind == SourceKind::file && source.path.empty())
    throw ConfigError("source=file needs data_path");
  if (source.kind != SourceKind::file && (source.N < 1 || source.n < 1))
    throw ConfigError("N and n must be positive");
  try {
    solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* first = value.data();
  const char* last = value.data() + value.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last || value.empty())
    throw ConfigError("invalid value '" + value + "' for " + key);
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError("invalid boolean '" + value + "' for " + key);
}

using Setter = std::function<void(ExperimentSpec&, const std::string&, const std::string&)>;

template <class T, class Field>
Setter number(Field field) {
  return [field](ExperimentSpec& s, const std::string& k, const std::string& v) {
    field(s) = parse_number<T>(k, v);
  };
}

const std::unordered_map<std::string, Setter>& setters() {
  static const std::unordered_map<std::string, Setter> table = [] {
    std::unordered_map<std::string, Setter> t;
    // Problem source.
    t["source"] = [](ExperimentSpec& s, const std::string& k, const std::string& v) {
      if (v == "synth_logistic") s.source.kind = SourceKind::synth_logistic;
      else if (v == "synth_quadratic") s.source.kind = SourceKind::synth_quadratic;
      else if (v == "file") s.source.kind = SourceKind::file;
      else throw ConfigError("invalid value '" + v + "' for " + k);
    };
    t["data_path"] = [](ExperimentSpec& s, const std::string&, const std::string& v) {
      s.source.path = v;
      s.source.kind = SourceKind::file;
    };
    t["N"] = number<Index>([](ExperimentSpec& s) -> Index& { return s.source.N; });
    t["n"] = number<Index>([](ExperimentSpec& s) -> Index& { return s.source.n; });
    t["separation"] = number<double>([](ExperimentSpec& s) -> double& { return s.source.separation; });
    t["lambda_min"] = number<double>([](ExperimentSpec& s) -> double& { return s.source.lambda_min; });
    t["lambda_max"] = number<double>([](ExperimentSpec& s) -> double& { return s.source.lambda_max; });
    t["solution_scale"] =
        number<double>([](ExperimentSpec& s) -> double& { return s.source.solution_scale; });
    t["data_seed"] = number<std::uint64_t>([](ExperimentSpec& s) -> std::uint64_t& { return s.source.seed; });
    t["train_fraction"] =
        number<double>([](ExperimentSpec& s) -> double& { return s.source.train_fraction; });
    // Experiment.
    t["loss"] = [](ExperimentSpec& s, const std::string&, const std::string& v) {
      try {
        s.loss = parse_loss_family(v);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    };
    t["solvers"] = [](ExperimentSpec& s, const std::string&, const std::string& v) {
      s.solvers.clear();
      std::size_t start = 0;
      while (start <= v.size()) {
        const auto comma = v.find(',', start);
        const std::string name = trim(v.substr(start, comma == std::string::npos ? v.npos : comma - start));
        if (!name.empty()) s.solvers.push_back(parse_solver_kind(name));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
    };
    t["reps"] = number<int>([](ExperimentSpec& s) -> int& { return s.repetitions; });
    t["seed"] = number<std::uint64_t>([](ExperimentSpec& s) -> std::uint64_t& { return s.base_seed; });
    t["out"] = [](ExperimentSpec& s, const std::string&, const std::string& v) { s.out = v; };
    t["format"] = [](ExperimentSpec& s, const std::string& k, const std::string& v) {
      if (v != "csv" && v != "json") throw ConfigError("invalid value '" + v + "' for " + k);
      s.format = v;
    };
    // Solver.
    auto d = [&t](const char* key, double SolverConfig::*field) {
      t[key] = [field](ExperimentSpec& s, const std::string& k, const std::string& v) {
        s.solver.*field = parse_number<double>(k, v);
      };
    };
    d("delta0", &SolverConfig::delta0);
    d("tau", &SolverConfig::tau);
    d("eta", &SolverConfig::eta);
    d("zeta1", &SolverConfig::zeta1);
    d("zeta2", &SolverConfig::zeta2);
    d("theta0", &SolverConfig::theta0);
    d("eps_g", &SolverConfig::eps_g);
    d("phi", &SolverConfig::phi);
    d("success_expand_threshold", &SolverConfig::success_expand_threshold);
    d("radius_reset_floor", &SolverConfig::radius_reset_floor);
    d("cg_rel_tol", &SolverConfig::cg_rel_tol);
    auto i = [&t](const char* key, int SolverConfig::*field) {
      t[key] = [field](ExperimentSpec& s, const std::string& k, const std::string& v) {
        s.solver.*field = parse_number<int>(k, v);
      };
    };
    i("max_outer", &SolverConfig::max_outer);
    i("max_shrinks", &SolverConfig::max_shrinks);
    i("cg_max_iter", &SolverConfig::cg_max_iter);
    // Schedule.
    auto sd = [&t](const char* key, double ScheduleConfig::*field) {
      t[key] = [field](ExperimentSpec& s, const std::string& k, const std::string& v) {
        s.solver.schedule.*field = parse_number<double>(k, v);
      };
    };
    sd("growth", &ScheduleConfig::growth);
    sd("n0_fraction", &ScheduleConfig::n0_fraction);
    sd("gamma", &ScheduleConfig::gamma);
    sd("relax_scale", &ScheduleConfig::relax_scale);
    sd("upper_guard", &ScheduleConfig::upper_guard);
    sd("hessian_fraction", &ScheduleConfig::hessian_fraction);
    sd("adaptive_c", &ScheduleConfig::adaptive_c);
    sd("adaptive_C", &ScheduleConfig::adaptive_C);
    sd("adaptive_p", &ScheduleConfig::adaptive_p);
    sd("hessian_lambda_max", &ScheduleConfig::lambda_max);
    t["policy"] = [](ExperimentSpec& s, const std::string&, const std::string& v) {
      try {
        s.solver.schedule.policy = parse_schedule_policy(v);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    };
    t["practical_stop"] = [](ExperimentSpec& s, const std::string& k, const std::string& v) {
      s.solver.practical_stop = parse_bool(k, v);
    };
    t["refined_full_rule"] = [](ExperimentSpec& s, const std::string& k, const std::string& v) {
      s.solver.schedule.refined_full_rule = parse_bool(k, v);
    };
    t["hessian_policy"] = [](ExperimentSpec& s, const std::string& k, const std::string& v) {
      if (v == "fixed_fraction" || v == "fixed") s.solver.schedule.hessian_policy = HessianPolicy::fixed_fraction;
      else if (v == "adaptive") s.solver.schedule.hessian_policy = HessianPolicy::adaptive;
      else throw ConfigError("invalid value '" + v + "' for " + k);
    };
    return t;
  }();
  return table;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_key_values(std::istream& in) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    out.emplace_back(std::move(key), trim(line.substr(eq + 1)));
  }
  return out;
}

void apply_setting(ExperimentSpec& spec, const std::string& key, const std::string& value) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second(spec, key, value);
}

ExperimentSpec parse_experiment_spec(std::istream& in) {
  ExperimentSpec spec;
  for (const auto& [k, v] : parse_key_values(in)) apply_setting(spec, k, v);
  return spec;
}

ExperimentSpec load_experiment_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_experiment_spec(in);
}

}  // namespace iretr
