#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "iretr/dataset.hpp"
#include "iretr/solver.hpp"

namespace iretr {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SolverKind { iretr_d, iretr_gg, statr_sh, statr_fh };

/// Canonical order of the solver comparison.
inline constexpr SolverKind kAllSolvers[] = {SolverKind::iretr_d, SolverKind::iretr_gg,
                                             SolverKind::statr_sh, SolverKind::statr_fh};

std::string to_string(SolverKind kind);
SolverKind parse_solver_kind(const std::string& name);

/// Runs one solver; iretr variants override the schedule policy.
RunResult run_solver(SolverKind kind, const FiniteSumProblem& problem, const SolverConfig& cfg,
                     Sampler& sampler);

enum class SourceKind { synth_logistic, synth_quadratic, file };

struct ProblemSource {
  SourceKind kind = SourceKind::synth_logistic;
  std::filesystem::path path;
  Index N = 1000;
  Index n = 20;
  double separation = 1.0;
  double lambda_min = 1.0;
  double lambda_max = 10.0;
  double solution_scale = 1.0;
  std::uint64_t seed = 0;
  /// Fraction of rows kept for training; the rest forms the (uncharged) test set.
  double train_fraction = 1.0;
};

struct ExperimentSpec {
  ProblemSource source;
  LossFamily loss = LossFamily::logistic_l2;
  std::vector<SolverKind> solvers{std::begin(kAllSolvers), std::end(kAllSolvers)};
  int repetitions = 10;
  std::uint64_t base_seed = 1;
  SolverConfig solver;
  std::filesystem::path out;
  std::string format = "json";

  void validate() const;
};

/// Flat "key = value" document; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> parse_key_values(std::istream& in);
/// Applies one setting; unknown keys and malformed values raise ConfigError.
void apply_setting(ExperimentSpec& spec, const std::string& key, const std::string& value);
ExperimentSpec load_experiment_spec(const std::filesystem::path& path);
ExperimentSpec parse_experiment_spec(std::istream& in);

struct BuiltProblem {
  std::string name;
  std::shared_ptr<const FiniteSumProblem> train;
  std::shared_ptr<const FiniteSumProblem> test;  // null without a test split
  std::optional<Vector> minimizer;               // known for synth_quadratic
};

BuiltProblem build_problem(const ProblemSource& source, LossFamily loss);

struct RunEntry {
  SolverKind solver;
  int repetition = 0;
  RunResult result;
};

struct ComparisonRow {
  std::string dataset;
  std::string solver;
  int runs = 0;
  int failed_runs = 0;
  double mean_nfe = 0.0;
  double std_nfe = 0.0;
  double mean_iterations = 0.0;
  double std_iterations = 0.0;
  double mean_final_sample_fraction = 0.0;
  /// 100 (1 - nfe(iretr_d) / nfe(this solver)); empty for iretr_d or without it.
  std::optional<double> saving_pct;
};

struct Report {
  std::string dataset;
  std::uint64_t base_seed = 0;
  int repetitions = 0;
  std::vector<RunEntry> runs;
  std::vector<ComparisonRow> rows;
  std::vector<std::string> warnings;

  const ComparisonRow* row(SolverKind kind) const;
  bool all_failed() const;
};

/// Seeded repetitions (seed = base_seed + r) of every requested solver.
Report run_experiment(const ExperimentSpec& spec);

std::vector<ComparisonRow> summarize(const std::string& dataset, const std::vector<RunEntry>& runs);

enum class MetricsFormat { csv, json };
MetricsFormat parse_metrics_format(const std::string& name);

/// Writes the report. JSON goes to `path`; CSV writes the per-iteration table
/// to `path` and the comparison rows to "<stem>_summary.csv" next to it.
void emit_metrics(const Report& report, MetricsFormat format, const std::filesystem::path& path);
void write_iterations_csv(std::ostream& out, const Report& report);
void write_summary_csv(std::ostream& out, const Report& report);
std::string report_json(const Report& report);

/// Human-readable comparison table.
void print_comparison(std::ostream& out, const Report& report);

// Local-rate probes.

struct RateSample {
  int k = 0;
  double error = 0.0;            // e_k = ||x_k - x*||
  double linear_ratio = 0.0;     // e_{k+1} / e_k
  double quadratic_ratio = 0.0;  // e_{k+1} / e_k^2
};

/// Ratios for consecutive recorded iterates; ratios are 0 when e_k = 0.
std::vector<RateSample> rate_probe(const RunResult& run, const Vector& x_star);

/// The last `tail` samples whose e_k is at or above `floor`.
std::vector<RateSample> pre_floor_tail(const std::vector<RateSample>& samples, double floor,
                                       int tail);

struct RateProbeSpec {
  Index N = 500;
  Index n = 10;
  double lambda_min = 1.0;
  double lambda_max = 10.0;
  double solution_scale = 10.0;
  /// Hessian sample fraction; 1 uses the full Hessian.
  double hessian_fraction = 1.0;
  int seeds = 10;
  std::uint64_t base_seed = 1;
  /// e_k below floor * (1 + ||x*||) is treated as converged to rounding level.
  double floor = 1e-6;
  int tail = 3;
  int max_outer = 200;
  /// CG tolerance; the quadratic-rate regime needs near-exact subproblem solves.
  double cg_rel_tol = 1e-12;
};

struct RateProbeRun {
  std::uint64_t seed = 0;
  std::vector<RateSample> samples;
  std::vector<RateSample> tail;
  double tail_max_linear = 0.0;
  double tail_max_quadratic = 0.0;
  Termination termination = Termination::max_outer;
};

std::vector<RateProbeRun> probe_rates(const RateProbeSpec& spec);

}  // namespace iretr
