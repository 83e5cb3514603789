#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <omp.h>

#include "iretr/experiment.hpp"
#include "iretr/kernels.hpp"
#include "iretr/losses.hpp"
#include "iretr/quadratic_problem.hpp"

namespace iretr {

RunResult run_solver(SolverKind kind, const FiniteSumProblem& problem, const SolverConfig& cfg,
                     Sampler& sampler) {
  switch (kind) {
    case SolverKind::iretr_d:
    case SolverKind::iretr_gg: {
      SolverConfig c = cfg;
      c.schedule.policy =
          kind == SolverKind::iretr_d ? SchedulePolicy::dynamic : SchedulePolicy::geometric;
      return iretr_run(problem, c, sampler);
    }
    case SolverKind::statr_sh: return statr_run(problem, cfg, HessianMode::subsampled, sampler);
    case SolverKind::statr_fh: return statr_run(problem, cfg, HessianMode::full, sampler);
  }
  throw std::logic_error("run_solver: bad solver kind");
}

BuiltProblem build_problem(const ProblemSource& source, LossFamily loss) {
  BuiltProblem out;
  Sampler sampler(source.seed);
  if (source.kind == SourceKind::synth_quadratic) {
    auto q = synth_quadratic(source.N, source.n, source.lambda_min, source.lambda_max, sampler,
                             source.solution_scale);
    out.name = "synth_quadratic";
    out.minimizer = q->minimizer();
    out.train = std::move(q);
    return out;
  }

  Dataset data = source.kind == SourceKind::file
                     ? load_dataset(source.path)
                     : synth_logistic(source.N, source.n, source.separation, sampler);
  out.name = data.name;
  data = map_labels(std::move(data), loss);
  if (source.train_fraction < 1.0) {
    auto [train, test] = split(data, source.train_fraction, sampler);
    out.train = make_loss({loss, std::make_shared<const Dataset>(std::move(train))});
    if (test.size() > 0) out.test = make_loss({loss, std::make_shared<const Dataset>(std::move(test))});
  } else {
    out.train = make_loss({loss, std::make_shared<const Dataset>(std::move(data))});
  }
  return out;
}

const ComparisonRow* Report::row(SolverKind kind) const {
  const std::string name = to_string(kind);
  for (const auto& r : rows)
    if (r.solver == name) return &r;
  return nullptr;
}

bool Report::all_failed() const {
  return std::none_of(runs.begin(), runs.end(), [](const RunEntry& e) { return e.result.ok(); });
}

namespace {

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

// Sample standard deviation; 0 for a single value.
MeanStd mean_std(const std::vector<double>& v) {
  MeanStd out;
  if (v.empty()) return {std::nan(""), std::nan("")};
  for (double x : v) out.mean += x;
  out.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return out;
}

}  // namespace

std::vector<ComparisonRow> summarize(const std::string& dataset, const std::vector<RunEntry>& runs) {
  std::vector<ComparisonRow> rows;
  for (SolverKind kind : kAllSolvers) {
    std::vector<double> nfe, iters, frac;
    int total = 0, failed = 0;
    for (const auto& e : runs) {
      if (e.solver != kind) continue;
      ++total;
      if (!e.result.ok()) {
        ++failed;
        continue;
      }
      nfe.push_back(e.result.nfe_total);
      iters.push_back(static_cast<double>(e.result.iterations()));
      frac.push_back(static_cast<double>(e.result.final_sample_size) /
                     static_cast<double>(e.result.ledger.N()));
    }
    if (total == 0) continue;
    ComparisonRow row;
    row.dataset = dataset;
    row.solver = to_string(kind);
    row.runs = total;
    row.failed_runs = failed;
    const MeanStd n = mean_std(nfe), it = mean_std(iters), fr = mean_std(frac);
    row.mean_nfe = n.mean;
    row.std_nfe = n.std;
    row.mean_iterations = it.mean;
    row.std_iterations = it.std;
    row.mean_final_sample_fraction = fr.mean;
    rows.push_back(row);
  }
  const auto d = std::find_if(rows.begin(), rows.end(),
                              [](const ComparisonRow& r) { return r.solver == "iretr_d"; });
  if (d != rows.end() && std::isfinite(d->mean_nfe)) {
    for (auto& r : rows)
      if (&r != &*d && std::isfinite(r.mean_nfe) && r.mean_nfe > 0.0)
        r.saving_pct = 100.0 * (1.0 - d->mean_nfe / r.mean_nfe);
  }
  return rows;
}

Report run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const BuiltProblem built = build_problem(spec.source, spec.loss);

  // Canonical solver order, duplicates dropped, so the report does not depend
  // on how the solver list was written.
  std::vector<SolverKind> kinds;
  for (SolverKind k : kAllSolvers)
    if (std::find(spec.solvers.begin(), spec.solvers.end(), k) != spec.solvers.end())
      kinds.push_back(k);

  Report report;
  report.dataset = built.name;
  report.base_seed = spec.base_seed;
  report.repetitions = spec.repetitions;
  const int reps = spec.repetitions;
  const int jobs = static_cast<int>(kinds.size()) * reps;
  report.runs.resize(static_cast<std::size_t>(jobs));

  SolverConfig cfg = spec.solver;
  if (built.test) {
    const auto test = built.test;
    const SampleSet all = SampleSet::full(test->size());
    cfg.monitor = [test, all](const Vector& x) { return serial::eval_f(*test, x, all); };
  }

  // Each job owns its sampler and ledger; results land in a preassigned slot.
  std::vector<std::string> errors(static_cast<std::size_t>(jobs));
#pragma omp parallel for schedule(dynamic, 1)
  for (int j = 0; j < jobs; ++j) {
    const SolverKind kind = kinds[static_cast<std::size_t>(j / reps)];
    const int r = j % reps;
    RunEntry& entry = report.runs[static_cast<std::size_t>(j)];
    entry.solver = kind;
    entry.repetition = r;
    Sampler sampler(spec.base_seed + static_cast<std::uint64_t>(r));
    try {
      entry.result = run_solver(kind, *built.train, cfg, sampler);
    } catch (const std::exception& e) {
      entry.result = RunResult{};
      entry.result.solver = to_string(kind);
      entry.result.seed = sampler.seed();
      entry.result.termination = Termination::aborted;
      entry.result.message = e.what();
      entry.result.ledger = NfeLedger(built.train->size());
    }
  }

  for (const auto& e : report.runs)
    if (!e.result.ok())
      report.warnings.push_back(to_string(e.solver) + " repetition " + std::to_string(e.repetition) +
                                " (seed " + std::to_string(e.result.seed) +
                                ") aborted: " + e.result.message);
  report.rows = summarize(report.dataset, report.runs);
  return report;
}

void print_comparison(std::ostream& out, const Report& report) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-10s %6s %6s %12s %10s %10s %10s\n", "solver", "runs", "failed",
                "mean_nfe", "std_nfe", "mean_iter", "saving%");
  out << "dataset: " << report.dataset << "  (reps " << report.repetitions << ", base seed "
      << report.base_seed << ")\n"
      << buf;
  for (const auto& r : report.rows) {
    char saving[32] = "-";
    if (r.saving_pct) std::snprintf(saving, sizeof saving, "%.1f", *r.saving_pct);
    std::snprintf(buf, sizeof buf, "%-10s %6d %6d %12.4f %10.4f %10.2f %10s\n", r.solver.c_str(),
                  r.runs, r.failed_runs, r.mean_nfe, r.std_nfe, r.mean_iterations, saving);
    out << buf;
  }
  for (const auto& w : report.warnings) out << "warning: " << w << '\n';
}

}  // namespace iretr
