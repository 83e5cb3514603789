#include <algorithm>

#include "iretr/experiment.hpp"
#include "iretr/quadratic_problem.hpp"

namespace iretr {

std::vector<RateSample> rate_probe(const RunResult& run, const Vector& x_star) {
  std::vector<RateSample> out;
  const auto& xs = run.iterates;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    RateSample s;
    s.k = static_cast<int>(k);
    s.error = (xs[k] - x_star).norm();
    const double next = (xs[k + 1] - x_star).norm();
    if (s.error > 0.0) {
      s.linear_ratio = next / s.error;
      s.quadratic_ratio = next / (s.error * s.error);
    }
    out.push_back(s);
  }
  return out;
}

std::vector<RateSample> pre_floor_tail(const std::vector<RateSample>& samples, double floor,
                                       int tail) {
  std::vector<RateSample> kept;
  for (const auto& s : samples)
    if (s.error >= floor) kept.push_back(s);
  if (static_cast<int>(kept.size()) > tail) kept.erase(kept.begin(), kept.end() - tail);
  return kept;
}

std::vector<RateProbeRun> probe_rates(const RateProbeSpec& spec) {
  if (spec.seeds < 1 || spec.tail < 1) throw ConfigError("probe-rates: seeds and tail must be positive");
  if (!(spec.hessian_fraction > 0.0 && spec.hessian_fraction <= 1.0))
    throw ConfigError("probe-rates: hessian_fraction must lie in (0, 1]");
  std::vector<RateProbeRun> out(static_cast<std::size_t>(spec.seeds));
  const bool full = spec.hessian_fraction == 1.0;

#pragma omp parallel for schedule(dynamic, 1)
  for (int s = 0; s < spec.seeds; ++s) {
    const std::uint64_t seed = spec.base_seed + static_cast<std::uint64_t>(s);
    // The instance and the Hessian samples both vary with the seed.
    Sampler data_sampler(seed);
    const auto problem = synth_quadratic(spec.N, spec.n, spec.lambda_min, spec.lambda_max,
                                         data_sampler, spec.solution_scale);
    SolverConfig cfg;
    cfg.phi = 1e-13;
    cfg.max_outer = spec.max_outer;
    cfg.cg_rel_tol = spec.cg_rel_tol;
    cfg.cg_max_iter = std::max<int>(100, static_cast<int>(4 * spec.n));
    cfg.schedule.hessian_fraction = spec.hessian_fraction;
    cfg.record_iterates = true;
    Sampler sampler(seed);
    const RunResult run = statr_run(*problem, cfg, full ? HessianMode::full : HessianMode::subsampled, sampler);

    RateProbeRun& r = out[static_cast<std::size_t>(s)];
    r.seed = seed;
    r.termination = run.termination;
    r.samples = rate_probe(run, problem->minimizer());
    r.tail = pre_floor_tail(r.samples, spec.floor * (1.0 + problem->minimizer().norm()), spec.tail);
    for (const auto& t : r.tail) {
      r.tail_max_linear = std::max(r.tail_max_linear, t.linear_ratio);
      r.tail_max_quadratic = std::max(r.tail_max_quadratic, t.quadratic_ratio);
    }
  }
  return out;
}

}  // namespace iretr
