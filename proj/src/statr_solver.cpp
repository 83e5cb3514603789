#include <cmath>
#include <limits>

#include "iretr/kernels.hpp"
#include "iretr/solver.hpp"
#include "iretr/trust_region.hpp"

namespace iretr {

RunResult statr_run(const FiniteSumProblem& problem, const SolverConfig& cfg, HessianMode mode,
                    Sampler& sampler) {
  cfg.validate();
  const Index N = problem.size();
  constexpr std::uint64_t kFull = 1;

  RunResult res;
  res.solver = mode == HessianMode::full ? "statr_fh" : "statr_sh";
  res.seed = sampler.seed();
  res.ledger = NfeLedger(N);
  NfeLedger& ledger = res.ledger;

  const SampleSet full = SampleSet::full(N);
  Vector x = cfg.x0 ? *cfg.x0 : Vector::Zero(problem.dim());
  if (x.size() != problem.dim()) throw std::invalid_argument("statr_run: x0 has wrong size");
  std::uint64_t point = 0;
  std::uint64_t next_point = 1;
  double radius = cfg.delta0;
  double f = eval_f(problem, x, full);
  ledger.charge_function(N, {point, kFull});
  res.initial_f = f;
  if (cfg.record_iterates) res.iterates.push_back(x);
  std::optional<double> f_prev;
  double gnorm = std::numeric_limits<double>::quiet_NaN();

  auto finish = [&](Termination t, std::string message = {}) {
    res.termination = t;
    res.message = std::move(message);
    res.x = x;
    res.final_grad_norm = gnorm;
    res.final_sample_size = N;
    res.nfe_total = ledger.total();
    return std::move(res);
  };
  if (!std::isfinite(f)) return finish(Termination::aborted, "non-finite function value");

  for (int k = 0; k < cfg.max_outer; ++k) {
    Vector g;
    eval_f_grad(problem, x, full, g);
    ledger.charge_gradient(N, {point, kFull});
    if (!g.allFinite()) return finish(Termination::aborted, "non-finite gradient");
    gnorm = g.norm();
    if ((cfg.practical_stop && gnorm <= cfg.phi) || (cfg.eps_g > 0.0 && gnorm <= cfg.eps_g))
      return finish(Termination::grad_tol);
    if (cfg.practical_stop && f_prev && std::abs(f - *f_prev) <= cfg.phi * std::abs(f))
      return finish(Termination::f_stall);

    const SampleSet hess_sample =
        mode == HessianMode::full ? full
                                  : hessian_sample(full, cfg.schedule.hessian_fraction, sampler);
    QuadraticModel model{f, g, [&](const Vector& v) { return hess_vec(problem, x, hess_sample, v); }};

    for (int shrinks = 0;; ++shrinks) {
      if (shrinks > cfg.max_shrinks)
        return finish(Termination::aborted, "more than " + std::to_string(cfg.max_shrinks) +
                                                " radius reductions in iteration " +
                                                std::to_string(k));
      const TRSolution sol = steihaug_cg(model, radius, cfg.cg_rel_tol, cfg.cg_max_iter);
      ledger.charge_cg(hess_sample.size(), sol.cg_iterations);
      Vector x_trial = x + sol.p;
      const std::uint64_t trial_point = next_point++;
      const double f_trial = eval_f(problem, x_trial, full);
      ledger.charge_function(N, {trial_point, kFull});
      if (!std::isfinite(f_trial)) return finish(Termination::aborted, "non-finite function value");

      const double actual = f - f_trial;
      const double predicted = sol.model_decrease;
      if (!accept_test(actual, predicted, cfg.eta) || !(predicted > 0.0)) {
        radius = radius_update(radius, {false, 0.0}, cfg);
        continue;
      }
      const double radius_next = radius_update(radius, {true, actual / predicted}, cfg);

      IterRecord rec;
      rec.k = k;
      rec.n_current = rec.n_restored = rec.n_next = N;
      rec.hessian_size = hess_sample.size();
      rec.theta = 1.0;
      rec.radius = radius;
      rec.radius_next = radius_next;
      rec.shrinks = shrinks;
      rec.f_value = f_trial;
      rec.f_previous = f;
      rec.grad_norm = gnorm;
      rec.model_decrease = predicted;
      rec.pred = predicted;
      rec.ared = actual;
      rec.cg_iterations = sol.cg_iterations;
      rec.cum_nfe = ledger.total();
      rec.f_test = cfg.monitor ? cfg.monitor(x_trial) : std::numeric_limits<double>::quiet_NaN();
      res.trajectory.push_back(rec);

      x = std::move(x_trial);
      point = trial_point;
      f_prev = f;
      f = f_trial;
      radius = radius_next;
      if (cfg.record_iterates) res.iterates.push_back(x);
      break;
    }
  }
  return finish(Termination::max_outer);
}

}  // namespace iretr
