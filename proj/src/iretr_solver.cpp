#include <cmath>
#include <limits>

#include "iretr/kernels.hpp"
#include "iretr/solver.hpp"
#include "iretr/trust_region.hpp"

namespace iretr {

namespace {

constexpr std::uint64_t kFullSampleId = 1;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class RunAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw RunAbort(std::string("non-finite ") + what);
}

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw RunAbort(std::string("non-finite ") + what);
}

// Evaluations of the current iterate on the full sample, computed at most once.
struct FullSampleCache {
  std::optional<double> f;
  std::optional<Vector> g;
};

class IretrDriver {
 public:
  IretrDriver(const FiniteSumProblem& problem, const SolverConfig& cfg, Sampler& sampler)
      : problem_(problem), cfg_(cfg), sched_(cfg.schedule), sampler_(sampler), N_(problem.size()) {}

  RunResult run();

 private:
  SampleSet new_sample(Index M, std::uint64_t& id) {
    SampleSet s = draw_sample(M, N_, sampler_);
    id = s.is_full() ? kFullSampleId : next_sample_id_++;
    return s;
  }

  // grad f_N(x_k); free right after the full-sample function charge at x_k.
  const Vector& full_gradient() {
    if (!full_.g) {
      Vector g;
      const double f = eval_f_grad(problem_, x_, SampleSet::full(N_), g);
      if (!full_.f) {
        ledger().charge_function(N_, {point_, kFullSampleId});
        full_.f = f;
      }
      ledger().charge_gradient(N_, {point_, kFullSampleId});
      require_finite(g, "gradient");
      full_.g = std::move(g);
    }
    return *full_.g;
  }

  NfeLedger& ledger() { return result_.ledger; }

  bool iterate(int k);
  void finish(Termination t, std::string message = {});

  const FiniteSumProblem& problem_;
  const SolverConfig& cfg_;
  const ScheduleConfig& sched_;
  Sampler& sampler_;
  const Index N_;

  RunResult result_;
  Vector x_;
  std::uint64_t point_ = 0;
  std::uint64_t next_point_ = 1;
  std::uint64_t next_sample_id_ = 2;
  SampleSet sample_;
  std::uint64_t sample_id_ = 0;
  Index n_current_ = 0;
  Index n0_ = 0;
  double f_current_ = 0.0;
  std::optional<double> f_previous_;
  double theta_ = 0.0;
  double radius_ = 0.0;
  bool radius_reset_done_ = false;
  double last_grad_norm_ = kNaN;
  FullSampleCache full_;
};

void IretrDriver::finish(Termination t, std::string message) {
  result_.termination = t;
  result_.message = std::move(message);
  result_.x = x_;
  result_.final_grad_norm = last_grad_norm_;
  result_.final_sample_size = n_current_;
  result_.nfe_total = ledger().total();
}

RunResult IretrDriver::run() {
  cfg_.validate();
  result_.solver = sched_.policy == SchedulePolicy::dynamic ? "iretr_d" : "iretr_gg";
  result_.seed = sampler_.seed();
  result_.ledger = NfeLedger(N_);

  x_ = cfg_.x0 ? *cfg_.x0 : Vector::Zero(problem_.dim());
  if (x_.size() != problem_.dim()) throw std::invalid_argument("iretr_run: x0 has wrong size");
  theta_ = cfg_.theta0;
  radius_ = cfg_.delta0;
  n0_ = sched_.initial_size(N_);
  n_current_ = n0_;

  try {
    sample_ = new_sample(n0_, sample_id_);
    f_current_ = eval_f(problem_, x_, sample_);
    ledger().charge_function(n0_, {point_, sample_id_});
    require_finite(f_current_, "function value");
    if (sample_.is_full()) full_.f = f_current_;
    result_.initial_f = f_current_;
    if (cfg_.record_iterates) result_.iterates.push_back(x_);

    for (int k = 0; k < cfg_.max_outer; ++k) {
      if (!iterate(k)) return std::move(result_);
    }
    finish(Termination::max_outer);
  } catch (const RunAbort& e) {
    finish(Termination::aborted, e.what());
  } catch (const InvariantViolation& e) {
    finish(Termination::aborted, std::string("invariant violation: ") + e.what());
  }
  return std::move(result_);
}

// Returns false when the run terminated during this iteration.
bool IretrDriver::iterate(int k) {
  // Step 1: restoration.
  const Index n_restored = restore_step(n_current_, N_, sched_.growth);
  const double h_current = h_eval(n_current_, N_);
  const double h_restored = h_eval(n_restored, N_);
  const bool at_full = n_current_ == N_;
  if (at_full) full_gradient();

  for (int shrinks = 0;; ++shrinks) {
    if (shrinks > cfg_.max_shrinks)
      throw RunAbort("more than " + std::to_string(cfg_.max_shrinks) +
                     " radius reductions in iteration " + std::to_string(k));

    // Step 2: relaxation, then evaluation on a freshly drawn sample.
    RelaxState state{n_current_, std::nullopt};
    if (at_full && sched_.refined_full_rule) state.full_grad_norm = full_.g->norm();
    const Index n_next = relax_step(n_restored, radius_, sched_, n0_, N_, state);
    result_.schedule_log.push_back({k, n_current_, n_restored, n_next, radius_, sched_.mu(N_),
                                    sched_.gamma, sched_.refined_full_rule,
                                    state.full_grad_norm.value_or(kNaN)});

    if (at_full && n_next == N_ && !radius_reset_done_) {
      radius_ = std::max(cfg_.radius_reset_floor, radius_);
      radius_reset_done_ = true;
    }

    SampleSet next_sample;
    std::uint64_t next_id = 0;
    double f0 = 0.0;
    Vector g;
    if (n_next == N_ && full_.f) {
      next_sample = SampleSet::full(N_);
      next_id = kFullSampleId;
      f0 = *full_.f;
      g = full_gradient();
    } else {
      next_sample = new_sample(n_next, next_id);
      f0 = eval_f_grad(problem_, x_, next_sample, g);
      ledger().charge_function(n_next, {point_, next_id});
      ledger().charge_gradient(n_next, {point_, next_id});
      require_finite(f0, "function value");
      require_finite(g, "gradient");
      if (next_sample.is_full()) {
        full_.f = f0;
        full_.g = g;
      }
    }
    const double gnorm = g.norm();
    last_grad_norm_ = gnorm;

    // Stopping rule on the (possibly subsampled) quantities.
    if ((cfg_.practical_stop && gnorm <= cfg_.phi) ||
        (cfg_.eps_g > 0.0 && at_full && gnorm <= cfg_.eps_g)) {
      finish(Termination::grad_tol);
      return false;
    }
    if (cfg_.practical_stop && f_previous_ &&
        std::abs(f_current_ - *f_previous_) <= cfg_.phi * std::abs(f_current_)) {
      finish(Termination::f_stall);
      return false;
    }

    const SampleSet hess_sample =
        sched_.hessian_policy == HessianPolicy::adaptive
            ? hessian_sample_of_size(next_sample,
                                     adaptive_hessian_size(gnorm, sched_.adaptive_c,
                                                           sched_.adaptive_C, sched_,
                                                           problem_.dim(), n_next),
                                     sampler_)
            : hessian_sample(next_sample, sched_.hessian_fraction, sampler_);
    QuadraticModel model{f0, g, [&](const Vector& v) { return hess_vec(problem_, x_, hess_sample, v); }};
    const TRSolution sol = steihaug_cg(model, radius_, cfg_.cg_rel_tol, cfg_.cg_max_iter);
    ledger().charge_cg(hess_sample.size(), sol.cg_iterations);
    require_finite(sol.p, "trust-region step");
    const double m_step = f0 - sol.model_decrease;
    const double m_cauchy = f0 - sol.cauchy_decrease;

    // Step 3: the subsampled model must still agree with f_N at x_k.
    if (at_full && n_next < N_ && !step3_gate(f_current_, m_step, f0, m_cauchy, cfg_.tau)) {
      radius_ *= cfg_.zeta1;
      continue;
    }

    // Step 4: penalty parameter.
    const double theta_next =
        update_penalty(theta_, f_current_, m_step, h_current, h_restored, cfg_.eta);

    // Step 5: acceptance.
    Vector x_trial = x_ + sol.p;
    const std::uint64_t trial_point = next_point_++;
    const double f_trial = eval_f(problem_, x_trial, next_sample);
    ledger().charge_function(n_next, {trial_point, next_id});
    require_finite(f_trial, "function value");
    const double h_next = h_eval(n_next, N_);
    const double pr = pred(theta_next, f_current_, m_step, h_current, h_restored);
    const double ar = ared(theta_next, f_current_, f_trial, h_current, h_next);

    if (!accept_test(ar, pr, cfg_.eta)) {
      radius_ = radius_update(radius_, {false, 0.0}, cfg_);
      continue;
    }

    const double ratio = pr > 0.0 ? ar / pr : 0.0;
    const double radius_next = radius_update(radius_, {true, ratio}, cfg_);

    IterRecord rec;
    rec.k = k;
    rec.n_current = n_current_;
    rec.n_restored = n_restored;
    rec.n_next = n_next;
    rec.hessian_size = hess_sample.size();
    rec.theta = theta_next;
    rec.radius = radius_;
    rec.radius_next = radius_next;
    rec.shrinks = shrinks;
    rec.f_value = f_trial;
    rec.f_previous = f_current_;
    rec.grad_norm = gnorm;
    rec.model_decrease = sol.model_decrease;
    rec.pred = pr;
    rec.ared = ar;
    rec.h_current = h_current;
    rec.h_restored = h_restored;
    rec.h_next = h_next;
    rec.cg_iterations = sol.cg_iterations;
    rec.cum_nfe = ledger().total();
    rec.f_test = cfg_.monitor ? cfg_.monitor(x_trial) : kNaN;
    result_.trajectory.push_back(rec);

    x_ = std::move(x_trial);
    point_ = trial_point;
    sample_ = std::move(next_sample);
    sample_id_ = next_id;
    f_previous_ = f_current_;
    f_current_ = f_trial;
    n_current_ = n_next;
    theta_ = theta_next;
    radius_ = radius_next;
    full_ = {};
    if (sample_.is_full()) full_.f = f_current_;
    if (cfg_.record_iterates) result_.iterates.push_back(x_);
    return true;
  }
}

}  // namespace

RunResult iretr_run(const FiniteSumProblem& problem, const SolverConfig& cfg, Sampler& sampler) {
  IretrDriver driver(problem, cfg, sampler);
  return driver.run();
}

}  // namespace iretr
