#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "iretr/nfe_ledger.hpp"
#include "iretr/problem.hpp"
#include "iretr/sampling.hpp"

namespace iretr {

class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct SolverConfig {
  double delta0 = 10.0;
  double tau = 0.1;
  double eta = 0.1;
  double zeta1 = 0.5;
  double zeta2 = 1.2;
  double theta0 = 0.9;
  /// Full-precision test ||grad f_{N_{k+1}}(x_k)|| <= eps_g with N_k = N; 0 disables it.
  double eps_g = 0.0;
  /// Tolerance of the practical stopping rule on (possibly subsampled) f and grad.
  double phi = 1e-4;
  /// Apply the phi rule; when off, only the eps_g test (at N_k = N) and max_outer end a run.
  bool practical_stop = true;
  int max_outer = 1000;
  double success_expand_threshold = 1.1;
  double radius_reset_floor = 1.0;
  /// Radius reductions allowed within one outer iteration before the run aborts.
  int max_shrinks = 100;
  double cg_rel_tol = 1e-3;
  int cg_max_iter = 100;
  ScheduleConfig schedule;
  /// Starting point; zeros when unset.
  std::optional<Vector> x0;
  /// Keep x_k for every accepted iterate (needed by rate probes).
  bool record_iterates = false;
  /// Reporting hook evaluated at each accepted iterate (e.g. test loss); never charged.
  std::function<double(const Vector&)> monitor;

  void validate() const;
};

enum class Termination { grad_tol, f_stall, max_outer, aborted };
std::string to_string(Termination t);

/// One accepted step x_k -> x_{k+1}.
struct IterRecord {
  int k = 0;
  Index n_current = 0;   // N_k
  Index n_restored = 0;  // N~_{k+1}
  Index n_next = 0;      // N_{k+1}
  Index hessian_size = 0;  // D_{k+1}
  double theta = 0.0;    // theta_{k+1}
  double radius = 0.0;   // radius of the accepted trial
  double radius_next = 0.0;
  int shrinks = 0;       // T_k
  double f_value = 0.0;  // f_{N_{k+1}}(x_{k+1})
  double f_previous = 0.0;  // f_{N_k}(x_k)
  double grad_norm = 0.0;   // ||grad f_{N_{k+1}}(x_k)||
  double model_decrease = 0.0;
  double pred = 0.0;
  double ared = 0.0;
  double h_current = 0.0;
  double h_restored = 0.0;
  double h_next = 0.0;
  int cg_iterations = 0;
  double cum_nfe = 0.0;
  double f_test = 0.0;  // NaN without a monitor
};

/// One pass through the sample-size selection (restoration + relaxation).
struct ScheduleRecord {
  int k = 0;
  Index n_current = 0;
  Index n_restored = 0;
  Index n_next = 0;
  double radius = 0.0;
  double mu = 0.0;
  double gamma = 1.0;
  bool refined = false;
  double full_grad_norm = 0.0;  // NaN when not available
};

struct RunResult {
  std::string solver;
  std::uint64_t seed = 0;
  std::string rng = Sampler::kAlgorithm;
  Vector x;
  Termination termination = Termination::max_outer;
  std::string message;
  std::vector<IterRecord> trajectory;
  std::vector<ScheduleRecord> schedule_log;
  std::vector<Vector> iterates;  // x_0, x_1, ... when record_iterates is set
  double initial_f = 0.0;
  double final_grad_norm = 0.0;
  Index final_sample_size = 0;
  double nfe_total = 0.0;
  NfeLedger ledger{1};

  int iterations() const { return static_cast<int>(trajectory.size()); }
  bool ok() const { return termination != Termination::aborted; }
};

// Merit-function pieces.

double merit(double f_val, double h_val, double theta);
double pred(double theta, double f_current, double m_step, double h_current, double h_restored);
double ared(double theta, double f_current, double f_trial, double h_current, double h_next);
/// Largest theta <= theta_k with pred(theta) >= eta (h(N_k) - h(N~)).
double update_penalty(double theta, double f_current, double m_step, double h_current,
                      double h_restored, double eta);
/// Whether the full-sample agreement test passes (false: shrink and redo sample selection).
bool step3_gate(double f_full, double m_step, double m_zero, double m_cauchy, double tau);
bool accept_test(double ared_val, double pred_val, double eta);

struct StepOutcome {
  bool accepted = false;
  double ratio = 0.0;  // Ared / Pred when accepted
};
double radius_update(double radius, StepOutcome outcome, const SolverConfig& cfg);

/// Inexact-restoration trust-region method on f_N with adaptive sample sizes.
RunResult iretr_run(const FiniteSumProblem& problem, const SolverConfig& cfg, Sampler& sampler);

enum class HessianMode { subsampled, full };

/// Standard trust region on f_N; the Hessian is full or drawn at the schedule's
/// hessian_fraction of N each iteration.
RunResult statr_run(const FiniteSumProblem& problem, const SolverConfig& cfg, HessianMode mode,
                    Sampler& sampler);

}  // namespace iretr
