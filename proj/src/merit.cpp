#include <cmath>

#include "iretr/solver.hpp"

namespace iretr {

void SolverConfig::validate() const {
  if (!(delta0 > 0.0)) throw std::invalid_argument("config: delta0 must be positive");
  if (!(zeta1 > 0.0 && zeta1 < 1.0 && zeta2 > 1.0))
    throw std::invalid_argument("config: need 0 < zeta1 < 1 < zeta2");
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("config: tau must lie in (0, 1)");
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("config: eta must lie in (0, 1)");
  if (!(theta0 > 0.0 && theta0 < 1.0))
    throw std::invalid_argument("config: theta0 must lie in (0, 1)");
  if (!(phi >= 0.0) || !(eps_g >= 0.0))
    throw std::invalid_argument("config: stopping tolerances must be >= 0");
  if (max_outer < 1) throw std::invalid_argument("config: max_outer must be positive");
  if (max_shrinks < 1) throw std::invalid_argument("config: max_shrinks must be positive");
  if (!(cg_rel_tol > 0.0 && cg_rel_tol < 1.0))
    throw std::invalid_argument("config: cg_rel_tol must lie in (0, 1)");
  if (cg_max_iter < 1) throw std::invalid_argument("config: cg_max_iter must be positive");
  schedule.validate();
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::grad_tol:
      return "grad_tol";
    case Termination::f_stall:
      return "f_stall";
    case Termination::max_outer:
      return "max_outer";
    case Termination::aborted:
      return "aborted";
  }
  return "unknown";
}

double merit(double f_val, double h_val, double theta) {
  return theta * f_val + (1.0 - theta) * h_val;
}

double pred(double theta, double f_current, double m_step, double h_current, double h_restored) {
  return theta * (f_current - m_step) + (1.0 - theta) * (h_current - h_restored);
}

double ared(double theta, double f_current, double f_trial, double h_current, double h_next) {
  return theta * (f_current - f_trial) + (1.0 - theta) * (h_current - h_next);
}

double update_penalty(double theta, double f_current, double m_step, double h_current,
                      double h_restored, double eta) {
  const double hdiff = h_current - h_restored;
  if (pred(theta, f_current, m_step, h_current, h_restored) >= eta * hdiff) return theta;
  const double denom = m_step - f_current + hdiff;
  if (!(denom > 0.0))
    throw InvariantViolation("update_penalty: nonpositive denominator " + std::to_string(denom));
  const double next = std::min(theta, (1.0 - eta) * hdiff / denom);
  if (!(next > 0.0))
    throw InvariantViolation("update_penalty: penalty parameter would become " + std::to_string(next));
  return next;
}

bool step3_gate(double f_full, double m_step, double m_zero, double m_cauchy, double tau) {
  return f_full - m_step >= tau * (m_zero - m_cauchy);
}

bool accept_test(double ared_val, double pred_val, double eta) {
  return ared_val >= eta * pred_val;
}

double radius_update(double radius, StepOutcome outcome, const SolverConfig& cfg) {
  if (!outcome.accepted) return cfg.zeta1 * radius;
  if (outcome.ratio >= cfg.success_expand_threshold) return cfg.zeta2 * radius;
  return radius;
}

}  // namespace iretr
