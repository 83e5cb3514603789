#include "iretr/trust_region.hpp"

#include <cmath>
#include <stdexcept>

namespace iretr {

LinearOperator zero_operator() {
  return [](const Vector& v) -> Vector { return Vector::Zero(v.size()); };
}

LinearOperator matrix_operator(Matrix B) {
  return [B = std::move(B)](const Vector& v) -> Vector { return B * v; };
}

double QuadraticModel::value(const Vector& p) const { return f0 - decrease(p); }

double QuadraticModel::decrease(const Vector& p) const {
  return -(g.dot(p) + 0.5 * p.dot(B(p)));
}

double cauchy_decrease(double gnorm, double gBg, double radius) {
  if (gnorm == 0.0) return 0.0;
  double t = radius / gnorm;
  if (gBg > 0.0) t = std::min(t, gnorm * gnorm / gBg);
  return t * gnorm * gnorm - 0.5 * t * t * gBg;
}

Vector cauchy_point(const QuadraticModel& model, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("cauchy_point: radius must be positive");
  const double gnorm = model.g.norm();
  if (gnorm == 0.0) return Vector::Zero(model.g.size());
  const double gBg = model.g.dot(model.B(model.g));
  double t = radius / gnorm;
  if (gBg > 0.0) t = std::min(t, gnorm * gnorm / gBg);
  return -t * model.g;
}

double boundary_step(const Vector& p, const Vector& d, double radius) {
  const double a = d.squaredNorm();
  const double b = 2.0 * p.dot(d);
  const double c = std::min(0.0, p.squaredNorm() - radius * radius);
  if (a == 0.0) return 0.0;
  const double disc = std::sqrt(b * b - 4.0 * a * c);
  // Both forms give the non-negative root; pick the one free of cancellation.
  return b > 0.0 ? (-2.0 * c) / (b + disc) : (-b + disc) / (2.0 * a);
}

TRSolution steihaug_cg(const QuadraticModel& model, double radius, double rel_tol, int max_iter) {
  if (!(radius > 0.0)) throw std::invalid_argument("steihaug_cg: radius must be positive");
  if (!(rel_tol > 0.0 && rel_tol < 1.0))
    throw std::invalid_argument("steihaug_cg: rel_tol must lie in (0, 1)");

  const Index n = model.g.size();
  TRSolution sol;
  sol.p = Vector::Zero(n);
  const double gnorm = model.g.norm();
  if (gnorm == 0.0) return sol;

  Vector Bp = Vector::Zero(n);
  Vector r = model.g;  // r = B p + g
  Vector d = -r;
  double rr = r.squaredNorm();
  const double tol = rel_tol * gnorm;

  auto finish = [&](TRSolution& s) {
    s.model_decrease = std::max(0.0, -(model.g.dot(s.p) + 0.5 * s.p.dot(Bp)));
    return s;
  };

  for (int it = 0; it < max_iter; ++it) {
    const Vector Bd = model.B(d);
    ++sol.cg_iterations;
    const double dBd = d.dot(Bd);
    if (it == 0) sol.cauchy_decrease = cauchy_decrease(gnorm, dBd, radius);

    if (dBd <= 0.0) {
      const double t = boundary_step(sol.p, d, radius);
      sol.p += t * d;
      Bp += t * Bd;
      sol.on_boundary = true;
      sol.negative_curvature_hit = true;
      return finish(sol);
    }
    const double alpha = rr / dBd;
    const Vector p_next = sol.p + alpha * d;
    if (p_next.norm() >= radius) {
      const double t = boundary_step(sol.p, d, radius);
      sol.p += t * d;
      Bp += t * Bd;
      sol.on_boundary = true;
      return finish(sol);
    }
    sol.p = p_next;
    Bp += alpha * Bd;
    r += alpha * Bd;
    const double rr_next = r.squaredNorm();
    if (std::sqrt(rr_next) <= tol) break;
    d = -r + (rr_next / rr) * d;
    rr = rr_next;
  }
  return finish(sol);
}

bool sufficient_decrease(const QuadraticModel& model, const Vector& p, const Vector& pC,
                         double tau) {
  return model.decrease(p) >= tau * model.decrease(pC);
}

}  // namespace iretr
