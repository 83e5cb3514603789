#pragma once

#include <functional>

#include "iretr/problem.hpp"

namespace iretr {

/// Symmetric operator v -> B v.
using LinearOperator = std::function<Vector(const Vector&)>;

LinearOperator zero_operator();
LinearOperator matrix_operator(Matrix B);

/// m(p) = f0 + g^T p + 0.5 p^T B p
struct QuadraticModel {
  double f0 = 0.0;
  Vector g;
  LinearOperator B;

  double value(const Vector& p) const;
  /// m(0) - m(p)
  double decrease(const Vector& p) const;
};

struct TRSolution {
  Vector p;
  double model_decrease = 0.0;
  /// m(0) - m(p^C), obtained from the first CG product at no extra cost.
  double cauchy_decrease = 0.0;
  bool on_boundary = false;
  bool negative_curvature_hit = false;
  int cg_iterations = 0;
};

/// Minimizer of m along -g inside the ball of radius `radius`.
Vector cauchy_point(const QuadraticModel& model, double radius);

/// Model decrease of the Cauchy point given g^T B g; avoids recomputing B g.
double cauchy_decrease(double gnorm, double gBg, double radius);

/// Truncated CG from p = 0: exits on the boundary, on d^T B d <= 0, when
/// ||B p + g|| <= rel_tol ||g||, or after max_iter products.
TRSolution steihaug_cg(const QuadraticModel& model, double radius, double rel_tol = 1e-3,
                       int max_iter = 100);

/// m(0) - m(p) >= tau (m(0) - m(p^C))
bool sufficient_decrease(const QuadraticModel& model, const Vector& p, const Vector& pC, double tau);

/// Positive root t of ||p + t d|| = radius for ||p|| <= radius.
double boundary_step(const Vector& p, const Vector& d, double radius);

}  // namespace iretr
