#include "iretr/kernels.hpp"

namespace iretr::serial {

double eval_f(const FiniteSumProblem& problem, const Vector& x, const SampleSet& sample) {
  check_sample(problem, sample);
  double sum = 0.0;
  for (Index i : sample.indices()) sum += problem.term_value(i, x);
  return sum / static_cast<double>(sample.size()) + 0.5 * problem.ridge() * x.squaredNorm();
}

double eval_f_grad(const FiniteSumProblem& problem, const Vector& x, const SampleSet& sample,
                   Vector& grad) {
  check_sample(problem, sample);
  const double scale = 1.0 / static_cast<double>(sample.size());
  grad = Vector::Zero(problem.dim());
  double sum = 0.0;
  for (Index i : sample.indices()) sum += problem.term_value_grad(i, x, scale, grad);
  grad += problem.ridge() * x;
  return sum * scale + 0.5 * problem.ridge() * x.squaredNorm();
}

Vector hess_vec(const FiniteSumProblem& problem, const Vector& x, const SampleSet& sample,
                const Vector& v) {
  check_sample(problem, sample);
  const double scale = 1.0 / static_cast<double>(sample.size());
  Vector out = Vector::Zero(problem.dim());
  for (Index i : sample.indices()) problem.term_hess_vec(i, x, v, scale, out);
  out += problem.ridge() * v;
  return out;
}

}  // namespace iretr::serial
