#include "iretr/quadratic_problem.hpp"

#include <stdexcept>

namespace iretr {

QuadraticSumProblem::QuadraticSumProblem(std::vector<Matrix> hessians, Vector minimizer)
    : hessians_(std::move(hessians)), minimizer_(std::move(minimizer)) {
  if (hessians_.empty()) throw std::invalid_argument("QuadraticSumProblem: no components");
  for (const Matrix& a : hessians_) {
    if (a.rows() != dim() || a.cols() != dim())
      throw std::invalid_argument("QuadraticSumProblem: Hessian shape mismatch");
  }
}

double QuadraticSumProblem::term_value(Index i, const Vector& x) const {
  const Vector d = x - minimizer_;
  return 0.5 * d.dot(hessian(i) * d);
}

double QuadraticSumProblem::term_value_grad(Index i, const Vector& x, double scale,
                                            Vector& grad) const {
  const Vector d = x - minimizer_;
  const Vector ad = hessian(i) * d;
  grad += scale * ad;
  return 0.5 * d.dot(ad);
}

void QuadraticSumProblem::term_hess_vec(Index i, const Vector&, const Vector& v, double scale,
                                        Vector& out) const {
  out.noalias() += scale * (hessian(i) * v);
}

Matrix QuadraticSumProblem::mean_hessian(const SampleSet& sample) const {
  Matrix h = Matrix::Zero(dim(), dim());
  for (Index i : sample.indices()) h += hessian(i);
  return h / static_cast<double>(sample.size());
}

}  // namespace iretr
