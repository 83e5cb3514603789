#pragma once

#include <vector>

#include "iretr/problem.hpp"

namespace iretr {

/// phi_i(x) = 0.5 (x - x*)^T A_i (x - x*), every A_i symmetric.
///
/// All components share the minimizer x*, so every subsampled average is
/// minimized there as well.
class QuadraticSumProblem final : public FiniteSumProblem {
 public:
  QuadraticSumProblem(std::vector<Matrix> hessians, Vector minimizer);

  Index size() const override { return static_cast<Index>(hessians_.size()); }
  Index dim() const override { return minimizer_.size(); }

  double term_value(Index i, const Vector& x) const override;
  double term_value_grad(Index i, const Vector& x, double scale, Vector& grad) const override;
  void term_hess_vec(Index i, const Vector& x, const Vector& v, double scale,
                     Vector& out) const override;

  const Vector& minimizer() const { return minimizer_; }
  const Matrix& hessian(Index i) const { return hessians_[static_cast<std::size_t>(i)]; }
  /// Mean of A_i over the sample.
  Matrix mean_hessian(const SampleSet& sample) const;

 private:
  std::vector<Matrix> hessians_;
  Vector minimizer_;
};

}  // namespace iretr
