#pragma once

#include <memory>

#include "iretr/dataset.hpp"
#include "iretr/problem.hpp"

namespace iretr {

// Overflow-safe scalar helpers.
double sigmoid(double t);
/// log(1 + e^t)
double softplus(double t);

/// Components that depend on the data only through t_i = a_i^T x:
///   logistic_l2: phi_i(x) = log(1 + exp(-b_i t_i)) + ||x||^2 / (2N),  b_i in {-1, +1}
///   sigmoid_ls:  phi_i(x) = (b_i - sigmoid(t_i))^2,                      b_i in {0, 1}
class LinearLossProblem final : public FiniteSumProblem {
 public:
  LinearLossProblem(std::shared_ptr<const Dataset> data, LossFamily family);

  Index size() const override { return data_->size(); }
  Index dim() const override { return data_->n; }
  double ridge() const override { return ridge_; }

  double term_value(Index i, const Vector& x) const override;
  double term_value_grad(Index i, const Vector& x, double scale, Vector& grad) const override;
  void term_hess_vec(Index i, const Vector& x, const Vector& v, double scale,
                     Vector& out) const override;

  LossFamily family() const { return family_; }
  const Dataset& data() const { return *data_; }

  /// Fraction of rows classified correctly by sign(a^T x) (threshold 0.5 on sigmoid).
  double accuracy(const Vector& x) const;

 private:
  double loss(double t, double b) const;
  double dloss(double t, double b) const;
  double d2loss(double t, double b) const;

  std::shared_ptr<const Dataset> data_;
  LossFamily family_;
  double ridge_ = 0.0;
};

struct LossSpec {
  LossFamily family = LossFamily::logistic_l2;
  std::shared_ptr<const Dataset> data;
};

/// Validates labels against the family and builds the problem.
std::shared_ptr<const LinearLossProblem> make_loss(const LossSpec& spec);

}  // namespace iretr
