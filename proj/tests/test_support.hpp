#pragma once

#include <memory>
#include <vector>

#include "iretr/dataset.hpp"
#include "iretr/losses.hpp"
#include "iretr/problem.hpp"
#include "iretr/sampling.hpp"

namespace iretr::testing {

// phi_i(x) = c_i
class ConstantProblem final : public FiniteSumProblem {
 public:
  ConstantProblem(std::vector<double> c, Index n) : c_(std::move(c)), n_(n) {}
  Index size() const override { return static_cast<Index>(c_.size()); }
  Index dim() const override { return n_; }
  double term_value(Index i, const Vector&) const override { return c_[static_cast<std::size_t>(i)]; }
  double term_value_grad(Index i, const Vector&, double, Vector&) const override {
    return c_[static_cast<std::size_t>(i)];
  }
  void term_hess_vec(Index, const Vector&, const Vector&, double, Vector&) const override {}

 private:
  std::vector<double> c_;
  Index n_;
};

// phi_i(x) = 0.5 ||x - centre||^2 for every i.
class IdenticalQuadratics final : public FiniteSumProblem {
 public:
  IdenticalQuadratics(Index N, Vector centre) : N_(N), centre_(std::move(centre)) {}
  Index size() const override { return N_; }
  Index dim() const override { return centre_.size(); }
  double term_value(Index, const Vector& x) const override {
    return 0.5 * (x - centre_).squaredNorm();
  }
  double term_value_grad(Index, const Vector& x, double scale, Vector& grad) const override {
    grad += scale * (x - centre_);
    return 0.5 * (x - centre_).squaredNorm();
  }
  void term_hess_vec(Index, const Vector&, const Vector& v, double scale, Vector& out) const override {
    out += scale * v;
  }

 private:
  Index N_;
  Vector centre_;
};

inline Vector random_vector(Index n, Sampler& s, double scale = 1.0) {
  Vector v(n);
  for (Index j = 0; j < n; ++j) v[j] = scale * s.normal();
  return v;
}

inline std::shared_ptr<const Dataset> random_dataset(Index N, Index n, LossFamily family,
                                                     Sampler& s, double density = 1.0) {
  auto d = std::make_shared<Dataset>();
  d->name = "random";
  d->n = n;
  std::vector<std::pair<Index, double>> entries;
  for (Index i = 0; i < N; ++i) {
    entries.clear();
    for (Index j = 0; j < n; ++j)
      if (density >= 1.0 || s.uniform01() < density) entries.emplace_back(j, s.normal());
    d->rows.push_row(entries);
    const bool pos = s.uniform01() < 0.5;
    d->labels.push_back(family == LossFamily::logistic_l2 ? (pos ? 1.0 : -1.0) : (pos ? 1.0 : 0.0));
  }
  return d;
}

inline std::shared_ptr<const LinearLossProblem> random_loss(Index N, Index n, LossFamily family,
                                                            Sampler& s) {
  return make_loss({family, random_dataset(N, n, family, s)});
}

}  // namespace iretr::testing
