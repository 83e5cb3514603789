#include "iretr/losses.hpp"

#include <cmath>
#include <string>

namespace iretr {

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))); }

LinearLossProblem::LinearLossProblem(std::shared_ptr<const Dataset> data, LossFamily family)
    : data_(std::move(data)), family_(family) {
  if (!data_) throw std::invalid_argument("LinearLossProblem: null dataset");
  if (data_->size() < 1) throw std::invalid_argument("LinearLossProblem: dataset has no rows");
  if (data_->rows.rows() != data_->size())
    throw std::invalid_argument("LinearLossProblem: row count differs from label count");
  if (family_ == LossFamily::logistic_l2) ridge_ = 1.0 / static_cast<double>(data_->size());
}

double LinearLossProblem::loss(double t, double b) const {
  switch (family_) {
    case LossFamily::logistic_l2:
      return softplus(-b * t);
    case LossFamily::sigmoid_ls: {
      const double r = b - sigmoid(t);
      return r * r;
    }
  }
  return 0.0;
}

double LinearLossProblem::dloss(double t, double b) const {
  switch (family_) {
    case LossFamily::logistic_l2:
      return -b * sigmoid(-b * t);
    case LossFamily::sigmoid_ls: {
      const double s = sigmoid(t);
      return -2.0 * (b - s) * s * sigmoid(-t);
    }
  }
  return 0.0;
}

double LinearLossProblem::d2loss(double t, double b) const {
  switch (family_) {
    case LossFamily::logistic_l2: {
      const double u = -b * t;
      return sigmoid(u) * sigmoid(-u);
    }
    case LossFamily::sigmoid_ls: {
      const double s = sigmoid(t);
      const double ds = s * sigmoid(-t);
      return 2.0 * ds * ds - 2.0 * (b - s) * ds * (1.0 - 2.0 * s);
    }
  }
  return 0.0;
}

double LinearLossProblem::term_value(Index i, const Vector& x) const {
  return loss(data_->rows.dot(i, x), data_->labels[i]);
}

double LinearLossProblem::term_value_grad(Index i, const Vector& x, double scale,
                                          Vector& grad) const {
  const double t = data_->rows.dot(i, x);
  const double b = data_->labels[i];
  data_->rows.axpy(i, scale * dloss(t, b), grad);
  return loss(t, b);
}

void LinearLossProblem::term_hess_vec(Index i, const Vector& x, const Vector& v, double scale,
                                      Vector& out) const {
  const double t = data_->rows.dot(i, x);
  const double w = d2loss(t, data_->labels[i]);
  if (w == 0.0) return;
  data_->rows.axpy(i, scale * w * data_->rows.dot(i, v), out);
}

double LinearLossProblem::accuracy(const Vector& x) const {
  Index correct = 0;
  for (Index i = 0; i < size(); ++i) {
    const double t = data_->rows.dot(i, x);
    const double b = data_->labels[i];
    const bool positive = t > 0.0;
    if (family_ == LossFamily::logistic_l2 ? (positive == (b > 0.0)) : (positive == (b > 0.5)))
      ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(size());
}

std::shared_ptr<const LinearLossProblem> make_loss(const LossSpec& spec) {
  if (!spec.data) throw std::invalid_argument("make_loss: no dataset");
  if (spec.data->size() == 0) throw std::invalid_argument("make_loss: dataset is empty");
  for (Index i = 0; i < spec.data->size(); ++i) {
    const double b = spec.data->labels[i];
    const bool ok = spec.family == LossFamily::logistic_l2 ? (b == -1.0 || b == 1.0)
                                                           : (b == 0.0 || b == 1.0);
    if (!ok)
      throw std::invalid_argument("make_loss: label " + std::to_string(b) + " at row " +
                                  std::to_string(i) + " is not admissible for " +
                                  to_string(spec.family));
  }
  return std::make_shared<const LinearLossProblem>(spec.data, spec.family);
}

}  // namespace iretr
