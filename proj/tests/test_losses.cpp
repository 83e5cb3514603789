#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "iretr/kernels.hpp"
#include "iretr/quadratic_problem.hpp"
#include "test_support.hpp"

using namespace iretr;
using namespace iretr::testing;

namespace {

std::shared_ptr<const Dataset> one_row(std::vector<double> a, double b) {
  auto d = std::make_shared<Dataset>();
  d->n = static_cast<Index>(a.size());
  std::vector<std::pair<Index, double>> e;
  for (std::size_t j = 0; j < a.size(); ++j) e.emplace_back(static_cast<Index>(j), a[j]);
  d->rows.push_row(e);
  d->labels.push_back(b);
  return d;
}

}  // namespace

TEST_CASE("logistic at the origin is log 2 on any sample") {
  Sampler s(1);
  auto p = random_loss(50, 4, LossFamily::logistic_l2, s);
  const Vector x = Vector::Zero(4);
  CHECK(eval_f(*p, x, SampleSet::full(50)) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(eval_f(*p, x, draw_sample(7, 50, s)) == doctest::Approx(0.693147).epsilon(1e-6));
}

TEST_CASE("sigmoid least squares at the origin is 0.25") {
  for (double b : {0.0, 1.0}) {
    Sampler s(2);
    auto d = std::make_shared<Dataset>(*random_dataset(20, 3, LossFamily::sigmoid_ls, s));
    for (double& lbl : d->labels) lbl = b;
    auto p = make_loss({LossFamily::sigmoid_ls, d});
    CHECK(eval_f(*p, Vector::Zero(3), SampleSet::full(20)) == doctest::Approx(0.25));
  }
}

TEST_CASE("logistic component gradient at the origin is -b a / 2") {
  Sampler s(3);
  auto p = random_loss(30, 5, LossFamily::logistic_l2, s);
  const Vector x = Vector::Zero(5);
  for (Index i : {0, 7, 29}) {
    const Vector g = eval_grad(*p, x, SampleSet({i}, 30));
    const Vector expect = -0.5 * p->data().labels[i] * p->data().rows.dense_row(i, 5);
    CHECK((g - expect).norm() <= 1e-15);
  }
  auto single = make_loss({LossFamily::logistic_l2, one_row({1.0}, 1.0)});
  CHECK(eval_grad(*single, Vector::Zero(1), SampleSet::full(1))[0] == doctest::Approx(-0.5));
  CHECK(single->ridge() == 1.0);
}

TEST_CASE("subsampled logistic keeps the full regularizer") {
  Sampler s(4);
  auto p = random_loss(40, 3, LossFamily::logistic_l2, s);
  const Vector x = random_vector(3, s);
  const SampleSet S({5}, 40);
  const double expect = softplus(-p->data().labels[5] * p->data().rows.dot(5, x)) +
                        x.squaredNorm() / (2.0 * 40.0);
  CHECK(eval_f(*p, x, S) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("gradient and Hessian-vector products match finite differences") {
  Sampler s(5);
  for (LossFamily fam : {LossFamily::logistic_l2, LossFamily::sigmoid_ls}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Index n = 1 + s.uniform_below(20), N = 1 + s.uniform_below(200);
      auto p = random_loss(N, n, fam, s);
      const SampleSet S = draw_sample(1 + s.uniform_below(N), N, s);
      const Vector x = random_vector(n, s, 0.5);
      Vector v = random_vector(n, s);
      v /= v.norm();
      const double h = 1e-6 * (1.0 + x.norm());
      const double fd = (eval_f(*p, x + h * v, S) - eval_f(*p, x - h * v, S)) / (2.0 * h);
      const Vector g = eval_grad(*p, x, S);
      CHECK(std::abs(fd - g.dot(v)) <= 1e-6 * (1.0 + std::abs(eval_f(*p, x, S))));
      const Vector hfd = (eval_grad(*p, x + h * v, S) - eval_grad(*p, x - h * v, S)) / (2.0 * h);
      const Vector hv = hess_vec(*p, x, S, v);
      CHECK((hfd - hv).norm() <= 1e-5 * std::max(1.0, hv.norm()));
    }
  }
}

TEST_CASE("Hessian operator is symmetric") {
  Sampler s(6);
  for (LossFamily fam : {LossFamily::logistic_l2, LossFamily::sigmoid_ls}) {
    auto p = random_loss(100, 8, fam, s);
    for (int t = 0; t < 20; ++t) {
      const Vector x = random_vector(8, s), v = random_vector(8, s), w = random_vector(8, s);
      const SampleSet S = draw_sample(30, 100, s);
      const double a = v.dot(hess_vec(*p, x, S, w)), b = w.dot(hess_vec(*p, x, S, v));
      CHECK(std::abs(a - b) <= 1e-12 * v.norm() * w.norm());
    }
  }
}

TEST_CASE("logistic Hessian is bounded below by the folded regularizer") {
  Sampler s(7);
  auto p = random_loss(60, 5, LossFamily::logistic_l2, s);
  for (int t = 0; t < 50; ++t) {
    const Vector x = random_vector(5, s, 10.0), v = random_vector(5, s);
    const SampleSet S = draw_sample(1 + s.uniform_below(60), 60, s);
    CHECK(v.dot(hess_vec(*p, x, S, v)) >= v.squaredNorm() / 60.0 * (1.0 - 1e-12));
  }
}

TEST_CASE("losses stay finite for margins of 1e4") {
  for (double t : {1e4, -1e4}) {
    CHECK(std::isfinite(softplus(t)));
    CHECK(std::isfinite(sigmoid(t)));
    for (LossFamily fam : {LossFamily::logistic_l2, LossFamily::sigmoid_ls}) {
      auto p = make_loss({fam, one_row({1.0}, 1.0)});
      const Vector x = Vector::Constant(1, t);
      Vector g;
      CHECK(std::isfinite(eval_f_grad(*p, x, SampleSet::full(1), g)));
      CHECK(g.allFinite());
      CHECK(hess_vec(*p, x, SampleSet::full(1), Vector::Ones(1)).allFinite());
    }
  }
  CHECK(softplus(1e4) == doctest::Approx(1e4));
  CHECK(softplus(-1e4) == 0.0);
}

TEST_CASE("make_loss rejects labels outside the family's set and empty data") {
  CHECK_THROWS_AS(make_loss({LossFamily::logistic_l2, one_row({1.0}, 0.0)}), std::invalid_argument);
  CHECK_THROWS_AS(make_loss({LossFamily::sigmoid_ls, one_row({1.0}, -1.0)}), std::invalid_argument);
  CHECK_THROWS_AS(make_loss({LossFamily::logistic_l2, one_row({1.0}, 2.0)}), std::invalid_argument);
  auto empty = std::make_shared<Dataset>();
  empty->n = 2;
  CHECK_THROWS_AS(make_loss({LossFamily::logistic_l2, empty}), std::invalid_argument);
}

TEST_CASE("synthetic quadratic spectra stay within bounds on every subsample") {
  Sampler s(9);
  auto q = synth_quadratic(40, 6, 2.0, 7.0, s);
  for (int t = 0; t < 30; ++t) {
    const SampleSet S = draw_sample(1 + s.uniform_below(40), 40, s);
    const Vector v = random_vector(6, s), x = random_vector(6, s);
    const double r = v.dot(hess_vec(*q, x, S, v)) / v.squaredNorm();
    CHECK(r >= 2.0 - 1e-12);
    CHECK(r <= 7.0 + 1e-12);
  }
  CHECK(eval_grad(*q, q->minimizer(), SampleSet::full(40)).norm() <= 1e-12);
  Sampler s2(10);
  auto c = synth_quadratic(5, 3, 4.0, 4.0, s2);
  const Vector v = random_vector(3, s2);
  CHECK((hess_vec(*c, Vector::Zero(3), SampleSet({1, 3}, 5), v) - 4.0 * v).norm() <= 1e-12);
}
