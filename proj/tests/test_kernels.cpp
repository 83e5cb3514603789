#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <omp.h>

#include "iretr/kernels.hpp"
#include "test_support.hpp"

using namespace iretr;
using namespace iretr::testing;

TEST_CASE("mean of constant components") {
  ConstantProblem p({1.0, 2.0, 3.0}, 2);
  const Vector x = Vector::Zero(2);
  CHECK(eval_f(p, x, SampleSet::full(3)) == doctest::Approx(2.0));
  CHECK(eval_f(p, x, SampleSet({0, 2}, 3)) == doctest::Approx(2.0));
  CHECK(eval_f(p, x, SampleSet({2}, 3)) == doctest::Approx(3.0));
  CHECK(serial::eval_f(p, x, SampleSet({1}, 3)) == doctest::Approx(2.0));
}

TEST_CASE("identity quadratics: gradient is x - centre, hess_vec is identity") {
  const Index n = 4;
  IdenticalQuadratics p(7, Vector::Zero(n));
  Sampler s(3);
  const Vector x = random_vector(n, s), v = random_vector(n, s);
  const SampleSet S({1, 4, 5}, 7);
  CHECK((eval_grad(p, x, S) - x).norm() <= 1e-15);
  CHECK((hess_vec(p, x, S, v) - v).norm() <= 1e-15);
  CHECK(hess_vec(p, x, S, Vector::Zero(n)).norm() == 0.0);
}

TEST_CASE("sample sets are validated") {
  CHECK_THROWS_AS(SampleSet({}, 3), std::invalid_argument);
  CHECK_THROWS_AS(SampleSet({2, 1}, 3), std::invalid_argument);
  CHECK_THROWS_AS(SampleSet({1, 1}, 3), std::invalid_argument);
  CHECK_THROWS_AS(SampleSet({3}, 3), std::invalid_argument);
  ConstantProblem p({1.0, 2.0}, 1);
  CHECK_THROWS_AS(eval_f(p, Vector::Zero(1), SampleSet::full(3)), std::invalid_argument);
  CHECK_THROWS_AS(eval_f(p, Vector::Zero(1), SampleSet{}), std::invalid_argument);
}

TEST_CASE("parallel kernels agree with the serial reference") {
  Sampler s(11);
  for (LossFamily fam : {LossFamily::logistic_l2, LossFamily::sigmoid_ls}) {
    auto p = random_loss(3000, 15, fam, s);
    const Vector x = random_vector(15, s, 0.3), v = random_vector(15, s);
    for (const SampleSet& S : {SampleSet::full(3000), draw_sample(777, 3000, s)}) {
      Vector gs, gp;
      const double fs = serial::eval_f_grad(*p, x, S, gs);
      const double fp = parallel::eval_f_grad(*p, x, S, gp);
      CHECK(fp == doctest::Approx(fs).epsilon(1e-13));
      CHECK((gp - gs).norm() <= 1e-13 * (1.0 + gs.norm()));
      CHECK(parallel::eval_f(*p, x, S) == doctest::Approx(serial::eval_f(*p, x, S)).epsilon(1e-13));
      const Vector hs = serial::hess_vec(*p, x, S, v), hp = parallel::hess_vec(*p, x, S, v);
      CHECK((hp - hs).norm() <= 1e-13 * (1.0 + hs.norm()));
    }
  }
}

TEST_CASE("parallel kernels are bitwise identical for any thread count") {
  Sampler s(5);
  auto p = random_loss(5000, 12, LossFamily::logistic_l2, s);
  const Vector x = random_vector(12, s, 0.5), v = random_vector(12, s);
  const SampleSet S = draw_sample(4321, 5000, s);
  omp_set_num_threads(1);
  Vector g1;
  const double f1 = parallel::eval_f_grad(*p, x, S, g1);
  const Vector h1 = parallel::hess_vec(*p, x, S, v);
  for (int threads : {2, 3, 4, 7}) {
    omp_set_num_threads(threads);
    Vector g;
    CHECK(parallel::eval_f_grad(*p, x, S, g) == f1);
    CHECK(g == g1);
    CHECK(parallel::hess_vec(*p, x, S, v) == h1);
  }
}

TEST_CASE("kernels inside a parallel region fall back to one thread and match") {
  Sampler s(8);
  auto p = random_loss(2000, 6, LossFamily::sigmoid_ls, s);
  const Vector x = random_vector(6, s);
  const SampleSet S = SampleSet::full(2000);
  const double ref = parallel::eval_f(*p, x, S);
  std::vector<double> got(4);
#pragma omp parallel for num_threads(4)
  for (int t = 0; t < 4; ++t) got[static_cast<std::size_t>(t)] = parallel::eval_f(*p, x, S);
  for (double g : got) CHECK(g == ref);
}
