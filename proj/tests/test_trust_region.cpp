#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "iretr/sampling.hpp"
#include "iretr/trust_region.hpp"

using namespace iretr;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Index>(v.size()));
  Index k = 0;
  for (double x : v) out[k++] = x;
  return out;
}

Matrix random_symmetric(Index n, Sampler& s, bool mixed) {
  Matrix g(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) g(i, j) = s.normal();
  Matrix q = Eigen::HouseholderQR<Matrix>(g).householderQ();
  Vector lam(n);
  for (Index j = 0; j < n; ++j) lam[j] = mixed ? 4.0 * s.normal() : 0.1 + 5.0 * s.uniform01();
  Matrix B = q * lam.asDiagonal() * q.transpose();
  return 0.5 * (B + B.transpose());
}

}  // namespace

TEST_CASE("Cauchy point examples") {
  QuadraticModel m1{0.0, vec({1, 0}), matrix_operator(Matrix::Identity(2, 2))};
  CHECK((cauchy_point(m1, 10.0) - vec({-1, 0})).norm() <= 1e-15);
  QuadraticModel m2{0.0, vec({2, 0}), zero_operator()};
  CHECK((cauchy_point(m2, 1.0) - vec({-1, 0})).norm() <= 1e-15);
  QuadraticModel m3{0.0, vec({0, 0}), matrix_operator(Matrix::Identity(2, 2))};
  CHECK(cauchy_point(m3, 1.0).norm() == 0.0);
  // Same decrease from the closed form.
  CHECK(cauchy_decrease(1.0, 1.0, 10.0) == doctest::Approx(m1.decrease(cauchy_point(m1, 10.0))));
  CHECK(cauchy_decrease(2.0, 0.0, 1.0) == doctest::Approx(2.0));
  CHECK(cauchy_decrease(0.0, 0.0, 1.0) == 0.0);
}

TEST_CASE("Steihaug examples") {
  SUBCASE("Newton point inside the region") {
    QuadraticModel m{0.0, vec({3, 4}), matrix_operator(Matrix::Identity(2, 2))};
    const TRSolution sol = steihaug_cg(m, 100.0);
    CHECK((sol.p - vec({-3, -4})).norm() <= 1e-14);
    CHECK(sol.cg_iterations == 1);
    CHECK_FALSE(sol.on_boundary);
    CHECK(sol.model_decrease == doctest::Approx(12.5));
  }
  SUBCASE("first step reaches the boundary") {
    Matrix B = Matrix::Zero(2, 2);
    B(0, 0) = 1.0;
    B(1, 1) = -1.0;
    QuadraticModel m{0.0, vec({1, 0}), matrix_operator(B)};
    const TRSolution sol = steihaug_cg(m, 1.0);
    CHECK((sol.p - vec({-1, 0})).norm() <= 1e-14);
    CHECK(sol.on_boundary);
  }
  SUBCASE("zero curvature exits to the boundary") {
    QuadraticModel m{0.0, vec({1, 0}), zero_operator()};
    const TRSolution sol = steihaug_cg(m, 2.0);
    CHECK((sol.p - vec({-2, 0})).norm() <= 1e-14);
    CHECK(sol.on_boundary);
    CHECK(sol.negative_curvature_hit);
    CHECK(sol.model_decrease == doctest::Approx(2.0));
  }
  SUBCASE("stationary model") {
    QuadraticModel m{1.0, vec({0, 0}), matrix_operator(Matrix::Identity(2, 2))};
    const TRSolution sol = steihaug_cg(m, 1.0);
    CHECK(sol.p.norm() == 0.0);
    CHECK(sol.model_decrease == 0.0);
    CHECK(sol.cg_iterations == 0);
  }
}

TEST_CASE("sufficient decrease test") {
  QuadraticModel m{0.0, vec({1, 0}), matrix_operator(Matrix::Identity(2, 2))};
  const Vector pc = cauchy_point(m, 10.0);
  CHECK(sufficient_decrease(m, pc, pc, 1.0));
  CHECK(sufficient_decrease(m, pc, pc, 0.1));
  CHECK_FALSE(sufficient_decrease(m, Vector::Zero(2), pc, 0.1));
}

TEST_CASE("boundary root is accurate for tiny steps") {
  const Vector p = vec({0.3, -0.4});
  const Vector d = vec({1e-9, 2e-9});
  const double t = boundary_step(p, d, 0.5 + 1e-12);
  CHECK(std::abs((p + t * d).norm() - (0.5 + 1e-12)) <= 1e-15);
  CHECK(t > 0.0);
}

TEST_CASE("SPD models with a huge radius converge to the Newton step") {
  Sampler s(17);
  for (int t = 0; t < 50; ++t) {
    const Index n = 2 + s.uniform_below(49);
    const Matrix B = random_symmetric(n, s, false);
    Vector g(n);
    for (Index j = 0; j < n; ++j) g[j] = s.normal();
    QuadraticModel m{0.0, g, matrix_operator(B)};
    const TRSolution sol = steihaug_cg(m, 1e12, 1e-3, 100);
    CHECK_FALSE(sol.on_boundary);
    CHECK((B * sol.p + g).norm() <= 1e-3 * g.norm());
  }
}

TEST_CASE("random indefinite models keep the step inside and beat the Cauchy point") {
  Sampler s(23);
  for (int t = 0; t < 200; ++t) {
    const Index n = 1 + s.uniform_below(30);
    const Matrix B = random_symmetric(n, s, true);
    Vector g(n);
    for (Index j = 0; j < n; ++j) g[j] = s.normal();
    const double radius = std::exp(3.0 * s.normal());
    QuadraticModel m{0.0, g, matrix_operator(B)};
    const TRSolution sol = steihaug_cg(m, radius);
    const double normB = Eigen::SelfAdjointEigenSolver<Matrix>(B).eigenvalues().cwiseAbs().maxCoeff();
    const double dc = m.decrease(cauchy_point(m, radius));
    const double gn = g.norm();
    REQUIRE(sol.p.norm() <= radius * (1 + 1e-12));
    REQUIRE(sol.model_decrease >= dc - 1e-12 * std::abs(dc));
    REQUIRE(dc >= 0.5 * gn * std::min(gn / (1.0 + normB), radius) * (1 - 1e-12));
    REQUIRE(sol.model_decrease == doctest::Approx(m.decrease(sol.p)).epsilon(1e-9));
    REQUIRE(sol.cauchy_decrease == doctest::Approx(dc).epsilon(1e-9));
  }
}
