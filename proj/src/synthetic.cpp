#include <Eigen/QR>

#include "iretr/dataset.hpp"
#include "iretr/quadratic_problem.hpp"
#include "iretr/sampling.hpp"

namespace iretr {

namespace {

Vector random_normal(Index n, Sampler& sampler) {
  Vector v(n);
  for (Index j = 0; j < n; ++j) v[j] = sampler.normal();
  return v;
}

}  // namespace

Dataset synth_logistic(Index N, Index n, double separation, Sampler& sampler) {
  if (N < 1 || n < 1) throw std::invalid_argument("synth_logistic: N and n must be positive");
  Dataset data;
  data.name = "synth_logistic";
  data.n = n;
  Vector u = random_normal(n, sampler);
  u /= u.norm();
  std::vector<std::pair<Index, double>> entries;
  for (Index i = 0; i < N; ++i) {
    const double b = sampler.uniform01() < 0.5 ? -1.0 : 1.0;
    const Vector a = b * separation * u + random_normal(n, sampler);
    entries.clear();
    for (Index j = 0; j < n; ++j)
      if (a[j] != 0.0) entries.emplace_back(j, a[j]);
    data.rows.push_row(entries);
    data.labels.push_back(b);
  }
  return data;
}

std::shared_ptr<const QuadraticSumProblem> synth_quadratic(Index N, Index n, double lambda_min,
                                                           double lambda_max, Sampler& sampler,
                                                           double solution_scale) {
  if (N < 1 || n < 1) throw std::invalid_argument("synth_quadratic: N and n must be positive");
  if (!(lambda_min > 0.0 && lambda_min <= lambda_max))
    throw std::invalid_argument("synth_quadratic: need 0 < lambda_min <= lambda_max");
  std::vector<Matrix> hessians;
  hessians.reserve(static_cast<std::size_t>(N));
  for (Index i = 0; i < N; ++i) {
    Matrix g(n, n);
    for (Index c = 0; c < n; ++c) g.col(c) = random_normal(n, sampler);
    const Matrix q = Eigen::HouseholderQR<Matrix>(g).householderQ();
    Vector spectrum(n);
    for (Index j = 0; j < n; ++j)
      spectrum[j] = lambda_min + (lambda_max - lambda_min) * sampler.uniform01();
    Matrix a = q * spectrum.asDiagonal() * q.transpose();
    hessians.push_back(0.5 * (a + a.transpose()));
  }
  Vector x_star = solution_scale * random_normal(n, sampler);
  return std::make_shared<const QuadraticSumProblem>(std::move(hessians), std::move(x_star));
}

}  // namespace iretr
