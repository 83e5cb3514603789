#include "iretr/kernels.hpp"

#include <omp.h>

namespace iretr {

namespace parallel {

namespace {

Index block_count(const SampleSet& sample) {
  return (sample.size() + kBlockSize - 1) / kBlockSize;
}

// Runs `body(begin, end, block)` for every block; nested calls (e.g. from a
// parallel repetition loop) fall back to a single thread.
template <class Body>
void for_each_block(const SampleSet& sample, Body&& body) {
  const Index blocks = block_count(sample);
  const Index m = sample.size();
#pragma omp parallel for schedule(static) if (blocks > 1 && !omp_in_parallel())
  for (Index b = 0; b < blocks; ++b) {
    const Index begin = b * kBlockSize;
    const Index end = std::min(m, begin + kBlockSize);
    body(begin, end, b);
  }
}

}  // namespace

double eval_f(const FiniteSumProblem& problem, const Vector& x, const SampleSet& sample) {
  check_sample(problem, sample);
  std::vector<double> partial(static_cast<std::size_t>(block_count(sample)), 0.0);
  for_each_block(sample, [&](Index begin, Index end, Index b) {
    double s = 0.0;
    for (Index k = begin; k < end; ++k) s += problem.term_value(sample[k], x);
    partial[static_cast<std::size_t>(b)] = s;
  });
  double sum = 0.0;
  for (double s : partial) sum += s;
  return sum / static_cast<double>(sample.size()) + 0.5 * problem.ridge() * x.squaredNorm();
}

double eval_f_grad(const FiniteSumProblem& problem, const Vector& x, const SampleSet& sample,
                   Vector& grad) {
  check_sample(problem, sample);
  const double scale = 1.0 / static_cast<double>(sample.size());
  const Index blocks = block_count(sample);
  Matrix grad_partial = Matrix::Zero(problem.dim(), blocks);
  std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
  for_each_block(sample, [&](Index begin, Index end, Index b) {
    Vector g = Vector::Zero(problem.dim());
    double s = 0.0;
    for (Index k = begin; k < end; ++k) s += problem.term_value_grad(sample[k], x, scale, g);
    grad_partial.col(b) = g;
    partial[static_cast<std::size_t>(b)] = s;
  });
  grad = Vector::Zero(problem.dim());
  double sum = 0.0;
  for (Index b = 0; b < blocks; ++b) {
    grad += grad_partial.col(b);
    sum += partial[static_cast<std::size_t>(b)];
  }
  grad += problem.ridge() * x;
  return sum * scale + 0.5 * problem.ridge() * x.squaredNorm();
}

Vector hess_vec(const FiniteSumProblem& problem, const Vector& x, const SampleSet& sample,
                const Vector& v) {
  check_sample(problem, sample);
  const double scale = 1.0 / static_cast<double>(sample.size());
  const Index blocks = block_count(sample);
  Matrix partial = Matrix::Zero(problem.dim(), blocks);
  for_each_block(sample, [&](Index begin, Index end, Index b) {
    Vector out = Vector::Zero(problem.dim());
    for (Index k = begin; k < end; ++k) problem.term_hess_vec(sample[k], x, v, scale, out);
    partial.col(b) = out;
  });
  Vector out = Vector::Zero(problem.dim());
  for (Index b = 0; b < blocks; ++b) out += partial.col(b);
  out += problem.ridge() * v;
  return out;
}

}  // namespace parallel

double eval_f(const FiniteSumProblem& problem, const Vector& x, const SampleSet& sample) {
  return parallel::eval_f(problem, x, sample);
}

Vector eval_grad(const FiniteSumProblem& problem, const Vector& x, const SampleSet& sample) {
  Vector g;
  parallel::eval_f_grad(problem, x, sample, g);
  return g;
}

double eval_f_grad(const FiniteSumProblem& problem, const Vector& x, const SampleSet& sample,
                   Vector& grad) {
  return parallel::eval_f_grad(problem, x, sample, grad);
}

Vector hess_vec(const FiniteSumProblem& problem, const Vector& x, const SampleSet& sample,
                const Vector& v) {
  return parallel::hess_vec(problem, x, sample, v);
}

}  // namespace iretr
