#include "iretr/problem.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace iretr {

SampleSet::SampleSet(std::vector<Index> indices, Index total)
    : indices_(std::move(indices)), total_(total) {
  if (indices_.empty()) throw std::invalid_argument("SampleSet: empty sample");
  if (static_cast<Index>(indices_.size()) > total_)
    throw std::invalid_argument("SampleSet: more indices than components");
  if (indices_.front() < 0 || indices_.back() >= total_)
    throw std::invalid_argument("SampleSet: index out of range");
  for (std::size_t k = 1; k < indices_.size(); ++k) {
    if (indices_[k] <= indices_[k - 1])
      throw std::invalid_argument("SampleSet: indices must be strictly increasing");
  }
}

SampleSet SampleSet::full(Index total) {
  if (total < 1) throw std::invalid_argument("SampleSet::full: N must be positive");
  std::vector<Index> idx(static_cast<std::size_t>(total));
  std::iota(idx.begin(), idx.end(), Index{0});
  return SampleSet(std::move(idx), total);
}

bool SampleSet::contains(Index i) const {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

double FiniteSumProblem::component_value(Index i, const Vector& x) const {
  return term_value(i, x) + 0.5 * ridge() * x.squaredNorm();
}

Vector FiniteSumProblem::component_grad(Index i, const Vector& x) const {
  Vector g = ridge() * x;
  term_value_grad(i, x, 1.0, g);
  return g;
}

Vector FiniteSumProblem::component_hess_vec(Index i, const Vector& x, const Vector& v) const {
  Vector out = ridge() * v;
  term_hess_vec(i, x, v, 1.0, out);
  return out;
}

void check_sample(const FiniteSumProblem& problem, const SampleSet& sample) {
  if (sample.empty()) throw std::invalid_argument("empty sample set");
  if (sample.total() != problem.size())
    throw std::invalid_argument("sample set drawn for N=" + std::to_string(sample.total()) +
                                " used on a problem with N=" + std::to_string(problem.size()));
}

}  // namespace iretr
