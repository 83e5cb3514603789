#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace iretr {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = std::int64_t;

/// Sorted, duplicate-free subset of the component indices {0, ..., N-1}.
///
/// Indices are zero-based. A SampleSet is never empty; the infeasibility
/// measure and the subsampled averages are undefined at M = 0.
class SampleSet {
 public:
  SampleSet() = default;

  /// Takes ownership of `indices`, which must be strictly increasing and lie in [0, N).
  SampleSet(std::vector<Index> indices, Index total);

  static SampleSet full(Index total);

  Index size() const { return static_cast<Index>(indices_.size()); }
  Index total() const { return total_; }
  bool is_full() const { return size() == total_ && total_ > 0; }
  bool empty() const { return indices_.empty(); }

  std::span<const Index> indices() const { return indices_; }
  Index operator[](Index pos) const { return indices_[static_cast<std::size_t>(pos)]; }

  bool contains(Index i) const;

  friend bool operator==(const SampleSet&, const SampleSet&) = default;

 private:
  std::vector<Index> indices_;
  Index total_ = 0;
};

/// Finite-sum objective f_N(x) = (1/N) sum_i phi_i(x).
///
/// Each component splits as phi_i(x) = psi_i(x) + (ridge/2) ||x||^2, where the
/// ridge term is shared by every component. Implementations provide psi_i;
/// the shared term is added once per average, so any subsample keeps the full
/// regularizer.
///
/// Implementations must be immutable after construction: all methods are
/// const and may be called concurrently.
class FiniteSumProblem {
 public:
  virtual ~FiniteSumProblem() = default;

  /// Number of components N.
  virtual Index size() const = 0;
  /// Variable dimension n.
  virtual Index dim() const = 0;

  /// Weight of the shared (ridge/2)||x||^2 term.
  virtual double ridge() const { return 0.0; }

  virtual double term_value(Index i, const Vector& x) const = 0;
  /// Returns psi_i(x) and accumulates scale * grad psi_i(x) into `grad`.
  virtual double term_value_grad(Index i, const Vector& x, double scale, Vector& grad) const = 0;
  /// Accumulates scale * hess psi_i(x) * v into `out`.
  virtual void term_hess_vec(Index i, const Vector& x, const Vector& v, double scale,
                             Vector& out) const = 0;

  // Full component oracle phi_i, including the shared term.
  double component_value(Index i, const Vector& x) const;
  Vector component_grad(Index i, const Vector& x) const;
  Vector component_hess_vec(Index i, const Vector& x, const Vector& v) const;
};

void check_sample(const FiniteSumProblem& problem, const SampleSet& sample);

}  // namespace iretr
