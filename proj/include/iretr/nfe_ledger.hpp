#pragma once

#include <optional>
#include <string>
#include <vector>

#include "iretr/problem.hpp"

namespace iretr {

/// Identifies an evaluation point and the sample it was evaluated on.
struct EvalKey {
  std::uint64_t point = 0;
  std::uint64_t sample = 0;
  friend bool operator==(const EvalKey&, const EvalKey&) = default;
};

enum class ChargeKind { f_eval, grad_eval, cg_iter };
std::string to_string(ChargeKind kind);

struct Charge {
  ChargeKind kind;
  Index sample_size;
  double cost;
};

/// Cost accounting in units of one full function evaluation (nfe).
///
/// f_M costs M/N; one CG iteration with a D-sample Hessian costs D/N. A
/// gradient taken at the (point, sample) of the last function charge is free,
/// because the inner products a_i^T x are shared.
class NfeLedger {
 public:
  explicit NfeLedger(Index N);

  void charge_function(Index sample_size, EvalKey key);
  void charge_gradient(Index sample_size, EvalKey key);
  void charge_cg(Index hessian_size, int iterations = 1);

  double total() const { return total_; }
  Index N() const { return N_; }
  const std::vector<Charge>& entries() const { return entries_; }

  /// Sum of entry costs recomputed from scratch.
  double audit() const;

 private:
  void append(ChargeKind kind, Index sample_size);

  Index N_;
  double total_ = 0.0;
  std::vector<Charge> entries_;
  std::optional<EvalKey> last_function_;
};

}  // namespace iretr
