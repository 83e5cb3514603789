#include "iretr/nfe_ledger.hpp"

#include <stdexcept>

namespace iretr {

std::string to_string(ChargeKind kind) {
  switch (kind) {
    case ChargeKind::f_eval:
      return "f_eval";
    case ChargeKind::grad_eval:
      return "grad_eval";
    case ChargeKind::cg_iter:
      return "cg_iter";
  }
  return "unknown";
}

NfeLedger::NfeLedger(Index N) : N_(N) {
  if (N < 1) throw std::invalid_argument("NfeLedger: N must be positive");
}

void NfeLedger::append(ChargeKind kind, Index sample_size) {
  if (sample_size < 1 || sample_size > N_)
    throw std::invalid_argument("NfeLedger: sample size outside [1, N]");
  const double cost = static_cast<double>(sample_size) / static_cast<double>(N_);
  entries_.push_back({kind, sample_size, cost});
  total_ += cost;
}

void NfeLedger::charge_function(Index sample_size, EvalKey key) {
  append(ChargeKind::f_eval, sample_size);
  last_function_ = key;
}

void NfeLedger::charge_gradient(Index sample_size, EvalKey key) {
  if (last_function_ && *last_function_ == key) return;
  append(ChargeKind::grad_eval, sample_size);
}

void NfeLedger::charge_cg(Index hessian_size, int iterations) {
  for (int i = 0; i < iterations; ++i) append(ChargeKind::cg_iter, hessian_size);
}

double NfeLedger::audit() const {
  double sum = 0.0;
  for (const Charge& c : entries_) sum += c.cost;
  return sum;
}

}  // namespace iretr
