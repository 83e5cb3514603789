#pragma once

#include "iretr/problem.hpp"

// Subsampled averages over a SampleSet.
//
// Two implementations with the same contract:
//   iretr::serial   - plain index-ascending loops; the reference used by tests.
//   iretr::parallel - OpenMP over fixed-size index blocks. Block partials are
//                     combined in block order, so results are bitwise
//                     identical for any thread count.
// The unqualified iretr:: entry points forward to the parallel kernels.

namespace iretr {

namespace serial {
double eval_f(const FiniteSumProblem& problem, const Vector& x, const SampleSet& sample);
/// Returns f_S(x) and writes grad f_S(x) into `grad` (resized as needed).
double eval_f_grad(const FiniteSumProblem& problem, const Vector& x, const SampleSet& sample,
                   Vector& grad);
Vector hess_vec(const FiniteSumProblem& problem, const Vector& x, const SampleSet& sample,
                const Vector& v);
}  // namespace serial

namespace parallel {
/// Number of consecutive sample positions reduced by one task.
inline constexpr Index kBlockSize = 256;

double eval_f(const FiniteSumProblem& problem, const Vector& x, const SampleSet& sample);
double eval_f_grad(const FiniteSumProblem& problem, const Vector& x, const SampleSet& sample,
                   Vector& grad);
Vector hess_vec(const FiniteSumProblem& problem, const Vector& x, const SampleSet& sample,
                const Vector& v);
}  // namespace parallel

double eval_f(const FiniteSumProblem& problem, const Vector& x, const SampleSet& sample);
Vector eval_grad(const FiniteSumProblem& problem, const Vector& x, const SampleSet& sample);
double eval_f_grad(const FiniteSumProblem& problem, const Vector& x, const SampleSet& sample,
                   Vector& grad);
Vector hess_vec(const FiniteSumProblem& problem, const Vector& x, const SampleSet& sample,
                const Vector& v);

}  // namespace iretr
