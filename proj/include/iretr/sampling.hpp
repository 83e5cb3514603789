#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "iretr/problem.hpp"

namespace iretr {

/// Seeded generator owned by a single solver run.
///
/// Bounded integers are drawn by rejection from the raw 64-bit stream, so
/// index streams depend only on the seed and the mt19937_64 definition.
class Sampler {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64";

  explicit Sampler(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// Uniform integer in [0, bound).
  Index uniform_below(Index bound);
  double uniform01();
  double normal();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Smallest integer >= value, ignoring floating-point excess of a few ulps
/// (so that ceil(0.1 * 30) is 3, not 4).
Index ceil_count(double value);

/// h(M) = (N - M) / N.
double h_eval(Index M, Index N);

/// Lower / upper bounds of h over 0 < M < N and 0 < M <= N.
inline double h_lower(Index N) { return 1.0 / static_cast<double>(N); }
inline double h_upper(Index N) { return static_cast<double>(N - 1) / static_cast<double>(N); }

enum class SchedulePolicy { dynamic, geometric };
enum class HessianPolicy { fixed_fraction, adaptive };

std::string to_string(SchedulePolicy policy);
SchedulePolicy parse_schedule_policy(const std::string& name);

struct ScheduleConfig {
  SchedulePolicy policy = SchedulePolicy::dynamic;
  double growth = 1.2;
  double n0_fraction = 0.1;
  double gamma = 1.0;
  // Dynamic relaxation removes up to relax_scale * Delta^(1+gamma) samples,
  // which is the mu = relax_scale / N bound on the h increase.
  double relax_scale = 100.0;
  double upper_guard = 0.95;
  bool refined_full_rule = false;

  HessianPolicy hessian_policy = HessianPolicy::fixed_fraction;
  double hessian_fraction = 0.1;
  // Adaptive Hessian sizing targets e(D) <= min{c, C ||g||}.
  double adaptive_c = 1.0;
  double adaptive_C = 1.0;
  double adaptive_p = 0.1;
  double lambda_max = 1.0;

  /// mu in h(N_{k+1}) - h(N~_{k+1}) <= mu Delta^(1+gamma).
  double mu(Index N) const;
  Index initial_size(Index N) const;
  void validate() const;
};

/// Restoration: N~ = min{N, ceil(growth N_k)}.
Index restore_step(Index n_current, Index N, double growth);

struct RelaxState {
  Index n_current = 0;
  /// ||grad f_N(x_k)||, required when n_current == N and the refined rule is on.
  std::optional<double> full_grad_norm;
};

/// Relaxation: chooses N_{k+1} from the restored size and the current radius.
Index relax_step(Index n_restored, double radius, const ScheduleConfig& cfg, Index n0, Index N,
                 const RelaxState& state);

/// M distinct indices drawn uniformly without replacement.
SampleSet draw_sample(Index M, Index N, Sampler& sampler);

/// Uniform subset of `sample` with max{1, ceil(fraction |S|)} elements.
SampleSet hessian_sample(const SampleSet& sample, double fraction, Sampler& sampler);
SampleSet hessian_sample_of_size(const SampleSet& sample, Index size, Sampler& sampler);

/// Sample size making the subsampled gradient chi-accurate with probability 1 - p_g.
Index gradient_sample_bound(double chi, double p_g, double variance, double zeta, Index n,
                            Index N);

/// Sample size making the subsampled Hessian xi-accurate with probability 1 - p_H.
Index hessian_sample_bound(double xi, double p_H, double lambda_max, Index n, Index N);

/// Hessian sample size for e(D) <= min{c, C ||g||}, using cfg.adaptive_p and cfg.lambda_max.
Index adaptive_hessian_size(double grad_norm, double c, double C, const ScheduleConfig& cfg,
                            Index n, Index n_next);

}  // namespace iretr
