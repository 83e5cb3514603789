#include "iretr/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace iretr {

Index Sampler::uniform_below(Index bound) {
  if (bound <= 0) throw std::invalid_argument("Sampler::uniform_below: bound must be positive");
  const auto n = static_cast<std::uint64_t>(bound);
  // Reject the low (2^64 mod n) values so the remainder is unbiased.
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = engine_();
    if (r >= threshold) return static_cast<Index>(r % n);
  }
}

double Sampler::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Sampler::normal() { return normal_(engine_); }

Index ceil_count(double value) {
  const double nearest = std::round(value);
  if (std::abs(value - nearest) <= 1e-9 * std::max(1.0, std::abs(value)))
    return static_cast<Index>(nearest);
  return static_cast<Index>(std::ceil(value));
}

double h_eval(Index M, Index N) {
  if (N < 1 || M < 1 || M > N)
    throw std::invalid_argument("h_eval: need 1 <= M <= N (M=" + std::to_string(M) +
                                ", N=" + std::to_string(N) + ")");
  return static_cast<double>(N - M) / static_cast<double>(N);
}

std::string to_string(SchedulePolicy policy) {
  return policy == SchedulePolicy::dynamic ? "dynamic" : "geometric";
}

SchedulePolicy parse_schedule_policy(const std::string& name) {
  if (name == "dynamic") return SchedulePolicy::dynamic;
  if (name == "geometric") return SchedulePolicy::geometric;
  throw std::invalid_argument("unknown schedule policy '" + name + "'");
}

double ScheduleConfig::mu(Index N) const {
  return policy == SchedulePolicy::dynamic ? relax_scale / static_cast<double>(N) : 0.0;
}

Index ScheduleConfig::initial_size(Index N) const {
  return std::clamp<Index>(ceil_count(n0_fraction * static_cast<double>(N)), 1, N);
}

void ScheduleConfig::validate() const {
  if (!(n0_fraction > 0.0 && n0_fraction <= 1.0))
    throw std::invalid_argument("schedule: n0_fraction must lie in (0, 1]");
  if (!(growth > 1.0)) throw std::invalid_argument("schedule: growth must exceed 1");
  if (!(relax_scale >= 0.0)) throw std::invalid_argument("schedule: relax_scale must be >= 0");
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw std::invalid_argument("schedule: gamma must lie in (0, 1]");
  if (!(upper_guard > 0.0 && upper_guard <= 1.0))
    throw std::invalid_argument("schedule: upper_guard must lie in (0, 1]");
  if (!(hessian_fraction > 0.0 && hessian_fraction <= 1.0))
    throw std::invalid_argument("schedule: hessian_fraction must lie in (0, 1]");
  if (hessian_policy == HessianPolicy::adaptive) {
    if (!(adaptive_c > 0.0) || !(adaptive_C > 0.0))
      throw std::invalid_argument("schedule: adaptive c and C must be positive");
    if (!(adaptive_p > 0.0 && adaptive_p < 1.0))
      throw std::invalid_argument("schedule: adaptive_p must lie in (0, 1)");
    if (!(lambda_max > 0.0)) throw std::invalid_argument("schedule: lambda_max must be positive");
  }
}

Index restore_step(Index n_current, Index N, double growth) {
  if (N < 1 || n_current < 1 || n_current > N)
    throw std::invalid_argument("restore_step: need 1 <= N_k <= N");
  if (n_current == N) return N;
  const Index grown = ceil_count(growth * static_cast<double>(n_current));
  return std::min(N, std::max(grown, n_current + 1));
}

Index relax_step(Index n_restored, double radius, const ScheduleConfig& cfg, Index n0, Index N,
                 const RelaxState& state) {
  if (!(radius > 0.0)) throw std::invalid_argument("relax_step: radius must be positive");
  if (n_restored < 1 || n_restored > N) throw std::invalid_argument("relax_step: bad N~");

  Index next = n_restored;
  if (cfg.policy == SchedulePolicy::dynamic) {
    const double candidate =
        static_cast<double>(n_restored) - cfg.relax_scale * std::pow(radius, 1.0 + cfg.gamma);
    if (candidate >= static_cast<double>(n0) - 1.0) {
      const auto c = static_cast<Index>(std::ceil(candidate));
      if (c < n0)
        next = n_restored;
      else if (static_cast<double>(c) > cfg.upper_guard * static_cast<double>(N))
        next = N;
      else
        next = c;
    }
  }

  if (cfg.refined_full_rule && state.n_current == N) {
    if (!state.full_grad_norm)
      throw std::invalid_argument("relax_step: refined rule needs ||grad f_N(x_k)|| when N_k = N");
    const double g = *state.full_grad_norm;
    // h(M) <= g  <=>  N - M <= g N.
    const double slack = std::floor(g * static_cast<double>(N));
    const Index least = slack >= static_cast<double>(N) ? 1 : N - static_cast<Index>(slack);
    next = std::max(next, least);
  }
  return std::clamp<Index>(next, 1, N);
}

namespace {

// Floyd's algorithm: a uniformly random M-subset of [0, N), returned sorted.
std::vector<Index> floyd_subset(Index M, Index N, Sampler& sampler) {
  std::vector<bool> taken(static_cast<std::size_t>(N), false);
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(M));
  for (Index j = N - M; j < N; ++j) {
    const Index t = sampler.uniform_below(j + 1);
    const Index pick = taken[static_cast<std::size_t>(t)] ? j : t;
    taken[static_cast<std::size_t>(pick)] = true;
    out.push_back(pick);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

SampleSet draw_sample(Index M, Index N, Sampler& sampler) {
  if (N < 1 || M < 1 || M > N)
    throw std::invalid_argument("draw_sample: need 1 <= M <= N (M=" + std::to_string(M) +
                                ", N=" + std::to_string(N) + ")");
  if (M == N) return SampleSet::full(N);
  return SampleSet(floyd_subset(M, N, sampler), N);
}

SampleSet hessian_sample_of_size(const SampleSet& sample, Index size, Sampler& sampler) {
  size = std::clamp<Index>(size, 1, sample.size());
  if (size == sample.size()) return sample;
  std::vector<Index> pos = floyd_subset(size, sample.size(), sampler);
  for (Index& p : pos) p = sample[p];
  return SampleSet(std::move(pos), sample.total());
}

SampleSet hessian_sample(const SampleSet& sample, double fraction, Sampler& sampler) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw std::invalid_argument("hessian_sample: fraction must lie in (0, 1]");
  return hessian_sample_of_size(
      sample, ceil_count(fraction * static_cast<double>(sample.size())), sampler);
}

namespace {

Index cap_count(double value, Index N) {
  if (!(value < static_cast<double>(N))) return N;
  return std::clamp<Index>(ceil_count(value), 1, N);
}

}  // namespace

Index gradient_sample_bound(double chi, double p_g, double variance, double zeta, Index n,
                            Index N) {
  if (!(chi > 0.0 && chi < 1.0)) throw std::invalid_argument("gradient bound: chi in (0,1)");
  if (!(p_g > 0.0 && p_g < 1.0)) throw std::invalid_argument("gradient bound: p_g in (0,1)");
  if (!(variance >= 0.0) || !(zeta >= 0.0))
    throw std::invalid_argument("gradient bound: V_g and zeta must be >= 0");
  if (n < 1 || N < 1) throw std::invalid_argument("gradient bound: n and N must be positive");
  const double value = (2.0 / chi) * (variance / chi + 2.0 * zeta / 3.0) *
                       std::log(static_cast<double>(n + 1) / p_g);
  return cap_count(value, N);
}

Index hessian_sample_bound(double xi, double p_H, double lambda_max, Index n, Index N) {
  if (!(xi > 0.0)) throw std::invalid_argument("hessian bound: xi must be positive");
  if (!(p_H > 0.0 && p_H < 1.0)) throw std::invalid_argument("hessian bound: p_H in (0,1)");
  if (!(lambda_max > 0.0)) throw std::invalid_argument("hessian bound: lambda_n must be positive");
  if (n < 1 || N < 1) throw std::invalid_argument("hessian bound: n and N must be positive");
  const double value = (2.0 / xi) * (lambda_max * lambda_max / xi + lambda_max / 3.0) *
                       std::log(2.0 * static_cast<double>(n) / p_H);
  return cap_count(value, N);
}

Index adaptive_hessian_size(double grad_norm, double c, double C, const ScheduleConfig& cfg,
                            Index n, Index n_next) {
  if (!(grad_norm >= 0.0)) throw std::invalid_argument("adaptive Hessian: grad_norm >= 0");
  if (!(c > 0.0) || !(C > 0.0)) throw std::invalid_argument("adaptive Hessian: c, C > 0");
  if (grad_norm == 0.0) return n_next;
  const double xi = std::min(c, C * grad_norm);
  return hessian_sample_bound(xi, cfg.adaptive_p, cfg.lambda_max, n, n_next);
}

}  // namespace iretr
