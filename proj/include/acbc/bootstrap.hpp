#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>

#include "acbc/bias_correction.hpp"
#include "acbc/dataset.hpp"
#include "acbc/variance.hpp"

namespace acbc {

enum class Statistic { kTHat, kTBc };

enum class IntervalKind {
  kNormal,      // point -/+ z_{1-alpha/2} * se
  kPercentile,  // centred subsample quantiles rescaled by sqrt(m / n)
};

// How estimate_with_inference obtains the variance of T_bc. Both statistics
// share the limiting variance sigma^2 of T_n, so kShared reuses the T_n
// bootstrap; kRecompute refits the whole correction on every subsample.
enum class TbcVariance { kShared, kRecompute };

struct BootstrapOptions {
  int b_reps = 200;
  std::optional<Index> m;  // default floor(sqrt(n))
  std::uint64_t seed = 0;
  bool with_replacement = true;
  TbcVariance tbc_variance = TbcVariance::kShared;
  unsigned threads = 1;
};

// floor(sqrt(n)), computed exactly.
Index default_subsample_size(Index n);

// Row indices of subsample `replicate`; a pure function of (n, m, seed,
// replicate, with_replacement).
std::vector<Index> draw_subsample(Index n, Index m, std::uint64_t seed, int replicate,
                                  bool with_replacement);

using StatisticFn = std::function<double(const Sample&)>;

// m-out-of-n bootstrap: evaluates `statistic` on b_reps subsamples of size m
// and returns sigma2_hat = m * (sample variance of the replicates).
VarianceEstimate mn_bootstrap(const Sample& sample, const StatisticFn& statistic,
                              const BootstrapOptions& options);

// Full pipeline recomputed on each subsample, so the ridge penalty becomes
// m^(-c).
VarianceEstimate mn_bootstrap(const Sample& sample, const PipelineConfig& config,
                              Statistic which, const BootstrapOptions& options);

// Both statistics from the same subsamples; .first is T_n, .second is T_bc.
std::pair<VarianceEstimate, VarianceEstimate> mn_bootstrap_both(
    const Sample& sample, const PipelineConfig& config, const BootstrapOptions& options);

// Standard normal quantile.
double normal_quantile(double p);

Interval confidence_interval(double point, const VarianceEstimate& v, double alpha,
                             IntervalKind kind = IntervalKind::kNormal);

// estimate() followed by the bootstrap for both statistics and their intervals.
EstimateResult estimate_with_inference(const Sample& sample, const PipelineConfig& config,
                                       const BootstrapOptions& options, double alpha,
                                       IntervalKind kind = IntervalKind::kNormal);

}  // namespace acbc
