#include "acbc/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <tuple>

#include <boost/math/distributions/normal.hpp>
#include <fmt/format.h>

#include "acbc/error.hpp"
#include "acbc/parallel.hpp"
#include "acbc/rng.hpp"

namespace acbc {
namespace {

struct Plan {
  Index n;
  Index m;
};

Plan check_options(const Sample& sample, const BootstrapOptions& options) {
  validate(sample);
  if (options.b_reps < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("bootstrap needs at least 2 replicates, got {}", options.b_reps));
  }
  const Index n = sample.n();
  const Index m = options.m.value_or(default_subsample_size(n));
  if (m < 2) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("subsample size must be >= 2, got {}", m));
  }
  if (m > n) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("subsample size {} exceeds sample size {}", m, n));
  }
  return {n, m};
}

VarianceEstimate summarize(std::vector<double> replicates, const Plan& plan,
                           const BootstrapOptions& options) {
  const auto b = static_cast<double>(replicates.size());
  // Shifted by the first replicate so a constant statistic gives exactly 0.
  const double shift = replicates.front();
  double mean = 0.0;
  for (double r : replicates) mean += r - shift;
  mean /= b;
  double ss = 0.0;
  for (double r : replicates) ss += (r - shift - mean) * (r - shift - mean);

  VarianceEstimate v;
  v.sigma2_hat = static_cast<double>(plan.m) * ss / (b - 1.0);
  v.se = std::sqrt(v.sigma2_hat / static_cast<double>(plan.n));
  v.n = plan.n;
  v.m = plan.m;
  v.b_reps = options.b_reps;
  v.seed = options.seed;
  v.replicates = std::move(replicates);
  return v;
}

PipelineConfig single_threaded(PipelineConfig config) {
  config.threads = 1;
  return config;
}

}  // namespace

Index default_subsample_size(Index n) {
  auto m = static_cast<Index>(std::sqrt(static_cast<double>(n)));
  while (m * m > n) --m;
  while ((m + 1) * (m + 1) <= n) ++m;
  return m;
}

std::vector<Index> draw_subsample(Index n, Index m, std::uint64_t seed, int replicate,
                                  bool with_replacement) {
  Engine engine = make_engine(seed, {static_cast<std::uint64_t>(replicate)});
  std::vector<Index> rows(static_cast<std::size_t>(m));
  if (with_replacement) {
    std::uniform_int_distribution<Index> pick(0, n - 1);
    for (auto& r : rows) r = pick(engine);
    return rows;
  }
  // Partial Fisher-Yates over 0..n-1.
  std::vector<Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index k = 0; k < m; ++k) {
    std::uniform_int_distribution<Index> pick(k, n - 1);
    std::swap(pool[static_cast<std::size_t>(k)], pool[static_cast<std::size_t>(pick(engine))]);
    rows[static_cast<std::size_t>(k)] = pool[static_cast<std::size_t>(k)];
  }
  return rows;
}

VarianceEstimate mn_bootstrap(const Sample& sample, const StatisticFn& statistic,
                              const BootstrapOptions& options) {
  const Plan plan = check_options(sample, options);
  std::vector<double> replicates(static_cast<std::size_t>(options.b_reps));
  parallel_for(replicates.size(), options.threads, [&](std::size_t r) {
    const auto rows = draw_subsample(plan.n, plan.m, options.seed, static_cast<int>(r),
                                     options.with_replacement);
    replicates[r] = statistic(take_rows(sample, rows));
  });
  return summarize(std::move(replicates), plan, options);
}

VarianceEstimate mn_bootstrap(const Sample& sample, const PipelineConfig& config,
                              Statistic which, const BootstrapOptions& options) {
  const PipelineConfig inner = single_threaded(config);
  if (which == Statistic::kTHat) {
    return mn_bootstrap(sample, [](const Sample& s) { return nn_rank_correlation(s); }, options);
  }
  return mn_bootstrap(
      sample, [&](const Sample& s) { return estimate(s, inner).t_bc; }, options);
}

std::pair<VarianceEstimate, VarianceEstimate> mn_bootstrap_both(
    const Sample& sample, const PipelineConfig& config, const BootstrapOptions& options) {
  const Plan plan = check_options(sample, options);
  const PipelineConfig inner = single_threaded(config);
  std::vector<double> t(static_cast<std::size_t>(options.b_reps));
  std::vector<double> tbc(t.size());
  parallel_for(t.size(), options.threads, [&](std::size_t r) {
    const auto rows = draw_subsample(plan.n, plan.m, options.seed, static_cast<int>(r),
                                     options.with_replacement);
    const EstimateResult e = estimate(take_rows(sample, rows), inner);
    t[r] = e.t_hat;
    tbc[r] = e.t_bc;
  });
  return {summarize(std::move(t), plan, options), summarize(std::move(tbc), plan, options)};
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("quantile level {} outside (0,1)", p));
  }
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

Interval confidence_interval(double point, const VarianceEstimate& v, double alpha,
                             IntervalKind kind) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("alpha must lie in (0,1), got {}", alpha));
  }
  if (kind == IntervalKind::kNormal || v.replicates.size() < 2) {
    const double half = normal_quantile(1.0 - alpha / 2.0) * v.se;
    return Interval{point - half, point + half, alpha};
  }
  // sqrt(m) (T*_m - mean T*_m) stands in for sqrt(n) (T_n - T).
  std::vector<double> centred = v.replicates;
  const double mean =
      std::accumulate(centred.begin(), centred.end(), 0.0) / static_cast<double>(centred.size());
  for (double& c : centred) c -= mean;
  std::sort(centred.begin(), centred.end());
  auto quantile = [&](double p) {
    const double pos = p * static_cast<double>(centred.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, centred.size() - 1);
    return centred[lo] + (pos - static_cast<double>(lo)) * (centred[hi] - centred[lo]);
  };
  const double rescale = std::sqrt(static_cast<double>(v.m) / static_cast<double>(v.n));
  return Interval{point - rescale * quantile(1.0 - alpha / 2.0),
                  point - rescale * quantile(alpha / 2.0), alpha};
}

EstimateResult estimate_with_inference(const Sample& sample, const PipelineConfig& config,
                                       const BootstrapOptions& options, double alpha,
                                       IntervalKind kind) {
  EstimateResult result = estimate(sample, config);
  VarianceEstimate vt, vbc;
  if (options.tbc_variance == TbcVariance::kShared) {
    vt = mn_bootstrap(sample, config, Statistic::kTHat, options);
    vbc = vt;
  } else {
    std::tie(vt, vbc) = mn_bootstrap_both(sample, config, options);
  }
  result.ci_t = confidence_interval(result.t_hat, vt, alpha, kind);
  result.ci_tbc = confidence_interval(result.t_bc, vbc, alpha, kind);
  result.variance_t = std::move(vt);
  result.variance_tbc = std::move(vbc);
  return result;
}

}  // namespace acbc
