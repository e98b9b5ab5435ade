#pragma once

#include <optional>

#include "acbc/dataset.hpp"
#include "acbc/nn_graph.hpp"
#include "acbc/ridge_series.hpp"
#include "acbc/variance.hpp"

namespace acbc {

struct PipelineConfig {
  int degree = 2;
  double lambda_exponent = 0.85;  // lambda_n = n^(-lambda_exponent)
  bool scale_covariates = true;
  bool clamp_ghat = false;
  Index ghat_dense_cap = 20000;  // above this n, Ghat is streamed in column blocks
  Index basis_cap = kDefaultBasisCap;
  unsigned threads = 1;  // execution only; never changes results

  void validate() const;
};

struct EstimateResult {
  double t_hat = 0.0;
  double l_hat = 0.0;
  double t_bc = 0.0;  // t_hat - 6 * l_hat
  Index n = 0;
  Index d = 0;
  double lambda = 0.0;
  PipelineConfig config;
  std::optional<VarianceEstimate> variance_t;
  std::optional<VarianceEstimate> variance_tbc;
  std::optional<Interval> ci_t;
  std::optional<Interval> ci_tbc;
};

// U-statistic estimate of the leading bias,
//   1 / (n (n - 1)) * sum_{i != j} [ g(i,j) g(nn(i),j) - g(i,j)^2 ].
// Row sums are reduced in index order, so the result does not depend on
// threading.
double bias_estimate(const Matrix& g, const NnGraph& graph, unsigned threads = 1);

// Same quantity without materialising g: columns of P * betas are generated
// `block` thresholds at a time.
double bias_estimate_streamed(const RidgeModel& model, const NnGraph& graph, Index block,
                              bool clamp = false, unsigned threads = 1);

// T_n of a sample (ranks and nearest neighbours only, no basis fit).
double nn_rank_correlation(const Sample& sample);

// ranks -> NN graph -> T_n -> basis fit with lambda_n = n^(-c) -> Ghat -> L_n
// -> T_bc. Inference fields are left empty; see estimate_with_inference.
EstimateResult estimate(const Sample& sample, const PipelineConfig& config = {});

}  // namespace acbc
