#include "acbc/bias_correction.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "acbc/error.hpp"
#include "acbc/estimator.hpp"
#include "acbc/parallel.hpp"

namespace acbc {
namespace {

constexpr Index kStreamBlock = 1024;

void check_graph(Index n, const NnGraph& graph) {
  if (graph.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("Ghat has {} rows but graph has {} nodes", n, graph.size()));
  }
  if (n < 2) throw Error(ErrorCode::kInsufficientRows, "bias estimate needs n >= 2");
}

// Adds, for each row i, sum over columns j != i of block of
// g(i,j) * g(nn(i),j) - g(i,j)^2. `first_col` is the global index of the
// block's first column.
void accumulate_rows(const RowMatrix& block, Index first_col, const NnGraph& graph,
                     std::vector<double>& row_sums, unsigned threads) {
  const Index width = block.cols();
  parallel_for(row_sums.size(), threads, [&](std::size_t ii) {
    const auto i = static_cast<Index>(ii);
    const auto gi = block.row(i).array();
    const auto gn = block.row(graph.nn[ii]).array();
    const Index diag = i - first_col;
    auto term = [&](Index start, Index len) {
      if (len <= 0) return 0.0;
      return (gi.segment(start, len) * gn.segment(start, len) -
              gi.segment(start, len) * gi.segment(start, len))
          .sum();
    };
    if (diag < 0 || diag >= width) {
      row_sums[ii] += term(0, width);
    } else {
      row_sums[ii] += term(0, diag) + term(diag + 1, width - diag - 1);
    }
  });
}

double finish(const std::vector<double>& row_sums) {
  const auto n = static_cast<double>(row_sums.size());
  double total = 0.0;
  for (double s : row_sums) total += s;
  return total / (n * (n - 1.0));
}

}  // namespace

void PipelineConfig::validate() const {
  if (degree < 0) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("degree must be >= 0, got {}", degree));
  }
  if (!(lambda_exponent > 0.0) || !std::isfinite(lambda_exponent)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("lambda exponent must be > 0, got {}", lambda_exponent));
  }
  if (ghat_dense_cap < 1) throw Error(ErrorCode::kInvalidArgument, "ghat_dense_cap must be >= 1");
}

double bias_estimate(const Matrix& g, const NnGraph& graph, unsigned threads) {
  if (g.rows() != g.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("Ghat must be square, got {}x{}", g.rows(), g.cols()));
  }
  check_graph(g.rows(), graph);
  const RowMatrix rows = g;
  std::vector<double> row_sums(static_cast<std::size_t>(g.rows()), 0.0);
  accumulate_rows(rows, 0, graph, row_sums, threads);
  return finish(row_sums);
}

double bias_estimate_streamed(const RidgeModel& model, const NnGraph& graph, Index block,
                              bool clamp, unsigned threads) {
  const Index n = model.n();
  check_graph(n, graph);
  if (block < 1) throw Error(ErrorCode::kInvalidArgument, "block width must be >= 1");
  std::vector<double> row_sums(static_cast<std::size_t>(n), 0.0);
  RowMatrix g;
  for (Index start = 0; start < n; start += block) {
    const Index width = std::min(block, n - start);
    g.noalias() = model.p * model.betas.middleCols(start, width);
    if (clamp) g = g.cwiseMax(0.0).cwiseMin(1.0);
    accumulate_rows(g, start, graph, row_sums, threads);
  }
  return finish(row_sums);
}

double nn_rank_correlation(const Sample& sample) {
  validate(sample);
  return chatterjee_t(compute_ranks(sample.y), build_nn(sample.x)).value;
}

EstimateResult estimate(const Sample& sample, const PipelineConfig& config) {
  validate(sample);
  config.validate();

  EstimateResult result;
  result.n = sample.n();
  result.d = sample.d();
  result.config = config;

  const RankVector ranks = compute_ranks(sample.y);
  const NnGraph graph = build_nn(sample.x, config.threads);
  result.t_hat = chatterjee_t(ranks, graph).value;

  result.lambda = ridge_penalty(sample.n(), config.lambda_exponent);
  const SeriesModel series = fit_series(sample, config.degree, result.lambda,
                                        config.scale_covariates, config.basis_cap,
                                        config.threads);
  if (sample.n() <= config.ghat_dense_cap) {
    result.l_hat =
        bias_estimate(ghat_matrix(series.ridge, config.clamp_ghat), graph, config.threads);
  } else {
    result.l_hat = bias_estimate_streamed(series.ridge, graph, kStreamBlock, config.clamp_ghat,
                                          config.threads);
  }
  result.t_bc = result.t_hat - 6.0 * result.l_hat;
  return result;
}

}  // namespace acbc
