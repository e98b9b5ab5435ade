#include <gtest/gtest.h>

#include "acbc/bias_correction.hpp"
#include "acbc/error.hpp"
#include "acbc/simulation.hpp"
#include "oracles.hpp"

namespace acbc {
namespace {

NnGraph graph_of(std::vector<Index> nn) {
  NnGraph g;
  g.dist.assign(nn.size(), 0.0);
  g.nn = std::move(nn);
  return g;
}

TEST(BiasEstimate, ConstantRowsGiveZero) {
  Matrix g(4, 4);
  for (Index i = 0; i < 4; ++i) g.row(i) = Eigen::RowVector4d(0.9, 0.4, 0.7, 0.1);
  EXPECT_EQ(bias_estimate(g, graph_of({1, 0, 3, 2})), 0.0);
}

TEST(BiasEstimate, TwoByTwoHandExpansion) {
  Matrix g(2, 2);
  g << 1.0, 0.5,
       0.25, 0.75;
  EXPECT_NEAR(bias_estimate(g, graph_of({1, 0})), 0.15625, 1e-15);
}

TEST(BiasEstimate, MatchesDoubleLoop) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> value(-0.3, 1.3);
  for (Index n : {2, 3, 50, 127, 300}) {
    Matrix g(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) g(i, j) = value(rng);
    std::vector<Index> nn(static_cast<std::size_t>(n));
    std::uniform_int_distribution<Index> other(0, n - 2);
    for (Index i = 0; i < n; ++i) {
      const Index j = other(rng);
      nn[i] = j >= i ? j + 1 : j;
    }
    EXPECT_NEAR(bias_estimate(g, graph_of(nn)), testing::bias_double_loop(g, nn), 1e-12);
    EXPECT_EQ(bias_estimate(g, graph_of(nn), 1), bias_estimate(g, graph_of(nn), 3));
  }
}

TEST(BiasEstimate, DimensionErrors) {
  EXPECT_THROW(bias_estimate(Matrix::Zero(3, 2), graph_of({1, 0, 0})), Error);
  EXPECT_THROW(bias_estimate(Matrix::Zero(3, 3), graph_of({1, 0})), Error);
}

TEST(BiasEstimate, StreamedMatchesDense) {
  const Sample s = gen_gaussian_copula({400, 4, 0.8, 3});
  const SeriesModel model = fit_series(s, 2, ridge_penalty(400, 0.85), true);
  const NnGraph g = build_nn(s.x);
  const double dense = bias_estimate(ghat_matrix(model.ridge), g);
  for (Index block : {1, 7, 64, 399, 400, 1000}) {
    EXPECT_NEAR(bias_estimate_streamed(model.ridge, g, block), dense, 1e-10) << block;
  }
  EXPECT_NEAR(bias_estimate_streamed(model.ridge, g, 33, true),
              bias_estimate(ghat_matrix(model.ridge, true), g), 1e-10);
}

TEST(Estimate, DenseCapBoundary) {
  const Sample s = gen_gaussian_copula({300, 3, 0.6, 4});
  PipelineConfig dense;
  dense.ghat_dense_cap = 300;
  PipelineConfig streamed;
  streamed.ghat_dense_cap = 299;
  const EstimateResult a = estimate(s, dense);
  const EstimateResult b = estimate(s, streamed);
  EXPECT_EQ(a.t_hat, b.t_hat);
  EXPECT_NEAR(a.l_hat, b.l_hat, 1e-10);
}

TEST(Estimate, ConstantBasisLeavesStatisticUnchanged) {
  const Sample s = gen_gaussian_copula({250, 5, 0.9, 5});
  PipelineConfig config;
  config.degree = 0;
  const EstimateResult r = estimate(s, config);
  EXPECT_EQ(r.l_hat, 0.0);
  EXPECT_EQ(r.t_bc, r.t_hat);
}

TEST(Estimate, CorrectionIdentityAndDeterminism) {
  const Sample s = gen_gaussian_copula({300, 6, 0.5, 6});
  PipelineConfig one;
  PipelineConfig many;
  many.threads = 4;
  const EstimateResult a = estimate(s, one);
  const EstimateResult b = estimate(s, many);
  EXPECT_NEAR(a.t_bc, a.t_hat - 6.0 * a.l_hat, 1e-12);
  EXPECT_EQ(a.t_hat, b.t_hat);
  EXPECT_EQ(a.l_hat, b.l_hat);
  EXPECT_EQ(a.t_bc, b.t_bc);
  EXPECT_EQ(a.n, 300);
  EXPECT_EQ(a.d, 6);
  EXPECT_NEAR(a.lambda, std::pow(300.0, -0.85), 1e-15);
}

TEST(Estimate, MonotoneTransformKeepsTHat) {
  const Sample s = gen_gaussian_copula({300, 3, 0.7, 7});
  Sample t = s;
  t.y = s.y.array().exp() * 4.0;
  EXPECT_EQ(estimate(s).t_hat, estimate(t).t_hat);
}

TEST(Estimate, NoiselessMonotoneResponse) {
  std::mt19937_64 rng(8);
  const RowMatrix x = testing::uniform_matrix(5000, 1, rng);
  const EstimateResult r = estimate({x, x.col(0)});
  EXPECT_GE(r.t_bc, 0.95);
  EXPECT_LE(r.t_bc, 1.05);
}

TEST(Estimate, TwoObservationsAreDegenerateButDefined) {
  RowMatrix x(2, 1);
  x << 0.1, 0.7;
  const EstimateResult r = estimate({x, Vector{{0.3, 0.2}}});
  EXPECT_EQ(r.t_hat, -1.0);
  EXPECT_TRUE(std::isfinite(r.t_bc));
}

TEST(Estimate, ConfigAndBasisErrors) {
  const Sample s = gen_gaussian_copula({50, 3, 0.2, 9});
  PipelineConfig bad;
  bad.lambda_exponent = 0.0;
  EXPECT_THROW(estimate(s, bad), Error);
  bad = {};
  bad.degree = -1;
  EXPECT_THROW(estimate(s, bad), Error);
  bad = {};
  bad.degree = 40;
  try {
    estimate(s, bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBasisTooLarge);
  }
}

TEST(Estimate, CentredUnderIndependence) {
  double sum = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    sum += estimate(gen_gaussian_copula({300, 6, 0.0, replication_data_seed(101, 0, rep)})).t_bc;
  }
  EXPECT_NEAR(sum / 200.0, 0.0, 0.02);
}

TEST(Estimate, CorrectionReducesBiasUnderStrongDependence) {
  const double truth = true_t(0.9);
  double mean_t = 0.0, mean_bc = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const EstimateResult r =
        estimate(gen_gaussian_copula({600, 8, 0.9, replication_data_seed(202, 0, rep)}));
    mean_t += r.t_hat / 200.0;
    mean_bc += r.t_bc / 200.0;
  }
  EXPECT_LT(std::abs(mean_bc - truth), std::abs(mean_t - truth));
}

}  // namespace
}  // namespace acbc
