#include "acbc/ridge_series.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "acbc/error.hpp"
#include "acbc/parallel.hpp"

namespace acbc {
namespace {

// Appends every exponent tuple of `remaining` total degree over coordinates
// [pos, d), in lexicographic order.
void enumerate(std::vector<int>& current, std::size_t pos, int remaining,
               std::vector<std::vector<int>>& out) {
  if (pos + 1 == current.size()) {
    current[pos] = remaining;
    out.push_back(current);
    return;
  }
  for (int e = 0; e <= remaining; ++e) {
    current[pos] = e;
    enumerate(current, pos + 1, remaining - e, out);
  }
  current[pos] = 0;
}

// Column block width for the multi-RHS solves. Fixed so results do not
// depend on the thread count.
constexpr Index kSolveBlock = 256;

}  // namespace

std::optional<Index> basis_size(Index d, int degree, Index cap) {
  // C(d + i, i) = C(d + i - 1, i - 1) * (d + i) / i, exact at every step.
  // C(d + i, i) >= d + i, so the early check also bounds the product.
  Index value = 1;
  for (int i = 1; i <= degree; ++i) {
    if (d + i > cap) return std::nullopt;
    value = value * (d + i) / i;
    if (value > cap) return std::nullopt;
  }
  return value;
}

BasisSpec basis_index_set(Index d, int degree, Index cap) {
  if (d < 1) throw Error(ErrorCode::kInvalidArgument, "basis needs d >= 1");
  if (degree < 0) throw Error(ErrorCode::kInvalidArgument, "basis degree must be >= 0");
  const auto k = basis_size(d, degree, cap);
  if (!k) {
    throw Error(ErrorCode::kBasisTooLarge,
                fmt::format("basis of degree {} in dimension {} exceeds {} terms; "
                            "lower the degree",
                            degree, d, cap));
  }
  BasisSpec spec{d, degree, {}};
  spec.exponents.reserve(static_cast<std::size_t>(*k));
  std::vector<int> current(static_cast<std::size_t>(d), 0);
  for (int total = 0; total <= degree; ++total) enumerate(current, 0, total, spec.exponents);
  return spec;
}

Matrix design_matrix(const RowMatrix& xs, const BasisSpec& basis) {
  if (xs.cols() != basis.d) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("design matrix: {} columns but basis dimension {}", xs.cols(),
                            basis.d));
  }
  const Index n = xs.rows();
  const Index d = basis.d;
  const int q = basis.degree;
  Matrix p(n, basis.size());
  // powers(m, e) = xs(i, m)^e for the current row.
  Matrix powers(d, q + 1);
  for (Index i = 0; i < n; ++i) {
    for (Index m = 0; m < d; ++m) {
      powers(m, 0) = 1.0;
      for (int e = 1; e <= q; ++e) powers(m, e) = powers(m, e - 1) * xs(i, m);
    }
    for (Index k = 0; k < basis.size(); ++k) {
      const auto& alpha = basis.exponents[static_cast<std::size_t>(k)];
      double v = 1.0;
      for (Index m = 0; m < d; ++m) {
        if (alpha[static_cast<std::size_t>(m)] != 0) v *= powers(m, alpha[static_cast<std::size_t>(m)]);
      }
      p(i, k) = v;
    }
  }
  return p;
}

Matrix RidgeModel::reconstructed_gram() const {
  const Matrix l = factor.matrixL();
  return l * l.transpose();
}

Matrix indicator_moments(const Matrix& p, const Vector& y) {
  const Index n = p.rows();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return y[a] > y[b]; });

  // Descending sweep: after absorbing a group of tied values, the running
  // sum equals P' 1(y >= value) for every member of the group.
  Matrix rhs(p.cols(), n);
  Vector running = Vector::Zero(p.cols());
  std::size_t begin = 0;
  while (begin < order.size()) {
    std::size_t end = begin + 1;
    while (end < order.size() && y[order[end]] == y[order[begin]]) ++end;
    for (std::size_t k = begin; k < end; ++k) running += p.row(order[k]).transpose();
    for (std::size_t k = begin; k < end; ++k) rhs.col(order[k]) = running;
    begin = end;
  }
  return rhs;
}

RidgeModel ridge_fit_all(const Matrix& p, const Vector& y, double lambda, unsigned threads) {
  if (p.rows() != y.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("design has {} rows but y has {} entries", p.rows(), y.size()));
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("ridge penalty must be > 0, got {}", lambda));
  }
  if (!p.allFinite()) {
    throw Error(ErrorCode::kFactorizationFailed, "design matrix has non-finite entries");
  }
  const Index n = p.rows();
  const Index k = p.cols();

  RidgeModel model;
  model.p = p;
  model.y = y;
  model.lambda = lambda;

  Matrix gram = Matrix::Zero(k, k);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(p.transpose());
  gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
  gram.diagonal().array() += static_cast<double>(n) * lambda;
  model.factor.compute(gram);
  if (model.factor.info() != Eigen::Success) {
    throw Error(ErrorCode::kFactorizationFailed, "Cholesky factorization of the ridge Gram matrix failed");
  }

  const Matrix rhs = indicator_moments(p, y);
  model.betas.resize(k, n);
  const Index blocks = (n + kSolveBlock - 1) / kSolveBlock;
  parallel_for(static_cast<std::size_t>(blocks), threads, [&](std::size_t b) {
    const Index start = static_cast<Index>(b) * kSolveBlock;
    const Index width = std::min(kSolveBlock, n - start);
    model.betas.middleCols(start, width) = model.factor.solve(rhs.middleCols(start, width));
  });
  return model;
}

Matrix ghat_matrix(const RidgeModel& model, bool clamp) {
  Matrix g = model.p * model.betas;
  if (clamp) g = g.cwiseMax(0.0).cwiseMin(1.0);
  return g;
}

double ridge_penalty(Index n, double exponent) {
  return std::pow(static_cast<double>(n), -exponent);
}

Matrix SeriesModel::predict(const RowMatrix& x) const {
  const Matrix p = design_matrix(scaling ? scaling->apply(x) : x, basis);
  return p * ridge.betas;
}

SeriesModel fit_series(const Sample& sample, int degree, double lambda, bool scale,
                       Index basis_cap, unsigned threads) {
  SeriesModel model;
  model.basis = basis_index_set(sample.d(), degree, basis_cap);
  Matrix p;
  if (scale) {
    model.scaling = minmax_scale(sample.x);
    p = design_matrix(model.scaling->xs, model.basis);
  } else {
    p = design_matrix(sample.x, model.basis);
  }
  model.ridge = ridge_fit_all(p, sample.y, lambda, threads);
  return model;
}

}  // namespace acbc
