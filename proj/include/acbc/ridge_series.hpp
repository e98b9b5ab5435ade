#pragma once

#include <optional>
#include <vector>

#include "acbc/dataset.hpp"
#include "acbc/types.hpp"

namespace acbc {

inline constexpr Index kDefaultBasisCap = 10000;

// Monomials x^alpha with total degree |alpha| <= degree, ordered by total
// degree and lexicographically within a degree. The constant comes first.
struct BasisSpec {
  Index d = 0;
  int degree = 0;
  std::vector<std::vector<int>> exponents;

  Index size() const { return static_cast<Index>(exponents.size()); }
};

// Binomial coefficient C(d + degree, degree), or nullopt above `cap`.
std::optional<Index> basis_size(Index d, int degree, Index cap = kDefaultBasisCap);

BasisSpec basis_index_set(Index d, int degree, Index cap = kDefaultBasisCap);

// n x K matrix with entry (i, k) = prod_m xs(i, m)^alpha_k[m], 0^0 = 1.
Matrix design_matrix(const RowMatrix& xs, const BasisSpec& basis);

// Ridge least squares for the indicator responses 1(y >= y_j), one column per
// observed threshold y_j, all sharing one Cholesky factor of P'P + n*lambda*I.
struct RidgeModel {
  Matrix p;        // n x K design
  Vector y;        // thresholds, in sample order
  double lambda = 0.0;
  Eigen::LLT<Matrix> factor;
  Matrix betas;    // K x n; column j is the fit for threshold y[j]

  Index n() const { return p.rows(); }
  Index k() const { return p.cols(); }

  // L * L' from the stored factor.
  Matrix reconstructed_gram() const;
};

// Column j holds P' * 1(y >= y[j]).
Matrix indicator_moments(const Matrix& p, const Vector& y);

RidgeModel ridge_fit_all(const Matrix& p, const Vector& y, double lambda,
                         unsigned threads = 1);

// g(i, j) = p_K(x_i)' beta_j, an estimate of P(Y >= y_j | X = x_i). Values may
// leave [0, 1]; clamping is an opt-in experiment.
Matrix ghat_matrix(const RidgeModel& model, bool clamp = false);

// Ridge penalty n^(-exponent).
double ridge_penalty(Index n, double exponent);

// Basis, scaling and ridge fit bundled so new covariate points can be
// evaluated on the same scale as the training sample.
struct SeriesModel {
  BasisSpec basis;
  std::optional<ScaledMatrix> scaling;
  RidgeModel ridge;

  // Rows: new points; columns: the training thresholds.
  Matrix predict(const RowMatrix& x) const;
};

SeriesModel fit_series(const Sample& sample, int degree, double lambda, bool scale,
                       Index basis_cap = kDefaultBasisCap, unsigned threads = 1);

}  // namespace acbc
