#include "acbc/selftest.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <fmt/format.h>

#include "acbc/bias_correction.hpp"
#include "acbc/ridge_series.hpp"
#include "acbc/rng.hpp"
#include "acbc/simulation.hpp"

namespace acbc {
namespace {

class SuiteTimer {
 public:
  explicit SuiteTimer(SuiteResult& r) : r_(r), start_(std::chrono::steady_clock::now()) {}
  ~SuiteTimer() {
    r_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    r_.passed = r_.failures == 0;
  }

 private:
  SuiteResult& r_;
  std::chrono::steady_clock::time_point start_;
};

void fail(SuiteResult& r, std::string message) {
  if (r.failures++ == 0) r.detail = std::move(message);
}

// Three flavours: continuous uniform, a small integer lattice (many exact
// distance ties) and continuous points with duplicated rows.
RowMatrix random_points(Engine& engine, Index n, Index d, int flavour) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> lattice(0, 3);
  RowMatrix x(n, d);
  for (Index i = 0; i < n; ++i) {
    for (Index k = 0; k < d; ++k) x(i, k) = flavour == 1 ? lattice(engine) : unit(engine);
  }
  if (flavour == 2) {
    std::uniform_int_distribution<Index> row(0, n - 1);
    for (Index c = 0; c < n / 4; ++c) {
      const Index from = row(engine);
      const Index to = row(engine);
      x.row(to) = x.row(from).eval();
    }
  }
  return x;
}

SuiteResult nn_suite(const SelftestOptions& options) {
  SuiteResult r;
  r.name = "nn_graph: build_nn == nn_brute_force";
  SuiteTimer timer(r);
  Engine engine = make_engine(options.seed, {1});
  const Index max_n = options.quick ? 128 : 512;
  std::uniform_int_distribution<Index> pick_n(2, max_n);
  std::uniform_int_distribution<Index> pick_d(1, 12);
  const NnBuilder build =
      options.nn_under_test ? options.nn_under_test : [](const RowMatrix& x) { return build_nn(x); };
  for (int k = 0; k < 100; ++k) {
    const Index n = pick_n(engine);
    const Index d = pick_d(engine);
    const RowMatrix x = random_points(engine, n, d, k % 3);
    const NnGraph fast = build(x);
    const NnGraph slow = nn_brute_force(x);
    ++r.instances;
    if (fast.nn != slow.nn || fast.dist != slow.dist) {
      Index first = 0;
      while (first < n && fast.nn[first] == slow.nn[first]) ++first;
      fail(r, fmt::format("instance {} (n={}, d={}): neighbour of {} is {}, oracle says {}", k, n,
                          d, first, first < n ? fast.nn[first] : -1,
                          first < n ? slow.nn[first] : -1));
    }
  }
  return r;
}

double bias_double_loop(const Matrix& g, const NnGraph& graph) {
  const Index n = g.rows();
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double gij = g(i, j);
      total += gij * g(graph.nn[i], j) - gij * gij;
    }
  }
  return total / (static_cast<double>(n) * static_cast<double>(n - 1));
}

SuiteResult bias_suite(const SelftestOptions& options) {
  SuiteResult r;
  r.name = "bias_correction: bias_estimate == double loop (1e-12)";
  SuiteTimer timer(r);
  Engine engine = make_engine(options.seed, {2});
  const Index max_n = options.quick ? 128 : 512;
  std::uniform_int_distribution<Index> pick_n(2, max_n);
  std::uniform_real_distribution<double> value(-0.2, 1.2);
  for (int k = 0; k < 50; ++k) {
    const Index n = pick_n(engine);
    Matrix g(n, n);
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i) g(i, j) = value(engine);
    NnGraph graph;
    std::uniform_int_distribution<Index> other(0, n - 2);
    for (Index i = 0; i < n; ++i) {
      const Index j = other(engine);
      graph.nn.push_back(j >= i ? j + 1 : j);
      graph.dist.push_back(0.0);
    }
    const double fast = bias_estimate(g, graph);
    const double slow = bias_double_loop(g, graph);
    ++r.instances;
    if (!(std::abs(fast - slow) <= 1e-12)) {
      fail(r, fmt::format("instance {} (n={}): {:.17g} vs oracle {:.17g}", k, n, fast, slow));
    }
  }
  return r;
}

SuiteResult ridge_suite(const SelftestOptions& options) {
  SuiteResult r;
  r.name = "ridge_series: normal-equation residual <= 1e-8";
  SuiteTimer timer(r);
  Engine engine = make_engine(options.seed, {3});
  const Index max_n = options.quick ? 128 : 400;
  std::uniform_int_distribution<Index> pick_n(10, max_n);
  std::uniform_int_distribution<Index> pick_d(1, 4);
  std::uniform_int_distribution<int> pick_degree(0, 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double lambdas[] = {1e-6, 1e-4, 1e-2, 1.0, 100.0};
  for (int k = 0; k < 20; ++k) {
    const Index n = pick_n(engine);
    const Index d = pick_d(engine);
    RowMatrix x(n, d);
    Vector y(n);
    for (Index i = 0; i < n; ++i) {
      for (Index c = 0; c < d; ++c) x(i, c) = unit(engine);
      y[i] = std::round(10.0 * unit(engine));  // coarse grid: tied thresholds
    }
    const Matrix p = design_matrix(x, basis_index_set(d, pick_degree(engine)));
    // Moments P' 1(y >= y_j) by direct summation.
    Matrix moments = Matrix::Zero(p.cols(), n);
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i)
        if (y[i] >= y[j]) moments.col(j) += p.row(i).transpose();
    for (double lambda : lambdas) {
      ++r.instances;
      const RidgeModel model = ridge_fit_all(p, y, lambda);
      Matrix a = p.transpose() * p;
      a.diagonal().array() += static_cast<double>(n) * lambda;
      for (Index j = 0; j < n; ++j) {
        const double resid = (a * model.betas.col(j) - moments.col(j)).norm() /
                             (1.0 + moments.col(j).norm());
        if (!(resid <= 1e-8)) {
          fail(r, fmt::format("instance {} (n={}, K={}, lambda={}): residual {:.3g} at column {}",
                              k, n, p.cols(), lambda, resid, j));
          break;
        }
      }
    }
  }
  return r;
}

SuiteResult truth_suite() {
  SuiteResult r;
  r.name = "simulation: closed-form true_t";
  SuiteTimer timer(r);
  using Big = boost::multiprecision::cpp_dec_float_50;
  r.instances = 3;
  if (true_t(0.0) != 0.0) fail(r, fmt::format("true_t(0) = {:.17g}", true_t(0.0)));
  if (true_t(1.0) != 1.0) fail(r, fmt::format("true_t(1) = {:.17g}", true_t(1.0)));
  const Big reference =
      Big(3) / boost::math::constants::pi<Big>() * boost::multiprecision::asin(Big("0.625")) -
      Big("0.5");
  const double expected = reference.convert_to<double>();
  if (!(std::abs(true_t(0.5) - expected) <= 1e-10)) {
    fail(r, fmt::format("true_t(0.5) = {:.17g}, reference {:.17g}", true_t(0.5), expected));
  }
  return r;
}

}  // namespace

std::vector<SuiteResult> run_selftest(const SelftestOptions& options) {
  return {nn_suite(options), bias_suite(options), ridge_suite(options), truth_suite()};
}

}  // namespace acbc
