#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "acbc/nn_graph.hpp"

namespace acbc {

using NnBuilder = std::function<NnGraph(const RowMatrix&)>;

struct SelftestOptions {
  bool quick = false;  // instances with n <= 128 only
  std::uint64_t seed = 0;
  // Implementation checked against nn_brute_force; defaults to build_nn.
  NnBuilder nn_under_test;
};

struct SuiteResult {
  std::string name;
  bool passed = true;
  int instances = 0;
  int failures = 0;
  double seconds = 0.0;
  std::string detail;  // first failure, if any
};

// Oracle-equivalence suites: kd-tree vs brute-force nearest neighbours, the
// bias U-statistic vs a literal double loop, ridge normal-equation residuals
// over a penalty grid, and the closed-form copula truth.
std::vector<SuiteResult> run_selftest(const SelftestOptions& options = {});

}  // namespace acbc
