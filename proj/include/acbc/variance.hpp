#pragma once

#include <cstdint>
#include <vector>

#include "acbc/types.hpp"

namespace acbc {

// Bootstrap estimate of the limiting variance sigma^2 of sqrt(n) * (stat - T).
struct VarianceEstimate {
  double sigma2_hat = 0.0;
  double se = 0.0;  // sqrt(sigma2_hat / n)
  Index n = 0;
  Index m = 0;
  int b_reps = 0;
  std::uint64_t seed = 0;
  std::vector<double> replicates;  // statistic on each subsample, in draw order
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double alpha = 0.05;

  bool contains(double v) const { return lo <= v && v <= hi; }
  double width() const { return hi - lo; }
};

}  // namespace acbc
