#pragma once

#include "acbc/dataset.hpp"
#include "acbc/nn_graph.hpp"

namespace acbc {

struct TnValue {
  double value = 0.0;
  Index n = 0;
};

// Nearest-neighbour rank correlation
//   6 / (n^2 - 1) * sum_i min(r_i, r_{nn(i)}) - (2n + 1) / (n - 1).
// The sum is accumulated exactly in integers. No clamping is applied, so
// small samples can give negative values (n = 2 always gives -1).
TnValue chatterjee_t(const RankVector& ranks, const NnGraph& graph);

}  // namespace acbc
