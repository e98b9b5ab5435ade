#pragma once

#include <vector>

#include "acbc/types.hpp"

namespace acbc {

// Directed nearest-neighbour graph: nn[i] is the closest other row to row i
// in Euclidean distance, ties resolved toward the smallest index.
struct NnGraph {
  std::vector<Index> nn;
  std::vector<double> dist;

  Index size() const { return static_cast<Index>(nn.size()); }
};

// Dimension above which build_nn skips the kd-tree.
inline constexpr Index kKdTreeMaxDim = 15;

// Exact nearest neighbours. Uses a kd-tree for d <= kKdTreeMaxDim and brute
// force otherwise; both paths return identical graphs.
NnGraph build_nn(const RowMatrix& x, unsigned threads = 1);

// O(n^2 d) reference implementation of the argmin definition.
NnGraph nn_brute_force(const RowMatrix& x);

// Same, via an explicit kd-tree regardless of dimension.
NnGraph nn_kd_tree(const RowMatrix& x, unsigned threads = 1);

}  // namespace acbc
