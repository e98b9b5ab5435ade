#include "acbc/estimator.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "acbc/error.hpp"

namespace acbc {

TnValue chatterjee_t(const RankVector& ranks, const NnGraph& graph) {
  const auto n = static_cast<Index>(ranks.size());
  if (graph.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("{} ranks but nearest-neighbour graph of size {}", n, graph.size()));
  }
  if (n < 2) throw Error(ErrorCode::kInsufficientRows, "need at least 2 observations");

  std::int64_t sum = 0;
  for (Index i = 0; i < n; ++i) {
    const auto j = graph.nn[static_cast<std::size_t>(i)];
    if (j < 0 || j >= n || j == i) {
      throw Error(ErrorCode::kInvalidArgument, fmt::format("invalid neighbour {} of {}", j, i));
    }
    sum += std::min(ranks[static_cast<std::size_t>(i)], ranks[static_cast<std::size_t>(j)]);
  }
  const auto nd = static_cast<double>(n);
  const double value =
      6.0 * static_cast<double>(sum) / (nd * nd - 1.0) - (2.0 * nd + 1.0) / (nd - 1.0);
  return TnValue{value, n};
}

}  // namespace acbc
