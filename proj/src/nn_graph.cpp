#include "acbc/nn_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "acbc/error.hpp"
#include "acbc/parallel.hpp"

namespace acbc {
namespace {

void check_input(const RowMatrix& x) {
  if (x.rows() < 2) {
    throw Error(ErrorCode::kInsufficientRows,
                fmt::format("nearest neighbours need at least 2 points, got {}", x.rows()));
  }
  if (!x.allFinite()) throw Error(ErrorCode::kNonFinite, "non-finite covariates");
}

// Both search paths must compute distances with the same operation order,
// otherwise exact-tie comparisons could disagree between them.
inline double squared_distance(const double* a, const double* b, Index d) {
  double s = 0.0;
  for (Index k = 0; k < d; ++k) {
    const double diff = a[k] - b[k];
    s += diff * diff;
  }
  return s;
}

struct Best {
  double sq = std::numeric_limits<double>::infinity();
  Index index = -1;

  void offer(double candidate_sq, Index candidate) {
    if (candidate_sq < sq || (candidate_sq == sq && candidate < index)) {
      sq = candidate_sq;
      index = candidate;
    }
  }
};

class KdTree {
 public:
  explicit KdTree(const RowMatrix& x) : x_(x), d_(x.cols()) {
    perm_.resize(static_cast<std::size_t>(x.rows()));
    std::iota(perm_.begin(), perm_.end(), Index{0});
    nodes_.reserve(2 * perm_.size() / kLeafSize + 2);
    build(0, perm_.size());
  }

  Best nearest(Index query) const {
    Best best;
    search(0, query, x_.row(query).data(), best);
    return best;
  }

 private:
  static constexpr std::size_t kLeafSize = 8;

  struct Node {
    std::size_t begin = 0;
    std::size_t end = 0;
    Index axis = -1;  // -1 marks a leaf
    double split = 0.0;
    std::size_t left = 0;
    std::size_t right = 0;
  };

  std::size_t build(std::size_t begin, std::size_t end) {
    const std::size_t id = nodes_.size();
    nodes_.push_back(Node{begin, end});
    if (end - begin <= kLeafSize) return id;

    // Split on the widest coordinate at the median.
    Index axis = 0;
    double widest = -1.0;
    for (Index k = 0; k < d_; ++k) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (std::size_t p = begin; p < end; ++p) {
        const double v = x_(perm_[p], k);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (hi - lo > widest) {
        widest = hi - lo;
        axis = k;
      }
    }
    if (widest <= 0.0) return id;  // all points coincide

    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(perm_.begin() + static_cast<std::ptrdiff_t>(begin),
                     perm_.begin() + static_cast<std::ptrdiff_t>(mid),
                     perm_.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](Index a, Index b) { return x_(a, axis) < x_(b, axis); });
    const double split = x_(perm_[mid], axis);
    nodes_[id].axis = axis;
    nodes_[id].split = split;
    const std::size_t left = build(begin, mid);
    const std::size_t right = build(mid, end);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  // Left subtree holds coordinates <= split, right holds >= split.
  void search(std::size_t id, Index query, const double* q, Best& best) const {
    const Node& node = nodes_[id];
    if (node.axis < 0) {
      for (std::size_t p = node.begin; p < node.end; ++p) {
        const Index j = perm_[p];
        if (j == query) continue;
        best.offer(squared_distance(q, x_.row(j).data(), d_), j);
      }
      return;
    }
    const double delta = q[node.axis] - node.split;
    const std::size_t near = delta <= 0.0 ? node.left : node.right;
    const std::size_t far = delta <= 0.0 ? node.right : node.left;
    search(near, query, q, best);
    // Equality keeps equidistant candidates with smaller indices reachable.
    if (delta * delta <= best.sq) search(far, query, q, best);
  }

  const RowMatrix& x_;
  Index d_;
  std::vector<Index> perm_;
  std::vector<Node> nodes_;
};

NnGraph finish(std::vector<Best> const& best) {
  NnGraph g;
  g.nn.resize(best.size());
  g.dist.resize(best.size());
  for (std::size_t i = 0; i < best.size(); ++i) {
    g.nn[i] = best[i].index;
    g.dist[i] = std::sqrt(best[i].sq);
  }
  return g;
}

}  // namespace

NnGraph nn_brute_force(const RowMatrix& x) {
  check_input(x);
  const Index n = x.rows();
  const Index d = x.cols();
  std::vector<Best> best(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      best[static_cast<std::size_t>(i)].offer(
          squared_distance(x.row(i).data(), x.row(j).data(), d), j);
    }
  }
  return finish(best);
}

NnGraph nn_kd_tree(const RowMatrix& x, unsigned threads) {
  check_input(x);
  const KdTree tree(x);
  std::vector<Best> best(static_cast<std::size_t>(x.rows()));
  parallel_for(best.size(), threads,
               [&](std::size_t i) { best[i] = tree.nearest(static_cast<Index>(i)); });
  return finish(best);
}

NnGraph build_nn(const RowMatrix& x, unsigned threads) {
  if (x.cols() <= kKdTreeMaxDim) return nn_kd_tree(x, threads);
  return nn_brute_force(x);
}

}  // namespace acbc
