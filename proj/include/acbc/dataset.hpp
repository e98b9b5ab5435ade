#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "acbc/types.hpp"

namespace acbc {

// Paired observations: covariates x (n x d) and response y (n).
struct Sample {
  RowMatrix x;
  Vector y;

  Index n() const { return x.rows(); }
  Index d() const { return x.cols(); }
};

// Throws Error unless n >= 2, d >= 1, sizes agree and every entry is finite.
void validate(const Sample& sample);

// Rows of `sample` selected by `rows` (duplicates allowed), in that order.
Sample take_rows(const Sample& sample, std::span<const Index> rows);

// r[i] = #{ j : y[j] <= y[i] }. Tied values all receive the largest rank of
// their group.
using RankVector = std::vector<std::int64_t>;

RankVector compute_ranks(const Vector& y);

struct ScaledMatrix {
  RowMatrix xs;
  Vector offsets;
  Vector scales;

  // Applies the recorded affine map to new points (rows of `x`).
  RowMatrix apply(const RowMatrix& x) const;
};

// Per-column min-max map onto [0, 1]; constant columns map to 0 with scale 1.
ScaledMatrix minmax_scale(const RowMatrix& x);

// Selects the response column of a CSV file.
struct ColumnSelector {
  static ColumnSelector last() { return ColumnSelector{}; }
  static ColumnSelector index(std::size_t i) { return ColumnSelector{i}; }
  // Accepts a 0-based index or the literal "last".
  static ColumnSelector parse(const std::string& text);

  std::optional<std::size_t> column;
};

// Comma-separated numeric table with an optional header line. The header is
// detected when any token of the first row is non-numeric.
Sample load_csv(const std::filesystem::path& path,
                ColumnSelector y_column = ColumnSelector::last());

// Writes x columns followed by y as the last column, no header.
void save_csv(const std::filesystem::path& path, const Sample& sample);

}  // namespace acbc
