#include "acbc/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

#include "acbc/error.hpp"

namespace acbc {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view token) {
  token = trim(token);
  if (token.empty()) return std::nullopt;
  if (token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) return std::nullopt;
  return value;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

void validate(const Sample& sample) {
  if (sample.x.rows() != sample.y.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("x has {} rows but y has {} entries", sample.x.rows(),
                            sample.y.size()));
  }
  if (sample.n() < 2) {
    throw Error(ErrorCode::kInsufficientRows,
                fmt::format("insufficient rows: need at least 2, got {}", sample.n()));
  }
  if (sample.d() < 1) throw Error(ErrorCode::kNoCovariates, "no covariate columns");
  if (!sample.x.allFinite() || !sample.y.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "sample contains NaN or infinite entries");
  }
}

Sample take_rows(const Sample& sample, std::span<const Index> rows) {
  Sample out{RowMatrix(static_cast<Index>(rows.size()), sample.d()),
             Vector(static_cast<Index>(rows.size()))};
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.x.row(static_cast<Index>(r)) = sample.x.row(rows[r]);
    out.y[static_cast<Index>(r)] = sample.y[rows[r]];
  }
  return out;
}

RankVector compute_ranks(const Vector& y) {
  const Index n = y.size();
  if (!y.allFinite()) throw Error(ErrorCode::kNonFinite, "ranks of non-finite values");
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return y[a] < y[b]; });

  RankVector ranks(static_cast<std::size_t>(n));
  // Walk groups of equal values; each member gets the position of the group's end.
  std::size_t begin = 0;
  while (begin < order.size()) {
    std::size_t end = begin + 1;
    while (end < order.size() && y[order[end]] == y[order[begin]]) ++end;
    for (std::size_t k = begin; k < end; ++k) {
      ranks[static_cast<std::size_t>(order[k])] = static_cast<std::int64_t>(end);
    }
    begin = end;
  }
  return ranks;
}

RowMatrix ScaledMatrix::apply(const RowMatrix& x) const {
  if (x.cols() != offsets.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "scaling applied to wrong column count");
  }
  RowMatrix out = x;
  for (Index k = 0; k < x.cols(); ++k) {
    out.col(k) = (x.col(k).array() - offsets[k]) / scales[k];
  }
  return out;
}

ScaledMatrix minmax_scale(const RowMatrix& x) {
  if (!x.allFinite()) throw Error(ErrorCode::kNonFinite, "cannot scale non-finite entries");
  ScaledMatrix out{x, Vector::Zero(x.cols()), Vector::Ones(x.cols())};
  if (x.rows() == 0) return out;
  for (Index k = 0; k < x.cols(); ++k) {
    const double lo = x.col(k).minCoeff();
    const double hi = x.col(k).maxCoeff();
    out.offsets[k] = lo;
    out.scales[k] = hi > lo ? hi - lo : 1.0;
    out.xs.col(k) = ((x.col(k).array() - lo) / out.scales[k]).min(1.0);
  }
  return out;
}

ColumnSelector ColumnSelector::parse(const std::string& text) {
  if (text == "last") return last();
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("y column must be a 0-based index or \"last\", got \"{}\"", text));
  }
  return index(value);
}

Sample load_csv(const std::filesystem::path& path, ColumnSelector y_column) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kFileNotFound, fmt::format("cannot open file {}", path.string()));
  }

  std::vector<std::vector<double>> rows;
  std::size_t arity = 0;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto tokens = split(line);
    std::vector<double> values;
    values.reserve(tokens.size());
    std::optional<std::size_t> bad_col;
    for (std::size_t c = 0; c < tokens.size(); ++c) {
      const auto v = parse_number(tokens[c]);
      if (!v) {
        if (!bad_col) bad_col = c;
        continue;
      }
      values.push_back(*v);
    }
    if (first) {
      first = false;
      arity = tokens.size();
      if (bad_col) continue;  // header line
    }
    if (tokens.size() != arity) {
      throw Error(ErrorCode::kRaggedRow,
                  fmt::format("row at line {} has {} fields, expected {}", line_no,
                              tokens.size(), arity));
    }
    if (bad_col) {
      throw Error(ErrorCode::kNonNumericCell,
                  fmt::format("non-numeric cell at ({},{})", line_no - 1, *bad_col));
    }
    for (std::size_t c = 0; c < values.size(); ++c) {
      if (!std::isfinite(values[c])) {
        throw Error(ErrorCode::kNonFinite,
                    fmt::format("non-finite cell at ({},{})", line_no - 1, c));
      }
    }
    rows.push_back(std::move(values));
  }

  if (rows.size() < 2) {
    throw Error(ErrorCode::kInsufficientRows,
                fmt::format("insufficient rows: need at least 2, got {}", rows.size()));
  }
  if (arity < 2) throw Error(ErrorCode::kNoCovariates, "no covariate columns");
  const std::size_t ycol = y_column.column.value_or(arity - 1);
  if (ycol >= arity) {
    throw Error(ErrorCode::kColumnOutOfRange,
                fmt::format("y column {} out of range for {} columns", ycol, arity));
  }

  const auto n = static_cast<Index>(rows.size());
  const auto d = static_cast<Index>(arity - 1);
  Sample sample{RowMatrix(n, d), Vector(n)};
  for (Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    Index k = 0;
    for (std::size_t c = 0; c < arity; ++c) {
      if (c == ycol) {
        sample.y[i] = row[c];
      } else {
        sample.x(i, k++) = row[c];
      }
    }
  }
  return sample;
}

void save_csv(const std::filesystem::path& path, const Sample& sample) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::kFileNotFound, fmt::format("cannot write file {}", path.string()));
  }
  for (Index i = 0; i < sample.n(); ++i) {
    for (Index k = 0; k < sample.d(); ++k) out << fmt::format("{:.17g},", sample.x(i, k));
    out << fmt::format("{:.17g}\n", sample.y[i]);
  }
}

}  // namespace acbc
