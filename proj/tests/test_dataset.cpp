#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numeric>

#include "acbc/dataset.hpp"
#include "acbc/error.hpp"
#include "oracles.hpp"

namespace acbc {
namespace {

class CsvTest : public ::testing::Test {
 protected:
  std::filesystem::path write(const std::string& body) {
    const auto path = std::filesystem::temp_directory_path() /
                      ("acbc_csv_" + std::to_string(counter_++) + "_" +
                       ::testing::UnitTest::GetInstance()->current_test_info()->name() + ".csv");
    std::ofstream(path) << body;
    paths_.push_back(path);
    return path;
  }
  void TearDown() override {
    for (const auto& p : paths_) std::filesystem::remove(p);
  }

  static ErrorCode code_of(const std::filesystem::path& path,
                           ColumnSelector sel = ColumnSelector::last()) {
    try {
      load_csv(path, sel);
    } catch (const Error& e) {
      return e.code();
    }
    ADD_FAILURE() << "expected an error";
    return ErrorCode::kInvalidArgument;
  }

 private:
  int counter_ = 0;
  std::vector<std::filesystem::path> paths_;
};

TEST_F(CsvTest, ParsesLastColumnAsResponse) {
  const Sample s = load_csv(write("1,1,1\n2,2,2\n3,3,3\n"));
  ASSERT_EQ(s.n(), 3);
  ASSERT_EQ(s.d(), 2);
  EXPECT_EQ(s.x(0, 0), 1);
  EXPECT_EQ(s.x(2, 1), 3);
  EXPECT_EQ(s.y, Vector::LinSpaced(3, 1, 3));
}

TEST_F(CsvTest, HeaderIsDetectedAndIndexSelectsResponse) {
  const Sample s = load_csv(write("y,a,b\n10,1,2\n20,3,4\n"), ColumnSelector::index(0));
  ASSERT_EQ(s.n(), 2);
  EXPECT_EQ(s.y[1], 20);
  EXPECT_EQ(s.x(1, 0), 3);
  EXPECT_EQ(s.x(1, 1), 4);
}

TEST_F(CsvTest, ErrorsCarryDistinctCodes) {
  EXPECT_EQ(code_of("/nonexistent/file.csv"), ErrorCode::kFileNotFound);
  EXPECT_EQ(code_of(write("1,2,3\n")), ErrorCode::kInsufficientRows);
  EXPECT_EQ(code_of(write("1,2\n3,abc\n4,5\n")), ErrorCode::kNonNumericCell);
  EXPECT_EQ(code_of(write("1\n2\n3\n")), ErrorCode::kNoCovariates);
  EXPECT_EQ(code_of(write("1,2\n3,4,5\n")), ErrorCode::kRaggedRow);
  EXPECT_EQ(code_of(write("1,2\n3,4\n"), ColumnSelector::index(2)), ErrorCode::kColumnOutOfRange);
  EXPECT_EQ(code_of(write("1,2\n3,nan\n")), ErrorCode::kNonFinite);
}

TEST_F(CsvTest, NonNumericMessageNamesCell) {
  try {
    load_csv(write("1,2\n3,abc\n"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("non-numeric cell at (1,1)"), std::string::npos)
        << e.what();
  }
}

TEST_F(CsvTest, SaveLoadRoundTrip) {
  std::mt19937_64 rng(3);
  Sample s{testing::uniform_matrix(20, 3, rng), testing::uniform_vector(20, rng)};
  const auto path = write("");
  save_csv(path, s);
  const Sample back = load_csv(path);
  EXPECT_EQ(back.x, s.x);
  EXPECT_EQ(back.y, s.y);
}

TEST(ColumnSelector, Parse) {
  EXPECT_FALSE(ColumnSelector::parse("last").column.has_value());
  EXPECT_EQ(ColumnSelector::parse("3").column, 3u);
  EXPECT_THROW(ColumnSelector::parse("-1"), Error);
  EXPECT_THROW(ColumnSelector::parse("first"), Error);
}

TEST(Validate, RejectsBadSamples) {
  Sample s{RowMatrix::Zero(1, 2), Vector::Zero(1)};
  EXPECT_THROW(validate(s), Error);
  s = Sample{RowMatrix::Zero(3, 2), Vector::Zero(2)};
  EXPECT_THROW(validate(s), Error);
  s = Sample{RowMatrix::Zero(3, 2), Vector::Zero(3)};
  s.x(1, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(validate(s), Error);
}

TEST(Ranks, Examples) {
  EXPECT_EQ(compute_ranks(Vector{{0.3, 0.1, 0.7}}), (RankVector{2, 1, 3}));
  EXPECT_EQ(compute_ranks(Vector{{5, 5, 1}}), (RankVector{3, 3, 1}));
  EXPECT_EQ(compute_ranks(Vector::Constant(6, 9.0)), RankVector(6, 6));
  EXPECT_THROW(compute_ranks(Vector{{1.0, std::nan("")}}), Error);
}

TEST(Ranks, MatchesCountingDefinitionWithTies) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    Vector y = testing::uniform_vector(50 + rep, rng);
    if (rep % 2) y = (y.array() * 5.0).round();  // heavy ties
    const RankVector r = compute_ranks(y);
    EXPECT_EQ(r, testing::ranks_by_counting(y));
    EXPECT_EQ(*std::max_element(r.begin(), r.end()), y.size());
  }
}

TEST(Ranks, InvariantUnderIncreasingTransforms) {
  std::mt19937_64 rng(5);
  const Vector y = testing::uniform_vector(200, rng).array() * 4.0 - 2.0;
  const RankVector base = compute_ranks(y);
  EXPECT_EQ(compute_ranks(y.array().exp().matrix()), base);
  EXPECT_EQ(compute_ranks(y.array().cube().matrix()), base);
  EXPECT_EQ(compute_ranks((3.0 * y.array() + 7.0).matrix()), base);
  const std::int64_t n = y.size();
  EXPECT_EQ(std::accumulate(base.begin(), base.end(), std::int64_t{0}), n * (n + 1) / 2);
}

TEST(MinmaxScale, Examples) {
  RowMatrix x(3, 3);
  x << 2, 7, 0,
       4, 7, 0.25,
       6, 7, 1;
  const ScaledMatrix s = minmax_scale(x);
  EXPECT_EQ(s.xs.col(0), Vector({{0, 0.5, 1}}));
  EXPECT_EQ(s.xs.col(1), Vector::Zero(3));
  EXPECT_EQ(s.scales[1], 1.0);
  EXPECT_EQ(s.xs.col(2), x.col(2));
  EXPECT_EQ(s.offsets[2], 0.0);
  EXPECT_EQ(s.scales[2], 1.0);
  EXPECT_EQ(s.apply(x), s.xs);
}

TEST(MinmaxScale, IdempotentAndInUnitCube) {
  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 10; ++rep) {
    const RowMatrix x = testing::uniform_matrix(40, 4, rng).array() * 100.0 - 30.0;
    const ScaledMatrix once = minmax_scale(x);
    EXPECT_GE(once.xs.minCoeff(), 0.0);
    EXPECT_LE(once.xs.maxCoeff(), 1.0);
    const ScaledMatrix twice = minmax_scale(once.xs);
    EXPECT_LE((twice.xs - once.xs).cwiseAbs().maxCoeff(), 1e-12);
  }
}

}  // namespace
}  // namespace acbc
