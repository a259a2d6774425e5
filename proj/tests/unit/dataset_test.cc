/*
 * Copyright 2026 The misspred Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>

#include "misspred/dataset.h"
#include "support/generators.h"

namespace misspred {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() / (std::string("misspred_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path write(const std::string& name, const std::string& text) const {
    const auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

TEST(LoadCsv, OneRowFile) {
  TempDir dir;
  const auto data = load_csv(dir.write("one.csv", "a,b\n1,2\n"), {.response = "b"});
  EXPECT_EQ(data.rows(), 1);
  EXPECT_EQ(data.cols(), 1);
  EXPECT_EQ(data.y(0), 2.0);
  EXPECT_EQ(data.x(0, 0), 1.0);
  EXPECT_EQ(data.col_names, std::vector<std::string>{"a"});
}

TEST(LoadCsv, ResponseInTheMiddleKeepsCovariateOrder) {
  TempDir dir;
  const auto data = load_csv(dir.write("m.csv", "u,target,v\n1,10,2\n3,30,4\n"), {.response = "target"});
  EXPECT_EQ(data.col_names, (std::vector<std::string>{"u", "v"}));
  EXPECT_EQ(data.x(1, 0), 3.0);
  EXPECT_EQ(data.x(1, 1), 4.0);
  EXPECT_EQ(data.y(1), 30.0);
}

TEST(LoadCsv, NoTrailingNewlineAndCrlf) {
  TempDir dir;
  const auto data = load_csv(dir.write("c.csv", "a,b\r\n1.5,2\r\n-3e2,4"), {.response = "b"});
  ASSERT_EQ(data.rows(), 2);
  EXPECT_EQ(data.x(1, 0), -300.0);
}

TEST(LoadCsv, ParseFailureReportsRowAndColumn) {
  TempDir dir;
  const auto p = dir.write("bad.csv", "a,b,c\n1,2,3\n4,x5,6\n");
  try {
    load_csv(p, {.response = "c"});
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 3);
    EXPECT_EQ(e.column(), 2);
  }
}

TEST(LoadCsv, MissingResponseCellIsAnError) {
  TempDir dir;
  EXPECT_THROW(load_csv(dir.write("m.csv", "a,b\n1,\n"), {.response = "b"}), ParseError);
}

TEST(LoadCsv, EmptyFileIsAnError) {
  TempDir dir;
  EXPECT_THROW(load_csv(dir.write("e.csv", ""), {.response = "b"}), ParseError);
}

TEST(LoadCsv, NonFiniteCellsAreRejected) {
  TempDir dir;
  EXPECT_THROW(load_csv(dir.write("n.csv", "a,b\nnan,1\n"), {.response = "b"}), ParseError);
  EXPECT_THROW(load_csv(dir.write("i.csv", "a,b\n1,inf\n"), {.response = "b"}), ParseError);
}

TEST(LoadCsv, UnknownResponseColumnAndRaggedRows) {
  TempDir dir;
  EXPECT_THROW(load_csv(dir.write("r.csv", "a,b\n1,2\n"), {.response = "zz"}), ParseError);
  EXPECT_THROW(load_csv(dir.write("g.csv", "a,b\n1,2,3\n"), {.response = "b"}), ParseError);
}

TEST(LoadCsv, MaxRowsTruncates) {
  TempDir dir;
  std::string text = "x1,x2,x3,x4,pe\n";
  for (int i = 0; i < 10000; ++i) text += std::to_string(i) + ",1,2,3," + std::to_string(i * 2) + "\n";
  const auto data = load_csv(dir.write("pp.csv", text), {.response = "pe", .max_rows = 9568});
  EXPECT_EQ(data.rows(), 9568);
  EXPECT_EQ(data.cols(), 4);
  EXPECT_EQ(data.y(9567), 2.0 * 9567);
}

TEST(LoadCsv, TabDelimiter) {
  TempDir dir;
  const auto data = load_csv(dir.write("t.tsv", "a\tb\n1\t2\n"), {.response = "a", .delimiter = '\t'});
  EXPECT_EQ(data.y(0), 1.0);
  EXPECT_EQ(data.x(0, 0), 2.0);
}

// The UCI files are not redistributed; point MISSPRED_UCI_DIR at a directory
// holding airfoil.csv (response "sound") and power_plant.csv (response "pe").
TEST(LoadCsv, UciShapesWhenAvailable) {
  const char* dir = std::getenv("MISSPRED_UCI_DIR");
  if (dir == nullptr) GTEST_SKIP() << "MISSPRED_UCI_DIR not set";
  const fs::path root(dir);
  const auto airfoil = load_csv(root / "airfoil.csv", {.response = "sound"});
  EXPECT_EQ(airfoil.rows(), 1503);
  EXPECT_EQ(airfoil.cols(), 5);
  const auto plant = load_csv(root / "power_plant.csv", {.response = "pe", .max_rows = 9568});
  EXPECT_EQ(plant.rows(), 9568);
  EXPECT_EQ(plant.cols(), 4);
}

TEST(WriteCsv, RoundTripIsBitwise) {
  TempDir dir;
  Rng rng(3);
  DataMatrix data;
  data.x = testing::random_matrix(50, 4, rng, -1e6, 1e6);
  data.x(0, 0) = 1e-300;
  data.x(1, 1) = -std::numeric_limits<double>::denorm_min();
  data.x(2, 2) = 0.1 + 0.2;
  data.x(3, 3) = std::numeric_limits<double>::max();
  data.y = testing::random_vector(50, rng);
  data.col_names = {"a", "b", "c", "d"};
  const auto p = dir.path() / "rt.csv";
  write_csv(p, data, "resp");
  const auto back = load_csv(p, {.response = "resp"});
  EXPECT_TRUE(testing::bitwise_equal(back.x, data.x));
  EXPECT_TRUE(testing::bitwise_equal(back.y, data.y));
  EXPECT_EQ(back.col_names, data.col_names);
}

TEST(MissMaskInvariant, RejectsFullyMissingRowOrColumn) {
  MaskArray row_gap(2, 2);
  row_gap << false, false, true, true;
  EXPECT_THROW(MissMask{row_gap}, std::invalid_argument);
  MaskArray col_gap(2, 2);
  col_gap << false, true, false, true;
  EXPECT_THROW(MissMask{col_gap}, std::invalid_argument);
}

TEST(MissMaskInvariant, CountsAndApply) {
  MaskArray obs(2, 3);
  obs << true, false, true, true, true, false;
  const MissMask mask(obs);
  EXPECT_EQ(mask.missing_count(), 2);
  EXPECT_EQ(mask.missing_in_col(1), 1);
  const Matrix x = Matrix::Ones(2, 3);
  const Matrix masked = mask.apply(x);
  EXPECT_TRUE(std::isnan(masked(0, 1)));
  EXPECT_TRUE(std::isnan(masked(1, 2)));
  EXPECT_EQ(masked(1, 1), 1.0);
}

TEST(DataMatrixValidate, NonFiniteOnlyUnderMask) {
  DataMatrix d{Matrix::Ones(2, 2), Vector::Ones(2), {"a", "b"}};
  d.x(0, 1) = NAN;
  EXPECT_THROW(d.validate(), std::invalid_argument);
  MaskArray obs(2, 2);
  obs << true, false, true, true;
  const MissMask mask(obs);
  EXPECT_NO_THROW(d.validate(&mask));
  d.y(1) = NAN;
  EXPECT_THROW(d.validate(&mask), std::invalid_argument);
}

TEST(MakeFolds, TenIntoFive) {
  const auto f = make_folds(10, 5, 1);
  for (int k = 0; k < 5; ++k) EXPECT_EQ(f.fold_size(k), 2);
}

TEST(MakeFolds, ElevenIntoFive) {
  const auto f = make_folds(11, 5, 1);
  std::vector<Index> sizes;
  for (int k = 0; k < 5; ++k) sizes.push_back(f.fold_size(k));
  std::sort(sizes.begin(), sizes.end());
  EXPECT_EQ(sizes, (std::vector<Index>{2, 2, 2, 2, 3}));
}

TEST(MakeFolds, Deterministic) {
  EXPECT_EQ(make_folds(37, 5, 9).fold_of, make_folds(37, 5, 9).fold_of);
  EXPECT_NE(make_folds(37, 5, 9).fold_of, make_folds(37, 5, 10).fold_of);
}

TEST(MakeFolds, Errors) {
  EXPECT_THROW(make_folds(4, 5, 0), std::invalid_argument);
  EXPECT_THROW(make_folds(10, 1, 0), std::invalid_argument);
}

TEST(MakeFolds, PartitionPropertyOnRandomSizes) {
  Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const Index n = std::uniform_int_distribution<Index>(2, 200)(rng);
    const int k = std::uniform_int_distribution<int>(2, static_cast<int>(std::min<Index>(n, 12)))(rng);
    const auto f = make_folds(n, k, rng());
    std::vector<int> seen(static_cast<std::size_t>(n), 0);
    for (int fold = 0; fold < k; ++fold) {
      const auto test = f.test_rows(fold);
      const auto train = f.train_rows(fold);
      ASSERT_EQ(static_cast<Index>(test.size() + train.size()), n);
      ASSERT_LE(std::abs(static_cast<double>(test.size()) - static_cast<double>(n) / k), 1.0);
      for (auto i : test) ++seen[static_cast<std::size_t>(i)];
    }
    for (int c : seen) ASSERT_EQ(c, 1);
  }
}

TEST(Standardize, UnitVarianceZeroMean) {
  Rng rng(5);
  DataMatrix d{testing::random_matrix(30, 3, rng, 5, 9), testing::random_vector(30, rng), {"a", "b", "c"}};
  d.x.col(2).setConstant(4.0);
  const auto s = standardize_covariates(d);
  for (Index j = 0; j < 2; ++j) {
    EXPECT_NEAR(s.x.col(j).mean(), 0.0, 1e-12);
    EXPECT_NEAR((s.x.col(j).array() - s.x.col(j).mean()).square().sum() / 29.0, 1.0, 1e-12);
  }
  EXPECT_TRUE(s.x.col(2).isZero());
  EXPECT_EQ(s.y, d.y);
}

}  // namespace
}  // namespace misspred
