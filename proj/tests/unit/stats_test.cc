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

#include <unordered_set>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "misspred/seeding.h"
#include "misspred/stats.h"
#include "support/generators.h"

namespace misspred {
namespace {

TEST(DeriveSeed, SameInputsSameOutput) {
  EXPECT_EQ(derive_seed(42, 7, "impute"), derive_seed(42, 7, "impute"));
  EXPECT_EQ(derive_seed(99, 3), derive_seed(99, 3));
}

TEST(DeriveSeed, SensitiveToEveryArgument) {
  const auto base = derive_seed(1, 1, "a");
  EXPECT_NE(base, derive_seed(2, 1, "a"));
  EXPECT_NE(base, derive_seed(1, 2, "a"));
  EXPECT_NE(base, derive_seed(1, 1, "b"));
  EXPECT_NE(derive_seed(5, 0), derive_seed(5, 1));
}

// 2e6 64-bit values: the birthday bound puts P(any collision) near 1e-7.
TEST(DeriveSeed, NoCollisionsOverAMillionTagPairs) {
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(2'100'000);
  for (std::uint64_t k = 0; k < 1'000'000; ++k) {
    const auto master = k / 1000;
    const auto iterate = k % 1000;
    const auto a = derive_seed(master, iterate, "ampute");
    const auto b = derive_seed(master, iterate, "impute");
    ASSERT_NE(a, b) << "pair " << k;
    seen.insert(a);
    seen.insert(b);
  }
  EXPECT_EQ(seen.size(), 2'000'000u);
}

TEST(NormalQuantile, MatchesBoostWithin1e8) {
  boost::math::normal_distribution<double> nd;
  for (double p = 1e-10; p < 1.0; p = p < 0.01 ? p * 3.0 : p + 0.0037) {
    EXPECT_NEAR(normal_quantile(p), boost::math::quantile(nd, p), 1e-8) << "p = " << p;
  }
  for (double p : {1e-15, 1e-6, 0.02425, 0.5, 0.97575, 1.0 - 1e-6}) {
    EXPECT_NEAR(normal_quantile(p), boost::math::quantile(nd, p), 1e-8) << "p = " << p;
  }
}

TEST(NormalQuantile, NinetySevenPointFivePercent) {
  EXPECT_NEAR(normal_quantile(0.975), 1.959964, 1e-5);
  EXPECT_EQ(normal_quantile(0.5), 0.0);
}

TEST(NormalQuantile, EndpointsAndOutOfRange) {
  EXPECT_EQ(normal_quantile(0.0), -INFINITY);
  EXPECT_EQ(normal_quantile(1.0), INFINITY);
  EXPECT_THROW(normal_quantile(-0.1), std::invalid_argument);
  EXPECT_THROW(normal_quantile(1.5), std::invalid_argument);
}

TEST(StudentTQuantile, KnownValues) {
  EXPECT_NEAR(student_t_quantile(0.975, 10.0), 2.2281388519649, 1e-10);
  boost::math::students_t_distribution<double> t(988.0);
  EXPECT_NEAR(student_t_quantile(0.975, 988.0), boost::math::quantile(t, 0.975), 1e-12);
}

TEST(QuantileType1, TwoPointHandCase) {
  EXPECT_EQ(quantile_type1({-1.0, 1.0}, 0.25), -1.0);
  EXPECT_EQ(quantile_type1({-1.0, 1.0}, 0.5), -1.0);
  EXPECT_EQ(quantile_type1({-1.0, 1.0}, 0.75), 1.0);
  EXPECT_EQ(quantile_type1({-1.0, 1.0}, 0.0), -1.0);
  EXPECT_EQ(quantile_type1({-1.0, 1.0}, 1.0), 1.0);
}

TEST(QuantileType1, MatchesBruteForceOnRandomSamples) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = std::uniform_int_distribution<int>(1, 40)(rng);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& e : v) e = std::round(std::normal_distribution<double>()(rng) * 4.0) / 4.0;  // ties
    for (double p : {0.0, 0.025, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.975, 1.0}) {
      ASSERT_EQ(quantile_type1(v, p), testing::brute_type1(v, p)) << "n=" << n << " p=" << p;
    }
    // Exact multiples of 1/n land on the sample value at that rank.
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    for (int k = 1; k <= n; ++k) {
      ASSERT_EQ(quantile_type1(v, static_cast<double>(k) / n), sorted[static_cast<std::size_t>(k - 1)]);
    }
  }
}

TEST(WeightedQuantile, MatchesBruteForce) {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = std::uniform_int_distribution<int>(1, 25)(rng);
    std::vector<double> y(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      y[static_cast<std::size_t>(i)] = std::uniform_int_distribution<int>(0, 8)(rng);
      w[static_cast<std::size_t>(i)] = std::uniform_int_distribution<int>(0, 3)(rng);
      total += w[static_cast<std::size_t>(i)];
    }
    if (total == 0.0) continue;
    for (auto& e : w) e /= total;
    for (double p : {0.025, 0.1, 0.5, 0.9, 0.975, 1.0}) {
      ASSERT_EQ(weighted_quantile_type1(y, w, p), testing::brute_weighted_quantile(y, w, p));
    }
  }
}

TEST(Summaries, MeanMedianVariance) {
  const std::vector<double> v{1.0, 2.0, 4.0, 9.0};
  EXPECT_DOUBLE_EQ(mean(v), 4.0);
  EXPECT_DOUBLE_EQ(median(v), 3.0);
  EXPECT_DOUBLE_EQ(sample_variance(v), (9.0 + 4.0 + 0.0 + 25.0) / 3.0);
  EXPECT_EQ(sample_variance(std::vector<double>{5.0}), 0.0);
  EXPECT_DOUBLE_EQ(median({3.0, 1.0, 2.0}), 2.0);
}

}  // namespace
}  // namespace misspred
