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

#pragma once

#include <span>
#include <vector>

namespace misspred {

// Inverse of the standard normal CDF. Acklam's rational approximation
// polished with one Halley step; absolute error well below 1e-8 on (0, 1).
double normal_quantile(double p);

// Quantile of Student's t distribution with `df` degrees of freedom.
double student_t_quantile(double p, double df);

// Type-1 empirical quantile (left-continuous generalized inverse of the
// empirical CDF): the smallest sample value v with F_n(v) >= p.
// `sorted` must be ascending and non-empty.
double quantile_type1_sorted(std::span<const double> sorted, double p);
double quantile_type1(std::vector<double> values, double p);

// min{ values[i] : sum_{j : values[j] <= values[i]} weights[j] >= p }.
// Weights must be non-negative; ties in `values` are grouped.
double weighted_quantile_type1(std::span<const double> values,
                               std::span<const double> weights, double p);

double mean(std::span<const double> values);
double median(std::vector<double> values);
// Unbiased (n - 1) sample variance; 0 for fewer than two values.
double sample_variance(std::span<const double> values);

// Cumulative-probability comparisons are made with this slack so that sums of
// equal weights like 20 * (1/20) still reach 1.
inline constexpr double kProbabilitySlack = 1e-12;

}  // namespace misspred
