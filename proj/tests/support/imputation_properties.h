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

// Property checks shared by the imputation unit tests and the acceptance
// suite: observed-cell preservation, finiteness, determinism, donor support
// and stopping-rule bookkeeping on random small instances.

#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "misspred/imputation.h"
#include "support/generators.h"

namespace misspred::testing {

struct ImputationInstance {
  Matrix x;  // complete truth
  MissMask mask;
  std::uint64_t seed;
};

// n <= 40, p <= 6, missing rate in [0.05, 0.4]; every third instance has
// heavily tied values.
inline ImputationInstance random_instance(Rng& rng, int index) {
  const Index n = std::uniform_int_distribution<Index>(8, 40)(rng);
  const Index p = std::uniform_int_distribution<Index>(2, 6)(rng);
  Matrix x = random_matrix(n, p, rng, -3.0, 3.0);
  if (index % 3 == 0) x = (x.array() * 2.0).round() / 2.0;
  const double rate = std::uniform_real_distribution<double>(0.05, 0.4)(rng);
  auto mask = random_mask(n, p, rate, rng);
  return {std::move(x), std::move(mask), rng()};
}

// Learner sizes small enough for hundreds of instances.
inline ImputeConfig property_config(ImputeMethod method, std::uint64_t seed) {
  ImputeConfig c;
  c.method = method;
  c.seed = seed;
  c.max_iter = 5;
  c.forest.m_trees = 25;
  c.sgb.n_rounds = 40;
  c.xgb.n_rounds = 40;
  return c;
}

inline constexpr ImputeMethod kAllMethods[] = {ImputeMethod::mean,      ImputeMethod::miss_forest,
                                               ImputeMethod::gbm_impute, ImputeMethod::xgb_impute,
                                               ImputeMethod::mice_norm, ImputeMethod::mice_pmm,
                                               ImputeMethod::mice_rf};

inline bool is_iterative(ImputeMethod m) {
  return m == ImputeMethod::miss_forest || m == ImputeMethod::gbm_impute || m == ImputeMethod::xgb_impute;
}

// Returns a description of every violated property; empty when all hold.
inline std::vector<std::string> check_imputation_properties(const ImputationInstance& inst, ImputeMethod method) {
  std::vector<std::string> failures;
  auto fail = [&](const std::string& what) {
    std::ostringstream os;
    os << to_string(method) << " (n=" << inst.x.rows() << ", p=" << inst.x.cols() << ", seed=" << inst.seed
       << "): " << what;
    failures.push_back(os.str());
  };
  const Matrix masked = inst.mask.apply(inst.x);
  const auto config = property_config(method, inst.seed);
  const auto result = impute(masked, inst.mask, config);
  const Matrix& out = result.completed;
  if (out.rows() != inst.x.rows() || out.cols() != inst.x.cols()) {
    fail("shape changed");
    return failures;
  }
  if (!out.allFinite()) fail("non-finite imputed value");
  for (Index j = 0; j < out.cols(); ++j) {
    const auto support = observed_values(inst.x, inst.mask, j);
    double observed_mean = 0.0;
    for (Index i = 0; i < out.rows(); ++i)
      if (inst.mask.observed(i, j)) observed_mean += inst.x(i, j);
    observed_mean /= static_cast<double>(out.rows() - inst.mask.missing_in_col(j));
    for (Index i = 0; i < out.rows(); ++i) {
      if (inst.mask.observed(i, j)) {
        if (!(out(i, j) == inst.x(i, j))) fail("observed cell changed");
        continue;
      }
      if ((method == ImputeMethod::mice_pmm || method == ImputeMethod::mice_rf) && !support.contains(out(i, j))) {
        fail("donor value not observed in its column");
      }
      if (method == ImputeMethod::mean && std::abs(out(i, j) - observed_mean) > 1e-12 * (1.0 + std::abs(observed_mean))) {
        fail("mean fill differs from the observed mean");
      }
    }
  }
  if (static_cast<int>(result.delta_trace.size()) != result.iterations_run) fail("trace length != iterations_run");

  const auto again = impute(masked, inst.mask, config);
  if (!bitwise_equal(again.completed, out)) fail("not deterministic");

  if (is_iterative(method) && result.stopped_on_increase) {
    const auto& t = result.delta_trace;
    if (t.size() < 2 || !(t.back() > t[t.size() - 2])) fail("stopped without an increase in the change statistic");
    // The returned iterate must be the one before the increase.
    auto shorter = config;
    shorter.max_iter = result.iterations_run - 1;
    if (!bitwise_equal(impute(masked, inst.mask, shorter).completed, out)) fail("returned the diverging iterate");
  }
  return failures;
}

}  // namespace misspred::testing
