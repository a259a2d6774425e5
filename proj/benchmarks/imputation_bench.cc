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

#include <benchmark/benchmark.h>

#include "misspred/amputation.h"
#include "misspred/imputation.h"
#include "misspred/synthgen.h"

namespace misspred {
namespace {

struct Problem {
  DataMatrix data;
  MissMask mask;
  Matrix masked;
};

Problem bench_problem(Index n, double rate) {
  SynthConfig c;
  c.n = n;
  c.cov = CovarianceSpec::with_defaults(CovarianceKind::ar_pos, 10);
  c.model = RegressionModel::with_default_beta(RegressionKind::linear, 10);
  c.seed = 1;
  auto data = generate(c).data;
  auto mask = ampute_mcar(data, {rate, 2});
  auto masked = mask.apply(data.x);
  return {std::move(data), std::move(mask), std::move(masked)};
}

void BM_Impute(benchmark::State& state, ImputeMethod method) {
  const auto p = bench_problem(state.range(0), 0.2);
  ImputeConfig cfg;
  cfg.method = method;
  cfg.seed = 5;
  int iterations = 0;
  for (auto _ : state) {
    const auto r = impute(p.masked, p.mask, cfg);
    iterations = r.iterations_run;
    benchmark::DoNotOptimize(r.completed.data());
  }
  state.counters["sweeps"] = iterations;
}
BENCHMARK_CAPTURE(BM_Impute, miss_forest, ImputeMethod::miss_forest)->Arg(200)->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Impute, gbm_impute, ImputeMethod::gbm_impute)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Impute, xgb_impute, ImputeMethod::xgb_impute)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Impute, mice_norm, ImputeMethod::mice_norm)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Impute, mice_pmm, ImputeMethod::mice_pmm)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Impute, mice_rf, ImputeMethod::mice_rf)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace misspred
