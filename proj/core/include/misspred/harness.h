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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "misspred/config.h"

namespace misspred {

// One line of results.csv. Optional fields are written as NA.
struct ResultRow {
  std::string experiment;
  Index iterate = 0;
  double missing_rate = 0.0;
  std::string imputer;  // imputer name, "none" (complete case), "true" or "internal"
  std::string method;   // predictor name or interval kind
  Index test_point = 0;
  std::optional<double> nrmse;
  std::optional<double> cv_mse;
  std::optional<bool> covered;
  std::optional<double> length;
  std::optional<double> lower;
  std::optional<double> upper;
  std::optional<double> wall_time_ms;
  std::uint64_t seed = 0;  // iterate seed; reruns the row's iterate
};

// Seed of iterate `iterate`; every stage of the iterate derives from it.
std::uint64_t iterate_seed(std::uint64_t master_seed, Index iterate);

std::vector<ResultRow> run_empirical_accuracy(const ExperimentConfig& config);
std::vector<ResultRow> run_synthetic_intervals(const ExperimentConfig& config);
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

inline constexpr std::string_view kResultsHeader =
    "experiment,iterate,missing_rate,imputer,method,test_point,nrmse,cv_mse,covered,length,lower,upper,"
    "wall_time_ms,seed";

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);

struct RunOutput {
  std::filesystem::path results_csv;
  std::filesystem::path manifest;
  std::size_t row_count = 0;
};

// Runs the experiment and writes results.csv and manifest.txt into
// config.output_dir (created if needed).
RunOutput run_and_write(const ExperimentConfig& config);

std::string_view version();

}  // namespace misspred
