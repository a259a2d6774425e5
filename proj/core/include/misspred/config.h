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
#include <string>
#include <string_view>
#include <vector>

#include "misspred/imputation.h"
#include "misspred/intervals.h"
#include "misspred/predictor.h"
#include "misspred/synthgen.h"

namespace misspred {

// Flat sectioned key-value text:
//
//   # comment
//   [section]
//   key = value
//
// Keys before the first section header belong to section "". Duplicate keys
// are errors.
class KeyValueFile {
 public:
  struct Entry {
    std::string section;
    std::string key;
    std::string value;
    int line = 0;
  };

  static KeyValueFile parse(std::string_view text);
  static KeyValueFile load(const std::filesystem::path& path);

  const std::vector<Entry>& entries() const { return entries_; }
  const std::string& text() const { return text_; }

 private:
  std::vector<Entry> entries_;
  std::string text_;
};

enum class ExperimentKind { empirical_accuracy, synthetic_intervals };

std::string_view to_string(ExperimentKind kind);

struct DatasetSource {
  std::filesystem::path path;
  CsvOptions csv;
  bool standardize = false;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::synthetic_intervals;
  // Empirical experiments read this file; otherwise data are synthetic.
  std::optional<DatasetSource> dataset;
  SynthConfig synthetic;

  std::vector<double> missing_rates{0.1, 0.2, 0.3};
  std::vector<ImputeMethod> imputers{ImputeMethod::miss_forest};
  std::vector<PredictorKind> predictors{PredictorKind::forest};
  std::vector<IntervalKind> interval_kinds{IntervalKind::emp_q, IntervalKind::res_var, IntervalKind::weighted};

  Index mc_iterates = 0;  // 0 picks the per-experiment default (50 / 200)
  double level = 0.95;
  int k_folds = 5;
  std::uint64_t master_seed = 1;
  std::filesystem::path output_dir = "results";
  Index test_points_per_iterate = 1;
  bool true_baseline = true;         // empirical: one complete-data row per predictor
  bool xgb_internal = true;          // empirical: xgb trained on the masked data
  bool complete_case_control = true; // synthetic: r = 0 rows without imputation
  bool record_wall_time = false;
  int threads = 1;

  PredictorConfig predictor;  // prediction models, including the interval forest
  ImputeConfig imputation;    // method is set per imputer

  std::string source_text;  // verbatim config text for the manifest

  Index iterates() const;
};

inline constexpr Index kDefaultEmpiricalIterates = 50;
inline constexpr Index kDefaultIntervalIterates = 200;

// Relative dataset paths resolve against `base_dir`. Throws ConfigError for
// unknown sections or keys, malformed values, and failed validation.
ExperimentConfig parse_experiment_config(const KeyValueFile& file, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

void validate(const ExperimentConfig& config);

}  // namespace misspred
