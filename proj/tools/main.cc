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

// Command-line runner for the Monte-Carlo experiments.
//
//   misspred run --config exp.cfg [--seed N] [--iterates N] [--out DIR] [--max-rows N]
//   misspred validate --config exp.cfg
//
// Exit status: 0 success, 2 configuration error, 1 anything else.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "misspred/config.h"
#include "misspred/harness.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct RunOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<misspred::Index> iterates;
  std::optional<std::string> out_dir;
  std::optional<misspred::Index> max_rows;
};

misspred::ExperimentConfig load(const RunOptions& opts) {
  auto config = misspred::load_experiment_config(opts.config_path);
  if (opts.seed) {
    config.master_seed = *opts.seed;
    config.synthetic.seed = *opts.seed;
  }
  if (opts.iterates) config.mc_iterates = *opts.iterates;
  if (opts.out_dir) config.output_dir = *opts.out_dir;
  if (opts.max_rows) {
    if (!config.dataset) throw misspred::ConfigError("--max-rows needs a [dataset] section");
    config.dataset->csv.max_rows = *opts.max_rows;
  }
  misspred::validate(config);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte-Carlo experiments for imputation and forest prediction intervals"};
  app.set_version_flag("--version", std::string(misspred::version()));
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run = app.add_subcommand("run", "run an experiment and write results.csv and manifest.txt");
  run->add_option("--config", run_opts.config_path, "experiment config file")->required();
  run->add_option("--seed", run_opts.seed, "override master_seed");
  run->add_option("--iterates", run_opts.iterates, "override mc_iterates")->check(CLI::PositiveNumber);
  run->add_option("--out", run_opts.out_dir, "override output_dir");
  run->add_option("--max-rows", run_opts.max_rows, "cap the number of dataset rows read")
      ->check(CLI::PositiveNumber);

  RunOptions validate_opts;
  auto* check = app.add_subcommand("validate", "parse and validate a config without running");
  check->add_option("--config", validate_opts.config_path, "experiment config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*check) {
      const auto config = load(validate_opts);
      std::cout << "ok: " << misspred::to_string(config.experiment) << ", " << config.iterates()
                << " iterates\n";
      return kExitOk;
    }
    const auto config = load(run_opts);
    const auto out = misspred::run_and_write(config);
    std::cout << "wrote " << out.row_count << " rows to " << out.results_csv.string() << '\n';
    return kExitOk;
  } catch (const misspred::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
