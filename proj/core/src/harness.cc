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

#include "misspred/harness.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <thread>

#include "misspred/amputation.h"
#include "misspred/dataset.h"
#include "misspred/intervals.h"
#include "misspred/metrics.h"
#include "misspred/seeding.h"

namespace misspred {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

// Runs body(i) for i in [0, count) on up to `threads` workers and returns the
// rows concatenated in index order.
std::vector<ResultRow> run_iterates(Index count, int threads,
                                    const std::function<std::vector<ResultRow>(Index)>& body) {
  std::vector<std::vector<ResultRow>> per_iterate(static_cast<std::size_t>(count));
  auto workers = threads <= 0 ? static_cast<int>(std::max(1u, std::thread::hardware_concurrency())) : threads;
  workers = static_cast<int>(std::min<Index>(workers, count));
  if (workers <= 1) {
    for (Index i = 0; i < count; ++i) per_iterate[static_cast<std::size_t>(i)] = body(i);
  } else {
    std::atomic<Index> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
      std::vector<std::jthread> pool;
      for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          for (Index i = next++; i < count; i = next++) {
            try {
              per_iterate[static_cast<std::size_t>(i)] = body(i);
            } catch (...) {
              std::lock_guard lock(failure_mutex);
              if (!failure) failure = std::current_exception();
              next = count;
            }
          }
        });
      }
    }
    if (failure) std::rethrow_exception(failure);
  }
  std::vector<ResultRow> rows;
  for (auto& chunk : per_iterate) {
    rows.insert(rows.end(), std::make_move_iterator(chunk.begin()), std::make_move_iterator(chunk.end()));
  }
  return rows;
}

std::optional<double> try_nrmse(const Matrix& imputed, const Matrix& truth, const MissMask& mask) {
  if (mask.missing_count() == 0) return std::nullopt;
  try {
    return nrmse(imputed, truth, mask);
  } catch (const ZeroDenominatorError&) {
    return std::nullopt;
  }
}

std::vector<double> row_of(const Matrix& x, Index i) {
  std::vector<double> out(static_cast<std::size_t>(x.cols()));
  for (Index j = 0; j < x.cols(); ++j) out[static_cast<std::size_t>(j)] = x(i, j);
  return out;
}

DataMatrix load_dataset(const DatasetSource& source) {
  auto data = load_csv(source.path, source.csv);
  if (source.standardize) data = standardize_covariates(data);
  data.validate();
  return data;
}

void put_double(std::ostream& out, double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, ptr - buf);
}

void put_optional(std::ostream& out, const std::optional<double>& v) {
  if (v) {
    put_double(out, *v);
  } else {
    out << "NA";
  }
}

}  // namespace

std::string_view version() { return "0.1.0"; }

std::uint64_t iterate_seed(std::uint64_t master_seed, Index iterate) {
  return derive_seed(master_seed, static_cast<std::uint64_t>(iterate), "iterate");
}

std::vector<ResultRow> run_empirical_accuracy(const ExperimentConfig& config) {
  validate(config);
  const std::string experiment(to_string(ExperimentKind::empirical_accuracy));
  std::optional<DataMatrix> fixed_data;
  std::optional<SyntheticProblem> problem;
  if (config.dataset) {
    fixed_data = load_dataset(*config.dataset);
  } else {
    problem = SyntheticProblem::create(config.synthetic);
  }
  auto data_for = [&](std::uint64_t seed) {
    return fixed_data ? *fixed_data : problem->sample(config.synthetic.n, derive_seed(seed, 0, "data"));
  };
  auto folds_for = [&](const DataMatrix& data, std::uint64_t seed) {
    return make_folds(data.rows(), config.k_folds, derive_seed(seed, 0, "folds"));
  };
  auto predictor_config = [&](PredictorKind kind) {
    PredictorConfig pc = config.predictor;
    pc.kind = kind;
    pc.forest.threads = 1;
    return pc;
  };

  auto body = [&](Index iterate) {
    std::vector<ResultRow> rows;
    const auto seed = iterate_seed(config.master_seed, iterate);
    const DataMatrix data = data_for(seed);
    const auto folds = folds_for(data, seed);

    for (std::size_t ri = 0; ri < config.missing_rates.size(); ++ri) {
      const double rate = config.missing_rates[ri];
      const auto mask = ampute_mcar(data, {rate, derive_seed(seed, ri, "ampute")});
      const Matrix masked = mask.apply(data.x);

      for (const auto method : config.imputers) {
        const auto started = Clock::now();
        auto icfg = config.imputation;
        icfg.method = method;
        icfg.seed = derive_seed(seed, ri, "impute:" + std::string(to_string(method)));
        const auto imputed = impute(masked, mask, icfg);
        const auto error = try_nrmse(imputed.completed, data.x, mask);
        const DataMatrix completed{imputed.completed, data.y, data.col_names};
        const double impute_ms = elapsed_ms(started);

        for (const auto kind : config.predictors) {
          const auto fit_started = Clock::now();
          ResultRow row;
          row.experiment = experiment;
          row.iterate = iterate;
          row.missing_rate = rate;
          row.imputer = std::string(to_string(method));
          row.method = std::string(to_string(kind));
          row.nrmse = error;
          row.cv_mse = cv_mse(completed, predictor_config(kind), folds,
                              derive_seed(seed, ri, "cv:" + std::string(to_string(kind))));
          if (config.record_wall_time) row.wall_time_ms = impute_ms + elapsed_ms(fit_started);
          row.seed = seed;
          rows.push_back(std::move(row));
        }
      }

      if (config.xgb_internal) {
        const auto started = Clock::now();
        ResultRow row;
        row.experiment = experiment;
        row.iterate = iterate;
        row.missing_rate = rate;
        row.imputer = "internal";
        row.method = std::string(to_string(PredictorKind::xgb));
        const DataMatrix raw{masked, data.y, data.col_names};
        row.cv_mse = cv_mse(raw, predictor_config(PredictorKind::xgb), folds,
                            derive_seed(seed, ri, "cv:" + row.method));
        if (config.record_wall_time) row.wall_time_ms = elapsed_ms(started);
        row.seed = seed;
        rows.push_back(std::move(row));
      }
    }
    return rows;
  };

  auto rows = run_iterates(config.iterates(), config.threads, body);

  if (config.true_baseline) {
    const auto seed = iterate_seed(config.master_seed, 0);
    const DataMatrix data = data_for(seed);
    const auto folds = folds_for(data, seed);
    for (const auto kind : config.predictors) {
      const auto started = Clock::now();
      ResultRow row;
      row.experiment = experiment;
      row.iterate = 0;
      row.missing_rate = 0.0;
      row.imputer = "true";
      row.method = std::string(to_string(kind));
      row.cv_mse = cv_mse(data, predictor_config(kind), folds, derive_seed(seed, 0, "cv:true:" + row.method));
      if (config.record_wall_time) row.wall_time_ms = elapsed_ms(started);
      row.seed = seed;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<ResultRow> run_synthetic_intervals(const ExperimentConfig& config) {
  validate(config);
  const std::string experiment(to_string(ExperimentKind::synthetic_intervals));
  const auto problem = SyntheticProblem::create(config.synthetic);

  std::vector<double> rates = config.missing_rates;
  if (config.complete_case_control && std::find(rates.begin(), rates.end(), 0.0) == rates.end()) {
    rates.insert(rates.begin(), 0.0);
  }
  const auto& kinds = config.interval_kinds;
  const bool need_forest =
      std::any_of(kinds.begin(), kinds.end(), [](IntervalKind k) { return k != IntervalKind::ols; });
  const bool need_stats = std::any_of(kinds.begin(), kinds.end(), [](IntervalKind k) {
    return k != IntervalKind::ols && k != IntervalKind::qrf;
  });
  const bool need_ols = std::find(kinds.begin(), kinds.end(), IntervalKind::ols) != kinds.end();

  auto body = [&](Index iterate) {
    std::vector<ResultRow> rows;
    const auto seed = iterate_seed(config.master_seed, iterate);
    const DataMatrix data = problem.sample(config.synthetic.n, derive_seed(seed, 0, "data"));
    const DataMatrix test = problem.sample(config.test_points_per_iterate, derive_seed(seed, 0, "test"));

    auto evaluate = [&](const Matrix& x, std::size_t ri, double rate, const std::string& imputer,
                        std::optional<double> error, Clock::time_point started) {
      std::optional<ForestModel> forest;
      std::optional<ResidualStats> stats;
      std::optional<LinearModel> ols;
      if (need_forest) {
        auto fc = config.predictor.forest;
        fc.threads = 1;
        fc.seed = derive_seed(seed, ri, "forest:" + imputer);
        forest = fit_forest(x, data.y, fc);
        if (need_stats) stats = residual_stats(*forest, x, data.y);
      }
      if (need_ols) ols = fit_ols(x, data.y);
      const double fit_ms = elapsed_ms(started);

      for (Index t = 0; t < test.rows(); ++t) {
        const auto query = row_of(test.x, t);
        for (const auto kind : kinds) {
          PredictionInterval pi;
          switch (kind) {
            case IntervalKind::qrf: pi = pi_qrf(*forest, query, config.level); break;
            case IntervalKind::emp_q: pi = pi_emp_q(*forest, *stats, query, config.level); break;
            case IntervalKind::res_var:
              pi = pi_gaussian(*forest, *stats, query, config.level, VarianceKind::simple);
              break;
            case IntervalKind::m_correct:
              pi = pi_gaussian(*forest, *stats, query, config.level, VarianceKind::mcorrect);
              break;
            case IntervalKind::weighted:
              pi = pi_gaussian(*forest, *stats, query, config.level, VarianceKind::weighted);
              break;
            case IntervalKind::ols: pi = pi_ols(*ols, query, config.level); break;
          }
          ResultRow row;
          row.experiment = experiment;
          row.iterate = iterate;
          row.missing_rate = rate;
          row.imputer = imputer;
          row.method = std::string(to_string(kind));
          row.test_point = t;
          row.nrmse = error;
          row.covered = pi.contains(test.y(t));
          row.length = pi.length();
          row.lower = pi.lower;
          row.upper = pi.upper;
          if (config.record_wall_time) row.wall_time_ms = fit_ms;
          row.seed = seed;
          rows.push_back(std::move(row));
        }
      }
    };

    for (std::size_t ri = 0; ri < rates.size(); ++ri) {
      const double rate = rates[ri];
      if (rate == 0.0) {
        evaluate(data.x, ri, rate, "none", std::nullopt, Clock::now());
        continue;
      }
      const auto mask = ampute_mcar(data, {rate, derive_seed(seed, ri, "ampute")});
      const Matrix masked = mask.apply(data.x);
      for (const auto method : config.imputers) {
        const auto started = Clock::now();
        const std::string name(to_string(method));
        auto icfg = config.imputation;
        icfg.method = method;
        icfg.seed = derive_seed(seed, ri, "impute:" + name);
        const auto imputed = impute(masked, mask, icfg);
        evaluate(imputed.completed, ri, rate, name, try_nrmse(imputed.completed, data.x, mask), started);
      }
    }
    return rows;
  };

  return run_iterates(config.iterates(), config.threads, body);
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
  return config.experiment == ExperimentKind::empirical_accuracy ? run_empirical_accuracy(config)
                                                                 : run_synthetic_intervals(config);
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kResultsHeader << '\n';
  for (const auto& r : rows) {
    out << r.experiment << ',' << r.iterate << ',';
    put_double(out, r.missing_rate);
    out << ',' << r.imputer << ',' << r.method << ',' << r.test_point << ',';
    put_optional(out, r.nrmse);
    out << ',';
    put_optional(out, r.cv_mse);
    out << ',';
    if (r.covered) {
      out << (*r.covered ? 1 : 0);
    } else {
      out << "NA";
    }
    out << ',';
    put_optional(out, r.length);
    out << ',';
    put_optional(out, r.lower);
    out << ',';
    put_optional(out, r.upper);
    out << ',';
    put_optional(out, r.wall_time_ms);
    out << ',' << r.seed << '\n';
  }
}

RunOutput run_and_write(const ExperimentConfig& config) {
  const auto rows = run_experiment(config);
  std::filesystem::create_directories(config.output_dir);
  RunOutput output;
  output.results_csv = config.output_dir / "results.csv";
  output.manifest = config.output_dir / "manifest.txt";
  output.row_count = rows.size();
  {
    std::ofstream out(output.results_csv, std::ios::binary);
    if (!out) throw Error("cannot write " + output.results_csv.string());
    write_results_csv(out, rows);
  }
  std::ofstream manifest(output.manifest, std::ios::binary);
  if (!manifest) throw Error("cannot write " + output.manifest.string());
  manifest << "misspred " << version() << '\n'
           << "compiler " << __VERSION__ << '\n'
           << "eigen " << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.' << EIGEN_MINOR_VERSION << '\n'
           << "experiment " << to_string(config.experiment) << '\n'
           << "master_seed " << config.master_seed << '\n'
           << "iterates " << config.iterates() << '\n'
           << "rows " << rows.size() << '\n';
  if (config.experiment == ExperimentKind::synthetic_intervals) {
    manifest << "noise_variance ";
    put_double(manifest, SyntheticProblem::create(config.synthetic).noise_variance());
    manifest << '\n';
  }
  manifest << "iterate_seeds";
  for (Index i = 0; i < config.iterates(); ++i) manifest << ' ' << iterate_seed(config.master_seed, i);
  manifest << "\n--- config ---\n" << config.source_text;
  if (!config.source_text.empty() && config.source_text.back() != '\n') manifest << '\n';
  return output;
}

}  // namespace misspred
