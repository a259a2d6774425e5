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

#include "misspred/config.h"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace misspred {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(const KeyValueFile::Entry& e, const std::string& what) {
  throw ConfigError("line " + std::to_string(e.line) + ": [" + e.section + "] " + e.key + ": " + what);
}

double to_double(const KeyValueFile::Entry& e, std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) fail(e, "expected a number, got '" + std::string(s) + "'");
  return v;
}

std::int64_t to_int(const KeyValueFile::Entry& e, std::string_view s) {
  s = trim(s);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) fail(e, "expected an integer, got '" + std::string(s) + "'");
  return v;
}

std::uint64_t to_uint(const KeyValueFile::Entry& e, std::string_view s) {
  s = trim(s);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) fail(e, "expected a non-negative integer");
  return v;
}

bool to_bool(const KeyValueFile::Entry& e, std::string_view s) {
  s = trim(s);
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  fail(e, "expected true or false");
}

std::vector<std::string> to_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto pos = s.find(',', start);
    const auto item = trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (!item.empty()) out.emplace_back(item);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T, class Parse>
std::vector<T> to_named_list(const KeyValueFile::Entry& e, Parse parse) {
  std::vector<T> out;
  for (const auto& name : to_list(e.value)) {
    try {
      out.push_back(parse(name));
    } catch (const ConfigError& err) {
      fail(e, err.what());
    }
  }
  return out;
}

struct SyntheticSettings {
  Index n = 500;
  Index p = 10;
  std::string covariance = "scaled_identity";
  std::optional<double> rho;
  double scale = 1.0;
  std::string model = "linear";
  std::optional<std::vector<double>> beta0;
  double target_sn = 1.0;
};

using Setter = std::function<void(ExperimentConfig&, SyntheticSettings&, const KeyValueFile::Entry&)>;
using SectionTable = std::map<std::string, Setter>;

void add_forest_keys(SectionTable& t, ForestConfig& (*get)(ExperimentConfig&)) {
  t["m_trees"] = [get](auto& c, auto&, const auto& e) { get(c).m_trees = to_int(e, e.value); };
  t["mtry"] = [get](auto& c, auto&, const auto& e) { get(c).mtry = to_int(e, e.value); };
  t["min_node_size"] = [get](auto& c, auto&, const auto& e) { get(c).min_node_size = to_int(e, e.value); };
  t["bootstrap"] = [get](auto& c, auto&, const auto& e) { get(c).bootstrap = to_bool(e, e.value); };
}

void add_sgb_keys(SectionTable& t, SgbConfig& (*get)(ExperimentConfig&)) {
  t["n_rounds"] = [get](auto& c, auto&, const auto& e) { get(c).n_rounds = static_cast<int>(to_int(e, e.value)); };
  t["shrinkage"] = [get](auto& c, auto&, const auto& e) { get(c).shrinkage = to_double(e, e.value); };
  t["subsample"] = [get](auto& c, auto&, const auto& e) { get(c).subsample = to_double(e, e.value); };
  t["max_depth"] = [get](auto& c, auto&, const auto& e) { get(c).max_depth = static_cast<int>(to_int(e, e.value)); };
  t["min_node_size"] = [get](auto& c, auto&, const auto& e) { get(c).min_node_size = to_int(e, e.value); };
}

void add_xgb_keys(SectionTable& t, XgbConfig& (*get)(ExperimentConfig&)) {
  t["n_rounds"] = [get](auto& c, auto&, const auto& e) { get(c).n_rounds = static_cast<int>(to_int(e, e.value)); };
  t["shrinkage"] = [get](auto& c, auto&, const auto& e) { get(c).shrinkage = to_double(e, e.value); };
  t["lambda"] = [get](auto& c, auto&, const auto& e) { get(c).lambda = to_double(e, e.value); };
  t["subsample"] = [get](auto& c, auto&, const auto& e) { get(c).subsample = to_double(e, e.value); };
  t["max_depth"] = [get](auto& c, auto&, const auto& e) { get(c).max_depth = static_cast<int>(to_int(e, e.value)); };
  t["min_node_size"] = [get](auto& c, auto&, const auto& e) { get(c).min_node_size = to_int(e, e.value); };
  t["learn_default_direction"] = [get](auto& c, auto&, const auto& e) {
    get(c).learn_default_direction = to_bool(e, e.value);
  };
}

const std::map<std::string, SectionTable>& schema() {
  static const auto tables = [] {
    std::map<std::string, SectionTable> s;

    auto& ex = s["experiment"];
    ex["kind"] = [](auto& c, auto&, const auto& e) {
      const auto v = trim(e.value);
      if (v == "empirical_accuracy") {
        c.experiment = ExperimentKind::empirical_accuracy;
      } else if (v == "synthetic_intervals") {
        c.experiment = ExperimentKind::synthetic_intervals;
      } else {
        fail(e, "unknown experiment '" + std::string(v) + "'");
      }
    };
    ex["missing_rates"] = [](auto& c, auto&, const auto& e) {
      c.missing_rates.clear();
      for (const auto& item : to_list(e.value)) c.missing_rates.push_back(to_double(e, item));
    };
    ex["imputers"] = [](auto& c, auto&, const auto& e) {
      c.imputers = to_named_list<ImputeMethod>(e, parse_impute_method);
    };
    ex["predictors"] = [](auto& c, auto&, const auto& e) {
      c.predictors = to_named_list<PredictorKind>(e, parse_predictor_kind);
    };
    ex["interval_kinds"] = [](auto& c, auto&, const auto& e) {
      c.interval_kinds = to_named_list<IntervalKind>(e, parse_interval_kind);
    };
    ex["mc_iterates"] = [](auto& c, auto&, const auto& e) {
      c.mc_iterates = to_int(e, e.value);
      if (c.mc_iterates < 1) fail(e, "mc_iterates must be >= 1");
    };
    ex["level"] = [](auto& c, auto&, const auto& e) { c.level = to_double(e, e.value); };
    ex["k_folds"] = [](auto& c, auto&, const auto& e) { c.k_folds = static_cast<int>(to_int(e, e.value)); };
    ex["master_seed"] = [](auto& c, auto&, const auto& e) { c.master_seed = to_uint(e, e.value); };
    ex["output_dir"] = [](auto& c, auto&, const auto& e) { c.output_dir = std::string(trim(e.value)); };
    ex["test_points_per_iterate"] = [](auto& c, auto&, const auto& e) {
      c.test_points_per_iterate = to_int(e, e.value);
    };
    ex["true_baseline"] = [](auto& c, auto&, const auto& e) { c.true_baseline = to_bool(e, e.value); };
    ex["xgb_internal"] = [](auto& c, auto&, const auto& e) { c.xgb_internal = to_bool(e, e.value); };
    ex["complete_case_control"] = [](auto& c, auto&, const auto& e) {
      c.complete_case_control = to_bool(e, e.value);
    };
    ex["record_wall_time"] = [](auto& c, auto&, const auto& e) { c.record_wall_time = to_bool(e, e.value); };
    ex["threads"] = [](auto& c, auto&, const auto& e) { c.threads = static_cast<int>(to_int(e, e.value)); };

    auto& ds = s["dataset"];
    auto source = [](ExperimentConfig& c) -> DatasetSource& {
      if (!c.dataset) c.dataset.emplace();
      return *c.dataset;
    };
    ds["path"] = [source](auto& c, auto&, const auto& e) { source(c).path = std::string(trim(e.value)); };
    ds["response"] = [source](auto& c, auto&, const auto& e) { source(c).csv.response = std::string(trim(e.value)); };
    ds["delimiter"] = [source](auto& c, auto&, const auto& e) {
      const auto v = trim(e.value);
      if (v == "tab" || v == "\\t") {
        source(c).csv.delimiter = '\t';
      } else if (v.size() == 1) {
        source(c).csv.delimiter = v.front();
      } else if (v.empty()) {
        source(c).csv.delimiter = ',';
      } else {
        fail(e, "delimiter must be a single character or 'tab'");
      }
    };
    ds["max_rows"] = [source](auto& c, auto&, const auto& e) { source(c).csv.max_rows = to_int(e, e.value); };
    ds["standardize"] = [source](auto& c, auto&, const auto& e) { source(c).standardize = to_bool(e, e.value); };

    auto& syn = s["synthetic"];
    syn["n"] = [](auto&, auto& sy, const auto& e) { sy.n = to_int(e, e.value); };
    syn["p"] = [](auto&, auto& sy, const auto& e) { sy.p = to_int(e, e.value); };
    syn["covariance"] = [](auto&, auto& sy, const auto& e) { sy.covariance = std::string(trim(e.value)); };
    syn["rho"] = [](auto&, auto& sy, const auto& e) { sy.rho = to_double(e, e.value); };
    syn["scale"] = [](auto&, auto& sy, const auto& e) { sy.scale = to_double(e, e.value); };
    syn["model"] = [](auto&, auto& sy, const auto& e) { sy.model = std::string(trim(e.value)); };
    syn["target_sn"] = [](auto&, auto& sy, const auto& e) { sy.target_sn = to_double(e, e.value); };
    syn["beta0"] = [](auto&, auto& sy, const auto& e) {
      std::vector<double> beta;
      for (const auto& item : to_list(e.value)) beta.push_back(to_double(e, item));
      sy.beta0 = std::move(beta);
    };

    add_forest_keys(s["forest"], [](ExperimentConfig& c) -> ForestConfig& { return c.predictor.forest; });
    add_sgb_keys(s["sgb"], [](ExperimentConfig& c) -> SgbConfig& { return c.predictor.sgb; });
    add_xgb_keys(s["xgb"], [](ExperimentConfig& c) -> XgbConfig& { return c.predictor.xgb; });

    auto& imp = s["imputation"];
    imp["max_iter"] = [](auto& c, auto&, const auto& e) {
      c.imputation.max_iter = static_cast<int>(to_int(e, e.value));
    };
    imp["pmm_donors"] = [](auto& c, auto&, const auto& e) { c.imputation.pmm_donors = to_int(e, e.value); };
    imp["mice_rf_trees"] = [](auto& c, auto&, const auto& e) {
      c.imputation.mice_rf_forest.m_trees = to_int(e, e.value);
    };
    add_forest_keys(s["imputation.forest"], [](ExperimentConfig& c) -> ForestConfig& { return c.imputation.forest; });
    add_sgb_keys(s["imputation.sgb"], [](ExperimentConfig& c) -> SgbConfig& { return c.imputation.sgb; });
    add_xgb_keys(s["imputation.xgb"], [](ExperimentConfig& c) -> XgbConfig& { return c.imputation.xgb; });
    return s;
  }();
  return tables;
}

}  // namespace

KeyValueFile KeyValueFile::parse(std::string_view text) {
  KeyValueFile file;
  file.text_ = std::string(text);
  std::string section;
  std::set<std::pair<std::string, std::string>> seen;
  int line_no = 0;
  std::istringstream in(file.text_);
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    Entry e{section, std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))), line_no};
    if (e.key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (!seen.emplace(e.section, e.key).second) fail(e, "duplicate key");
    file.entries_.push_back(std::move(e));
  }
  return file;
}

KeyValueFile KeyValueFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string_view to_string(ExperimentKind kind) {
  return kind == ExperimentKind::empirical_accuracy ? "empirical_accuracy" : "synthetic_intervals";
}

Index ExperimentConfig::iterates() const {
  if (mc_iterates > 0) return mc_iterates;
  return experiment == ExperimentKind::empirical_accuracy ? kDefaultEmpiricalIterates : kDefaultIntervalIterates;
}

ExperimentConfig parse_experiment_config(const KeyValueFile& file, const std::filesystem::path& base_dir) {
  ExperimentConfig config;
  SyntheticSettings synth;
  const auto& tables = schema();
  for (const auto& e : file.entries()) {
    const auto section = tables.find(e.section);
    if (section == tables.end()) fail(e, "unknown section");
    const auto setter = section->second.find(e.key);
    if (setter == section->second.end()) fail(e, "unknown key");
    setter->second(config, synth, e);
  }

  try {
    config.synthetic.n = synth.n;
    config.synthetic.target_sn = synth.target_sn;
    config.synthetic.cov = CovarianceSpec::with_defaults(parse_covariance_kind(synth.covariance), synth.p);
    if (synth.rho) config.synthetic.cov.rho = *synth.rho;
    config.synthetic.cov.scale = synth.scale;
    config.synthetic.model = RegressionModel::with_default_beta(parse_regression_kind(synth.model), synth.p);
    if (synth.beta0) {
      if (static_cast<Index>(synth.beta0->size()) != synth.p) throw ConfigError("[synthetic] beta0 must have p entries");
      config.synthetic.model.beta0 = Eigen::Map<const Vector>(synth.beta0->data(), synth.p);
    }
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("[synthetic] ") + err.what());
  }
  config.synthetic.seed = config.master_seed;

  if (config.dataset && config.dataset->path.is_relative() && !base_dir.empty()) {
    config.dataset->path = base_dir / config.dataset->path;
  }
  config.source_text = file.text();
  validate(config);
  return config;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  return parse_experiment_config(KeyValueFile::load(path), path.parent_path());
}

void validate(const ExperimentConfig& c) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  require(c.mc_iterates >= 0, "mc_iterates must be >= 1");
  require(c.level > 0.0 && c.level < 1.0, "level must lie in (0, 1)");
  require(!c.missing_rates.empty(), "missing_rates must not be empty");
  for (double r : c.missing_rates) require(r >= 0.0 && r < 1.0, "missing rates must lie in [0, 1)");
  require(c.test_points_per_iterate >= 1, "test_points_per_iterate must be >= 1");
  require(c.threads >= 0, "threads must be >= 0");
  require(c.imputation.max_iter >= 1, "[imputation] max_iter must be >= 1");
  require(c.imputation.pmm_donors >= 1, "[imputation] pmm_donors must be >= 1");
  require(c.predictor.forest.m_trees >= 1 && c.imputation.forest.m_trees >= 1 &&
              c.imputation.mice_rf_forest.m_trees >= 1,
          "forest m_trees must be >= 1");
  require(c.predictor.forest.min_node_size >= 1 && c.imputation.forest.min_node_size >= 1,
          "forest min_node_size must be >= 1");
  require(c.synthetic.n >= 2, "[synthetic] n must be >= 2");
  require(c.synthetic.target_sn > 0.0, "[synthetic] target_sn must be > 0");
  require(c.synthetic.cov.p >= 1, "[synthetic] p must be >= 1");

  if (c.experiment == ExperimentKind::empirical_accuracy) {
    require(!c.imputers.empty(), "imputers must not be empty");
    require(!c.predictors.empty(), "predictors must not be empty");
    require(c.k_folds >= 2, "k_folds must be >= 2");
    if (c.dataset) {
      require(!c.dataset->path.empty(), "[dataset] path is required");
      require(!c.dataset->csv.response.empty(), "[dataset] response is required");
      require(c.dataset->csv.max_rows >= 0, "[dataset] max_rows must be >= 0");
    }
  } else {
    require(!c.dataset, "[dataset] is only valid for empirical_accuracy");
    require(!c.interval_kinds.empty(), "interval_kinds must not be empty");
    require(!c.imputers.empty() || c.complete_case_control, "imputers must not be empty");
  }
}

}  // namespace misspred
