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

#include "misspred/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <limits>
#include <stdexcept>

#include "misspred/seeding.h"

namespace misspred {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      return cells;
    }
    cells.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

std::string unquote(std::string_view s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

}  // namespace

void DataMatrix::validate(const MissMask* mask) const {
  if (x.rows() < 1 || x.cols() < 1) throw std::invalid_argument("DataMatrix: need n >= 1 and p >= 1");
  if (y.size() != x.rows()) throw std::invalid_argument("DataMatrix: y length differs from row count");
  if (static_cast<Index>(col_names.size()) != x.cols()) {
    throw std::invalid_argument("DataMatrix: column name count differs from column count");
  }
  if (!y.allFinite()) throw std::invalid_argument("DataMatrix: response has non-finite entries");
  if (mask != nullptr && (mask->rows() != x.rows() || mask->cols() != x.cols())) {
    throw std::invalid_argument("DataMatrix: mask shape differs from data shape");
  }
  for (Index j = 0; j < x.cols(); ++j) {
    for (Index i = 0; i < x.rows(); ++i) {
      if (!std::isfinite(x(i, j)) && (mask == nullptr || mask->observed(i, j))) {
        throw std::invalid_argument("DataMatrix: non-finite covariate at an observed cell");
      }
    }
  }
}

MissMask::MissMask(MaskArray observed) : observed_(std::move(observed)) {
  if (observed_.rows() < 1 || observed_.cols() < 1) throw std::invalid_argument("MissMask: empty shape");
  for (Index i = 0; i < observed_.rows(); ++i) {
    if (!observed_.row(i).any()) throw std::invalid_argument("MissMask: row without observed cells");
  }
  for (Index j = 0; j < observed_.cols(); ++j) {
    if (!observed_.col(j).any()) throw std::invalid_argument("MissMask: column without observed cells");
  }
  missing_count_ = observed_.size() - observed_.count();
}

MissMask MissMask::all_observed(Index rows, Index cols) {
  return MissMask(MaskArray::Constant(rows, cols, true));
}

Index MissMask::missing_in_col(Index j) const { return rows() - observed_.col(j).count(); }

Matrix MissMask::apply(const Matrix& x) const {
  if (x.rows() != rows() || x.cols() != cols()) throw std::invalid_argument("MissMask::apply: shape mismatch");
  Matrix out = x;
  for (Index j = 0; j < cols(); ++j) {
    for (Index i = 0; i < rows(); ++i) {
      if (!observed_(i, j)) out(i, j) = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return out;
}

bool MissMask::operator==(const MissMask& other) const {
  return rows() == other.rows() && cols() == other.cols() && (observed_ == other.observed_).all();
}

DataMatrix load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0, 0);

  std::string line;
  std::int64_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    for (auto cell : split(line, options.delimiter)) header.push_back(unquote(cell));
    break;
  }
  if (header.empty()) throw ParseError("empty file: " + path.string(), 0, 0);

  const auto response_it = std::find(header.begin(), header.end(), options.response);
  if (response_it == header.end()) {
    throw ParseError("response column '" + options.response + "' not in header", line_no, 0);
  }
  const auto response_col = static_cast<std::size_t>(response_it - header.begin());
  if (header.size() < 2) throw ParseError("need at least one covariate column", line_no, 0);

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (options.max_rows > 0 && static_cast<std::int64_t>(rows.size()) >= options.max_rows) break;
    const auto cells = split(line, options.delimiter);
    if (cells.size() != header.size()) {
      if (cells.size() <= response_col) {
        throw ParseError("missing response cell", line_no, static_cast<std::int64_t>(response_col) + 1);
      }
      throw ParseError("expected " + std::to_string(header.size()) + " cells, found " +
                           std::to_string(cells.size()),
                       line_no, 0);
    }
    std::vector<double> values(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto cell = cells[c];
      const auto column = static_cast<std::int64_t>(c) + 1;
      if (cell.empty()) {
        if (c == response_col) throw ParseError("missing response cell", line_no, column);
        throw ParseError("empty cell", line_no, column);
      }
      const char* begin = cell.data();
      const char* end = cell.data() + cell.size();
      if (*begin == '+') ++begin;
      const auto [ptr, ec] = std::from_chars(begin, end, values[c]);
      if (ec != std::errc() || ptr != end) {
        throw ParseError("cannot parse '" + std::string(cell) + "' as a number", line_no, column);
      }
      if (!std::isfinite(values[c])) throw ParseError("non-finite value", line_no, column);
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw ParseError("no data rows in " + path.string(), line_no, 0);

  const auto n = static_cast<Index>(rows.size());
  const auto p = static_cast<Index>(header.size()) - 1;
  DataMatrix data;
  data.x.resize(n, p);
  data.y.resize(n);
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c != response_col) data.col_names.push_back(header[c]);
  }
  for (Index i = 0; i < n; ++i) {
    Index j = 0;
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c == response_col) {
        data.y(i) = rows[static_cast<std::size_t>(i)][c];
      } else {
        data.x(i, j++) = rows[static_cast<std::size_t>(i)][c];
      }
    }
  }
  return data;
}

void write_csv(const std::filesystem::path& path, const DataMatrix& data,
               const std::string& response_name, char delimiter) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& name : data.col_names) out << name << delimiter;
  out << response_name << '\n';
  char buf[64];
  auto put = [&](double v) {
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, ptr - buf);
  };
  for (Index i = 0; i < data.rows(); ++i) {
    for (Index j = 0; j < data.cols(); ++j) {
      put(data.x(i, j));
      out << delimiter;
    }
    put(data.y(i));
    out << '\n';
  }
  if (!out) throw Error("write failed: " + path.string());
}

DataMatrix standardize_covariates(const DataMatrix& data) {
  DataMatrix out = data;
  for (Index j = 0; j < out.cols(); ++j) {
    auto col = out.x.col(j);
    const double m = col.mean();
    col.array() -= m;
    const double sd = out.rows() > 1 ? std::sqrt(col.squaredNorm() / static_cast<double>(out.rows() - 1)) : 0.0;
    if (sd > 0.0) col /= sd;
  }
  return out;
}

std::vector<Index> FoldAssignment::test_rows(int fold) const {
  std::vector<Index> rows;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] == fold) rows.push_back(static_cast<Index>(i));
  }
  return rows;
}

std::vector<Index> FoldAssignment::train_rows(int fold) const {
  std::vector<Index> rows;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] != fold) rows.push_back(static_cast<Index>(i));
  }
  return rows;
}

Index FoldAssignment::fold_size(int fold) const {
  return static_cast<Index>(std::count(fold_of.begin(), fold_of.end(), fold));
}

FoldAssignment make_folds(Index n, int k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("make_folds: k must be at least 2");
  if (k > n) throw std::invalid_argument("make_folds: k exceeds n");
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  Rng rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  FoldAssignment folds;
  folds.k = k;
  folds.fold_of.assign(static_cast<std::size_t>(n), 0);
  for (std::size_t pos = 0; pos < perm.size(); ++pos) {
    folds.fold_of[static_cast<std::size_t>(perm[pos])] = static_cast<int>(pos % static_cast<std::size_t>(k));
  }
  return folds;
}

Matrix select_rows(const Matrix& x, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), x.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Index>(r)) = x.row(rows[r]);
  return out;
}

Vector select_rows(const Vector& y, const std::vector<Index>& rows) {
  Vector out(static_cast<Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) out(static_cast<Index>(r)) = y(rows[r]);
  return out;
}

}  // namespace misspred
