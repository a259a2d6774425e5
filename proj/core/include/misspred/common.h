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
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace misspred {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using MaskArray = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

// Base class for all recoverable library errors. Precondition violations on
// function arguments are reported with std::invalid_argument instead.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::int64_t row, std::int64_t column)
      : Error(what), row_(row), column_(column) {}

  // 1-based line number in the source file, 0 when not applicable.
  std::int64_t row() const { return row_; }
  // 1-based column, 0 when not applicable.
  std::int64_t column() const { return column_; }

 private:
  std::int64_t row_;
  std::int64_t column_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

// Raised by nrmse when every imputed value equals the mean of the true
// missing values.
class ZeroDenominatorError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace misspred
