// Copyright 2026 The Hatex Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HATEX_COMMON_H_
#define HATEX_COMMON_H_

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hatex {

// The numeric core runs in 64-bit floating point.
using Real = double;
using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using RowVector = Eigen::Matrix<Real, 1, Eigen::Dynamic>;
using Index = Eigen::Index;

// Base of every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: missing columns, bad file formats, unparsable values.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Label string that does not resolve to a class index.
class LabelError : public Error {
 public:
  using Error::Error;
};

// Violated precondition on an argument.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Inconsistent model architecture.
class BuildError : public Error {
 public:
  using Error::Error;
};

// Non-finite activation or loss.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Layer without an attribution rule.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

// Training diverged (non-finite loss).
class TrainingError : public Error {
 public:
  using Error::Error;
};

}  // namespace hatex

#endif  // HATEX_COMMON_H_
