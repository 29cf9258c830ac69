// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ompt {

enum class ErrorKind {
  InvalidArgument,
  ZeroColumn,
  NotNormalized,
  RankDeficient,
  NotSymmetric,
  DimensionTooLarge,
  KOutOfRange,
  EnumerationBudgetExceeded,
  SingularSubset,
  DeltaOutOfRange,
  TOutOfRange,
  MissingMetric,
  Io,
  Parse,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ZeroColumn: return "ZeroColumn";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::KOutOfRange: return "KOutOfRange";
    case ErrorKind::EnumerationBudgetExceeded: return "EnumerationBudgetExceeded";
    case ErrorKind::SingularSubset: return "SingularSubset";
    case ErrorKind::DeltaOutOfRange: return "DeltaOutOfRange";
    case ErrorKind::TOutOfRange: return "TOutOfRange";
    case ErrorKind::MissingMetric: return "MissingMetric";
    case ErrorKind::Io: return "IoError";
    case ErrorKind::Parse: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library. The kind is stable and meant for
/// programmatic dispatch; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ZeroColumnError : public Error {
 public:
  explicit ZeroColumnError(std::size_t index)
      : Error(ErrorKind::ZeroColumn, "column " + std::to_string(index) + " has (near) zero norm"),
        index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Raised by omega_k when a restricted Gram matrix cannot be inverted; carries
/// the offending subset.
class SingularSubsetError : public Error {
 public:
  explicit SingularSubsetError(std::vector<std::size_t> witness)
      : Error(ErrorKind::SingularSubset, "restricted Gram matrix is singular on " + describe(witness)),
        witness_(std::move(witness)) {}

  const std::vector<std::size_t>& witness() const noexcept { return witness_; }

 private:
  static std::string describe(const std::vector<std::size_t>& idx) {
    std::string s = "{";
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(idx[i]);
    }
    return s + "}";
  }

  std::vector<std::size_t> witness_;
};

}  // namespace ompt
