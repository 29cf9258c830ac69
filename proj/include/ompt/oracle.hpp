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

// Exhaustive l0 ground truth for tiny instances.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ompt/combinations.hpp"
#include "ompt/error.hpp"
#include "ompt/linalg.hpp"

namespace ompt {

inline constexpr std::uint64_t kOracleBudget = 1'000'000;
inline constexpr double kOracleDefaultTol = 1e-9;

struct OracleSolution {
  std::optional<SparseSignal> signal;
  bool unique = false;
  std::optional<std::size_t> sparsity;
  /// Residual of the returned solution, or the best residual seen at the
  /// largest size tried when nothing qualified.
  double residual_norm = 0.0;
};

namespace detail {

inline void check_oracle_budget(std::size_t d, std::size_t k) {
  if (binomial(d, k) > kOracleBudget) {
    throw Error(ErrorKind::EnumerationBudgetExceeded,
                "C(" + std::to_string(d) + ", " + std::to_string(k) + ") exceeds the oracle budget");
  }
}

/// Least squares on a subset; nullopt when the subset is rank deficient.
inline std::optional<std::pair<Vector, double>> try_fit(const Dictionary& dict, const std::vector<std::size_t>& idx,
                                                        const Vector& f) {
  if (static_cast<Index>(idx.size()) > dict.rows()) return std::nullopt;
  IncrementalQR qr(dict.rows(), static_cast<Index>(idx.size()));
  try {
    for (auto i : idx) qr.append(dict.atom(static_cast<Index>(i)));
  } catch (const Error&) {
    return std::nullopt;
  }
  Vector x = qr.solve(f);
  Vector r = f;
  for (std::size_t j = 0; j < idx.size(); ++j) r -= x[static_cast<Index>(j)] * dict.atom(static_cast<Index>(idx[j]));
  return std::make_pair(std::move(x), r.norm());
}

}  // namespace detail

/// Sparsest x with ||f - Phi x|| <= tol ||f||, searching sizes 0..k_max and
/// supports in lexicographic order. Rank-deficient supports are skipped: if f
/// lies in their span it also lies in the span of a smaller support.
inline OracleSolution sparsest_solution(const Dictionary& dict, const Vector& f, std::size_t k_max,
                                        double tol = kOracleDefaultTol) {
  if (f.size() != dict.rows()) throw Error(ErrorKind::InvalidArgument, "signal length does not match dictionary rows");
  if (!(tol >= 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be nonnegative");
  const auto d = static_cast<std::size_t>(dict.cols());
  if (k_max < 1 || k_max > d) throw Error(ErrorKind::KOutOfRange, "k_max must lie in [1, d]");
  detail::check_oracle_budget(d, k_max);

  OracleSolution out;
  const double f_norm = f.norm();
  const double bar = tol * f_norm;
  if (f_norm == 0.0) {
    out.signal = SparseSignal(SupportSet(d), Vector(0));
    out.unique = true;
    out.sparsity = 0;
    return out;
  }

  for (std::size_t k = 1; k <= k_max; ++k) {
    std::optional<std::pair<std::vector<std::size_t>, Vector>> first;
    double first_res = 0.0;
    std::size_t hits = 0;
    double best_res = std::numeric_limits<double>::infinity();
    for_each_combination(d, k, [&](const std::vector<std::size_t>& idx) {
      const auto fit = detail::try_fit(dict, idx, f);
      if (!fit) return true;
      best_res = std::min(best_res, fit->second);
      if (fit->second <= bar) {
        if (!first) {
          first.emplace(idx, fit->first);
          first_res = fit->second;
        }
        ++hits;
      }
      return true;
    });
    if (first) {
      out.signal = SparseSignal(SupportSet(d, first->first), first->second);
      out.sparsity = k;
      out.unique = hits == 1;
      out.residual_norm = first_res;
      return out;
    }
    out.residual_norm = best_res;
  }
  return out;
}

/// True when every 2k-column submatrix has smallest singular value above 1e-10,
/// which makes any k-sparse representation the unique sparsest one.
inline bool verify_spark_condition(const Dictionary& dict, std::size_t k) {
  const auto d = static_cast<std::size_t>(dict.cols());
  const auto n = static_cast<std::size_t>(dict.rows());
  if (k < 1 || 2 * k > d) throw Error(ErrorKind::KOutOfRange, "need 1 <= k and 2k <= d");
  if (2 * k > n) return false;
  detail::check_oracle_budget(d, 2 * k);
  Matrix sub(dict.rows(), static_cast<Index>(2 * k));
  return for_each_combination(d, 2 * k, [&](const std::vector<std::size_t>& idx) {
    for (std::size_t j = 0; j < idx.size(); ++j) sub.col(static_cast<Index>(j)) = dict.atom(static_cast<Index>(idx[j]));
    Eigen::JacobiSVD<Matrix> svd(sub);
    return svd.singularValues().minCoeff() > kRankTol;
  });
}

}  // namespace ompt
