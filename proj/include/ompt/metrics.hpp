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

// Sensing-matrix metrics: mutual coherence M, global 2-coherence nu_k,
// cumulative coherence mu_{1,k}, restricted isometry constant delta_k and the
// selection metric omega_k.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ompt/combinations.hpp"
#include "ompt/error.hpp"
#include "ompt/linalg.hpp"

namespace ompt {

/// Upper bound on the number of k-subsets ric_exact / omega_k will visit.
inline constexpr std::uint64_t kSubsetBudget = 2'000'000;

struct CoherenceReport {
  double mutual = 0.0;
  std::vector<double> global2;     // global2[k-1] = nu_k
  std::vector<double> cumulative;  // cumulative[k-1] = mu_{1,k}
  std::optional<std::vector<double>> ric;    // ric[k-1] = delta_k
  std::optional<std::vector<double>> omega;  // omega[k-1] = omega_k
  std::size_t kmax = 0;

  double nu(std::size_t k) const { return at(global2, k, "global2"); }
  double mu(std::size_t k) const { return at(cumulative, k, "cumulative"); }
  double delta(std::size_t k) const {
    if (!ric) throw Error(ErrorKind::MissingMetric, "report has no restricted isometry constants");
    return at(*ric, k, "ric");
  }
  double omega_at(std::size_t k) const {
    if (!omega) throw Error(ErrorKind::MissingMetric, "report has no omega values");
    return at(*omega, k, "omega");
  }
  bool has_delta(std::size_t k) const { return ric && k >= 1 && k <= ric->size(); }

 private:
  static double at(const std::vector<double>& v, std::size_t k, const char* name) {
    if (k < 1 || k > v.size()) {
      throw Error(ErrorKind::MissingMetric, std::string(name) + " not available at k = " + std::to_string(k));
    }
    return v[k - 1];
  }
};

namespace detail {

/// Per-atom prefix sums over the off-diagonal Gram row sorted by decreasing
/// magnitude (ties to lower index). Returns max_i for every prefix length
/// 1..kmax as {l2 (nu), l1 (mu)}.
inline std::pair<std::vector<double>, std::vector<double>> coherence_profiles(const Matrix& g, std::size_t kmax) {
  const Index d = g.rows();
  std::vector<double> nu(kmax, 0.0), mu(kmax, 0.0);
  std::vector<std::pair<double, Index>> row;
  row.reserve(static_cast<std::size_t>(d));
  for (Index i = 0; i < d; ++i) {
    row.clear();
    for (Index j = 0; j < d; ++j) {
      if (j != i) row.emplace_back(std::abs(g(i, j)), j);
    }
    std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(kmax), row.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
    double sq = 0.0, abs_sum = 0.0;
    for (std::size_t k = 0; k < kmax; ++k) {
      sq += row[k].first * row[k].first;
      abs_sum += row[k].first;
      nu[k] = std::max(nu[k], std::sqrt(sq));
      mu[k] = std::max(mu[k], abs_sum);
    }
  }
  return {std::move(nu), std::move(mu)};
}

inline void check_k_for_coherence(const Dictionary& dict, std::size_t k) {
  if (k < 1 || k > static_cast<std::size_t>(dict.cols()) - 1) {
    throw Error(ErrorKind::KOutOfRange, "k = " + std::to_string(k) + " must lie in [1, d-1] with d = " +
                                            std::to_string(dict.cols()));
  }
}

inline void check_subset_enumeration(const Dictionary& dict, std::size_t k) {
  const auto d = static_cast<std::size_t>(dict.cols());
  const auto n = static_cast<std::size_t>(dict.rows());
  if (k < 1 || k > d || k > n) {
    throw Error(ErrorKind::KOutOfRange, "k = " + std::to_string(k) + " must lie in [1, min(n, d)]");
  }
  if (binomial(d, k) > kSubsetBudget) {
    throw Error(ErrorKind::EnumerationBudgetExceeded,
                "C(" + std::to_string(d) + ", " + std::to_string(k) + ") subsets exceed the budget of " +
                    std::to_string(kSubsetBudget));
  }
}

inline Matrix gram_block(const Matrix& g, const std::vector<std::size_t>& idx) {
  const auto k = static_cast<Index>(idx.size());
  Matrix block(k, k);
  for (Index a = 0; a < k; ++a)
    for (Index b = 0; b < k; ++b) block(a, b) = g(static_cast<Index>(idx[a]), static_cast<Index>(idx[b]));
  return block;
}

inline double ric_from_gram(const Matrix& g, std::size_t k) {
  double best = 0.0;
  const auto kk = static_cast<Index>(k);
  Eigen::SelfAdjointEigenSolver<Matrix> es(kk);
  for_each_combination(static_cast<std::size_t>(g.rows()), k, [&](const std::vector<std::size_t>& idx) {
    Matrix block = gram_block(g, idx);
    block.diagonal().array() -= 1.0;
    es.compute(block, Eigen::EigenvaluesOnly);
    best = std::max(best, es.eigenvalues().cwiseAbs().maxCoeff());
  });
  return best;
}

inline double omega_for(const Dictionary& dict, std::size_t k) {
  double best = std::numeric_limits<double>::infinity();
  const auto kk = static_cast<Index>(k);
  Matrix sub(dict.rows(), kk);
  for_each_combination(static_cast<std::size_t>(dict.cols()), k, [&](const std::vector<std::size_t>& idx) {
    for (Index j = 0; j < kk; ++j) sub.col(j) = dict.atom(static_cast<Index>(idx[static_cast<std::size_t>(j)]));
    Eigen::JacobiSVD<Matrix> svd(sub, Eigen::ComputeThinV);
    const Vector& s = svd.singularValues();
    if (s.minCoeff() < kRankTol) throw SingularSubsetError(idx);
    // (Phi^T Phi)^{-1} = V diag(1/s^2) V^T
    const Matrix inv = svd.matrixV() * s.array().square().inverse().matrix().asDiagonal() * svd.matrixV().transpose();
    best = std::min(best, 1.0 / mixed_norm_inf_2(inv));
  });
  return best;
}

}  // namespace detail

inline double mutual_coherence(const Dictionary& dict) {
  if (dict.cols() < 2) throw Error(ErrorKind::InvalidArgument, "mutual coherence needs at least two atoms");
  const Matrix g = gram(dict);
  double m = 0.0;
  for (Index j = 0; j < g.cols(); ++j)
    for (Index i = 0; i < g.rows(); ++i)
      if (i != j) m = std::max(m, std::abs(g(i, j)));
  return m;
}

/// nu_k: for each atom, the l2 norm of its k largest inner products with the
/// other atoms; maximized over atoms. Polynomial time.
inline double global_2_coherence(const Dictionary& dict, std::size_t k) {
  detail::check_k_for_coherence(dict, k);
  return detail::coherence_profiles(gram(dict), k).first[k - 1];
}

/// mu_{1,k}: like global_2_coherence but with an l1 sum.
inline double cumulative_coherence(const Dictionary& dict, std::size_t k) {
  detail::check_k_for_coherence(dict, k);
  return detail::coherence_profiles(gram(dict), k).second[k - 1];
}

/// delta_k = max over k-subsets of ||Phi_S^T Phi_S - I||_2, by exhaustive enumeration.
inline double ric_exact(const Dictionary& dict, std::size_t k) {
  detail::check_subset_enumeration(dict, k);
  return detail::ric_from_gram(gram(dict), k);
}

/// omega_k = min over k-subsets of 1 / ||(Phi_S^T Phi_S)^{-1}||_{inf,2}.
/// Throws SingularSubsetError naming the first subset whose Gram block is singular.
inline double omega_k(const Dictionary& dict, std::size_t k) {
  detail::check_subset_enumeration(dict, k);
  if (static_cast<Index>(k) > kMixedNormMaxDim) {
    throw Error(ErrorKind::DimensionTooLarge, "omega_k needs k <= 25");
  }
  return detail::omega_for(dict, k);
}

inline CoherenceReport coherence_report(const Dictionary& dict, std::size_t kmax, bool compute_ric, bool compute_omega) {
  detail::check_k_for_coherence(dict, kmax);
  CoherenceReport report;
  report.kmax = kmax;
  const Matrix g = gram(dict);
  auto [nu, mu] = detail::coherence_profiles(g, kmax);
  report.global2 = std::move(nu);
  report.cumulative = std::move(mu);
  report.mutual = report.global2.front();
  if (compute_ric) {
    std::vector<double> ric;
    for (std::size_t k = 1; k <= kmax; ++k) {
      detail::check_subset_enumeration(dict, k);
      ric.push_back(detail::ric_from_gram(g, k));
    }
    report.ric = std::move(ric);
  }
  if (compute_omega) {
    std::vector<double> om;
    for (std::size_t k = 1; k <= kmax; ++k) om.push_back(omega_k(dict, k));
    report.omega = std::move(om);
  }
  return report;
}

}  // namespace ompt
