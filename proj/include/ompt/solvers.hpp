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

// Orthogonal matching pursuit with thresholding (OMPT) and the plain OMP
// baseline. Both keep a running QR factorization of the selected atoms, so the
// residual after each step is f minus its orthogonal projection onto them.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ompt/error.hpp"
#include "ompt/linalg.hpp"
#include "ompt/random.hpp"

namespace ompt {

enum class StopReason { ResidualBelowThreshold, NoIndexMeetsThreshold, MaxIterations };
enum class ScanOrder { RandomPermutationPerIteration, FixedAscending };
enum class Method { Ompt, Omp };

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::ResidualBelowThreshold: return "ResidualBelowThreshold";
    case StopReason::NoIndexMeetsThreshold: return "NoIndexMeetsThreshold";
    case StopReason::MaxIterations: return "MaxIterations";
  }
  return "Unknown";
}

inline const char* to_string(Method m) { return m == Method::Ompt ? "ompt" : "omp"; }

struct SolverOptions {
  /// Cap on selected atoms; unset means the number of measurements n.
  std::optional<std::size_t> max_iterations;
  std::uint64_t rng_seed = 0;
  ScanOrder scan_order = ScanOrder::RandomPermutationPerIteration;
  /// Stop once ||r|| <= residual_tolerance * ||f||. Unset means the threshold t
  /// itself, which is the stopping rule of the published algorithm. Setting a
  /// small value together with max_iterations = k runs "OMPT for k iterations".
  std::optional<double> residual_tolerance;
};

struct RecoveryResult {
  SupportSet support;        // selection order
  Vector coefficients;       // aligned with support
  Vector estimate;           // length d, zero off support
  std::vector<double> residual_norms;  // ||r_0|| .. ||r_m||
  std::uint64_t inner_product_count = 0;
  std::size_t iterations = 0;
  StopReason stop_reason = StopReason::ResidualBelowThreshold;
  Method method = Method::Ompt;
};

/// Observed vector f = Phi a + w, optionally with the planted signal.
struct Measurement {
  Vector observed;
  double noise_level = 0.0;
  std::optional<SparseSignal> truth;
};

namespace detail {

inline void check_signal(const Dictionary& dict, const Vector& f) {
  if (f.size() != dict.rows()) throw Error(ErrorKind::InvalidArgument, "signal length does not match dictionary rows");
  if (!f.allFinite()) throw Error(ErrorKind::InvalidArgument, "signal must be finite");
}

inline void finish(RecoveryResult& out, const IncrementalQR& qr, const Vector& f, Index d) {
  out.iterations = out.support.size();
  out.coefficients = qr.size() ? qr.solve(f) : Vector(0);
  out.estimate = Vector::Zero(d);
  for (std::size_t j = 0; j < out.support.size(); ++j) {
    out.estimate[static_cast<Index>(out.support[j])] = out.coefficients[static_cast<Index>(j)];
  }
}

/// Adds atom i to the factorization and returns the updated residual.
inline void accept(const Dictionary& dict, Index i, IncrementalQR& qr, Vector& r) {
  qr.append(dict.atom(i));
  const auto q = qr.last_q();
  r.noalias() -= q.dot(r) * q;
}

}  // namespace detail

/// OMPT: each step scans atoms (in a fresh random order by default) and takes
/// the first unselected one with |<r, phi_i>| >= t ||r||; stops when
/// ||r|| <= t ||f|| or when a full scan finds nothing.
inline RecoveryResult ompt(const Dictionary& dict, const Vector& f, double t, const SolverOptions& opts = {}) {
  detail::check_signal(dict, f);
  if (!(t > 0.0 && t < 1.0)) throw Error(ErrorKind::TOutOfRange, "threshold t must lie in (0, 1)");
  if (opts.max_iterations && *opts.max_iterations < 1) {
    throw Error(ErrorKind::InvalidArgument, "max_iterations must be at least 1");
  }
  const Index d = dict.cols();
  const std::size_t max_it = opts.max_iterations.value_or(static_cast<std::size_t>(dict.rows()));
  const double stop_fraction = opts.residual_tolerance.value_or(t);

  RecoveryResult out;
  out.method = Method::Ompt;
  out.support = SupportSet(static_cast<std::size_t>(d));
  IncrementalQR qr(dict.rows(), std::min<Index>(dict.rows(), 16));
  Vector r = f;
  const double f_norm = f.norm();
  out.residual_norms.push_back(f_norm);
  std::vector<std::size_t> order(static_cast<std::size_t>(d));

  for (std::size_t s = 0;; ++s) {
    const double r_norm = out.residual_norms.back();
    if (r_norm <= stop_fraction * f_norm) {
      out.stop_reason = StopReason::ResidualBelowThreshold;
      break;
    }
    if (s >= max_it) {
      out.stop_reason = StopReason::MaxIterations;
      break;
    }
    const double bar = t * r_norm;
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(opts.rng_seed, {s}));
    std::optional<Index> chosen;
    for (std::size_t p = 0; p < order.size(); ++p) {
      if (opts.scan_order == ScanOrder::RandomPermutationPerIteration) {
        // Lazy Fisher-Yates: only the scanned prefix is ever shuffled.
        const auto j = p + static_cast<std::size_t>(rng.uniform_index(order.size() - p));
        std::swap(order[p], order[j]);
      }
      const std::size_t i = order[p];
      if (out.support.contains(i)) continue;
      ++out.inner_product_count;
      if (std::abs(dict.atom(static_cast<Index>(i)).dot(r)) >= bar) {
        chosen = static_cast<Index>(i);
        break;
      }
    }
    if (!chosen) {
      out.stop_reason = StopReason::NoIndexMeetsThreshold;
      break;
    }
    detail::accept(dict, *chosen, qr, r);
    out.support.insert(static_cast<std::size_t>(*chosen));
    out.residual_norms.push_back(r.norm());
  }
  detail::finish(out, qr, f, d);
  return out;
}

/// Plain OMP: each step correlates the residual with every unselected atom and
/// takes the largest magnitude (ties to the lower index). Runs k_stop steps
/// unless ||r|| <= residual_tol * ||f|| earlier.
inline RecoveryResult omp(const Dictionary& dict, const Vector& f, std::size_t k_stop, double residual_tol = 0.0) {
  detail::check_signal(dict, f);
  if (k_stop < 1 || k_stop > static_cast<std::size_t>(dict.rows())) {
    throw Error(ErrorKind::KOutOfRange, "k_stop must lie in [1, n]");
  }
  if (!(residual_tol >= 0.0)) throw Error(ErrorKind::InvalidArgument, "residual_tol must be nonnegative");
  const Index d = dict.cols();

  RecoveryResult out;
  out.method = Method::Omp;
  out.support = SupportSet(static_cast<std::size_t>(d));
  IncrementalQR qr(dict.rows(), static_cast<Index>(k_stop));
  Vector r = f;
  const double f_norm = f.norm();
  out.residual_norms.push_back(f_norm);
  Vector corr(d);

  for (std::size_t s = 0;; ++s) {
    if (out.residual_norms.back() <= residual_tol * f_norm) {
      out.stop_reason = StopReason::ResidualBelowThreshold;
      break;
    }
    if (s >= k_stop) {
      out.stop_reason = StopReason::MaxIterations;
      break;
    }
    corr.noalias() = dict.matrix().transpose() * r;
    Index best = -1;
    double best_val = -1.0;
    for (Index i = 0; i < d; ++i) {
      if (out.support.contains(static_cast<std::size_t>(i))) continue;
      ++out.inner_product_count;
      const double v = std::abs(corr[i]);
      if (v > best_val) {
        best_val = v;
        best = i;
      }
    }
    if (best < 0) {
      out.stop_reason = StopReason::MaxIterations;
      break;
    }
    detail::accept(dict, best, qr, r);
    out.support.insert(static_cast<std::size_t>(best));
    out.residual_norms.push_back(r.norm());
  }
  detail::finish(out, qr, f, d);
  return out;
}

struct OmptStrategy {
  double threshold = 0.0;
};

/// k_stop unset: the planted sparsity when the measurement carries one, else n.
struct OmpStrategy {
  std::optional<std::size_t> k_stop;
  double residual_tol = 0.0;
};

using Strategy = std::variant<OmptStrategy, OmpStrategy>;

inline RecoveryResult recover_sparse(const Dictionary& dict, const Measurement& m, const Strategy& strategy,
                                     const SolverOptions& opts = {}) {
  if (const auto* s = std::get_if<OmptStrategy>(&strategy)) return ompt(dict, m.observed, s->threshold, opts);
  const auto& s = std::get<OmpStrategy>(strategy);
  std::size_t k = static_cast<std::size_t>(dict.rows());
  if (s.k_stop) {
    k = *s.k_stop;
  } else if (m.truth && m.truth->sparsity() > 0) {
    k = m.truth->sparsity();
  }
  return omp(dict, m.observed, k, s.residual_tol);
}

}  // namespace ompt
