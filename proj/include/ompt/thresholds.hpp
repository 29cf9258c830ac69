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

// Admissibility conditions on the OMPT threshold t, the noise level and the
// iteration count. Intervals are half-open: lower is exclusive, upper inclusive.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "ompt/error.hpp"
#include "ompt/metrics.hpp"

namespace ompt {

enum class IntervalSource { Noiseless, CorollaryRic, CorollaryGlobal2, CorollaryCumulative, CorollaryMutual, Noisy };

inline const char* to_string(IntervalSource s) {
  switch (s) {
    case IntervalSource::Noiseless: return "theorem1";
    case IntervalSource::CorollaryRic: return "cor_i";
    case IntervalSource::CorollaryGlobal2: return "cor_ii";
    case IntervalSource::CorollaryCumulative: return "cor_iii";
    case IntervalSource::CorollaryMutual: return "cor_iv";
    case IntervalSource::Noisy: return "noisy";
  }
  return "unknown";
}

/// Admissible thresholds t in (lower, upper].
struct ThresholdInterval {
  double lower = 0.0;
  double upper = 0.0;
  bool feasible = false;
  IntervalSource source = IntervalSource::Noiseless;

  bool contains(double t) const { return feasible && t > lower && t <= upper; }
  double midpoint() const { return 0.5 * (lower + upper); }
};

struct NoisyRecoveryBudget {
  double epsilon_max = 0.0;
  ThresholdInterval interval;
  double a_min = 0.0;
  double error_bound = 0.0;
};

struct CorollaryIntervals {
  ThresholdInterval ric;         // (i)   delta_k, delta_{k+1}
  ThresholdInterval global2;     // (ii)  nu_k, nu_{k-1}
  ThresholdInterval cumulative;  // (iii) mu_{1,k-1}, mu_{1,k}
  ThresholdInterval mutual;      // (iv)  M
};

namespace detail {

inline void check_k(std::size_t k) {
  if (k < 1) throw Error(ErrorKind::KOutOfRange, "k must be positive");
}

inline void check_delta(double delta) {
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw Error(ErrorKind::DeltaOutOfRange, "delta_k must lie in [0, 1), got " + std::to_string(delta));
  }
}

/// Every noiseless interval has the shape (c / sqrt(1 - x), sqrt(1 - x) / sqrt(k)]
/// for a cross term c and a diagonal term x; `condition` is the inequality as
/// stated for that source, evaluated by the caller.
inline ThresholdInterval shaped_interval(double cross, double diag, std::size_t k, bool condition, IntervalSource src) {
  ThresholdInterval out;
  out.source = src;
  if (!(diag < 1.0)) {
    out.lower = std::numeric_limits<double>::infinity();
    out.upper = 0.0;
    out.feasible = false;
    return out;
  }
  const double s = std::sqrt(1.0 - diag);
  out.lower = cross / s;
  out.upper = s / std::sqrt(static_cast<double>(k));
  out.feasible = condition && out.lower < out.upper;
  return out;
}

}  // namespace detail

/// Threshold range that guarantees exact recovery in k steps when
/// delta_k + sqrt(k) nu_k < 1.
inline ThresholdInterval noiseless_interval(double nu_k, double delta_k, std::size_t k) {
  detail::check_k(k);
  detail::check_delta(delta_k);
  if (!(nu_k >= 0.0)) throw Error(ErrorKind::InvalidArgument, "nu_k must be nonnegative");
  const double rk = std::sqrt(static_cast<double>(k));
  return detail::shaped_interval(nu_k, delta_k, k, delta_k + rk * nu_k < 1.0, IntervalSource::Noiseless);
}

inline ThresholdInterval corollary_interval_ric(const CoherenceReport& r, std::size_t k) {
  if (k < 2) throw Error(ErrorKind::KOutOfRange, "corollary conditions need k >= 2");
  const double dk = r.delta(k), dk1 = r.delta(k + 1);
  const double rk = std::sqrt(static_cast<double>(k));
  return detail::shaped_interval(dk1, dk, k, dk + rk * dk1 < 1.0, IntervalSource::CorollaryRic);
}

inline ThresholdInterval corollary_interval_global2(const CoherenceReport& r, std::size_t k) {
  if (k < 2) throw Error(ErrorKind::KOutOfRange, "corollary conditions need k >= 2");
  const double nk = r.nu(k), nk1 = r.nu(k - 1);
  const double rk = std::sqrt(static_cast<double>(k)), rk1 = std::sqrt(static_cast<double>(k - 1));
  return detail::shaped_interval(nk, nk1 * rk1, k, nk * rk + nk1 * rk1 < 1.0, IntervalSource::CorollaryGlobal2);
}

inline ThresholdInterval corollary_interval_cumulative(const CoherenceReport& r, std::size_t k) {
  if (k < 2) throw Error(ErrorKind::KOutOfRange, "corollary conditions need k >= 2");
  const double mk = r.mu(k), mk1 = r.mu(k - 1);
  const double rk = std::sqrt(static_cast<double>(k));
  return detail::shaped_interval(mk, mk1, k, mk1 + rk * mk < 1.0, IntervalSource::CorollaryCumulative);
}

inline ThresholdInterval corollary_interval_mutual(const CoherenceReport& r, std::size_t k) {
  if (k < 2) throw Error(ErrorKind::KOutOfRange, "corollary conditions need k >= 2");
  const double m = r.mutual;
  const double kd = static_cast<double>(k);
  return detail::shaped_interval(std::sqrt(kd) * m, (kd - 1.0) * m, k, m < 1.0 / (2.0 * kd - 1.0),
                                 IntervalSource::CorollaryMutual);
}

/// All four sufficient conditions. Condition (i) needs delta_k and delta_{k+1}
/// in the report; MissingMetric otherwise.
inline CorollaryIntervals corollary_intervals(const CoherenceReport& report, std::size_t k) {
  if (k < 2) throw Error(ErrorKind::KOutOfRange, "corollary conditions need k >= 2");
  return {corollary_interval_ric(report, k), corollary_interval_global2(report, k),
          corollary_interval_cumulative(report, k), corollary_interval_mutual(report, k)};
}

/// Threshold range under additive noise of norm at most epsilon. Degenerate
/// denominators give an infeasible interval rather than an error.
inline ThresholdInterval noisy_interval(double nu_k, double delta_k, std::size_t k, double a_min, double epsilon) {
  detail::check_k(k);
  detail::check_delta(delta_k);
  if (!(nu_k >= 0.0)) throw Error(ErrorKind::InvalidArgument, "nu_k must be nonnegative");
  if (!(a_min > 0.0)) throw Error(ErrorKind::InvalidArgument, "a_min must be positive");
  if (!(epsilon >= 0.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be nonnegative");
  ThresholdInterval out;
  out.source = IntervalSource::Noisy;
  const double s = std::sqrt(1.0 - delta_k);
  const double kd = static_cast<double>(k);
  const double lower_den = s * a_min - epsilon;
  out.upper = std::max(0.0, ((1.0 - delta_k) * a_min - epsilon) / (std::sqrt(kd * (1.0 - delta_k)) * a_min + epsilon));
  if (!(lower_den > 0.0)) {
    out.lower = std::numeric_limits<double>::infinity();
    out.feasible = false;
    return out;
  }
  out.lower = (nu_k * a_min + epsilon) / lower_den;
  out.feasible = out.lower < out.upper;
  return out;
}

/// Largest noise level for which the noisy interval is nonempty; 0 when
/// delta_k + sqrt(k) nu_k >= 1.
inline double max_noise_level(double nu_k, double delta_k, std::size_t k, double a_min) {
  detail::check_k(k);
  detail::check_delta(delta_k);
  if (!(a_min > 0.0)) throw Error(ErrorKind::InvalidArgument, "a_min must be positive");
  const double rk = std::sqrt(static_cast<double>(k));
  if (!(delta_k + rk * nu_k < 1.0)) return 0.0;
  const double s = std::sqrt(1.0 - delta_k);
  return s * (1.0 - delta_k - rk * nu_k) / ((rk + 1.0) * s + (1.0 - delta_k) + nu_k) * a_min;
}

/// Squared-error bound epsilon^2 / (1 - delta_k) on the recovered coefficients.
inline double error_bound(double delta_k, double epsilon) {
  detail::check_delta(delta_k);
  if (!(epsilon >= 0.0)) throw Error(ErrorKind::InvalidArgument, "epsilon must be nonnegative");
  return epsilon * epsilon / (1.0 - delta_k);
}

/// Smallest m with (1 - t^2)^{m/2} <= t, i.e. ceil(ln t^2 / ln(1 - t^2)).
inline std::size_t iteration_bound(double t) {
  if (!(t > 0.0 && t < 1.0)) throw Error(ErrorKind::TOutOfRange, "t must lie in (0, 1)");
  const double ratio = std::log(t * t) / std::log1p(-t * t);
  // Absorb rounding so that exact integer ratios (t = 1/sqrt(2) -> 1) are not bumped up.
  const double m = std::ceil(ratio - 1e-9 * std::max(1.0, ratio));
  return static_cast<std::size_t>(std::max(1.0, m));
}

inline NoisyRecoveryBudget noisy_budget(double nu_k, double delta_k, std::size_t k, double a_min, double epsilon) {
  NoisyRecoveryBudget b;
  b.a_min = a_min;
  b.epsilon_max = max_noise_level(nu_k, delta_k, k, a_min);
  b.interval = noisy_interval(nu_k, delta_k, k, a_min, epsilon);
  b.error_bound = error_bound(delta_k, epsilon);
  return b;
}

}  // namespace ompt
