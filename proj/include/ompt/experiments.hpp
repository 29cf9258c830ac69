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

// Simulation harness: structured dictionaries, random sparse signals,
// Monte-Carlo trials comparing OMPT with OMP, and residual-convergence checks.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ompt/error.hpp"
#include "ompt/linalg.hpp"
#include "ompt/random.hpp"
#include "ompt/solvers.hpp"
#include "ompt/thresholds.hpp"

namespace ompt {

/// Values below this magnitude are redrawn so that a_min stays meaningful.
inline constexpr double kValueFloor = 1e-6;
/// Estimate entries with |x_i| <= kSupportTol * ||a|| count as zero when
/// comparing supports; least-squares leaves ~1e-16 on spurious atoms.
inline constexpr double kSupportTol = 1e-10;

struct UniformSymmetric {
  double lo = -1.0;
  double hi = 1.0;
};

struct TrialConfig {
  std::size_t n = 128;
  std::size_t d = 256;
  std::vector<std::size_t> sparsity_range;
  std::size_t trials_per_k = 1000;
  double threshold_t = 1.0 / std::sqrt(128.0);
  double noise_level = 0.0;
  std::uint64_t rng_seed = 0;
  UniformSymmetric value_distribution;
  double success_tol = 1e-6;
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  std::size_t threads = 0;
  /// Forwarded to SolverOptions::residual_tolerance for the OMPT runs.
  std::optional<double> ompt_residual_tol;
};

struct TrialRow {
  std::size_t k = 0;
  double success_rate_ompt = 0.0;
  double success_rate_omp = 0.0;
  double mean_inner_products_ompt = 0.0;
  double mean_inner_products_omp = 0.0;
  double mean_iterations = 0.0;  // OMPT
  std::size_t omp_full_runs = 0;  // OMP runs that completed exactly k iterations
  std::size_t solver_errors = 0;
};

struct TrialReport {
  TrialConfig config;
  std::vector<TrialRow> rows;
  std::string timestamp;
};

struct ConvergenceInstance {
  Vector coefficients;       // c, with ||c||_1 = l1_norm
  double l1_norm = 0.0;      // C(eps)
  double perturbation_norm = 0.0;  // eps
  Vector noise;              // w, ||w||_2 = eps
  Vector observed;           // f = Phi c + w
};

struct ConvergenceReport {
  RecoveryResult result;
  double residual_bound = 0.0;     // eps + t C
  double final_residual = 0.0;
  double residual_margin = 0.0;    // bound - final
  bool residual_ok = false;
  double envelope_margin = 0.0;    // min_s (1-t^2)^{s/2} ||f|| - ||r_s||
  bool envelope_ok = false;
  std::optional<std::size_t> iteration_bound;  // only when stopped by the residual rule
  bool iterations_ok = true;
  bool passed = false;
};

/// [I | F] with F the orthonormal real trigonometric basis: constant column,
/// cos/sin pairs for frequencies 1..n/2-1, and the alternating column.
/// Cross-block inner products are bounded by sqrt(2/n).
inline Dictionary build_identity_fourier_dictionary(std::size_t n) {
  if (n < 2 || n % 2 != 0) throw Error(ErrorKind::InvalidArgument, "identity+Fourier dictionary needs an even n >= 2");
  const auto nn = static_cast<Index>(n);
  Matrix m = Matrix::Zero(nn, 2 * nn);
  m.leftCols(nn).setIdentity();
  const double c0 = 1.0 / std::sqrt(static_cast<double>(n));
  const double c1 = std::sqrt(2.0 / static_cast<double>(n));
  Index col = nn;
  m.col(col++).setConstant(c0);
  for (Index freq = 1; freq < nn / 2; ++freq) {
    for (Index j = 0; j < nn; ++j) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(freq * j % nn) / static_cast<double>(n);
      m(j, col) = c1 * std::cos(angle);
      m(j, col + 1) = c1 * std::sin(angle);
    }
    col += 2;
  }
  for (Index j = 0; j < nn; ++j) m(j, col) = (j % 2 == 0) ? c0 : -c0;
  // Renormalize so rounding in cos/sin does not break the unit-norm contract.
  return normalize_columns(m);
}

/// Gaussian entries, columns normalized.
inline Dictionary gaussian_dictionary(std::size_t n, std::size_t d, Rng& rng) {
  Matrix m(static_cast<Index>(n), static_cast<Index>(d));
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) m(i, j) = rng.normal();
  return normalize_columns(m);
}

/// Support uniform without replacement (stored ascending), values i.i.d. from
/// the distribution with magnitudes redrawn below kValueFloor.
inline SparseSignal generate_sparse_signal(std::size_t d, std::size_t k, const UniformSymmetric& dist, Rng& rng) {
  if (k > d) throw Error(ErrorKind::KOutOfRange, "sparsity exceeds dimension");
  if (!(dist.hi > dist.lo) || std::max(std::abs(dist.lo), std::abs(dist.hi)) <= kValueFloor) {
    throw Error(ErrorKind::InvalidArgument, "value distribution has no mass above the magnitude floor");
  }
  std::vector<std::size_t> pool(d);
  for (std::size_t i = 0; i < d; ++i) pool[i] = i;
  for (std::size_t p = 0; p < k; ++p) {
    const auto j = p + static_cast<std::size_t>(rng.uniform_index(d - p));
    std::swap(pool[p], pool[j]);
  }
  std::vector<std::size_t> support(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(support.begin(), support.end());
  Vector values(static_cast<Index>(k));
  for (Index i = 0; i < values.size(); ++i) {
    double v = 0.0;
    do {
      v = rng.uniform(dist.lo, dist.hi);
    } while (std::abs(v) < kValueFloor);
    values[i] = v;
  }
  return SparseSignal(SupportSet(d, support), std::move(values));
}

/// Uniformly random direction scaled to exactly `level` (zero vector for level 0).
inline Vector random_noise(std::size_t n, double level, Rng& rng) {
  Vector w = Vector::Zero(static_cast<Index>(n));
  if (level == 0.0) return w;
  if (!(level > 0.0)) throw Error(ErrorKind::InvalidArgument, "noise level must be nonnegative");
  do {
    for (Index i = 0; i < w.size(); ++i) w[i] = rng.normal();
  } while (w.norm() == 0.0);
  w *= level / w.norm();
  return w;
}

inline Measurement make_measurement(const Dictionary& dict, const SparseSignal& signal, double noise_level, Rng& rng) {
  if (signal.dim() != static_cast<std::size_t>(dict.cols())) {
    throw Error(ErrorKind::InvalidArgument, "signal dimension does not match dictionary");
  }
  Measurement m;
  m.observed = dict.matrix() * signal.dense() + random_noise(static_cast<std::size_t>(dict.rows()), noise_level, rng);
  m.noise_level = noise_level;
  m.truth = signal;
  return m;
}

/// Numerical support of an estimate relative to a reference scale.
inline std::vector<std::size_t> numerical_support(const Vector& x, double scale) {
  std::vector<std::size_t> s;
  for (Index i = 0; i < x.size(); ++i)
    if (std::abs(x[i]) > kSupportTol * scale) s.push_back(static_cast<std::size_t>(i));
  return s;
}

/// Support match plus relative l2 error within tol.
inline bool recovery_succeeded(const Vector& estimate, const SparseSignal& truth, double tol) {
  const Vector a = truth.dense();
  const double a_norm = a.norm();
  if (estimate.size() != a.size()) return false;
  if (numerical_support(estimate, a_norm) != truth.support().sorted()) return false;
  return (estimate - a).norm() <= tol * a_norm;
}

namespace detail {

/// Neumaier-compensated sum in index order.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      c_ += (sum_ - t) + x;
    } else {
      c_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + c_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

struct TrialOutcome {
  bool ompt_ok = false;
  bool omp_ok = false;
  bool ompt_ran = false;
  bool omp_ran = false;
  double ompt_inner = 0.0;
  double omp_inner = 0.0;
  double ompt_iters = 0.0;
  bool omp_full = false;
};

inline TrialOutcome run_one_trial(const TrialConfig& cfg, const Dictionary& dict, std::size_t k, std::size_t trial) {
  TrialOutcome o;
  Rng rng(derive_seed(cfg.rng_seed, {k, trial}));
  const SparseSignal a = generate_sparse_signal(cfg.d, k, cfg.value_distribution, rng);
  const Measurement m = make_measurement(dict, a, cfg.noise_level, rng);

  SolverOptions opts;
  opts.rng_seed = derive_seed(cfg.rng_seed, {k, trial, 1});
  opts.residual_tolerance = cfg.ompt_residual_tol;
  try {
    const auto res = ompt(dict, m.observed, cfg.threshold_t, opts);
    o.ompt_ran = true;
    o.ompt_inner = static_cast<double>(res.inner_product_count);
    o.ompt_iters = static_cast<double>(res.iterations);
    o.ompt_ok = recovery_succeeded(res.estimate, a, cfg.success_tol);
  } catch (const Error&) {
  }
  if (k >= 1) {
    try {
      const auto res = omp(dict, m.observed, k, 0.0);
      o.omp_ran = true;
      o.omp_inner = static_cast<double>(res.inner_product_count);
      o.omp_full = res.iterations == k;
      o.omp_ok = recovery_succeeded(res.estimate, a, cfg.success_tol);
    } catch (const Error&) {
    }
  }
  return o;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace detail

inline void validate(const TrialConfig& cfg) {
  if (cfg.trials_per_k < 1) throw Error(ErrorKind::InvalidArgument, "trials_per_k must be at least 1");
  if (!(cfg.threshold_t > 0.0 && cfg.threshold_t < 1.0)) throw Error(ErrorKind::TOutOfRange, "threshold_t must lie in (0, 1)");
  if (!(cfg.noise_level >= 0.0)) throw Error(ErrorKind::InvalidArgument, "noise_level must be nonnegative");
  if (!(cfg.success_tol >= 0.0)) throw Error(ErrorKind::InvalidArgument, "success_tol must be nonnegative");
  for (auto k : cfg.sparsity_range) {
    if (k < 1 || k > cfg.d || k > cfg.n) throw Error(ErrorKind::KOutOfRange, "sparsity " + std::to_string(k) + " out of range");
  }
}

/// Runs trials_per_k independent trials for each sparsity. Each trial owns an
/// RNG stream derived from (seed, k, trial), so the report does not depend on
/// the number of threads.
inline TrialReport run_trials(const TrialConfig& config, const Dictionary& dict) {
  validate(config);
  if (static_cast<std::size_t>(dict.rows()) != config.n || static_cast<std::size_t>(dict.cols()) != config.d) {
    throw Error(ErrorKind::InvalidArgument, "dictionary dimensions do not match the configuration");
  }
  TrialReport report;
  report.config = config;
  std::size_t threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, config.trials_per_k);

  std::vector<detail::TrialOutcome> outcomes(config.trials_per_k);
  for (auto k : config.sparsity_range) {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < outcomes.size(); i = next++) outcomes[i] = detail::run_one_trial(config, dict, k, i);
    };
    if (threads <= 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(worker);
    }

    detail::CompensatedSum ok_t, ok_p, ip_t, ip_p, it_t;
    std::size_t ran_t = 0, ran_p = 0, full = 0, errors = 0;
    for (const auto& o : outcomes) {
      ok_t.add(o.ompt_ok ? 1.0 : 0.0);
      ok_p.add(o.omp_ok ? 1.0 : 0.0);
      if (o.ompt_ran) {
        ++ran_t;
        ip_t.add(o.ompt_inner);
        it_t.add(o.ompt_iters);
      } else {
        ++errors;
      }
      if (o.omp_ran) {
        ++ran_p;
        ip_p.add(o.omp_inner);
      } else {
        ++errors;
      }
      if (o.omp_full) ++full;
    }
    const double trials = static_cast<double>(config.trials_per_k);
    TrialRow row;
    row.k = k;
    row.success_rate_ompt = ok_t.value() / trials;
    row.success_rate_omp = ok_p.value() / trials;
    row.mean_inner_products_ompt = ran_t ? ip_t.value() / static_cast<double>(ran_t) : 0.0;
    row.mean_inner_products_omp = ran_p ? ip_p.value() / static_cast<double>(ran_p) : 0.0;
    row.mean_iterations = ran_t ? it_t.value() / static_cast<double>(ran_t) : 0.0;
    row.omp_full_runs = full;
    row.solver_errors = errors;
    report.rows.push_back(row);
  }
  report.timestamp = detail::utc_timestamp();
  return report;
}

/// Random coefficients with `nonzeros` entries scaled to ||c||_1 = l1_norm and
/// a perturbation of norm exactly epsilon.
inline ConvergenceInstance make_convergence_instance(const Dictionary& dict, double l1_norm, double epsilon,
                                                     std::size_t nonzeros, Rng& rng) {
  const auto d = static_cast<std::size_t>(dict.cols());
  if (nonzeros < 1 || nonzeros > d) throw Error(ErrorKind::KOutOfRange, "nonzeros must lie in [1, d]");
  if (!(l1_norm > 0.0)) throw Error(ErrorKind::InvalidArgument, "l1 norm must be positive");
  const SparseSignal s = generate_sparse_signal(d, nonzeros, UniformSymmetric{}, rng);
  ConvergenceInstance inst;
  inst.coefficients = s.dense();
  inst.coefficients *= l1_norm / inst.coefficients.lpNorm<1>();
  inst.l1_norm = l1_norm;
  inst.perturbation_norm = epsilon;
  inst.noise = random_noise(static_cast<std::size_t>(dict.rows()), epsilon, rng);
  inst.observed = dict.matrix() * inst.coefficients + inst.noise;
  return inst;
}

/// Runs OMPT on the instance and checks the residual bound eps + t C, the
/// geometric envelope (1 - t^2)^{s/2} ||f|| at every step, and, for runs that
/// stopped on the residual rule, the iteration bound.
inline ConvergenceReport convergence_check(const Dictionary& dict, const ConvergenceInstance& instance, double t,
                                           const SolverOptions& opts = {}) {
  if (!(t > 0.0 && t < 1.0)) throw Error(ErrorKind::TOutOfRange, "t must lie in (0, 1)");
  constexpr double slack = 1e-8;
  ConvergenceReport rep;
  rep.result = ompt(dict, instance.observed, t, opts);
  rep.residual_bound = instance.perturbation_norm + t * instance.l1_norm;
  rep.final_residual = rep.result.residual_norms.back();
  rep.residual_margin = rep.residual_bound - rep.final_residual;
  rep.residual_ok = rep.final_residual <= rep.residual_bound + slack;

  const double f_norm = rep.result.residual_norms.front();
  const double rate = std::sqrt(1.0 - t * t);
  rep.envelope_margin = std::numeric_limits<double>::infinity();
  rep.envelope_ok = true;
  for (std::size_t s = 0; s < rep.result.residual_norms.size(); ++s) {
    const double envelope = std::pow(rate, static_cast<double>(s)) * f_norm;
    const double margin = envelope - rep.result.residual_norms[s];
    rep.envelope_margin = std::min(rep.envelope_margin, margin);
    if (margin < -slack) rep.envelope_ok = false;
  }
  if (rep.result.stop_reason == StopReason::ResidualBelowThreshold) {
    rep.iteration_bound = iteration_bound(t);
    rep.iterations_ok = rep.result.iterations <= *rep.iteration_bound;
  }
  rep.passed = rep.residual_ok && rep.envelope_ok && rep.iterations_ok;
  return rep;
}

}  // namespace ompt
