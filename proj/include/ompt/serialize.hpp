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

// JSON forms of the library's result types (nlohmann::json, found through ADL).

#include <string>
#include <vector>

#include <json.hpp>

#include "ompt/experiments.hpp"
#include "ompt/metrics.hpp"
#include "ompt/oracle.hpp"
#include "ompt/solvers.hpp"
#include "ompt/thresholds.hpp"

namespace ompt {

using Json = nlohmann::json;

namespace detail {
inline std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }
}  // namespace detail

inline void to_json(Json& j, const CoherenceReport& r) {
  j = Json::object();
  j["mutual"] = r.mutual;
  j["global2"] = r.global2;
  j["cumulative"] = r.cumulative;
  j["ric"] = r.ric ? Json(*r.ric) : Json(nullptr);
  j["omega"] = r.omega ? Json(*r.omega) : Json(nullptr);
  j["kmax"] = r.kmax;
}

inline void from_json(const Json& j, CoherenceReport& r) {
  r.mutual = j.at("mutual").get<double>();
  r.global2 = j.at("global2").get<std::vector<double>>();
  r.cumulative = j.at("cumulative").get<std::vector<double>>();
  r.ric = j.at("ric").is_null() ? std::nullopt : std::optional(j.at("ric").get<std::vector<double>>());
  r.omega = j.at("omega").is_null() ? std::nullopt : std::optional(j.at("omega").get<std::vector<double>>());
  r.kmax = j.at("kmax").get<std::size_t>();
}

// Non-finite endpoints (the infeasible "lower = +inf" case) serialize as null.
inline void to_json(Json& j, const ThresholdInterval& t) {
  j = Json::object();
  j["lower"] = t.lower;
  j["upper"] = t.upper;
  j["feasible"] = t.feasible;
  j["source"] = to_string(t.source);
}

inline void to_json(Json& j, const CorollaryIntervals& c) { j = Json::array({c.ric, c.global2, c.cumulative, c.mutual}); }

inline void to_json(Json& j, const NoisyRecoveryBudget& b) {
  j = Json::object();
  j["epsilon_max"] = b.epsilon_max;
  j["interval"] = b.interval;
  j["a_min"] = b.a_min;
  j["error_bound"] = b.error_bound;
}

inline void to_json(Json& j, const RecoveryResult& r) {
  j = Json::object();
  j["support"] = r.support.indices();
  j["coefficients"] = detail::to_std(r.coefficients);
  j["residual_norms"] = r.residual_norms;
  j["inner_products"] = r.inner_product_count;
  j["iterations"] = r.iterations;
  j["stop_reason"] = to_string(r.stop_reason);
}

inline void to_json(Json& j, const OracleSolution& s) {
  j = Json::object();
  if (s.signal) {
    j["support"] = s.signal->support().indices();
    j["values"] = detail::to_std(s.signal->values());
  } else {
    j["support"] = nullptr;
    j["values"] = nullptr;
  }
  j["sparsity"] = s.sparsity ? Json(*s.sparsity) : Json(nullptr);
  j["unique"] = s.unique;
  j["residual_norm"] = s.residual_norm;
}

inline void to_json(Json& j, const ConvergenceReport& c) {
  j = Json::object();
  j["result"] = c.result;
  j["residual_bound"] = c.residual_bound;
  j["final_residual"] = c.final_residual;
  j["residual_margin"] = c.residual_margin;
  j["residual_ok"] = c.residual_ok;
  j["envelope_margin"] = c.envelope_margin;
  j["envelope_ok"] = c.envelope_ok;
  j["iteration_bound"] = c.iteration_bound ? Json(*c.iteration_bound) : Json(nullptr);
  j["iterations_ok"] = c.iterations_ok;
  j["passed"] = c.passed;
}

inline void to_json(Json& j, const TrialConfig& c) {
  j = Json::object();
  j["n"] = c.n;
  j["d"] = c.d;
  j["sparsity_range"] = c.sparsity_range;
  j["trials_per_k"] = c.trials_per_k;
  j["threshold_t"] = c.threshold_t;
  j["noise_level"] = c.noise_level;
  j["rng_seed"] = c.rng_seed;
  j["value_lo"] = c.value_distribution.lo;
  j["value_hi"] = c.value_distribution.hi;
  j["success_tol"] = c.success_tol;
  j["ompt_residual_tol"] = c.ompt_residual_tol ? Json(*c.ompt_residual_tol) : Json(nullptr);
}

inline void from_json(const Json& j, TrialConfig& c) {
  c.n = j.at("n").get<std::size_t>();
  c.d = j.at("d").get<std::size_t>();
  c.sparsity_range = j.at("sparsity_range").get<std::vector<std::size_t>>();
  c.trials_per_k = j.at("trials_per_k").get<std::size_t>();
  c.threshold_t = j.at("threshold_t").get<double>();
  c.noise_level = j.at("noise_level").get<double>();
  c.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  c.value_distribution.lo = j.at("value_lo").get<double>();
  c.value_distribution.hi = j.at("value_hi").get<double>();
  c.success_tol = j.at("success_tol").get<double>();
  if (j.contains("ompt_residual_tol") && !j.at("ompt_residual_tol").is_null()) {
    c.ompt_residual_tol = j.at("ompt_residual_tol").get<double>();
  }
}

inline void to_json(Json& j, const TrialRow& r) {
  j = Json::object();
  j["k"] = r.k;
  j["success_rate_ompt"] = r.success_rate_ompt;
  j["success_rate_omp"] = r.success_rate_omp;
  j["mean_inner_products_ompt"] = r.mean_inner_products_ompt;
  j["mean_inner_products_omp"] = r.mean_inner_products_omp;
  j["mean_iterations"] = r.mean_iterations;
  j["omp_full_runs"] = r.omp_full_runs;
  j["solver_errors"] = r.solver_errors;
}

inline void from_json(const Json& j, TrialRow& r) {
  r.k = j.at("k").get<std::size_t>();
  r.success_rate_ompt = j.at("success_rate_ompt").get<double>();
  r.success_rate_omp = j.at("success_rate_omp").get<double>();
  r.mean_inner_products_ompt = j.at("mean_inner_products_ompt").get<double>();
  r.mean_inner_products_omp = j.at("mean_inner_products_omp").get<double>();
  r.mean_iterations = j.at("mean_iterations").get<double>();
  r.omp_full_runs = j.value("omp_full_runs", std::size_t{0});
  r.solver_errors = j.value("solver_errors", std::size_t{0});
}

inline void to_json(Json& j, const TrialReport& r) {
  j = Json::object();
  j["rows"] = r.rows;
  j["config"] = r.config;
  j["seed"] = r.config.rng_seed;
  j["timestamp"] = r.timestamp;
}

inline void from_json(const Json& j, TrialReport& r) {
  r.rows = j.at("rows").get<std::vector<TrialRow>>();
  r.config = j.at("config").get<TrialConfig>();
  r.timestamp = j.value("timestamp", std::string{});
}

}  // namespace ompt
