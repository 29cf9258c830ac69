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

// Command-line front end. run() is the whole program; tools/ompt_cli.cpp only
// forwards argv. Exit status: 0 success, 1 domain error (infeasible
// guarantee, enumeration budget, bad input file), 2 usage error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ompt/experiments.hpp"
#include "ompt/matrix_io.hpp"
#include "ompt/metrics.hpp"
#include "ompt/oracle.hpp"
#include "ompt/report_io.hpp"
#include "ompt/serialize.hpp"
#include "ompt/solvers.hpp"
#include "ompt/thresholds.hpp"

namespace ompt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kFlagGrammar =
    "usage: ompt <metrics|thresholds|recover|oracle|benchmark|converge> [flags]\n"
    "  --matrix PATH  --signal PATH  --config PATH\n"
    "  --n INT  --d INT  --k INT  --kmax INT  --trials INT  --seed INT  --threads INT\n"
    "  --t FLOAT  --nu FLOAT  --delta FLOAT  --epsilon FLOAT  --amin FLOAT  --noise FLOAT\n"
    "  --ric  --omega  --fast  --method {ompt,omp}\n"
    "  --out PATH  --format {json,csv}\n";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parsed flags; which ones are meaningful depends on the subcommand.
struct CommandSpec {
  std::string subcommand;
  std::optional<std::string> matrix, signal, config, out, format, method;
  std::optional<std::size_t> n, d, k, kmax, trials, threads;
  std::optional<std::uint64_t> seed;
  std::optional<double> t, nu, delta, epsilon, amin, noise;
  bool ric = false, omega = false, fast = false;
};

namespace detail {

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Dictionary load_dictionary(const std::string& path) { return normalize_columns(load_matrix(path)); }

template <typename T>
T need(const std::optional<T>& v, const char* flag) {
  if (!v) throw UsageError(std::string("missing required flag ") + flag);
  return *v;
}

inline bool wants_csv(const CommandSpec& s) {
  if (s.format) return *s.format == "csv";
  return s.out && s.out->size() >= 4 && s.out->compare(s.out->size() - 4, 4, ".csv") == 0;
}

/// Planted k-sparse measurement for recover/oracle when no --signal is given.
inline Measurement planted_measurement(const Dictionary& dict, const CommandSpec& s) {
  const std::size_t k = need(s.k, "--k (or --signal)");
  Rng rng(s.seed.value_or(0));
  const auto signal = generate_sparse_signal(static_cast<std::size_t>(dict.cols()), k, UniformSymmetric{}, rng);
  return make_measurement(dict, signal, s.noise.value_or(0.0), rng);
}

inline Measurement measurement_for(const Dictionary& dict, const CommandSpec& s) {
  if (s.signal) {
    Measurement m;
    m.observed = load_vector(*s.signal);
    return m;
  }
  return planted_measurement(dict, s);
}

struct Output {
  std::string text;
  int status = kExitOk;
};

inline Output cmd_metrics(const CommandSpec& s) {
  const Dictionary dict = load_dictionary(need(s.matrix, "--matrix"));
  const auto report = coherence_report(dict, s.kmax.value_or(1), s.ric, s.omega);
  return {dump(report)};
}

inline Output cmd_thresholds(const CommandSpec& s) {
  const std::size_t k = need(s.k, "--k");
  if (s.matrix) {
    const Dictionary dict = load_dictionary(*s.matrix);
    const auto d = static_cast<std::size_t>(dict.cols());
    const auto n = static_cast<std::size_t>(dict.rows());
    const std::size_t kmax = std::min({k + 1, d - 1, n});
    if (kmax < k) throw Error(ErrorKind::KOutOfRange, "k too large for this dictionary");
    const auto report = coherence_report(dict, kmax, true, false);
    Json out = Json::array();
    const auto thm = noiseless_interval(report.nu(k), report.delta(k), k);
    out.push_back(thm);
    if (k >= 2) {
      if (report.has_delta(k + 1)) out.push_back(corollary_interval_ric(report, k));
      out.push_back(corollary_interval_global2(report, k));
      out.push_back(corollary_interval_cumulative(report, k));
      out.push_back(corollary_interval_mutual(report, k));
    }
    return {dump(out), thm.feasible ? kExitOk : kExitDomain};
  }
  const double nu = need(s.nu, "--nu");
  const double delta = need(s.delta, "--delta");
  const auto interval = s.amin ? noisy_interval(nu, delta, k, *s.amin, s.epsilon.value_or(0.0))
                               : noiseless_interval(nu, delta, k);
  return {dump(interval), interval.feasible ? kExitOk : kExitDomain};
}

inline Output cmd_recover(const CommandSpec& s) {
  const Dictionary dict = load_dictionary(need(s.matrix, "--matrix"));
  const Measurement m = measurement_for(dict, s);
  const std::string method = s.method.value_or("ompt");
  SolverOptions opts;
  opts.rng_seed = s.seed.value_or(0);
  Strategy strategy;
  if (method == "ompt") {
    strategy = OmptStrategy{need(s.t, "--t")};
  } else if (method == "omp") {
    strategy = OmpStrategy{s.k, 0.0};
  } else {
    throw UsageError("--method must be ompt or omp");
  }
  return {dump(recover_sparse(dict, m, strategy, opts))};
}

inline Output cmd_oracle(const CommandSpec& s) {
  const Dictionary dict = load_dictionary(need(s.matrix, "--matrix"));
  const Measurement m = measurement_for(dict, s);
  const std::size_t kmax = s.kmax ? *s.kmax : need(s.k, "--kmax (or --k)");
  const auto sol = sparsest_solution(dict, m.observed, kmax);
  return {dump(sol), sol.signal ? kExitOk : kExitDomain};
}

inline TrialConfig benchmark_config(const CommandSpec& s) {
  TrialConfig cfg;
  if (s.config) cfg = load_trial_config(*s.config);
  if (s.n) cfg.n = *s.n;
  cfg.d = s.d.value_or(s.n || !s.config ? 2 * cfg.n : cfg.d);
  if (s.t) {
    cfg.threshold_t = *s.t;
  } else if (s.n || !s.config) {
    cfg.threshold_t = 1.0 / std::sqrt(static_cast<double>(cfg.n));
  }
  if (s.kmax || cfg.sparsity_range.empty()) {
    cfg.sparsity_range.clear();
    for (std::size_t k = 1; k <= s.kmax.value_or(40); ++k) cfg.sparsity_range.push_back(k);
  }
  if (s.trials) {
    cfg.trials_per_k = *s.trials;
  } else if (s.fast) {
    cfg.trials_per_k = 200;
  } else if (!s.config) {
    cfg.trials_per_k = 1000;
  }
  if (s.seed) cfg.rng_seed = *s.seed;
  if (s.noise) cfg.noise_level = *s.noise;
  if (s.threads) cfg.threads = *s.threads;
  return cfg;
}

inline Output cmd_benchmark(const CommandSpec& s) {
  const TrialConfig cfg = benchmark_config(s);
  if (cfg.d != 2 * cfg.n) throw UsageError("benchmark uses the identity+Fourier dictionary, so d must equal 2n");
  const Dictionary dict = build_identity_fourier_dictionary(cfg.n);
  const auto report = run_trials(cfg, dict);
  return {report_to_string(report, wants_csv(s) ? ReportFormat::Csv : ReportFormat::Json)};
}

inline Output cmd_converge(const CommandSpec& s) {
  const double t = need(s.t, "--t");
  Rng rng(s.seed.value_or(0));
  const Dictionary dict =
      s.matrix ? load_dictionary(*s.matrix) : gaussian_dictionary(need(s.n, "--n (or --matrix)"), need(s.d, "--d"), rng);
  const auto d = static_cast<std::size_t>(dict.cols());
  const std::size_t nonzeros = s.k.value_or(std::max<std::size_t>(1, d / 4));
  const auto instance = make_convergence_instance(dict, 1.0, s.epsilon.value_or(0.0), nonzeros, rng);
  SolverOptions opts;
  opts.rng_seed = s.seed.value_or(0);
  const auto rep = convergence_check(dict, instance, t, opts);
  return {dump(rep), rep.passed ? kExitOk : kExitDomain};
}

inline void add_common(CLI::App& sub, CommandSpec& s) {
  sub.add_option("--matrix", s.matrix, "dictionary in matrix text format");
  sub.add_option("--signal", s.signal, "measurement vector (n x 1 matrix text format)");
  sub.add_option("--config", s.config, "benchmark configuration (key=value)");
  sub.add_option("--n", s.n);
  sub.add_option("--d", s.d);
  sub.add_option("--k", s.k);
  sub.add_option("--kmax", s.kmax);
  sub.add_option("--trials", s.trials);
  sub.add_option("--seed", s.seed);
  sub.add_option("--threads", s.threads);
  sub.add_option("--t", s.t, "OMPT threshold in (0, 1)");
  sub.add_option("--nu", s.nu);
  sub.add_option("--delta", s.delta);
  sub.add_option("--epsilon", s.epsilon);
  sub.add_option("--amin", s.amin);
  sub.add_option("--noise", s.noise);
  sub.add_flag("--ric", s.ric);
  sub.add_flag("--omega", s.omega);
  sub.add_flag("--fast", s.fast);
  sub.add_option("--method", s.method)->check(CLI::IsMember({"ompt", "omp"}));
  sub.add_option("--out", s.out);
  sub.add_option("--format", s.format)->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse recovery with orthogonal matching pursuit and thresholding", "ompt"};
  app.require_subcommand(1, 1);
  CommandSpec spec;
  for (const char* name : {"metrics", "thresholds", "recover", "oracle", "benchmark", "converge"}) {
    auto* sub = app.add_subcommand(name);
    detail::add_common(*sub, spec);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << kFlagGrammar;
    return kExitUsage;
  }
  spec.subcommand = app.get_subcommands().front()->get_name();

  try {
    if (spec.format && *spec.format == "csv" && spec.subcommand != "benchmark") {
      throw UsageError("--format csv is only available for benchmark");
    }
    detail::Output result;
    if (spec.subcommand == "metrics") result = detail::cmd_metrics(spec);
    else if (spec.subcommand == "thresholds") result = detail::cmd_thresholds(spec);
    else if (spec.subcommand == "recover") result = detail::cmd_recover(spec);
    else if (spec.subcommand == "oracle") result = detail::cmd_oracle(spec);
    else if (spec.subcommand == "benchmark") result = detail::cmd_benchmark(spec);
    else result = detail::cmd_converge(spec);

    if (spec.out) {
      std::ofstream file(*spec.out, std::ios::binary);
      if (!file) throw Error(ErrorKind::Io, "cannot open " + *spec.out + " for writing");
      file << result.text;
      if (!file) throw Error(ErrorKind::Io, "write failed for " + *spec.out);
    } else {
      out << result.text;
    }
    return result.status;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n' << kFlagGrammar;
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("ompt");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace ompt::cli
