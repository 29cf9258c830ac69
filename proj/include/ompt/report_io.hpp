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

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ompt/experiments.hpp"
#include "ompt/matrix_io.hpp"
#include "ompt/serialize.hpp"

namespace ompt {

enum class ReportFormat { Csv, Json };

inline constexpr const char* kReportCsvHeader = "k,success_ompt,success_omp,ip_ompt,ip_omp,iters_mean";

inline void write_report_csv(std::ostream& out, const TrialReport& report) {
  out << kReportCsvHeader << '\n';
  for (const auto& r : report.rows) {
    out << r.k << ',' << format_double(r.success_rate_ompt) << ',' << format_double(r.success_rate_omp) << ','
        << format_double(r.mean_inner_products_ompt) << ',' << format_double(r.mean_inner_products_omp) << ','
        << format_double(r.mean_iterations) << '\n';
  }
}

inline std::vector<TrialRow> read_report_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kReportCsvHeader) throw Error(ErrorKind::Parse, "missing or unexpected CSV header");
  std::vector<TrialRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() != 6) throw Error(ErrorKind::Parse, "expected 6 CSV fields in \"" + line + "\"");
    try {
      TrialRow r;
      r.k = std::stoul(cells[0]);
      r.success_rate_ompt = std::stod(cells[1]);
      r.success_rate_omp = std::stod(cells[2]);
      r.mean_inner_products_ompt = std::stod(cells[3]);
      r.mean_inner_products_omp = std::stod(cells[4]);
      r.mean_iterations = std::stod(cells[5]);
      rows.push_back(r);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parse, "bad CSV row \"" + line + "\"");
    }
  }
  return rows;
}

inline std::string report_to_string(const TrialReport& report, ReportFormat format) {
  if (format == ReportFormat::Json) return Json(report).dump(2) + "\n";
  std::ostringstream out;
  write_report_csv(out, report);
  return out.str();
}

inline void export_report(const TrialReport& report, const std::string& path, ReportFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path + " for writing");
  out << report_to_string(report, format);
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path);
}

/// Flat key=value configuration; '#' starts a comment. sparsity_range accepts
/// "a:b" (inclusive) or a comma-separated list.
inline TrialConfig parse_trial_config(std::istream& in) {
  TrialConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Parse, "line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "n") {
        cfg.n = std::stoul(value);
      } else if (key == "d") {
        cfg.d = std::stoul(value);
      } else if (key == "sparsity_range") {
        cfg.sparsity_range.clear();
        if (const auto colon = value.find(':'); colon != std::string::npos) {
          const auto lo = std::stoul(value.substr(0, colon));
          const auto hi = std::stoul(value.substr(colon + 1));
          for (auto k = lo; k <= hi; ++k) cfg.sparsity_range.push_back(k);
        } else {
          std::stringstream ss(value);
          for (std::string cell; std::getline(ss, cell, ',');) cfg.sparsity_range.push_back(std::stoul(trim(cell)));
        }
      } else if (key == "trials_per_k") {
        cfg.trials_per_k = std::stoul(value);
      } else if (key == "threshold_t") {
        cfg.threshold_t = std::stod(value);
      } else if (key == "noise_level") {
        cfg.noise_level = std::stod(value);
      } else if (key == "rng_seed") {
        cfg.rng_seed = std::stoull(value);
      } else if (key == "value_lo") {
        cfg.value_distribution.lo = std::stod(value);
      } else if (key == "value_hi") {
        cfg.value_distribution.hi = std::stod(value);
      } else if (key == "success_tol") {
        cfg.success_tol = std::stod(value);
      } else if (key == "threads") {
        cfg.threads = std::stoul(value);
      } else if (key == "ompt_residual_tol") {
        cfg.ompt_residual_tol = std::stod(value);
      } else {
        throw Error(ErrorKind::Parse, "line " + std::to_string(lineno) + ": unknown key \"" + key + "\"");
      }
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parse, "line " + std::to_string(lineno) + ": bad value for " + key);
    }
  }
  return cfg;
}

inline TrialConfig load_trial_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  return parse_trial_config(in);
}

}  // namespace ompt
