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

// Plain-text matrix format: a header line "n d" followed by n rows of d
// whitespace-separated decimal values. Values are written with 17 significant
// digits, which round-trips every double exactly.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "ompt/error.hpp"
#include "ompt/linalg.hpp"

namespace ompt {

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline Matrix read_matrix(std::istream& in) {
  long long rows = 0, cols = 0;
  if (!(in >> rows >> cols)) throw Error(ErrorKind::Parse, "missing \"n d\" header");
  if (rows < 1 || cols < 1) throw Error(ErrorKind::Parse, "matrix dimensions must be positive");
  Matrix m(rows, cols);
  for (long long i = 0; i < rows; ++i) {
    for (long long j = 0; j < cols; ++j) {
      std::string token;
      if (!(in >> token)) {
        throw Error(ErrorKind::Parse, "expected " + std::to_string(rows * cols) + " values, input ended at row " +
                                          std::to_string(i) + " column " + std::to_string(j));
      }
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size() || !std::isfinite(v)) throw Error(ErrorKind::Parse, "bad value \"" + token + "\"");
      m(i, j) = v;
    }
  }
  std::string extra;
  if (in >> extra) throw Error(ErrorKind::Parse, "trailing data after matrix: \"" + extra + "\"");
  return m;
}

inline void write_matrix(std::ostream& out, const Matrix& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

inline Matrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  try {
    return read_matrix(in);
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

inline void save_matrix(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path + " for writing");
  write_matrix(out, m);
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path);
}

/// A vector is stored as an n x 1 matrix.
inline Vector load_vector(const std::string& path) {
  const Matrix m = load_matrix(path);
  if (m.cols() != 1) throw Error(ErrorKind::Parse, path + ": expected a single column, got " + std::to_string(m.cols()));
  return m.col(0);
}

}  // namespace ompt
