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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ompt/error.hpp"

namespace ompt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Columns with norm below this are treated as zero by normalize_columns.
inline constexpr double kZeroColumnTol = 1e-14;
/// Tolerance on unit column norms accepted by Dictionary.
inline constexpr double kUnitNormTol = 1e-12;
/// Smallest singular value below which a restricted matrix counts as rank deficient.
inline constexpr double kRankTol = 1e-10;
/// Largest dimension accepted by mixed_norm_inf_2 (enumeration is 2^m).
inline constexpr Index kMixedNormMaxDim = 25;

/// Real n x d measurement matrix whose columns (atoms) have unit l2 norm.
///
/// Immutable once built. Use normalize_columns() for arbitrary input or
/// Dictionary::from_normalized() when the columns are already unit norm.
class Dictionary {
 public:
  static Dictionary from_normalized(Matrix m) {
    if (m.rows() < 1 || m.cols() < 1) {
      throw Error(ErrorKind::InvalidArgument, "dictionary must have at least one row and one column");
    }
    if (!m.allFinite()) throw Error(ErrorKind::InvalidArgument, "dictionary entries must be finite");
    for (Index j = 0; j < m.cols(); ++j) {
      const double norm = m.col(j).norm();
      if (std::abs(norm - 1.0) > kUnitNormTol) {
        throw Error(ErrorKind::NotNormalized,
                    "column " + std::to_string(j) + " has norm " + std::to_string(norm));
      }
    }
    return Dictionary(std::move(m));
  }

  Index rows() const noexcept { return m_.rows(); }
  Index cols() const noexcept { return m_.cols(); }
  const Matrix& matrix() const noexcept { return m_; }
  auto atom(Index i) const { return m_.col(i); }

 private:
  explicit Dictionary(Matrix m) : m_(std::move(m)) {}

  Matrix m_;
};

/// Ordered set of atom indices in [0, dim). Keeps insertion order, which for
/// solver output is the selection order.
class SupportSet {
 public:
  SupportSet() = default;
  explicit SupportSet(std::size_t dim) : dim_(dim), member_(dim, false) {}
  SupportSet(std::size_t dim, const std::vector<std::size_t>& indices) : SupportSet(dim) {
    for (auto i : indices) insert(i);
  }

  void insert(std::size_t i) {
    if (i >= dim_) {
      throw Error(ErrorKind::InvalidArgument,
                  "index " + std::to_string(i) + " outside [0, " + std::to_string(dim_) + ")");
    }
    if (member_[i]) throw Error(ErrorKind::InvalidArgument, "duplicate index " + std::to_string(i));
    member_[i] = true;
    indices_.push_back(i);
  }

  bool contains(std::size_t i) const noexcept { return i < dim_ && member_[i]; }
  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  std::size_t dim() const noexcept { return dim_; }
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  std::size_t operator[](std::size_t pos) const { return indices_[pos]; }

  std::vector<std::size_t> sorted() const {
    auto s = indices_;
    std::sort(s.begin(), s.end());
    return s;
  }

  /// Same members, regardless of order.
  bool same_members(const SupportSet& other) const {
    return dim_ == other.dim_ && sorted() == other.sorted();
  }

 private:
  std::size_t dim_ = 0;
  std::vector<bool> member_;
  std::vector<std::size_t> indices_;
};

/// Length-d vector stored as its support and the nonzero values on it.
class SparseSignal {
 public:
  SparseSignal() = default;
  SparseSignal(SupportSet support, Vector values) : support_(std::move(support)), values_(std::move(values)) {
    if (static_cast<std::size_t>(values_.size()) != support_.size()) {
      throw Error(ErrorKind::InvalidArgument, "support and value counts differ");
    }
    for (Index i = 0; i < values_.size(); ++i) {
      if (values_[i] == 0.0 || !std::isfinite(values_[i])) {
        throw Error(ErrorKind::InvalidArgument, "sparse signal values must be finite and nonzero");
      }
    }
  }

  std::size_t dim() const noexcept { return support_.dim(); }
  std::size_t sparsity() const noexcept { return support_.size(); }
  const SupportSet& support() const noexcept { return support_; }
  const Vector& values() const noexcept { return values_; }

  /// Smallest nonzero magnitude. Zero for the empty signal.
  double a_min() const { return values_.size() ? values_.cwiseAbs().minCoeff() : 0.0; }

  Vector dense() const {
    Vector out = Vector::Zero(static_cast<Index>(dim()));
    for (std::size_t i = 0; i < support_.size(); ++i) out[static_cast<Index>(support_[i])] = values_[static_cast<Index>(i)];
    return out;
  }

 private:
  SupportSet support_;
  Vector values_;
};

/// Scale every column to unit l2 norm.
inline Dictionary normalize_columns(const Matrix& matrix) {
  Matrix m = matrix;
  for (Index j = 0; j < m.cols(); ++j) {
    const double norm = m.col(j).norm();
    if (!(norm >= kZeroColumnTol)) throw ZeroColumnError(static_cast<std::size_t>(j));
    m.col(j) /= norm;
  }
  return Dictionary::from_normalized(std::move(m));
}

inline Matrix gram(const Dictionary& dict) {
  Matrix g = dict.matrix().transpose() * dict.matrix();
  // Symmetrize exactly; the product is symmetric only up to rounding.
  Matrix sym = 0.5 * (g + g.transpose());
  return sym;
}

/// Columns of the dictionary restricted to a support, in support order.
inline Matrix restrict_columns(const Dictionary& dict, const SupportSet& support) {
  Matrix sub(dict.rows(), static_cast<Index>(support.size()));
  for (std::size_t j = 0; j < support.size(); ++j) sub.col(static_cast<Index>(j)) = dict.atom(static_cast<Index>(support[j]));
  return sub;
}

/// Thin QR factorization grown one column at a time.
///
/// Orthogonalization is classical Gram-Schmidt with one reorthogonalization
/// pass, which keeps Q orthonormal to working precision for the column counts
/// greedy solvers reach. A column whose orthogonal remainder falls below
/// kRankTol is rejected with RankDeficient; since the remainder bounds the
/// smallest singular value from above, this never rejects a well-posed column.
class IncrementalQR {
 public:
  explicit IncrementalQR(Index rows, Index reserve = 8)
      : q_(rows, std::max<Index>(reserve, 1)), r_(std::max<Index>(reserve, 1), std::max<Index>(reserve, 1)) {
    r_.setZero();
  }

  Index rows() const noexcept { return q_.rows(); }
  Index size() const noexcept { return size_; }

  /// Orthonormal basis of the columns appended so far.
  auto q() const { return q_.leftCols(size_); }
  auto r() const { return r_.topLeftCorner(size_, size_); }
  auto last_q() const { return q_.col(size_ - 1); }

  void append(const Eigen::Ref<const Vector>& column) {
    if (column.size() != rows()) throw Error(ErrorKind::InvalidArgument, "column length mismatch");
    if (size_ >= rows()) throw Error(ErrorKind::RankDeficient, "more columns than rows");
    grow_if_needed();
    Vector v = column;
    Vector coeff = Vector::Zero(size_);
    for (int pass = 0; pass < 2 && size_ > 0; ++pass) {
      const Vector h = q().transpose() * v;
      v.noalias() -= q() * h;
      coeff += h;
    }
    const double rnn = v.norm();
    if (!(rnn >= kRankTol * std::max(1.0, column.norm()))) {
      throw Error(ErrorKind::RankDeficient,
                  "new column is (numerically) in the span of the previous " + std::to_string(size_));
    }
    r_.col(size_).head(size_) = coeff;
    r_(size_, size_) = rnn;
    q_.col(size_) = v / rnn;
    ++size_;
  }

  /// Least-squares coefficients for min ||rhs - A z||_2 over the appended columns A.
  Vector solve(const Eigen::Ref<const Vector>& rhs) const {
    const Vector qtb = q().transpose() * rhs;
    return r().template triangularView<Eigen::Upper>().solve(qtb);
  }

  /// rhs minus its orthogonal projection onto span(A).
  Vector residual(const Eigen::Ref<const Vector>& rhs) const {
    Vector r = rhs;
    for (int pass = 0; pass < 2 && size_ > 0; ++pass) {
      const Vector h = q().transpose() * r;
      r.noalias() -= q() * h;
    }
    return r;
  }

 private:
  void grow_if_needed() {
    if (size_ < q_.cols()) return;
    const Index cap = std::min<Index>(rows(), 2 * q_.cols());
    q_.conservativeResize(Eigen::NoChange, cap);
    Matrix r = Matrix::Zero(cap, cap);
    r.topLeftCorner(size_, size_) = r_.topLeftCorner(size_, size_);
    r_ = std::move(r);
  }

  Matrix q_;
  Matrix r_;
  Index size_ = 0;
};

/// Largest absolute eigenvalue of a symmetric matrix, i.e. its (2,2) operator norm.
template <typename Derived>
double spectral_norm(const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::InvalidArgument, "spectral_norm needs a square matrix");
  if (a.size() == 0) return 0.0;
  const Matrix m = a;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw Error(ErrorKind::NotSymmetric, "matrix is not symmetric within 1e-10");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// ||A||_{inf,2} = max over ||x||_inf <= 1 of ||A x||_2.
///
/// The objective is convex, so the maximum sits at a vertex of the cube; all
/// 2^(m-1) sign patterns with x_0 = +1 are visited in Gray-code order so each
/// step costs one column update.
template <typename Derived>
double mixed_norm_inf_2(const Eigen::MatrixBase<Derived>& a) {
  const Index m = a.cols();
  if (m > kMixedNormMaxDim) {
    throw Error(ErrorKind::DimensionTooLarge, "mixed_norm_inf_2 enumerates 2^m vertices; m = " + std::to_string(m));
  }
  if (m == 0 || a.rows() == 0) return 0.0;
  const Matrix mat = a;
  Vector ax = mat.rowwise().sum();
  std::vector<signed char> sign(static_cast<std::size_t>(m), 1);
  double best = ax.squaredNorm();
  const std::uint64_t count = std::uint64_t{1} << (m - 1);
  for (std::uint64_t step = 1; step < count; ++step) {
    // Flip coordinate 1 + (index of lowest set bit of step); coordinate 0 stays +1.
    const Index j = 1 + static_cast<Index>(__builtin_ctzll(step));
    const auto js = static_cast<std::size_t>(j);
    ax.noalias() -= (2.0 * sign[js]) * mat.col(j);
    sign[js] = static_cast<signed char>(-sign[js]);
    best = std::max(best, ax.squaredNorm());
  }
  return std::sqrt(best);
}

/// Smallest singular value of the dictionary restricted to a support. Zero when
/// the support has more atoms than the dictionary has rows, and for the empty
/// support.
inline double min_singular_value(const Dictionary& dict, const SupportSet& support) {
  if (support.empty()) return 0.0;
  if (static_cast<Index>(support.size()) > dict.rows()) return 0.0;
  const Matrix sub = restrict_columns(dict, support);
  Eigen::JacobiSVD<Matrix> svd(sub);
  return svd.singularValues().minCoeff();
}

/// argmin_z ||f - Phi_S z||_2 for the atoms in `support`, in support order.
inline Vector restricted_least_squares(const Dictionary& dict, const SupportSet& support, const Vector& f) {
  if (f.size() != dict.rows()) throw Error(ErrorKind::InvalidArgument, "signal length does not match dictionary rows");
  if (support.dim() != static_cast<std::size_t>(dict.cols())) {
    throw Error(ErrorKind::InvalidArgument, "support dimension does not match dictionary");
  }
  if (support.empty()) return Vector(0);
  if (static_cast<Index>(support.size()) > dict.rows()) {
    throw Error(ErrorKind::RankDeficient, "support larger than the number of measurements");
  }
  IncrementalQR qr(dict.rows(), static_cast<Index>(support.size()));
  for (auto i : support.indices()) qr.append(dict.atom(static_cast<Index>(i)));
  // R shares the singular values of Phi_S.
  Eigen::JacobiSVD<Matrix> svd(Matrix(qr.r()));
  if (svd.singularValues().minCoeff() < kRankTol) {
    throw Error(ErrorKind::RankDeficient, "restricted matrix has smallest singular value below 1e-10");
  }
  return qr.solve(f);
}

}  // namespace ompt
