// Copyright 2026 The cfqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "cfqkd/error.hpp"

namespace cfqkd::qcore {

using Complex = std::complex<double>;

/// Largest composite dimension any state or operator may have.
inline constexpr std::size_t kMaxDimension = 4096;
/// Tolerance applied when a state is constructed (norm, trace, hermiticity).
inline constexpr double kConstructionTolerance = 1e-12;
/// Tolerance applied to quantities derived from valid states.
inline constexpr double kDerivedTolerance = 1e-10;

/// Dense row-major complex matrix. Small by construction (<= kMaxDimension).
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static CMatrix identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  /// |u><v|
  static CMatrix outer(const std::vector<Complex>& u,
                       const std::vector<Complex>& v) {
    CMatrix m(u.size(), v.size());
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j)
        m(i, j) = u[i] * std::conj(v[j]);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  CMatrix adjoint() const {
    CMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c)
        out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  Complex trace() const {
    Complex t{};
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  /// Largest |m_ij - conj(m_ji)|.
  double hermiticity_defect() const {
    if (!square()) return INFINITY;
    double worst = 0.0;
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = r; c < cols_; ++c)
        worst = std::max(worst,
                         std::abs((*this)(r, c) - std::conj((*this)(c, r))));
    return worst;
  }

  double max_abs_diff(const CMatrix& other) const {
    require_same_shape(other);
    double worst = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i)
      worst = std::max(worst, std::abs(data_[i] - other.data_[i]));
    return worst;
  }

  CMatrix& operator+=(const CMatrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  CMatrix& operator-=(const CMatrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  CMatrix& operator*=(Complex s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, Complex s) { return a *= s; }
  friend CMatrix operator*(Complex s, CMatrix a) { return a *= s; }

  friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols_ != b.rows_) throw Error("matrix product: shape mismatch");
    CMatrix out(a.rows_, b.cols_);
    for (std::size_t r = 0; r < a.rows_; ++r)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Complex ark = a(r, k);
        if (ark == Complex{}) continue;
        for (std::size_t c = 0; c < b.cols_; ++c) out(r, c) += ark * b(k, c);
      }
    return out;
  }

  std::vector<Complex> apply(const std::vector<Complex>& v) const {
    if (v.size() != cols_) throw Error("matrix-vector product: shape mismatch");
    std::vector<Complex> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out[r] += (*this)(r, c) * v[c];
    return out;
  }

  /// Kronecker product a (x) b.
  friend CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows_ * b.rows_, a.cols_ * b.cols_);
    for (std::size_t ar = 0; ar < a.rows_; ++ar)
      for (std::size_t ac = 0; ac < a.cols_; ++ac)
        for (std::size_t br = 0; br < b.rows_; ++br)
          for (std::size_t bc = 0; bc < b.cols_; ++bc)
            out(ar * b.rows_ + br, ac * b.cols_ + bc) = a(ar, ac) * b(br, bc);
    return out;
  }

  /// Largest deviation of M^dagger M from the identity.
  double unitarity_defect() const {
    return (adjoint() * (*this)).max_abs_diff(identity(cols_));
  }

 private:
  void require_same_shape(const CMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw Error("matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations,
/// sorted descending. Sweeps stop once every off-diagonal magnitude is
/// below 1e-13.
inline std::vector<double> hermitian_eigenvalues(const CMatrix& m) {
  if (!m.square()) throw Error("hermitian_eigenvalues: matrix is not square");
  if (m.hermiticity_defect() > kDerivedTolerance)
    throw Error("hermitian_eigenvalues: matrix is not Hermitian");
  const std::size_t n = m.rows();

  CMatrix a = (m + m.adjoint()) * Complex{0.5};
  constexpr double kOffDiagonalStop = 1e-13;
  constexpr int kMaxSweeps = 100;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off < kOffDiagonalStop) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        // Remove the phase of a_pq, then apply a real Jacobi rotation.
        const Complex phase_conj = std::conj(apq) / mag;
        const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        const Complex jpp = c, jpq = s;
        const Complex jqp = -s * phase_conj, jqq = c * phase_conj;

        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * jpp + akq * jqp;
          a(k, q) = akp * jpq + akq * jqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
          a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i).real();
  std::sort(eig.begin(), eig.end(), std::greater<>());
  return eig;
}

}  // namespace cfqkd::qcore
