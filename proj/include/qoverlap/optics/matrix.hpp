// Copyright 2026 The qoverlap Authors
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
#include <cassert>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qoverlap/errors.hpp"

namespace qoverlap::optics {

using cplx = std::complex<double>;

/// Dense row-major complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {
    if (rows == 0 || cols == 0) {
      throw DimensionError("ComplexMatrix: rows and cols must be positive");
    }
  }

  ComplexMatrix(std::size_t rows, std::size_t cols,
                std::initializer_list<cplx> row_major)
      : ComplexMatrix(rows, cols) {
    if (row_major.size() != rows * cols) {
      throw DimensionError("ComplexMatrix: initializer size mismatch");
    }
    std::copy(row_major.begin(), row_major.end(), data_.begin());
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t r, std::size_t c) {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }
  const cplx& operator()(std::size_t r, std::size_t c) const {
    assert(r < rows_ && c < cols_);
    return data_[r * cols_ + c];
  }

  /// Bounds-checked access.
  const cplx& at(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) {
      throw DimensionError("ComplexMatrix::at: index (" + std::to_string(r) +
                           "," + std::to_string(c) + ") out of range");
    }
    return data_[r * cols_ + c];
  }
  cplx& at(std::size_t r, std::size_t c) {
    return const_cast<cplx&>(std::as_const(*this).at(r, c));
  }

  std::span<const cplx> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<cplx> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  std::span<const cplx> data() const noexcept { return data_; }

  ComplexMatrix adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
  }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) {
      throw DimensionError("ComplexMatrix: product shape mismatch");
    }
    ComplexMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  friend ComplexMatrix operator*(cplx s, ComplexMatrix m) {
    for (auto& v : m.data_) v *= s;
    return m;
  }

  /// Largest entrywise modulus of (a - b).
  friend double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
      throw DimensionError("max_abs_diff: shape mismatch");
    }
    double d = 0.0;
    for (std::size_t i = 0; i < a.data_.size(); ++i)
      d = std::max(d, std::abs(a.data_[i] - b.data_[i]));
    return d;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

/// max_{ij} |(U^dagger U - I)_{ij}|
inline double unitarity_defect(const ComplexMatrix& u) {
  if (!u.is_square()) return INFINITY;
  const std::size_t n = u.rows();
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx s{};
      for (std::size_t k = 0; k < n; ++k) s += std::conj(u(k, i)) * u(k, j);
      if (i == j) s -= 1.0;
      d = std::max(d, std::abs(s));
    }
  return d;
}

/// A square matrix whose unitarity was checked on construction.
class UnitaryMatrix {
 public:
  static constexpr double kTolerance = 1e-10;

  explicit UnitaryMatrix(ComplexMatrix m) : m_(std::move(m)) {
    if (!m_.is_square()) {
      throw DimensionError("UnitaryMatrix: matrix is not square");
    }
    const double defect = unitarity_defect(m_);
    if (!(defect <= kTolerance)) {
      throw ParameterError("UnitaryMatrix: |U^dagger U - I|_max = " +
                           std::to_string(defect) + " exceeds tolerance");
    }
  }

  static UnitaryMatrix identity(std::size_t n) {
    return UnitaryMatrix(ComplexMatrix::identity(n));
  }

  std::size_t size() const noexcept { return m_.rows(); }
  const cplx& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
  const ComplexMatrix& matrix() const noexcept { return m_; }

  friend UnitaryMatrix operator*(const UnitaryMatrix& a, const UnitaryMatrix& b) {
    return UnitaryMatrix(a.m_ * b.m_);
  }

 private:
  ComplexMatrix m_;
};

}  // namespace qoverlap::optics
