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

#include <bit>
#include <cstdint>
#include <vector>

#include "qoverlap/optics/matrix.hpp"

namespace qoverlap::optics {

inline constexpr std::size_t kMaxPermanentSize = 20;

/**
 * @brief Matrix permanent by Ryser's inclusion-exclusion formula.
 *
 * perm(A) = (-1)^n sum_{S subset [n]} (-1)^{|S|} prod_i sum_{j in S} a_ij.
 * Column subsets are visited in Gray-code order so each step updates the
 * row sums with a single column, giving O(2^n n) work.
 *
 * The empty (0x0) permanent is 1; permanent_with_multiplicity() handles it.
 */
inline cplx permanent(const ComplexMatrix& m) {
  if (!m.is_square()) {
    throw DimensionError("permanent: matrix must be square, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  const std::size_t n = m.rows();
  if (n > kMaxPermanentSize) {
    throw CapacityError("permanent: size " + std::to_string(n) + " exceeds cap " +
                        std::to_string(kMaxPermanentSize));
  }

  std::vector<cplx> row_sums(n, cplx{});
  cplx total{};
  std::uint64_t gray_prev = 0;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < subsets; ++k) {
    const std::uint64_t gray = k ^ (k >> 1);
    const std::uint64_t flipped = gray ^ gray_prev;
    const auto col = static_cast<std::size_t>(std::countr_zero(flipped));
    const double sign = (gray & flipped) ? 1.0 : -1.0;
    for (std::size_t i = 0; i < n; ++i) row_sums[i] += sign * m(i, col);
    gray_prev = gray;

    cplx prod{1.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) prod *= row_sums[i];
    // (-1)^{|S|}
    total += (std::popcount(gray) & 1) ? -prod : prod;
  }
  return (n & 1) ? -total : total;
}

/// Permanent of the submatrix selecting rows/cols with multiplicity.
/// row_mult[i] copies of row i, col_mult[j] copies of column j.
inline cplx permanent_with_multiplicity(const ComplexMatrix& u,
                                        std::span<const int> row_mult,
                                        std::span<const int> col_mult) {
  std::vector<std::size_t> rows, cols;
  for (std::size_t i = 0; i < row_mult.size(); ++i)
    for (int r = 0; r < row_mult[i]; ++r) rows.push_back(i);
  for (std::size_t j = 0; j < col_mult.size(); ++j)
    for (int r = 0; r < col_mult[j]; ++r) cols.push_back(j);
  if (rows.size() != cols.size()) {
    throw DimensionError("permanent_with_multiplicity: photon numbers differ");
  }
  if (rows.empty()) return {1.0, 0.0};
  ComplexMatrix sub(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b) sub(a, b) = u.at(rows[a], cols[b]);
  return permanent(sub);
}

}  // namespace qoverlap::optics
