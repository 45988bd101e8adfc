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

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "qoverlap/optics/matrix.hpp"
#include "qoverlap/optics/permanent.hpp"

namespace qoverlap::optics {

inline constexpr std::uint64_t kMaxFockBasis = 1'000'000;
inline constexpr std::uint64_t kMaxBruteForceBasis = 5'000;
inline constexpr int kMaxEvolvePhotons = 6;

/// Photon counts per mode.
class FockOccupation {
 public:
  explicit FockOccupation(std::vector<int> occupations)
      : occ_(std::move(occupations)) {
    if (occ_.empty()) throw DimensionError("FockOccupation: need at least one mode");
    for (int n : occ_)
      if (n < 0) throw ParameterError("FockOccupation: negative occupation");
  }

  std::size_t modes() const noexcept { return occ_.size(); }
  int photons() const noexcept { return std::accumulate(occ_.begin(), occ_.end(), 0); }
  int operator[](std::size_t i) const { return occ_.at(i); }
  const std::vector<int>& occupations() const noexcept { return occ_; }

  auto operator<=>(const FockOccupation&) const = default;

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < occ_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(occ_[i]);
    }
    return s + ")";
  }

 private:
  std::vector<int> occ_;
};

/// binomial(n, k) with saturation at uint64 max.
inline std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t num = n - k + i;
    // r * num / i is exact at every step; guard the multiplication.
    if (r > std::numeric_limits<std::uint64_t>::max() / num) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    r = r * num / i;
  }
  return r;
}

/// Dimension of the K-photon sector over M modes.
inline std::uint64_t fock_dimension(std::size_t modes, int photons) {
  return binomial_saturating(modes + static_cast<std::uint64_t>(photons) - 1,
                             static_cast<std::uint64_t>(photons));
}

namespace detail {
inline void enumerate_fock(std::size_t mode, int remaining, std::vector<int>& cur,
                           std::vector<FockOccupation>& out) {
  if (mode + 1 == cur.size()) {
    cur[mode] = remaining;
    out.emplace_back(cur);
    return;
  }
  for (int n = remaining; n >= 0; --n) {
    cur[mode] = n;
    enumerate_fock(mode + 1, remaining - n, cur, out);
  }
}
}  // namespace detail

/**
 * All occupations of M modes with K photons, in descending lexicographic
 * order: (K,0,...,0) first, (0,...,0,K) last.
 */
inline std::vector<FockOccupation> fock_basis(std::size_t modes, int photons,
                                              std::uint64_t cap = kMaxFockBasis) {
  if (modes < 1) throw ParameterError("fock_basis: need M >= 1");
  if (photons < 0) throw ParameterError("fock_basis: need K >= 0");
  const std::uint64_t dim = fock_dimension(modes, photons);
  if (dim > cap) {
    throw CapacityError("fock_basis: dimension " + std::to_string(dim) +
                        " exceeds cap " + std::to_string(cap));
  }
  std::vector<FockOccupation> out;
  out.reserve(dim);
  std::vector<int> cur(modes, 0);
  detail::enumerate_fock(0, photons, cur, out);
  return out;
}

/// Pure state over a fixed (M, K) Fock basis.
class PhotonicState {
 public:
  static constexpr double kNormTolerance = 1e-9;

  PhotonicState(std::vector<FockOccupation> basis, std::vector<cplx> amplitudes)
      : basis_(std::move(basis)), amps_(std::move(amplitudes)) {
    if (basis_.empty() || basis_.size() != amps_.size()) {
      throw DimensionError("PhotonicState: basis/amplitude size mismatch");
    }
    const std::size_t m = basis_.front().modes();
    const int k = basis_.front().photons();
    for (const auto& b : basis_)
      if (b.modes() != m || b.photons() != k)
        throw DimensionError("PhotonicState: basis mixes mode or photon numbers");
    for (std::size_t i = 1; i < basis_.size(); ++i)
      if (!(basis_[i - 1] > basis_[i]))
        throw ParameterError("PhotonicState: basis not in descending lexicographic order");
    const double n = norm_squared();
    if (std::abs(n - 1.0) > kNormTolerance) {
      throw ParameterError("PhotonicState: norm^2 = " + std::to_string(n));
    }
  }

  /// Single basis state |occ> embedded in its full (M, K) basis.
  static PhotonicState basis_state(const FockOccupation& occ) {
    auto basis = fock_basis(occ.modes(), occ.photons());
    std::vector<cplx> amps(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i)
      if (basis[i] == occ) amps[i] = 1.0;
    return PhotonicState(std::move(basis), std::move(amps));
  }

  std::size_t modes() const { return basis_.front().modes(); }
  int photons() const { return basis_.front().photons(); }
  std::size_t dimension() const noexcept { return basis_.size(); }
  const std::vector<FockOccupation>& basis() const noexcept { return basis_; }
  const std::vector<cplx>& amplitudes() const noexcept { return amps_; }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }

  std::vector<double> probabilities() const {
    std::vector<double> p(amps_.size());
    for (std::size_t i = 0; i < amps_.size(); ++i) p[i] = std::norm(amps_[i]);
    return p;
  }

  /// Amplitude of the given occupation (0 when absent).
  cplx amplitude(const FockOccupation& occ) const {
    for (std::size_t i = 0; i < basis_.size(); ++i)
      if (basis_[i] == occ) return amps_[i];
    return {};
  }

 private:
  std::vector<FockOccupation> basis_;
  std::vector<cplx> amps_;
};

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

/**
 * Linear-optical evolution of a Fock input.
 *
 * Creation operators transform as a_k^dagger -> sum_j U_jk a_j^dagger, so the
 * amplitude of output n given input m is
 *   perm(U[rows(n), cols(m)]) / sqrt(prod n_i! prod m_j!).
 */
inline PhotonicState evolve_fock(const UnitaryMatrix& u, const FockOccupation& input) {
  if (u.size() != input.modes()) {
    throw DimensionError("evolve_fock: unitary is " + std::to_string(u.size()) +
                         "x" + std::to_string(u.size()) + " but input has " +
                         std::to_string(input.modes()) + " modes");
  }
  const int k = input.photons();
  if (k > kMaxEvolvePhotons) {
    throw CapacityError("evolve_fock: " + std::to_string(k) + " photons exceeds cap " +
                        std::to_string(kMaxEvolvePhotons));
  }
  auto basis = fock_basis(input.modes(), k);
  double in_norm = 1.0;
  for (int m : input.occupations()) in_norm *= factorial(m);

  std::vector<cplx> amps(basis.size());
  for (std::size_t b = 0; b < basis.size(); ++b) {
    double out_norm = 1.0;
    for (int n : basis[b].occupations()) out_norm *= factorial(n);
    amps[b] = permanent_with_multiplicity(u.matrix(), basis[b].occupations(),
                                          input.occupations()) /
              std::sqrt(in_norm * out_norm);
  }
  return PhotonicState(std::move(basis), std::move(amps));
}

/**
 * Reference evolution that expands prod_k (sum_j U_jk a_j^dagger)^{m_k} |0>
 * as a polynomial in creation operators and reads off amplitudes.
 * Exponential in K; intended for cross-checking evolve_fock.
 */
inline PhotonicState brute_force_evolve(const UnitaryMatrix& u, const FockOccupation& input) {
  if (u.size() != input.modes()) {
    throw DimensionError("brute_force_evolve: dimension mismatch");
  }
  const std::size_t m_modes = input.modes();
  const int k = input.photons();
  auto basis = fock_basis(m_modes, k, kMaxBruteForceBasis);

  // monomial exponents -> coefficient
  std::map<std::vector<int>, cplx> poly;
  poly[std::vector<int>(m_modes, 0)] = 1.0;
  for (std::size_t col = 0; col < m_modes; ++col) {
    for (int rep = 0; rep < input[col]; ++rep) {
      std::map<std::vector<int>, cplx> next;
      for (const auto& [mono, coef] : poly) {
        for (std::size_t row = 0; row < m_modes; ++row) {
          const cplx c = coef * u(row, col);
          if (c == cplx{}) continue;
          auto e = mono;
          ++e[row];
          next[e] += c;
        }
      }
      poly = std::move(next);
    }
  }

  double in_norm = 1.0;
  for (int m : input.occupations()) in_norm *= factorial(m);
  std::vector<cplx> amps(basis.size());
  for (std::size_t b = 0; b < basis.size(); ++b) {
    auto it = poly.find(basis[b].occupations());
    if (it == poly.end()) continue;
    double out_norm = 1.0;
    for (int n : basis[b].occupations()) out_norm *= factorial(n);
    // (a^dagger)^n |0> = sqrt(n!) |n>
    amps[b] = it->second * std::sqrt(out_norm / in_norm);
  }
  return PhotonicState(std::move(basis), std::move(amps));
}

}  // namespace qoverlap::optics
