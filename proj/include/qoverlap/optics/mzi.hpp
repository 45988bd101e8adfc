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
#include <numbers>

#include "qoverlap/optics/matrix.hpp"

namespace qoverlap::optics {

using std::numbers::pi;

/// Directional coupler with splitting error alpha_err (0 = balanced 50:50).
inline UnitaryMatrix dc_transfer(double alpha_err) {
  if (!(std::abs(alpha_err) <= pi / 4)) {
    throw ParameterError("dc_transfer: |alpha_err| must not exceed pi/4");
  }
  const double c = std::cos(pi / 4 + alpha_err);
  const double s = std::sin(pi / 4 + alpha_err);
  return UnitaryMatrix(ComplexMatrix(2, 2, {c, cplx{0, s}, cplx{0, s}, c}));
}

namespace detail {
// 2x2 product written out; avoids the generic allocation path in hot loops.
struct Mat2 {
  cplx a, b, c, d;  // [[a, b], [c, d]]
  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
};

inline Mat2 dc2(double err) {
  const double c = std::cos(pi / 4 + err);
  const double s = std::sin(pi / 4 + err);
  return {c, cplx{0, s}, cplx{0, s}, c};
}

inline Mat2 mzi2(double theta1, double theta2, double alpha_err, double beta_err) {
  const Mat2 phases{std::polar(1.0, theta1), 0.0, 0.0, std::polar(1.0, theta2)};
  return dc2(beta_err) * (phases * dc2(alpha_err));
}
}  // namespace detail

/**
 * Symmetric MZI: DC(beta) * diag(e^{i theta1}, e^{i theta2}) * DC(alpha).
 *
 * With zero coupler errors this is i e^{i Sigma} [[sin d, cos d], [cos d, -sin d]]
 * with Sigma = (theta1 + theta2) / 2 and d = (theta1 - theta2) / 2.
 * theta1 sits on the upper arm.
 */
inline UnitaryMatrix mzi_transfer(double theta1, double theta2, double alpha_err = 0.0,
                                  double beta_err = 0.0) {
  const auto t = detail::mzi2(theta1, theta2, alpha_err, beta_err);
  return UnitaryMatrix(ComplexMatrix(2, 2, {t.a, t.b, t.c, t.d}));
}

/// MZI phase / internal phase pair.
struct MziPhases {
  double sigma = 0.0;  ///< (theta1 + theta2) / 2
  double delta = 0.0;  ///< (theta1 - theta2) / 2

  double upper() const noexcept { return sigma + delta; }
  double lower() const noexcept { return sigma - delta; }

  static MziPhases from_shifters(double upper, double lower) noexcept {
    return {(upper + lower) / 2, (upper - lower) / 2};
  }

  bool operator==(const MziPhases&) const = default;
};

inline constexpr double kCrossDelta = 0.0;
inline constexpr double kBarDelta = pi / 2;
inline constexpr double kBalancedDelta = pi / 4;

}  // namespace qoverlap::optics
