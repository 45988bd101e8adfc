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

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "qoverlap/errors.hpp"
#include "qoverlap/optics/mesh.hpp"

namespace qoverlap::chip {

using optics::cplx;
using optics::MeshSettings;
using optics::MziAddress;
using optics::MziPhases;
using optics::UnitaryMatrix;
using optics::pi;
using Phases3 = std::array<double, 3>;

/// Fixed real amplitudes A0..A3 of the four-mode phase qudit.
class QuditAmplitudes {
 public:
  static constexpr double kNormTolerance = 1e-12;

  explicit QuditAmplitudes(std::array<double, 4> a) : a_(a) {
    double s = 0.0;
    for (double v : a_) {
      if (!(v >= 0.0)) throw ParameterError("QuditAmplitudes: amplitudes must be >= 0");
      s += v * v;
    }
    if (std::abs(s - 1.0) > kNormTolerance) {
      throw ParameterError("QuditAmplitudes: sum of squares is " + std::to_string(s));
    }
  }

  double operator[](std::size_t i) const { return a_.at(i); }
  const std::array<double, 4>& values() const noexcept { return a_; }

 private:
  std::array<double, 4> a_;
};

/// Amplitudes and phases of one encoded qudit.
struct QuditSpec {
  QuditAmplitudes amplitudes;
  Phases3 phases{};
};

/// Hyperspherical parameterisation of the amplitudes; each angle in [0, pi].
inline QuditAmplitudes amplitudes_from_angles(double phi1, double phi2, double phi3) {
  for (double p : {phi1, phi2, phi3})
    if (!(p >= 0.0 && p <= pi)) throw ParameterError("amplitudes_from_angles: angle outside [0, pi]");
  const double s1 = std::sin(phi1 / 2), c1 = std::cos(phi1 / 2);
  const double s2 = std::sin(phi2 / 2), c2 = std::cos(phi2 / 2);
  const double s3 = std::sin(phi3 / 2), c3 = std::cos(phi3 / 2);
  std::array<double, 4> a{s1, c1 * s2, c1 * c2 * s3, c1 * c2 * c3};
  // Renormalise away the last-ulp drift so the 1e-12 invariant is exact.
  double n = 0.0;
  for (double v : a) n += v * v;
  n = std::sqrt(n);
  for (double& v : a) v /= n;
  return QuditAmplitudes(a);
}

inline constexpr double kNominalAngle1 = 0.86231713;
inline constexpr double kNominalAngle2 = 1.34230503;
inline constexpr double kNominalAngle3 = 1.66199945;

/// Amplitudes used for every experiment on the chip.
inline QuditAmplitudes nominal_amplitudes() {
  return amplitudes_from_angles(kNominalAngle1, kNominalAngle2, kNominalAngle3);
}

/// Cumulative phases (0, t1, t1+t2, t1+t2+t3) carried by modes 0..3.
inline std::array<double, 4> cumulative_phases(const Phases3& t) {
  return {0.0, t[0], t[0] + t[1], t[0] + t[1] + t[2]};
}

/// Single-photon amplitude vector over the four qudit modes.
inline std::array<cplx, 4> qudit_vector(const QuditAmplitudes& a, const Phases3& t) {
  const auto cum = cumulative_phases(t);
  std::array<cplx, 4> v;
  for (std::size_t k = 0; k < 4; ++k) v[k] = std::polar(a[k], cum[k]);
  return v;
}

/// |<psi(theta)|psi(phi)>|^2 = |sum_k A_k^2 e^{i(Phi_k - Theta_k)}|^2
inline double qudit_overlap(const QuditAmplitudes& a, const Phases3& theta, const Phases3& phi) {
  const auto ct = cumulative_phases(theta);
  const auto cp = cumulative_phases(phi);
  cplx s{};
  for (std::size_t k = 0; k < 4; ++k) s += std::polar(a[k] * a[k], cp[k] - ct[k]);
  return std::norm(s);
}

/// Wrap an angle into [0, 2 pi).
inline double wrap_2pi(double x) {
  double r = std::fmod(x, 2 * pi);
  if (r < 0) r += 2 * pi;
  if (r >= 2 * pi) r = 0.0;
  return r;
}

}  // namespace qoverlap::chip
