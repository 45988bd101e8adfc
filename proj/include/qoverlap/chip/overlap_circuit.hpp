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
#include <vector>

#include "qoverlap/chip/qudit.hpp"
#include "qoverlap/optics/mesh.hpp"

namespace qoverlap::chip {

// Photon routing of the overlap circuit.
//
// Both photons enter on modes 4 and 5 and travel in bar-state MZIs through
// columns 0-4. Columns 5-8 split the photon from mode 4 over the odd register
// {1,3,5,7} (qudit theta) and the photon from mode 5 over the even register
// {2,4,6,8} (qudit phi). Wherever both photons meet in one MZI that MZI is a
// pure cross or bar permutation, so the two qudits never interfere before
// column 9. Column 9 mixes mode pairs (1,2) (3,4) (5,6) (7,8) on balanced MZIs.
//
//   splitters   theta: (3,5) (2,6) (1,7)     phi: (5,5) (6,6) (7,7)
//   crossings   (4,6) (3,7) (5,7) (2,8) (4,8) (6,8)
//   bar         (0,8) (8,8), plus the route through columns 0-4
//
// Six Sigma knobs set the relative phases: (0,8) (2,8) (1,7) (6,8) (8,8) (7,7).
// Register component k of theta lands on mode 2k+1, of phi on mode 2k+2.
// Phases are referenced to theta's component 2 (mode 5) and phi's component 1
// (mode 4), which only pass through fixed MZIs.

inline constexpr int kThetaInputMode = 4;
inline constexpr int kPhiInputMode = 5;
inline constexpr int kBalancedColumn = 9;
inline constexpr std::array<int, 4> kThetaOutputModes{1, 3, 5, 7};
inline constexpr std::array<int, 4> kPhiOutputModes{2, 4, 6, 8};
inline constexpr int kFirstDetector = 1;
inline constexpr int kLastDetector = 8;

inline constexpr std::array<MziAddress, 6> kPhaseKnobs{
    MziAddress{0, 8}, MziAddress{2, 8}, MziAddress{1, 7},
    MziAddress{6, 8}, MziAddress{8, 8}, MziAddress{7, 7}};

namespace detail {

/// Bar state drawing phase only on the upper shifter.
inline MziPhases bar() { return {optics::kBarDelta, optics::kBarDelta}; }
inline MziPhases cross() { return {0.0, 0.0}; }
/// Internal phase delta with the lower shifter left undriven.
inline MziPhases split(double delta) { return {delta, delta}; }

inline MeshSettings overlap_skeleton(const QuditAmplitudes& a) {
  MeshSettings s = optics::uniform_settings(cross());
  // Columns 0-4: keep photons on modes 4 and 5.
  for (int c = 0; c <= 4; ++c) {
    if (c % 2 == 0) {
      s[{4, c}] = bar();
    } else {
      s[{3, c}] = bar();
      s[{5, c}] = bar();
    }
  }
  const double a0 = a[0], a1 = a[1], a2 = a[2], a3 = a[3];
  // theta enters (3,5) on its lower port: upper output keeps A0..A2, lower A3.
  s[{3, 5}] = split(std::atan2(a3, std::sqrt(a0 * a0 + a1 * a1 + a2 * a2)));
  // phi enters (5,5) on its upper port: upper output keeps A0, lower A1..A3.
  s[{5, 5}] = split(std::atan2(a0, std::sqrt(a1 * a1 + a2 * a2 + a3 * a3)));
  s[{4, 6}] = cross();
  s[{2, 6}] = split(std::atan2(a2, std::sqrt(a0 * a0 + a1 * a1)));
  s[{6, 6}] = split(std::atan2(a1, std::sqrt(a2 * a2 + a3 * a3)));
  s[{1, 7}] = split(std::atan2(a1, a0));
  s[{3, 7}] = cross();
  s[{5, 7}] = cross();
  s[{7, 7}] = split(std::atan2(a2, a3));
  s[{0, 8}] = bar();
  s[{2, 8}] = cross();
  s[{4, 8}] = cross();
  s[{6, 8}] = cross();
  s[{8, 8}] = bar();
  for (int r = 1; r <= 7; r += 2) s[{r, kBalancedColumn}] = {optics::kBalancedDelta, optics::kBalancedDelta};
  return s;
}

}  // namespace detail

/**
 * Mesh settings that prepare |psi(theta)> on modes 1,3,5,7 and |psi(phi)> on
 * modes 2,4,6,8 from photons injected into modes 4 and 5, followed by the
 * balanced column-9 beamsplitters.
 *
 * The six knob phases are solved against the ideal (error-free) mesh, so the
 * prepared state matches the target up to one global phase per photon.
 */
inline MeshSettings build_overlap_circuit(const Phases3& theta, const Phases3& phi,
                                          const QuditAmplitudes& amps) {
  for (double v : theta)
    if (!std::isfinite(v)) throw ParameterError("build_overlap_circuit: non-finite theta");
  for (double v : phi)
    if (!std::isfinite(v)) throw ParameterError("build_overlap_circuit: non-finite phi");

  MeshSettings s = detail::overlap_skeleton(amps);
  const UnitaryMatrix pre = optics::compose_columns(s, {}, 0, kBalancedColumn - 1);

  std::array<double, 4> bt{}, bp{};
  for (std::size_t k = 0; k < 4; ++k) {
    bt[k] = std::arg(pre(kThetaOutputModes[k], kThetaInputMode));
    bp[k] = std::arg(pre(kPhiOutputModes[k], kPhiInputMode));
  }
  const auto ct = cumulative_phases(theta);
  const auto cp = cumulative_phases(phi);
  // Phase still missing on each component relative to its register anchor.
  auto need_t = [&](std::size_t k) { return (ct[k] - ct[2]) - (bt[k] - bt[2]); };
  auto need_p = [&](std::size_t k) { return (cp[k] - cp[1]) - (bp[k] - bp[1]); };

  const double s68 = need_t(3);
  const double s28 = need_p(0);
  const double s17 = need_t(1) - s28;
  const double s08 = need_t(0) - s17;
  const double s77 = need_p(2) - s68;
  const double s88 = need_p(3) - s77;

  auto set_sigma = [&](MziAddress a, double sigma) { s[a].sigma = wrap_2pi(s[a].sigma + sigma); };
  set_sigma({6, 8}, s68);
  set_sigma({2, 8}, s28);
  set_sigma({1, 7}, s17);
  set_sigma({0, 8}, s08);
  set_sigma({7, 7}, s77);
  set_sigma({8, 8}, s88);
  return s;
}

/// Two-photon output probabilities P(i, j), i <= j, over all mesh modes.
struct TwoPhotonDistribution {
  std::array<std::array<double, optics::kMeshModes>, optics::kMeshModes> p{};

  double operator()(int i, int j) const { return i <= j ? p[i][j] : p[j][i]; }

  double total() const {
    double s = 0.0;
    for (int i = 0; i < optics::kMeshModes; ++i)
      for (int j = i; j < optics::kMeshModes; ++j) s += p[i][j];
    return s;
  }
};

/**
 * Output distribution for single photons injected into modes a and b.
 * visibility v mixes the indistinguishable (v = 1) and distinguishable
 * (v = 0) predictions, i.e. scales the interference term.
 */
inline TwoPhotonDistribution two_photon_distribution(const UnitaryMatrix& u, int a, int b,
                                                     double visibility = 1.0) {
  if (!(visibility >= 0.0 && visibility <= 1.0)) {
    throw ParameterError("two_photon_distribution: visibility must be in [0, 1]");
  }
  TwoPhotonDistribution d;
  const int n = static_cast<int>(u.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const optics::cplx ia = u(i, a), ib = u(i, b), ja = u(j, a), jb = u(j, b);
      double indist, dist;
      if (i == j) {
        indist = 2.0 * std::norm(ia * ib);
        dist = std::norm(ia) * std::norm(ib);
      } else {
        indist = std::norm(ia * jb + ja * ib);
        dist = std::norm(ia) * std::norm(jb) + std::norm(ja) * std::norm(ib);
      }
      d.p[i][j] = visibility * indist + (1.0 - visibility) * dist;
    }
  }
  return d;
}

/// A click-detector coincidence between two distinct detector modes.
struct Coincidence {
  int first = 0;
  int second = 0;
  double probability = 0.0;
  /// Odd parity = one photon in each register.
  bool odd() const noexcept { return (first + second) % 2 == 1; }
};

/**
 * Post-selected coincidence distribution over distinct detector pairs
 * (modes 1..8), renormalised to sum to one. Bunched events and photons lost to
 * modes 0 and 9 are removed by the post-selection.
 */
inline std::vector<Coincidence> coincidence_distribution(const TwoPhotonDistribution& d) {
  std::vector<Coincidence> out;
  double total = 0.0;
  for (int i = kFirstDetector; i <= kLastDetector; ++i)
    for (int j = i + 1; j <= kLastDetector; ++j) {
      out.push_back({i, j, d(i, j)});
      total += d(i, j);
    }
  if (!(total > 0.0)) throw NumericalError("coincidence_distribution: no coincidence probability");
  for (auto& c : out) c.probability /= total;
  return out;
}

/// F = sum sqrt(p q) over matching coincidence outcomes.
inline double distribution_fidelity(const std::vector<Coincidence>& p,
                                    const std::vector<Coincidence>& q) {
  if (p.size() != q.size()) throw DimensionError("distribution_fidelity: size mismatch");
  double f = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) f += std::sqrt(p[k].probability * q[k].probability);
  return f;
}

}  // namespace qoverlap::chip
