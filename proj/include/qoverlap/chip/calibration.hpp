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
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "qoverlap/chip/crosstalk.hpp"
#include "qoverlap/chip/qudit.hpp"
#include "qoverlap/optics/mesh.hpp"

namespace qoverlap::chip {

/// Simulated chip with fabrication residuals the calibration has to find.
struct HiddenChip {
  ShifterPhases residual;   ///< b: phase offset of each heater at zero drive
  optics::DcErrorMap dc;    ///< coupler splitting errors

  double b(const ShifterAddress& s) const {
    auto it = residual.find(s);
    return it == residual.end() ? 0.0 : it->second;
  }
  optics::DcError dc_error(const MziAddress& a) const {
    auto it = dc.find(a);
    return it == dc.end() ? optics::DcError{} : it->second;
  }

  /// Residuals uniform in [-pi, pi), coupler errors ~ N(0, dc_sigma).
  static HiddenChip random(std::uint64_t seed, double dc_sigma) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(-pi, pi);
    std::normal_distribution<double> err(0.0, dc_sigma);
    HiddenChip c;
    for (const auto& a : optics::all_mzi_addresses()) {
      c.residual[{a.row, a.col}] = phase(rng);
      c.residual[{a.row + 1, a.col}] = phase(rng);
      if (dc_sigma > 0.0) c.dc[a] = {err(rng), err(rng)};
    }
    return c;
  }

  /// 2x2 transfer of one MZI driven with the intended phases.
  optics::detail::Mat2 mzi(const MziAddress& a, const MziPhases& intended) const {
    const auto e = dc_error(a);
    return optics::detail::mzi2(intended.upper() + b({a.row, a.col}),
                                intended.lower() + b({a.row + 1, a.col}), e.alpha, e.beta);
  }

  /// Residual internal phase difference b_upper - b_lower, wrapped to [-pi, pi).
  double true_internal_offset(const MziAddress& a) const {
    return wrap_2pi(b({a.row, a.col}) - b({a.row + 1, a.col}) + pi) - pi;
  }
  /**
   * Residual MZI phase. (b_upper + b_lower) / 2 is only defined modulo pi,
   * because shifting one heater by 2 pi moves Sigma and delta by pi each and
   * leaves the MZI unchanged. We fix the branch that pairs with the wrapped
   * internal offset: b_lower + true_internal_offset / 2.
   */
  double true_sigma_offset(const MziAddress& a) const {
    return b({a.row + 1, a.col}) + 0.5 * true_internal_offset(a);
  }
};

struct SweepSample {
  double x;  ///< applied phase (proxy for heater current)
  double y;  ///< detected power
};

struct SinusoidFit {
  double offset = 0.0;
  double amplitude = 0.0;
  double phase = 0.0;

  double operator()(double x) const { return offset + amplitude * std::cos(x + phase); }
};

/// Least-squares fit of y = offset + amplitude cos(x + phase).
inline SinusoidFit fit_sinusoid(const std::vector<SweepSample>& s) {
  if (s.size() < 4) throw ParameterError("fit_sinusoid: need at least 4 samples");
  // Normal equations for the basis (1, cos x, sin x).
  double m[3][3] = {};
  double r[3] = {};
  for (const auto& p : s) {
    const double f[3] = {1.0, std::cos(p.x), std::sin(p.x)};
    for (int i = 0; i < 3; ++i) {
      r[i] += f[i] * p.y;
      for (int j = 0; j < 3; ++j) m[i][j] += f[i] * f[j];
    }
  }
  const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  const double scale = m[0][0] * m[0][0] * m[0][0];
  if (!(std::abs(det) > 1e-12 * scale)) {
    throw NumericalError("fit_sinusoid: rank-deficient design (x values do not span a period)");
  }
  // Cramer's rule keeps this free of a linear-algebra dependency for 3x3.
  auto solve = [&](int col) {
    double t[3][3];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) t[i][j] = (j == col) ? r[i] : m[i][j];
    return (t[0][0] * (t[1][1] * t[2][2] - t[1][2] * t[2][1]) -
            t[0][1] * (t[1][0] * t[2][2] - t[1][2] * t[2][0]) +
            t[0][2] * (t[1][0] * t[2][1] - t[1][1] * t[2][0])) /
           det;
  };
  const double o = solve(0), p = solve(1), q = solve(2);
  SinusoidFit fit;
  fit.offset = o;
  fit.amplitude = std::hypot(p, q);
  // Tie-break: a flat curve has no phase.
  fit.phase = fit.amplitude > 1e-14 * (1.0 + std::abs(o)) ? std::atan2(-q, p) : 0.0;
  return fit;
}

/// Additive Gaussian read-out noise on simulated power samples.
struct SweepNoise {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

namespace detail {
inline std::vector<double> sweep_grid(int n_points) {
  if (n_points < 8) throw ParameterError("sweep: need n_points >= 8");
  std::vector<double> x(static_cast<std::size_t>(n_points));
  for (int k = 0; k < n_points; ++k) x[static_cast<std::size_t>(k)] = 2 * pi * k / n_points;
  return x;
}

inline void add_noise(std::vector<SweepSample>& s, const std::optional<SweepNoise>& noise) {
  if (!noise || noise->sigma == 0.0) return;
  std::mt19937_64 rng(noise->seed);
  std::normal_distribution<double> n(0.0, noise->sigma);
  for (auto& p : s) p.y += n(rng);
}

inline double wrap_pm_pi(double x) {
  double r = wrap_2pi(x + pi) - pi;
  return r;
}
}  // namespace detail

/// Single-MZI power sin^2(b-a) + (cos^2(b+a) - sin^2(b-a)) (cos(t1-t2)+1)/2.
inline double internal_sweep_power(double theta1, double theta2, double alpha, double beta) {
  const double sm = std::sin(beta - alpha);
  const double cp = std::cos(beta + alpha);
  return sm * sm + 0.5 * (cp * cp - sm * sm) * (std::cos(theta1 - theta2) + 1.0);
}

/**
 * Sweep the upper-arm drive of one MZI through a full period with the lower
 * arm undriven, injecting light in the lower port and reading the upper one.
 * x is the applied internal phase difference theta1 - theta2.
 */
inline std::vector<SweepSample> simulate_internal_sweep(const HiddenChip& chip, const MziAddress& mzi,
                                                        int n_points,
                                                        const std::optional<SweepNoise>& noise = {}) {
  if (!mzi.is_mzi()) throw ParameterError("simulate_internal_sweep: " + mzi.to_string() + " is not an MZI");
  std::vector<SweepSample> out;
  for (double x : detail::sweep_grid(n_points)) {
    const auto t = chip.mzi(mzi, MziPhases::from_shifters(x, 0.0));
    out.push_back({x, std::norm(t.b)});
  }
  detail::add_noise(out, noise);
  return out;
}

/// Internal residual b_upper - b_lower recovered from a sweep fit, in (-pi, pi].
inline double calibrate_internal(const HiddenChip& chip, const MziAddress& mzi, int n_points = 64,
                                 const std::optional<SweepNoise>& noise = {}) {
  return fit_sinusoid(simulate_internal_sweep(chip, mzi, n_points, noise)).phase;
}

/// The companions that form a meta-MZI around target (i, j).
struct MetaMzi {
  MziAddress target;
  MziAddress reference;  // (i-2, j), held in bar
  MziAddress input;      // (i-1, j-1), balanced
  MziAddress output;     // (i-1, j+1), balanced

  static MetaMzi around(const MziAddress& t) {
    if (!t.is_mzi()) throw ParameterError("meta-MZI: " + t.to_string() + " is not an MZI");
    if (t.row < 2 || t.col < 1 || t.col > optics::kMeshColumns - 2) {
      throw ParameterError("meta-MZI: target " + t.to_string() +
                           " has no companions on the grid (unsupported address)");
    }
    return {t, {t.row - 2, t.col}, {t.row - 1, t.col - 1}, {t.row - 1, t.col + 1}};
  }
};

namespace detail {
// Light in mode i before the input MZI, power read at mode i-1 after the
// output MZI. Internal phases are pre-compensated with `internal` offsets.
inline std::vector<SweepSample> meta_sweep(const HiddenChip& chip, const MetaMzi& m, int n_points,
                                           const std::map<MziAddress, double>& internal) {
  auto comp = [&](const MziAddress& a, double delta) {
    auto it = internal.find(a);
    return delta - (it == internal.end() ? 0.0 : it->second) / 2;
  };
  const auto in = chip.mzi(m.input, {0.0, comp(m.input, optics::kBalancedDelta)});
  const auto out = chip.mzi(m.output, {0.0, comp(m.output, optics::kBalancedDelta)});
  const auto ref = chip.mzi(m.reference, {0.0, comp(m.reference, optics::kBarDelta)});
  std::vector<SweepSample> s;
  for (double x : sweep_grid(n_points)) {
    const auto tgt = chip.mzi(m.target, {x, comp(m.target, optics::kBarDelta)});
    // Modes (i-1, i) after the input MZI, fed from mode i (its lower port).
    const cplx u = in.b, l = in.d;
    // Column j: mode i-1 is the lower arm of the reference, mode i the upper arm of the target.
    // Cross terms leak to modes i-2 and i+1 and never return.
    const cplx u2 = ref.d * u;
    const cplx l2 = tgt.a * l;
    const cplx o = out.a * u2 + out.b * l2;
    s.push_back({x, std::norm(o)});
  }
  return s;
}
}  // namespace detail

/**
 * Residual phase of the target MZI relative to its reference (i-2, j):
 * ((b_ij + b_{i+1,j}) - (b_{i-2,j} + b_{i-1,j})) / 2, plus a bias xi caused by
 * coupler errors in the four MZIs. Internal offsets of the four MZIs are
 * measured first and compensated.
 */
inline double calibrate_meta_mzi(const HiddenChip& chip, const MziAddress& target, int n_points = 64,
                                 const std::optional<SweepNoise>& noise = {}) {
  const auto m = MetaMzi::around(target);
  std::map<MziAddress, double> internal;
  for (const auto& a : {m.target, m.reference, m.input, m.output})
    internal[a] = calibrate_internal(chip, a, n_points);
  auto s = detail::meta_sweep(chip, m, n_points, internal);
  detail::add_noise(s, noise);
  const double measured = fit_sinusoid(s).phase;
  const double ideal = fit_sinusoid(detail::meta_sweep(HiddenChip{}, m, n_points, {})).phase;
  return detail::wrap_pm_pi(measured - ideal);
}

/// True value that calibrate_meta_mzi estimates, excluding the coupler bias.
inline double true_meta_offset(const HiddenChip& chip, const MziAddress& target) {
  const auto m = MetaMzi::around(target);
  return detail::wrap_pm_pi(chip.true_sigma_offset(m.target) - chip.true_sigma_offset(m.reference));
}

/// Coupler-induced bias xi of the meta-MZI read-out, from the transfer matrices.
inline double meta_mzi_bias(const HiddenChip& chip, const MziAddress& target, int n_points = 64) {
  HiddenChip dc_only;
  dc_only.dc = chip.dc;
  return calibrate_meta_mzi(dc_only, target, n_points);
}

struct ChipCalibration {
  std::map<MziAddress, double> internal;  ///< b_upper - b_lower per MZI
  std::map<MziAddress, double> relative;  ///< meta-MZI offset per supported target
};

/// Internal sweeps on all 45 MZIs and meta-MZI sweeps on every supported target.
inline ChipCalibration calibrate_chip(const HiddenChip& chip, int n_points = 64,
                                      const std::optional<SweepNoise>& noise = {}) {
  ChipCalibration c;
  std::uint64_t k = 0;
  auto next_noise = [&]() -> std::optional<SweepNoise> {
    if (!noise) return std::nullopt;
    return SweepNoise{noise->sigma, noise->seed + 0x9E3779B97F4A7C15ULL * ++k};
  };
  for (const auto& a : optics::all_mzi_addresses()) c.internal[a] = calibrate_internal(chip, a, n_points, next_noise());
  for (const auto& a : optics::all_mzi_addresses()) {
    if (a.row < 2 || a.col < 1 || a.col > optics::kMeshColumns - 2) continue;
    c.relative[a] = calibrate_meta_mzi(chip, a, n_points, next_noise());
  }
  return c;
}

}  // namespace qoverlap::chip
