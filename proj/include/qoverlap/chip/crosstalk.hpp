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
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <random>
#include <vector>

#include <nlohmann/json.hpp>

#include "qoverlap/chip/qudit.hpp"
#include "qoverlap/optics/mesh.hpp"

namespace qoverlap::chip {

/// Grid position of a thermo-optic phaseshifter; MZI (i, j) drives (i, j) and (i+1, j).
using ShifterAddress = optics::MziAddress;
using ShifterPhases = std::map<ShifterAddress, double>;

inline constexpr int kShifterRows = optics::kMeshModes;
inline constexpr int kShifterCols = optics::kMeshColumns;
inline constexpr int kShifterCount = kShifterRows * kShifterCols;

/**
 * Distance class between two phaseshifters on the 10x10 grid.
 *
 *   1: same column, adjacent rows (includes the two arms of one MZI)
 *   2: the surrounding ring: diagonal or horizontal step, or two rows /
 *      two columns apart along a straight line
 *   3: remaining positions within Chebyshev distance 2
 *   4: everything further away
 */
inline int neighbor_order(const ShifterAddress& a, const ShifterAddress& b) {
  if (a == b) throw ParameterError("neighbor_order: identical addresses " + a.to_string());
  const int di = std::abs(a.row - b.row);
  const int dj = std::abs(a.col - b.col);
  if (dj == 0 && di == 1) return 1;
  if ((dj == 1 && di <= 1) || (di == 0 && dj == 2) || (dj == 0 && di == 2)) return 2;
  if (std::max(di, dj) <= 2) return 3;
  return 4;
}

struct CrosstalkParams {
  std::array<double, 4> k{0.0, 0.0, 0.0, 0.0};  ///< leak fraction per neighbour order
  double eta = 0.0;                           ///< heater nonlinearity
  double eps = 0.0;                           ///< calibration error scale (rad)
  std::uint64_t seed = 0;

  /// Values used to emulate the chip in the experiment.
  static CrosstalkParams nominal(std::uint64_t seed) {
    return {{0.016, 0.004, 0.0016, 0.0005}, 0.01, 0.02, seed};
  }
};

inline void to_json(nlohmann::json& j, const CrosstalkParams& p) {
  j = nlohmann::json{{"K1", p.k[0]}, {"K2", p.k[1]}, {"K3", p.k[2]}, {"K4", p.k[3]},
                     {"eta", p.eta}, {"eps", p.eps}, {"seed", p.seed}};
}

inline void from_json(const nlohmann::json& j, CrosstalkParams& p) {
  if (!j.is_object()) throw ConfigError("crosstalk: expected an object");
  for (const auto& [key, _] : j.items()) {
    static const std::array<const char*, 7> known{"K1", "K2", "K3", "K4", "eta", "eps", "seed"};
    if (std::find_if(known.begin(), known.end(), [&](const char* k) { return key == k; }) ==
        known.end()) {
      throw ConfigError("crosstalk: unknown key '" + key + "'");
    }
  }
  CrosstalkParams out;
  try {
    out.k = {j.value("K1", 0.0), j.value("K2", 0.0), j.value("K3", 0.0), j.value("K4", 0.0)};
    out.eta = j.value("eta", 0.0);
    out.eps = j.value("eps", 0.0);
    out.seed = j.value("seed", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("crosstalk: ") + e.what());
  }
  p = out;
}

/**
 * Frozen thermal-crosstalk realisation.
 *
 *   theta_v = t_v + (sum_{a != v} K_va t_a) (1 + eta_v t_v) + eps_v
 *
 * with K_va = K[order(v, a)] * xi_va. All random draws happen at construction,
 * so one model instance reproduces the same chip across an experiment.
 */
class CrosstalkModel {
 public:
  explicit CrosstalkModel(const CrosstalkParams& p) : params_(p) {
    for (double k : p.k)
      if (!(k >= 0.0) || !std::isfinite(k)) throw ParameterError("CrosstalkModel: K must be >= 0");
    if (!(p.eta >= 0.0) || !(p.eps >= 0.0)) {
      throw ParameterError("CrosstalkModel: eta and eps must be >= 0");
    }
    std::mt19937_64 rng(p.seed);
    std::normal_distribution<double> xi(1.0, 0.05);
    std::normal_distribution<double> unit(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);

    coupling_.assign(static_cast<std::size_t>(kShifterCount * kShifterCount), 0.0);
    for (int v = 0; v < kShifterCount; ++v) {
      for (int a = 0; a < kShifterCount; ++a) {
        if (a == v) continue;
        const double draw = xi(rng);
        const int order = neighbor_order(address(v), address(a));
        coupling_[index(v, a)] = p.k[static_cast<std::size_t>(order - 1)] * draw;
      }
    }
    for (int v = 0; v < kShifterCount; ++v) {
      eta_[static_cast<std::size_t>(v)] = p.eta + 0.1 * p.eta * unit(rng);
      const double sign = coin(rng) ? 1.0 : -1.0;
      eps_[static_cast<std::size_t>(v)] = sign * p.eps + 0.01 * unit(rng);
    }
    // A disabled calibration error must really be zero.
    if (p.eps == 0.0) eps_.fill(0.0);
  }

  const CrosstalkParams& params() const noexcept { return params_; }

  /// Realised coupling from aggressor a into victim v.
  double coupling(const ShifterAddress& victim, const ShifterAddress& aggressor) const {
    return coupling_[index(flat(victim), flat(aggressor))];
  }
  double eta(const ShifterAddress& s) const { return eta_[static_cast<std::size_t>(flat(s))]; }
  double eps(const ShifterAddress& s) const { return eps_[static_cast<std::size_t>(flat(s))]; }

  /// Actual phases on every shifter of the grid; missing entries are undriven (0).
  ShifterPhases apply(const ShifterPhases& intended) const {
    std::array<double, kShifterCount> t{};
    for (const auto& [addr, phase] : intended) {
      if (!std::isfinite(phase)) throw ParameterError("apply_crosstalk: non-finite phase");
      t[static_cast<std::size_t>(flat(addr))] = phase;
    }
    ShifterPhases out;
    for (int v = 0; v < kShifterCount; ++v) {
      double leak = 0.0;
      const double* row = &coupling_[index(v, 0)];
      for (int a = 0; a < kShifterCount; ++a) leak += row[a] * t[static_cast<std::size_t>(a)];
      const auto vs = static_cast<std::size_t>(v);
      out[address(v)] = t[vs] + leak * (1.0 + eta_[vs] * t[vs]) + eps_[vs];
    }
    return out;
  }

  static int flat(const ShifterAddress& s) {
    if (s.row < 0 || s.row >= kShifterRows || s.col < 0 || s.col >= kShifterCols) {
      throw ParameterError("phaseshifter " + s.to_string() + " is off the grid");
    }
    return s.row * kShifterCols + s.col;
  }
  static ShifterAddress address(int flat_index) {
    return {flat_index / kShifterCols, flat_index % kShifterCols};
  }

 private:
  static std::size_t index(int v, int a) {
    return static_cast<std::size_t>(v) * kShifterCount + static_cast<std::size_t>(a);
  }

  CrosstalkParams params_;
  std::vector<double> coupling_;  // row = victim, diagonal unused (0)
  std::array<double, kShifterCount> eta_{};
  std::array<double, kShifterCount> eps_{};
};

inline ShifterPhases apply_crosstalk(const CrosstalkModel& model, const ShifterPhases& intended) {
  return model.apply(intended);
}

/**
 * Intended heater phases for a mesh setting, wrapped to [0, 2 pi). The wrap is
 * exact for the transfer matrix because shifting both arms of an MZI by 2 pi,
 * or one arm by 2 pi, leaves it unchanged. Positions not owned by any MZI stay
 * absent (undriven).
 */
inline ShifterPhases settings_to_shifters(const MeshSettings& s) {
  ShifterPhases out;
  for (const auto& [a, ph] : s) {
    out[{a.row, a.col}] = wrap_2pi(ph.upper());
    out[{a.row + 1, a.col}] = wrap_2pi(ph.lower());
  }
  return out;
}

/// Inverse of settings_to_shifters for the MZIs listed in `layout`.
inline MeshSettings shifters_to_settings(const ShifterPhases& p, const MeshSettings& layout) {
  MeshSettings out;
  auto get = [&](int r, int c) {
    auto it = p.find({r, c});
    return it == p.end() ? 0.0 : it->second;
  };
  for (const auto& [a, _] : layout) {
    out[a] = MziPhases::from_shifters(get(a.row, a.col), get(a.row + 1, a.col));
  }
  return out;
}

/// Mesh settings as realised on a chip with the given crosstalk.
inline MeshSettings perturb_settings(const CrosstalkModel& model, const MeshSettings& s) {
  return shifters_to_settings(model.apply(settings_to_shifters(s)), s);
}

}  // namespace qoverlap::chip
