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
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "qoverlap/chip/qudit.hpp"
#include "qoverlap/errors.hpp"
#include "qoverlap/optics/fock.hpp"

namespace qoverlap::overlap {

inline constexpr double kDefaultDelta = 1.0 / 3.0;

/// Post-selected two-photon events and how many of them had odd parity.
struct ParityTally {
  std::uint64_t n_total = 0;
  std::uint64_t n_odd = 0;

  ParityTally() = default;
  ParityTally(std::uint64_t total, std::uint64_t odd) : n_total(total), n_odd(odd) {
    if (odd > total) throw ParameterError("ParityTally: n_odd exceeds n_total");
  }
  bool operator==(const ParityTally&) const = default;
};

/// sqrt(2 ln(2/delta) / n): two-sided Hoeffding radius for a +-1 mean.
inline double hoeffding_radius(std::uint64_t n, double delta = kDefaultDelta) {
  if (n == 0) throw ParameterError("hoeffding_radius: n must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("hoeffding_radius: delta must be in (0, 1)");
  return std::sqrt(2.0 * std::log(2.0 / delta) / static_cast<double>(n));
}

struct OverlapEstimate {
  double value = 0.0;
  ParityTally tally;
  double bunching_R = 0.0;

  double hoeffding_radius(double delta = kDefaultDelta) const {
    return overlap::hoeffding_radius(tally.n_total, delta);
  }
};

inline void to_json(nlohmann::json& j, const OverlapEstimate& e) {
  j = nlohmann::json{{"value", e.value},
                     {"n_total", e.tally.n_total},
                     {"n_odd", e.tally.n_odd},
                     {"R", e.bunching_R},
                     {"eps_at_delta", e.hoeffding_radius()}};
}

/// |<a|b>|^2 for pure states over the same Fock basis.
inline double exact_overlap(const optics::PhotonicState& a, const optics::PhotonicState& b) {
  if (a.basis() != b.basis()) throw DimensionError("exact_overlap: states use different bases");
  optics::cplx s{};
  for (std::size_t i = 0; i < a.dimension(); ++i) s += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
  return std::norm(s);
}

/**
 * Mean of +-1 parity outcomes. With number-resolving detection this is an
 * unbiased overlap estimate; bunched events are counted as even.
 */
inline OverlapEstimate parity_estimator(std::span<const int> shots) {
  if (shots.empty()) throw ParameterError("parity_estimator: no shots");
  std::uint64_t odd = 0;
  for (int s : shots) {
    if (s == -1) {
      ++odd;
    } else if (s != 1) {
      throw ParameterError("parity_estimator: shots must be +1 or -1");
    }
  }
  const auto n = static_cast<std::uint64_t>(shots.size());
  OverlapEstimate e;
  e.tally = ParityTally(n, odd);
  e.value = 1.0 - 2.0 * static_cast<double>(odd) / static_cast<double>(n);
  return e;
}

/// 1 - 2 (1 - R) n_odd / n_total for click detectors that miss bunched pairs.
inline OverlapEstimate coincidence_estimator(const ParityTally& tally, double R) {
  if (!(R >= 0.0 && R < 1.0)) throw ParameterError("coincidence_estimator: need 0 <= R < 1");
  if (tally.n_total == 0) throw ParameterError("coincidence_estimator: empty tally");
  OverlapEstimate e;
  e.tally = tally;
  e.bunching_R = R;
  e.value = 1.0 - 2.0 * (1.0 - R) * static_cast<double>(tally.n_odd) /
                      static_cast<double>(tally.n_total);
  return e;
}

namespace detail {
inline void check_eps_delta(double eps, double delta, const char* who) {
  if (!(eps > 0.0 && eps < 0.5) || !(delta > 0.0 && delta < 0.5)) {
    throw ParameterError(std::string(who) + ": need 0 < eps < 1/2 and 0 < delta < 1/2");
  }
}
}  // namespace detail

/// Shots sufficient for additive error eps with probability 1 - delta.
inline std::uint64_t hoeffding_samples(double eps, double delta) {
  detail::check_eps_delta(eps, delta, "hoeffding_samples");
  return static_cast<std::uint64_t>(std::ceil(2.0 * std::log(2.0 / delta) / (eps * eps)));
}

/// Shots necessary for any strategy (two-hypothesis discrimination bound).
inline std::uint64_t helstrom_lower_bound(double eps, double delta) {
  detail::check_eps_delta(eps, delta, "helstrom_lower_bound");
  const double h = 0.5 - delta;
  return static_cast<std::uint64_t>(std::ceil(h * h / (eps * eps)));
}

/// Probability that both photons leave through the same mode: sum A_i^4.
inline double bunching_probability(const chip::QuditAmplitudes& a) {
  double r = 0.0;
  for (double v : a.values()) r += v * v * v * v;
  return r;
}

}  // namespace qoverlap::overlap
