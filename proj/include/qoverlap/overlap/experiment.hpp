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

#include <cstdint>
#include <random>
#include <vector>

#include "qoverlap/chip/crosstalk.hpp"
#include "qoverlap/chip/overlap_circuit.hpp"
#include "qoverlap/overlap/estimators.hpp"

namespace qoverlap::overlap {

/// Chip imperfections applied to a simulated run. Default: ideal chip.
struct ChipNoise {
  const chip::CrosstalkModel* crosstalk = nullptr;
  double visibility = 1.0;
};

/// Full two-photon output distribution of the overlap circuit.
inline chip::TwoPhotonDistribution overlap_distribution(const chip::Phases3& theta,
                                                         const chip::Phases3& phi,
                                                         const chip::QuditAmplitudes& amps,
                                                         const ChipNoise& noise = {}) {
  auto settings = chip::build_overlap_circuit(theta, phi, amps);
  if (noise.crosstalk) settings = chip::perturb_settings(*noise.crosstalk, settings);
  return chip::two_photon_distribution(optics::compose_mesh(settings), chip::kThetaInputMode,
                                       chip::kPhiInputMode, noise.visibility);
}

/// Probability that a post-selected coincidence is a cross-register event.
inline double odd_coincidence_probability(const std::vector<chip::Coincidence>& c) {
  double p = 0.0;
  for (const auto& e : c)
    if (e.odd()) p += e.probability;
  return std::min(1.0, p);
}

/// Parity tally of n_shots post-selected coincidences.
inline ParityTally sample_tally(double p_odd, std::uint64_t n_shots, std::uint64_t seed) {
  if (n_shots == 0) throw ParameterError("sample_tally: n_shots must be >= 1");
  std::mt19937_64 rng(seed);
  std::binomial_distribution<std::uint64_t> odd(n_shots, p_odd);
  return ParityTally(n_shots, odd(rng));
}

/**
 * One overlap measurement: prepare |psi(theta)> and |psi(phi)> on the chip,
 * interfere them on the column-9 beamsplitters, record n_shots two-fold
 * coincidences with click detectors and return the bunching-corrected
 * estimate.
 */
inline OverlapEstimate simulate_overlap_experiment(const chip::Phases3& theta, const chip::Phases3& phi,
                                                   std::uint64_t n_shots, const ChipNoise& noise,
                                                   std::uint64_t seed,
                                                   const chip::QuditAmplitudes& amps = chip::nominal_amplitudes()) {
  if (n_shots == 0) throw ParameterError("simulate_overlap_experiment: n_shots must be >= 1");
  const auto coinc = chip::coincidence_distribution(overlap_distribution(theta, phi, amps, noise));
  return coincidence_estimator(sample_tally(odd_coincidence_probability(coinc), n_shots, seed),
                               bunching_probability(amps));
}

/**
 * +-1 parity outcomes as seen by number-resolving detectors: both photons are
 * kept wherever they land in modes 1..8, and bunched pairs count as even.
 */
inline std::vector<int> simulate_parity_shots(const chip::Phases3& theta, const chip::Phases3& phi,
                                              std::uint64_t n_shots, std::uint64_t seed,
                                              const chip::QuditAmplitudes& amps = chip::nominal_amplitudes(),
                                              const ChipNoise& noise = {}) {
  const auto d = overlap_distribution(theta, phi, amps, noise);
  std::vector<double> w;
  std::vector<int> parity;
  for (int i = chip::kFirstDetector; i <= chip::kLastDetector; ++i)
    for (int j = i; j <= chip::kLastDetector; ++j) {
      w.push_back(d(i, j));
      parity.push_back((i + j) % 2 == 1 ? -1 : 1);
    }
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
  std::vector<int> shots(n_shots);
  for (auto& s : shots) s = parity[pick(rng)];
  return shots;
}

}  // namespace qoverlap::overlap
