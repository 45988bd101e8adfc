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


#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qoverlap/optics/fock.hpp"
#include "qoverlap/overlap/experiment.hpp"
#include "qoverlap/seed.hpp"
#include "test_util.hpp"

using namespace qoverlap;
using namespace qoverlap::overlap;
using chip::Phases3;
using qoverlap::testing::uniform_phases;

TEST(ExactOverlap, BasicCases) {
  const auto a = optics::PhotonicState::basis_state(optics::FockOccupation({1, 0, 0}));
  const auto b = optics::PhotonicState::basis_state(optics::FockOccupation({0, 1, 0}));
  EXPECT_DOUBLE_EQ(exact_overlap(a, a), 1.0);
  EXPECT_DOUBLE_EQ(exact_overlap(a, b), 0.0);
  const auto c = optics::PhotonicState::basis_state(optics::FockOccupation({1, 0}));
  EXPECT_THROW(exact_overlap(a, c), DimensionError);
}

TEST(ExactOverlap, QuditStatesMatchClosedForm) {
  const auto amps = chip::nominal_amplitudes();
  std::mt19937_64 rng(1);
  const auto basis = optics::fock_basis(4, 1);
  auto state = [&](const Phases3& t) {
    const auto v = chip::qudit_vector(amps, t);
    // basis order is (1,0,0,0), (0,1,0,0), ...
    return optics::PhotonicState(basis, {v.begin(), v.end()});
  };
  for (int k = 0; k < 10; ++k) {
    const auto th = uniform_phases<Phases3>(rng), ph = uniform_phases<Phases3>(rng);
    EXPECT_NEAR(exact_overlap(state(th), state(ph)), chip::qudit_overlap(amps, th, ph), 1e-14);
  }
}

TEST(ParityEstimator, Means) {
  const std::vector<int> plus(10, 1);
  EXPECT_DOUBLE_EQ(parity_estimator(plus).value, 1.0);
  const std::vector<int> half{1, -1, 1, -1};
  EXPECT_DOUBLE_EQ(parity_estimator(half).value, 0.0);
  EXPECT_THROW(parity_estimator(std::vector<int>{}), ParameterError);
  EXPECT_THROW(parity_estimator(std::vector<int>{1, 0}), ParameterError);
}

TEST(CoincidenceEstimator, Values) {
  EXPECT_DOUBLE_EQ(coincidence_estimator({100, 0}, 0.3).value, 1.0);
  EXPECT_DOUBLE_EQ(coincidence_estimator({100, 50}, 0.0).value, 0.0);
  EXPECT_THROW(coincidence_estimator({100, 5}, 1.0), ParameterError);
  EXPECT_THROW(ParityTally(3, 4), ParameterError);
}

TEST(CoincidenceEstimator, AffineInOddCount) {
  const double R = 0.26;
  const std::uint64_t n = 1000;
  const double slope = -2.0 * (1.0 - R) / n;
  for (std::uint64_t k = 0; k <= n; k += 37)
    EXPECT_NEAR(coincidence_estimator({n, k}, R).value, 1.0 + slope * k, 1e-15);
}

TEST(CoincidenceEstimator, JsonShape) {
  const nlohmann::json j = coincidence_estimator({359, 40}, 0.25);
  for (const char* key : {"value", "n_total", "n_odd", "R", "eps_at_delta"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_NEAR(j["eps_at_delta"].get<double>(), std::sqrt(2 * std::log(6.0) / 359), 1e-15);
}

TEST(SampleComplexity, HoeffdingValues) {
  EXPECT_EQ(hoeffding_samples(0.1, 1.0 / 3), 359u);
  EXPECT_EQ(hoeffding_samples(0.05, 0.05), 2952u);  // ceil(800 ln 40)
  EXPECT_EQ(hoeffding_samples(0.05, 0.05), static_cast<std::uint64_t>(std::ceil(800 * std::log(40.0))));
  EXPECT_THROW(hoeffding_samples(0.6, 0.1), ParameterError);
  EXPECT_THROW(hoeffding_samples(0.1, 0.5), ParameterError);
}

TEST(SampleComplexity, HelstromValues) {
  EXPECT_EQ(helstrom_lower_bound(0.1, 1.0 / 3), 3u);
  EXPECT_LE(helstrom_lower_bound(0.1, 0.4999999), 1u);
  EXPECT_THROW(helstrom_lower_bound(0.0, 0.1), ParameterError);
}

TEST(SampleComplexity, EpsilonScaling) {
  const double raw1 = 2 * std::log(2 / 0.2) / (0.1 * 0.1);
  const double raw2 = 2 * std::log(2 / 0.2) / (0.05 * 0.05);
  EXPECT_DOUBLE_EQ(raw2 / raw1, 4.0);
  EXPECT_EQ(hoeffding_samples(0.05, 0.2), static_cast<std::uint64_t>(std::ceil(raw2)));
}

TEST(Bunching, ClosedFormCases) {
  EXPECT_DOUBLE_EQ(bunching_probability(chip::QuditAmplitudes({1, 0, 0, 0})), 1.0);
  EXPECT_DOUBLE_EQ(bunching_probability(chip::QuditAmplitudes({0.5, 0.5, 0.5, 0.5})), 0.25);
  EXPECT_NEAR(bunching_probability(chip::nominal_amplitudes()), 0.26154566033545046, 1e-15);
}

TEST(Bunching, MatchesBruteForceSameModeProbability) {
  const auto amps = chip::nominal_amplitudes();
  const auto u = optics::compose_mesh(chip::build_overlap_circuit({0.3, 1.2, 4.0}, {2.2, 0.1, 5.0}, amps));
  const auto s = optics::brute_force_evolve(u, optics::FockOccupation({0, 0, 0, 0, 1, 1, 0, 0, 0, 0}));
  double bunched = 0.0;
  for (std::size_t i = 0; i < s.dimension(); ++i)
    for (int n : s.basis()[i].occupations())
      if (n == 2) bunched += std::norm(s.amplitudes()[i]);
  EXPECT_NEAR(bunched, bunching_probability(amps), 1e-10);
}

TEST(RegisterParity, CrossRegisterIffOddCountInEvenRegister) {
  // Every two-photon outcome over detectors 1..8, bunched ones included.
  int outcomes = 0;
  for (int i = 1; i <= 8; ++i)
    for (int j = i; j <= 8; ++j) {
      ++outcomes;
      const int in_even = (i % 2 == 0) + (j % 2 == 0);
      const bool cross = (i % 2) != (j % 2);
      EXPECT_EQ(in_even % 2 == 1, cross);
      if (i != j) {
        EXPECT_EQ(chip::Coincidence({i, j, 0.0}).odd(), cross);
      }
    }
  EXPECT_EQ(outcomes, 36);
}

TEST(Experiment, IdenticalStatesGiveExactlyOne) {
  const auto e = simulate_overlap_experiment({0.4, 2.0, 1.0}, {0.4, 2.0, 1.0}, 10000, {}, 3);
  EXPECT_EQ(e.tally.n_odd, 0u);
  EXPECT_DOUBLE_EQ(e.value, 1.0);
}

TEST(Experiment, DeterministicBySeed) {
  const auto a = simulate_overlap_experiment({1, 2, 3}, {3, 2, 1}, 1000, {}, 99);
  const auto b = simulate_overlap_experiment({1, 2, 3}, {3, 2, 1}, 1000, {}, 99);
  EXPECT_EQ(a.tally, b.tally);
  EXPECT_THROW(simulate_overlap_experiment({1, 2, 3}, {3, 2, 1}, 0, {}, 1), ParameterError);
}

TEST(Experiment, NoiselessCoincidenceCoverage) {
  const auto amps = chip::nominal_amplitudes();
  std::mt19937_64 rng(2024);
  int ok = 0;
  const int pairs = 200;
  for (int t = 0; t < pairs; ++t) {
    const auto th = uniform_phases<Phases3>(rng), ph = uniform_phases<Phases3>(rng);
    const auto e = simulate_overlap_experiment(th, ph, 1000, {}, seed_mix(7, t));
    ok += std::abs(e.value - chip::qudit_overlap(amps, th, ph)) <= e.hoeffding_radius(1.0 / 3);
  }
  EXPECT_GE(ok, 2 * pairs / 3);
}

TEST(Experiment, ParityShotsCoverage) {
  const auto amps = chip::nominal_amplitudes();
  std::mt19937_64 rng(77);
  int ok = 0;
  const int trials = 300;
  const std::uint64_t n = 359;
  for (int t = 0; t < trials; ++t) {
    const auto th = uniform_phases<Phases3>(rng), ph = uniform_phases<Phases3>(rng);
    const auto e = parity_estimator(simulate_parity_shots(th, ph, n, seed_mix(8, t)));
    ok += std::abs(e.value - chip::qudit_overlap(amps, th, ph)) <= hoeffding_radius(n, 1.0 / 3);
  }
  EXPECT_GE(ok, 2 * trials / 3);
}

TEST(Experiment, ParityShotsUnbiased) {
  const Phases3 th{0.5, 1.5, 2.5}, ph{2.0, 0.2, 4.4};
  const std::uint64_t n = 40000;
  const auto shots = simulate_parity_shots(th, ph, n, 5);
  // True P_odd over number-resolved outcomes, computed from the distribution.
  const auto d = overlap_distribution(th, ph, chip::nominal_amplitudes());
  double p_odd = 0.0, kept = 0.0;
  for (int i = 1; i <= 8; ++i)
    for (int j = i; j <= 8; ++j) {
      kept += d(i, j);
      if ((i + j) % 2) p_odd += d(i, j);
    }
  p_odd /= kept;
  EXPECT_NEAR(parity_estimator(shots).value, 1.0 - 2.0 * p_odd, 4.0 / std::sqrt(double(n)));
  EXPECT_NEAR(1.0 - 2.0 * p_odd, chip::qudit_overlap(chip::nominal_amplitudes(), th, ph), 1e-12);
}

TEST(Experiment, CrosstalkPerturbsButStaysClose) {
  const chip::CrosstalkModel xt(chip::CrosstalkParams::nominal(5));
  const auto amps = chip::nominal_amplitudes();
  const Phases3 th{1.0, 2.0, 3.0}, ph{1.5, 2.5, 3.5};
  const auto ideal = chip::coincidence_distribution(overlap_distribution(th, ph, amps));
  const auto noisy = chip::coincidence_distribution(overlap_distribution(th, ph, amps, {&xt, 1.0}));
  const double f = chip::distribution_fidelity(ideal, noisy);
  EXPECT_LT(f, 1.0 - 1e-6);
  EXPECT_GT(f, 0.9);
}
