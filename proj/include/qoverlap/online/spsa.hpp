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
#include <cstdio>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <random>
#include <vector>

#include <nlohmann/json.hpp>

#include "qoverlap/chip/qudit.hpp"
#include "qoverlap/overlap/experiment.hpp"
#include "qoverlap/seed.hpp"

namespace qoverlap::online {

using chip::Phases3;

struct SpsaConfig {
  double a = 1.6;
  double A = 10.0;
  double alpha = 0.602;
  double gamma = 0.101;
  std::size_t iterations = 500;
  double t = 0.0;                    ///< perturbation scale; <= 0 means measure it at start
  double t_fallback = 0.1;           ///< used when the measured spread is zero
  std::uint64_t shots_per_eval = 100;
  std::size_t gradient_reps = 1;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(a > 0.0)) throw ParameterError("spsa: a must be positive");
    if (!(A >= 0.0)) throw ParameterError("spsa: A must be >= 0");
    if (!(alpha > 0.0 && alpha < 1.0) || !(gamma > 0.0 && gamma < 1.0)) {
      throw ParameterError("spsa: alpha and gamma must lie in (0, 1)");
    }
    if (shots_per_eval == 0) throw ParameterError("spsa: shots_per_eval must be >= 1");
    if (gradient_reps == 0) throw ParameterError("spsa: gradient_reps must be >= 1");
    if (!(t_fallback > 0.0)) throw ParameterError("spsa: t_fallback must be positive");
  }
};

/// a_k = a / (A + k + 1)^alpha
inline double gain_at(std::size_t k, const SpsaConfig& c) {
  return c.a / std::pow(c.A + static_cast<double>(k) + 1.0, c.alpha);
}

/// t_k = t / (k + 1)^gamma
inline double perturb_at(std::size_t k, const SpsaConfig& c, double t) {
  return t / std::pow(static_cast<double>(k) + 1.0, c.gamma);
}

using CostFn = std::function<double(const Phases3&)>;

/// Twice the sample standard deviation of five evaluations at theta0, or the fallback.
inline double init_t(const CostFn& cost, const Phases3& theta0, double fallback = 0.1) {
  std::array<double, 5> v{};
  double mean = 0.0;
  for (double& x : v) {
    x = cost(theta0);
    mean += x;
  }
  mean /= 5.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double t = 2.0 * std::sqrt(ss / 4.0);
  return t > 0.0 ? t : fallback;
}

struct StepResult {
  Phases3 theta{};
  double cost_plus = 0.0;
  double cost_minus = 0.0;
  Phases3 gradient{};
};

/// One simultaneous-perturbation step.
inline StepResult spsa_step(const Phases3& theta, std::size_t k, const SpsaConfig& cfg, double t,
                            const CostFn& cost, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  const double tk = perturb_at(k, cfg, t);
  StepResult r;
  for (std::size_t rep = 0; rep < cfg.gradient_reps; ++rep) {
    Phases3 delta{}, plus{}, minus{};
    for (std::size_t j = 0; j < 3; ++j) {
      delta[j] = coin(rng) ? 1.0 : -1.0;
      plus[j] = theta[j] + tk * delta[j];
      minus[j] = theta[j] - tk * delta[j];
    }
    const double cp = cost(plus), cm = cost(minus);
    r.cost_plus += cp / static_cast<double>(cfg.gradient_reps);
    r.cost_minus += cm / static_cast<double>(cfg.gradient_reps);
    for (std::size_t j = 0; j < 3; ++j)
      r.gradient[j] += (cp - cm) / (2.0 * tk * delta[j]) / static_cast<double>(cfg.gradient_reps);
  }
  const double ak = gain_at(k, cfg);
  for (std::size_t j = 0; j < 3; ++j) r.theta[j] = theta[j] - ak * r.gradient[j];
  return r;
}

struct SpsaRecord {
  std::size_t iter = 0;
  Phases3 theta{};
  double cost_plus = std::numeric_limits<double>::quiet_NaN();
  double cost_minus = std::numeric_limits<double>::quiet_NaN();
  Phases3 gradient{};
  double true_infidelity = 0.0;
};

struct SpsaTrace {
  Phases3 target{};
  double t = 0.0;
  std::vector<SpsaRecord> records;

  double final_infidelity() const { return records.back().true_infidelity; }
};

/**
 * Learn phases phi that reproduce an unknown target qudit. Each cost value
 * is 1 - (measured overlap) from one simulated experiment of
 * shots_per_eval coincidences with the target prepared on the (possibly
 * noisy) chip. Three independent random streams are derived from cfg.seed:
 * the initial point, the perturbation signs and the shot noise.
 */
inline SpsaTrace run_online_learning(const Phases3& target, const SpsaConfig& cfg,
                                     const overlap::ChipNoise& noise = {},
                                     const chip::QuditAmplitudes& amps = chip::nominal_amplitudes()) {
  cfg.validate();
  std::mt19937_64 init_rng(seed_mix(cfg.seed, 0));
  std::mt19937_64 delta_rng(seed_mix(cfg.seed, 1));
  std::uint64_t evals = 0;
  const CostFn cost = [&](const Phases3& phi) {
    const auto e = overlap::simulate_overlap_experiment(target, phi, cfg.shots_per_eval, noise,
                                                        seed_mix(cfg.seed, 2, evals++), amps);
    return 1.0 - e.value;
  };
  auto truth = [&](const Phases3& phi) { return 1.0 - chip::qudit_overlap(amps, target, phi); };

  std::uniform_real_distribution<double> u(0.0, 2 * chip::pi);
  Phases3 theta{u(init_rng), u(init_rng), u(init_rng)};

  SpsaTrace tr;
  tr.target = target;
  tr.t = cfg.t > 0.0 ? cfg.t : init_t(cost, theta, cfg.t_fallback);
  tr.records.reserve(cfg.iterations + 1);
  SpsaRecord r0;
  r0.theta = theta;
  r0.true_infidelity = truth(theta);
  tr.records.push_back(r0);
  for (std::size_t k = 0; k < cfg.iterations; ++k) {
    const auto s = spsa_step(theta, k, cfg, tr.t, cost, delta_rng);
    theta = s.theta;
    tr.records.push_back({k + 1, theta, s.cost_plus, s.cost_minus, s.gradient, truth(theta)});
  }
  return tr;
}

inline void write_trace_csv(std::ostream& os, const SpsaTrace& tr) {
  os << "iter,theta1,theta2,theta3,cost_plus,cost_minus,true_infidelity\n";
  char buf[256];
  for (const auto& r : tr.records) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.iter, r.theta[0], r.theta[1],
                  r.theta[2], r.cost_plus, r.cost_minus, r.true_infidelity);
    os << buf;
  }
}

/// Linear-interpolated quantile of an unsorted sample.
inline double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw ParameterError("quantile: empty sample");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

struct SpsaSummary {
  std::size_t runs = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

inline SpsaSummary summarize(const std::vector<SpsaTrace>& traces) {
  std::vector<double> f;
  for (const auto& t : traces) f.push_back(t.final_infidelity());
  return {f.size(), quantile(f, 0.5), quantile(f, 0.25), quantile(f, 0.75)};
}

inline void to_json(nlohmann::json& j, const SpsaSummary& s) {
  j = nlohmann::json{{"runs", s.runs}, {"median_final_infidelity", s.median}, {"q1", s.q1}, {"q3", s.q3}};
}

}  // namespace qoverlap::online
