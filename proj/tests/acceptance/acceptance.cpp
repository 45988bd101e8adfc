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


// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "../test_util.hpp"
#include "qoverlap/cli/commands.hpp"
#include "qoverlap/qoverlap.hpp"

using namespace qoverlap;
using optics::cplx;
using optics::pi;

namespace {

// Tolerances and thresholds.
constexpr std::uint64_t kHoeffding = 359;
constexpr std::uint64_t kHelstrom = 3;
constexpr double kCoverageMaxBad = 0.38;
constexpr double kOracleTol = 1e-10;
constexpr double kBunchingTol = 1e-10;
constexpr double kSeparateMin = 1.0;
constexpr double kSphericalMin = 0.99;
constexpr double kOverlapLo = 0.94, kOverlapHi = 1.0;
constexpr double kNoisySeparate = 0.96, kNoisySpherical = 0.94, kNoisyOverlap = 0.85;
constexpr double kSpsaMedianMax = 0.05;
constexpr double kFidelityMedianMin = 0.97, kFidelityLo = 0.95, kFidelityHi = 1.0;
constexpr double kCoherentTol = 0.02, kFockTol = 0.03, kSlope = -0.5, kSlopeTol = 0.1;
constexpr double kUnitarityTol = 1e-12, kNormTol = 1e-10, kChiTol = 1e-12, kKktTol = 1e-6;

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& f) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = f();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("[%s] %2d %-28s %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), s);
  std::fflush(stdout);
  failures += !o.pass;
}

template <class... Args>
std::string fmt(const char* f, Args... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

chip::Phases3 draw(std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(0.0, 2 * pi);
  return {u(g), u(g), u(g)};
}

double median(std::vector<double> v) { return online::quantile(std::move(v), 0.5); }

Outcome sample_complexity() {
  const auto h = overlap::hoeffding_samples(0.1, 1.0 / 3), l = overlap::helstrom_lower_bound(0.1, 1.0 / 3);
  return {h == kHoeffding && l == kHelstrom,
          fmt("hoeffding=%llu helstrom=%llu", (unsigned long long)h, (unsigned long long)l)};
}

Outcome coverage() {
  const auto amps = chip::nominal_amplitudes();
  const auto n = overlap::hoeffding_samples(0.1, 1.0 / 3);
  std::mt19937_64 g(3);
  int bad = 0;
  const int pairs = 300;
  for (int t = 0; t < pairs; ++t) {
    const auto th = draw(g), ph = draw(g);
    const auto e = overlap::simulate_overlap_experiment(th, ph, n, {}, seed_mix(9, t));
    bad += std::abs(e.value - chip::qudit_overlap(amps, th, ph)) > 0.1;
  }
  const double frac = double(bad) / pairs;
  return {frac <= kCoverageMaxBad, fmt("bad fraction %.3f over %d pairs at N=%llu (max %.2f)", frac, pairs,
                                       (unsigned long long)n, kCoverageMaxBad)};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(31);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = 1 + rng() % 4;
    const int k = 1 + static_cast<int>(rng() % 3);
    std::vector<int> occ(m, 0);
    for (int p = 0; p < k; ++p) ++occ[rng() % m];
    const auto u = testing::haar_unitary(m, rng);
    const optics::FockOccupation in(occ);
    const auto a = optics::evolve_fock(u, in), b = optics::brute_force_evolve(u, in);
    for (std::size_t i = 0; i < a.dimension(); ++i)
      worst = std::max(worst, std::abs(std::norm(a.amplitudes()[i]) - std::norm(b.amplitude(a.basis()[i]))));
  }
  return {worst <= kOracleTol, fmt("max probability deviation %.2e (tol %.0e)", worst, kOracleTol)};
}

Outcome bunching_identity() {
  const auto amps = chip::nominal_amplitudes();
  const double R = overlap::bunching_probability(amps);
  std::mt19937_64 g(41);
  double worst = 0.0;
  std::vector<int> in(optics::kMeshModes, 0);
  in[chip::kThetaInputMode] = in[chip::kPhiInputMode] = 1;
  for (int t = 0; t < 50; ++t) {
    const auto th = draw(g);
    const auto u = optics::compose_mesh(chip::build_overlap_circuit(th, th, amps));
    const auto s = optics::brute_force_evolve(u, optics::FockOccupation(in));
    double same = 0.0;
    for (std::size_t i = 0; i < s.dimension(); ++i)
      for (int n : s.basis()[i].occupations())
        if (n == 2) same += std::norm(s.amplitudes()[i]);
    worst = std::max(worst, std::abs(same - R));
  }
  return {worst <= kBunchingTol, fmt("R=%.6f max deviation %.2e", R, worst)};
}

struct SvmScores {
  double separate = 0, spherical = 0, overlapping = 0;
};

SvmScores svm_scores(int seeds, std::uint64_t n_shots, const chip::CrosstalkModel* xt) {
  SvmScores out;
  for (auto kind : {kernel::DatasetKind::Separate, kernel::DatasetKind::Spherical, kernel::DatasetKind::Overlapping}) {
    double acc = 0.0;
    for (int s = 0; s < seeds; ++s) {
      const auto d = kernel::gen_dataset(kind, 200, 100 + s);
      const auto [train, test] = kernel::split_dataset(d, 100, 200 + s);
      kernel::KernelOptions o;
      o.n_shots = n_shots;
      o.noise.crosstalk = xt;
      o.base_seed = s;
      const auto m = kernel::svm_train(kernel::kernel_matrix(train, o), kernel::labels(train), 0.8);
      acc += kernel::accuracy(m, kernel::kernel_cross(test, train, o), kernel::labels(test));
    }
    acc /= seeds;
    (kind == kernel::DatasetKind::Separate ? out.separate
     : kind == kernel::DatasetKind::Spherical ? out.spherical
                                              : out.overlapping) = acc;
  }
  return out;
}

Outcome noiseless_svm() {
  const auto s = svm_scores(10, 0, nullptr);
  const bool ok = s.separate >= kSeparateMin && s.spherical >= kSphericalMin && s.overlapping >= kOverlapLo &&
                  s.overlapping <= kOverlapHi;
  return {ok, fmt("mean test accuracy over 10 seeds: separate %.3f spherical %.3f overlapping %.3f", s.separate,
                  s.spherical, s.overlapping)};
}

Outcome noisy_svm() {
  const chip::CrosstalkModel xt(chip::CrosstalkParams::nominal(77));
  const auto s = svm_scores(5, 1000, &xt);
  const bool ok = s.separate >= kNoisySeparate && s.spherical >= kNoisySpherical && s.overlapping >= kNoisyOverlap;
  return {ok, fmt("n_shots=1000 with crosstalk, 5 seeds: separate %.3f spherical %.3f overlapping %.3f", s.separate,
                  s.spherical, s.overlapping)};
}

online::SpsaSummary spsa_batch(std::uint64_t shots) {
  std::vector<online::SpsaTrace> traces;
  for (int i = 0; i < 10; ++i) {
    const chip::CrosstalkModel xt(chip::CrosstalkParams::nominal(seed_mix(3, i)));
    std::mt19937_64 g(seed_mix(4, i));
    online::SpsaConfig c;
    c.iterations = 500;
    c.shots_per_eval = shots;
    c.seed = seed_mix(5, i);
    traces.push_back(online::run_online_learning(draw(g), c, {&xt, 1.0}));
  }
  return online::summarize(traces);
}

Outcome spsa_convergence() {
  const auto a = spsa_batch(100), b = spsa_batch(1000), c = spsa_batch(10000);
  const auto inside = [&](double m) { return m >= a.q1 && m <= a.q3; };
  const bool ok = a.median <= kSpsaMedianMax && inside(b.median) && inside(c.median);
  return {ok, fmt("median N=1e2 %.4f [IQR %.4f, %.4f], N=1e3 %.4f, N=1e4 %.4f", a.median, a.q1, a.q3, b.median,
                  c.median)};
}

Outcome crosstalk_fidelity() {
  const auto amps = chip::nominal_amplitudes();
  std::mt19937_64 g(7);
  std::vector<double> f;
  for (int t = 0; t < 100; ++t) {
    const chip::CrosstalkModel m(chip::CrosstalkParams::nominal(1000 + t));
    const auto th = draw(g), ph = draw(g);
    const auto ideal = chip::coincidence_distribution(overlap::overlap_distribution(th, ph, amps));
    const auto noisy = chip::coincidence_distribution(overlap::overlap_distribution(th, ph, amps, {&m, 1.0}));
    f.push_back(chip::distribution_fidelity(ideal, noisy));
  }
  const double med = median(f);
  const bool ok = med >= kFidelityMedianMin && med >= kFidelityLo && med <= kFidelityHi;
  return {ok, fmt("median fidelity %.4f over 100 circuits (min %.4f)", med, *std::min_element(f.begin(), f.end()))};
}

Outcome cv_monte_carlo() {
  const cv::HypersphereSpec spec{1, 8.0};
  const auto vac = cv::CvState::coherent({0.0}), one = cv::CvState::coherent({1.0});
  const double coh = cv::mc_overlap(vac, one, spec, 100000, 0.0, 91).value;
  const auto f1 = cv::CvState::fock({1});
  const double fock = cv::mc_overlap(f1, f1, spec, 100000, 0.0, 92).value;

  // RMS error against L, fitted on a log-log scale.
  const double truth = std::exp(-1.0);
  const std::vector<std::pair<std::size_t, int>> grid{{1000, 400}, {10000, 100}, {100000, 40}, {1000000, 10}};
  std::vector<double> x, y;
  for (const auto& [L, reps] : grid) {
    double ss = 0.0;
    for (int r = 0; r < reps; ++r) {
      const double e = cv::mc_overlap(vac, one, spec, L, 0.0, seed_mix(93, L, r)).value - truth;
      ss += e * e;
    }
    x.push_back(std::log(double(L)));
    y.push_back(0.5 * std::log(ss / reps));
  }
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  const double slope = sxy / sxx;
  const bool ok = std::abs(coh - truth) <= kCoherentTol && std::abs(fock - 1.0) <= kFockTol &&
                  std::abs(slope - kSlope) <= kSlopeTol;
  return {ok, fmt("coherent %.4f (exact %.4f), fock-1 %.4f, error slope %.3f", coh, truth, fock, slope)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome properties() {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> ph(0.0, 2 * pi), err(-0.1, 0.1), u(-2.0, 2.0);
  double unit = 0.0, norm = 0.0, chi = 0.0, kkt = 0.0;
  for (int t = 0; t < 20; ++t) {
    optics::MeshSettings s;
    optics::DcErrorMap e;
    for (const auto& a : optics::all_mzi_addresses()) {
      s[a] = {ph(rng), ph(rng)};
      e[a] = {err(rng), err(rng)};
    }
    const auto U = optics::compose_mesh(s, e);
    unit = std::max(unit, optics::unitarity_defect(U.matrix()));
    std::vector<int> in(optics::kMeshModes, 0);
    in[rng() % in.size()] += 1;
    in[rng() % in.size()] += 1;
    norm = std::max(norm, std::abs(optics::evolve_fock(U, optics::FockOccupation(in)).norm_squared() - 1.0));
    const cplx a(u(rng), u(rng)), b(u(rng), u(rng));
    for (const auto& st : {cv::CvState::coherent({b}), cv::CvState::cat({b}), cv::CvState::fock({t % 4}),
                           cv::CvState::squeezed({0.05 * t}, {u(rng)})})
      chi = std::max(chi, std::abs(cv::char_fn(st, {a})) - 1.0);
  }
  for (int t = 0; t < 5; ++t) {
    const auto d = kernel::gen_dataset(kernel::DatasetKind::Overlapping, 40, 60 + t);
    const auto m = kernel::svm_train(kernel::kernel_matrix(d, {}), kernel::labels(d), 0.8);
    double eq = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      eq += m.beta[i] * d[i].y;
      if (m.beta[i] < 0.0 || m.beta[i] > 0.8) eq = INFINITY;
    }
    kkt = std::max({kkt, std::abs(eq), m.kkt_gap});
  }
  namespace fs = std::filesystem;
  const auto base = fs::temp_directory_path() / "qoverlap_acceptance";
  fs::remove_all(base);
  const nlohmann::json cfg{{"n_points", 30}, {"n_train", 15}, {"n_shots", 300}, {"seed", 5},
                           {"noise", {{"crosstalk", "nominal"}}}};
  cli::Overrides oa, ob;
  oa.out = (base / "a").string();
  ob.out = (base / "b").string();
  ob.jobs = 2;
  const auto ma = cli::run("classify", io::Config(cfg), oa);
  cli::run("classify", io::Config(cfg), ob);
  bool replay = true;
  for (const auto& f : ma["files"]) {
    const auto name = f["path"].get<std::string>();
    replay = replay && slurp(base / "a" / name) == slurp(base / "b" / name);
  }
  const bool ok = unit <= kUnitarityTol && norm <= kNormTol && chi <= kChiTol && kkt <= kKktTol && replay;
  return {ok, fmt("unitarity %.1e, norm %.1e, chi excess %.1e, svm feasibility/kkt %.1e, replay %s", unit, norm,
                  std::max(chi, 0.0), kkt, replay ? "identical" : "DIFFERS")};
}

}  // namespace

int main() {
  report(1, "sample-complexity constants", sample_complexity);
  report(2, "estimator coverage", coverage);
  report(3, "evolution oracle", oracle_equivalence);
  report(4, "bunching identity", bunching_identity);
  report(5, "noiseless svm", noiseless_svm);
  report(6, "noisy svm", noisy_svm);
  report(7, "spsa convergence", spsa_convergence);
  report(8, "crosstalk fidelity", crosstalk_fidelity);
  report(9, "cv monte carlo", cv_monte_carlo);
  report(10, "property suites", properties);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
