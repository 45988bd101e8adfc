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

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qoverlap/chip/calibration.hpp"
#include "qoverlap/cv/phase_space.hpp"
#include "qoverlap/io/config.hpp"
#include "qoverlap/io/output.hpp"
#include "qoverlap/kernel/svm.hpp"
#include "qoverlap/online/spsa.hpp"
#include "qoverlap/overlap/experiment.hpp"
#include "qoverlap/parallel.hpp"
#include "qoverlap/seed.hpp"

namespace qoverlap::cli {

inline constexpr const char* kToolName = "qoverlap";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

/// Values given on the command line; they win over the config file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<unsigned> jobs;
};

struct RunContext {
  io::Config& cfg;
  std::uint64_t seed;
  io::Format format;
  unsigned jobs;
  io::OutputDir& out;
  nlohmann::json seeds = nlohmann::json::object();

  void note_seed(const std::string& task, std::uint64_t s) { seeds[task] = s; }
};

namespace detail {

using nlohmann::json;

inline chip::Phases3 phases(const std::vector<double>& v, const std::string& key) {
  if (v.size() != 3) throw ConfigError("config '" + key + "': expected 3 phases");
  return {v[0], v[1], v[2]};
}

/// Owns the chip noise described by the "noise" section.
struct NoiseBlock {
  std::optional<chip::CrosstalkModel> model;
  double visibility = 1.0;

  overlap::ChipNoise view() const { return {model ? &*model : nullptr, visibility}; }
};

inline NoiseBlock read_noise(RunContext& ctx) {
  NoiseBlock nb;
  auto sec = ctx.cfg.section("noise");
  nb.visibility = sec.get<double>("visibility", 1.0);
  if (!(nb.visibility >= 0.0 && nb.visibility <= 1.0)) throw ConfigError("config 'noise.visibility': must be in [0, 1]");
  json xt = sec.raw("crosstalk");
  if (!xt.is_null()) {
    const std::uint64_t derived = seed_mix(ctx.seed, 0xC0FFEE);
    chip::CrosstalkParams p;
    if (xt.is_string()) {
      if (xt.get<std::string>() != "nominal") throw ConfigError("config 'noise.crosstalk': only \"nominal\" is a named preset");
      p = chip::CrosstalkParams::nominal(derived);
    } else {
      p = xt.get<chip::CrosstalkParams>();
      if (!xt.contains("seed")) p.seed = derived;
    }
    try {
      nb.model.emplace(p);
    } catch (const ParameterError& e) {
      throw ConfigError(std::string("config 'noise.crosstalk': ") + e.what());
    }
    ctx.note_seed("crosstalk", p.seed);
  }
  sec.finish();
  ctx.cfg.adopt("noise", sec);
  return nb;
}

inline chip::QuditAmplitudes read_amplitudes(RunContext& ctx) {
  const auto a = ctx.cfg.get<std::vector<double>>(
      "amplitude_angles", {chip::kNominalAngle1, chip::kNominalAngle2, chip::kNominalAngle3});
  if (a.size() != 3) throw ConfigError("config 'amplitude_angles': expected 3 angles");
  try {
    return chip::amplitudes_from_angles(a[0], a[1], a[2]);
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("config 'amplitude_angles': ") + e.what());
  }
}

inline kernel::DatasetParams read_generator(io::Config& cfg) {
  auto g = cfg.section("generator");
  kernel::DatasetParams p;
  p.separate_sigma = g.get("separate_sigma", p.separate_sigma);
  p.inner_radius = g.get("inner_radius", p.inner_radius);
  p.shell_radius = g.get("shell_radius", p.shell_radius);
  p.radial_jitter = g.get("radial_jitter", p.radial_jitter);
  p.overlap_sigma = g.get("overlap_sigma", p.overlap_sigma);
  p.overlap_offset = g.get("overlap_offset", p.overlap_offset);
  g.finish();
  cfg.adopt("generator", g);
  return p;
}

inline std::string kernel_csv(const kernel::KernelMatrix& k) {
  std::ostringstream os;
  kernel::write_kernel_csv(os, k);
  return os.str();
}

inline chip::Phases3 random_phases(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 2 * chip::pi);
  const double a = u(rng), b = u(rng), c = u(rng);
  return {a, b, c};
}

}  // namespace detail

/// Single overlap estimate, or a batch of random pairs for an error scatter.
inline void cmd_overlap(RunContext& ctx) {
  auto& cfg = ctx.cfg;
  const auto n_shots = cfg.get<std::uint64_t>("n_shots", 1000);
  const auto batch = cfg.get<std::uint64_t>("batch", 0);
  const auto amps = detail::read_amplitudes(ctx);
  const auto noise = detail::read_noise(ctx);
  if (n_shots == 0) throw ConfigError("config 'n_shots': must be >= 1");
  const double R = overlap::bunching_probability(amps);

  if (batch == 0) {
    const auto theta = detail::phases(cfg.require<std::vector<double>>("theta"), "theta");
    const auto phi = detail::phases(cfg.require<std::vector<double>>("phi"), "phi");
    cfg.finish();
    const std::uint64_t s = seed_mix(ctx.seed, 1, 0);
    ctx.note_seed("shots", s);
    const auto e = overlap::simulate_overlap_experiment(theta, phi, n_shots, noise.view(), s, amps);
    nlohmann::json j = e;
    j["exact"] = chip::qudit_overlap(amps, theta, phi);
    ctx.out.write_json("estimate.json", j);
    io::Table t{{"n_total", "n_odd", "n_even", "R"}, {}};
    t.add({static_cast<std::int64_t>(e.tally.n_total), static_cast<std::int64_t>(e.tally.n_odd),
           static_cast<std::int64_t>(e.tally.n_total - e.tally.n_odd), R});
    ctx.out.write_table("tally", t, ctx.format);
    return;
  }
  cfg.finish();
  struct Row {
    chip::Phases3 th, ph;
    overlap::OverlapEstimate e;
    double exact;
  };
  std::vector<Row> rows(batch);
  ctx.note_seed("pairs", seed_mix(ctx.seed, 2));
  parallel_for(batch, ctx.jobs, [&](std::size_t i) {
    std::mt19937_64 rng(seed_mix(ctx.seed, 2, i));
    Row r;
    r.th = detail::random_phases(rng);
    r.ph = detail::random_phases(rng);
    r.e = overlap::simulate_overlap_experiment(r.th, r.ph, n_shots, noise.view(), seed_mix(ctx.seed, 1, i), amps);
    r.exact = chip::qudit_overlap(amps, r.th, r.ph);
    rows[i] = r;
  });
  io::Table t{{"pair", "theta1", "theta2", "theta3", "phi1", "phi2", "phi3", "exact", "estimate", "error", "n_odd"}, {}};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    t.add({static_cast<std::int64_t>(i), r.th[0], r.th[1], r.th[2], r.ph[0], r.ph[1], r.ph[2], r.exact, r.e.value,
           r.e.value - r.exact, static_cast<std::int64_t>(r.e.tally.n_odd)});
  }
  ctx.out.write_table("scatter", t, ctx.format);
}

/// Kernel SVM on a generated or loaded dataset.
inline void cmd_classify(RunContext& ctx) {
  auto& cfg = ctx.cfg;
  const auto kind_name = cfg.get<std::string>("dataset", "separate");
  const auto file = cfg.get<std::string>("dataset_file", "");
  const auto n_points = cfg.get<std::uint64_t>("n_points", 200);
  const auto n_train = cfg.get<std::uint64_t>("n_train", 100);
  const auto n_shots = cfg.get<std::uint64_t>("n_shots", 1000);
  const auto C = cfg.get<double>("C", 0.8);
  const auto resamples = cfg.get<std::uint64_t>("bootstrap", 0);
  const auto pool = cfg.get<std::uint64_t>("pool", 15000);
  const auto gen = detail::read_generator(cfg);
  const auto amps = detail::read_amplitudes(ctx);
  const auto noise = detail::read_noise(ctx);
  cfg.finish();
  if (!(C > 0.0)) throw ConfigError("config 'C': must be positive");

  std::vector<kernel::DataPoint> data;
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw ConfigError("config 'dataset_file': cannot open '" + file + "'");
    data = kernel::read_dataset_csv(in);
  } else {
    const std::uint64_t s = seed_mix(ctx.seed, 3);
    ctx.note_seed("dataset", s);
    data = kernel::gen_dataset(kernel::dataset_kind_from_string(kind_name), n_points, s, gen);
  }
  if (n_train == 0 || n_train >= data.size()) throw ConfigError("config 'n_train': must be in [1, n_points)");
  const std::uint64_t split_seed = seed_mix(ctx.seed, 4);
  ctx.note_seed("split", split_seed);
  const auto [train, test] = kernel::split_dataset(data, n_train, split_seed);

  kernel::KernelOptions ko;
  ko.n_shots = n_shots;
  ko.noise = noise.view();
  ko.base_seed = seed_mix(ctx.seed, 5);
  ko.jobs = ctx.jobs;
  ko.amps = amps;
  ctx.note_seed("kernel", ko.base_seed);
  const auto k_train = kernel::kernel_matrix(train, ko);
  const auto k_test = kernel::kernel_cross(test, train, ko);
  const auto y_train = kernel::labels(train), y_test = kernel::labels(test);
  const auto model = kernel::svm_train(k_train, y_train, C);

  ctx.out.write("kernel_train.csv", detail::kernel_csv(k_train));
  ctx.out.write("kernel_test.csv", detail::kernel_csv(k_test));
  ctx.out.write_json("model.json", nlohmann::json(model));

  double boot_mean = NAN, boot_std = NAN;
  if (resamples > 0) {
    if (n_shots == 0) throw ConfigError("config 'bootstrap': needs n_shots > 0");
    if (pool < n_shots) throw ConfigError("config 'pool': must be >= n_shots");
    kernel::KernelOptions po = ko;
    po.base_seed = seed_mix(ctx.seed, 6);
    ctx.note_seed("bootstrap_pool", po.base_seed);
    const auto g = kernel::kernel_tallies(train, train, true, pool, po);
    const auto c = kernel::kernel_tallies(test, train, false, pool, po);
    const auto b = kernel::bootstrap_accuracy(g, c, y_train, y_test, overlap::bunching_probability(amps), C,
                                              resamples, n_shots, seed_mix(ctx.seed, 7), ctx.jobs);
    boot_mean = b.mean;
    boot_std = b.std_defined ? b.std : 0.0;
  }
  io::Table t{{"dataset", "n_train", "n_test", "n_shots", "C", "train_accuracy", "test_accuracy", "n_support",
               "bootstrap_resamples", "bootstrap_mean", "bootstrap_std"},
              {}};
  t.add({file.empty() ? kind_name : file, static_cast<std::int64_t>(train.size()),
         static_cast<std::int64_t>(test.size()), static_cast<std::int64_t>(n_shots), C,
         kernel::accuracy(model, k_train, y_train), kernel::accuracy(model, k_test, y_test),
         static_cast<std::int64_t>(model.support_indices.size()), static_cast<std::int64_t>(resamples), boot_mean,
         boot_std});
  ctx.out.write_table("metrics", t, ctx.format);
}

/// Online learning of random targets.
inline void cmd_spsa(RunContext& ctx) {
  auto& cfg = ctx.cfg;
  online::SpsaConfig sc;
  const auto n_targets = cfg.get<std::uint64_t>("n_targets", 10);
  sc.shots_per_eval = cfg.get<std::uint64_t>("shots_per_eval", sc.shots_per_eval);
  sc.iterations = cfg.get<std::uint64_t>("iterations", sc.iterations);
  sc.a = cfg.get("a", sc.a);
  sc.A = cfg.get("A", sc.A);
  sc.alpha = cfg.get("alpha", sc.alpha);
  sc.gamma = cfg.get("gamma", sc.gamma);
  sc.t = cfg.get("t", sc.t);
  sc.t_fallback = cfg.get("t_fallback", sc.t_fallback);
  sc.gradient_reps = cfg.get<std::uint64_t>("gradient_reps", sc.gradient_reps);
  const auto amps = detail::read_amplitudes(ctx);
  const auto noise = detail::read_noise(ctx);
  cfg.finish();
  try {
    sc.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (n_targets == 0) throw ConfigError("config 'n_targets': must be >= 1");

  std::vector<online::SpsaTrace> traces(n_targets);
  parallel_for(n_targets, ctx.jobs, [&](std::size_t i) {
    std::mt19937_64 rng(seed_mix(ctx.seed, 8, i));
    const auto target = detail::random_phases(rng);
    online::SpsaConfig c = sc;
    c.seed = seed_mix(ctx.seed, 9, i);
    traces[i] = online::run_online_learning(target, c, noise.view(), amps);
  });
  io::Table finals{{"target", "target1", "target2", "target3", "t", "initial_infidelity", "final_infidelity"}, {}};
  for (std::size_t i = 0; i < traces.size(); ++i) {
    ctx.note_seed("target_" + std::to_string(i), seed_mix(ctx.seed, 8, i));
    ctx.note_seed("run_" + std::to_string(i), seed_mix(ctx.seed, 9, i));
    std::ostringstream os;
    online::write_trace_csv(os, traces[i]);
    char name[32];
    std::snprintf(name, sizeof name, "trace_%03zu.csv", i);
    ctx.out.write(name, os.str());
    const auto& tr = traces[i];
    finals.add({static_cast<std::int64_t>(i), tr.target[0], tr.target[1], tr.target[2], tr.t,
                tr.records.front().true_infidelity, tr.final_infidelity()});
  }
  ctx.out.write_table("finals", finals, ctx.format);
  nlohmann::json summary = online::summarize(traces);
  summary["shots_per_eval"] = sc.shots_per_eval;
  summary["iterations"] = sc.iterations;
  ctx.out.write_json("summary.json", summary);
}

/// Phase-space Monte-Carlo overlap and the distributed-estimation plan.
inline void cmd_cv_overlap(RunContext& ctx) {
  auto& cfg = ctx.cfg;
  const auto kappa = cfg.get<double>("kappa", 8.0);
  const auto L = cfg.get<std::uint64_t>("L", 100000);
  const auto eps = cfg.get<double>("eps", 0.1);
  const auto delta = cfg.get<double>("delta", 1.0 / 3.0);
  const auto c = cfg.get<double>("c", 1.0);
  const auto plan_only = cfg.get<bool>("plan_only", false);
  const auto chi_noise = cfg.get<bool>("chi_noise", false);
  const auto sweep = cfg.get<std::vector<std::uint64_t>>("plan_modes", {});
  const auto sigma_given = cfg.get<double>("sigma_L", 1.0);
  auto ja = cfg.raw("state_a");
  auto jb = cfg.raw("state_b");
  cfg.finish();
  if (!(kappa > 0.0)) throw ConfigError("config 'kappa': must be positive");

  double sigma_L = sigma_given;
  std::size_t modes = 1;
  if (!plan_only) {
    if (ja.is_null() || jb.is_null()) throw ConfigError("config: 'state_a' and 'state_b' are required");
    const auto a = cv::cv_state_from_json(ja), b = cv::cv_state_from_json(jb);
    modes = a.modes();
    const cv::HypersphereSpec spec{modes, kappa};
    double eps_tilde = 0.0;
    if (chi_noise) eps_tilde = cv::distributed_plan(eps, delta, spec, 1.0, c).eps_tilde;
    const std::uint64_t s = seed_mix(ctx.seed, 10);
    ctx.note_seed("phase_space_points", s);
    const auto r = cv::mc_overlap(a, b, spec, L, eps_tilde, s);
    sigma_L = r.sigma_L;
    double max_photons = 0.0;
    for (std::size_t k = 0; k < modes; ++k) max_photons = std::max({max_photons, a.mean_photons(k), b.mean_photons(k)});
    ctx.out.write_json("estimate.json", {{"value", r.value},
                                         {"imag", r.imag},
                                         {"std_error", r.std_error},
                                         {"imag_std_error", r.imag_std_error},
                                         {"sigma_L", r.sigma_L},
                                         {"L", r.L},
                                         {"kappa", kappa},
                                         {"volume", r.volume},
                                         {"chi_noise", eps_tilde},
                                         {"max_mean_photons", max_photons}});
  }
  if (!(sigma_L > 0.0)) sigma_L = sigma_given;
  ctx.out.write_json("plan.json", nlohmann::json(cv::distributed_plan(eps, delta, {modes, kappa}, sigma_L, c)));
  if (!sweep.empty()) {
    io::Table t{{"M", "kappa", "eps", "delta", "eps_tilde", "L", "N", "log_N"}, {}};
    for (auto m : sweep) {
      if (m == 0) throw ConfigError("config 'plan_modes': M must be >= 1");
      const auto p = cv::distributed_plan(eps, delta, {m, kappa}, sigma_L, c);
      t.add({static_cast<std::int64_t>(m), kappa, eps, delta, p.eps_tilde, p.L, p.N, p.log_N});
    }
    ctx.out.write_table("plan_sweep", t, ctx.format);
  }
}

/// Sample-complexity table: joint parity, Helstrom bound and the CV protocol.
inline void cmd_complexity(RunContext& ctx) {
  auto& cfg = ctx.cfg;
  const auto eps = cfg.get<std::vector<double>>("eps", {0.1});
  const auto delta = cfg.get<std::vector<double>>("delta", {1.0 / 3.0});
  const auto modes = cfg.get<std::uint64_t>("modes", 1);
  const auto kappa = cfg.get<double>("kappa", 1.0);
  const auto sigma_L = cfg.get<double>("sigma_L", 1.0);
  const auto c = cfg.get<double>("c", 1.0);
  cfg.finish();
  io::Table t{{"eps", "delta", "hoeffding", "helstrom", "cv_N"}, {}};
  for (double e : eps)
    for (double d : delta) {
      try {
        t.add({e, d, static_cast<std::int64_t>(overlap::hoeffding_samples(e, d)),
               static_cast<std::int64_t>(overlap::helstrom_lower_bound(e, d)),
               cv::distributed_plan(e, d, {modes, kappa}, sigma_L, c).N});
      } catch (const ParameterError& ex) {
        throw ConfigError(std::string("config: ") + ex.what());
      }
    }
  ctx.out.write_table("complexity", t, ctx.format);
}

/// Calibration of a simulated chip with hidden residual phases.
inline void cmd_calibrate(RunContext& ctx) {
  auto& cfg = ctx.cfg;
  const auto dc_sigma = cfg.get<double>("dc_sigma", 0.03);
  const auto n_points = cfg.get<int>("n_points", 64);
  const auto noise_sigma = cfg.get<double>("noise_sigma", 0.0);
  cfg.finish();
  if (!(dc_sigma >= 0.0) || !(noise_sigma >= 0.0)) throw ConfigError("config: sigmas must be >= 0");
  if (n_points < 8) throw ConfigError("config 'n_points': must be >= 8");
  const std::uint64_t chip_seed = seed_mix(ctx.seed, 11);
  ctx.note_seed("chip", chip_seed);
  const auto chip = chip::HiddenChip::random(chip_seed, dc_sigma);
  std::optional<chip::SweepNoise> noise;
  if (noise_sigma > 0.0) {
    noise = chip::SweepNoise{noise_sigma, seed_mix(ctx.seed, 12)};
    ctx.note_seed("readout", noise->seed);
  }
  const auto cal = chip::calibrate_chip(chip, n_points, noise);
  io::Table t{{"i", "j", "kind", "estimate", "truth", "error", "bias"}, {}};
  for (const auto& [a, v] : cal.internal) {
    const double truth = chip.true_internal_offset(a);
    t.add({std::int64_t{a.row}, std::int64_t{a.col}, std::string("internal"), v, truth,
           chip::detail::wrap_pm_pi(v - truth), 0.0});
  }
  for (const auto& [a, v] : cal.relative) {
    const double truth = chip::true_meta_offset(chip, a);
    t.add({std::int64_t{a.row}, std::int64_t{a.col}, std::string("sigma"), v, truth,
           chip::detail::wrap_pm_pi(v - truth), chip::meta_mzi_bias(chip, a, n_points)});
  }
  ctx.out.write_table("calibration", t, ctx.format);
}

/// Dataset generation only.
inline void cmd_dataset(RunContext& ctx) {
  auto& cfg = ctx.cfg;
  const auto kind = kernel::dataset_kind_from_string(cfg.get<std::string>("dataset", "separate"));
  const auto n = cfg.get<std::uint64_t>("n_points", 200);
  const auto gen = detail::read_generator(cfg);
  cfg.finish();
  const std::uint64_t s = seed_mix(ctx.seed, 3);
  ctx.note_seed("dataset", s);
  std::vector<kernel::DataPoint> d;
  try {
    d = kernel::gen_dataset(kind, n, s, gen);
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (ctx.format == io::Format::Csv) {
    std::ostringstream os;
    kernel::write_dataset_csv(os, d);
    ctx.out.write("dataset.csv", os.str());
  } else {
    io::Table t{{"theta1", "theta2", "theta3", "label"}, {}};
    for (const auto& p : d) t.add({p.x[0], p.x[1], p.x[2], std::int64_t{p.y}});
    ctx.out.write_table("dataset", t, ctx.format);
  }
}

inline const std::map<std::string, std::function<void(RunContext&)>>& commands() {
  static const std::map<std::string, std::function<void(RunContext&)>> table{
      {"overlap", cmd_overlap},       {"classify", cmd_classify},     {"spsa", cmd_spsa},
      {"cv-overlap", cmd_cv_overlap}, {"complexity", cmd_complexity}, {"calibrate", cmd_calibrate},
      {"dataset", cmd_dataset}};
  return table;
}

/**
 * Resolve global settings, run one command and write manifest.json. Global
 * keys in the config file: seed, output_dir, format, jobs; command-line
 * overrides take precedence. Returns the manifest.
 */
inline nlohmann::json run(const std::string& command, io::Config cfg, const Overrides& ov = {}) {
  const auto it = commands().find(command);
  if (it == commands().end()) throw ConfigError("unknown command '" + command + "'");
  const auto started = std::chrono::steady_clock::now();

  std::uint64_t seed = cfg.get<std::uint64_t>("seed", 0);
  std::string out_dir = cfg.get<std::string>("output_dir", "out");
  std::string fmt = cfg.get<std::string>("format", "csv");
  unsigned jobs = cfg.get<unsigned>("jobs", 1);
  if (ov.seed) seed = *ov.seed;
  if (ov.out) out_dir = *ov.out;
  if (ov.format) fmt = *ov.format;
  if (ov.jobs) jobs = *ov.jobs;
  if (jobs == 0) throw ConfigError("jobs must be >= 1");

  io::OutputDir out(out_dir);
  RunContext ctx{cfg, seed, io::format_from_string(fmt), jobs, out};
  it->second(ctx);

  nlohmann::json resolved = cfg.resolved();
  resolved["seed"] = seed;
  resolved["output_dir"] = out_dir;
  resolved["format"] = fmt;
  resolved["jobs"] = jobs;
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  nlohmann::json manifest{{"tool", kToolName},       {"version", kToolVersion}, {"schema", kSchemaVersion},
                          {"command", command},      {"config", resolved},      {"seeds", ctx.seeds},
                          {"files", out.file_list()}, {"wall_clock_seconds", secs}};
  std::ofstream mf(out.path() / "manifest.json");
  mf << manifest.dump(2) << "\n";
  return manifest;
}

}  // namespace qoverlap::cli
