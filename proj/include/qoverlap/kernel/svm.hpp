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
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qoverlap/errors.hpp"
#include "qoverlap/kernel/kernel_matrix.hpp"
#include "qoverlap/parallel.hpp"
#include "qoverlap/seed.hpp"

namespace qoverlap::kernel {

struct SvmOptions {
  double tolerance = 1e-6;          ///< maximal KKT violation at exit
  std::uint64_t max_updates = 100000;
  bool record_objective = false;
};

/**
 * Soft-margin SVM in dual form.
 *
 * Two biases are kept. `b` is the averaged correction
 * (1/m) sum_j (y_j - sum_i beta_i y_i K_ji) and is what predict() uses by
 * default. `b_dual` is the threshold implied by the KKT conditions of the
 * solved dual (mean over free vectors, or the midpoint of the feasible
 * interval when no vector is free).
 */
struct SvmModel {
  std::vector<double> beta;
  std::vector<int> y;
  double b = 0.0;
  double b_dual = 0.0;
  double C = 0.0;
  std::vector<std::size_t> support_indices;
  std::uint64_t updates = 0;
  double kkt_gap = 0.0;
  std::vector<double> objective_history;

  enum class Bias { Averaged, Dual };

  /// sum_i beta_i y_i k_i + bias over a full row of kernel values against the training set.
  double decision(std::span<const double> k_row, Bias bias = Bias::Averaged) const {
    if (k_row.size() != beta.size()) {
      throw DimensionError("svm: kernel row has " + std::to_string(k_row.size()) + " entries, model has " +
                           std::to_string(beta.size()) + " training points");
    }
    double f = 0.0;
    for (std::size_t i : support_indices) f += beta[i] * y[i] * k_row[i];
    return f + (bias == Bias::Averaged ? b : b_dual);
  }
};

/// Dual objective sum beta - 1/2 sum beta_i beta_j y_i y_j K_ij.
inline double dual_objective(const KernelMatrix& k, std::span<const int> y, std::span<const double> beta) {
  double lin = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < beta.size(); ++i) {
    lin += beta[i];
    if (beta[i] == 0.0) continue;
    for (std::size_t j = 0; j < beta.size(); ++j) quad += beta[i] * beta[j] * y[i] * y[j] * k(i, j);
  }
  return lin - 0.5 * quad;
}

/**
 * Sequential minimal optimisation with maximal-violating-pair selection.
 * Curvature <= 0 along the chosen pair (possible for noisy, indefinite
 * kernels) is replaced by a small positive constant.
 */
inline SvmModel svm_train(const KernelMatrix& k, const std::vector<int>& y, double C, const SvmOptions& opt = {}) {
  const std::size_t m = y.size();
  if (k.rows() != m || k.cols() != m) throw DimensionError("svm_train: kernel is not m x m");
  if (m == 0) throw ParameterError("svm_train: empty training set");
  if (!(C > 0.0)) throw ParameterError("svm_train: C must be positive");
  if (k.asymmetry() > 1e-12) throw ParameterError("svm_train: kernel matrix is not symmetric");
  for (int v : y)
    if (v != 1 && v != -1) throw ParameterError("svm_train: labels must be +1 or -1");

  constexpr double kTau = 1e-12;
  std::vector<double> beta(m, 0.0);
  std::vector<double> grad(m, -1.0);  // gradient of 1/2 b'Qb - sum b, Q_ij = y_i y_j K_ij
  SvmModel model;
  model.C = C;
  model.y = y;

  auto up = [&](std::size_t t) { return (y[t] == 1 && beta[t] < C) || (y[t] == -1 && beta[t] > 0.0); };
  auto low = [&](std::size_t t) { return (y[t] == 1 && beta[t] > 0.0) || (y[t] == -1 && beta[t] < C); };

  if (opt.record_objective) model.objective_history.push_back(0.0);
  double gap = 0.0;
  for (;;) {
    double gmax = -std::numeric_limits<double>::infinity(), gmin = std::numeric_limits<double>::infinity();
    std::size_t i = m;
    for (std::size_t t = 0; t < m; ++t) {
      if (up(t) && -y[t] * grad[t] >= gmax) {
        gmax = -y[t] * grad[t];
        i = t;
      }
    }
    std::size_t j = m;
    double best = std::numeric_limits<double>::infinity();
    if (i < m) {
      // Second-order choice of j among violating partners (LIBSVM WSS2).
      for (std::size_t t = 0; t < m; ++t) {
        if (!low(t)) continue;
        const double v = -y[t] * grad[t];
        gmin = std::min(gmin, v);
        const double diff = gmax - v;
        if (diff > 0.0) {
          double a = k(i, i) + k(t, t) - 2.0 * k(i, t);
          if (a <= 0.0) a = kTau;
          const double score = -(diff * diff) / a;
          if (score <= best) {
            best = score;
            j = t;
          }
        }
      }
    }
    gap = (i < m && std::isfinite(gmin)) ? gmax - gmin : 0.0;
    if (gap < opt.tolerance || j == m) break;
    if (model.updates >= opt.max_updates) {
      throw NumericalError("svm_train: no convergence after " + std::to_string(opt.max_updates) +
                           " pair updates (KKT gap " + std::to_string(gap) + ")");
    }

    // Move along y_i e_i - y_j e_j, which keeps sum beta y fixed.
    double a = k(i, i) + k(j, j) - 2.0 * k(i, j);
    if (a <= 0.0) a = kTau;
    double step = (-y[i] * grad[i] + y[j] * grad[j]) / a;
    // Box limits on step for beta_i += y_i step, beta_j -= y_j step.
    auto limit = [&](std::size_t t, double dir) {
      // beta_t + dir * step in [0, C]
      return dir > 0 ? (C - beta[t]) / dir : (0.0 - beta[t]) / dir;
    };
    step = std::min({step, limit(i, y[i]), limit(j, -y[j])});
    const double di = y[i] * step, dj = -y[j] * step;
    double bi = beta[i] + di, bj = beta[j] + dj;
    // Snap to the box to avoid drift.
    bi = std::clamp(bi, 0.0, C);
    bj = std::clamp(bj, 0.0, C);
    const double ci = bi - beta[i], cj = bj - beta[j];
    beta[i] = bi;
    beta[j] = bj;
    for (std::size_t t = 0; t < m; ++t) grad[t] += y[t] * (y[i] * k(t, i) * ci + y[j] * k(t, j) * cj);
    ++model.updates;
    if (opt.record_objective) model.objective_history.push_back(dual_objective(k, y, beta));
  }

  model.beta = beta;
  model.kkt_gap = gap;
  for (std::size_t t = 0; t < m; ++t)
    if (beta[t] > 0.0) model.support_indices.push_back(t);

  // Averaged bias.
  double bsum = 0.0;
  for (std::size_t jx = 0; jx < m; ++jx) {
    double f = 0.0;
    for (std::size_t ix : model.support_indices) f += beta[ix] * y[ix] * k(jx, ix);
    bsum += y[jx] - f;
  }
  model.b = bsum / static_cast<double>(m);

  // KKT threshold: b = -y_t grad_t for free vectors.
  double free_sum = 0.0;
  std::size_t n_free = 0;
  double ub = std::numeric_limits<double>::infinity(), lb = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < m; ++t) {
    const double v = -y[t] * grad[t];
    if (beta[t] > 0.0 && beta[t] < C) {
      free_sum += v;
      ++n_free;
    } else if (up(t)) {
      // b may rise up to here
      lb = std::max(lb, v);
    } else {
      ub = std::min(ub, v);
    }
  }
  if (n_free > 0) {
    model.b_dual = free_sum / static_cast<double>(n_free);
  } else if (std::isfinite(lb) && std::isfinite(ub)) {
    model.b_dual = 0.5 * (lb + ub);
  } else {
    model.b_dual = std::isfinite(lb) ? lb : (std::isfinite(ub) ? ub : 0.0);
  }
  return model;
}

/// Label from the decision value; an exact zero maps to +1.
inline int svm_predict(const SvmModel& model, std::span<const double> k_row,
                       SvmModel::Bias bias = SvmModel::Bias::Averaged) {
  return model.decision(k_row, bias) >= 0.0 ? 1 : -1;
}

/// Fraction of rows of k_cross (queries x training) predicted correctly.
inline double accuracy(const SvmModel& model, const KernelMatrix& k_cross, const std::vector<int>& y) {
  if (k_cross.rows() != y.size()) throw DimensionError("accuracy: label count mismatch");
  std::size_t ok = 0;
  for (std::size_t i = 0; i < y.size(); ++i) ok += svm_predict(model, k_cross.row(i)) == y[i];
  return static_cast<double>(ok) / static_cast<double>(y.size());
}

inline std::vector<int> labels(const std::vector<DataPoint>& d) {
  std::vector<int> y;
  y.reserve(d.size());
  for (const auto& p : d) y.push_back(p.y);
  return y;
}

struct BootstrapResult {
  double mean = 0.0;
  double std = 0.0;
  std::size_t resamples = 0;
  bool std_defined = false;  ///< false when only one resample was drawn
};

/**
 * Accuracy spread from resampling the recorded coincidences: every kernel
 * entry draws resample_n events with replacement from its pool, the model is
 * retrained on the resampled Gram matrix and scored on the resampled test
 * kernel.
 */
inline BootstrapResult bootstrap_accuracy(const KernelTallies& gram, const KernelTallies& cross,
                                          const std::vector<int>& y_train, const std::vector<int>& y_test,
                                          double R, double C, std::size_t resamples,
                                          std::uint64_t resample_n, std::uint64_t seed, unsigned jobs = 1) {
  if (resamples == 0) throw ParameterError("bootstrap_accuracy: need at least one resample");
  std::vector<double> acc(resamples);
  parallel_for(resamples, jobs, [&](std::size_t r) {
    const auto k = kernel_from_tallies(gram, R, resample_n, seed_mix(seed, 0, r));
    const auto x = kernel_from_tallies(cross, R, resample_n, seed_mix(seed, 1, r));
    acc[r] = accuracy(svm_train(k, y_train, C), x, y_test);
  });
  BootstrapResult out;
  out.resamples = resamples;
  for (double a : acc) out.mean += a;
  out.mean /= static_cast<double>(resamples);
  if (resamples > 1) {
    double ss = 0.0;
    for (double a : acc) ss += (a - out.mean) * (a - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(resamples - 1));
    out.std_defined = true;
  }
  return out;
}

inline void to_json(nlohmann::json& j, const SvmModel& m) {
  j = nlohmann::json{{"beta", m.beta}, {"b", m.b}, {"C", m.C}, {"support_indices", m.support_indices}};
}

}  // namespace qoverlap::kernel
