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
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "qoverlap/kernel/dataset.hpp"
#include "qoverlap/overlap/experiment.hpp"
#include "qoverlap/parallel.hpp"
#include "qoverlap/seed.hpp"

namespace qoverlap::kernel {

/// Dense row-major real matrix of kernel values.
class KernelMatrix {
 public:
  KernelMatrix() = default;
  KernelMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), v_(rows * cols, 0.0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return v_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return v_[i * cols_ + j]; }
  std::span<const double> row(std::size_t i) const { return {v_.data() + i * cols_, cols_}; }
  const std::vector<double>& values() const noexcept { return v_; }

  double asymmetry() const {
    if (rows_ != cols_) return INFINITY;
    double d = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j) d = std::max(d, std::abs((*this)(i, j) - (*this)(j, i)));
    return d;
  }

  bool operator==(const KernelMatrix&) const = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> v_;
};

struct KernelOptions {
  std::uint64_t n_shots = 0;       ///< 0: exact overlaps
  overlap::ChipNoise noise{};
  std::uint64_t base_seed = 0;
  unsigned jobs = 1;
  chip::QuditAmplitudes amps = chip::nominal_amplitudes();
};

namespace detail {
inline double clip01(double v) { return std::clamp(v, 0.0, 1.0); }

inline double entry(const DataPoint& a, const DataPoint& b, const KernelOptions& o, std::uint64_t seed) {
  if (o.n_shots == 0) return clip01(chip::qudit_overlap(o.amps, a.x, b.x));
  return clip01(overlap::simulate_overlap_experiment(a.x, b.x, o.n_shots, o.noise, seed, o.amps).value);
}

// Seed block tags keep Gram and cross-kernel entries on disjoint streams.
inline constexpr std::uint64_t kGramBlock = 0;
inline constexpr std::uint64_t kCrossBlock = 1;
}  // namespace detail

/**
 * Gram matrix over one data set. Each unordered pair is measured once with
 * seed seed_mix(base, 0, i, j) and mirrored. The diagonal is exactly 1 for
 * exact overlaps and measured like every other entry otherwise.
 */
inline KernelMatrix kernel_matrix(const std::vector<DataPoint>& data, const KernelOptions& o) {
  const std::size_t m = data.size();
  KernelMatrix k(m, m);
  parallel_for(m, o.jobs, [&](std::size_t i) {
    for (std::size_t j = i; j < m; ++j) {
      const double v = (i == j && o.n_shots == 0)
                           ? 1.0
                           : detail::entry(data[i], data[j], o, seed_mix(o.base_seed, detail::kGramBlock, i, j));
      k(i, j) = v;
      k(j, i) = v;
    }
  });
  return k;
}

/// Rows: query points, columns: training points.
inline KernelMatrix kernel_cross(const std::vector<DataPoint>& queries, const std::vector<DataPoint>& train,
                                 const KernelOptions& o) {
  KernelMatrix k(queries.size(), train.size());
  parallel_for(queries.size(), o.jobs, [&](std::size_t i) {
    for (std::size_t j = 0; j < train.size(); ++j)
      k(i, j) = detail::entry(queries[i], train[j], o, seed_mix(o.base_seed, detail::kCrossBlock, i, j));
  });
  return k;
}

/**
 * Parity tallies retained per kernel entry, for bootstrap resampling.
 * Symmetric tallies store only i <= j and mirror on read.
 */
struct KernelTallies {
  std::size_t rows = 0, cols = 0;
  bool symmetric = false;
  std::vector<overlap::ParityTally> t;

  const overlap::ParityTally& at(std::size_t i, std::size_t j) const {
    if (symmetric && i > j) std::swap(i, j);
    return t[i * cols + j];
  }
};

inline KernelTallies kernel_tallies(const std::vector<DataPoint>& rows, const std::vector<DataPoint>& cols,
                                    bool symmetric, std::uint64_t pool, const KernelOptions& o) {
  if (pool == 0) throw ParameterError("kernel_tallies: pool must be >= 1");
  if (symmetric && rows.size() != cols.size()) throw DimensionError("kernel_tallies: symmetric needs a square block");
  KernelTallies k{rows.size(), cols.size(), symmetric, std::vector<overlap::ParityTally>(rows.size() * cols.size())};
  const std::uint64_t block = symmetric ? detail::kGramBlock : detail::kCrossBlock;
  parallel_for(rows.size(), o.jobs, [&](std::size_t i) {
    for (std::size_t j = symmetric ? i : 0; j < cols.size(); ++j) {
      const auto c = chip::coincidence_distribution(overlap::overlap_distribution(rows[i].x, cols[j].x, o.amps, o.noise));
      k.t[i * cols.size() + j] = overlap::sample_tally(overlap::odd_coincidence_probability(c), pool,
                                                       seed_mix(o.base_seed, block, i, j));
    }
  });
  return k;
}

/// Kernel from tallies, optionally resampling n events (with replacement) per entry.
inline KernelMatrix kernel_from_tallies(const KernelTallies& k, double R, std::uint64_t resample_n = 0,
                                        std::uint64_t seed = 0) {
  KernelMatrix out(k.rows, k.cols);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < k.rows; ++i) {
    for (std::size_t j = k.symmetric ? i : 0; j < k.cols; ++j) {
      overlap::ParityTally t = k.at(i, j);
      if (resample_n > 0) {
        if (t.n_total < resample_n) throw ParameterError("bootstrap: tally pool smaller than resample size");
        std::binomial_distribution<std::uint64_t> b(resample_n, static_cast<double>(t.n_odd) / static_cast<double>(t.n_total));
        t = overlap::ParityTally(resample_n, b(rng));
      }
      const double v = detail::clip01(overlap::coincidence_estimator(t, R).value);
      out(i, j) = v;
      if (k.symmetric) out(j, i) = v;
    }
  }
  return out;
}

inline void write_kernel_csv(std::ostream& os, const KernelMatrix& k) {
  char buf[32];
  for (std::size_t i = 0; i < k.rows(); ++i) {
    for (std::size_t j = 0; j < k.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", k(i, j));
      if (j) os << ',';
      os << buf;
    }
    os << '\n';
  }
}

inline KernelMatrix read_kernel_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    std::vector<double> r;
    double v;
    while (ls >> v) r.push_back(v);
    if (!ls.eof()) throw ConfigError("kernel csv: malformed row " + std::to_string(rows.size() + 1));
    if (!rows.empty() && r.size() != rows.front().size()) throw ConfigError("kernel csv: ragged rows");
    rows.push_back(std::move(r));
  }
  KernelMatrix k(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) k(i, j) = rows[i][j];
  return k;
}

}  // namespace qoverlap::kernel
