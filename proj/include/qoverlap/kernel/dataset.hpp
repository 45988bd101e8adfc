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
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qoverlap/chip/qudit.hpp"

namespace qoverlap::kernel {

using chip::Phases3;
using chip::pi;

/// Encoded phases (canonical in [0, 2 pi)) and a +-1 label.
struct DataPoint {
  Phases3 x{};
  int y = 1;
};

enum class DatasetKind { Separate, Spherical, Overlapping };

inline DatasetKind dataset_kind_from_string(const std::string& s) {
  if (s == "separate") return DatasetKind::Separate;
  if (s == "spherical") return DatasetKind::Spherical;
  if (s == "overlapping") return DatasetKind::Overlapping;
  throw ConfigError("unknown dataset kind '" + s + "' (separate|spherical|overlapping)");
}

inline std::string to_string(DatasetKind k) {
  switch (k) {
    case DatasetKind::Separate: return "separate";
    case DatasetKind::Spherical: return "spherical";
    case DatasetKind::Overlapping: return "overlapping";
  }
  return "?";
}

/// Generator geometry. Defaults reproduce the three benchmark sets.
struct DatasetParams {
  double separate_sigma = 0.35;       ///< clusters at (pi/2)^3 and (3pi/2)^3
  double inner_radius = 0.5;          ///< spherical: label -1
  double shell_radius = 2.4;          ///< spherical: label +1
  double radial_jitter = 0.12;
  double overlap_sigma = 0.55;
  double overlap_offset = 1.1;        ///< per-coordinate distance between the two centres
};

/**
 * n points with n/2 per label, in random order.
 *
 *   separate     isotropic Gaussians around (pi/2)^3 (-1) and (3 pi/2)^3 (+1)
 *   spherical    around (pi)^3: radius inner (-1) or shell (+1) plus jitter,
 *                uniformly random direction
 *   overlapping  isotropic Gaussians around pi -+ offset/2 per coordinate
 */
inline std::vector<DataPoint> gen_dataset(DatasetKind kind, std::size_t n, std::uint64_t seed,
                                          const DatasetParams& p = {}) {
  if (n < 4 || n % 2 != 0) throw ParameterError("gen_dataset: n must be even and >= 4");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<DataPoint> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int y = i < n / 2 ? -1 : 1;
    DataPoint d;
    d.y = y;
    switch (kind) {
      case DatasetKind::Separate: {
        const double c = y < 0 ? pi / 2 : 3 * pi / 2;
        for (double& v : d.x) v = c + p.separate_sigma * g(rng);
        break;
      }
      case DatasetKind::Spherical: {
        std::array<double, 3> dir{};
        double nn = 0.0;
        do {
          nn = 0.0;
          for (double& v : dir) {
            v = g(rng);
            nn += v * v;
          }
        } while (nn == 0.0);
        const double r = (y < 0 ? p.inner_radius : p.shell_radius) + p.radial_jitter * g(rng);
        for (std::size_t k = 0; k < 3; ++k) d.x[k] = pi + r * dir[k] / std::sqrt(nn);
        break;
      }
      case DatasetKind::Overlapping: {
        const double c = pi + (y < 0 ? -0.5 : 0.5) * p.overlap_offset;
        for (double& v : d.x) v = c + p.overlap_sigma * g(rng);
        break;
      }
    }
    for (double& v : d.x) v = chip::wrap_2pi(v);
    out.push_back(d);
  }
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

/// Random split into the first n_train points and the rest.
inline std::pair<std::vector<DataPoint>, std::vector<DataPoint>> split_dataset(
    const std::vector<DataPoint>& data, std::size_t n_train, std::uint64_t seed) {
  if (n_train > data.size()) throw ParameterError("split_dataset: n_train exceeds dataset size");
  std::vector<std::size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  std::pair<std::vector<DataPoint>, std::vector<DataPoint>> out;
  for (std::size_t k = 0; k < idx.size(); ++k) (k < n_train ? out.first : out.second).push_back(data[idx[k]]);
  return out;
}

inline void write_dataset_csv(std::ostream& os, const std::vector<DataPoint>& data) {
  os << "theta1,theta2,theta3,label\n";
  char buf[160];
  for (const auto& d : data) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d\n", d.x[0], d.x[1], d.x[2], d.y);
    os << buf;
  }
}

inline std::vector<DataPoint> read_dataset_csv(std::istream& is) {
  std::vector<DataPoint> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "theta1,theta2,theta3,label") continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    DataPoint d;
    if (!(ls >> d.x[0] >> d.x[1] >> d.x[2] >> d.y) || (d.y != 1 && d.y != -1)) {
      throw ConfigError("dataset csv: malformed line " + std::to_string(lineno));
    }
    for (double& v : d.x) v = chip::wrap_2pi(v);
    out.push_back(d);
  }
  return out;
}

}  // namespace qoverlap::kernel
