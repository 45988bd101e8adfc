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

#include <compare>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qoverlap/optics/mzi.hpp"

namespace qoverlap::optics {

/// Rectangular Bell-scheme mesh on 10 modes with 10 MZI columns.
inline constexpr int kMeshModes = 10;
inline constexpr int kMeshColumns = 10;

/**
 * Grid position (row, column). For an MZI the row is its upper mode; the MZI
 * then couples modes row and row + 1. MZIs sit where row + column is even and
 * row <= 8, which gives 5 MZIs on even columns and 4 on odd ones.
 */
struct MziAddress {
  int row = 0;
  int col = 0;

  auto operator<=>(const MziAddress&) const = default;

  bool is_mzi() const noexcept {
    return row >= 0 && row < kMeshModes - 1 && col >= 0 && col < kMeshColumns &&
           (row + col) % 2 == 0;
  }

  std::string to_string() const {
    return "(" + std::to_string(row) + "," + std::to_string(col) + ")";
  }
};

/// The 45 MZI addresses, column-major.
inline std::vector<MziAddress> all_mzi_addresses() {
  std::vector<MziAddress> out;
  for (int c = 0; c < kMeshColumns; ++c)
    for (int r = c % 2; r < kMeshModes - 1; r += 2) out.push_back({r, c});
  return out;
}

using MeshSettings = std::map<MziAddress, MziPhases>;

/// Per-MZI coupler errors: alpha on the input DC, beta on the output DC.
struct DcError {
  double alpha = 0.0;
  double beta = 0.0;
};
using DcErrorMap = std::map<MziAddress, DcError>;

namespace detail {
// rows (r, r+1) of u <- T * rows
inline void apply_block(ComplexMatrix& u, int r, const Mat2& t) {
  auto up = u.row(static_cast<std::size_t>(r));
  auto lo = u.row(static_cast<std::size_t>(r) + 1);
  for (std::size_t k = 0; k < up.size(); ++k) {
    const cplx a = up[k];
    const cplx b = lo[k];
    up[k] = t.a * a + t.b * b;
    lo[k] = t.c * a + t.d * b;
  }
}
}  // namespace detail

/**
 * Transfer matrix of columns [first_col, last_col] of the mesh.
 *
 * Columns are applied in propagation order, so the result is
 * C_last ... C_first. Every MZI in the range must appear in settings.
 * MZIs missing from dc_errors are treated as ideal.
 */
inline UnitaryMatrix compose_columns(const MeshSettings& settings, const DcErrorMap& dc_errors,
                                     int first_col, int last_col) {
  ComplexMatrix u = ComplexMatrix::identity(kMeshModes);
  for (int c = first_col; c <= last_col; ++c) {
    for (int r = c % 2; r < kMeshModes - 1; r += 2) {
      const MziAddress addr{r, c};
      const auto it = settings.find(addr);
      if (it == settings.end()) {
        throw ConfigError("compose_mesh: missing MZI address " + addr.to_string());
      }
      DcError err;
      if (auto e = dc_errors.find(addr); e != dc_errors.end()) err = e->second;
      detail::apply_block(
          u, r, detail::mzi2(it->second.upper(), it->second.lower(), err.alpha, err.beta));
    }
  }
  return UnitaryMatrix(std::move(u));
}

/// Full 10x10 chip unitary. External phaseshifters are left out: detection
/// is phase-insensitive and inputs are Fock states.
inline UnitaryMatrix compose_mesh(const MeshSettings& settings, const DcErrorMap& dc_errors = {}) {
  return compose_columns(settings, dc_errors, 0, kMeshColumns - 1);
}

/// Every MZI set to the same phases.
inline MeshSettings uniform_settings(MziPhases phases) {
  MeshSettings s;
  for (const auto& a : all_mzi_addresses()) s[a] = phases;
  return s;
}

/// Text table, one `i,j,sigma,delta` line per MZI after a header line.
inline void write_settings(std::ostream& os, const MeshSettings& settings) {
  os << "i,j,sigma,delta\n";
  char buf[128];
  for (const auto& [addr, ph] : settings) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g\n", addr.row, addr.col, ph.sigma,
                  ph.delta);
    os << buf;
  }
}

inline MeshSettings read_settings(std::istream& is) {
  MeshSettings out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "i,j,sigma,delta") continue;
    MziAddress a;
    MziPhases p;
    char c1 = 0, c2 = 0, c3 = 0;
    std::istringstream ls(line);
    if (!(ls >> a.row >> c1 >> a.col >> c2 >> p.sigma >> c3 >> p.delta) || c1 != ',' ||
        c2 != ',' || c3 != ',') {
      throw ConfigError("read_settings: malformed line " + std::to_string(lineno));
    }
    if (!a.is_mzi()) {
      throw ConfigError("read_settings: " + a.to_string() + " is not an MZI address");
    }
    out[a] = p;
  }
  return out;
}

}  // namespace qoverlap::optics
