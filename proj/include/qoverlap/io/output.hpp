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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "qoverlap/errors.hpp"

namespace qoverlap::io {

enum class Format { Csv, Json };

inline Format format_from_string(const std::string& s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw ConfigError("format must be csv or json, got '" + s + "'");
}

/// 64-bit FNV-1a over raw bytes.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

using Cell = std::variant<std::int64_t, double, std::string>;

/// Column-oriented result table written as CSV or as a JSON array of rows.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw DimensionError("Table: row width does not match header");
    rows.push_back(std::move(row));
  }

  std::string csv() const {
    std::string out;
    for (std::size_t c = 0; c < columns.size(); ++c) out += (c ? "," : "") + columns[c];
    out += '\n';
    for (const auto& r : rows) {
      for (std::size_t c = 0; c < r.size(); ++c) {
        if (c) out += ',';
        out += cell_text(r[c]);
      }
      out += '\n';
    }
    return out;
  }

  nlohmann::json json() const {
    auto arr = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::json o = nlohmann::json::object();
      for (std::size_t c = 0; c < r.size(); ++c) {
        std::visit([&](const auto& v) { o[columns[c]] = v; }, r[c]);
      }
      arr.push_back(o);
    }
    return arr;
  }

  static std::string cell_text(const Cell& c) {
    if (auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    if (auto* s = std::get_if<std::string>(&c)) return *s;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(c));
    return buf;
  }
};

/**
 * Output directory plus the list of files written to it. Data files never
 * contain timestamps, so identical inputs give byte-identical files; timing
 * lives only in the manifest.
 */
class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir_.string() + "': " + ec.message());
  }

  const std::filesystem::path& path() const noexcept { return dir_; }

  void write(const std::string& name, const std::string& content) {
    const auto p = dir_ / name;
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + p.string() + "'");
    out << content;
    if (!out) throw ConfigError("write failed for '" + p.string() + "'");
    files_.push_back({name, hex64(fnv1a64(content))});
  }

  void write_json(const std::string& name, const nlohmann::json& j) { write(name, j.dump(2) + "\n"); }

  /// Writes `stem.csv` or `stem.json` depending on the chosen format.
  void write_table(const std::string& stem, const Table& t, Format f) {
    if (f == Format::Csv) write(stem + ".csv", t.csv());
    else write_json(stem + ".json", t.json());
  }

  nlohmann::json file_list() const {
    auto arr = nlohmann::json::array();
    for (const auto& [name, digest] : files_) arr.push_back({{"path", name}, {"fnv1a64", digest}});
    return arr;
  }

 private:
  std::filesystem::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

}  // namespace qoverlap::io
