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

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qoverlap/errors.hpp"

namespace qoverlap::io {

using nlohmann::json;

/**
 * Read-tracking view of a JSON config object. Every key a command reads is
 * recorded; finish() rejects anything left over so typos fail loudly. Lookups
 * with defaults write the default back into resolved(), which is what the run
 * manifest echoes.
 */
class Config {
 public:
  explicit Config(json j = json::object(), std::string path = "") : j_(std::move(j)), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where("") + "expected an object");
    resolved_ = json::object();
  }

  static Config from_file(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open config file '" + file + "'");
    try {
      return Config(json::parse(in, nullptr, true, true));
    } catch (const json::parse_error& e) {
      throw ConfigError("config '" + file + "': " + e.what());
    }
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <class T>
  T get(const std::string& key, const T& fallback) {
    used_.insert(key);
    if (!j_.contains(key) || j_.at(key).is_null()) {
      resolved_[key] = fallback;
      return fallback;
    }
    return convert<T>(key);
  }

  template <class T>
  T require(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) throw ConfigError(where(key) + "required key is missing");
    return convert<T>(key);
  }

  /// Raw sub-tree (marked used); nullptr json when absent.
  json raw(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) return nullptr;
    resolved_[key] = j_.at(key);
    return j_.at(key);
  }

  /// Nested section; its keys are checked when the child is finished.
  Config section(const std::string& key) {
    used_.insert(key);
    json sub = j_.contains(key) ? j_.at(key) : json::object();
    if (!sub.is_object()) throw ConfigError(where(key) + "expected an object");
    return Config(sub, path_.empty() ? key : path_ + "." + key);
  }
  void adopt(const std::string& key, const Config& child) { resolved_[key] = child.resolved_; }

  void finish() const {
    for (const auto& [k, _] : j_.items())
      if (!used_.count(k)) throw ConfigError(where(k) + "unknown key");
  }

  const json& resolved() const noexcept { return resolved_; }

 private:
  std::string where(const std::string& key) const {
    std::string p = path_;
    if (!key.empty()) p = p.empty() ? key : p + "." + key;
    return "config" + (p.empty() ? std::string() : " '" + p + "'") + ": ";
  }

  template <class T>
  T convert(const std::string& key) {
    try {
      T v = j_.at(key).get<T>();
      resolved_[key] = j_.at(key);
      return v;
    } catch (const json::exception& e) {
      throw ConfigError(where(key) + "wrong type (" + e.what() + ")");
    }
  }

  json j_;
  std::string path_;
  std::set<std::string> used_;
  json resolved_;
};

}  // namespace qoverlap::io
