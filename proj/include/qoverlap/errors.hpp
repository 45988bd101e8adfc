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

#include <stdexcept>
#include <string>

namespace qoverlap {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched matrix shapes, mode counts or bases.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A requested enumeration or truncation exceeds the configured size cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside its documented domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Invalid chip or experiment configuration (missing MZI address, unknown key).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver or fit failed to converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace qoverlap
