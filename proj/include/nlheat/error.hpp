/*
 Copyright 2026 The nlheat Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace nlheat {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A kernel factor produced a non-finite sample.
class InvalidKernel : public Error {
 public:
  using Error::Error;
};

/// The control region contains no interior grid node.
class EmptyControlRegion : public Error {
 public:
  using Error::Error;
};

/// Zero pivot in the tridiagonal factor or a vanishing Sherman-Morrison
/// denominator.
class SingularOperator : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration. `key()` names the offending entry.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what)
      : Error("config error at '" + key + "': " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// Malformed or dimension-incompatible data file.
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace nlheat
