// Copyright 2026 The tzplc Authors
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

#ifndef TZPLC_COMMON_ERROR_H_
#define TZPLC_COMMON_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace tzplc {

// Root of every error thrown by the library. `name()` is the stable error
// identifier (e.g. "VersionRollback") surfaced by the CLI and in reports.
class Error : public std::runtime_error {
 public:
  Error(std::string_view module, std::string_view name, const std::string& what)
      : std::runtime_error(std::string(name) + ": " + what),
        module_(module),
        name_(name) {}

  std::string_view module() const noexcept { return module_; }
  std::string_view name() const noexcept { return name_; }

 private:
  std::string_view module_;
  std::string_view name_;
};

// Per-module error carrying a typed code. Each module provides an enum and
// a `to_string(Code)` overload returning a string literal.
template <typename Code>
class CodedError : public Error {
 public:
  CodedError(Code code, const std::string& what)
      : Error(module_name(Code{}), to_string(code), what), code_(code) {}

  Code code() const noexcept { return code_; }

 private:
  Code code_;
};

}  // namespace tzplc

#endif  // TZPLC_COMMON_ERROR_H_
