// Copyright 2026 The Arena Audit Authors.
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

#ifndef ARENA_AUDIT_CORE_ERRORS_HPP_
#define ARENA_AUDIT_CORE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace arena {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid inputs: malformed files, broken invariants, bad configuration.
// The CLI maps these to exit code 1.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

// Parse failure in an input file, carrying the offending location.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& path, int line, const std::string& what)
      : ValidationError(path + ":" + std::to_string(line) + ": " + what),
        path_(path),
        line_(line) {}

  const std::string& path() const { return path_; }
  int line() const { return line_; }

 private:
  std::string path_;
  int line_;
};

// Numeric or runtime failure (e.g. optimizer non-convergence).
// The CLI maps these to exit code 2.
class ComputeError : public Error {
 public:
  explicit ComputeError(const std::string& what) : Error(what) {}
};

}  // namespace arena

#endif  // ARENA_AUDIT_CORE_ERRORS_HPP_
