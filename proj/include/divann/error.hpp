// Copyright 2026 The Authors.
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

namespace divann {

enum class ErrorKind {
  kUsage,       // bad arguments or violated preconditions
  kFormat,      // malformed file contents
  kDegenerate,  // data the algorithm cannot handle (duplicate points)
  kInfeasible,  // no result set satisfies the constraint
  kIo,          // file system failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorKind::kUsage, what) {}
};

class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what)
      : Error(ErrorKind::kFormat, what) {}
};

class DegenerateDataError : public Error {
 public:
  explicit DegenerateDataError(const std::string& what)
      : Error(ErrorKind::kDegenerate, what) {}
};

class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& what)
      : Error(ErrorKind::kInfeasible, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::kIo, what) {}
};

}  // namespace divann
