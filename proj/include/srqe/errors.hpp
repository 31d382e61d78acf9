// Copyright 2026 The SRQE Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SRQE_ERRORS_HPP_
#define SRQE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace srqe {

// Every failure raised by the library derives from Error. The kind maps onto
// the CLI exit codes (see exit_code()).
enum class ErrorKind {
  kDecode,          // unreadable or corrupt file
  kInvalidInput,    // caller passed data violating a precondition
  kConfiguration,   // incompatible shapes / settings
  kDegenerateInput, // data carries no usable signal
  kFitting,         // a statistical fit cannot be carried out
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class DecodeError : public Error {
 public:
  explicit DecodeError(const std::string& what) : Error(ErrorKind::kDecode, what) {}
};

class InvalidInputError : public Error {
 public:
  explicit InvalidInputError(const std::string& what)
      : Error(ErrorKind::kInvalidInput, what) {}
};

class ConfigurationError : public Error {
 public:
  explicit ConfigurationError(const std::string& what)
      : Error(ErrorKind::kConfiguration, what) {}
};

class DegenerateInputError : public Error {
 public:
  explicit DegenerateInputError(const std::string& what)
      : Error(ErrorKind::kDegenerateInput, what) {}
};

class FittingError : public Error {
 public:
  explicit FittingError(const std::string& what) : Error(ErrorKind::kFitting, what) {}
};

// 0 success, 2 input error, 3 degenerate data, 4 configuration incompatibility.
inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDegenerateInput:
      return 3;
    case ErrorKind::kConfiguration:
      return 4;
    case ErrorKind::kDecode:
    case ErrorKind::kInvalidInput:
    case ErrorKind::kFitting:
      return 2;
  }
  return 2;
}

}  // namespace srqe

#endif  // SRQE_ERRORS_HPP_
