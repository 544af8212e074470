/* Copyright 2026 The panotrack Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef PANOTRACK_ERRORS_HPP_
#define PANOTRACK_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace panotrack {

// Root of every error thrown by the library. The CLI maps each leaf type to
// a distinct exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed geometric input (non-positive box extents, bad measurements).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// Bad or inconsistent configuration (tracker tables, scenario files, flags).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Numerical failure inside the Kalman filter.
class FilterError : public Error {
 public:
  using Error::Error;
};

// File-system failures: missing files, unreadable directories.
class IoError : public Error {
 public:
  using Error::Error;
};

// On-disk data that does not match the expected binary layout.
class FormatError : public IoError {
 public:
  using IoError::IoError;
};

// Inputs to the evaluator that cannot be compared.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

}  // namespace panotrack

#endif  // PANOTRACK_ERRORS_HPP_
