// Copyright 2026 The qconformal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QCONFORMAL_ERRORS_H_
#define QCONFORMAL_ERRORS_H_

#include <stdexcept>
#include <string>

namespace qconformal {

// Base for every error thrown by the library. Callers that only need a
// diagnostic can catch this; the subclasses name the failing contract.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid generator / pipeline configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A gate refers to a qubit outside {0, 1}, or its operands are inconsistent.
class OperandError : public Error {
 public:
  using Error::Error;
};

// Feature vectors with different schemas were mixed.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Persisted data failed validation (version, checksum, shape, invariants).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Shape mismatch, empty input, or an argument outside its domain.
class InputError : public Error {
 public:
  using Error::Error;
};

// Too few samples for the requested operation.
class SizeError : public Error {
 public:
  using Error::Error;
};

}  // namespace qconformal

#endif  // QCONFORMAL_ERRORS_H_
