// Copyright 2026 The qcert Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace qcert {

/// Bad shapes, indices or parameter values.
struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Total Hilbert-space dimension above the configured cap.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A quantity that should be real or Hermitian is not, within tolerance.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Measured or generated data violates its own invariants.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input is well formed but the operation cannot be carried out on it
/// (e.g. an ensemble that is not tomographically complete).
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed file contents. `field` is a JSON-pointer-like path.
struct SchemaError : std::runtime_error {
    SchemaError(const std::string &field, const std::string &msg)
        : std::runtime_error(field.empty() ? msg : field + ": " + msg), field(field) {}
    std::string field;
};

}  // namespace qcert
