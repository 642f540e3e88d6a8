// Copyright 2026 The kingcode Authors
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

namespace kingcode {

/// Base class for every exception thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: wrong dimensions, out-of-range indices, violated
/// preconditions on user-supplied data.
class InvalidInput : public Error {
  public:
    using Error::Error;
};

/// A mathematical check failed on well-formed input (e.g. a code that does
/// not satisfy the Knill-Laflamme conditions).
class VerificationFailure : public Error {
  public:
    using Error::Error;
};

/// A measurement operator could not be expanded over the error operators with
/// pairwise disjoint index sets.
class DecompositionError : public VerificationFailure {
  public:
    DecompositionError(int family, int outcome, double residual,
                       const std::string &what)
        : VerificationFailure(what), family_(family), outcome_(outcome),
          residual_(residual) {}

    [[nodiscard]] int family() const noexcept { return family_; }
    [[nodiscard]] int outcome() const noexcept { return outcome_; }
    [[nodiscard]] double residual() const noexcept { return residual_; }

  private:
    int family_;
    int outcome_;
    double residual_;
};

} // namespace kingcode
