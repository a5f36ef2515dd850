// Copyright 2026 The mpscert Authors
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

namespace mpscert {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition (shape, canonical form, alignment).
class ContractViolation : public Error {
  public:
    using Error::Error;
};

/// A factorization failed to converge.
class NumericFailure : public Error {
  public:
    using Error::Error;
};

/// The input carries no usable information (zero state, no positive eigenvalues).
class DegenerateInput : public Error {
  public:
    using Error::Error;
};

/// Incompatible or out-of-range user parameters.
class ConfigurationError : public Error {
  public:
    using Error::Error;
};

/// A brute-force computation would exceed the configured size cap.
class OracleCapExceeded : public Error {
  public:
    using Error::Error;
};

/// A numerical classification (kernel rank, unit eigenvalue, rank cut) falls
/// inside its ambiguity band. `kind()` names which classification failed.
class IllConditioned : public Error {
  public:
    IllConditioned(std::string kind, int bond, const std::string &what)
        : Error(what), kind_(std::move(kind)), bond_(bond) {
    }
    const std::string &kind() const noexcept {
        return kind_;
    }
    int bond() const noexcept {
        return bond_;
    }

  private:
    std::string kind_;
    int bond_;
};

/// A spectrum with no eigenvalue above the ground level.
class DegenerateSpectrum : public Error {
  public:
    using Error::Error;
};

/// File could not be read, written, or parsed.
class IoError : public Error {
  public:
    using Error::Error;
};

}  // namespace mpscert
