// Copyright 2026 The qdlab Authors
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
#include <vector>

namespace qd {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Operand dimensions or lengths do not match.
class ShapeError : public Error {
   public:
    using Error::Error;
};

/// A result would exceed the configured `max_dim`.
class CapacityError : public Error {
   public:
    using Error::Error;
};

/// An operator does not have the declared or required kind (hermitian, unitary),
/// or a state/density matrix violates its defining invariants.
class KindError : public Error {
   public:
    using Error::Error;
};

class UnsupportedError : public Error {
   public:
    using Error::Error;
};

class DegenerateRequestError : public Error {
   public:
    using Error::Error;
};

/// A linear combination annihilated to (numerically) the zero vector.
class NullVectorError : public Error {
   public:
    using Error::Error;
};

/// Collects every problem found while validating an input document.
class ValidationError : public Error {
   public:
    explicit ValidationError(std::vector<std::string> problems);
    const std::vector<std::string> &problems() const { return problems_; }

   private:
    std::vector<std::string> problems_;
};

class IoError : public Error {
   public:
    using Error::Error;
};

}  // namespace qd
