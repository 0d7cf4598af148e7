// Copyright 2026 The bapcac Authors
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

namespace bapcac {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: unparsable text, out-of-range fields, bad shapes.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A schedule or coverage plan does not fit the instance it is checked against.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// The request has no feasible answer (e.g. coverage exceeding demand).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// The request was declined up front, e.g. an enumeration over the size cap
/// or a generator spec that yields no demand at all.
class RefusedError : public Error {
 public:
  using Error::Error;
};

}  // namespace bapcac
