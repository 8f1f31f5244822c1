// Copyright 2026 The qcontract Authors
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

namespace qcontract {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class BasisError : public Error {
 public:
  using Error::Error;
};

class ExpansionError : public Error {
 public:
  ExpansionError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class SpecError : public Error {
 public:
  using Error::Error;
};

/// Raised when a propagator inverse would amplify roundoff beyond cond_max.
class IllConditionedError : public Error {
 public:
  IllConditionedError(const std::string& what, double estimate, double time)
      : Error(what), estimate_(estimate), time_(time) {}
  double estimate() const noexcept { return estimate_; }
  double time() const noexcept { return time_; }

 private:
  double estimate_;
  double time_;
};

/// A deformed commutator of two basis elements left the span of the basis.
class ClosureError : public Error {
 public:
  ClosureError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace qcontract
