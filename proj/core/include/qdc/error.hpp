// Copyright 2026 The qdc Authors
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

#ifndef QDC_ERROR_HPP
#define QDC_ERROR_HPP

#include <optional>
#include <stdexcept>
#include <string>

namespace qdc {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree (state vs operator, schedule vs grid, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A precondition on an argument value does not hold.
class ValueError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure broke down (NaN trace, ill-conditioned solve, ...).
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what, std::optional<int> iteration = std::nullopt)
      : Error(what), iteration_(iteration) {}

  /// Importance-sampling iteration at which the failure was detected, if any.
  [[nodiscard]] std::optional<int> iteration() const noexcept { return iteration_; }

 private:
  std::optional<int> iteration_;
};

}  // namespace qdc

#endif
