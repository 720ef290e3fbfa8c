// Copyright 2026 The qca-async Authors
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

namespace qca {

/// Invalid user-supplied parameter (probability out of range, bad enum text, empty grid).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested system size exceeds a mode's memory cap.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A state invariant (trace, positivity, range) was violated beyond tolerance.
/// The maps involved are exactly CPTP, so this always indicates a bug.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qca
