// Copyright 2026 The dropscan Authors
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

namespace dropscan {

/// Invalid input: bad shapes, illegal keys, malformed files or configs.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A computed quantity broke a numerical invariant (unitarity, trace, ...).
class InvariantViolation : public Error {
  public:
    using Error::Error;
};

}  // namespace dropscan
