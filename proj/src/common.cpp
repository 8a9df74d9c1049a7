// Copyright 2026 The openqdyn Authors
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

#include <cmath>
#include <cstdlib>
#include <string>

#include "openqdyn/common.hpp"

namespace openqdyn {

Tolerances Tolerances::fromEnvironment() {
  Tolerances t;
  if (const char* raw = std::getenv("OPENQDYN_TOL"); raw != nullptr && *raw != '\0') {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(raw, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != std::string(raw).size() || !std::isfinite(value) || value <= 0.0) {
      throw DomainError(std::string("OPENQDYN_TOL: expected a positive number, got '") + raw + "'");
    }
    t.modular = value;
  }
  return t;
}

}  // namespace openqdyn
