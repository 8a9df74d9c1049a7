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

#ifndef OPENQDYN_COMMON_HPP_
#define OPENQDYN_COMMON_HPP_

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace openqdyn {

using Complex = std::complex<double>;

inline constexpr const char* kVersion = "0.1.0";
inline constexpr double kPi = std::numbers::pi;

/// Raised when operand shapes or subsystem dimensions do not fit together.
class DimensionError : public std::invalid_argument {
 public:
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when an input violates a documented precondition (non-Hermitian,
/// not a density matrix, non-unitary, rank requirements, ...).
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Shared numerical tolerances. Every value can be overridden per call; the
/// defaults are the documented contract.
struct Tolerances {
  double hermitian = 1e-9;   // max-entry deviation accepted before symmetrizing
  double state = 1e-9;       // PSD / trace slack for density matrices
  double rank = 1e-7;        // eigenvalues above this count toward the rank
  double unitary = 1e-9;     // max-entry deviation of U^dagger U from I
  double modular = 1e-7;     // lattice distance used by the classifier
  double feasibility = 1e-7; // trace-norm residual that counts as FEASIBLE
  double certificate = 1e-6; // minimum dual margin for INFEASIBLE
  double statistical = 1e-9; // slack for noiseless correlation certification

  /// Defaults with OPENQDYN_TOL applied to the modular tolerance when set.
  static Tolerances fromEnvironment();
};

}  // namespace openqdyn

#endif  // OPENQDYN_COMMON_HPP_
