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

// Named system-environment unitaries. S is always the left factor.

#ifndef OPENQDYN_GATES_HPP_
#define OPENQDYN_GATES_HPP_

#include <string>
#include <vector>

#include "openqdyn/states.hpp"

namespace openqdyn::gates {

using linalg::ComplexMatrix;
using states::UnitaryGate;

UnitaryGate identity(std::size_t d = 2);
/// Exchange of S and E, each of dimension d.
UnitaryGate swap(std::size_t d = 2);
/// |0><0| (x) I + |1><1| (x) X: S controls E.
UnitaryGate cnot();
/// I (x) |0><0| + X (x) |1><1|: E controls S.
UnitaryGate cnotReversed();
/// cnot() * cnotReversed().
UnitaryGate dcnot();
UnitaryGate sqrtSwap();
/// |0><0| (x) I + |1><1| (x) v.
UnitaryGate controlledOnS(const ComplexMatrix& v);
/// I (x) |0><0| + v (x) |1><1|.
UnitaryGate controlledOnE(const ComplexMatrix& v);
UnitaryGate local(const ComplexMatrix& a, const ComplexMatrix& b);

/// The two-parameter family
///   [[1/r2, 0, 0, 1/r2], [0, c, s, 0], [0, -e^{ig} s, e^{ig} c, 0], [1/r2, 0, 0, -1/r2]].
UnitaryGate family(double theta, double gamma);

/// Controlled shift |i>|j> -> |(i - j) mod d>|j> in the computational basis.
UnitaryGate shift(std::size_t d);

/// Gate names accepted by byName.
const std::vector<std::string>& libraryNames();

/// Resolves identity, swap, cnot, dcnot, sqrt-swap, family (uses theta and
/// gamma) and shift (uses d). Throws DomainError for unknown names.
UnitaryGate byName(const std::string& name, double theta = 0.0, double gamma = 0.0,
                   std::size_t d = 2);

}  // namespace openqdyn::gates

#endif  // OPENQDYN_GATES_HPP_
