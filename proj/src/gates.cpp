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

#include "openqdyn/gates.hpp"

#include <cmath>

namespace openqdyn::gates {

using linalg::BipartiteDims;
using linalg::tensor;

namespace {

const ComplexMatrix kProj0 = ComplexMatrix::diagonal(std::vector<double>{1.0, 0.0});
const ComplexMatrix kProj1 = ComplexMatrix::diagonal(std::vector<double>{0.0, 1.0});
const ComplexMatrix kPauliX(2, 2, {0.0, 1.0, 1.0, 0.0});

}  // namespace

UnitaryGate identity(std::size_t d) {
  return UnitaryGate(ComplexMatrix::identity(d * d), BipartiteDims{d, d}, "identity");
}

UnitaryGate swap(std::size_t d) {
  ComplexMatrix u(d * d, d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) u(j * d + i, i * d + j) = 1.0;
  return UnitaryGate(u, BipartiteDims{d, d}, "swap");
}

UnitaryGate controlledOnS(const ComplexMatrix& v) {
  const ComplexMatrix u = tensor(kProj0, ComplexMatrix::identity(2)) + tensor(kProj1, v);
  return UnitaryGate(u, BipartiteDims{2, 2}, "controlled-on-S");
}

UnitaryGate controlledOnE(const ComplexMatrix& v) {
  const ComplexMatrix u = tensor(ComplexMatrix::identity(2), kProj0) + tensor(v, kProj1);
  return UnitaryGate(u, BipartiteDims{2, 2}, "controlled-on-E");
}

UnitaryGate cnot() {
  const UnitaryGate g = controlledOnS(kPauliX);
  return UnitaryGate(g.matrix(), g.dims(), "cnot");
}

UnitaryGate cnotReversed() {
  const UnitaryGate g = controlledOnE(kPauliX);
  return UnitaryGate(g.matrix(), g.dims(), "cnot-reversed");
}

UnitaryGate dcnot() {
  return UnitaryGate(cnot().matrix() * cnotReversed().matrix(), BipartiteDims{2, 2}, "dcnot");
}

UnitaryGate sqrtSwap() {
  const Complex p(0.5, 0.5);
  const Complex m(0.5, -0.5);
  ComplexMatrix u(4, 4, {1.0, 0.0, 0.0, 0.0,  //
                         0.0, p, m, 0.0,      //
                         0.0, m, p, 0.0,      //
                         0.0, 0.0, 0.0, 1.0});
  return UnitaryGate(u, BipartiteDims{2, 2}, "sqrt-swap");
}

UnitaryGate local(const ComplexMatrix& a, const ComplexMatrix& b) {
  return UnitaryGate(tensor(a, b), BipartiteDims{a.rows(), b.rows()}, "local");
}

UnitaryGate family(double theta, double gamma) {
  const double r = 1.0 / std::sqrt(2.0);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const Complex e = std::polar(1.0, gamma);
  ComplexMatrix u(4, 4, {r, 0.0, 0.0, r,        //
                         0.0, c, s, 0.0,        //
                         0.0, -e * s, e * c, 0.0,  //
                         r, 0.0, 0.0, -r});
  return UnitaryGate(u, BipartiteDims{2, 2}, "family");
}

UnitaryGate shift(std::size_t d) {
  if (d < 2) throw DomainError("shift: dimension must be at least 2");
  ComplexMatrix u(d * d, d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) u(((i + d - j) % d) * d + j, i * d + j) = 1.0;
  return UnitaryGate(u, BipartiteDims{d, d}, "shift");
}

const std::vector<std::string>& libraryNames() {
  static const std::vector<std::string> kNames = {"identity", "swap",   "cnot", "cnot-reversed", "dcnot",
                                                  "sqrt-swap", "family", "shift"};
  return kNames;
}

UnitaryGate byName(const std::string& name, double theta, double gamma, std::size_t d) {
  if (name == "identity") return identity(2);
  if (name == "swap") return swap(2);
  if (name == "cnot") return cnot();
  if (name == "cnot-reversed") return cnotReversed();
  if (name == "dcnot") return dcnot();
  if (name == "sqrt-swap") return sqrtSwap();
  if (name == "family") return family(theta, gamma);
  if (name == "shift") return shift(d);
  throw DomainError("unknown gate '" + name + "'");
}

}  // namespace openqdyn::gates
