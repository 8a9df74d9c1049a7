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

// JSON encodings. Matrices are {"re": [[...]], "im": [[...]]}, states add
// "dims". Doubles are written in shortest round-trip form, so parsing a dump
// gives back the identical bits.

#ifndef OPENQDYN_JSON_IO_HPP_
#define OPENQDYN_JSON_IO_HPP_

#include <string>

#include <json.hpp>

#include "openqdyn/common.hpp"
#include "openqdyn/feasibility.hpp"
#include "openqdyn/genmodel.hpp"
#include "openqdyn/magic.hpp"
#include "openqdyn/witness.hpp"

namespace openqdyn::io {

using json = nlohmann::ordered_json;

/// Thrown for malformed documents; `where` is a JSON-pointer-like location.
class SchemaError : public std::invalid_argument {
 public:
  SchemaError(const std::string& where, const std::string& what)
      : std::invalid_argument(where + ": " + what), where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

json toJson(const linalg::ComplexMatrix& m);
linalg::ComplexMatrix matrixFromJson(const json& j, const std::string& where = "");

json toJson(const states::DensityMatrix& rho);
states::DensityMatrix stateFromJson(const json& j, const std::string& where = "");

json toJson(const states::UnitaryGate& u);
states::UnitaryGate gateFromJson(const json& j, const std::string& where = "");

json toJson(const Tolerances& t);
json toJson(const magic::WeylCoordinates& w);
json toJson(const magic::KrausCiracForm& f);
json toJson(const magic::Classification& c);
json toJson(const genmodel::FeasibilityResult& r);
json toJson(const genmodel::SolverOptions& o);
json toJson(const genmodel::Lemma1Report& r);
json toJson(const genmodel::DiagonalWindow& w);
json toJson(const genmodel::PurityBound& b);
json toJson(const genmodel::FamilySolution& s);
json toJson(const genmodel::RobustnessReport& r);
json toJson(const witness::ShiftWitness& w);
json toJson(const witness::CertifyResult& c);
json toJson(const witness::ProtocolTranscript& t);

/// Applies {"key": value} overrides; unknown keys raise SchemaError.
void applySolverOverrides(const json& j, genmodel::SolverOptions& opt, const std::string& where = "");

/// {"unitary", "rhoS", "rhoSPrime", "class"}.
json toJson(const genmodel::GenerationProblem& p);
genmodel::GenerationProblem problemFromJson(const json& j, const std::string& where = "");

/// Rejects keys outside `allowed`.
void requireKeys(const json& j, std::initializer_list<const char*> allowed, const std::string& where);

}  // namespace openqdyn::io

#endif  // OPENQDYN_JSON_IO_HPP_
