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

#include "openqdyn/json_io.hpp"

#include <cmath>

#include "openqdyn/gates.hpp"

namespace openqdyn::io {

using linalg::ComplexMatrix;

namespace {

json realGrid(const ComplexMatrix& m, bool imag) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(imag ? m(i, j).imag() : m(i, j).real());
    rows.push_back(std::move(row));
  }
  return rows;
}

json complexJson(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw SchemaError(where, "expected a number");
  return j.get<double>();
}

std::vector<std::size_t> dimsFromJson(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty() || j.size() > 2) throw SchemaError(where, "dims must be a list of 1 or 2 sizes");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_unsigned() || j[i].get<std::size_t>() == 0) {
      throw SchemaError(where + "/" + std::to_string(i), "expected a positive integer");
    }
    out.push_back(j[i].get<std::size_t>());
  }
  return out;
}

json vectorJson(const ComplexMatrix& v) {
  json out = json::array();
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(complexJson(v[i]));
  return out;
}

}  // namespace

void requireKeys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where, "expected an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw SchemaError(where + "/" + key, "unknown field");
  }
}

json toJson(const ComplexMatrix& m) { return json{{"re", realGrid(m, false)}, {"im", realGrid(m, true)}}; }

ComplexMatrix matrixFromJson(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("re")) throw SchemaError(where, "matrix needs \"re\" (and optionally \"im\")");
  const json& re = j.at("re");
  if (!re.is_array() || re.empty() || !re[0].is_array()) throw SchemaError(where + "/re", "expected a 2-D array");
  const std::size_t rows = re.size();
  const std::size_t cols = re[0].size();
  const bool hasIm = j.contains("im");
  if (hasIm && (!j.at("im").is_array() || j.at("im").size() != rows)) {
    throw SchemaError(where + "/im", "shape differs from re");
  }
  std::vector<Complex> entries;
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string rw = where + "/re/" + std::to_string(i);
    if (!re[i].is_array() || re[i].size() != cols) throw SchemaError(rw, "ragged row");
    const json* im = hasIm ? &j.at("im")[i] : nullptr;
    if (im && (!im->is_array() || im->size() != cols)) {
      throw SchemaError(where + "/im/" + std::to_string(i), "ragged row");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      const double r = number(re[i][c], rw + "/" + std::to_string(c));
      const double m = im ? number((*im)[c], where + "/im/" + std::to_string(i) + "/" + std::to_string(c)) : 0.0;
      entries.emplace_back(r, m);
    }
  }
  try {
    return ComplexMatrix(rows, cols, std::move(entries));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(where, e.what());
  }
}

json toJson(const states::DensityMatrix& rho) {
  json j = {{"dims", rho.dims()}};
  j["re"] = realGrid(rho.matrix(), false);
  j["im"] = realGrid(rho.matrix(), true);
  return j;
}

states::DensityMatrix stateFromJson(const json& j, const std::string& where) {
  requireKeys(j, {"dims", "re", "im"}, where);
  const ComplexMatrix m = matrixFromJson(j, where);
  std::vector<std::size_t> dims = j.contains("dims") ? dimsFromJson(j.at("dims"), where + "/dims")
                                                     : std::vector<std::size_t>{m.rows()};
  try {
    return states::DensityMatrix(m, dims);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(where, e.what());
  }
}

json toJson(const states::UnitaryGate& u) {
  json j = {{"name", u.name()}, {"dims", {u.dims().dS, u.dims().dE}}};
  j["re"] = realGrid(u.matrix(), false);
  j["im"] = realGrid(u.matrix(), true);
  return j;
}

states::UnitaryGate gateFromJson(const json& j, const std::string& where) {
  try {
    if (j.is_string()) return gates::byName(j.get<std::string>(), 0.0, 0.0, 2);
    if (!j.is_object()) throw SchemaError(where, "gate must be a name or an object");
    if (j.contains("re")) {
      requireKeys(j, {"name", "dims", "re", "im"}, where);
      const ComplexMatrix m = matrixFromJson(j, where);
      std::vector<std::size_t> dims = j.contains("dims") ? dimsFromJson(j.at("dims"), where + "/dims")
                                                         : std::vector<std::size_t>{};
      if (dims.empty()) {
        const auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(m.rows()))));
        dims = {d, d};
      }
      if (dims.size() != 2) throw SchemaError(where + "/dims", "a gate needs two subsystem dims");
      const std::string name = j.value("name", std::string("custom"));
      return states::UnitaryGate(m, {dims[0], dims[1]}, name);
    }
    requireKeys(j, {"name", "theta", "gamma", "d"}, where);
    if (!j.contains("name") || !j.at("name").is_string()) throw SchemaError(where + "/name", "expected a gate name");
    const double theta = j.contains("theta") ? number(j.at("theta"), where + "/theta") : 0.0;
    const double gamma = j.contains("gamma") ? number(j.at("gamma"), where + "/gamma") : 0.0;
    const std::size_t d = j.contains("d") ? j.at("d").get<std::size_t>() : 2;
    return gates::byName(j.at("name").get<std::string>(), theta, gamma, d);
  } catch (const SchemaError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw SchemaError(where, e.what());
  } catch (const json::exception& e) {
    throw SchemaError(where, e.what());
  }
}

json toJson(const Tolerances& t) {
  return json{{"hermitian", t.hermitian},     {"state", t.state},       {"rank", t.rank},
              {"unitary", t.unitary},         {"modular", t.modular},   {"feasibility", t.feasibility},
              {"certificate", t.certificate}, {"statistical", t.statistical}};
}

json toJson(const magic::WeylCoordinates& w) { return json{{"a", w.a}, {"b", w.b}, {"c", w.c}}; }

json toJson(const magic::KrausCiracForm& f) {
  // Raw phases as found and the representative with lambda_1 shifted to 0.
  json normalized = json::array();
  for (double l : f.phases) normalized.push_back(std::fmod(l - f.phases[0] + 4.0 * kPi, 2.0 * kPi));
  return json{{"phases", f.phases},
              {"normalizedPhases", normalized},
              {"weyl", toJson(f.weyl)},
              {"globalPhase", complexJson(f.globalPhase)},
              {"leftS", toJson(f.leftS)},
              {"leftE", toJson(f.leftE)},
              {"rightS", toJson(f.rightS)},
              {"rightE", toJson(f.rightE)},
              {"reconstructionError", f.reconstructionError},
              {"attempts", f.attempts}};
}

json toJson(const magic::Classification& c) {
  return json{{"class", magic::toString(c.label)},
              {"phases", c.form.phases},
              {"weyl", toJson(c.form.weyl)},
              {"phaseDifferences", c.phaseDifferences},
              {"latticeDistance", c.latticeDistance},
              {"onPiLattice", c.onPiLattice},
              {"piOffsets", c.piOffsets},
              {"productOutputConcurrence", c.productOutputConcurrence},
              {"environmentSteersSystem", c.environmentSteersSystem},
              {"evidenceConsistent", c.evidenceConsistent},
              {"tolerance", c.tolerance},
              {"test", c.test},
              {"decomposition", toJson(c.form)}};
}

json toJson(const genmodel::FeasibilityResult& r) {
  json j = {{"status", genmodel::toString(r.status)},
            {"residual", r.residual},
            {"halfNormResidual", 0.5 * r.residual},
            {"iterations", r.iterations},
            {"minObjective", r.minObjective},
            {"faceDimension", r.faceDimension},
            {"note", r.note}};
  j["witness"] = r.witness ? toJson(*r.witness) : json(nullptr);
  if (r.certificate) {
    j["certificate"] = json{{"kind", r.certificate->kind},
                            {"margin", r.certificate->margin},
                            {"lowerBound", r.certificate->lowerBound},
                            {"objective", r.certificate->objective},
                            {"y", r.certificate->y}};
  } else {
    j["certificate"] = nullptr;
  }
  j["environmentBasis"] = r.environmentBasis ? toJson(*r.environmentBasis) : json(nullptr);
  j["environmentState"] = r.environmentState ? toJson(*r.environmentState) : json(nullptr);
  return j;
}

json toJson(const genmodel::SolverOptions& o) {
  return json{{"maxIterations", o.maxIterations},
              {"checkEvery", o.checkEvery},
              {"polishAfter", o.polishAfter},
              {"feasibilityTolerance", o.feasibilityTolerance},
              {"certificateMargin", o.certificateMargin},
              {"supportTolerance", o.supportTolerance},
              {"certificateIterations", o.certificateIterations},
              {"productGrid", o.productGrid},
              {"productStarts", o.productStarts},
              {"productThreshold", o.productThreshold},
              {"qcThetaSteps", o.qcThetaSteps},
              {"qcPhiSteps", o.qcPhiSteps},
              {"qcScreenIterations", o.qcScreenIterations},
              {"qcCandidates", o.qcCandidates},
              {"qcGapThreshold", o.qcGapThreshold}};
}

void applySolverOverrides(const json& j, genmodel::SolverOptions& o, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where, "solver overrides must be an object");
  for (const auto& [key, value] : j.items()) {
    const std::string w = where + "/" + key;
    auto integer = [&](int& field) {
      if (!value.is_number_integer() || value.get<long long>() < 1) throw SchemaError(w, "expected a positive integer");
      field = value.get<int>();
    };
    auto real = [&](double& field) {
      if (!value.is_number() || !(value.get<double>() > 0.0)) throw SchemaError(w, "expected a positive number");
      field = value.get<double>();
    };
    if (key == "maxIterations") integer(o.maxIterations);
    else if (key == "checkEvery") integer(o.checkEvery);
    else if (key == "polishAfter") integer(o.polishAfter);
    else if (key == "feasibilityTolerance") real(o.feasibilityTolerance);
    else if (key == "certificateMargin") real(o.certificateMargin);
    else if (key == "supportTolerance") real(o.supportTolerance);
    else if (key == "certificateIterations") integer(o.certificateIterations);
    else if (key == "productGrid") integer(o.productGrid);
    else if (key == "productStarts") integer(o.productStarts);
    else if (key == "productThreshold") real(o.productThreshold);
    else if (key == "qcThetaSteps") integer(o.qcThetaSteps);
    else if (key == "qcPhiSteps") integer(o.qcPhiSteps);
    else if (key == "qcScreenIterations") integer(o.qcScreenIterations);
    else if (key == "qcCandidates") integer(o.qcCandidates);
    else if (key == "qcGapThreshold") real(o.qcGapThreshold);
    else throw SchemaError(w, "unknown solver parameter");
  }
  if (o.productGrid < 2) throw SchemaError(where + "/productGrid", "needs at least 2 points per axis");
}

json toJson(const genmodel::Lemma1Report& r) {
  json perK = json::array();
  for (const auto& e : r.perK) {
    perK.push_back(json{{"k", e.k}, {"lowerBound", e.lowerBound}, {"observed", e.observed}, {"satisfied", e.satisfied}});
  }
  return json{{"eigenvector", vectorJson(r.phi)},
              {"phase", r.phase},
              {"tau", r.tau},
              {"marginalSpectrum", r.marginalSpectrum},
              {"perK", perK},
              {"basisDependent", r.basisDependent},
              {"randomProbe", r.randomProbe},
              {"satisfied", r.satisfied}};
}

json toJson(const genmodel::DiagonalWindow& w) {
  json intervals = json::array();
  for (const auto& i : w.intervals) intervals.push_back({i.lo, i.hi});
  return json{{"tau", w.tau}, {"marginalSpectrum", w.marginalSpectrum}, {"rankS", w.rankS}, {"window", intervals}};
}

json toJson(const genmodel::PurityBound& b) {
  return json{{"bound", b.bound},           {"formulaValue", b.formulaValue},
              {"lambdaR", b.lambdaR},       {"rank", b.rank},
              {"maxTerm", b.maxTerm},       {"invertible", b.invertible},
              {"eigenvectorsUsed", b.eigenvectorsUsed}};
}

json toJson(const genmodel::FamilySolution& s) {
  json j = {{"theta", s.theta},
            {"gamma", s.gamma},
            {"degenerate", s.degenerate},
            {"generator", vectorJson(s.generator)},
            {"annotation", s.annotation}};
  if (s.degenerate) {
    j["partner"] = vectorJson(s.partner);
    j["coherenceDirection"] = complexJson(s.coherenceDirection);
    j["separableMember"] = toJson(s.separableMember);
  }
  return j;
}

json toJson(const genmodel::RobustnessReport& r) {
  return json{{"epsilon", r.epsilon},
              {"halfNormEpsilon", r.halfNormEpsilon},
              {"delta", r.delta},
              {"lipschitz", r.lipschitz},
              {"guarantee", r.guarantee}};
}

json toJson(const witness::ShiftWitness& w) {
  return json{{"d", w.d},
              {"rank", w.rank},
              {"weights", w.weights},
              {"eigenbasis", toJson(w.eigenbasis)},
              {"threshold", w.threshold},
              {"u0", toJson(w.u0)}};
}

json toJson(const witness::CertifyResult& c) {
  return json{{"verdict", witness::toString(c.verdict)}, {"threshold", c.threshold}, {"observed", c.observed}};
}

json toJson(const witness::ProtocolTranscript& t) {
  return json{{"threshold", t.threshold}, {"shots", t.shots},   {"count0", t.count0},
              {"estimate", t.estimate},   {"exact", t.exact},   {"ci", {t.ciLow, t.ciHigh}},
              {"verdict", witness::toString(t.verdict)},        {"seed", t.seed}};
}

json toJson(const genmodel::GenerationProblem& p) {
  return json{{"unitary", toJson(p.u)},
              {"rhoS", toJson(p.rhoS)},
              {"rhoSPrime", toJson(p.rhoSPrime)},
              {"class", genmodel::toString(p.stateClass)}};
}

genmodel::GenerationProblem problemFromJson(const json& j, const std::string& where) {
  requireKeys(j, {"unitary", "rhoS", "rhoSPrime", "class"}, where);
  for (const char* k : {"unitary", "rhoS", "rhoSPrime"})
    if (!j.contains(k)) throw SchemaError(where + "/" + k, "missing");
  genmodel::StateClass cls = genmodel::StateClass::kAny;
  if (j.contains("class")) {
    if (!j.at("class").is_string()) throw SchemaError(where + "/class", "expected a string");
    try {
      cls = genmodel::stateClassFromString(j.at("class").get<std::string>());
    } catch (const DomainError& e) {
      throw SchemaError(where + "/class", e.what());
    }
  }
  genmodel::GenerationProblem p{gateFromJson(j.at("unitary"), where + "/unitary"),
                                stateFromJson(j.at("rhoS"), where + "/rhoS"),
                                stateFromJson(j.at("rhoSPrime"), where + "/rhoSPrime"), cls};
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(where, e.what());
  }
  return p;
}

}  // namespace openqdyn::io
