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

#include "openqdyn/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "openqdyn/gates.hpp"

namespace openqdyn::cli {

using genmodel::SolverOptions;
using genmodel::Status;
using linalg::ComplexMatrix;
using states::DensityMatrix;

namespace {

constexpr std::uint64_t kDefaultSeed = 20260101;

json readJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io::SchemaError(path, "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw io::SchemaError(path, std::string("malformed JSON: ") + e.what());
  }
}

// Flag values: inline JSON, a JSON file, or a plain token kept as a string.
json flagValue(const std::string& text) {
  if (!text.empty() && (text.front() == '{' || text.front() == '[')) {
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      throw io::SchemaError("<flag>", std::string("malformed inline JSON: ") + e.what());
    }
  }
  std::error_code ec;
  if (std::filesystem::is_regular_file(text, ec)) return readJsonFile(text);
  if (text.size() > 5 && text.substr(text.size() - 5) == ".json") throw io::SchemaError(text, "no such file");
  return json(text);
}

std::vector<double> parseList(const std::string& s, const std::string& where) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw io::SchemaError(where, "cannot parse number '" + tok + "'");
    }
  }
  return out;
}

DensityMatrix namedState(const std::string& name, const std::string& where) {
  const ComplexMatrix k0 = ComplexMatrix::basisVector(2, 0);
  const ComplexMatrix k1 = ComplexMatrix::basisVector(2, 1);
  const double r = 1.0 / std::sqrt(2.0);
  if (name == "maximally-mixed") return DensityMatrix::maximallyMixed(2);
  if (name == "ket0") return DensityMatrix::pure(k0, {2});
  if (name == "ket1") return DensityMatrix::pure(k1, {2});
  if (name == "plus") return DensityMatrix::pure(r * (k0 + k1), {2});
  if (name == "minus") return DensityMatrix::pure(r * (k0 - k1), {2});
  if (name.rfind("bloch:", 0) == 0) {
    const auto v = parseList(name.substr(6), where);
    if (v.size() != 3) throw io::SchemaError(where, "bloch needs three components");
    try {
      return states::fromBloch({v[0], v[1], v[2]});
    } catch (const std::invalid_argument& e) {
      throw io::SchemaError(where, e.what());
    }
  }
  throw io::SchemaError(where, "unknown state '" + name +
                                   "' (maximally-mixed, ket0, ket1, plus, minus, bloch:a,b,c, or a matrix)");
}

DensityMatrix stateInput(const json& j, const std::string& where) {
  if (j.is_string()) return namedState(j.get<std::string>(), where);
  return io::stateFromJson(j, where);
}

states::UnitaryGate gateInput(const json& j, const std::string& where) { return io::gateFromJson(j, where); }

double numberInput(const json& inputs, const char* key, double fallback, const std::string& where) {
  if (!inputs.contains(key)) return fallback;
  if (!inputs.at(key).is_number()) throw io::SchemaError(where + "/" + key, "expected a number");
  return inputs.at(key).get<double>();
}

std::vector<double> vectorInput(const json& inputs, const char* key, std::vector<double> fallback,
                                const std::string& where) {
  if (!inputs.contains(key)) return fallback;
  const json& v = inputs.at(key);
  if (v.is_string()) return parseList(v.get<std::string>(), where + "/" + key);
  if (!v.is_array()) throw io::SchemaError(where + "/" + key, "expected a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw io::SchemaError(where + "/" + key + "/" + std::to_string(i), "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

std::uint64_t countInput(const json& inputs, const char* key, std::uint64_t fallback, const std::string& where) {
  if (!inputs.contains(key)) return fallback;
  if (!inputs.at(key).is_number_unsigned()) throw io::SchemaError(where + "/" + key, "expected a non-negative integer");
  return inputs.at(key).get<std::uint64_t>();
}

struct Context {
  SolverOptions solver;
  Tolerances tol;
  std::uint64_t seed = kDefaultSeed;
  bool undecided = false;

  void note(const genmodel::FeasibilityResult& r) { undecided = undecided || r.status == Status::kUndecided; }
};

// Window of p for targets diag(p, 1 - p) clipped to [0, 1].
json closedWindow(double lo, double hi) {
  lo = std::clamp(lo, 0.0, 1.0);
  hi = std::clamp(hi, 0.0, 1.0);
  return json::array({json::array({lo, hi})});
}

json runClassify(const json& in, Context& ctx) {
  const std::string w = "/inputs";
  io::requireKeys(in, {"gate"}, w);
  if (!in.contains("gate")) throw io::SchemaError(w + "/gate", "missing");
  const auto u = gateInput(in.at("gate"), w + "/gate");
  if (!(u.dims() == linalg::BipartiteDims{2, 2})) throw io::SchemaError(w + "/gate", "classification needs two qubits");
  const auto c = magic::classify(u, ctx.tol.modular);
  json out = io::toJson(c);
  out["proposition1"] = magic::proposition1Holds(c.form);
  const auto pattern = magic::prodBasisPattern(u);
  out["productBasisPattern"] = pattern ? json{{"found", true}, {"objective", pattern->objective},
                                              {"residual", pattern->residual}}
                                       : json{{"found", false}};
  return out;
}

json runModel(const json& in, Context& ctx) {
  const std::string w = "/inputs";
  io::requireKeys(in, {"gate", "rhoS", "target", "class", "rhoSE"}, w);
  if (!in.contains("gate")) throw io::SchemaError(w + "/gate", "missing");
  const auto u = gateInput(in.at("gate"), w + "/gate");
  json out;
  if (in.contains("rhoSE")) {
    const DensityMatrix rho = stateInput(in.at("rhoSE"), w + "/rhoSE");
    if (!rho.isBipartite()) throw io::SchemaError(w + "/rhoSE", "joint state needs two dims");
    genmodel::ForwardResult f = [&] {
      try {
        return genmodel::forward(u, rho);
      } catch (const DimensionError& e) {
        throw io::SchemaError(w + "/rhoSE", e.what());
      }
    }();
    out["rhoS"] = io::toJson(f.rhoS);
    out["rhoSPrime"] = io::toJson(f.rhoSPrime);
    genmodel::Lemma1Options lo;
    lo.seed = ctx.seed;
    json reports = json::array();
    bool all = true;
    for (const auto& r : genmodel::lemma1Check(u, rho, f.rhoSPrime, lo)) {
      reports.push_back(io::toJson(r));
      all = all && r.satisfied;
    }
    out["lemma1"] = reports;
    out["lemma1Satisfied"] = all;
    out["purityBound"] = io::toJson(genmodel::purityUpperBound(u, f.rhoS, u.dims().dE, lo));
    out["purityS"] = states::purity(f.rhoS);
    out["puritySPrime"] = states::purity(f.rhoSPrime);
    return out;
  }
  for (const char* k : {"rhoS", "target"})
    if (!in.contains(k)) throw io::SchemaError(w + "/" + k, "missing (or give rhoSE)");
  genmodel::StateClass cls = genmodel::StateClass::kAny;
  if (in.contains("class")) {
    try {
      cls = genmodel::stateClassFromString(in.at("class").get<std::string>());
    } catch (const std::exception& e) {
      throw io::SchemaError(w + "/class", e.what());
    }
  }
  genmodel::GenerationProblem p{u, stateInput(in.at("rhoS"), w + "/rhoS"), stateInput(in.at("target"), w + "/target"),
                                cls};
  try {
    p.validate();
  } catch (const DimensionError& e) {
    throw io::SchemaError(w, e.what());
  }
  const auto r = genmodel::solve(p, ctx.solver);
  ctx.note(r);
  out = io::toJson(r);
  out["class"] = genmodel::toString(cls);
  if (cls == genmodel::StateClass::kProduct && u.dims() == linalg::BipartiteDims{2, 2}) {
    out["robustness"] = io::toJson(genmodel::robustnessEpsilon(u, p.rhoS, p.rhoSPrime, ctx.solver));
  }
  return out;
}

json familyReport(double theta, double gamma, bool runQC, Context& ctx) {
  const auto sol = genmodel::familyAnalyze(theta, gamma);
  const auto u = gates::family(theta, gamma);
  const DensityMatrix mixed = DensityMatrix::maximallyMixed(2);
  const DensityMatrix ket0 = DensityMatrix::pure(ComplexMatrix::basisVector(2, 0), {2});
  json out;
  out["unitary"] = io::toJson(u);
  out["closedForm"] = io::toJson(sol);
  const auto any = genmodel::solveFeasibility({u, mixed, ket0, genmodel::StateClass::kAny}, ctx.solver);
  ctx.note(any);
  out["any"] = io::toJson(any);
  out["witnessFidelity"] = any.witness ? json(genmodel::familyFidelity(sol, *any.witness)) : json(nullptr);
  const auto product = genmodel::searchProduct({u, mixed, ket0, genmodel::StateClass::kProduct}, ctx.solver);
  out["product"] = io::toJson(product);
  if (sol.degenerate) {
    const DensityMatrix member = genmodel::familyMember(sol, 0.5);
    const auto ppt = magic::pptSeparable(member);
    out["halfMixture"] = json{{"state", io::toJson(member)},
                              {"pptSeparable", ppt.separable},
                              {"pptMinEigenvalue", ppt.minEigenvalue}};
    const auto sep = genmodel::solveFeasibility({u, mixed, ket0, genmodel::StateClass::kSeparable}, ctx.solver);
    ctx.note(sep);
    out["separable"] = io::toJson(sep);
  }
  if (runQC) {
    const auto qc = genmodel::searchQC({u, mixed, ket0, genmodel::StateClass::kQC}, ctx.solver);
    ctx.note(qc);
    out["qc"] = io::toJson(qc);
  }
  return out;
}

json runFamily(const json& in, Context& ctx) {
  const std::string w = "/inputs";
  io::requireKeys(in, {"theta", "gamma", "qc"}, w);
  const double theta = numberInput(in, "theta", kPi / 3.0, w);
  const double gamma = numberInput(in, "gamma", 0.7, w);
  const bool degenerate = std::abs(std::cos(2.0 * theta)) <= 1e-12;
  bool qc = degenerate;
  if (in.contains("qc")) {
    if (!in.at("qc").is_boolean()) throw io::SchemaError(w + "/qc", "expected true or false");
    qc = in.at("qc").get<bool>();
  }
  return familyReport(theta, gamma, qc, ctx);
}

json witnessReport(const DensityMatrix& rhoS, const std::string& hidden, std::uint64_t shots,
                   std::optional<double> observed, Context& ctx, const std::vector<double>& basisErrors = {}) {
  const std::size_t d = rhoS.dim();
  const auto w = witness::buildShift(rhoS, d);
  json out;
  out["shift"] = io::toJson(w);
  // Hidden states built on the same eigenbasis.
  DensityMatrix hiddenState = DensityMatrix::maximallyMixed(d * d);
  if (hidden == "maxcorr") {
    ComplexMatrix alpha(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) alpha(i, j) = std::sqrt(w.weights[i] * w.weights[j]);
    hiddenState = witness::maxCorrState(alpha, w.eigenbasis);
    out["pptSpectrum"] = witness::pptSpectrumMaxCorr(alpha, d);
    out["entangled"] = witness::maxCorrEntangled(alpha);
  } else if (hidden == "product") {
    hiddenState = states::product(rhoS, DensityMatrix::pure(ComplexMatrix::basisVector(d, 0), {d}));
  } else {
    throw io::SchemaError("/inputs/hidden", "expected maxcorr or product");
  }
  out["hidden"] = hidden;
  out["exactSuccess"] = witness::shiftSuccessProbability(w, hiddenState);
  out["noiseless"] = io::toJson(witness::theorem3Certify(rhoS, out["exactSuccess"].get<double>(), ctx.tol.statistical));
  if (observed) out["observed"] = io::toJson(witness::theorem3Certify(rhoS, *observed, ctx.tol.statistical));
  if (shots > 0) out["protocol"] = io::toJson(witness::simulateProtocol(hiddenState, shots, ctx.seed));
  if (!basisErrors.empty()) {
    json sweep = json::array();
    for (const auto& pt : witness::basisMismatchSweep(rhoS, basisErrors, ctx.tol.statistical))
      sweep.push_back(json{{"angle", pt.angle},
                           {"correlatedSuccess", pt.correlatedSuccess},
                           {"productMax", pt.productMax},
                           {"threshold", pt.threshold},
                           {"certifies", pt.certifies},
                           {"productBelowThreshold", pt.productBelowThreshold}});
    out["basisMismatch"] = sweep;
  }
  if (d * d <= 16) {
    const auto comp = witness::compatibleStates(w, rhoS, ctx.solver);
    ctx.note(comp.solve);
    out["compatibility"] = json{{"structure", comp.structure},
                                {"status", genmodel::toString(comp.solve.status)},
                                {"iterations", comp.solve.iterations},
                                {"maxCorrWeight", comp.maxCorrWeight},
                                {"maximallyCorrelated", comp.maximallyCorrelated}};
  }
  return out;
}

json runWitness(const json& in, Context& ctx) {
  const std::string w = "/inputs";
  io::requireKeys(in, {"rhoS", "hidden", "shots", "observed", "basisErrors"}, w);
  const DensityMatrix rhoS = in.contains("rhoS") ? stateInput(in.at("rhoS"), w + "/rhoS") : DensityMatrix::maximallyMixed(2);
  std::string hidden = "maxcorr";
  if (in.contains("hidden")) {
    if (!in.at("hidden").is_string()) throw io::SchemaError(w + "/hidden", "expected maxcorr or product");
    hidden = in.at("hidden").get<std::string>();
  }
  const std::uint64_t shots = countInput(in, "shots", 10000, w);
  std::optional<double> observed;
  if (in.contains("observed")) observed = numberInput(in, "observed", 0.0, w);
  try {
    return witnessReport(rhoS, hidden, shots, observed, ctx, vectorInput(in, "basisErrors", {}, w));
  } catch (const io::SchemaError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw io::SchemaError(w, e.what());
  }
}

json lemma1Example(bool correlated, const std::vector<double>& m) {
  if (m.size() != 3) throw io::SchemaError("/inputs/m", "expected three components");
  const ComplexMatrix phi3 = magic::magicVector(3);
  ComplexMatrix joint(4, 4);
  double tauClosed = 0.0;
  double lo = 0.0;
  double hi = 1.0;
  if (!correlated) {
    const DensityMatrix env = [&] {
      try {
        return states::fromBloch({m[0], m[1], m[2]});
      } catch (const std::invalid_argument& e) {
        throw io::SchemaError("/inputs/m", e.what());
      }
    }();
    joint = linalg::tensor(0.5 * ComplexMatrix::identity(2), env.matrix());
    const double s = m[0] * m[0] + m[1] * m[1] + m[2] * m[2];
    tauClosed = 0.25 - s;
    lo = 0.125 - 0.5 * s;
    hi = 0.875 + 0.5 * s;
  } else {
    joint = 0.25 * ComplexMatrix::identity(4);
    for (int k = 1; k <= 3; ++k) joint += m[k - 1] * linalg::tensor(states::pauli(k), states::pauli(k));
    const double s = m[0] - m[1] + m[2];
    tauClosed = 0.25 + s;
    lo = 0.125 + 0.5 * s;
    hi = 0.875 - 0.5 * s;
  }
  const DensityMatrix rho = [&] {
    try {
      return DensityMatrix(joint, {2, 2});
    } catch (const std::invalid_argument& e) {
      throw io::SchemaError("/inputs/m", std::string("joint state invalid: ") + e.what());
    }
  }();
  const auto window = genmodel::diagonalTargetWindow(rho, phi3);
  json out = io::toJson(window);
  out["state"] = correlated ? "I/4 + sum_i m_i sigma_i (x) sigma_i" : "I/2 (x) (I/2 + m.sigma)";
  out["m"] = m;
  out["eigenvector"] = "Phi_3";
  out["tauClosedForm"] = tauClosed;
  out["windowClosedForm"] = closedWindow(lo, hi);
  return out;
}

json cnotIntro(Context& ctx) {
  const double r = 0.5;
  // sqrt(1/2)(|0+> + |1->) = (|00> + |01> + |10> - |11>) / 2
  const ComplexMatrix psi(4, 1, {r, r, r, -r});
  const DensityMatrix joint = DensityMatrix::pure(psi, {2, 2});
  const DensityMatrix mixed = DensityMatrix::maximallyMixed(2);
  const DensityMatrix ket0 = DensityMatrix::pure(ComplexMatrix::basisVector(2, 0), {2});
  json out;
  for (const auto& gate : {gates::cnot(), gates::cnotReversed()}) {
    json g;
    const auto f = genmodel::forward(gate, joint);
    g["forward"] = json{{"rhoS", io::toJson(f.rhoS)}, {"rhoSPrime", io::toJson(f.rhoSPrime)}};
    g["forwardErrorToTarget"] = linalg::maxAbsDiff(f.rhoSPrime.matrix(), ket0.matrix());
    const auto any = genmodel::solveFeasibility({gate, mixed, ket0, genmodel::StateClass::kAny}, ctx.solver);
    const auto sep = genmodel::solveFeasibility({gate, mixed, ket0, genmodel::StateClass::kSeparable}, ctx.solver);
    const auto prod = genmodel::searchProduct({gate, mixed, ket0, genmodel::StateClass::kProduct}, ctx.solver);
    ctx.note(any);
    ctx.note(sep);
    g["any"] = io::toJson(any);
    g["separable"] = io::toJson(sep);
    g["product"] = io::toJson(prod);
    out[gate.name()] = g;
  }
  out["input"] = io::toJson(joint);
  return out;
}

json runPaperExample(const json& in, Context& ctx) {
  const std::string w = "/inputs";
  io::requireKeys(in, {"id", "m", "theta", "gamma", "shots", "rhoS"}, w);
  if (!in.contains("id") || !in.at("id").is_string()) throw io::SchemaError(w + "/id", "missing example id");
  const std::string id = in.at("id").get<std::string>();
  json out;
  if (id == "lemma1-bloch") {
    out = lemma1Example(false, vectorInput(in, "m", {0.1, 0.2, -0.1}, w));
  } else if (id == "lemma1-correlated") {
    out = lemma1Example(true, vectorInput(in, "m", {0.25, -0.25, 0.25}, w));
  } else if (id == "family-theta-gamma") {
    const double theta = numberInput(in, "theta", kPi / 3.0, w);
    const double gamma = numberInput(in, "gamma", 0.7, w);
    out = familyReport(theta, gamma, std::abs(std::cos(2.0 * theta)) <= 1e-12, ctx);
  } else if (id == "shift-witness") {
    const DensityMatrix rhoS = in.contains("rhoS") ? stateInput(in.at("rhoS"), w + "/rhoS") : DensityMatrix::maximallyMixed(2);
    const std::uint64_t shots = countInput(in, "shots", 10000, w);
    out = witnessReport(rhoS, "maxcorr", shots, std::nullopt, ctx);
    out["productComparison"] = witnessReport(rhoS, "product", shots, std::nullopt, ctx);
  } else if (id == "cnot-intro") {
    out = cnotIntro(ctx);
  } else {
    throw io::SchemaError(w + "/id", "unknown example '" + id + "'");
  }
  out["id"] = id;
  return out;
}

}  // namespace

const std::vector<CatalogEntry>& listPaperExamples() {
  static const std::vector<CatalogEntry> kCatalog = {
      {"lemma1-bloch", "eigenstate bound, uncorrelated environment",
       "p-window for I/2 -> diag(p, 1-p) from I/2 (x) (I/2 + m.sigma) with eigenvector Phi_3"},
      {"lemma1-correlated", "eigenstate bound, correlated environment",
       "p-window from I/4 + sum m_i sigma_i (x) sigma_i; collapses to p = 1/2 at m = (1/4, -1/4, 1/4)"},
      {"family-theta-gamma", "two-parameter unitary family",
       "closed-form generators of I/2 -> |0><0| against the solvers"},
      {"shift-witness", "shift unitary correlation witness",
       "maximally correlated vs product inputs, threshold sqrt(purity), finite-shot protocol"},
      {"cnot-intro", "CNOT purity extraction",
       "forward map of sqrt(1/2)(|0+> + |1->), separable and product generation"},
  };
  return kCatalog;
}

Report runScenario(const json& scenario) {
  io::requireKeys(scenario, {"kind", "inputs", "solverOverrides", "seed"}, "");
  if (!scenario.contains("kind") || !scenario.at("kind").is_string()) throw io::SchemaError("/kind", "missing");
  const std::string kind = scenario.at("kind").get<std::string>();
  const json inputs = scenario.value("inputs", json::object());
  if (!inputs.is_object()) throw io::SchemaError("/inputs", "expected an object");
  Context ctx;
  ctx.tol = Tolerances::fromEnvironment();
  ctx.solver.feasibilityTolerance = ctx.tol.feasibility;
  ctx.solver.certificateMargin = ctx.tol.certificate;
  if (scenario.contains("solverOverrides")) io::applySolverOverrides(scenario.at("solverOverrides"), ctx.solver, "/solverOverrides");
  if (scenario.contains("seed")) {
    if (!scenario.at("seed").is_number_unsigned()) throw io::SchemaError("/seed", "expected a non-negative integer");
    ctx.seed = scenario.at("seed").get<std::uint64_t>();
  }

  json result;
  try {
    if (kind == "classify") result = runClassify(inputs, ctx);
    else if (kind == "model") result = runModel(inputs, ctx);
    else if (kind == "family") result = runFamily(inputs, ctx);
    else if (kind == "witness") result = runWitness(inputs, ctx);
    else if (kind == "paper-example") result = runPaperExample(inputs, ctx);
    else throw io::SchemaError("/kind", "unknown kind '" + kind + "'");
  } catch (const io::SchemaError&) {
    throw;
  } catch (const json::exception& e) {
    throw io::SchemaError("/inputs", e.what());
  }

  Report rep;
  rep.undecided = ctx.undecided;
  rep.document = json{{"toolkit", "openqdyn"},
                      {"version", kVersion},
                      {"kind", kind},
                      {"seed", ctx.seed},
                      {"tolerances", io::toJson(ctx.tol)},
                      {"solver", io::toJson(ctx.solver)},
                      {"inputs", inputs},
                      {"result", result}};
  return rep;
}

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string scalar(const json& v) {
  if (v.is_number_float()) return fmt(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

bool isMatrix(const json& v) { return v.is_object() && v.contains("re") && v.contains("im") && v.at("re").is_array(); }

bool flatObject(const json& v) {
  if (!v.is_object()) return false;
  for (const auto& [k, x] : v.items())
    if (x.is_structured()) return false;
  return true;
}

bool numberList(const json& v) {
  if (!v.is_array()) return false;
  for (const auto& x : v)
    if (!x.is_number() && !(x.is_array() && numberList(x) && x.size() <= 4)) return false;
  return true;
}

std::string listText(const json& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += v[i].is_array() ? listText(v[i]) : scalar(v[i]);
  }
  return s + "]";
}

void render(const json& v, const std::string& indent, std::ostringstream& os) {
  for (const auto& [key, x] : v.items()) {
    if (x.is_null() || (x.is_string() && x.get<std::string>().empty())) continue;
    if (isMatrix(x)) {
      os << indent << key << ":";
      if (x.contains("dims")) os << " dims " << x.at("dims").dump();
      os << "\n";
      const json& re = x.at("re");
      const json& im = x.at("im");
      for (std::size_t i = 0; i < re.size(); ++i) {
        os << indent << "  ";
        for (std::size_t j = 0; j < re[i].size(); ++j) {
          char buf[64];
          std::snprintf(buf, sizeof buf, "%+.6f%+.6fi ", re[i][j].get<double>(), im[i][j].get<double>());
          os << buf;
        }
        os << "\n";
      }
    } else if (numberList(x)) {
      os << indent << key << ": " << listText(x) << "\n";
    } else if (x.is_array() && !x.empty() && flatObject(x[0])) {
      // Table rows, one entry per line with its fields side by side.
      os << indent << key << ":\n";
      for (const auto& row : x) {
        os << indent << "  ";
        for (const auto& [k, c] : row.items()) os << k << "=" << scalar(c) << "  ";
        os << "\n";
      }
    } else if (x.is_structured()) {
      os << indent << key << ":\n";
      render(x, indent + "  ", os);
    } else {
      os << indent << key << ": " << scalar(x) << "\n";
    }
  }
}

}  // namespace

std::string renderText(const json& document) {
  std::ostringstream os;
  os << "openqdyn " << document.value("version", "") << "  " << document.value("kind", "") << "  seed "
     << document.value("seed", 0ULL) << "\n";
  if (document.contains("result")) render(document.at("result"), "  ", os);
  return os.str();
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"openqdyn: reduced dynamics, two-qubit gate classes and correlation witnesses"};
  app.require_subcommand(1);
  std::string jsonPath;
  std::uint64_t seed = kDefaultSeed;
  std::vector<std::string> solverFlags;
  app.add_option("--json", jsonPath, "write the JSON report to this file ('-' for stdout)");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--solver", solverFlags, "solver override key=value (repeatable)")->allow_extra_args(false);

  json inputs = json::object();
  std::string kind;
  std::string gate, matrix, rhoS, target, cls, rhoSE, hidden, mList, exampleId, scenarioPath;
  double theta = 0.0, gamma = 0.0, observed = 0.0;
  std::size_t d = 2;
  std::uint64_t shots = 10000;
  bool list = false;
  bool qc = false;

  auto addGate = [&](CLI::App* s) {
    s->add_option("--gate", gate, "library gate: " + [] {
      std::string names;
      for (const auto& n : gates::libraryNames()) names += (names.empty() ? "" : ", ") + n;
      return names;
    }());
    s->add_option("--matrix", matrix, "gate as inline JSON or a .json file");
    s->add_option("--theta", theta, "family angle theta (radians)");
    s->add_option("--gamma", gamma, "family phase gamma (radians)");
    s->add_option("--d", d, "shift dimension");
  };
  auto* classify = app.add_subcommand("classify", "nonlocal class of a two-qubit unitary");
  addGate(classify);
  auto* model = app.add_subcommand("model", "generation problem or forward model");
  addGate(model);
  model->add_option("--rhoS", rhoS, "initial system state");
  model->add_option("--target", target, "final system state");
  model->add_option("--class", cls, "ANY, SEPARABLE, QC or PRODUCT");
  model->add_option("--rhoSE", rhoSE, "joint state: run the forward map and eigenstate bounds instead");
  auto* family = app.add_subcommand("family", "closed-form analysis of the two-parameter family");
  family->add_option("--theta", theta, "theta (radians)");
  family->add_option("--gamma", gamma, "gamma (radians)");
  family->add_flag("--qc", qc, "also run the QC basis search");
  auto* wit = app.add_subcommand("witness", "shift-unitary correlation witness");
  wit->add_option("--rhoS", rhoS, "system state (default maximally-mixed)");
  wit->add_option("--hidden", hidden, "maxcorr or product");
  wit->add_option("--shots", shots, "protocol shots (0 to skip)");
  wit->add_option("--observed", observed, "certify an observed <0|rho_S'|0>");
  std::string basisErrors;
  wit->add_option("--basis-error", basisErrors, "eigenbasis rotation angles a,b,... for a mismatch sweep");
  auto* example = app.add_subcommand("paper-example", "bundled worked examples");
  example->add_option("id", exampleId, "example id");
  example->add_flag("--list", list, "print the catalog");
  example->add_option("--m", mList, "Bloch components a,b,c");
  example->add_option("--theta", theta, "theta (radians)");
  example->add_option("--gamma", gamma, "gamma (radians)");
  example->add_option("--shots", shots, "protocol shots");
  auto* run = app.add_subcommand("run", "execute a scenario file");
  run->add_option("scenario", scenarioPath, "scenario JSON")->required();
  for (auto* s : {classify, model, family, wit, example, run}) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    json scenario;
    if (run->parsed()) {
      scenario = readJsonFile(scenarioPath);
    } else {
      auto gateJson = [&]() -> json {
        if (!matrix.empty()) return flagValue(matrix);
        if (gate.empty()) throw io::SchemaError("--gate", "missing (or --matrix)");
        json g = {{"name", gate}};
        if (gate == "family") {
          g["theta"] = theta;
          g["gamma"] = gamma;
        }
        if (gate == "shift") g["d"] = d;
        return g;
      };
      if (classify->parsed()) {
        kind = "classify";
        inputs["gate"] = gateJson();
      } else if (model->parsed()) {
        kind = "model";
        inputs["gate"] = gateJson();
        if (!rhoSE.empty()) inputs["rhoSE"] = flagValue(rhoSE);
        if (!rhoS.empty()) inputs["rhoS"] = flagValue(rhoS);
        if (!target.empty()) inputs["target"] = flagValue(target);
        if (!cls.empty()) inputs["class"] = cls;
      } else if (family->parsed()) {
        kind = "family";
        inputs["theta"] = family->count("--theta") ? theta : kPi / 3.0;
        inputs["gamma"] = family->count("--gamma") ? gamma : 0.7;
        if (qc) inputs["qc"] = true;
      } else if (wit->parsed()) {
        kind = "witness";
        if (!rhoS.empty()) inputs["rhoS"] = flagValue(rhoS);
        if (!hidden.empty()) inputs["hidden"] = hidden;
        inputs["shots"] = shots;
        if (wit->count("--observed")) inputs["observed"] = observed;
        if (!basisErrors.empty()) inputs["basisErrors"] = parseList(basisErrors, "--basis-error");
      } else if (example->parsed()) {
        if (list || exampleId.empty()) {
          for (const auto& e : listPaperExamples()) out << e.id << "  " << e.anchor << ": " << e.description << "\n";
          return 0;
        }
        kind = "paper-example";
        inputs["id"] = exampleId;
        if (!mList.empty()) inputs["m"] = parseList(mList, "--m");
        if (example->count("--theta")) inputs["theta"] = theta;
        if (example->count("--gamma")) inputs["gamma"] = gamma;
        if (example->count("--shots")) inputs["shots"] = shots;
      }
      scenario = json{{"kind", kind}, {"inputs", inputs}, {"seed", seed}};
    }
    if (!solverFlags.empty()) {
      json overrides = scenario.value("solverOverrides", json::object());
      for (const auto& f : solverFlags) {
        const auto eq = f.find('=');
        if (eq == std::string::npos) throw io::SchemaError("--solver", "expected key=value, got '" + f + "'");
        overrides[f.substr(0, eq)] = json::parse(f.substr(eq + 1), nullptr, false);
        if (overrides[f.substr(0, eq)].is_discarded()) throw io::SchemaError("--solver", "bad value in '" + f + "'");
      }
      scenario["solverOverrides"] = overrides;
    }
    if (run->parsed() && app.count("--seed")) scenario["seed"] = seed;

    const Report rep = runScenario(scenario);
    const std::string dumped = rep.document.dump(2) + "\n";
    if (jsonPath == "-") {
      out << dumped;
    } else {
      if (!jsonPath.empty()) {
        std::ofstream f(jsonPath);
        if (!f) throw io::SchemaError(jsonPath, "cannot write report");
        f << dumped;
      }
      out << renderText(rep.document);
    }
    return rep.undecided ? 2 : 0;
  } catch (const io::SchemaError& e) {
    err << "input error at " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "input error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace openqdyn::cli
