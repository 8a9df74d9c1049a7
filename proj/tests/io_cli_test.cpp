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

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "openqdyn/cli.hpp"
#include "openqdyn/gates.hpp"

using namespace openqdyn;
using io::json;
using linalg::ComplexMatrix;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run runCli(std::vector<std::string> args) {
  args.insert(args.begin(), "openqdyn");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  Run r;
  r.code = cli::main(int(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

TEST(Json, MatrixRoundTripIsExact) {
  states::Sampler rng(71);
  const auto u = states::randomUnitaryMatrix(4, rng);
  const auto back = io::matrixFromJson(json::parse(io::toJson(u).dump()));
  EXPECT_EQ(linalg::maxAbsDiff(u, back), 0.0);
}

TEST(Json, StateAndGateParsing) {
  const auto rho = states::randomState({2, 2}, 3, 72);
  const auto back = io::stateFromJson(json::parse(io::toJson(rho).dump()));
  EXPECT_EQ(back.dims(), rho.dims());
  EXPECT_EQ(linalg::maxAbsDiff(back.matrix(), rho.matrix()), 0.0);
  EXPECT_EQ(io::gateFromJson(json("cnot")).name(), "cnot");
  const auto fam = io::gateFromJson(json{{"name", "family"}, {"theta", 0.3}, {"gamma", 0.1}});
  EXPECT_EQ(linalg::maxAbsDiff(fam.matrix(), gates::family(0.3, 0.1).matrix()), 0.0);
}

TEST(Json, SchemaErrorsCarryLocation) {
  json bad = io::toJson(states::DensityMatrix::maximallyMixed(2));
  bad["re"][0][0] = 2.0;
  try {
    io::stateFromJson(bad, "/inputs/rhoS");
    FAIL() << "expected SchemaError";
  } catch (const io::SchemaError& e) {
    EXPECT_EQ(e.where().rfind("/inputs/rhoS", 0), 0u);
  }
  genmodel::SolverOptions opt;
  EXPECT_THROW(io::applySolverOverrides(json{{"maxIterations", -3}}, opt), io::SchemaError);
  EXPECT_THROW(io::applySolverOverrides(json{{"nope", 1}}, opt), io::SchemaError);
  io::applySolverOverrides(json{{"maxIterations", 77}}, opt);
  EXPECT_EQ(opt.maxIterations, 77);
}

TEST(Json, ProblemRoundTrip) {
  const genmodel::GenerationProblem p{gates::dcnot(), states::DensityMatrix::maximallyMixed(2),
                                      states::randomState({2}, 1, 73), genmodel::StateClass::kQC};
  const auto back = io::problemFromJson(json::parse(io::toJson(p).dump()));
  EXPECT_EQ(back.stateClass, p.stateClass);
  EXPECT_EQ(linalg::maxAbsDiff(back.u.matrix(), p.u.matrix()), 0.0);
  EXPECT_EQ(linalg::maxAbsDiff(back.rhoSPrime.matrix(), p.rhoSPrime.matrix()), 0.0);
}

TEST(Cli, ClassifyReportsLabel) {
  const auto r = runCli({"classify", "--gate", "cnot", "--json", "-"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["toolkit"], "openqdyn");
  EXPECT_EQ(doc["result"]["class"], "UC2");
  EXPECT_TRUE(doc.contains("tolerances"));
  EXPECT_TRUE(doc.contains("solver"));
}

TEST(Cli, OutputIsDeterministic) {
  const auto a = runCli({"model", "--gate", "cnot-reversed", "--rhoS", "maximally-mixed", "--target", "ket0",
                         "--class", "SEPARABLE", "--json", "-"});
  const auto b = runCli({"model", "--gate", "cnot-reversed", "--rhoS", "maximally-mixed", "--target", "ket0",
                         "--class", "SEPARABLE", "--json", "-"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(json::parse(a.out)["result"]["status"], "FEASIBLE");
}

TEST(Cli, ProductModelAndRobustness) {
  const auto r = runCli({"model", "--gate", "cnot", "--rhoS", "maximally-mixed", "--target", "ket0", "--class",
                         "PRODUCT", "--json", "-"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["result"]["status"], "INFEASIBLE");
  EXPECT_NEAR(doc["result"]["minObjective"].get<double>(), 1.0, 1e-6);
  EXPECT_TRUE(doc["result"].contains("robustness"));
}

TEST(Cli, ForwardModelWithJointState) {
  const json joint = io::toJson(states::randomState({2, 2}, 2, 74));
  const auto r = runCli({"model", "--gate", "sqrt-swap", "--rhoSE", joint.dump(), "--json", "-"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(json::parse(r.out)["result"]["lemma1Satisfied"].get<bool>());
}

TEST(Cli, InputErrorsExitOne) {
  EXPECT_EQ(runCli({"classify", "--gate", "bogus"}).code, 1);
  EXPECT_EQ(runCli({"model", "--gate", "cnot", "--rhoS", "bloch:1,0,0", "--target", "ket0"}).code, 1);
  EXPECT_EQ(runCli({"model", "--gate", "cnot", "--rhoS", "ket0", "--target", "ket0", "--solver", "bogus=1"}).code, 1);
  EXPECT_EQ(runCli({"paper-example", "nope"}).code, 1);
  EXPECT_EQ(runCli({"frobnicate"}).code, 1);
}

TEST(Cli, ScenarioFiles) {
  const std::string path = ::testing::TempDir() + "openqdyn_scenario.json";
  {
    std::ofstream f(path);
    f << json{{"kind", "classify"}, {"inputs", {{"gate", "swap"}}}, {"seed", 5}}.dump();
  }
  const auto r = runCli({"run", path, "--json", "-"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["result"]["class"], "SWAP");
  EXPECT_EQ(doc["seed"], 5);
  {
    std::ofstream f(path);
    f << json{{"kind", "classify"}, {"inputs", {{"gate", "swap"}}}, {"colour", "blue"}}.dump();
  }
  EXPECT_EQ(runCli({"run", path}).code, 1);
  std::remove(path.c_str());
}

TEST(Cli, UndecidedExitsTwo) {
  // A feasible instance cannot meet a zero-width tolerance, and no sound
  // certificate exists either.
  const auto rho = states::randomState({2, 2}, 1, 75);
  states::Sampler rng(76);
  const auto u = states::randomUnitary({2, 2}, rng);
  const auto f = genmodel::forward(u, rho);
  const json scenario = {{"kind", "model"},
                         {"inputs",
                          {{"gate", io::toJson(u)},
                           {"rhoS", io::toJson(f.rhoS)},
                           {"target", io::toJson(f.rhoSPrime)},
                           {"class", "ANY"}}},
                         {"solverOverrides", {{"maxIterations", 3}, {"feasibilityTolerance", 1e-300}}}};
  const auto rep = cli::runScenario(scenario);
  EXPECT_TRUE(rep.undecided);
  EXPECT_EQ(rep.document["result"]["status"], "UNDECIDED");
}

TEST(Cli, CatalogRunsWithDefaults) {
  for (const auto& e : cli::listPaperExamples()) {
    const auto rep = cli::runScenario(json{{"kind", "paper-example"}, {"inputs", {{"id", e.id}}}});
    EXPECT_EQ(rep.document["result"]["id"], e.id);
    EXPECT_FALSE(rep.undecided) << e.id;
  }
}

TEST(Cli, MatrixFromFile) {
  const std::string path = ::testing::TempDir() + "openqdyn_gate.json";
  {
    std::ofstream f(path);
    f << io::toJson(gates::swap()).dump();
  }
  const auto r = runCli({"classify", "--matrix", path, "--json", "-"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["result"]["class"], "SWAP");
  std::remove(path.c_str());
  EXPECT_EQ(runCli({"classify", "--matrix", "missing.json"}).code, 1);
}

TEST(Cli, WorkedExamples) {
  const auto list = runCli({"paper-example", "--list"});
  EXPECT_EQ(list.code, 0);
  for (const auto& e : cli::listPaperExamples()) EXPECT_NE(list.out.find(e.id), std::string::npos);
  const auto r = runCli({"paper-example", "lemma1-correlated", "--json", "-"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto w = json::parse(r.out)["result"]["window"][0];
  EXPECT_NEAR(w[0].get<double>(), 0.5, 1e-12);
  EXPECT_NEAR(w[1].get<double>(), 0.5, 1e-12);
  const auto text = runCli({"paper-example", "lemma1-bloch", "--m", "0.1,0.2,-0.1"});
  EXPECT_EQ(text.code, 0);
  EXPECT_NE(text.out.find("window"), std::string::npos);
}

}  // namespace
