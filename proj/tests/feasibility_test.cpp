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

#include <cmath>

#include "openqdyn/feasibility.hpp"
#include "openqdyn/gates.hpp"
#include "openqdyn/magic.hpp"
#include "oracle.hpp"

using namespace openqdyn;
using genmodel::GenerationProblem;
using genmodel::StateClass;
using genmodel::Status;
using linalg::ComplexMatrix;
using states::DensityMatrix;

namespace {

DensityMatrix ket0() { return DensityMatrix::pure(ComplexMatrix::basisVector(2, 0), {2}); }
DensityMatrix mixed() { return DensityMatrix::maximallyMixed(2); }

// Independent residual: marginals of the witness against the problem.
double oracleResidual(const GenerationProblem& p, const DensityMatrix& w) {
  const auto x = oracle::toEigen(w.matrix());
  const auto u = oracle::toEigen(p.u.matrix());
  const int dS = int(p.u.dims().dS), dE = int(p.u.dims().dE);
  return oracle::traceNorm(oracle::traceE(x, dS, dE) - oracle::toEigen(p.rhoS.matrix())) +
         oracle::traceNorm(oracle::traceE(u * x * u.adjoint(), dS, dE) - oracle::toEigen(p.rhoSPrime.matrix()));
}

TEST(Feasibility, GeneratedTransformationsAreFeasible) {
  states::Sampler rng(51);
  for (int n = 0; n < 60; ++n) {
    const auto rho = states::randomState({2, 2}, 1 + n % 4, rng);
    const auto u = states::randomUnitary({2, 2}, rng);
    const auto f = genmodel::forward(u, rho);
    const GenerationProblem p{u, f.rhoS, f.rhoSPrime, StateClass::kAny};
    const auto r = genmodel::solveFeasibility(p);
    ASSERT_EQ(r.status, Status::kFeasible);
    EXPECT_LT(oracleResidual(p, *r.witness), 1e-6);
    EXPECT_GE(oracle::eigenvaluesAscending(oracle::toEigen(r.witness->matrix()))(0), -1e-9);
  }
}

TEST(Feasibility, ConservedQuantityGivesCertificate) {
  // The identity cannot change rho_S.
  const GenerationProblem p{gates::identity(), mixed(), ket0(), StateClass::kAny};
  const auto r = genmodel::solveFeasibility(p);
  EXPECT_EQ(r.status, Status::kInfeasible);
  ASSERT_TRUE(r.certificate.has_value());
  EXPECT_GE(r.certificate->margin, 1e-6);
  // The CNOT control keeps its populations too.
  EXPECT_EQ(genmodel::solveFeasibility({gates::cnot(), mixed(), ket0(), StateClass::kAny}).status, Status::kInfeasible);
}

TEST(Feasibility, ClassicalCorrelationsSufficeForReversedCnot) {
  // (|00><00| + |11><11|)/2 is mapped to |0> on S when E controls.
  const GenerationProblem p{gates::cnotReversed(), mixed(), ket0(), StateClass::kSeparable};
  const auto r = genmodel::solveFeasibility(p);
  ASSERT_EQ(r.status, Status::kFeasible);
  EXPECT_LT(oracleResidual(p, *r.witness), 1e-6);
  EXPECT_TRUE(magic::pptSeparable(*r.witness, 1e-7).separable);
  const auto qc = genmodel::searchQC({gates::cnotReversed(), mixed(), ket0(), StateClass::kQC});
  EXPECT_EQ(qc.status, Status::kFeasible);
  EXPECT_EQ(genmodel::searchProduct({gates::cnotReversed(), mixed(), ket0(), StateClass::kProduct}).status,
            Status::kInfeasible);
}

TEST(Feasibility, GenericGateCounterexampleNeedsEntanglement) {
  states::Sampler rng(52);
  for (int n = 0; n < 10; ++n) {
    const auto u = states::randomUnitary({2, 2}, rng);
    const auto ce = magic::counterexampleStates(magic::krausCirac(u));
    const DensityMatrix target = DensityMatrix::pure(ce.targetPlus, {2});
    const auto any = genmodel::solveFeasibility({u, ce.rhoSPlus, target, StateClass::kAny});
    EXPECT_EQ(any.status, Status::kFeasible);
    const auto sep = genmodel::solveFeasibility({u, ce.rhoSPlus, target, StateClass::kSeparable});
    EXPECT_EQ(sep.status, Status::kInfeasible);
  }
}

// At the degenerate angle the set contains a state block-diagonal in an E
// basis; check the reported witness from scratch.
TEST(Feasibility, QuantumClassicalWitnessAtDegenerateAngle) {
  const GenerationProblem p{gates::family(kPi / 4, 0.7), mixed(), ket0(), StateClass::kQC};
  const auto r = genmodel::searchQC(p);
  ASSERT_EQ(r.status, Status::kFeasible);
  ASSERT_TRUE(r.environmentBasis.has_value());
  EXPECT_LT(oracleResidual(p, *r.witness), 1e-6);
  const auto b = oracle::toEigen(*r.environmentBasis);
  EXPECT_LT(oracle::maxAbsDiff(b.adjoint() * b, oracle::Mat::Identity(2, 2)), 1e-10);
  const auto rot = oracle::kron(oracle::Mat::Identity(2, 2), b);
  const oracle::Mat y = rot.adjoint() * oracle::toEigen(r.witness->matrix()) * rot;
  // Off-diagonal E blocks vanish.
  double off = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) off = std::max(off, std::abs(y(i * 2 + 0, j * 2 + 1)));
  EXPECT_LT(off, 1e-6);
}

TEST(Feasibility, NonDegenerateFamilyRejectsQC) {
  const GenerationProblem p{gates::family(kPi / 3, 0.7), mixed(), ket0(), StateClass::kQC};
  EXPECT_NE(genmodel::searchQC(p).status, Status::kFeasible);
}

TEST(Product, IdentityHasExactMinimum) {
  states::Sampler rng(53);
  const auto a = states::randomState({2}, 2, rng), b = states::randomState({2}, 2, rng);
  const auto r = genmodel::searchProduct({gates::identity(), a, b, StateClass::kProduct});
  EXPECT_NEAR(r.minObjective, oracle::traceNorm(oracle::toEigen(a.matrix()) - oracle::toEigen(b.matrix())), 1e-6);
}

TEST(Product, SwapGeneratesAnything) {
  states::Sampler rng(54);
  for (int n = 0; n < 10; ++n) {
    const auto a = states::randomState({2}, 2, rng), b = states::randomState({2}, 1 + n % 2, rng);
    const auto r = genmodel::searchProduct({gates::swap(), a, b, StateClass::kProduct});
    EXPECT_EQ(r.status, Status::kFeasible);
    ASSERT_TRUE(r.environmentState.has_value());
    EXPECT_LT(linalg::maxAbsDiff(r.environmentState->matrix(), b.matrix()), 1e-5);
  }
}

TEST(Product, RobustnessIsHalfTheGap) {
  const auto r = genmodel::robustnessEpsilon(gates::cnot(), mixed(), ket0());
  EXPECT_NEAR(r.epsilon, 1.0, 1e-6);
  EXPECT_NEAR(r.delta, r.epsilon / 2, 1e-15);
}

TEST(Lemma2, ProductFeasibleOnlyForSwap) {
  states::Sampler rng(55);
  for (int n = 0; n < 10; ++n) {
    const auto rhoS = states::randomState({2}, 2, rng);
    const auto psi = states::randomPureVector(2, rng);
    for (const auto& u : {gates::swap(), gates::cnot(), gates::sqrtSwap(), states::randomUnitary({2, 2}, rng)}) {
      const auto v = genmodel::lemma2Check(u, rhoS, psi);
      EXPECT_TRUE(v.consistent);
      EXPECT_EQ(v.productFeasible, v.unitaryClass == magic::UnitaryClass::kSWAP);
    }
  }
  EXPECT_THROW(genmodel::lemma2Check(gates::swap(), ket0(), ComplexMatrix::basisVector(2, 0)), DomainError);
}

TEST(Feasibility, InputValidation) {
  EXPECT_THROW((GenerationProblem{gates::shift(3), mixed(), ket0(), StateClass::kAny}.validate()), DimensionError);
  states::Sampler rng(56);
  const auto bigE = states::randomUnitary({2, 3}, rng);
  EXPECT_THROW(genmodel::solveFeasibility({bigE, mixed(), ket0(), StateClass::kSeparable}), DimensionError);
  EXPECT_THROW(genmodel::stateClassFromString("ENTANGLED"), std::invalid_argument);
  EXPECT_EQ(genmodel::stateClassFromString("SEPARABLE"), StateClass::kSeparable);
}

TEST(Feasibility, Deterministic) {
  states::Sampler rng(57);
  const GenerationProblem p{states::randomUnitary({2, 2}, rng), mixed(), states::randomState({2}, 2, rng),
                            StateClass::kAny};
  const auto a = genmodel::solveFeasibility(p), b = genmodel::solveFeasibility(p);
  EXPECT_EQ(a.status, b.status);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ(a.residual, b.residual);
}

}  // namespace
