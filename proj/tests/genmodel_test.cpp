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

#include "openqdyn/gates.hpp"
#include "openqdyn/genmodel.hpp"
#include "openqdyn/magic.hpp"
#include "oracle.hpp"

using namespace openqdyn;
using linalg::ComplexMatrix;
using states::DensityMatrix;

namespace {

DensityMatrix ket0() { return DensityMatrix::pure(ComplexMatrix::basisVector(2, 0), {2}); }

TEST(Forward, MatchesOracle) {
  states::Sampler rng(41);
  for (int n = 0; n < 20; ++n) {
    const auto rho = states::randomState({2, 3}, 1 + n % 6, rng);
    const auto u = states::randomUnitary({2, 3}, rng);
    const auto f = genmodel::forward(u, rho);
    const auto eu = oracle::toEigen(u.matrix());
    const auto out = oracle::traceE(eu * oracle::toEigen(rho.matrix()) * eu.adjoint(), 2, 3);
    EXPECT_LT(oracle::maxAbsDiff(oracle::toEigen(f.rhoSPrime.matrix()), out), 1e-12);
    EXPECT_LT(oracle::maxAbsDiff(oracle::toEigen(f.rhoS.matrix()), oracle::traceE(oracle::toEigen(rho.matrix()), 2, 3)),
              1e-12);
  }
  EXPECT_THROW(genmodel::forward(gates::cnot(), states::randomState({2, 3}, 2, 1)), DimensionError);
}

// The control qubit keeps its Z statistics, so this input stays maximally mixed.
TEST(Forward, CnotKeepsControlPopulations) {
  const ComplexMatrix psi(4, 1, {0.5, 0.5, 0.5, -0.5});
  const auto f = genmodel::forward(gates::cnot(), DensityMatrix::pure(psi, {2, 2}));
  EXPECT_LT(linalg::maxAbsDiff(f.rhoS.matrix(), DensityMatrix::maximallyMixed(2).matrix()), 1e-15);
  EXPECT_LT(linalg::maxAbsDiff(f.rhoSPrime.matrix(), DensityMatrix::maximallyMixed(2).matrix()), 1e-15);
}

TEST(Tau, MatchesPseudoInverse) {
  states::Sampler rng(42);
  for (int n = 0; n < 20; ++n) {
    const auto rho = states::randomState({2, 2}, 4, rng);
    const auto phi = states::randomPureVector(4, rng);
    const auto e = oracle::toEigen(phi);
    const double ref = 1.0 / (e.adjoint() * oracle::toEigen(rho.matrix()).inverse() * e)(0, 0).real();
    EXPECT_NEAR(genmodel::tau(rho, phi), ref, 1e-9);
  }
  // Outside the support.
  const auto pure = DensityMatrix::pure(magic::magicVector(1), {2, 2});
  EXPECT_EQ(genmodel::tau(pure, magic::magicVector(2)), 0.0);
  EXPECT_NEAR(genmodel::tau(pure, magic::magicVector(1)), 1.0, 1e-12);
}

TEST(UnitaryEigenbasis, Eigenpairs) {
  states::Sampler rng(43);
  for (const auto& u : {gates::cnot(), gates::swap(), gates::sqrtSwap(), states::randomUnitary({2, 2}, rng)}) {
    const auto basis = genmodel::unitaryEigenbasis(u.matrix());
    ASSERT_EQ(basis.size(), 4u);
    for (const auto& v : basis)
      EXPECT_LT(linalg::maxAbsDiff(u.matrix() * v.vector, std::polar(1.0, v.phase) * v.vector), 1e-9);
  }
}

TEST(Lemma1, HoldsOnRandomDynamics) {
  states::Sampler rng(44);
  for (int n = 0; n < 100; ++n) {
    const auto rho = states::randomState({2, 2}, 1 + n % 4, rng);
    const auto u = n % 5 == 0 ? gates::cnot() : states::randomUnitary({2, 2}, rng);
    const auto f = genmodel::forward(u, rho);
    for (const auto& r : genmodel::lemma1Check(u, rho, f.rhoSPrime)) EXPECT_TRUE(r.satisfied);
  }
}

TEST(Lemma1, ProductWindow) {
  // I/2 (x) (I/2 + m.sigma): tau = 1/4 - |m|^2 for Phi_3.
  const states::BlochVector m{0.1, 0.2, -0.1};
  const DensityMatrix rho(linalg::tensor(0.5 * ComplexMatrix::identity(2), states::fromBloch(m).matrix()), {2, 2});
  const auto w = genmodel::diagonalTargetWindow(rho, magic::magicVector(3));
  EXPECT_NEAR(w.tau, 0.25 - m.normSquared(), 1e-12);
  ASSERT_EQ(w.intervals.size(), 1u);
  EXPECT_NEAR(w.intervals[0].lo, 0.125 - 0.5 * m.normSquared(), 1e-12);
  EXPECT_NEAR(w.intervals[0].hi, 0.875 + 0.5 * m.normSquared(), 1e-12);
}

TEST(Lemma1, EdgeOfBlochBallWidensWindow) {
  // |m| = 1/2: tau = 0 and every p is allowed.
  const DensityMatrix rho(linalg::tensor(0.5 * ComplexMatrix::identity(2), states::fromBloch({0.25, -0.25, 0.25}).matrix()),
                          {2, 2});
  const auto w = genmodel::diagonalTargetWindow(rho, magic::magicVector(3));
  ASSERT_EQ(w.intervals.size(), 1u);
  EXPECT_NEAR(w.intervals[0].lo, 1.0 / 32, 1e-12);
  EXPECT_NEAR(w.intervals[0].hi, 31.0 / 32, 1e-12);
}

TEST(Lemma1, CorrelatedWindowCollapses) {
  ComplexMatrix joint = 0.25 * ComplexMatrix::identity(4);
  const double m[3] = {0.25, -0.25, 0.25};
  for (int k = 1; k <= 3; ++k) joint += m[k - 1] * linalg::tensor(states::pauli(k), states::pauli(k));
  const auto w = genmodel::diagonalTargetWindow(DensityMatrix(joint, {2, 2}), magic::magicVector(3));
  EXPECT_NEAR(w.tau, 1.0, 1e-12);
  ASSERT_EQ(w.intervals.size(), 1u);
  EXPECT_NEAR(w.intervals[0].lo, 0.5, 1e-12);
  EXPECT_NEAR(w.intervals[0].hi, 0.5, 1e-12);
}

TEST(PurityBound, DominatesRealizedPurity) {
  states::Sampler rng(45);
  for (int n = 0; n < 200; ++n) {
    const auto u = states::randomUnitary({2, 2}, rng);
    const auto rhoS = states::randomState({2}, 2, rng);
    const auto f = genmodel::forward(u, states::product(rhoS, DensityMatrix::maximallyMixed(2)));
    const auto b = genmodel::purityUpperBound(u, rhoS, 2);
    EXPECT_TRUE(b.invertible);
    EXPECT_LE(states::purity(f.rhoSPrime), b.bound + 1e-9);
    EXPECT_LE(b.bound, 1.0);
  }
}

TEST(PurityBound, SingularInputIsTrivial) {
  // A pure rho_S can stay pure under the identity, so no bound below 1 holds.
  const auto b = genmodel::purityUpperBound(gates::identity(), ket0(), 2);
  EXPECT_FALSE(b.invertible);
  EXPECT_EQ(b.bound, 1.0);
}

TEST(PurityBound, MaximallyMixedExample) {
  // rho_S = I/2, U = I: every eigenvector is a product, max sum lambda_k^2 = 1,
  // so the bound is 1 - (1/2 / 4)^2 = 63/64.
  const auto b = genmodel::purityUpperBound(gates::identity(), DensityMatrix::maximallyMixed(2), 2);
  EXPECT_NEAR(b.bound, 63.0 / 64.0, 1e-12);
}

TEST(Family, GenericAngleHasUniqueGenerator) {
  const double theta = kPi / 3, gamma = 0.7;
  const auto sol = genmodel::familyAnalyze(theta, gamma);
  EXPECT_FALSE(sol.degenerate);
  const auto gen = DensityMatrix::pure(sol.generator, {2, 2});
  const auto f = genmodel::forward(gates::family(theta, gamma), gen);
  EXPECT_LT(linalg::maxAbsDiff(f.rhoS.matrix(), DensityMatrix::maximallyMixed(2).matrix()), 1e-12);
  EXPECT_LT(linalg::maxAbsDiff(f.rhoSPrime.matrix(), ket0().matrix()), 1e-12);
  EXPECT_NEAR(genmodel::familyFidelity(sol, gen), 1.0, 1e-12);
  EXPECT_THROW(genmodel::familyMember(sol, 0.5), DomainError);
}

TEST(Family, DegenerateAngleMembersGenerate) {
  const double theta = kPi / 4;
  for (double gamma : {0.0, 0.7, 2.0}) {
    const auto sol = genmodel::familyAnalyze(theta, gamma);
    ASSERT_TRUE(sol.degenerate);
    const auto u = gates::family(theta, gamma);
    for (double p : {0.0, 0.3, 0.5, 1.0}) {
      for (double t : {0.0, std::sqrt(p * (1 - p))}) {
        const auto member = genmodel::familyMember(sol, p, t);
        const auto f = genmodel::forward(u, member);
        EXPECT_LT(linalg::maxAbsDiff(f.rhoS.matrix(), DensityMatrix::maximallyMixed(2).matrix()), 1e-10);
        EXPECT_LT(linalg::maxAbsDiff(f.rhoSPrime.matrix(), ket0().matrix()), 1e-10);
      }
    }
    EXPECT_TRUE(magic::pptSeparable(genmodel::familyMember(sol, 0.5)).separable);
    EXPECT_FALSE(magic::pptSeparable(genmodel::familyMember(sol, 0.3)).separable);
    EXPECT_THROW(genmodel::familyMember(sol, 0.5, 0.6), DomainError);
  }
}

}  // namespace
