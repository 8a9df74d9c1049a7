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

#include "openqdyn/states.hpp"
#include "oracle.hpp"

using namespace openqdyn;
using linalg::ComplexMatrix;
using states::DensityMatrix;

namespace {

TEST(States, ValidationRejectsNonStates) {
  EXPECT_THROW(DensityMatrix(ComplexMatrix::identity(2)), DomainError);  // trace 2
  EXPECT_THROW(DensityMatrix(ComplexMatrix::diagonal(std::vector<double>{1.5, -0.5})), DomainError);
  EXPECT_THROW(DensityMatrix(0.25 * ComplexMatrix::identity(4), {2, 3}), DimensionError);
  EXPECT_NO_THROW(DensityMatrix(0.25 * ComplexMatrix::identity(4), {2, 2}));
}

TEST(States, BlochRoundTripAndPurity) {
  states::Sampler rng(21);
  for (int n = 0; n < 50; ++n) {
    states::BlochVector m{0.3 * rng.uniform() - 0.15, 0.3 * rng.uniform() - 0.15, 0.3 * rng.uniform() - 0.15};
    const auto rho = states::fromBloch(m);
    const auto back = states::toBloch(rho);
    EXPECT_NEAR(back.m1, m.m1, 1e-14);
    EXPECT_NEAR(back.m2, m.m2, 1e-14);
    EXPECT_NEAR(back.m3, m.m3, 1e-14);
    // I/2 + m.sigma has eigenvalues 1/2 +- |m|.
    EXPECT_NEAR(states::purity(rho), 0.5 + 2.0 * m.normSquared(), 1e-14);
  }
  EXPECT_THROW(states::fromBloch({0.5, 0.5, 0.0}), std::invalid_argument);
}

TEST(States, RandomStatesHaveRequestedRank) {
  states::Sampler rng(22);
  for (std::size_t r = 1; r <= 4; ++r) {
    const auto rho = states::randomState({2, 2}, r, rng);
    EXPECT_EQ(states::rankEps(rho), r);
    EXPECT_NEAR(rho.matrix().trace().real(), 1.0, 1e-12);
  }
}

TEST(States, ReductionAndProduct) {
  states::Sampler rng(23);
  const auto a = states::randomState({2}, 2, rng), b = states::randomState({3}, 2, rng);
  const auto ab = states::product(a, b);
  EXPECT_EQ(ab.dims(), (std::vector<std::size_t>{2, 3}));
  EXPECT_LT(linalg::maxAbsDiff(states::reduce(ab, linalg::Subsystem::kS).matrix(), a.matrix()), 1e-14);
  EXPECT_LT(linalg::maxAbsDiff(states::reduce(ab, linalg::Subsystem::kE).matrix(), b.matrix()), 1e-14);
}

TEST(States, TraceDistanceMatchesOracle) {
  states::Sampler rng(24);
  const auto a = states::randomState({2, 2}, 3, rng), b = states::randomState({2, 2}, 2, rng);
  const double ref = 0.5 * oracle::traceNorm(oracle::toEigen(a.matrix()) - oracle::toEigen(b.matrix()));
  EXPECT_NEAR(states::traceDistance(a, b), ref, 1e-10);
  EXPECT_NEAR(states::traceNormDistance(a.matrix(), b.matrix()), 2.0 * ref, 1e-10);
}

TEST(States, SpectralDecompositionReconstructs) {
  states::Sampler rng(25);
  const auto rho = states::randomState({3}, 3, rng);
  const auto sd = states::spectralDecomposition(rho);
  ComplexMatrix sum(3, 3);
  for (std::size_t k = 0; k < 3; ++k) sum += Complex(sd.weights[k]) * linalg::projector(sd.states.column(k));
  EXPECT_LT(linalg::maxAbsDiff(sum, rho.matrix()), 1e-12);
}

TEST(States, GatesMustBeUnitary) {
  EXPECT_THROW(states::UnitaryGate(2.0 * ComplexMatrix::identity(4), {2, 2}), DomainError);
  EXPECT_THROW(states::UnitaryGate(ComplexMatrix::identity(4), {2, 3}), DimensionError);
}

TEST(States, SamplerIsDeterministic) {
  states::Sampler a(99), b(99);
  for (int n = 0; n < 10; ++n) EXPECT_EQ(a.next(), b.next());
  const auto u1 = states::randomUnitary(4, 7), u2 = states::randomUnitary(4, 7);
  EXPECT_EQ(linalg::maxAbsDiff(u1.matrix(), u2.matrix()), 0.0);
}

TEST(States, PauliAlgebra) {
  const Complex i(0.0, 1.0);
  EXPECT_LT(linalg::maxAbsDiff(states::pauli(1) * states::pauli(2), i * states::pauli(3)), 1e-15);
}

}  // namespace
