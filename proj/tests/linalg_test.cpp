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

#include <algorithm>
#include <cmath>

#include "openqdyn/linalg.hpp"
#include "openqdyn/states.hpp"
#include "oracle.hpp"

using namespace openqdyn;
using linalg::ComplexMatrix;

namespace {

ComplexMatrix randomMatrix(std::size_t r, std::size_t c, states::Sampler& rng) {
  ComplexMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rng.complexGaussian();
  return m;
}

ComplexMatrix randomHermitian(std::size_t n, states::Sampler& rng) {
  const ComplexMatrix a = randomMatrix(n, n, rng);
  return 0.5 * (a + a.adjoint());
}

TEST(Linalg, ProductsMatchEigen) {
  states::Sampler rng(11);
  for (int n = 0; n < 20; ++n) {
    const auto a = randomMatrix(3, 4, rng), b = randomMatrix(4, 2, rng);
    EXPECT_LT(oracle::maxAbsDiff(oracle::toEigen(a * b), oracle::toEigen(a) * oracle::toEigen(b)), 1e-12);
    EXPECT_LT(oracle::maxAbsDiff(oracle::toEigen(linalg::tensor(a, b)), oracle::kron(oracle::toEigen(a), oracle::toEigen(b))),
              1e-12);
  }
}

TEST(Linalg, ShapeMismatchThrows) {
  EXPECT_THROW(ComplexMatrix(2, 3) * ComplexMatrix(2, 3), DimensionError);
  EXPECT_THROW(ComplexMatrix(2, 2) + ComplexMatrix(3, 3), DimensionError);
  EXPECT_THROW(ComplexMatrix(2, 2, {1.0, 2.0, 3.0}), DimensionError);
  EXPECT_THROW(ComplexMatrix(1, 1, {Complex(std::nan(""), 0.0)}), DomainError);
}

TEST(Linalg, HermitianEigMatchesEigen) {
  states::Sampler rng(12);
  for (std::size_t n = 1; n <= 8; ++n) {
    const auto h = randomHermitian(n, rng);
    const auto s = linalg::hermitianEig(h);
    const auto ref = oracle::eigenvaluesAscending(oracle::toEigen(h));
    ASSERT_EQ(s.eigenvalues.size(), n);
    EXPECT_TRUE(std::is_sorted(s.eigenvalues.rbegin(), s.eigenvalues.rend()));
    for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(s.eigenvalues[k], ref(n - 1 - k), 1e-10);
    const auto v = oracle::toEigen(s.eigenvectors);
    EXPECT_LT(oracle::maxAbsDiff(v.adjoint() * v, oracle::Mat::Identity(n, n)), 1e-10);
    for (std::size_t k = 0; k < n; ++k)
      EXPECT_LT((oracle::toEigen(h) * v.col(k) - s.eigenvalues[k] * v.col(k)).norm(), 1e-9);
  }
}

TEST(Linalg, DegenerateSpectrum) {
  const auto s = linalg::hermitianEig(ComplexMatrix::diagonal(std::vector<double>{1.0, 1.0, 0.0, 0.0}));
  EXPECT_NEAR(s.eigenvalues[0], 1.0, 1e-14);
  EXPECT_NEAR(s.eigenvalues[3], 0.0, 1e-14);
}

TEST(Linalg, NonHermitianInputIsRejected) {
  ComplexMatrix m = ComplexMatrix::identity(2);
  m(0, 1) = 1.0;
  EXPECT_THROW(linalg::hermitianEig(m), DomainError);
}

TEST(Linalg, SingularValuesAndTraceNorm) {
  states::Sampler rng(13);
  for (int n = 0; n < 20; ++n) {
    const auto a = randomMatrix(4, 4, rng);
    const auto sv = linalg::singularValues(a);
    const Eigen::VectorXd ref = Eigen::JacobiSVD<oracle::Mat>(oracle::toEigen(a)).singularValues();
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(sv[k], ref(k), 1e-10);
    const auto h = randomHermitian(4, rng);
    EXPECT_NEAR(linalg::traceNorm(h), oracle::traceNorm(oracle::toEigen(h)), 1e-10);
  }
}

TEST(Linalg, PartialOperationsMatchOracle) {
  states::Sampler rng(14);
  for (auto [dS, dE] : {std::pair<int, int>{2, 2}, {2, 3}, {3, 2}}) {
    const auto m = randomMatrix(dS * dE, dS * dE, rng);
    const auto em = oracle::toEigen(m);
    const linalg::BipartiteDims dims{std::size_t(dS), std::size_t(dE)};
    EXPECT_LT(oracle::maxAbsDiff(oracle::toEigen(linalg::partialTrace(m, dims, linalg::Subsystem::kE)),
                                 oracle::traceE(em, dS, dE)),
              1e-12);
    EXPECT_LT(oracle::maxAbsDiff(oracle::toEigen(linalg::partialTrace(m, dims, linalg::Subsystem::kS)),
                                 oracle::traceS(em, dS, dE)),
              1e-12);
    EXPECT_LT(oracle::maxAbsDiff(oracle::toEigen(linalg::partialTranspose(m, dims)), oracle::transposeE(em, dS, dE)),
              1e-12);
  }
}

TEST(Linalg, DeterminantMatchesEigen) {
  states::Sampler rng(15);
  for (std::size_t n = 1; n <= 5; ++n) {
    const auto a = randomMatrix(n, n, rng);
    EXPECT_LT(std::abs(linalg::determinant(a) - oracle::toEigen(a).determinant()), 1e-9);
  }
}

TEST(Linalg, PsdProjectionIsMetricProjection) {
  states::Sampler rng(16);
  for (int n = 0; n < 20; ++n) {
    const auto h = randomHermitian(4, rng);
    const auto p = linalg::projectPsd(h);
    EXPECT_GE(oracle::eigenvaluesAscending(oracle::toEigen(p))(0), -1e-12);
    // h - p is negative semidefinite and orthogonal to p.
    EXPECT_LE(oracle::eigenvaluesAscending(oracle::toEigen(h - p))(3), 1e-12);
    EXPECT_NEAR(std::abs(linalg::hilbertSchmidt(h - p, p)), 0.0, 1e-10);
  }
}

TEST(Linalg, OrthonormalRange) {
  states::Sampler rng(17);
  const auto a = randomMatrix(5, 2, rng);
  ComplexMatrix cols(5, 3);
  cols.setColumn(0, a.column(0));
  cols.setColumn(1, a.column(1));
  cols.setColumn(2, a.column(0) + 2.0 * a.column(1));
  const auto q = linalg::orthonormalRange(cols);
  ASSERT_EQ(q.cols(), 2u);
  EXPECT_LT(linalg::maxAbsDiff(q.adjoint() * q, ComplexMatrix::identity(2)), 1e-12);
}

TEST(Linalg, UnitaryAndHermitianPredicates) {
  states::Sampler rng(18);
  EXPECT_TRUE(linalg::isUnitary(states::randomUnitaryMatrix(4, rng), 1e-12));
  EXPECT_FALSE(linalg::isUnitary(2.0 * ComplexMatrix::identity(2), 1e-9));
  EXPECT_TRUE(linalg::isHermitian(randomHermitian(3, rng), 1e-14));
}

}  // namespace
