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
#include <functional>

#include "openqdyn/gates.hpp"
#include "openqdyn/witness.hpp"
#include "oracle.hpp"

using namespace openqdyn;
using linalg::ComplexMatrix;
using states::DensityMatrix;

namespace {

TEST(Shift, Construction) {
  states::Sampler rng(61);
  for (std::size_t d = 2; d <= 4; ++d) {
    const auto rhoS = states::randomState({d}, d, rng);
    const auto w = witness::buildShift(rhoS, d);
    EXPECT_EQ(w.rank, d);
    EXPECT_TRUE(linalg::isUnitary(w.u0.matrix(), 1e-10));
    EXPECT_NEAR(w.threshold, std::sqrt(states::purity(rhoS)), 1e-12);
  }
  EXPECT_THROW(witness::buildShift(DensityMatrix::pure(ComplexMatrix::basisVector(2, 0), {2}), 2), DomainError);
  EXPECT_THROW(witness::buildShift(DensityMatrix::maximallyMixed(2), 3), std::invalid_argument);
}

TEST(Shift, MaximallyCorrelatedReachesOne) {
  const auto w = witness::buildShift(DensityMatrix::maximallyMixed(2), 2);
  const ComplexMatrix alpha(2, 2, {0.5, 0.5, 0.5, 0.5});
  const auto rho = witness::maxCorrState(alpha, w.eigenbasis);
  EXPECT_NEAR(witness::shiftSuccessProbability(w, rho), 1.0, 1e-12);
  // Marginal is rho_S.
  EXPECT_LT(linalg::maxAbsDiff(linalg::partialTrace(rho.matrix(), {2, 2}, linalg::Subsystem::kE),
                               DensityMatrix::maximallyMixed(2).matrix()),
            1e-12);
}

TEST(Shift, ProductInputsStayBelowThreshold) {
  states::Sampler rng(62);
  for (int n = 0; n < 300; ++n) {
    const std::size_t d = 2 + n % 3;
    const auto rhoS = states::randomState({d}, d, rng);
    const auto w = witness::buildShift(rhoS, d);
    const auto omega = states::randomState({d}, 1, rng);
    EXPECT_LE(witness::shiftSuccessProbability(w, states::product(rhoS, omega)), w.threshold + 1e-10);
  }
}

TEST(Shift, PartialTransposeSpectrum) {
  states::Sampler rng(63);
  for (std::size_t r = 1; r <= 4; ++r) {
    const auto a = states::randomState({r}, r, rng);
    const auto basis = states::randomUnitaryMatrix(r, rng);
    const auto rho = witness::maxCorrState(a.matrix(), basis);
    const auto pt = oracle::transposeE(oracle::toEigen(rho.matrix()), int(r), int(r));
    Eigen::VectorXd ref = oracle::eigenvaluesAscending(pt).reverse();
    const auto got = witness::pptSpectrumMaxCorr(a.matrix(), r);
    ASSERT_EQ(got.size(), std::size_t(ref.size()));
    for (std::size_t k = 0; k < got.size(); ++k) EXPECT_NEAR(got[k], ref(k), 1e-9);
    EXPECT_EQ(witness::maxCorrEntangled(a.matrix()), r > 1);
  }
  EXPECT_FALSE(witness::maxCorrEntangled(ComplexMatrix::diagonal(std::vector<double>{0.5, 0.5})));
}

TEST(Certify, StrictThreshold) {
  const auto mixed = DensityMatrix::maximallyMixed(2);
  const double t = std::sqrt(0.5);
  EXPECT_EQ(witness::theorem3Certify(mixed, t).verdict, witness::Verdict::kInconclusive);
  EXPECT_EQ(witness::theorem3Certify(mixed, t + 1e-6).verdict, witness::Verdict::kCorrelated);
  EXPECT_NEAR(witness::theorem3Certify(mixed, 0.9).threshold, t, 1e-15);
}

TEST(Certify, WilsonInterval) {
  const double z = 1.959963984540054;
  for (auto [k, n] : {std::pair<std::uint64_t, std::uint64_t>{50, 100}, {0, 10}, {10, 10}, {9990, 10000}}) {
    const double ph = double(k) / n;
    const double den = 1 + z * z / n;
    const double mid = (ph + z * z / (2.0 * n)) / den;
    const double half = z * std::sqrt(ph * (1 - ph) / n + z * z / (4.0 * n * n)) / den;
    const auto [lo, hi] = witness::wilsonInterval(k, n);
    EXPECT_NEAR(lo, mid - half, 1e-12);
    EXPECT_NEAR(hi, mid + half, 1e-12);
  }
}

TEST(Protocol, SeededAndConsistent) {
  const auto w = witness::buildShift(DensityMatrix::maximallyMixed(2), 2);
  const ComplexMatrix alpha(2, 2, {0.5, 0.5, 0.5, 0.5});
  const auto corr = witness::maxCorrState(alpha, w.eigenbasis);
  const auto a = witness::simulateProtocol(corr, 1000, 3), b = witness::simulateProtocol(corr, 1000, 3);
  EXPECT_EQ(a.count0, b.count0);
  EXPECT_EQ(a.count0, 1000u);
  EXPECT_EQ(a.verdict, witness::Verdict::kCorrelated);
  const auto prod = states::product(DensityMatrix::maximallyMixed(2), DensityMatrix::maximallyMixed(2));
  const auto p = witness::simulateProtocol(prod, 10000, 4);
  EXPECT_NEAR(p.exact, 0.5, 1e-12);
  EXPECT_NEAR(p.estimate, 0.5, 0.03);
  EXPECT_EQ(p.verdict, witness::Verdict::kInconclusive);
  EXPECT_LE(p.ciLow, p.estimate);
  EXPECT_GE(p.ciHigh, p.estimate);
}

TEST(Compatibility, MaximallyMixedForcesMaximalCorrelation) {
  const auto mixed = DensityMatrix::maximallyMixed(2);
  const auto w = witness::buildShift(mixed, 2);
  const auto rep = witness::compatibleStates(w, mixed);
  EXPECT_EQ(rep.solve.status, genmodel::Status::kFeasible);
  EXPECT_TRUE(rep.maximallyCorrelated);
  EXPECT_NEAR(rep.maxCorrWeight, 1.0, 1e-6);
}

TEST(Shift, BasisMismatchSweep) {
  states::Sampler rng(64);
  const auto rhoS = states::randomState({3}, 3, rng);
  const auto w = witness::buildShift(rhoS, 3);
  const std::vector<double> angles = {0.0, 0.05, 0.4};
  const auto sweep = witness::basisMismatchSweep(rhoS, angles);
  ASSERT_EQ(sweep.size(), angles.size());
  // Recompute with Eigen from the rotated basis.
  const auto psi = oracle::toEigen(w.eigenbasis);
  Eigen::VectorXcd chi = Eigen::VectorXcd::Zero(9);
  for (int i = 0; i < 3; ++i) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(3);
    e(i) = 1.0;
    chi += std::sqrt(w.weights[i]) * oracle::kron(psi.col(i), e);
  }
  for (std::size_t n = 0; n < angles.size(); ++n) {
    oracle::Mat est = psi;
    est.col(0) = std::cos(angles[n]) * psi.col(0) + std::sin(angles[n]) * psi.col(1);
    est.col(1) = std::cos(angles[n]) * psi.col(1) - std::sin(angles[n]) * psi.col(0);
    const oracle::Mat u = oracle::toEigen(gates::shift(3).matrix()) * oracle::kron(est.adjoint(), oracle::Mat::Identity(3, 3));
    const Eigen::VectorXcd out = u * chi;
    double p0 = 0.0;
    for (int k = 0; k < 3; ++k) p0 += std::norm(out(k));
    EXPECT_NEAR(sweep[n].correlatedSuccess, p0, 1e-10);
  }
  EXPECT_NEAR(sweep[0].correlatedSuccess, 1.0, 1e-10);
  EXPECT_TRUE(sweep[0].productBelowThreshold);
}

}  // namespace
