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

#include "openqdyn/witness.hpp"

#include <algorithm>
#include <cmath>

#include "openqdyn/gates.hpp"

namespace openqdyn::witness {

using linalg::BipartiteDims;
using linalg::Subsystem;

namespace {

constexpr double kWilsonZ = 1.959963984540054;

// Eigenbasis with each degenerate eigenspace re-spanned by Gram-Schmidt on
// the computational basis vectors projected into it.
ComplexMatrix canonicalEigenbasis(const linalg::HermitianSpectrum& s, double tol) {
  const std::size_t n = s.eigenvalues.size();
  ComplexMatrix out(n, n);
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && s.eigenvalues[start] - s.eigenvalues[end] <= tol) ++end;
    ComplexMatrix block(n, end - start);
    for (std::size_t k = start; k < end; ++k) block.setColumn(k - start, s.eigenvectors.column(k));
    const ComplexMatrix proj = block * block.adjoint();
    const ComplexMatrix spanned = linalg::orthonormalRange(proj, 1e-8);
    for (std::size_t k = 0; k < end - start; ++k) out.setColumn(start + k, spanned.column(k));
    start = end;
  }
  return out;
}

}  // namespace

ShiftWitness buildShift(const DensityMatrix& rhoS, std::size_t d, double rankTol) {
  if (rhoS.dim() != d) throw DimensionError("buildShift: d must equal the dimension of rho_S");
  const auto spec = linalg::hermitianEig(rhoS.matrix());
  ShiftWitness w;
  w.d = d;
  w.weights = spec.eigenvalues;
  for (double& l : w.weights) l = std::max(l, 0.0);
  w.rank = static_cast<std::size_t>(
      std::count_if(w.weights.begin(), w.weights.end(), [&](double l) { return l > rankTol; }));
  if (w.rank < 2) throw DomainError("buildShift: rho_S must be genuinely mixed (rank >= 2)");
  w.eigenbasis = canonicalEigenbasis(spec, 1e-9);
  const ComplexMatrix psiDagger = linalg::tensor(w.eigenbasis.adjoint(), ComplexMatrix::identity(d));
  w.u0 = UnitaryGate(gates::shift(d).matrix() * psiDagger, BipartiteDims{d, d}, "shift");
  w.threshold = std::sqrt(states::purity(rhoS));
  return w;
}

DensityMatrix maxCorrState(const ComplexMatrix& alpha, const ComplexMatrix& eigenbasis) {
  const std::size_t d = eigenbasis.rows();
  if (!alpha.isSquare() || alpha.rows() > d) throw DimensionError("maxCorrState: alpha larger than d");
  ComplexMatrix m(d * d, d * d);
  std::vector<ComplexMatrix> kets;
  for (std::size_t i = 0; i < alpha.rows(); ++i)
    kets.push_back(linalg::tensor(eigenbasis.column(i), ComplexMatrix::basisVector(d, i)));
  for (std::size_t i = 0; i < alpha.rows(); ++i)
    for (std::size_t j = 0; j < alpha.rows(); ++j) m += alpha(i, j) * (kets[i] * kets[j].adjoint());
  return DensityMatrix(m, {d, d});
}

std::vector<double> pptSpectrumMaxCorr(const ComplexMatrix& alpha, std::size_t d) {
  const DensityMatrix check(alpha);  // validates PSD and unit trace
  const std::size_t r = alpha.rows();
  if (d == 0) d = r;
  if (d < r) throw DimensionError("pptSpectrumMaxCorr: d smaller than alpha");
  std::vector<double> out;
  for (std::size_t i = 0; i < r; ++i) out.push_back(alpha(i, i).real());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j) {
      out.push_back(std::abs(alpha(i, j)));
      out.push_back(-std::abs(alpha(i, j)));
    }
  out.resize(d * d, 0.0);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

bool maxCorrEntangled(const ComplexMatrix& alpha, double tol) {
  for (std::size_t i = 0; i < alpha.rows(); ++i)
    for (std::size_t j = 0; j < alpha.cols(); ++j)
      if (i != j && std::abs(alpha(i, j)) > tol) return true;
  return false;
}

CompatibilityReport compatibleStates(const ShiftWitness& w, const DensityMatrix& rhoS,
                                     const genmodel::SolverOptions& opt) {
  CompatibilityReport rep;
  rep.structure =
      "rho_SE = sum_ij alpha_ij |Psi_i, i><Psi_j, j| with alpha_ii the eigenvalues of rho_S; "
      "entangled whenever some alpha_ij (i != j) is nonzero";
  const DensityMatrix target = DensityMatrix::pure(ComplexMatrix::basisVector(w.d, 0), {w.d});
  rep.solve = genmodel::solveFeasibility({w.u0, rhoS, target, genmodel::StateClass::kAny}, opt);
  if (!rep.solve.witness) return rep;
  const ComplexMatrix& rho = rep.solve.witness->matrix();
  std::vector<ComplexMatrix> kets;
  for (std::size_t i = 0; i < w.d; ++i)
    kets.push_back(linalg::tensor(w.eigenbasis.column(i), ComplexMatrix::basisVector(w.d, i)));
  rep.alpha = ComplexMatrix(w.d, w.d);
  for (std::size_t i = 0; i < w.d; ++i)
    for (std::size_t j = 0; j < w.d; ++j) rep.alpha(i, j) = linalg::inner(kets[i], rho * kets[j]);
  rep.maxCorrWeight = rep.alpha.trace().real();
  rep.maximallyCorrelated = rep.maxCorrWeight >= 1.0 - 1e-6;
  return rep;
}

std::string toString(Verdict v) { return v == Verdict::kCorrelated ? "CORRELATED" : "INCONCLUSIVE"; }

CertifyResult theorem3Certify(const DensityMatrix& rhoS, double observed, double statTol) {
  if (!(observed >= 0.0 && observed <= 1.0)) throw DomainError("theorem3Certify: observed outside [0, 1]");
  CertifyResult r;
  r.threshold = std::sqrt(states::purity(rhoS));
  r.observed = observed;
  r.verdict = observed > r.threshold + statTol ? Verdict::kCorrelated : Verdict::kInconclusive;
  return r;
}

double shiftSuccessProbability(const ShiftWitness& w, const DensityMatrix& rhoSE) {
  const ComplexMatrix out =
      linalg::partialTrace(w.u0.conjugate(rhoSE.matrix()), BipartiteDims{w.d, w.d}, Subsystem::kE);
  return std::clamp(out(0, 0).real(), 0.0, 1.0);
}

std::pair<double, double> wilsonInterval(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) throw DomainError("wilsonInterval: no trials");
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = kWilsonZ * kWilsonZ;
  const double denom = 1.0 + z2 / n;
  const double centre = (phat + z2 / (2.0 * n)) / denom;
  const double half = kWilsonZ * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

ProtocolTranscript simulateProtocol(const DensityMatrix& hiddenSE, std::uint64_t shots, std::uint64_t seed) {
  if (shots < 1) throw DomainError("simulateProtocol: shots must be at least 1");
  if (!hiddenSE.isBipartite() || hiddenSE.bipartite().dS != hiddenSE.bipartite().dE) {
    throw DimensionError("simulateProtocol: expected d_S = d_E");
  }
  const std::size_t d = hiddenSE.bipartite().dS;
  const DensityMatrix rhoS = states::reduce(hiddenSE, Subsystem::kS);
  const ShiftWitness w = buildShift(rhoS, d);
  ProtocolTranscript t;
  t.threshold = w.threshold;
  t.shots = shots;
  t.seed = seed;
  t.exact = shiftSuccessProbability(w, hiddenSE);
  states::Sampler rng(seed);
  for (std::uint64_t s = 0; s < shots; ++s)
    if (rng.uniform() < t.exact) ++t.count0;
  t.estimate = static_cast<double>(t.count0) / static_cast<double>(shots);
  std::tie(t.ciLow, t.ciHigh) = wilsonInterval(t.count0, shots);
  t.verdict = t.ciLow > t.threshold ? Verdict::kCorrelated : Verdict::kInconclusive;
  return t;
}

std::vector<MismatchPoint> basisMismatchSweep(const DensityMatrix& rhoS, const std::vector<double>& angles,
                                              double statTol) {
  const std::size_t d = rhoS.dim();
  const ShiftWitness truth = buildShift(rhoS, d);
  ComplexMatrix alpha(truth.rank, truth.rank);
  for (std::size_t i = 0; i < truth.rank; ++i)
    for (std::size_t j = 0; j < truth.rank; ++j) alpha(i, j) = std::sqrt(truth.weights[i] * truth.weights[j]);
  const DensityMatrix correlated = maxCorrState(alpha, truth.eigenbasis);
  const ComplexMatrix p0 = linalg::tensor(linalg::projector(ComplexMatrix::basisVector(d, 0)), ComplexMatrix::identity(d));
  const ComplexMatrix rhoI = linalg::tensor(rhoS.matrix(), ComplexMatrix::identity(d));

  std::vector<MismatchPoint> out;
  for (double angle : angles) {
    ShiftWitness w = truth;
    const ComplexMatrix a = truth.eigenbasis.column(0), b = truth.eigenbasis.column(1);
    w.eigenbasis.setColumn(0, std::cos(angle) * a + std::sin(angle) * b);
    w.eigenbasis.setColumn(1, std::cos(angle) * b - std::sin(angle) * a);
    const ComplexMatrix psiDagger = linalg::tensor(w.eigenbasis.adjoint(), ComplexMatrix::identity(d));
    w.u0 = UnitaryGate(gates::shift(d).matrix() * psiDagger, BipartiteDims{d, d}, "shift");
    MismatchPoint pt;
    pt.angle = angle;
    pt.threshold = truth.threshold;
    pt.correlatedSuccess = shiftSuccessProbability(w, correlated);
    // Success is linear in omega: <omega, tr_S[(rho_S (x) I) U0^dag P0 U0]>.
    const ComplexMatrix m = linalg::partialTrace(rhoI * w.u0.adjoint().conjugate(p0), BipartiteDims{d, d}, Subsystem::kS);
    pt.productMax = linalg::hermitianEig(linalg::hermitianPart(m), 1e-6).eigenvalues.front();
    pt.certifies = pt.correlatedSuccess > pt.threshold + statTol;
    pt.productBelowThreshold = pt.productMax <= pt.threshold + statTol;
    out.push_back(pt);
  }
  return out;
}

}  // namespace openqdyn::witness
