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

#include "openqdyn/magic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>
#include <utility>
#include <vector>

#include "openqdyn/optimize.hpp"

namespace openqdyn::magic {

using linalg::BipartiteDims;
using linalg::Subsystem;
using linalg::tensor;

namespace {

constexpr double kTwoPi = 2.0 * kPi;
const BipartiteDims kQubits{2, 2};

double wrapTwoPi(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

// Distance of x to the nearest multiple of `period`.
double latticeDistance(double x, double period) {
  return std::abs(x - period * std::round(x / period));
}

void requireQubits(const UnitaryGate& u, const char* op) {
  if (!(u.dims() == kQubits)) throw DimensionError(std::string(op) + ": expected a two-qubit gate");
}

Complex det2(const ComplexMatrix& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

ComplexMatrix block(const ComplexMatrix& m, std::size_t p, std::size_t q) {
  ComplexMatrix b(2, 2);
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t l = 0; l < 2; ++l) b(k, l) = m(2 * p + k, 2 * q + l);
  return b;
}

// Splits a 4x4 product operator into A (x) B with det B = 1.
std::pair<ComplexMatrix, ComplexMatrix> kroneckerFactors(const ComplexMatrix& l) {
  std::size_t bp = 0;
  std::size_t bq = 0;
  double best = -1.0;
  for (std::size_t p = 0; p < 2; ++p)
    for (std::size_t q = 0; q < 2; ++q) {
      const double nrm = linalg::frobeniusNorm(block(l, p, q));
      if (nrm > best + 1e-12) {
        best = nrm;
        bp = p;
        bq = q;
      }
    }
  ComplexMatrix b = block(l, bp, bq);
  b *= 1.0 / std::sqrt(det2(b));
  ComplexMatrix a(2, 2);
  const ComplexMatrix bDag = b.adjoint();
  for (std::size_t p = 0; p < 2; ++p)
    for (std::size_t q = 0; q < 2; ++q) a(p, q) = 0.5 * (bDag * block(l, p, q)).trace();
  return {a, b};
}

// Pure S factor of a (near-)product 4-vector and the matching E factor.
std::pair<ComplexMatrix, ComplexMatrix> productFactors(const ComplexMatrix& p) {
  const ComplexMatrix rhoS = linalg::partialTrace(linalg::projector(p), kQubits, Subsystem::kE);
  const ComplexMatrix s = linalg::hermitianEig(rhoS, 1e-6).eigenvectors.column(0);
  ComplexMatrix f(2, 1);
  for (std::size_t k = 0; k < 2; ++k) f[k] = std::conj(s[0]) * p[k] + std::conj(s[1]) * p[2 + k];
  return {s, f};
}

ComplexMatrix perpendicular(const ComplexMatrix& v) {
  ComplexMatrix w(2, 1);
  w[0] = -std::conj(v[1]);
  w[1] = std::conj(v[0]);
  return w;
}

// (I (x) <e|) applied to a 4-vector.
ComplexMatrix contractEnvironment(const ComplexMatrix& v, const ComplexMatrix& e) {
  ComplexMatrix out(2, 1);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t k = 0; k < 2; ++k) out[i] += std::conj(e[k]) * v[2 * i + k];
  return out;
}

ComplexMatrix blochKet(double theta, double phi) {
  ComplexMatrix e(2, 1);
  e[0] = std::cos(0.5 * theta);
  e[1] = std::polar(std::sin(0.5 * theta), phi);
  return e;
}

}  // namespace

const ComplexMatrix& magicBasis() {
  static const ComplexMatrix kM = [] {
    const double r = 1.0 / std::sqrt(2.0);
    const Complex mi(0.0, -r);
    return ComplexMatrix(4, 4, {0.0, mi, r, 0.0,   //
                                r, 0.0, 0.0, mi,   //
                                -r, 0.0, 0.0, mi,  //
                                0.0, -mi, r, 0.0});
  }();
  return kM;
}

ComplexMatrix magicVector(int k) {
  if (k < 1 || k > 4) throw DomainError("magicVector: index must be 1..4");
  return magicBasis().column(static_cast<std::size_t>(k - 1));
}

ComplexMatrix toMagic(const ComplexMatrix& m) {
  if (m.rows() != 4 || m.cols() != 4) throw DimensionError("toMagic: expected a 4x4 matrix");
  return magicBasis().adjoint() * m * magicBasis();
}

ComplexMatrix fromMagic(const ComplexMatrix& m) {
  if (m.rows() != 4 || m.cols() != 4) throw DimensionError("fromMagic: expected a 4x4 matrix");
  return magicBasis() * m * magicBasis().adjoint();
}

double concurrencePure(const ComplexMatrix& ket) {
  if (ket.rows() != 4 || ket.cols() != 1) throw DimensionError("concurrencePure: expected a 4-vector");
  if (std::abs(linalg::vectorNorm(ket) - 1.0) > 1e-9) {
    throw DomainError("concurrencePure: state is not normalized");
  }
  const ComplexMatrix c = magicBasis().adjoint() * ket;
  Complex sum = 0.0;
  for (std::size_t i = 0; i < 4; ++i) sum += c[i] * c[i];
  return std::abs(sum);
}

PptResult pptSeparable(const DensityMatrix& rho, double tol) {
  if (!rho.isBipartite() || !(rho.bipartite() == kQubits)) {
    throw DimensionError("pptSeparable: expected a two-qubit state");
  }
  const auto spec = linalg::hermitianEig(linalg::partialTranspose(rho.matrix(), kQubits));
  PptResult r;
  r.minEigenvalue = spec.eigenvalues.back();
  r.separable = r.minEigenvalue >= -tol;
  return r;
}

WeylCoordinates weylFromPhases(const std::array<double, 4>& l) {
  std::array<double, 3> v = {(l[0] + l[1] - l[2] - l[3]) / 4.0, (l[0] - l[1] + l[2] - l[3]) / 4.0,
                             (l[0] - l[1] - l[2] + l[3]) / 4.0};
  const double quarter = kPi / 2.0;
  for (double& x : v) x -= quarter * std::round(x / quarter);
  std::stable_sort(v.begin(), v.end(),
                   [](double x, double y) { return std::abs(x) > std::abs(y); });
  // Pair sign flips are local; make the two largest non-negative.
  if (v[0] < 0.0 && v[1] < 0.0) {
    v[0] = -v[0];
    v[1] = -v[1];
  } else if (v[0] < 0.0) {
    v[0] = -v[0];
    v[2] = -v[2];
  } else if (v[1] < 0.0) {
    v[1] = -v[1];
    v[2] = -v[2];
  }
  if (kPi / 4.0 - v[0] <= 1e-12 || v[1] <= 1e-12) v[2] = std::abs(v[2]);
  return WeylCoordinates{v[0], v[1], v[2]};
}

double weylDistance(const WeylCoordinates& x, const WeylCoordinates& y) {
  const double direct =
      std::max({std::abs(x.a - y.a), std::abs(x.b - y.b), std::abs(x.c - y.c)});
  const double face = std::min({kPi / 4.0 - x.a, x.b, kPi / 4.0 - y.a, y.b});
  if (face > 1e-6) return direct;
  const double flipped =
      std::max({std::abs(x.a - y.a), std::abs(x.b - y.b), std::abs(x.c + y.c)});
  return std::min(direct, flipped);
}

bool phasesEquivalent(const std::array<double, 4>& x, const std::array<double, 4>& y, double tol) {
  return weylDistance(weylFromPhases(x), weylFromPhases(y)) <= tol;
}

ComplexMatrix diagonalFromPhases(const std::array<double, 4>& lambda) {
  std::vector<Complex> d(4);
  for (std::size_t j = 0; j < 4; ++j) d[j] = std::polar(1.0, -lambda[j]);
  return fromMagic(ComplexMatrix::diagonal(d));
}

ComplexMatrix KrausCiracForm::diagonalPart() const { return diagonalFromPhases(phases); }

ComplexMatrix KrausCiracForm::reconstruct() const {
  return globalPhase * (tensor(leftS, leftE) * diagonalPart() * tensor(rightS, rightE));
}

KrausCiracForm krausCirac(const UnitaryGate& u) {
  requireQubits(u, "krausCirac");
  const ComplexMatrix& target = u.matrix();
  Complex g = std::pow(linalg::determinant(target), 0.25);
  g /= std::abs(g);
  const ComplexMatrix up = toMagic((1.0 / g) * target);
  const ComplexMatrix sym = up.transpose() * up;

  // Fixed mixing angles for a * Re(S) + b * Im(S); later ones only matter when
  // an earlier combination merges distinct eigenvalues of S.
  constexpr std::array<double, 8> kAngles = {0.6180339887, 2.2360679775, 1.4142135624,
                                             0.3819660113, 2.7182818285, 1.7320508076,
                                             0.9, 3.0};
  KrausCiracForm best;
  best.reconstructionError = std::numeric_limits<double>::infinity();
  for (std::size_t attempt = 0; attempt < kAngles.size(); ++attempt) {
    const double ca = std::cos(kAngles[attempt]);
    const double sa = std::sin(kAngles[attempt]);
    ComplexMatrix mix(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        const Complex sij = 0.5 * (sym(i, j) + sym(j, i));
        mix(i, j) = ca * sij.real() + sa * sij.imag();
      }
    const auto spec = linalg::hermitianEig(mix, 1e-6);
    ComplexMatrix p(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) p(i, j) = spec.eigenvectors(i, j).real();
    if (linalg::determinant(p).real() < 0.0)
      for (std::size_t i = 0; i < 4; ++i) p(i, 0) = -p(i, 0);

    const ComplexMatrix d = p.transpose() * sym * p;
    double off = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        if (i != j) off = std::max(off, std::abs(d(i, j)));
    if (off > 1e-9) continue;

    std::vector<Complex> delta(4);
    for (std::size_t j = 0; j < 4; ++j) {
      delta[j] = std::sqrt(d(j, j));
      delta[j] /= std::abs(delta[j]);
    }
    ComplexMatrix o1 = up * p;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) o1(i, j) /= delta[j];
    if (linalg::determinant(o1).real() < 0.0) {
      delta[0] = -delta[0];
      for (std::size_t i = 0; i < 4; ++i) o1(i, 0) = -o1(i, 0);
    }
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) o1(i, j) = o1(i, j).real();

    KrausCiracForm form;
    form.attempts = static_cast<int>(attempt) + 1;
    form.globalPhase = g;
    for (std::size_t j = 0; j < 4; ++j) form.phases[j] = wrapTwoPi(-std::arg(delta[j]));
    std::tie(form.leftS, form.leftE) = kroneckerFactors(fromMagic(o1));
    std::tie(form.rightS, form.rightE) = kroneckerFactors(fromMagic(p.transpose()));
    form.weyl = weylFromPhases(form.phases);
    form.reconstructionError = linalg::maxAbsDiff(form.reconstruct(), target);
    if (form.reconstructionError < best.reconstructionError) best = form;
    if (form.reconstructionError <= 1e-10) break;
  }
  if (!std::isfinite(best.reconstructionError)) {
    throw DomainError("krausCirac: no real orthogonal eigenbasis found");
  }
  return best;
}

std::string toString(UnitaryClass c) {
  switch (c) {
    case UnitaryClass::kLU:
      return "LU";
    case UnitaryClass::kSWAP:
      return "SWAP";
    case UnitaryClass::kUC2:
      return "UC2";
    case UnitaryClass::kGENERIC:
      return "GENERIC";
  }
  return "GENERIC";
}

bool proposition1Holds(const KrausCiracForm& form, double tol) {
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j)
      if (latticeDistance(form.phases[i] - form.phases[j], kPi) > tol) return false;
  return true;
}

Classification classify(const UnitaryGate& u, double tol) {
  requireQubits(u, "classify");
  Classification out;
  out.tolerance = tol;
  out.form = krausCirac(u);
  const auto& l = out.form.phases;
  std::size_t k = 0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j, ++k) {
      out.phaseDifferences[k] = wrapTwoPi(l[i] - l[j]);
      out.latticeDistance = std::max(out.latticeDistance, latticeDistance(l[i] - l[j], kPi));
    }
  out.onPiLattice = out.latticeDistance <= tol;

  // Product-state evidence on a fixed set of inputs.
  states::Sampler rng(0x5eedULL);
  const ComplexMatrix& m = u.matrix();
  for (int trial = 0; trial < 4; ++trial) {
    const ComplexMatrix a = states::randomPureVector(2, rng);
    const ComplexMatrix b1 = states::randomPureVector(2, rng);
    const ComplexMatrix b2 = states::randomPureVector(2, rng);
    const ComplexMatrix o1 = m * tensor(a, b1);
    const ComplexMatrix o2 = m * tensor(a, b2);
    out.productOutputConcurrence =
        std::max({out.productOutputConcurrence, concurrencePure(o1), concurrencePure(o2)});
    const ComplexMatrix r1 = linalg::partialTrace(linalg::projector(o1), kQubits, Subsystem::kE);
    const ComplexMatrix r2 = linalg::partialTrace(linalg::projector(o2), kQubits, Subsystem::kE);
    if (linalg::traceNorm(r1 - r2) > 1e-6) out.environmentSteersSystem = true;
  }

  if (out.onPiLattice) {
    for (std::size_t j = 1; j < 4; ++j) {
      const long n = std::lround((l[j] - l[0]) / kPi);
      if (n % 2 != 0) ++out.piOffsets;
    }
    out.label = (out.piOffsets % 2 == 1) ? UnitaryClass::kSWAP : UnitaryClass::kLU;
    const bool swapLike = out.label == UnitaryClass::kSWAP;
    out.evidenceConsistent =
        out.productOutputConcurrence <= 1e-6 && out.environmentSteersSystem == swapLike;
    out.test = "pairwise phase differences on {0, pi}; parity of pi offsets";
  } else if (std::abs(out.form.weyl.c) <= tol) {
    out.label = UnitaryClass::kUC2;
    out.test = "third canonical coordinate vanishes";
  } else {
    out.label = UnitaryClass::kGENERIC;
    out.test = "off-lattice phases and non-zero third canonical coordinate";
  }
  return out;
}

namespace {

struct PatternEval {
  double objective = 1.0;
  ComplexMatrix p1;
  ComplexMatrix p2;
};

// Finds the product vectors in U (C^2 (x) e) and scores how far their S parts
// are from orthogonal.
PatternEval evaluatePattern(const ComplexMatrix& u, const ComplexMatrix& e) {
  const ComplexMatrix w0 = u * tensor(ComplexMatrix::basisVector(2, 0), e);
  const ComplexMatrix w1 = u * tensor(ComplexMatrix::basisVector(2, 1), e);
  const ComplexMatrix c0 = magicBasis().adjoint() * w0;
  const ComplexMatrix c1 = magicBasis().adjoint() * w1;
  Complex q00 = 0.0;
  Complex q01 = 0.0;
  Complex q11 = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    q00 += c0[i] * c0[i];
    q01 += c0[i] * c1[i];
    q11 += c1[i] * c1[i];
  }
  PatternEval out;
  const double scale = std::max({std::abs(q00), std::abs(q01), std::abs(q11)});
  if (scale < 1e-10) {
    // Every vector is product: either C^2 (x) f (pattern) or s (x) C^2 (none).
    const ComplexMatrix sum =
        linalg::partialTrace(linalg::projector(w0) + linalg::projector(w1), kQubits, Subsystem::kE);
    out.objective = std::max(0.0, 1.0 - linalg::hermitianEig(sum, 1e-6).eigenvalues.back());
    out.p1 = w0;
    out.p2 = w1;
    return out;
  }
  const Complex disc = std::sqrt(q01 * q01 - q00 * q11);
  Complex a1, b1, a2, b2;
  if (std::max(std::abs(q00), std::abs(q11)) <= 1e-14 * scale) {
    // Both basis vectors are already product.
    a1 = b2 = 1.0;
    b1 = a2 = 0.0;
  } else if (std::abs(q00) >= std::abs(q11)) {
    b1 = b2 = 1.0;
    a1 = (-q01 + disc) / q00;
    a2 = (-q01 - disc) / q00;
  } else {
    a1 = a2 = 1.0;
    b1 = (-q01 + disc) / q11;
    b2 = (-q01 - disc) / q11;
  }
  out.p1 = linalg::normalized(a1 * w0 + b1 * w1);
  out.p2 = linalg::normalized(a2 * w0 + b2 * w1);
  const ComplexMatrix s1 = productFactors(out.p1).first;
  const ComplexMatrix s2 = productFactors(out.p2).first;
  out.objective = std::norm(linalg::inner(s1, s2));
  if (!std::isfinite(out.objective)) out.objective = 1.0;
  return out;
}

}  // namespace

std::optional<ProductBasisPattern> prodBasisPattern(const UnitaryGate& u,
                                                    const PatternSearchOptions& opt) {
  requireQubits(u, "prodBasisPattern");
  const ComplexMatrix& m = u.matrix();
  struct Candidate {
    double value;
    double theta;
    double phi;
  };
  std::vector<Candidate> grid;
  for (int i = 0; i < opt.thetaSteps; ++i) {
    const double theta = kPi * i / std::max(1, opt.thetaSteps - 1);
    for (int j = 0; j < opt.phiSteps; ++j) {
      const double phi = kTwoPi * j / opt.phiSteps;
      grid.push_back({evaluatePattern(m, blochKet(theta, phi)).objective, theta, phi});
    }
  }
  std::stable_sort(grid.begin(), grid.end(),
                   [](const Candidate& x, const Candidate& y) { return x.value < y.value; });

  Candidate best = grid.front();
  const auto objective = [&](const std::vector<double>& x) {
    return evaluatePattern(m, blochKet(x[0], x[1])).objective;
  };
  optimize::NelderMeadOptions nm;
  nm.initialStep = kPi / std::max(1, opt.thetaSteps - 1);
  nm.fTolerance = 1e-18;
  nm.xTolerance = 1e-10;
  const int starts = std::min<int>(opt.refineStarts, static_cast<int>(grid.size()));
  for (int k = 0; k < starts && best.value > 1e-15; ++k) {
    const auto r = optimize::nelderMead(objective, {grid[k].theta, grid[k].phi}, nm);
    if (r.value < best.value) best = {r.value, r.x[0], r.x[1]};
  }
  if (best.value > opt.foundThreshold) return std::nullopt;

  ProductBasisPattern pat;
  pat.objective = best.value;
  pat.e = blochKet(best.theta, best.phi);
  pat.ePerp = perpendicular(pat.e);
  const PatternEval ev = evaluatePattern(m, pat.e);
  std::tie(pat.s, pat.f) = productFactors(ev.p1);
  ComplexMatrix s2;
  std::tie(s2, pat.g) = productFactors(ev.p2);
  // Align s_perp with the exact complement of s, moving the phase into g.
  pat.sPerp = perpendicular(pat.s);
  pat.g = linalg::inner(pat.sPerp, s2) * pat.g;
  pat.fPerp = perpendicular(linalg::normalized(pat.f));
  pat.gPerp = perpendicular(linalg::normalized(pat.g));
  pat.f = linalg::normalized(pat.f);
  pat.g = linalg::normalized(pat.g);

  const ComplexMatrix dag = m.adjoint();
  const ComplexMatrix outs[4] = {tensor(pat.s, pat.f), tensor(pat.sPerp, pat.g),
                                 tensor(pat.s, pat.fPerp), tensor(pat.sPerp, pat.gPerp)};
  const ComplexMatrix envs[4] = {pat.e, pat.e, pat.ePerp, pat.ePerp};
  ComplexMatrix ins[4];
  for (int k = 0; k < 4; ++k) {
    ins[k] = contractEnvironment(dag * outs[k], envs[k]);
    const double nrm = linalg::vectorNorm(ins[k]);
    if (nrm < 1e-6) return std::nullopt;
    ins[k] *= 1.0 / nrm;
    pat.residual =
        std::max(pat.residual, linalg::vectorNorm(m * tensor(ins[k], envs[k]) - outs[k]));
  }
  pat.x = ins[0];
  pat.xPerp = ins[1];
  pat.a = ins[2];
  pat.aPerp = ins[3];
  if (pat.residual > opt.residualTolerance) return std::nullopt;
  return pat;
}

CounterexampleStates counterexampleStates(const KrausCiracForm& form, double tol) {
  const auto& l = form.phases;
  int bi = -1;
  int bj = -1;
  double bestSin = -1.0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      const double s = std::abs(std::sin(l[i] - l[j]));
      if (s > bestSin + 1e-15) {
        bestSin = s;
        bi = i;
        bj = j;
      }
    }
  if (bestSin <= tol) {
    throw DomainError("counterexampleStates: all phase differences lie on {0, pi}");
  }
  CounterexampleStates out;
  out.pairFirst = bi;
  out.pairSecond = bj;
  out.lambda3 = l[bi];
  out.lambda4 = l[bj];
  out.concurrence = bestSin;

  // Signed permutation sending index bi to 2 and bj to 3 (0-based).
  std::array<int, 4> target{};
  int next = 0;
  for (int k = 0; k < 4; ++k) {
    if (k == bi) target[k] = 2;
    else if (k == bj) target[k] = 3;
    else target[k] = next++;
  }
  ComplexMatrix perm(4, 4);
  for (int k = 0; k < 4; ++k) perm(target[k], k) = 1.0;
  if (linalg::determinant(perm).real() < 0.0)
    for (std::size_t j = 0; j < 4; ++j) perm(0, j) = -perm(0, j);
  out.relabel = fromMagic(perm);

  const double r = 1.0 / std::sqrt(2.0);
  const Complex i1(0.0, 1.0);
  const ComplexMatrix phi3 = magicVector(3);
  const ComplexMatrix phi4 = magicVector(4);
  out.psiPlus = (r * std::polar(1.0, out.lambda3)) * phi3 + (r * i1 * std::polar(1.0, out.lambda4)) * phi4;
  out.psiMinus = (r * std::polar(1.0, out.lambda3)) * phi3 - (r * i1 * std::polar(1.0, out.lambda4)) * phi4;
  const ComplexMatrix ud = form.diagonalPart();
  const ComplexMatrix udRelabel = out.relabel * ud * out.relabel.adjoint();
  out.outputPlus = udRelabel * out.psiPlus;
  out.outputMinus = udRelabel * out.psiMinus;
  out.productResidual =
      std::max(concurrencePure(linalg::normalized(out.outputPlus)),
               concurrencePure(linalg::normalized(out.outputMinus)));

  const ComplexMatrix right = tensor(form.rightS, form.rightE);
  const ComplexMatrix u = form.reconstruct();
  const auto generator = [&](const ComplexMatrix& psi) {
    return linalg::normalized(right.adjoint() * out.relabel.adjoint() * psi);
  };
  out.generatorPlus = generator(out.psiPlus);
  out.generatorMinus = generator(out.psiMinus);
  const auto reduced = [&](const ComplexMatrix& v) {
    return DensityMatrix(linalg::partialTrace(linalg::projector(v), kQubits, Subsystem::kE));
  };
  out.rhoSPlus = reduced(out.generatorPlus);
  out.rhoSMinus = reduced(out.generatorMinus);
  out.targetPlus = productFactors(u * out.generatorPlus).first;
  out.targetMinus = productFactors(u * out.generatorMinus).first;
  return out;
}

}  // namespace openqdyn::magic
