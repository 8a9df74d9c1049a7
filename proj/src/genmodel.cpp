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

#include "openqdyn/genmodel.hpp"

#include <algorithm>
#include <cmath>

#include "openqdyn/gates.hpp"

namespace openqdyn::genmodel {

using linalg::hermitianEig;
using linalg::Subsystem;

namespace {

void requireState(const DensityMatrix& rho, BipartiteDims dims, const char* op) {
  if (!rho.isBipartite() || !(rho.bipartite() == dims)) {
    throw DimensionError(std::string(op) + ": joint state dims do not match the unitary");
  }
}

std::vector<double> marginalSpectrum(const ComplexMatrix& phi, BipartiteDims dims) {
  const ComplexMatrix red = linalg::partialTrace(linalg::projector(phi), dims, Subsystem::kE);
  std::vector<double> ev = hermitianEig(red, 1e-6).eigenvalues;
  for (double& l : ev) l = std::max(l, 0.0);
  return ev;
}

std::vector<Interval> intersect(const std::vector<Interval>& a, const std::vector<Interval>& b) {
  std::vector<Interval> out;
  for (const Interval& x : a)
    for (const Interval& y : b) {
      const double lo = std::max(x.lo, y.lo);
      const double hi = std::min(x.hi, y.hi);
      if (lo <= hi) out.push_back({lo, hi});
    }
  std::sort(out.begin(), out.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
  return out;
}

}  // namespace

ForwardResult forward(const UnitaryGate& u, const DensityMatrix& rhoSE) {
  requireState(rhoSE, u.dims(), "forward");
  const ComplexMatrix out = u.conjugate(rhoSE.matrix());
  return ForwardResult{
      DensityMatrix(linalg::partialTrace(rhoSE.matrix(), u.dims(), Subsystem::kE)),
      DensityMatrix(linalg::partialTrace(linalg::hermitianPart(out), u.dims(), Subsystem::kE))};
}

double tau(const DensityMatrix& rhoSE, const ComplexMatrix& phi, double supportTol,
           double outsideTol) {
  if (phi.rows() != rhoSE.dim() || !phi.isColumn()) throw DimensionError("tau: vector length mismatch");
  if (std::abs(linalg::vectorNorm(phi) - 1.0) > 1e-9) throw DomainError("tau: vector not normalized");
  const auto spec = hermitianEig(rhoSE.matrix());
  double inside = 0.0;
  double weighted = 0.0;
  for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
    const double p = spec.eigenvalues[i];
    if (p <= supportTol) continue;
    const double a2 = std::norm(linalg::inner(spec.eigenvectors.column(i), phi));
    inside += a2;
    weighted += a2 / p;
  }
  const double outside = std::sqrt(std::max(0.0, 1.0 - inside));
  if (outside > outsideTol || weighted <= 0.0) return 0.0;
  return std::min(1.0, 1.0 / weighted);
}

std::vector<UnitaryEigenvector> unitaryEigenbasis(const ComplexMatrix& u, double degeneracyTol) {
  if (!u.isSquare()) throw DimensionError("unitaryEigenbasis: matrix is not square");
  const std::size_t n = u.rows();
  const ComplexMatrix h1 = linalg::hermitianPart(u);
  const ComplexMatrix h2 = Complex(0.0, -0.5) * (u - u.adjoint());
  const auto s1 = hermitianEig(h1, 1e-6);

  // Clusters of (nearly) equal cos(phase) are separated by the sine part.
  std::vector<ComplexMatrix> vectors;
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && s1.eigenvalues[end - 1] - s1.eigenvalues[end] <= 1e-6) ++end;
    ComplexMatrix basis(n, end - start);
    for (std::size_t k = start; k < end; ++k) basis.setColumn(k - start, s1.eigenvectors.column(k));
    if (end - start == 1) {
      vectors.push_back(basis.column(0));
    } else {
      const auto s2 = hermitianEig(linalg::hermitianPart(basis.adjoint() * h2 * basis), 1e-6);
      const ComplexMatrix rotated = basis * s2.eigenvectors;
      for (std::size_t k = 0; k < rotated.cols(); ++k)
        vectors.push_back(linalg::normalized(rotated.column(k)));
    }
    start = end;
  }
  // Deterministic order: by phase, then by original position.
  std::vector<UnitaryEigenvector> out;
  for (const ComplexMatrix& v : vectors) {
    UnitaryEigenvector e;
    e.vector = v;
    e.phase = std::arg(linalg::inner(v, u * v));
    out.push_back(e);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const UnitaryEigenvector& a, const UnitaryEigenvector& b) { return a.phase < b.phase; });
  int group = -1;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i == 0 || std::abs(std::polar(1.0, out[i].phase) - std::polar(1.0, out[i - 1].phase)) > degeneracyTol) {
      ++group;
    }
    out[i].eigenspace = group;
  }
  // The phase circle wraps: the last group may coincide with the first.
  if (out.size() > 1 &&
      std::abs(std::polar(1.0, out.back().phase) - std::polar(1.0, out.front().phase)) <= degeneracyTol) {
    const int last = out.back().eigenspace;
    for (auto& e : out)
      if (e.eigenspace == last) e.eigenspace = 0;
  }
  for (auto& e : out) {
    const auto members = std::count_if(out.begin(), out.end(), [&](const UnitaryEigenvector& o) {
      return o.eigenspace == e.eigenspace;
    });
    e.degenerate = members > 1;
  }
  return out;
}

Lemma1Report lemma1ForEigenstate(const ComplexMatrix& phi, double phase, const DensityMatrix& rhoSE,
                                 const DensityMatrix& rhoSPrime, const Lemma1Options& opt) {
  const BipartiteDims dims = rhoSE.bipartite();
  if (rhoSPrime.dim() != dims.dS) throw DimensionError("lemma1: rho_S' dimension mismatch");
  Lemma1Report r;
  r.phi = phi;
  r.phase = phase;
  r.tau = tau(rhoSE, phi, opt.rankTol);
  r.marginalSpectrum = marginalSpectrum(phi, dims);
  const ComplexMatrix rhoS = linalg::partialTrace(rhoSE.matrix(), dims, Subsystem::kE);
  const std::size_t rank = states::rankEps(rhoS, opt.rankTol);
  const std::vector<double> observed = hermitianEig(rhoSPrime.matrix()).eigenvalues;
  for (std::size_t k = 1; k <= rank; ++k) {
    Lemma1Entry e;
    e.k = k;
    e.lowerBound = r.tau * r.marginalSpectrum[k - 1];
    e.observed = observed[k - 1];
    e.satisfied = e.lowerBound <= e.observed + opt.slack;
    r.satisfied = r.satisfied && e.satisfied;
    r.perK.push_back(e);
  }
  return r;
}

std::vector<Lemma1Report> lemma1Check(const UnitaryGate& u, const DensityMatrix& rhoSE,
                                      const DensityMatrix& rhoSPrime, const Lemma1Options& opt) {
  requireState(rhoSE, u.dims(), "lemma1Check");
  const auto basis = unitaryEigenbasis(u.matrix());
  std::vector<Lemma1Report> out;
  for (const auto& e : basis) {
    Lemma1Report r = lemma1ForEigenstate(e.vector, e.phase, rhoSE, rhoSPrime, opt);
    r.basisDependent = e.degenerate;
    out.push_back(std::move(r));
  }
  states::Sampler rng(opt.seed);
  const int groups = basis.empty() ? 0 : 1 + std::max_element(basis.begin(), basis.end(), [](const auto& a, const auto& b) {
                                           return a.eigenspace < b.eigenspace;
                                         })->eigenspace;
  for (int g = 0; g < groups; ++g) {
    std::vector<const UnitaryEigenvector*> members;
    for (const auto& e : basis)
      if (e.eigenspace == g) members.push_back(&e);
    if (members.size() < 2) continue;
    for (int probe = 0; probe < opt.probesPerDegenerateSpace; ++probe) {
      const ComplexMatrix coeff = states::randomPureVector(members.size(), rng);
      ComplexMatrix v(u.matrix().rows(), 1);
      for (std::size_t k = 0; k < members.size(); ++k) v += coeff[k] * members[k]->vector;
      v = linalg::normalized(v);
      Lemma1Report r = lemma1ForEigenstate(v, members.front()->phase, rhoSE, rhoSPrime, opt);
      r.basisDependent = true;
      r.randomProbe = true;
      out.push_back(std::move(r));
    }
  }
  return out;
}

DiagonalWindow diagonalTargetWindow(const DensityMatrix& rhoSE, const ComplexMatrix& phi, double rankTol) {
  const BipartiteDims dims = rhoSE.bipartite();
  if (dims.dS != 2) throw DimensionError("diagonalTargetWindow: system must be a qubit");
  DiagonalWindow w;
  w.tau = tau(rhoSE, phi, rankTol);
  w.marginalSpectrum = marginalSpectrum(phi, dims);
  w.rankS = states::rankEps(linalg::partialTrace(rhoSE.matrix(), dims, Subsystem::kE), rankTol);
  std::vector<Interval> allowed = {{0.0, 1.0}};
  // k = 1: max(p, 1 - p) >= tau mu_1.
  const double b1 = w.tau * w.marginalSpectrum[0];
  if (b1 > 0.5) allowed = intersect(allowed, {{0.0, 1.0 - b1}, {b1, 1.0}});
  // k = 2: min(p, 1 - p) >= tau mu_2.
  if (w.rankS >= 2) {
    const double b2 = w.tau * w.marginalSpectrum[1];
    if (b2 > 0.5) allowed.clear();
    else allowed = intersect(allowed, {{b2, 1.0 - b2}});
  }
  w.intervals = allowed;
  return w;
}

PurityBound purityUpperBound(const UnitaryGate& u, const DensityMatrix& rhoS, std::size_t dE,
                             const Lemma1Options& opt) {
  const BipartiteDims dims = u.dims();
  if (rhoS.dim() != dims.dS || dE != dims.dE) throw DimensionError("purityUpperBound: dims mismatch");
  PurityBound b;
  const auto spec = hermitianEig(rhoS.matrix());
  b.rank = 0;
  for (double l : spec.eigenvalues)
    if (l > opt.rankTol) ++b.rank;
  b.lambdaR = b.rank > 0 ? spec.eigenvalues[b.rank - 1] : 0.0;
  b.invertible = b.rank == dims.dS;

  std::vector<ComplexMatrix> candidates;
  const auto basis = unitaryEigenbasis(u.matrix());
  for (const auto& e : basis) candidates.push_back(e.vector);
  states::Sampler rng(opt.seed);
  for (const auto& e : basis) {
    if (!e.degenerate) continue;
    std::vector<const UnitaryEigenvector*> members;
    for (const auto& o : basis)
      if (o.eigenspace == e.eigenspace) members.push_back(&o);
    if (members.front() != &e) continue;  // once per eigenspace
    for (int probe = 0; probe < opt.probesPerDegenerateSpace; ++probe) {
      const ComplexMatrix coeff = states::randomPureVector(members.size(), rng);
      ComplexMatrix v(u.matrix().rows(), 1);
      for (std::size_t k = 0; k < members.size(); ++k) v += coeff[k] * members[k]->vector;
      candidates.push_back(linalg::normalized(v));
    }
  }
  for (const ComplexMatrix& phi : candidates) {
    const std::vector<double> mu = marginalSpectrum(phi, dims);
    double term = 0.0;
    for (std::size_t k = 0; k < b.rank && k < mu.size(); ++k) term += mu[k] * mu[k];
    b.maxTerm = std::max(b.maxTerm, term);
  }
  b.eigenvectorsUsed = static_cast<int>(candidates.size());
  const double scale = b.lambdaR / static_cast<double>(dims.dE * dims.dS);
  b.formulaValue = 1.0 - scale * scale * b.maxTerm;
  b.bound = b.invertible ? b.formulaValue : 1.0;
  return b;
}

FamilySolution familyAnalyze(double theta, double gamma, double tol) {
  FamilySolution sol;
  sol.theta = theta;
  sol.gamma = gamma;
  const UnitaryGate u = gates::family(theta, gamma);
  sol.generator = magic::magicVector(3);
  sol.partner = u.matrix().adjoint() * ComplexMatrix::basisVector(4, 1);
  sol.degenerate = std::abs(std::cos(2.0 * theta)) <= tol;
  if (!sol.degenerate) {
    sol.separableMember = linalg::projector(sol.generator);
    sol.annotation = "unique generator |Phi_3><Phi_3| (entangled); no separable or product solutions";
    return sol;
  }
  // Off-diagonal condition w sin(theta) + conj(w) cos(theta) = 0.
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Complex d = std::sqrt(Complex(-c / s, 0.0));
  sol.coherenceDirection = d / std::abs(d);
  sol.separableMember = 0.5 * (linalg::projector(sol.generator) + linalg::projector(sol.partner));
  sol.annotation =
      "one-parameter family p|Phi_3><Phi_3| + (1-p)|chi><chi| (plus restricted coherence); "
      "separable iff p = 1/2 without coherence; no product solutions";
  return sol;
}

double familyFidelity(const FamilySolution& sol, const DensityMatrix& rho) {
  double f = linalg::inner(sol.generator, rho.matrix() * sol.generator).real();
  if (sol.degenerate) f += linalg::inner(sol.partner, rho.matrix() * sol.partner).real();
  return f;
}

DensityMatrix familyMember(const FamilySolution& sol, double p, double t) {
  if (p < 0.0 || p > 1.0) throw DomainError("familyMember: p outside [0, 1]");
  ComplexMatrix m = p * linalg::projector(sol.generator);
  if (sol.degenerate) {
    if (t * t > p * (1.0 - p) + 1e-15) throw DomainError("familyMember: coherence too large");
    m += (1.0 - p) * linalg::projector(sol.partner);
    const ComplexMatrix cross = (t * sol.coherenceDirection) * (sol.generator * sol.partner.adjoint());
    m += cross;
    m += cross.adjoint();
  } else if (p != 1.0) {
    throw DomainError("familyMember: non-degenerate family has the single generator p = 1");
  }
  return DensityMatrix(m, {2, 2});
}

}  // namespace openqdyn::genmodel
