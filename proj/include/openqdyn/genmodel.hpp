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

// Reduced dynamics rho_S -> rho_S' = tr_E[U rho_SE U^dagger]: forward maps,
// eigenstate bounds, purity bound and the closed-form two-qubit family.
// The feasibility solvers live in feasibility.hpp.

#ifndef OPENQDYN_GENMODEL_HPP_
#define OPENQDYN_GENMODEL_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "openqdyn/magic.hpp"
#include "openqdyn/states.hpp"

namespace openqdyn::genmodel {

using linalg::BipartiteDims;
using linalg::ComplexMatrix;
using states::DensityMatrix;
using states::UnitaryGate;

struct ForwardResult {
  DensityMatrix rhoS;
  DensityMatrix rhoSPrime;
};

/// (tr_E rho_SE, tr_E U rho_SE U^dagger). Throws DimensionError on mismatch.
ForwardResult forward(const UnitaryGate& u, const DensityMatrix& rhoSE);

/// Extraction weight 1 / <phi| rho^{-1} |phi> on the support of rho (eigenvalues
/// above supportTol); 0 when |phi| has more than outsideTol weight outside it.
double tau(const DensityMatrix& rhoSE, const ComplexMatrix& phi, double supportTol = 1e-7,
           double outsideTol = 1e-6);

struct UnitaryEigenvector {
  ComplexMatrix vector;
  double phase = 0.0;       // U v = e^{i phase} v, phase in (-pi, pi]
  int eigenspace = 0;       // index of the (numerically) degenerate group
  bool degenerate = false;  // group has more than one member
};

/// Orthonormal eigenbasis of U from the commuting Hermitian pair
/// (U + U^dagger)/2 and (U - U^dagger)/(2i).
std::vector<UnitaryEigenvector> unitaryEigenbasis(const ComplexMatrix& u,
                                                  double degeneracyTol = 1e-8);

struct Lemma1Entry {
  std::size_t k = 0;          // 1-based
  double lowerBound = 0.0;    // tau * lambda_k(tr_E |phi><phi|)
  double observed = 0.0;      // lambda_k(rho_S')
  bool satisfied = true;
};

struct Lemma1Report {
  ComplexMatrix phi;
  double phase = 0.0;
  double tau = 0.0;
  std::vector<double> marginalSpectrum;  // lambda_k(tr_E |phi><phi|), descending
  std::vector<Lemma1Entry> perK;
  bool basisDependent = false;  // phi belongs to a degenerate eigenspace
  bool randomProbe = false;     // phi is a random vector of such an eigenspace
  bool satisfied = true;
};

struct Lemma1Options {
  double rankTol = 1e-7;
  double slack = 1e-8;
  int probesPerDegenerateSpace = 10;
  std::uint64_t seed = 0x1e44a1ULL;
};

/// One report per computed eigenvector of U plus random probes inside
/// degenerate eigenspaces.
std::vector<Lemma1Report> lemma1Check(const UnitaryGate& u, const DensityMatrix& rhoSE,
                                      const DensityMatrix& rhoSPrime, const Lemma1Options& opt = {});

/// Report for a single known eigenstate.
Lemma1Report lemma1ForEigenstate(const ComplexMatrix& phi, double phase, const DensityMatrix& rhoSE,
                                 const DensityMatrix& rhoSPrime, const Lemma1Options& opt = {});

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Values of p for which rho_S' = p|0><0| + (1-p)|1><1| passes the eigenstate
/// bound of `phi` for the given rho_SE (qubit system).
struct DiagonalWindow {
  double tau = 0.0;
  std::vector<double> marginalSpectrum;
  std::size_t rankS = 0;
  std::vector<Interval> intervals;  // disjoint, ascending, inside [0, 1]
};

DiagonalWindow diagonalTargetWindow(const DensityMatrix& rhoSE, const ComplexMatrix& phi,
                                    double rankTol = 1e-7);

struct PurityBound {
  double bound = 1.0;          // valid upper bound on gamma(rho_S')
  double formulaValue = 1.0;   // 1 - (lambda_r / (dE dS))^2 max_phi sum_k lambda_k^2
  double lambdaR = 0.0;        // smallest non-zero eigenvalue of rho_S
  std::size_t rank = 0;
  double maxTerm = 0.0;
  bool invertible = true;      // the formula is only derived for full-rank rho_S
  int eigenvectorsUsed = 0;
};

/// Upper bound on the purity reachable from rho_S (x) I/dE. For a singular
/// rho_S the bound is the trivial value 1 (formulaValue keeps the r = rank
/// expression for reference).
PurityBound purityUpperBound(const UnitaryGate& u, const DensityMatrix& rhoS, std::size_t dE,
                             const Lemma1Options& opt = {});

/// Closed-form solution set of I/2 -> |0><0| under gates::family(theta, gamma).
struct FamilySolution {
  double theta = 0.0;
  double gamma = 0.0;
  bool degenerate = false;     // cos(2 theta) = 0
  ComplexMatrix generator;     // Phi_3 (unique generator when not degenerate)
  ComplexMatrix partner;       // U^dagger |01>, second basis vector when degenerate
  /// Allowed coherence direction: generators are p|Phi_3><Phi_3| + (1-p)|chi><chi|
  /// + (w |Phi_3><chi| + h.c.) with w restricted to the real line spanned by
  /// coherenceDirection (complex unit number), |w|^2 <= p(1-p).
  Complex coherenceDirection = 0.0;
  ComplexMatrix separableMember;  // p = 1/2, no coherence
  std::string annotation;
};

FamilySolution familyAnalyze(double theta, double gamma, double tol = 1e-12);

/// Largest overlap of rho with the closed-form solution set (tr of rho
/// projected onto span{Phi_3} or span{Phi_3, chi}).
double familyFidelity(const FamilySolution& sol, const DensityMatrix& rho);

/// Generator of the family solution set for mixing weight p and coherence
/// amplitude t along coherenceDirection (degenerate case only).
DensityMatrix familyMember(const FamilySolution& sol, double p, double t = 0.0);

}  // namespace openqdyn::genmodel

#endif  // OPENQDYN_GENMODEL_HPP_
