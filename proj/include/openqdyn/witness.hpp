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

// Certifying initial system-environment correlations from system data only.
//
// The shift unitary U0 |Psi_i>|j> = |i - j mod d>|j> (Psi_i the eigenbasis of
// rho_S) sends every product input to <0|rho_S'|0> <= sqrt(purity(rho_S)),
// while maximally correlated inputs reach 1.

#ifndef OPENQDYN_WITNESS_HPP_
#define OPENQDYN_WITNESS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "openqdyn/feasibility.hpp"
#include "openqdyn/states.hpp"

namespace openqdyn::witness {

using linalg::ComplexMatrix;
using states::DensityMatrix;
using states::UnitaryGate;

struct ShiftWitness {
  std::size_t d = 0;
  ComplexMatrix eigenbasis;        // columns |Psi_i>, descending weight
  std::vector<double> weights;     // eigenvalues of rho_S
  std::size_t rank = 0;
  UnitaryGate u0 = UnitaryGate(ComplexMatrix::identity(4), {2, 2});
  double threshold = 1.0;          // sqrt(purity(rho_S))
};

/// d must equal the dimension of rho_S; rank(rho_S) >= 2 (DomainError otherwise).
ShiftWitness buildShift(const DensityMatrix& rhoS, std::size_t d, double rankTol = 1e-7);

/// sum_ij alpha_ij |Psi_i, i><Psi_j, j| for an r x r coefficient matrix, r <= d.
DensityMatrix maxCorrState(const ComplexMatrix& alpha, const ComplexMatrix& eigenbasis);

/// Spectrum of the partial transpose: {alpha_ii} and {+|alpha_ij|, -|alpha_ij|},
/// padded with zeros to d^2 entries, sorted descending.
std::vector<double> pptSpectrumMaxCorr(const ComplexMatrix& alpha, std::size_t d = 0);

/// Some alpha_ij (i != j) is nonzero.
bool maxCorrEntangled(const ComplexMatrix& alpha, double tol = 1e-9);

struct CompatibilityReport {
  std::string structure;
  genmodel::FeasibilityResult solve;
  double maxCorrWeight = 0.0;    // weight of the witness in span{|Psi_i, i>}
  ComplexMatrix alpha;           // coefficients read off the witness
  bool maximallyCorrelated = false;
};

/// Solves rho_S -> |0><0| under U0 for ANY initial state and measures how much
/// of the witness lives on the maximally correlated subspace.
CompatibilityReport compatibleStates(const ShiftWitness& w, const DensityMatrix& rhoS,
                                     const genmodel::SolverOptions& opt = {});

enum class Verdict { kCorrelated, kInconclusive };
std::string toString(Verdict v);

struct CertifyResult {
  Verdict verdict = Verdict::kInconclusive;
  double threshold = 1.0;
  double observed = 0.0;
};

/// CORRELATED only when observed > sqrt(purity(rho_S)) + statTol.
CertifyResult theorem3Certify(const DensityMatrix& rhoS, double observed, double statTol = 1e-9);

/// <0| tr_E[U0 rho_SE U0^dag] |0>.
double shiftSuccessProbability(const ShiftWitness& w, const DensityMatrix& rhoSE);

struct ProtocolTranscript {
  double threshold = 1.0;
  std::uint64_t shots = 0;
  std::uint64_t count0 = 0;
  double estimate = 0.0;
  double exact = 0.0;
  double ciLow = 0.0;
  double ciHigh = 1.0;
  Verdict verdict = Verdict::kInconclusive;
  std::uint64_t seed = 0;
};

/// 95% Wilson score interval.
std::pair<double, double> wilsonInterval(std::uint64_t successes, std::uint64_t trials);

/// Builds U0 from tr_E of the hidden state (d_S = d_E), samples the
/// computational-basis outcome `shots` times and certifies from the interval.
ProtocolTranscript simulateProtocol(const DensityMatrix& hiddenSE, std::uint64_t shots, std::uint64_t seed);

/// Witness built from a misestimated eigenbasis: the first two eigenvectors
/// rotated by `angle` in their real plane.
struct MismatchPoint {
  double angle = 0.0;
  double correlatedSuccess = 0.0;  // pure maximally correlated input in the true basis
  double productMax = 0.0;         // max over omega of the success for rho_S (x) omega
  double threshold = 1.0;
  bool certifies = false;          // correlatedSuccess beats the threshold
  bool productBelowThreshold = true;
};
std::vector<MismatchPoint> basisMismatchSweep(const DensityMatrix& rhoS, const std::vector<double>& angles,
                                              double statTol = 1e-9);

}  // namespace openqdyn::witness

#endif  // OPENQDYN_WITNESS_HPP_
