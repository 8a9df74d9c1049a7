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

// Two-qubit structure: magic basis, concurrence, PPT, the Kraus-Cirac
// decomposition and the LU/SWAP/UC2/GENERIC classifier.

#ifndef OPENQDYN_MAGIC_HPP_
#define OPENQDYN_MAGIC_HPP_

#include <array>
#include <optional>
#include <string>

#include "openqdyn/states.hpp"

namespace openqdyn::magic {

using linalg::ComplexMatrix;
using states::DensityMatrix;
using states::UnitaryGate;

/// Columns are Phi_1..Phi_4:
///   Phi_1 = (|01> - |10>)/r2,      Phi_2 = -i(|00> - |11>)/r2,
///   Phi_3 = (|00> + |11>)/r2,      Phi_4 = -i(|01> + |10>)/r2.
const ComplexMatrix& magicBasis();
/// Phi_k for k = 1..4.
ComplexMatrix magicVector(int k);

/// M^dagger m M.
ComplexMatrix toMagic(const ComplexMatrix& m);
/// M m M^dagger.
ComplexMatrix fromMagic(const ComplexMatrix& m);

/// |sum_i c_i^2| over the magic components of a normalized 4-vector.
double concurrencePure(const ComplexMatrix& ket);

struct PptResult {
  bool separable = false;
  double minEigenvalue = 0.0;  // of the partial transpose
};

/// Exact separability test for two qubits: rho^Gamma >= -tol.
PptResult pptSeparable(const DensityMatrix& rho, double tol = 1e-9);

/// Canonical interaction coefficients of exp(i(a XX + b YY + c ZZ)), reduced to
/// pi/4 >= a >= b >= |c| with c >= 0 whenever the sign of c is a gauge choice.
struct WeylCoordinates {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// Maps magic-basis phases (U_d = sum_j e^{-i lambda_j} |Phi_j><Phi_j|) to the
/// canonical chamber.
WeylCoordinates weylFromPhases(const std::array<double, 4>& lambda);

/// Distance between two canonical points that accounts for the sign gauge of
/// c on the chamber faces a = pi/4 and b = 0.
double weylDistance(const WeylCoordinates& x, const WeylCoordinates& y);

/// True when two phase vectors describe LU-equivalent diagonal parts (global
/// shift, pairwise pi shifts and local index permutations).
bool phasesEquivalent(const std::array<double, 4>& x, const std::array<double, 4>& y,
                      double tol = 1e-7);

/// U = globalPhase (U_S (x) U_E) U_d (V_S (x) V_E).
struct KrausCiracForm {
  ComplexMatrix leftS;
  ComplexMatrix leftE;
  std::array<double, 4> phases{};  // lambda_j in [0, 2 pi)
  ComplexMatrix rightS;
  ComplexMatrix rightE;
  Complex globalPhase = 1.0;
  WeylCoordinates weyl;
  double reconstructionError = 0.0;  // max-entry error, global phase included
  int attempts = 0;

  /// sum_j e^{-i lambda_j} |Phi_j><Phi_j|.
  ComplexMatrix diagonalPart() const;
  ComplexMatrix reconstruct() const;
};

/// U_d from phases.
ComplexMatrix diagonalFromPhases(const std::array<double, 4>& lambda);

/// Throws DomainError for non two-qubit or non-unitary input.
KrausCiracForm krausCirac(const UnitaryGate& u);

enum class UnitaryClass { kLU, kSWAP, kUC2, kGENERIC };
std::string toString(UnitaryClass c);

struct Classification {
  UnitaryClass label = UnitaryClass::kGENERIC;
  KrausCiracForm form;
  /// (lambda_i - lambda_j) mod 2 pi for i < j in lexicographic pair order.
  std::array<double, 6> phaseDifferences{};
  /// Largest distance of a pairwise difference to the lattice {0, pi}.
  double latticeDistance = 0.0;
  bool onPiLattice = false;
  /// Number of phases offset by pi from lambda_1 (only meaningful on the lattice).
  int piOffsets = 0;
  /// Random product inputs stay product (max output concurrence).
  double productOutputConcurrence = 0.0;
  /// S output of product inputs depends on the E input (swap-like behaviour).
  bool environmentSteersSystem = false;
  /// False when the lattice parity and product evidence disagree.
  bool evidenceConsistent = true;
  double tolerance = 1e-7;
  std::string test;
};

Classification classify(const UnitaryGate& u, double tol = 1e-7);

/// True when all pairwise phase differences lie within tol of {0, pi} mod 2 pi.
bool proposition1Holds(const KrausCiracForm& form, double tol = 1e-8);

/// Product-to-product pattern in which E input |e> sends |x>|e>, |x_perp>|e>
/// to |s>|f>, |s_perp>|g> and E input |e_perp> sends |a>|e_perp>,
/// |a_perp>|e_perp> to |s>|f_perp>, |s_perp>|g_perp>.
struct ProductBasisPattern {
  ComplexMatrix e, ePerp;
  ComplexMatrix x, xPerp, a, aPerp;
  ComplexMatrix s, sPerp, f, g, fPerp, gPerp;
  double objective = 0.0;  // squared overlap of the two S outputs for |e>
  double residual = 0.0;   // max error over the four mappings
};

struct PatternSearchOptions {
  int thetaSteps = 33;
  int phiSteps = 64;
  int refineStarts = 4;
  double foundThreshold = 1e-9;
  double residualTolerance = 1e-6;
};

std::optional<ProductBasisPattern> prodBasisPattern(const UnitaryGate& u,
                                                    const PatternSearchOptions& opt = {});

/// Entangled inputs whose images under U_d are product states.
struct CounterexampleStates {
  int pairFirst = 0;   // magic indices (0-based) relabelled to Phi_3, Phi_4
  int pairSecond = 0;
  double lambda3 = 0.0;
  double lambda4 = 0.0;
  ComplexMatrix relabel;     // local unitary L with L U_d L^dagger diagonal in relabelled order
  ComplexMatrix psiPlus;     // sqrt(1/2)(e^{i l3} Phi_3 + i e^{i l4} Phi_4)
  ComplexMatrix psiMinus;
  ComplexMatrix outputPlus;  // relabelled U_d applied to psiPlus, equals |++>
  ComplexMatrix outputMinus;
  /// Generators of the same transformation for the original U.
  ComplexMatrix generatorPlus;
  ComplexMatrix generatorMinus;
  DensityMatrix rhoSPlus = DensityMatrix::maximallyMixed(2);
  DensityMatrix rhoSMinus = DensityMatrix::maximallyMixed(2);
  ComplexMatrix targetPlus;  // pure S kets reached under U
  ComplexMatrix targetMinus;
  double concurrence = 0.0;
  double productResidual = 0.0;  // max concurrence of the outputs
};

/// Throws DomainError when every pairwise phase difference is on {0, pi}.
CounterexampleStates counterexampleStates(const KrausCiracForm& form, double tol = 1e-7);

}  // namespace openqdyn::magic

#endif  // OPENQDYN_MAGIC_HPP_
