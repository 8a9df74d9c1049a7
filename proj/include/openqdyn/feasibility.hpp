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

// Which joint states rho_SE can generate a given rho_S -> rho_S'?
//
// ANY / SEPARABLE / fixed-basis QC are convex: alternating projections with
// Dykstra corrections between the affine marginal constraints and the cone,
// plus a Farkas-type certificate for the INFEASIBLE verdict. PRODUCT (d_E = 2)
// is a search over the environment Bloch ball.

#ifndef OPENQDYN_FEASIBILITY_HPP_
#define OPENQDYN_FEASIBILITY_HPP_

#include <optional>
#include <string>
#include <vector>

#include "openqdyn/common.hpp"
#include "openqdyn/genmodel.hpp"
#include "openqdyn/magic.hpp"

namespace openqdyn::genmodel {

enum class StateClass { kAny, kSeparable, kQC, kProduct };
enum class Status { kFeasible, kInfeasible, kUndecided };

std::string toString(StateClass c);
std::string toString(Status s);
StateClass stateClassFromString(const std::string& s);

struct GenerationProblem {
  UnitaryGate u;
  DensityMatrix rhoS;
  DensityMatrix rhoSPrime;
  StateClass stateClass = StateClass::kAny;

  /// Throws DimensionError when the pieces do not fit together.
  void validate() const;
};

struct SolverOptions {
  int maxIterations = 10000;
  int checkEvery = 25;
  int polishAfter = 1000;              // factored least-squares finish (ANY, QC)
  double feasibilityTolerance = 1e-7;  // ||.||_1 residual for FEASIBLE
  double certificateMargin = 1e-6;
  double supportTolerance = 1e-9;      // facial reduction
  int certificateIterations = 3000;    // alternating projections for the displacement
  // Product search.
  int productGrid = 21;
  int productStarts = 5;
  double productThreshold = 1e-6;
  // QC search.
  int qcThetaSteps = 64;
  int qcPhiSteps = 64;
  int qcScreenIterations = 150;
  int qcCandidates = 6;
  double qcGapThreshold = 1e-3;
};

/// y and T = A*(y) with <T, X> >= lowerBound on the unit-trace slice of the
/// cone while <y, b> < lowerBound; margin is the normalized gap.
struct DualCertificate {
  std::vector<double> y;
  ComplexMatrix t;
  double lowerBound = 0.0;
  double objective = 0.0;  // <y, b>
  double margin = 0.0;
  std::string kind;
};

struct FeasibilityResult {
  Status status = Status::kUndecided;
  std::optional<DensityMatrix> witness;
  double residual = 0.0;  // ||tr_E rho - rho_S||_1 + ||tr_E U rho U^dag - rho_S'||_1
  int iterations = 0;
  double minObjective = 0.0;  // PRODUCT: min over omega of the final-state error
  std::optional<DualCertificate> certificate;
  std::string note;
  std::optional<ComplexMatrix> environmentBasis;  // QC: columns |beta>, |beta_perp>
  std::optional<DensityMatrix> environmentState;  // PRODUCT: best omega
  std::size_t faceDimension = 0;
};

/// Constraint residual of a candidate joint state in the full trace norm.
double generationResidual(const GenerationProblem& p, const ComplexMatrix& rhoSE);

/// Class membership of a candidate witness.
bool classMember(StateClass c, const ComplexMatrix& rhoSE, BipartiteDims dims, double tol,
                 const std::optional<ComplexMatrix>& environmentBasis = std::nullopt);

/// ANY and SEPARABLE (SEPARABLE requires two qubits).
FeasibilityResult solveFeasibility(const GenerationProblem& p, const SolverOptions& opt = {});

/// Fixed environment basis (columns of basis); QC is block-diagonal in it.
FeasibilityResult solveQCFixedBasis(const GenerationProblem& p, const ComplexMatrix& basis,
                                    const SolverOptions& opt = {});

/// E basis {cos(t/2)|0> + e^{i f} sin(t/2)|1>, its orthogonal complement}.
ComplexMatrix qubitBasis(double theta, double phi);

FeasibilityResult searchQC(const GenerationProblem& p, const SolverOptions& opt = {});
FeasibilityResult searchProduct(const GenerationProblem& p, const SolverOptions& opt = {});

/// Dispatches on p.stateClass.
FeasibilityResult solve(const GenerationProblem& p, const SolverOptions& opt = {});

struct RobustnessReport {
  double epsilon = 0.0;
  double halfNormEpsilon = 0.0;
  double delta = 0.0;
  double lipschitz = 1.0;
  std::string guarantee;
};
RobustnessReport robustnessEpsilon(const UnitaryGate& u, const DensityMatrix& rhoS,
                                   const DensityMatrix& rhoSPrime, const SolverOptions& opt = {});

struct Lemma2Verdict {
  magic::UnitaryClass unitaryClass = magic::UnitaryClass::kGENERIC;
  bool swapNecessary = false;  // product generation requires the SWAP class
  FeasibilityResult product;
  bool productFeasible = false;
  bool consistent = true;      // product-feasible implies SWAP
};
/// Throws DomainError unless rho_S has rank 2.
Lemma2Verdict lemma2Check(const UnitaryGate& u, const DensityMatrix& rhoS, const ComplexMatrix& psi,
                          const SolverOptions& opt = {});

}  // namespace openqdyn::genmodel

#endif  // OPENQDYN_FEASIBILITY_HPP_
