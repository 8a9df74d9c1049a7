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

#ifndef OPENQDYN_STATES_HPP_
#define OPENQDYN_STATES_HPP_

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "openqdyn/linalg.hpp"

namespace openqdyn::states {

using linalg::BipartiteDims;
using linalg::ComplexMatrix;

/// Validated density matrix. Construction accepts eigenvalues down to
/// -tol; those below -1e-12 are clipped to zero and the state renormalized,
/// with the removed weight kept in clipMagnitude().
class DensityMatrix {
 public:
  /// Throws DomainError when the matrix is not a state within `tol`, and
  /// DimensionError when dims do not multiply to the side length.
  DensityMatrix(const ComplexMatrix& m, std::vector<std::size_t> dims, double tol = 1e-9);
  /// Single-system state with dims = {side}.
  explicit DensityMatrix(const ComplexMatrix& m, double tol = 1e-9);

  static DensityMatrix pure(const ComplexMatrix& ket, std::vector<std::size_t> dims);
  static DensityMatrix maximallyMixed(std::size_t d);

  const ComplexMatrix& matrix() const { return matrix_; }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t dim() const { return matrix_.rows(); }
  bool isBipartite() const { return dims_.size() == 2; }
  /// Throws DimensionError for single-system states.
  BipartiteDims bipartite() const;
  double clipMagnitude() const { return clip_; }

 private:
  ComplexMatrix matrix_;
  std::vector<std::size_t> dims_;
  double clip_ = 0.0;
};

/// Bloch vector in the convention rho = I/2 + m.sigma, so |m| <= 1/2.
struct BlochVector {
  double m1 = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  double normSquared() const { return m1 * m1 + m2 * m2 + m3 * m3; }
};

struct SpectralDecomposition {
  std::vector<double> weights;  // descending
  ComplexMatrix states;         // columns
};

/// Pauli matrices X, Y, Z (index 1..3); index 0 is the identity.
const ComplexMatrix& pauli(int k);

double purity(const DensityMatrix& rho);
std::size_t rankEps(const DensityMatrix& rho, double tol = 1e-7);
std::size_t rankEps(const ComplexMatrix& psd, double tol = 1e-7);
SpectralDecomposition spectralDecomposition(const DensityMatrix& rho);

/// Throws DomainError when |m| exceeds 1/2 by more than 1e-12.
DensityMatrix fromBloch(const BlochVector& v);
/// Requires a qubit state.
BlochVector toBloch(const DensityMatrix& rho);

/// 1/2 ||rho - sigma||_1.
double traceDistance(const DensityMatrix& rho, const DensityMatrix& sigma);
/// ||rho - sigma||_1 (the convention used by solver thresholds).
double traceNormDistance(const ComplexMatrix& rho, const ComplexMatrix& sigma);

/// Reduced state on S or E of a bipartite state.
DensityMatrix reduce(const DensityMatrix& rho, linalg::Subsystem keep);
/// Product state with dims {a.dim(), b.dim()}.
DensityMatrix product(const DensityMatrix& a, const DensityMatrix& b);

/// Unitary on a bipartite space (or a single system with dE = 1).
class UnitaryGate {
 public:
  /// Throws DomainError when U^dagger U deviates from I by more than tol.
  UnitaryGate(ComplexMatrix u, BipartiteDims dims, std::string name = "", double tol = 1e-9);
  const ComplexMatrix& matrix() const { return u_; }
  BipartiteDims dims() const { return dims_; }
  const std::string& name() const { return name_; }
  UnitaryGate adjoint() const;
  /// U rho U^dagger.
  ComplexMatrix conjugate(const ComplexMatrix& rho) const;

 private:
  ComplexMatrix u_;
  BipartiteDims dims_;
  std::string name_;
};

UnitaryGate operator*(const UnitaryGate& a, const UnitaryGate& b);

/// Explicit-state random source. Gaussians use Box-Muller on the raw
/// mt19937_64 stream (whose output is fixed by the standard) so sequences do
/// not depend on the library's distribution implementations.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed);
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double gaussian();
  /// Real and imaginary parts are independent N(0, 1/2).
  Complex complexGaussian();
  std::uint64_t next();

 private:
  std::mt19937_64 engine_;
  bool hasSpare_ = false;
  double spare_ = 0.0;
};

ComplexMatrix randomPureVector(std::size_t dim, Sampler& rng);
/// Haar pure state on a dim x rank extension, traced down to rank `rank`.
DensityMatrix randomState(std::vector<std::size_t> dims, std::size_t rank, Sampler& rng);
DensityMatrix randomState(std::vector<std::size_t> dims, std::size_t rank, std::uint64_t seed);
/// Haar unitary by Gram-Schmidt of a complex Gaussian matrix.
ComplexMatrix randomUnitaryMatrix(std::size_t dim, Sampler& rng);
UnitaryGate randomUnitary(BipartiteDims dims, Sampler& rng);
UnitaryGate randomUnitary(std::size_t dim, std::uint64_t seed);
/// A (x) B with independent Haar factors.
UnitaryGate randomLocalUnitary(BipartiteDims dims, Sampler& rng);

}  // namespace openqdyn::states

#endif  // OPENQDYN_STATES_HPP_
