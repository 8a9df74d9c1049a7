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

#include "openqdyn/states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace openqdyn::states {

using linalg::hermitianEig;
using linalg::HermitianSpectrum;
using linalg::Subsystem;

namespace {

std::size_t dimProduct(const std::vector<std::size_t>& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

}  // namespace

DensityMatrix::DensityMatrix(const ComplexMatrix& m, std::vector<std::size_t> dims, double tol)
    : dims_(std::move(dims)) {
  if (dims_.empty() || dims_.size() > 2) {
    throw DimensionError("DensityMatrix: dims must list one or two subsystems");
  }
  if (!m.isSquare() || m.rows() == 0 || dimProduct(dims_) != m.rows()) {
    throw DimensionError("DensityMatrix: dims do not match a " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + " matrix");
  }
  if (!linalg::isHermitian(m, tol)) throw DomainError("DensityMatrix: matrix is not Hermitian");
  const Complex tr = m.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > tol) {
    throw DomainError("DensityMatrix: trace " + std::to_string(tr.real()) + " differs from 1");
  }
  const HermitianSpectrum s = hermitianEig(m, tol);
  if (s.eigenvalues.back() < -tol) {
    throw DomainError("DensityMatrix: eigenvalue " + std::to_string(s.eigenvalues.back()) +
                      " below zero");
  }
  // Below these floors the input is left alone so parsing a serialized state
  // reproduces it bit for bit.
  if (s.eigenvalues.back() < -1e-12) {
    double total = 0.0;
    for (double l : s.eigenvalues) {
      if (l < 0.0) clip_ += -l;
      else total += l;
    }
    matrix_ = (1.0 / total) *
              linalg::applySpectralFunction(s, [](double l) { return l > 0.0 ? l : 0.0; });
  } else {
    matrix_ = linalg::hermitianPart(m);
    const double trace = matrix_.trace().real();
    if (std::abs(trace - 1.0) > 1e-14) matrix_ *= 1.0 / trace;
  }
}

DensityMatrix::DensityMatrix(const ComplexMatrix& m, double tol)
    : DensityMatrix(m, std::vector<std::size_t>{m.rows()}, tol) {}

DensityMatrix DensityMatrix::pure(const ComplexMatrix& ket, std::vector<std::size_t> dims) {
  if (!ket.isColumn()) throw DimensionError("DensityMatrix::pure: expected a column vector");
  const double nrm = linalg::vectorNorm(ket);
  if (std::abs(nrm - 1.0) > 1e-9) throw DomainError("DensityMatrix::pure: vector not normalized");
  return DensityMatrix(linalg::projector((1.0 / nrm) * ket), std::move(dims));
}

DensityMatrix DensityMatrix::maximallyMixed(std::size_t d) {
  return DensityMatrix((1.0 / static_cast<double>(d)) * ComplexMatrix::identity(d));
}

BipartiteDims DensityMatrix::bipartite() const {
  if (dims_.size() != 2) throw DimensionError("DensityMatrix: state is not bipartite");
  return BipartiteDims{dims_[0], dims_[1]};
}

const ComplexMatrix& pauli(int k) {
  static const std::array<ComplexMatrix, 4> kPauli = {
      ComplexMatrix::identity(2),
      ComplexMatrix(2, 2, {0.0, 1.0, 1.0, 0.0}),
      ComplexMatrix(2, 2, {0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0}),
      ComplexMatrix(2, 2, {1.0, 0.0, 0.0, -1.0}),
  };
  if (k < 0 || k > 3) throw DomainError("pauli: index must be 0..3");
  return kPauli[static_cast<std::size_t>(k)];
}

double purity(const DensityMatrix& rho) {
  double s = 0.0;
  for (const Complex& z : rho.matrix().entries()) s += std::norm(z);
  return s;
}

std::size_t rankEps(const ComplexMatrix& psd, double tol) {
  const HermitianSpectrum s = hermitianEig(psd, 1e-6);
  return static_cast<std::size_t>(
      std::count_if(s.eigenvalues.begin(), s.eigenvalues.end(), [&](double l) { return l > tol; }));
}

std::size_t rankEps(const DensityMatrix& rho, double tol) { return rankEps(rho.matrix(), tol); }

SpectralDecomposition spectralDecomposition(const DensityMatrix& rho) {
  HermitianSpectrum s = hermitianEig(rho.matrix());
  for (double& l : s.eigenvalues) l = std::max(l, 0.0);
  return SpectralDecomposition{std::move(s.eigenvalues), std::move(s.eigenvectors)};
}

DensityMatrix fromBloch(const BlochVector& v) {
  if (!std::isfinite(v.normSquared()) || std::sqrt(v.normSquared()) > 0.5 + 1e-12) {
    throw DomainError("fromBloch: |m| exceeds 1/2");
  }
  ComplexMatrix m = 0.5 * pauli(0);
  m += v.m1 * pauli(1);
  m += v.m2 * pauli(2);
  m += v.m3 * pauli(3);
  return DensityMatrix(m);
}

BlochVector toBloch(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw DimensionError("toBloch: expected a qubit state");
  const ComplexMatrix& m = rho.matrix();
  return BlochVector{m(0, 1).real(), -m(0, 1).imag(), 0.5 * (m(0, 0).real() - m(1, 1).real())};
}

double traceNormDistance(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  return linalg::traceNorm(rho - sigma);
}

double traceDistance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return 0.5 * traceNormDistance(rho.matrix(), sigma.matrix());
}

DensityMatrix reduce(const DensityMatrix& rho, Subsystem keep) {
  const BipartiteDims dims = rho.bipartite();
  if (keep == Subsystem::kS) {
    return DensityMatrix(linalg::partialTrace(rho.matrix(), dims, Subsystem::kE));
  }
  return DensityMatrix(linalg::partialTrace(rho.matrix(), dims, Subsystem::kS));
}

DensityMatrix product(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(linalg::tensor(a.matrix(), b.matrix()), {a.dim(), b.dim()});
}

UnitaryGate::UnitaryGate(ComplexMatrix u, BipartiteDims dims, std::string name, double tol)
    : u_(std::move(u)), dims_(dims), name_(std::move(name)) {
  if (!u_.isSquare() || u_.rows() != dims_.total()) {
    throw DimensionError("UnitaryGate: matrix side " + std::to_string(u_.rows()) +
                         " does not match dims " + std::to_string(dims_.dS) + "x" +
                         std::to_string(dims_.dE));
  }
  if (!linalg::isUnitary(u_, tol)) throw DomainError("UnitaryGate: matrix is not unitary");
}

UnitaryGate UnitaryGate::adjoint() const {
  return UnitaryGate(u_.adjoint(), dims_, name_.empty() ? "" : name_ + "^dagger", 1e-6);
}

ComplexMatrix UnitaryGate::conjugate(const ComplexMatrix& rho) const {
  return u_ * rho * u_.adjoint();
}

UnitaryGate operator*(const UnitaryGate& a, const UnitaryGate& b) {
  if (!(a.dims() == b.dims())) throw DimensionError("UnitaryGate product: dims differ");
  return UnitaryGate(a.matrix() * b.matrix(), a.dims(), "", 1e-6);
}

Sampler::Sampler(std::uint64_t seed) : engine_(seed) {}

std::uint64_t Sampler::next() { return engine_(); }

double Sampler::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Sampler::gaussian() {
  if (hasSpare_) {
    hasSpare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * kPi * u2);
  hasSpare_ = true;
  return r * std::cos(2.0 * kPi * u2);
}

Complex Sampler::complexGaussian() {
  const double re = gaussian();
  const double im = gaussian();
  return Complex(re, im) * std::sqrt(0.5);
}

ComplexMatrix randomPureVector(std::size_t dim, Sampler& rng) {
  if (dim == 0) throw DimensionError("randomPureVector: zero dimension");
  ComplexMatrix v(dim, 1);
  for (std::size_t i = 0; i < dim; ++i) v[i] = rng.complexGaussian();
  return linalg::normalized(v);
}

DensityMatrix randomState(std::vector<std::size_t> dims, std::size_t rank, Sampler& rng) {
  const std::size_t dim = dimProduct(dims);
  if (rank == 0 || rank > dim) {
    throw DomainError("randomState: rank " + std::to_string(rank) + " invalid for dimension " +
                      std::to_string(dim));
  }
  const ComplexMatrix psi = randomPureVector(dim * rank, rng);
  const ComplexMatrix rho =
      linalg::partialTrace(linalg::projector(psi), BipartiteDims{dim, rank}, Subsystem::kE);
  return DensityMatrix(rho, std::move(dims));
}

DensityMatrix randomState(std::vector<std::size_t> dims, std::size_t rank, std::uint64_t seed) {
  Sampler rng(seed);
  return randomState(std::move(dims), rank, rng);
}

ComplexMatrix randomUnitaryMatrix(std::size_t dim, Sampler& rng) {
  ComplexMatrix g(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) g(i, j) = rng.complexGaussian();
  ComplexMatrix q = linalg::orthonormalRange(g, 0.0);
  if (q.cols() != dim) throw DomainError("randomUnitaryMatrix: degenerate Gaussian sample");
  return q;
}

UnitaryGate randomUnitary(BipartiteDims dims, Sampler& rng) {
  return UnitaryGate(randomUnitaryMatrix(dims.total(), rng), dims, "random");
}

UnitaryGate randomUnitary(std::size_t dim, std::uint64_t seed) {
  Sampler rng(seed);
  return UnitaryGate(randomUnitaryMatrix(dim, rng), BipartiteDims{dim, 1}, "random");
}

UnitaryGate randomLocalUnitary(BipartiteDims dims, Sampler& rng) {
  const ComplexMatrix a = randomUnitaryMatrix(dims.dS, rng);
  const ComplexMatrix b = randomUnitaryMatrix(dims.dE, rng);
  return UnitaryGate(linalg::tensor(a, b), dims, "local");
}

}  // namespace openqdyn::states
