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

// Dense complex matrices for the small (side <= 16) operators used across
// the toolkit. Everything here is a pure function of its inputs.

#ifndef OPENQDYN_LINALG_HPP_
#define OPENQDYN_LINALG_HPP_

#include <cstddef>
#include <vector>

#include "openqdyn/common.hpp"

namespace openqdyn::linalg {

/// Row-major dense complex matrix. Column vectors are n x 1 matrices.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  /// Zero matrix of the given shape.
  ComplexMatrix(std::size_t rows, std::size_t cols);
  /// Takes ownership of row-major entries. Throws DimensionError on a size
  /// mismatch and DomainError on non-finite entries.
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(const std::vector<Complex>& d);
  static ComplexMatrix diagonal(const std::vector<double>& d);
  static ComplexMatrix column(const std::vector<Complex>& v);
  /// |i> in dimension n.
  static ComplexMatrix basisVector(std::size_t n, std::size_t i);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool isSquare() const { return rows_ == cols_; }
  bool isColumn() const { return cols_ == 1; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  /// Flat access, mostly for column vectors.
  Complex& operator[](std::size_t k) { return data_[k]; }
  const Complex& operator[](std::size_t k) const { return data_[k]; }
  const std::vector<Complex>& entries() const { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conj() const;
  Complex trace() const;
  ComplexMatrix column(std::size_t j) const;
  void setColumn(std::size_t j, const ComplexMatrix& v);

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(Complex s);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);
ComplexMatrix operator*(ComplexMatrix a, Complex s);

/// Subsystem dimensions of a bipartite space; S is the left tensor factor.
struct BipartiteDims {
  std::size_t dS = 2;
  std::size_t dE = 2;
  std::size_t total() const { return dS * dE; }
  bool operator==(const BipartiteDims&) const = default;
};

enum class Subsystem { kS, kE };

/// Kronecker product, entry (i*rows_b + k, j*cols_b + l) = a(i,j) b(k,l).
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

/// Traces out `which`; the result lives on the other factor.
ComplexMatrix partialTrace(const ComplexMatrix& m, BipartiteDims dims, Subsystem which);

/// Transpose on the E factor only.
ComplexMatrix partialTranspose(const ComplexMatrix& m, BipartiteDims dims);

struct HermitianSpectrum {
  std::vector<double> eigenvalues;  // descending
  ComplexMatrix eigenvectors;       // columns, largest component real positive
  double symmetrizationDeviation = 0.0;  // max |m - m^dagger| / 2 removed on input
  int sweeps = 0;
};

/// Cyclic complex Jacobi. Throws DomainError when the input deviates from
/// Hermitian by more than `hermitianTol` in any entry.
HermitianSpectrum hermitianEig(const ComplexMatrix& m, double hermitianTol = 1e-9);

/// Singular values (descending) via the eigenvalues of a^dagger a.
std::vector<double> singularValues(const ComplexMatrix& a);

/// Sum of singular values. Hermitian input uses the eigenvalues directly.
double traceNorm(const ComplexMatrix& m);

double frobeniusNorm(const ComplexMatrix& m);
double maxAbs(const ComplexMatrix& m);
double maxAbsDiff(const ComplexMatrix& a, const ComplexMatrix& b);

/// <a|b> for column vectors.
Complex inner(const ComplexMatrix& a, const ComplexMatrix& b);
double vectorNorm(const ComplexMatrix& v);
ComplexMatrix normalized(const ComplexMatrix& v);
/// |v><v|.
ComplexMatrix projector(const ComplexMatrix& v);
/// Frobenius inner product tr(a^dagger b).
Complex hilbertSchmidt(const ComplexMatrix& a, const ComplexMatrix& b);

bool isHermitian(const ComplexMatrix& m, double tol);
bool isUnitary(const ComplexMatrix& m, double tol);
/// (m + m^dagger) / 2.
ComplexMatrix hermitianPart(const ComplexMatrix& m);
Complex determinant(const ComplexMatrix& m);

/// V f(diag) V^dagger for a Hermitian matrix.
template <typename F>
ComplexMatrix applySpectralFunction(const HermitianSpectrum& s, F f) {
  const std::size_t n = s.eigenvalues.size();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double w = f(s.eigenvalues[k]);
    if (w == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vik = s.eigenvectors(i, k) * w;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(s.eigenvectors(j, k));
    }
  }
  return out;
}

/// Projection onto the positive semidefinite cone in Frobenius norm.
ComplexMatrix projectPsd(const ComplexMatrix& hermitian);

/// Orthonormal basis (columns) of the range of the given columns, found by
/// modified Gram-Schmidt with re-orthogonalization; columns whose residual
/// norm falls below `tol` are skipped.
ComplexMatrix orthonormalRange(const ComplexMatrix& columns, double tol = 1e-10);

}  // namespace openqdyn::linalg

#endif  // OPENQDYN_LINALG_HPP_
