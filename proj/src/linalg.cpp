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

#include "openqdyn/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace openqdyn::linalg {

namespace {

void requireSameShape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
  }
}

void requireBipartite(const ComplexMatrix& m, BipartiteDims dims, const char* op) {
  if (!m.isSquare() || m.rows() != dims.total() || dims.dS == 0 || dims.dE == 0) {
    throw DimensionError(std::string(op) + ": expected square side " +
                         std::to_string(dims.total()) + ", got " + std::to_string(m.rows()) +
                         "x" + std::to_string(m.cols()));
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex(0.0, 0.0)) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw DimensionError("ComplexMatrix: " + std::to_string(data_.size()) +
                         " entries for shape " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
  for (const Complex& z : data_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw DomainError("ComplexMatrix: non-finite entry");
    }
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<Complex>& d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<double>& d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::column(const std::vector<Complex>& v) {
  return ComplexMatrix(v.size(), 1, v);
}

ComplexMatrix ComplexMatrix::basisVector(std::size_t n, std::size_t i) {
  if (i >= n) throw DimensionError("basisVector: index out of range");
  ComplexMatrix v(n, 1);
  v[i] = 1.0;
  return v;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

ComplexMatrix ComplexMatrix::conj() const {
  ComplexMatrix out(*this);
  for (Complex& z : out.data_) z = std::conj(z);
  return out;
}

Complex ComplexMatrix::trace() const {
  if (!isSquare()) throw DimensionError("trace: matrix is not square");
  Complex t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

ComplexMatrix ComplexMatrix::column(std::size_t j) const {
  if (j >= cols_) throw DimensionError("column: index out of range");
  ComplexMatrix v(rows_, 1);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

void ComplexMatrix::setColumn(std::size_t j, const ComplexMatrix& v) {
  if (j >= cols_ || v.size() != rows_) throw DimensionError("setColumn: shape mismatch");
  for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  requireSameShape(*this, o, "operator+");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  requireSameShape(*this, o, "operator-");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (Complex& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("operator*: inner dimensions " + std::to_string(a.cols()) + " and " +
                         std::to_string(b.rows()));
  }
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

ComplexMatrix partialTrace(const ComplexMatrix& m, BipartiteDims dims, Subsystem which) {
  requireBipartite(m, dims, "partialTrace");
  const std::size_t dS = dims.dS;
  const std::size_t dE = dims.dE;
  if (which == Subsystem::kE) {
    ComplexMatrix out(dS, dS);
    for (std::size_t i = 0; i < dS; ++i)
      for (std::size_t j = 0; j < dS; ++j)
        for (std::size_t k = 0; k < dE; ++k) out(i, j) += m(i * dE + k, j * dE + k);
    return out;
  }
  ComplexMatrix out(dE, dE);
  for (std::size_t k = 0; k < dE; ++k)
    for (std::size_t l = 0; l < dE; ++l)
      for (std::size_t i = 0; i < dS; ++i) out(k, l) += m(i * dE + k, i * dE + l);
  return out;
}

ComplexMatrix partialTranspose(const ComplexMatrix& m, BipartiteDims dims) {
  requireBipartite(m, dims, "partialTranspose");
  const std::size_t dS = dims.dS;
  const std::size_t dE = dims.dE;
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < dS; ++i)
    for (std::size_t j = 0; j < dS; ++j)
      for (std::size_t k = 0; k < dE; ++k)
        for (std::size_t l = 0; l < dE; ++l) out(i * dE + k, j * dE + l) = m(i * dE + l, j * dE + k);
  return out;
}

double maxAbs(const ComplexMatrix& m) {
  double best = 0.0;
  for (const Complex& z : m.entries()) best = std::max(best, std::abs(z));
  return best;
}

double maxAbsDiff(const ComplexMatrix& a, const ComplexMatrix& b) {
  requireSameShape(a, b, "maxAbsDiff");
  double best = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) best = std::max(best, std::abs(a[k] - b[k]));
  return best;
}

double frobeniusNorm(const ComplexMatrix& m) {
  double s = 0.0;
  for (const Complex& z : m.entries()) s += std::norm(z);
  return std::sqrt(s);
}

ComplexMatrix hermitianPart(const ComplexMatrix& m) {
  if (!m.isSquare()) throw DimensionError("hermitianPart: matrix is not square");
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  return out;
}

bool isHermitian(const ComplexMatrix& m, double tol) {
  if (!m.isSquare()) return false;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j)
      if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
  return true;
}

bool isUnitary(const ComplexMatrix& m, double tol) {
  if (!m.isSquare()) return false;
  return maxAbsDiff(m.adjoint() * m, ComplexMatrix::identity(m.rows())) <= tol;
}

HermitianSpectrum hermitianEig(const ComplexMatrix& m, double hermitianTol) {
  if (!m.isSquare()) throw DimensionError("hermitianEig: matrix is not square");
  const std::size_t n = m.rows();
  HermitianSpectrum out;
  double deviation = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      deviation = std::max(deviation, 0.5 * std::abs(m(i, j) - std::conj(m(j, i))));
  if (2.0 * deviation > hermitianTol) {
    throw DomainError("hermitianEig: input deviates from Hermitian by " +
                      std::to_string(2.0 * deviation));
  }
  out.symmetrizationDeviation = deviation;

  ComplexMatrix a = hermitianPart(m);
  for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double scale = std::max(1.0, frobeniusNorm(a));
  const double threshold = 1e-13 * scale;

  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q)
        if (p != q) off += std::norm(a(p, q));
    if (std::sqrt(off) < threshold) break;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex phase = apq / mag;  // exactly +-1 for real input
        const Complex gqp = -s * std::conj(phase);
        const Complex gqq = c * std::conj(phase);

        // A <- A G with G = [[c, s], [-s e^{-i phi}, c e^{-i phi}]] on (p, q).
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * c + akq * gqp;
          a(k, q) = akp * s + akq * gqq;
        }
        // A <- G^dagger A.
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk + std::conj(gqp) * aqk;
          a(q, k) = s * apk + std::conj(gqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = vkp * c + vkq * gqp;
          v(k, q) = vkp * s + vkq * gqq;
        }
      }
    }
  }
  out.sweeps = sweep;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() > a(y, y).real(); });
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.eigenvalues[k] = a(src, src).real();
    // Deterministic phase: the first component of maximal modulus is made real positive.
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double mod = std::abs(v(i, src));
      if (mod > best + 1e-12) {
        best = mod;
        arg = i;
      }
    }
    const Complex ph = v(arg, src) / std::abs(v(arg, src));
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, src) * std::conj(ph);
  }
  return out;
}

std::vector<double> singularValues(const ComplexMatrix& a) {
  const HermitianSpectrum s = hermitianEig(a.adjoint() * a, 1e-6);
  std::vector<double> out;
  out.reserve(s.eigenvalues.size());
  for (double l : s.eigenvalues) out.push_back(std::sqrt(std::max(l, 0.0)));
  return out;
}

double traceNorm(const ComplexMatrix& m) {
  if (!m.isSquare()) throw DimensionError("traceNorm: matrix is not square");
  if (m.rows() == 0) return 0.0;
  const double tol = 1e-12 * std::max(1.0, maxAbs(m));
  if (isHermitian(m, tol)) {
    double total = 0.0;
    for (double l : hermitianEig(m, 1.0).eigenvalues) total += std::abs(l);
    return total;
  }
  double total = 0.0;
  for (double s : singularValues(m)) total += s;
  return total;
}

Complex inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.size() != b.size()) throw DimensionError("inner: length mismatch");
  Complex s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
  return s;
}

double vectorNorm(const ComplexMatrix& v) { return frobeniusNorm(v); }

ComplexMatrix normalized(const ComplexMatrix& v) {
  const double nrm = vectorNorm(v);
  if (nrm == 0.0) throw DomainError("normalized: zero vector");
  return (1.0 / nrm) * v;
}

ComplexMatrix projector(const ComplexMatrix& v) {
  if (!v.isColumn()) throw DimensionError("projector: expected a column vector");
  return v * v.adjoint();
}

Complex hilbertSchmidt(const ComplexMatrix& a, const ComplexMatrix& b) {
  requireSameShape(a, b, "hilbertSchmidt");
  Complex s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
  return s;
}

Complex determinant(const ComplexMatrix& m) {
  if (!m.isSquare()) throw DimensionError("determinant: matrix is not square");
  ComplexMatrix a(m);
  const std::size_t n = a.rows();
  Complex det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(pivot, c))) pivot = r;
    if (a(pivot, c) == Complex(0.0, 0.0)) return 0.0;
    if (pivot != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(c, j), a(pivot, j));
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      const Complex f = a(r, c) / a(c, c);
      for (std::size_t j = c; j < n; ++j) a(r, j) -= f * a(c, j);
    }
  }
  return det;
}

ComplexMatrix projectPsd(const ComplexMatrix& hermitian) {
  const HermitianSpectrum s = hermitianEig(hermitian, 1e-6);
  return applySpectralFunction(s, [](double l) { return l > 0.0 ? l : 0.0; });
}

ComplexMatrix orthonormalRange(const ComplexMatrix& columns, double tol) {
  std::vector<ComplexMatrix> basis;
  for (std::size_t j = 0; j < columns.cols(); ++j) {
    ComplexMatrix v = columns.column(j);
    for (int pass = 0; pass < 2; ++pass)
      for (const ComplexMatrix& b : basis) v -= inner(b, v) * b;
    const double nrm = vectorNorm(v);
    if (nrm > tol) basis.push_back((1.0 / nrm) * v);
  }
  ComplexMatrix out(columns.rows(), basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) out.setColumn(j, basis[j]);
  return out;
}

}  // namespace openqdyn::linalg
