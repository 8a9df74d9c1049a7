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

#include "openqdyn/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "openqdyn/optimize.hpp"

namespace openqdyn::genmodel {

using linalg::hermitianEig;
using linalg::Subsystem;

namespace {

constexpr BipartiteDims kQubits{2, 2};

double realInner(const ComplexMatrix& a, const ComplexMatrix& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (std::conj(a[i]) * b[i]).real();
  return s;
}

double minEigenvalue(const ComplexMatrix& h) {
  return hermitianEig(linalg::hermitianPart(h), 1e-6).eigenvalues.back();
}

// Orthonormal basis of Herm(d) under <A, B> = Re tr(A B).
std::vector<ComplexMatrix> hermitianBasis(std::size_t d) {
  std::vector<ComplexMatrix> out;
  const double r = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < d; ++i) {
    ComplexMatrix e(d, d);
    e(i, i) = 1.0;
    out.push_back(e);
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      ComplexMatrix s(d, d);
      s(i, j) = r;
      s(j, i) = r;
      out.push_back(s);
      ComplexMatrix a(d, d);
      a(i, j) = Complex(0.0, r);
      a(j, i) = Complex(0.0, -r);
      out.push_back(a);
    }
  return out;
}

ComplexMatrix supportProjector(const ComplexMatrix& rho, double tol) {
  const auto s = hermitianEig(rho);
  return linalg::applySpectralFunction(s, [tol](double l) { return l > tol ? 1.0 : 0.0; });
}

ComplexMatrix pptProject(const ComplexMatrix& x, BipartiteDims dims) {
  return linalg::partialTranspose(linalg::projectPsd(linalg::partialTranspose(x, dims)), dims);
}

struct ConeProjection {
  ComplexMatrix x;
  ComplexMatrix p;  // PSD part of the displacement x - input
  ComplexMatrix q;  // PSD Q with Q^Gamma the PPT part (separable only)
};

// Affine constraints (trace and both marginals) restricted to the face
// spanned by the columns of v.
class AffineSet {
 public:
  AffineSet(const GenerationProblem& p, double supportTol) : dims_(p.u.dims()) {
    const std::size_t n = dims_.dS * dims_.dE;
    const ComplexMatrix& u = p.u.matrix();
    const ComplexMatrix idE = ComplexMatrix::identity(dims_.dE);
    const ComplexMatrix p1 = linalg::tensor(supportProjector(p.rhoS.matrix(), supportTol), idE);
    const ComplexMatrix p2 =
        u.adjoint() * linalg::tensor(supportProjector(p.rhoSPrime.matrix(), supportTol), idE) * u;
    const auto s = hermitianEig(linalg::hermitianPart(0.5 * (p1 + p2)), 1e-6);
    std::size_t k = 0;
    while (k < n && s.eigenvalues[k] >= 1.0 - 1e-9) ++k;
    v_ = ComplexMatrix(n, k);
    for (std::size_t j = 0; j < k; ++j) v_.setColumn(j, s.eigenvectors.column(j));
    pv_ = v_ * v_.adjoint();

    for (const ComplexMatrix& b : hermitianBasis(dims_.dS)) {
      const ComplexMatrix full = linalg::tensor(b, idE);
      f_.push_back(v_.adjoint() * full * v_);
      b_.push_back(realInner(b, p.rhoS.matrix()));
    }
    for (const ComplexMatrix& b : hermitianBasis(dims_.dS)) {
      const ComplexMatrix full = u.adjoint() * linalg::tensor(b, idE) * u;
      f_.push_back(v_.adjoint() * full * v_);
      b_.push_back(realInner(b, p.rhoSPrime.matrix()));
    }
    const std::size_t m = f_.size();
    ComplexMatrix g(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) g(i, j) = realInner(f_[i], f_[j]);
    const auto gs = hermitianEig(g, 1e-6);
    const double top = std::max(gs.eigenvalues.empty() ? 0.0 : gs.eigenvalues.front(), 0.0);
    rank_ = 0;
    for (double l : gs.eigenvalues)
      if (l > 1e-10 * std::max(top, 1.0)) ++rank_;
    const ComplexMatrix gp = linalg::applySpectralFunction(
        gs, [&](double l) { return l > 1e-10 * std::max(top, 1.0) ? 1.0 / l : 0.0; });
    gPinv_.assign(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) gPinv_[i * m + j] = gp(i, j).real();

    // b = b_range + r with r orthogonal to the range of the constraint map.
    std::vector<double> y = applyPinv(b_);
    bRange_.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) bRange_[i] += g(i, j).real() * y[j];
    r_.resize(m);
    double rr = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      r_[i] = b_[i] - bRange_[i];
      rr += r_[i] * r_[i];
    }
    inconsistency_ = std::sqrt(rr);
    particular_ = ComplexMatrix(k, k);
    for (std::size_t i = 0; i < m; ++i) particular_ += Complex(y[i]) * f_[i];
  }

  std::size_t faceDim() const { return v_.cols(); }
  const ComplexMatrix& face() const { return v_; }
  double inconsistency() const { return inconsistency_; }
  const std::vector<double>& inconsistencyVector() const { return r_; }
  const std::vector<double>& b() const { return b_; }
  bool singleton() const { return rank_ == faceDim() * faceDim(); }
  ComplexMatrix particular() const { return v_ * particular_ * v_.adjoint(); }

  std::vector<double> applyPinv(const std::vector<double>& c) const {
    const std::size_t m = c.size();
    std::vector<double> y(m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) y[i] += gPinv_[i * m + j] * c[j];
    return y;
  }

  // Orthogonal projection onto {V s V^dag : <F_k, s> = b_range_k}.
  ComplexMatrix project(const ComplexMatrix& x) const {
    const std::size_t k = faceDim();
    if (k == 0) return ComplexMatrix(x.rows(), x.cols());
    ComplexMatrix s = linalg::hermitianPart(v_.adjoint() * x * v_);
    std::vector<double> c(f_.size());
    for (std::size_t i = 0; i < f_.size(); ++i) c[i] = realInner(f_[i], s) - bRange_[i];
    const std::vector<double> y = applyPinv(c);
    for (std::size_t i = 0; i < f_.size(); ++i) s -= Complex(y[i]) * f_[i];
    return v_ * s * v_.adjoint();
  }

  // sum_k y_k F_k on the face.
  ComplexMatrix faceOperator(const std::vector<double>& y) const {
    ComplexMatrix sf(faceDim(), faceDim());
    for (std::size_t i = 0; i < f_.size(); ++i) sf += Complex(y[i]) * f_[i];
    return linalg::hermitianPart(sf);
  }

  // T = A*(y) built from a displacement v; returns y.
  std::vector<double> certificateOperator(const ComplexMatrix& v, ComplexMatrix& t) const {
    const ComplexMatrix vf = linalg::hermitianPart(v_.adjoint() * v * v_);
    std::vector<double> c(f_.size());
    for (std::size_t i = 0; i < f_.size(); ++i) c[i] = realInner(f_[i], vf);
    const std::vector<double> y = applyPinv(c);
    ComplexMatrix sf(faceDim(), faceDim());
    for (std::size_t i = 0; i < f_.size(); ++i) sf += Complex(y[i]) * f_[i];
    t = v_ * sf * v_.adjoint() + (v - pv_ * v * pv_);
    t = linalg::hermitianPart(t);
    return y;
  }

 private:
  BipartiteDims dims_;
  ComplexMatrix v_;
  ComplexMatrix pv_;
  std::vector<ComplexMatrix> f_;
  std::vector<double> b_;
  std::vector<double> bRange_;
  std::vector<double> r_;
  std::vector<double> gPinv_;
  std::size_t rank_ = 0;
  double inconsistency_ = 0.0;
  ComplexMatrix particular_;
};

// The cone for one solve: PSD, PSD intersected with PPT, or block-diagonal in
// a fixed E basis.
class Cone {
 public:
  Cone(StateClass c, BipartiteDims dims, std::optional<ComplexMatrix> basis = std::nullopt)
      : class_(c), dims_(dims), basis_(std::move(basis)) {
    if (basis_) {
      for (std::size_t k = 0; k < basis_->cols(); ++k)
        blocks_.push_back(linalg::tensor(ComplexMatrix::identity(dims.dS),
                                         linalg::projector(basis_->column(k))));
    }
  }

  ComplexMatrix dephase(const ComplexMatrix& x) const {
    ComplexMatrix out(x.rows(), x.cols());
    for (const ComplexMatrix& p : blocks_) out += p * x * p;
    return out;
  }

  // Sets for the Dykstra cycle, applied in order.
  std::vector<std::function<ComplexMatrix(const ComplexMatrix&)>> pieces() const {
    switch (class_) {
      case StateClass::kSeparable:
        return {[](const ComplexMatrix& x) { return linalg::projectPsd(x); },
                [d = dims_](const ComplexMatrix& x) { return pptProject(x, d); }};
      case StateClass::kQC:
        return {[this](const ComplexMatrix& x) { return dephase(linalg::projectPsd(dephase(x))); }};
      default:
        return {[](const ComplexMatrix& x) { return linalg::projectPsd(x); }};
    }
  }

  // Exact (or Dykstra-converged) projection with the normal decomposition.
  ConeProjection project(const ComplexMatrix& z) const {
    ConeProjection out;
    if (class_ == StateClass::kSeparable) {
      ComplexMatrix w = z;
      ComplexMatrix p1(z.rows(), z.cols());
      ComplexMatrix p2(z.rows(), z.cols());
      for (int it = 0; it < 2000; ++it) {
        const ComplexMatrix prev = w;
        ComplexMatrix y = w + p1;
        const ComplexMatrix w1 = linalg::projectPsd(y);
        p1 = y - w1;
        y = w1 + p2;
        w = pptProject(y, dims_);
        p2 = y - w;
        if (linalg::frobeniusNorm(w - prev) < 1e-15) break;
      }
      out.x = w;
      out.p = -1.0 * p1;
      out.q = linalg::partialTranspose(-1.0 * p2, dims_);
      return out;
    }
    out.x = class_ == StateClass::kQC ? dephase(linalg::projectPsd(dephase(z))) : linalg::projectPsd(z);
    out.p = out.x - z;
    return out;
  }

  // Lower bound of <T, X> over unit-trace X in the cone.
  double lowerBound(const ComplexMatrix& t, const ConeProjection& last) const {
    switch (class_) {
      case StateClass::kSeparable: {
        const ComplexMatrix e = t - last.p - linalg::partialTranspose(last.q, dims_);
        return std::max(minEigenvalue(t), minEigenvalue(e));
      }
      case StateClass::kQC:
        return minEigenvalue(dephase(t));
      default:
        return minEigenvalue(t);
    }
  }

  StateClass stateClass() const { return class_; }
  const std::optional<ComplexMatrix>& basis() const { return basis_; }

 private:
  StateClass class_;
  BipartiteDims dims_;
  std::optional<ComplexMatrix> basis_;
  std::vector<ComplexMatrix> blocks_;
};

struct Candidate {
  std::optional<ComplexMatrix> rho;
  double residual = std::numeric_limits<double>::infinity();
  bool member = false;
};

Candidate evaluate(const GenerationProblem& p, const Cone& cone, const ComplexMatrix& x, double tol) {
  Candidate c;
  ComplexMatrix rho = linalg::projectPsd(linalg::hermitianPart(x));
  const double tr = rho.trace().real();
  if (!(tr > 1e-12)) return c;
  rho *= Complex(1.0 / tr);
  c.residual = generationResidual(p, rho);
  c.member = classMember(cone.stateClass(), rho, p.u.dims(), tol, cone.basis());
  c.rho = std::move(rho);
  return c;
}

struct DykstraRun {
  ComplexMatrix x;
  Candidate best;
  int iterations = 0;
  bool converged = false;  // found a witness
  bool stalled = false;
};

DykstraRun dykstra(const GenerationProblem& p, const AffineSet& a, const Cone& cone, int maxIterations,
                   int checkEvery, double tol) {
  const std::size_t n = p.u.matrix().rows();
  const auto pieces = cone.pieces();
  std::vector<ComplexMatrix> inc(pieces.size(), ComplexMatrix(n, n));
  DykstraRun run;
  run.x = a.project((1.0 / static_cast<double>(n)) * ComplexMatrix::identity(n));
  ComplexMatrix lastCheck = run.x;
  for (int it = 1; it <= maxIterations; ++it) {
    run.x = a.project(run.x);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const ComplexMatrix y = run.x + inc[i];
      run.x = pieces[i](y);
      inc[i] = y - run.x;
    }
    run.iterations = it;
    if (it % checkEvery == 0 || it == maxIterations) {
      Candidate c = evaluate(p, cone, run.x, tol);
      const bool ok = c.member && c.residual <= tol;
      if (c.residual < run.best.residual || (ok && !(run.best.member && run.best.residual <= tol)))
        run.best = c;
      if (ok) {
        run.best = c;
        run.converged = true;
        return run;
      }
      if (linalg::frobeniusNorm(run.x - lastCheck) < 1e-14) {
        run.stalled = true;
        return run;
      }
      lastCheck = run.x;
    }
  }
  return run;
}

DualCertificate certify(const AffineSet& a, const Cone& cone, const ComplexMatrix& start, int iterations) {
  ComplexMatrix xa = a.project(start);
  ConeProjection k = cone.project(xa);
  for (int it = 0; it < iterations; ++it) {
    const ComplexMatrix next = a.project(k.x);
    const double move = linalg::frobeniusNorm(next - xa);
    xa = next;
    k = cone.project(xa);
    if (move < 1e-14) break;
  }
  DualCertificate cert;
  cert.kind = "separating hyperplane from the limiting displacement";
  ComplexMatrix t;
  cert.y = a.certificateOperator(k.x - xa, t);
  cert.t = t;
  cert.lowerBound = cone.lowerBound(t, k);
  cert.objective = std::inner_product(cert.y.begin(), cert.y.end(), a.b().begin(), 0.0);
  double ny = 0.0;
  for (double v : cert.y) ny += v * v;
  const double scale = std::max({std::sqrt(ny), linalg::frobeniusNorm(t), 1e-300});
  cert.margin = (cert.lowerBound - cert.objective) / scale;
  return cert;
}

DualCertificate inconsistencyCertificate(const AffineSet& a, std::size_t n) {
  DualCertificate cert;
  cert.kind = "marginal constraints are inconsistent on the support face";
  const auto& r = a.inconsistencyVector();
  const double nr = a.inconsistency();
  cert.y.resize(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) cert.y[i] = nr > 0.0 ? -r[i] / nr : 0.0;
  // r is only numerically in the kernel of the constraint map, so the bound
  // uses the actual operator: y.b = <T, s> >= lambda_min(T) for every state s
  // on the face.
  const ComplexMatrix tf = a.faceOperator(cert.y);
  cert.lowerBound = a.faceDim() == 0 ? 0.0 : linalg::hermitianEig(tf).eigenvalues.back();
  cert.t = a.faceDim() == 0 ? ComplexMatrix(n, n) : a.face() * tf * a.face().adjoint();
  cert.objective = std::inner_product(cert.y.begin(), cert.y.end(), a.b().begin(), 0.0);
  const double scale = std::max({nr > 0.0 ? 1.0 : 0.0, linalg::frobeniusNorm(cert.t), 1e-300});
  cert.margin = (cert.lowerBound - cert.objective) / scale;
  return cert;
}

// Cholesky solve of (a + mu I) z = r for small symmetric positive a.
std::vector<double> solveShifted(std::vector<double> a, std::size_t m, double mu, std::vector<double> r) {
  for (std::size_t i = 0; i < m; ++i) a[i * m + i] += mu;
  for (std::size_t j = 0; j < m; ++j) {
    double d = a[j * m + j];
    for (std::size_t k = 0; k < j; ++k) d -= a[j * m + k] * a[j * m + k];
    d = std::sqrt(std::max(d, 1e-300));
    a[j * m + j] = d;
    for (std::size_t i = j + 1; i < m; ++i) {
      double s = a[i * m + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * m + k] * a[j * m + k];
      a[i * m + j] = s / d;
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < i; ++k) r[i] -= a[i * m + k] * r[k];
    r[i] /= a[i * m + i];
  }
  for (std::size_t i = m; i-- > 0;) {
    for (std::size_t k = i + 1; k < m; ++k) r[i] -= a[k * m + i] * r[k];
    r[i] /= a[i * m + i];
  }
  return r;
}

ComplexMatrix hermitianSqrt(const ComplexMatrix& h) {
  return linalg::applySpectralFunction(hermitianEig(linalg::hermitianPart(h), 1e-6),
                                       [](double l) { return std::sqrt(std::max(l, 0.0)); });
}

// Levenberg-Marquardt on a factored parametrization X = sum_b L_b(Y_b Y_b^dag),
// which is PSD (and in the class) by construction. Used to finish thin
// feasible sets where the projections crawl.
class FactoredPolish {
 public:
  FactoredPolish(const GenerationProblem& p, const AffineSet& a, const Cone& cone) : p_(p) {
    const BipartiteDims d = p.u.dims();
    if (cone.stateClass() == StateClass::kQC && cone.basis()) {
      for (std::size_t k = 0; k < d.dE; ++k) {
        const ComplexMatrix iso = linalg::tensor(ComplexMatrix::identity(d.dS), cone.basis()->column(k));
        isometries_.push_back(iso);
      }
    } else {
      isometries_.push_back(a.face());
    }
    basis_ = hermitianBasis(d.dS);
  }

  std::optional<ComplexMatrix> run(const ComplexMatrix& start, double tol, int maxSteps = 200) const {
    std::vector<double> theta;
    for (const ComplexMatrix& w : isometries_) {
      const std::size_t k = w.cols();
      const ComplexMatrix y = hermitianSqrt(w.adjoint() * start * w + (1e-3 / k) * ComplexMatrix::identity(k));
      for (std::size_t i = 0; i < y.size(); ++i) {
        theta.push_back(y[i].real());
        theta.push_back(y[i].imag());
      }
    }
    std::vector<double> r = residual(theta);
    double cost = norm2(r);
    double mu = 1e-3;
    const std::size_t m = r.size();
    const std::size_t np = theta.size();
    for (int step = 0; step < maxSteps && cost > 1e-30; ++step) {
      // Quadratic map: central differences give the exact Jacobian.
      std::vector<double> jac(m * np);
      const double h = 1e-4;
      for (std::size_t j = 0; j < np; ++j) {
        std::vector<double> tp = theta, tm = theta;
        tp[j] += h;
        tm[j] -= h;
        const auto rp = residual(tp), rm = residual(tm);
        for (std::size_t i = 0; i < m; ++i) jac[i * np + j] = (rp[i] - rm[i]) / (2.0 * h);
      }
      std::vector<double> jjt(m * m, 0.0);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k)
          for (std::size_t j = 0; j < np; ++j) jjt[i * m + k] += jac[i * np + j] * jac[k * np + j];
      bool accepted = false;
      for (int tries = 0; tries < 30 && !accepted; ++tries) {
        const std::vector<double> z = solveShifted(jjt, m, mu, r);
        std::vector<double> next = theta;
        for (std::size_t j = 0; j < np; ++j)
          for (std::size_t i = 0; i < m; ++i) next[j] -= jac[i * np + j] * z[i];
        const std::vector<double> rn = residual(next);
        const double cn = norm2(rn);
        if (cn < cost) {
          theta = std::move(next);
          r = rn;
          cost = cn;
          mu = std::max(mu / 3.0, 1e-15);
          accepted = true;
        } else {
          mu *= 4.0;
        }
      }
      if (!accepted) break;
    }
    ComplexMatrix x = assemble(theta);
    const double tr = x.trace().real();
    if (!(tr > 1e-12)) return std::nullopt;
    x *= Complex(1.0 / tr);
    if (generationResidual(p_, x) > tol) return std::nullopt;
    return x;
  }

 private:
  static double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
  }

  ComplexMatrix assemble(const std::vector<double>& theta) const {
    const std::size_t n = p_.u.matrix().rows();
    ComplexMatrix x(n, n);
    std::size_t pos = 0;
    for (const ComplexMatrix& w : isometries_) {
      const std::size_t k = w.cols();
      ComplexMatrix y(k, k);
      for (std::size_t i = 0; i < y.size(); ++i, pos += 2) y[i] = Complex(theta[pos], theta[pos + 1]);
      const ComplexMatrix wy = w * y;
      x += wy * wy.adjoint();
    }
    return x;
  }

  std::vector<double> residual(const std::vector<double>& theta) const {
    const ComplexMatrix x = assemble(theta);
    const BipartiteDims d = p_.u.dims();
    const ComplexMatrix s = linalg::partialTrace(x, d, Subsystem::kE) - p_.rhoS.matrix();
    const ComplexMatrix sp = linalg::partialTrace(p_.u.conjugate(x), d, Subsystem::kE) - p_.rhoSPrime.matrix();
    std::vector<double> r;
    for (const ComplexMatrix& b : basis_) r.push_back(realInner(b, s));
    for (const ComplexMatrix& b : basis_) r.push_back(realInner(b, sp));
    return r;
  }

  const GenerationProblem& p_;
  std::vector<ComplexMatrix> isometries_;
  std::vector<ComplexMatrix> basis_;
};

FeasibilityResult runConvex(const GenerationProblem& p, const Cone& cone, const SolverOptions& opt,
                            int maxIterations) {
  FeasibilityResult res;
  const std::size_t n = p.u.matrix().rows();
  const AffineSet a(p, opt.supportTolerance);
  res.faceDimension = a.faceDim();
  res.environmentBasis = cone.basis();
  const double tol = opt.feasibilityTolerance;

  auto finishWithCertificate = [&](DualCertificate cert, double residual) {
    res.residual = residual;
    res.status = cert.margin >= opt.certificateMargin ? Status::kInfeasible : Status::kUndecided;
    res.note = res.status == Status::kInfeasible ? cert.kind : "certificate margin below threshold";
    res.certificate = std::move(cert);
  };

  if (a.inconsistency() > tol || a.faceDim() == 0) {
    finishWithCertificate(inconsistencyCertificate(a, n), a.inconsistency());
    return res;
  }
  if (a.singleton()) {
    const ComplexMatrix x0 = a.particular();
    Candidate c = evaluate(p, cone, cone.project(x0).x, tol);
    if (c.member && c.residual <= tol) {
      res.status = Status::kFeasible;
      res.witness = DensityMatrix(*c.rho, {p.u.dims().dS, p.u.dims().dE});
      res.residual = c.residual;
      res.note = "unique point of the affine set on the support face";
      return res;
    }
    finishWithCertificate(certify(a, cone, x0, opt.certificateIterations), c.residual);
    return res;
  }
  DykstraRun run = dykstra(p, a, cone, std::min(maxIterations, opt.polishAfter), opt.checkEvery, tol);
  int spent = run.iterations;
  if (!run.converged && cone.stateClass() != StateClass::kSeparable) {
    const ComplexMatrix start = run.best.rho ? *run.best.rho : linalg::projectPsd(run.x);
    if (auto x = FactoredPolish(p, a, cone).run(start, tol)) {
      if (classMember(cone.stateClass(), *x, p.u.dims(), tol, cone.basis())) {
        res.status = Status::kFeasible;
        res.iterations = spent;
        res.residual = generationResidual(p, *x);
        res.witness = DensityMatrix(*x, {p.u.dims().dS, p.u.dims().dE});
        res.note = "projection iterate finished by factored least squares";
        return res;
      }
    }
  }
  if (!run.converged && maxIterations > opt.polishAfter) {
    run = dykstra(p, a, cone, maxIterations, opt.checkEvery, tol);
    spent += run.iterations;
  }
  res.iterations = spent;
  res.residual = run.best.residual;
  if (run.converged) {
    res.status = Status::kFeasible;
    res.witness = DensityMatrix(*run.best.rho, {p.u.dims().dS, p.u.dims().dE});
    return res;
  }
  if (run.best.residual <= 10.0 * tol) {
    res.status = Status::kUndecided;
    res.note = "residual within 10x tolerance but not below it";
    return res;
  }
  finishWithCertificate(certify(a, cone, run.x, opt.certificateIterations), run.best.residual);
  return res;
}

// Short projection run for one QC basis.
DykstraRun qcScreen(const GenerationProblem& p, const AffineSet& a, const ComplexMatrix& basis, int iterations,
                    double tol) {
  const Cone cone(StateClass::kQC, p.u.dims(), basis);
  return dykstra(p, a, cone, iterations, iterations, tol);
}

}  // namespace

std::string toString(StateClass c) {
  switch (c) {
    case StateClass::kAny: return "ANY";
    case StateClass::kSeparable: return "SEPARABLE";
    case StateClass::kQC: return "QC";
    case StateClass::kProduct: return "PRODUCT";
  }
  return "?";
}

std::string toString(Status s) {
  switch (s) {
    case Status::kFeasible: return "FEASIBLE";
    case Status::kInfeasible: return "INFEASIBLE";
    case Status::kUndecided: return "UNDECIDED";
  }
  return "?";
}

StateClass stateClassFromString(const std::string& s) {
  std::string u = s;
  std::transform(u.begin(), u.end(), u.begin(), [](unsigned char ch) { return std::toupper(ch); });
  if (u == "ANY") return StateClass::kAny;
  if (u == "SEPARABLE" || u == "SEP") return StateClass::kSeparable;
  if (u == "QC") return StateClass::kQC;
  if (u == "PRODUCT") return StateClass::kProduct;
  throw DomainError("unknown state class: " + s);
}

void GenerationProblem::validate() const {
  const BipartiteDims d = u.dims();
  if (rhoS.dim() != d.dS || rhoSPrime.dim() != d.dS) {
    throw DimensionError("generation problem: marginal dimensions do not match the unitary");
  }
}

double generationResidual(const GenerationProblem& p, const ComplexMatrix& rhoSE) {
  const BipartiteDims d = p.u.dims();
  const ComplexMatrix s = linalg::partialTrace(rhoSE, d, Subsystem::kE);
  const ComplexMatrix sp = linalg::partialTrace(p.u.conjugate(rhoSE), d, Subsystem::kE);
  return linalg::traceNorm(linalg::hermitianPart(s - p.rhoS.matrix())) +
         linalg::traceNorm(linalg::hermitianPart(sp - p.rhoSPrime.matrix()));
}

bool classMember(StateClass c, const ComplexMatrix& rho, BipartiteDims dims, double tol,
                 const std::optional<ComplexMatrix>& environmentBasis) {
  if (minEigenvalue(rho) < -tol) return false;
  switch (c) {
    case StateClass::kAny:
      return true;
    case StateClass::kSeparable:
      if (!(dims == kQubits)) throw DimensionError("separability test needs two qubits");
      return minEigenvalue(linalg::partialTranspose(rho, dims)) >= -tol;
    case StateClass::kQC: {
      if (!environmentBasis) return false;
      const Cone cone(StateClass::kQC, dims, environmentBasis);
      return linalg::maxAbs(rho - cone.dephase(rho)) <= tol;
    }
    case StateClass::kProduct: {
      const ComplexMatrix s = linalg::partialTrace(rho, dims, Subsystem::kE);
      const ComplexMatrix e = linalg::partialTrace(rho, dims, Subsystem::kS);
      return linalg::maxAbs(rho - linalg::tensor(s, e)) <= tol;
    }
  }
  return false;
}

FeasibilityResult solveFeasibility(const GenerationProblem& p, const SolverOptions& opt) {
  p.validate();
  const BipartiteDims d = p.u.dims();
  if (p.stateClass == StateClass::kSeparable) {
    if (!(d == kQubits)) throw DimensionError("solveFeasibility: SEPARABLE needs two qubits");
  } else if (p.stateClass == StateClass::kAny) {
    if (d.dS > 4 || d.dE > 4) throw DimensionError("solveFeasibility: d_S, d_E must be at most 4");
  } else {
    throw DomainError("solveFeasibility: use searchQC or searchProduct for this class");
  }
  return runConvex(p, Cone(p.stateClass, d), opt, opt.maxIterations);
}

ComplexMatrix qubitBasis(double theta, double phi) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  const Complex e = std::polar(1.0, phi);
  return ComplexMatrix(2, 2, {c, -std::conj(e) * s, e * s, c});
}

FeasibilityResult solveQCFixedBasis(const GenerationProblem& p, const ComplexMatrix& basis,
                                    const SolverOptions& opt) {
  p.validate();
  if (p.u.dims().dE != basis.rows() || !linalg::isUnitary(basis, 1e-9)) {
    throw DimensionError("solveQCFixedBasis: basis must be a unitary on E");
  }
  return runConvex(p, Cone(StateClass::kQC, p.u.dims(), basis), opt, opt.maxIterations);
}

FeasibilityResult searchQC(const GenerationProblem& p, const SolverOptions& opt) {
  p.validate();
  if (p.u.dims().dE != 2) throw DimensionError("searchQC: d_E must be 2");
  const AffineSet a(p, opt.supportTolerance);
  const double tol = opt.feasibilityTolerance;
  if (a.inconsistency() > tol || a.faceDim() == 0) {
    // No joint state at all.
    return runConvex(p, Cone(StateClass::kAny, p.u.dims()), opt, opt.maxIterations);
  }

  // A single admissible point needs one projection per basis.
  const int screenIterations = a.singleton() ? 1 : opt.qcScreenIterations;
  struct Scored {
    double theta, phi, residual;
  };
  std::vector<Scored> grid;
  int screened = 0;
  for (int i = 0; i < opt.qcThetaSteps; ++i) {
    // theta = pi repeats theta = 0 with the basis order swapped.
    const double theta = kPi * i / opt.qcThetaSteps;
    const int phiSteps = i == 0 ? 1 : opt.qcPhiSteps;
    for (int j = 0; j < phiSteps; ++j) {
      const double phi = 2.0 * kPi * j / opt.qcPhiSteps;
      const ComplexMatrix basis = qubitBasis(theta, phi);
      DykstraRun run = qcScreen(p, a, basis, screenIterations, tol);
      screened += run.iterations;
      if (run.converged) {
        FeasibilityResult r;
        r.status = Status::kFeasible;
        r.witness = DensityMatrix(*run.best.rho, {p.u.dims().dS, p.u.dims().dE});
        r.residual = run.best.residual;
        r.iterations = screened;
        r.environmentBasis = basis;
        r.faceDimension = a.faceDim();
        r.note = "block-diagonal witness in the reported environment basis";
        return r;
      }
      grid.push_back({theta, phi, run.best.residual});
    }
  }
  std::stable_sort(grid.begin(), grid.end(), [](const Scored& x, const Scored& y) { return x.residual < y.residual; });

  const std::size_t candidates = std::min<std::size_t>(opt.qcCandidates, grid.size());
  optimize::NelderMeadOptions nm;
  nm.initialStep = 0.5 * kPi / opt.qcThetaSteps;
  nm.maxEvaluations = 300;
  nm.restarts = 1;
  nm.fTolerance = 1e-10;
  nm.xTolerance = 1e-8;
  const auto refined = optimize::nelderMead(
      [&](const std::vector<double>& x) {
        return qcScreen(p, a, qubitBasis(x[0], x[1]), 2 * screenIterations, tol).best.residual;
      },
      {grid.front().theta, grid.front().phi}, nm);

  std::vector<std::pair<double, double>> bases = {{refined.x[0], refined.x[1]}};
  for (std::size_t i = 0; i < candidates; ++i) bases.push_back({grid[i].theta, grid[i].phi});

  const double gap = std::min(refined.value, grid.front().residual);
  bool allCertified = true;
  FeasibilityResult best;
  best.residual = std::numeric_limits<double>::infinity();
  int iterations = screened;
  for (const auto& [theta, phi] : bases) {
    FeasibilityResult r = runConvex(p, Cone(StateClass::kQC, p.u.dims(), qubitBasis(theta, phi)), opt,
                                    opt.maxIterations);
    iterations += r.iterations;
    if (r.status == Status::kFeasible) {
      r.iterations = iterations;
      r.note = "block-diagonal witness in the reported environment basis";
      return r;
    }
    if (r.status != Status::kInfeasible) allCertified = false;
    if (r.residual < best.residual) best = r;
  }
  best.iterations = iterations;
  if (allCertified && gap > opt.qcGapThreshold) {
    best.status = Status::kInfeasible;
    best.note = "no QC basis on the grid or its refinement comes close; best candidates certified";
  } else {
    best.status = Status::kUndecided;
    best.note = "QC basis search inconclusive";
  }
  best.residual = gap;
  return best;
}

FeasibilityResult searchProduct(const GenerationProblem& p, const SolverOptions& opt) {
  p.validate();
  const BipartiteDims d = p.u.dims();
  if (d.dE != 2) throw DimensionError("searchProduct: d_E must be 2");
  // rho_S' (omega) is affine in the Bloch vector of omega.
  std::array<ComplexMatrix, 4> terms;
  for (int k = 0; k < 4; ++k) {
    const ComplexMatrix sigma = k == 0 ? 0.5 * ComplexMatrix::identity(2) : states::pauli(k);
    terms[k] = linalg::partialTrace(p.u.conjugate(linalg::tensor(p.rhoS.matrix(), sigma)), d, Subsystem::kE);
  }
  const ComplexMatrix offset = terms[0] - p.rhoSPrime.matrix();
  auto clamp = [](std::vector<double> m) {
    const double r = std::sqrt(m[0] * m[0] + m[1] * m[1] + m[2] * m[2]);
    if (r > 0.5)
      for (double& x : m) x *= 0.5 / r;
    return m;
  };
  auto f = [&](const std::vector<double>& raw) {
    const std::vector<double> m = clamp(raw);
    ComplexMatrix diff = offset;
    for (int k = 1; k < 4; ++k) diff += Complex(m[k - 1]) * terms[k];
    return linalg::traceNorm(linalg::hermitianPart(diff));
  };

  struct Point {
    std::vector<double> m;
    double value;
  };
  std::vector<Point> grid;
  const int g = opt.productGrid;
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j)
      for (int k = 0; k < g; ++k) {
        std::vector<double> m = {-0.5 + static_cast<double>(i) / (g - 1), -0.5 + static_cast<double>(j) / (g - 1),
                                 -0.5 + static_cast<double>(k) / (g - 1)};
        if (m[0] * m[0] + m[1] * m[1] + m[2] * m[2] > 0.25 + 1e-12) continue;
        grid.push_back({m, f(m)});
      }
  std::stable_sort(grid.begin(), grid.end(), [](const Point& a, const Point& b) { return a.value < b.value; });

  optimize::NelderMeadOptions nm;
  nm.initialStep = 0.5 / (g - 1);
  nm.fTolerance = 1e-13;
  nm.xTolerance = 1e-11;
  Point best = grid.front();
  int evaluations = static_cast<int>(grid.size());
  for (int s = 0; s < std::min<int>(opt.productStarts, static_cast<int>(grid.size())); ++s) {
    const auto r = optimize::nelderMead(f, grid[s].m, nm);
    evaluations += r.evaluations;
    if (r.value < best.value) best = {clamp(r.x), r.value};
  }

  FeasibilityResult res;
  res.iterations = evaluations;
  res.minObjective = best.value;
  const DensityMatrix omega = states::fromBloch({best.m[0], best.m[1], best.m[2]});
  res.environmentState = omega;
  const ComplexMatrix joint = linalg::tensor(p.rhoS.matrix(), omega.matrix());
  res.residual = generationResidual(p, joint);
  if (best.value <= opt.productThreshold) {
    res.status = Status::kFeasible;
    res.witness = DensityMatrix(joint, {d.dS, d.dE});
    res.note = "product witness rho_S (x) omega";
  } else {
    res.status = Status::kInfeasible;
    res.note = "minimum final-state error over the environment Bloch ball is positive";
  }
  return res;
}

FeasibilityResult solve(const GenerationProblem& p, const SolverOptions& opt) {
  switch (p.stateClass) {
    case StateClass::kQC: return searchQC(p, opt);
    case StateClass::kProduct: return searchProduct(p, opt);
    default: return solveFeasibility(p, opt);
  }
}

RobustnessReport robustnessEpsilon(const UnitaryGate& u, const DensityMatrix& rhoS,
                                   const DensityMatrix& rhoSPrime, const SolverOptions& opt) {
  if (!(u.dims() == kQubits)) throw DimensionError("robustnessEpsilon: two qubits expected");
  const FeasibilityResult r = searchProduct({u, rhoS, rhoSPrime, StateClass::kProduct}, opt);
  RobustnessReport rep;
  rep.epsilon = r.minObjective;
  rep.halfNormEpsilon = 0.5 * r.minObjective;
  rep.lipschitz = 1.0;
  rep.delta = rep.epsilon / 2.0;
  rep.guarantee =
      "any rho_SE within delta of a product rho_S (x) omega in trace norm yields final-state error > epsilon/2";
  return rep;
}

Lemma2Verdict lemma2Check(const UnitaryGate& u, const DensityMatrix& rhoS, const ComplexMatrix& psi,
                          const SolverOptions& opt) {
  if (!(u.dims() == kQubits)) throw DimensionError("lemma2Check: two qubits expected");
  if (states::rankEps(rhoS) != 2) throw DomainError("lemma2Check: rho_S must have rank 2");
  Lemma2Verdict v;
  v.unitaryClass = magic::classify(u).label;
  v.swapNecessary = true;
  const DensityMatrix target = DensityMatrix::pure(linalg::normalized(psi), {2});
  v.product = searchProduct({u, rhoS, target, StateClass::kProduct}, opt);
  v.productFeasible = v.product.status == Status::kFeasible;
  v.consistent = !v.productFeasible || v.unitaryClass == magic::UnitaryClass::kSWAP;
  return v;
}

}  // namespace openqdyn::genmodel
