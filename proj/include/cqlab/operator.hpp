// Copyright 2026 The cqlab Authors.
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

// Dense Hermitian operator calculus on Eigen complex matrices.
//
// All routines are free functions templated on the Eigen expression type, so
// they accept matrices and expressions (A - c * B, A.adjoint(), ...) of any
// real scalar precision. Spectral projections follow the convention
//
//     {A > t} = sum of eigenprojections of A with eigenvalue > t
//
// with a configurable zero band around t (see Tolerances::zero_band).

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "cqlab/core.hpp"

namespace cqlab {

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Matrix = CMatrix<double>;
using Vector = RVector<double>;
using Complex = std::complex<double>;

enum class Comparator { Greater, GreaterEqual, Less, LessEqual };

// Eigenvalues ascending, eigenvectors as orthonormal columns.
template <typename Real>
struct SpectralDecomposition {
  RVector<Real> eigenvalues;
  CMatrix<Real> eigenvectors;

  Eigen::Index dim() const { return eigenvalues.size(); }
  Real max_abs() const {
    return eigenvalues.size() == 0 ? Real(0) : eigenvalues.cwiseAbs().maxCoeff();
  }
  // Absolute cutoff below which an eigenvalue is treated as zero.
  Real cutoff(const Tolerances& tol = {}) const {
    return static_cast<Real>(tol.rank_cutoff) * max_abs();
  }
};

template <typename Derived>
typename Derived::RealScalar hermiticity_defect(const Eigen::MatrixBase<Derived>& a) {
  using Real = typename Derived::RealScalar;
  if (a.size() == 0) return Real(0);
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& a, const Tolerances& tol = {}) {
  using Real = typename Derived::RealScalar;
  if (a.rows() != a.cols()) return false;
  const Real scale = std::max<Real>(Real(1), a.size() ? a.cwiseAbs().maxCoeff() : Real(0));
  return hermiticity_defect(a) <= static_cast<Real>(tol.hermitian) * scale;
}

template <typename Derived>
void require_hermitian(const Eigen::MatrixBase<Derived>& a, const Tolerances& tol = {},
                       const char* what = "operator") {
  if (a.rows() == 0 || a.rows() != a.cols())
    throw InputError(std::string(what) + ": expected a non-empty square matrix");
  if (!is_hermitian(a, tol))
    throw InputError(std::string(what) + ": not Hermitian (defect " +
                     std::to_string(static_cast<double>(hermiticity_defect(a))) + ")");
}

// (A + A^*) / 2, used to clean products that are Hermitian in exact arithmetic.
template <typename Derived>
CMatrix<typename Derived::RealScalar> hermitian_part(const Eigen::MatrixBase<Derived>& a) {
  using Real = typename Derived::RealScalar;
  CMatrix<Real> m = a;
  CMatrix<Real> h = (m + m.adjoint()) * Real(0.5);
  return h;
}

template <typename Derived>
SpectralDecomposition<typename Derived::RealScalar> spectral_decompose(
    const Eigen::MatrixBase<Derived>& a, const Tolerances& tol = {}) {
  using Real = typename Derived::RealScalar;
  require_hermitian(a, tol);
  const CMatrix<Real> h = hermitian_part(a);
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(h);
  if (solver.info() != Eigen::Success) throw DomainError("spectral_decompose: eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

// V diag(f(lambda)) V^* for a real function f of the eigenvalues.
template <typename Real, typename F>
CMatrix<Real> apply_spectral(const SpectralDecomposition<Real>& sd, F&& f) {
  const Eigen::Index d = sd.dim();
  CMatrix<Real> scaled = sd.eigenvectors;
  for (Eigen::Index k = 0; k < d; ++k) scaled.col(k) *= static_cast<Real>(f(sd.eigenvalues(k)));
  CMatrix<Real> out = scaled * sd.eigenvectors.adjoint();
  return hermitian_part(out);
}

template <typename Real>
bool passes(Real lambda, Comparator cmp, Real threshold, Real band) {
  const Real diff = lambda - threshold;
  switch (cmp) {
    case Comparator::Greater:
      return diff > band;
    case Comparator::GreaterEqual:
      return diff > -band;
    case Comparator::Less:
      return diff <= -band;
    case Comparator::LessEqual:
      return diff <= band;
  }
  return false;
}

// Sum of the selected eigenprojections.
template <typename Real, typename Pred>
CMatrix<Real> select_projection(const SpectralDecomposition<Real>& sd, Pred&& keep) {
  std::vector<Eigen::Index> cols;
  for (Eigen::Index k = 0; k < sd.dim(); ++k)
    if (keep(sd.eigenvalues(k))) cols.push_back(k);
  const Eigen::Index d = sd.dim();
  if (cols.empty()) return CMatrix<Real>::Zero(d, d);
  if (static_cast<Eigen::Index>(cols.size()) == d) return CMatrix<Real>::Identity(d, d);
  CMatrix<Real> v(d, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) v.col(static_cast<Eigen::Index>(j)) = sd.eigenvectors.col(cols[j]);
  CMatrix<Real> p = v * v.adjoint();
  return hermitian_part(p);
}

template <typename Real>
CMatrix<Real> spectral_projection(const SpectralDecomposition<Real>& sd, Comparator cmp,
                                  Real threshold, const Tolerances& tol = {}) {
  const Real band = static_cast<Real>(tol.zero_band);
  return select_projection(sd, [&](Real l) { return passes(l, cmp, threshold, band); });
}

// {A cmp threshold}. {alpha < A < beta} is the product of two calls, which
// commute.
template <typename Derived>
CMatrix<typename Derived::RealScalar> spectral_projection(const Eigen::MatrixBase<Derived>& a,
                                                          Comparator cmp,
                                                          typename Derived::RealScalar threshold,
                                                          const Tolerances& tol = {}) {
  return spectral_projection(spectral_decompose(a, tol), cmp, threshold, tol);
}

template <typename Derived>
CMatrix<typename Derived::RealScalar> spectral_band(const Eigen::MatrixBase<Derived>& a,
                                                    typename Derived::RealScalar lower,
                                                    typename Derived::RealScalar upper,
                                                    const Tolerances& tol = {}) {
  using Real = typename Derived::RealScalar;
  const auto sd = spectral_decompose(a, tol);
  const Real band = static_cast<Real>(tol.zero_band);
  return select_projection(sd, [&](Real l) {
    return passes(l, Comparator::Greater, lower, band) && passes(l, Comparator::Less, upper, band);
  });
}

// Tr[A {A cmp t}] without forming the projection: sums selected eigenvalues.
template <typename Real>
Real selected_eigenvalue_sum(const SpectralDecomposition<Real>& sd, Comparator cmp, Real threshold,
                             const Tolerances& tol = {}) {
  const Real band = static_cast<Real>(tol.zero_band);
  Real s = 0;
  for (Eigen::Index k = 0; k < sd.dim(); ++k)
    if (passes(sd.eigenvalues(k), cmp, threshold, band)) s += sd.eigenvalues(k);
  return s;
}

template <typename Real>
void require_psd(const SpectralDecomposition<Real>& sd, const Tolerances& tol,
                 const char* what = "operator") {
  if (sd.dim() > 0 && sd.eigenvalues(0) < -static_cast<Real>(tol.psd))
    throw InputError(std::string(what) + ": not positive semidefinite (min eigenvalue " +
                     std::to_string(static_cast<double>(sd.eigenvalues(0))) + ")");
}

// Projection onto the range of a PSD operator.
template <typename Derived>
CMatrix<typename Derived::RealScalar> support_projection(const Eigen::MatrixBase<Derived>& a,
                                                         const Tolerances& tol = {}) {
  using Real = typename Derived::RealScalar;
  const auto sd = spectral_decompose(a, tol);
  require_psd(sd, tol);
  const Real cut = sd.cutoff(tol);
  return select_projection(sd, [&](Real l) { return l > cut; });
}

// Inverse on the support, zero on the kernel.
template <typename Derived>
CMatrix<typename Derived::RealScalar> generalized_inverse(const Eigen::MatrixBase<Derived>& a,
                                                          const Tolerances& tol = {}) {
  using Real = typename Derived::RealScalar;
  const auto sd = spectral_decompose(a, tol);
  require_psd(sd, tol, "generalized_inverse");
  const Real cut = sd.cutoff(tol);
  return apply_spectral(sd, [&](Real l) { return l > cut ? Real(1) / l : Real(0); });
}

// Generalized inverse square root.
template <typename Derived>
CMatrix<typename Derived::RealScalar> inv_sqrt(const Eigen::MatrixBase<Derived>& a,
                                               const Tolerances& tol = {}) {
  using Real = typename Derived::RealScalar;
  const auto sd = spectral_decompose(a, tol);
  require_psd(sd, tol, "inv_sqrt");
  const Real cut = sd.cutoff(tol);
  return apply_spectral(sd, [&](Real l) { return l > cut ? Real(1) / std::sqrt(l) : Real(0); });
}

struct MatrixFunction {
  enum class Kind { Log, Power, Exp };
  Kind kind = Kind::Exp;
  double exponent = 1.0;

  static MatrixFunction log() { return {Kind::Log, 0.0}; }
  static MatrixFunction power(double t) { return {Kind::Power, t}; }
  static MatrixFunction exp() { return {Kind::Exp, 0.0}; }
};

// Scalar map applied on the spectrum. Powers act on the support only
// (0^t = 0 for every t, including t <= 0); log requires a strictly positive
// spectrum.
template <typename Real>
CMatrix<Real> matrix_function(const SpectralDecomposition<Real>& sd, MatrixFunction f,
                              const Tolerances& tol = {}) {
  const Real cut = sd.cutoff(tol);
  switch (f.kind) {
    case MatrixFunction::Kind::Exp:
      return apply_spectral(sd, [](Real l) { return std::exp(l); });
    case MatrixFunction::Kind::Log:
      if (sd.dim() > 0 && sd.eigenvalues(0) <= cut)
        throw DomainError("matrix log of an operator with non-positive eigenvalue");
      return apply_spectral(sd, [](Real l) { return std::log(l); });
    case MatrixFunction::Kind::Power: {
      require_psd(sd, tol, "matrix power");
      const Real t = static_cast<Real>(f.exponent);
      return apply_spectral(sd, [&](Real l) { return l > cut ? std::pow(l, t) : Real(0); });
    }
  }
  return {};
}

template <typename Derived>
CMatrix<typename Derived::RealScalar> matrix_function(const Eigen::MatrixBase<Derived>& a,
                                                      MatrixFunction f,
                                                      const Tolerances& tol = {}) {
  return matrix_function(spectral_decompose(a, tol), f, tol);
}

template <typename DA, typename DB>
CMatrix<typename DA::RealScalar> kron(const Eigen::MatrixBase<DA>& a,
                                      const Eigen::MatrixBase<DB>& b) {
  using Real = typename DA::RealScalar;
  const Eigen::Index ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
  CMatrix<Real> out(ar * br, ac * bc);
  const CMatrix<Real> bb = b;
  for (Eigen::Index i = 0; i < ar; ++i)
    for (Eigen::Index j = 0; j < ac; ++j) out.block(i * br, j * bc, br, bc) = a(i, j) * bb;
  return out;
}

// A ⊗ A ⊗ ... (n factors); n = 0 gives the 1x1 identity.
template <typename Derived>
CMatrix<typename Derived::RealScalar> kron_power(const Eigen::MatrixBase<Derived>& a, int n) {
  using Real = typename Derived::RealScalar;
  CMatrix<Real> out = CMatrix<Real>::Identity(1, 1);
  for (int k = 0; k < n; ++k) out = kron(out, a);
  return out;
}

template <typename Real>
CMatrix<Real> kron_all(std::span<const CMatrix<Real>> factors) {
  CMatrix<Real> out = CMatrix<Real>::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

// Spectral decomposition of a tensor product from decompositions of its
// factors; eigenvalues come out ascending like spectral_decompose.
template <typename Real>
SpectralDecomposition<Real> kron_decomposition(
    std::span<const SpectralDecomposition<Real>* const> factors) {
  RVector<Real> values = RVector<Real>::Ones(1);
  CMatrix<Real> vectors = CMatrix<Real>::Identity(1, 1);
  for (const auto* f : factors) {
    RVector<Real> next(values.size() * f->dim());
    for (Eigen::Index i = 0; i < values.size(); ++i)
      for (Eigen::Index j = 0; j < f->dim(); ++j) next(i * f->dim() + j) = values(i) * f->eigenvalues(j);
    values = next;
    vectors = kron(vectors, f->eigenvectors);
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index l, Eigen::Index r) { return values(l) < values(r); });
  SpectralDecomposition<Real> out{RVector<Real>(values.size()), CMatrix<Real>(vectors.rows(), vectors.cols())};
  for (std::size_t k = 0; k < order.size(); ++k) {
    out.eigenvalues(static_cast<Eigen::Index>(k)) = values(order[k]);
    out.eigenvectors.col(static_cast<Eigen::Index>(k)) = vectors.col(order[k]);
  }
  return out;
}

template <typename Real>
CMatrix<Real> direct_sum(std::span<const CMatrix<Real>> blocks) {
  Eigen::Index rows = 0, cols = 0;
  for (const auto& b : blocks) {
    rows += b.rows();
    cols += b.cols();
  }
  CMatrix<Real> out = CMatrix<Real>::Zero(rows, cols);
  Eigen::Index r = 0, c = 0;
  for (const auto& b : blocks) {
    out.block(r, c, b.rows(), b.cols()) = b;
    r += b.rows();
    c += b.cols();
  }
  return out;
}

template <typename Real>
CMatrix<Real> direct_sum(std::initializer_list<CMatrix<Real>> blocks) {
  const std::vector<CMatrix<Real>> v(blocks);
  return direct_sum(std::span<const CMatrix<Real>>(v));
}

// Re Tr[A B]; the imaginary part must vanish for Hermitian pairs.
template <typename DA, typename DB>
typename DA::RealScalar trace_product(const Eigen::MatrixBase<DA>& a,
                                      const Eigen::MatrixBase<DB>& b) {
  using Real = typename DA::RealScalar;
  if (a.rows() != b.cols() || a.cols() != b.rows())
    throw InputError("trace_product: dimension mismatch");
  const std::complex<Real> t = a.cwiseProduct(b.transpose()).sum();
  const Real scale = std::max<Real>(Real(1), std::abs(t.real()));
  if (std::abs(t.imag()) > Real(1e-9) * scale)
    throw InputError("trace_product: non-negligible imaginary part; operands not Hermitian");
  return t.real();
}

}  // namespace cqlab
