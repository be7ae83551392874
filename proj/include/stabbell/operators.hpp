// Copyright 2026 The stabbell developers
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

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "stabbell/pauli.hpp"
#include "stabbell/state.hpp"

namespace stabbell {

/// Dense Hermitian operator on n qubits. Everything this library builds is
/// in fact real symmetric (no Y factors anywhere), but the public type stays
/// complex for generality.
using HermitianOperator = Eigen::MatrixXcd;

/// Default cap on dense operator construction (4096 x 4096).
inline constexpr int kDefaultDenseOperatorQubits = 12;

namespace mats {
inline Eigen::Matrix2d pauli_x() {
  Eigen::Matrix2d m;
  m << 0, 1, 1, 0;
  return m;
}
inline Eigen::Matrix2d pauli_z() {
  Eigen::Matrix2d m;
  m << 1, 0, 0, -1;
  return m;
}
inline Eigen::Matrix2d identity2() { return Eigen::Matrix2d::Identity(); }
/// (X + Z)/sqrt(2)
inline Eigen::Matrix2d hadamard_h() { return (pauli_x() + pauli_z()) / std::sqrt(2.0); }
/// (X - Z)/sqrt(2)
inline Eigen::Matrix2d hadamard_v() { return (pauli_x() - pauli_z()) / std::sqrt(2.0); }
}  // namespace mats

namespace detail {
inline void check_operator_size(int n, int max_qubits) {
  if (n > max_qubits) {
    throw std::invalid_argument("dense operator for n=" + std::to_string(n) +
                                " exceeds the limit of " + std::to_string(max_qubits) +
                                " qubits");
  }
}
}  // namespace detail

/// Tensor product of per-site 2x2 factors, site 1 least significant.
inline Eigen::MatrixXd kron_chain(const std::vector<Eigen::Matrix2d>& factors) {
  Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(1, 1);
  for (const auto& f : factors) {
    // new site becomes the most significant bit of the accumulated block
    Eigen::MatrixXd next(acc.rows() * 2, acc.cols() * 2);
    next.topLeftCorner(acc.rows(), acc.cols()) = f(0, 0) * acc;
    next.topRightCorner(acc.rows(), acc.cols()) = f(0, 1) * acc;
    next.bottomLeftCorner(acc.rows(), acc.cols()) = f(1, 0) * acc;
    next.bottomRightCorner(acc.rows(), acc.cols()) = f(1, 1) * acc;
    acc = std::move(next);
  }
  return acc;
}

/// Dense matrix of a Pauli word (real symmetric).
inline Eigen::MatrixXd word_matrix(const PauliWord& w,
                                   int max_qubits = kDefaultDenseOperatorQubits) {
  detail::check_operator_size(w.size(), max_qubits);
  std::vector<Eigen::Matrix2d> factors;
  for (int i = 1; i <= w.size(); ++i) {
    switch (w.seq(i)) {
      case 1: factors.push_back(mats::pauli_x()); break;
      case -1: factors.push_back(mats::pauli_z()); break;
      default: factors.push_back(mats::identity2()); break;
    }
  }
  return kron_chain(factors);
}

/// v <- (op on site) v for a real 2x2 acting on the given 1-based site.
inline void apply_single_qubit(Eigen::VectorXd& v, int site, const Eigen::Matrix2d& m) {
  const std::int64_t dim = v.size();
  const std::int64_t stride = std::int64_t{1} << (site - 1);
  for (std::int64_t base = 0; base < dim; base += 2 * stride) {
    for (std::int64_t off = 0; off < stride; ++off) {
      const std::int64_t i0 = base + off, i1 = i0 + stride;
      const double a = v[i0], b = v[i1];
      v[i0] = m(0, 0) * a + m(0, 1) * b;
      v[i1] = m(1, 0) * a + m(1, 1) * b;
    }
  }
}

/// rho <- (op on site) rho (op on site)^T for a real symmetric 2x2.
inline void conjugate_single_qubit(Eigen::MatrixXd& rho, int site, const Eigen::Matrix2d& m) {
  const std::int64_t dim = rho.rows();
  const std::int64_t stride = std::int64_t{1} << (site - 1);
  // left multiply: mix row pairs
  for (std::int64_t c = 0; c < dim; ++c) {
    for (std::int64_t base = 0; base < dim; base += 2 * stride) {
      for (std::int64_t off = 0; off < stride; ++off) {
        const std::int64_t r0 = base + off, r1 = r0 + stride;
        const double a = rho(r0, c), b = rho(r1, c);
        rho(r0, c) = m(0, 0) * a + m(0, 1) * b;
        rho(r1, c) = m(1, 0) * a + m(1, 1) * b;
      }
    }
  }
  // right multiply by m^T: mix column pairs
  for (std::int64_t base = 0; base < dim; base += 2 * stride) {
    for (std::int64_t off = 0; off < stride; ++off) {
      const std::int64_t c0 = base + off, c1 = c0 + stride;
      for (std::int64_t r = 0; r < dim; ++r) {
        const double a = rho(r, c0), b = rho(r, c1);
        rho(r, c0) = a * m(0, 0) + b * m(0, 1);
        rho(r, c1) = a * m(1, 0) + b * m(1, 1);
      }
    }
  }
}

inline double hermiticity_error(const HermitianOperator& h) {
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

inline double largest_eigenvalue(const Eigen::MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(sym.rows() - 1);
}

inline double smallest_eigenvalue(const Eigen::MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

inline double largest_eigenvalue(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<HermitianOperator> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(h.rows() - 1);
}

inline double smallest_eigenvalue(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<HermitianOperator> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// Smallest eigenvalue of a small real symmetric matrix: Householder
/// tridiagonalization followed by Sturm-sequence bisection on just the
/// bottom eigenvalue. Noticeably faster than a full decomposition in tight
/// grid loops. The input buffer is clobbered.
inline double sym_smallest_eigenvalue_inplace(Eigen::MatrixXd& a, double tol = 1e-13) {
  const int n = static_cast<int>(a.rows());
  if (n == 1) return a(0, 0);
  if (n > 64) {  // grid loops never get here; fall back for generality
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
  }
  double diag[64], sub[63], sub2[63], v[64], w[64];
  double* const col = a.data();  // column-major, stride n
  const auto at = [col, n](int r, int c) -> double& { return col[c * n + r]; };

  for (int k = 0; k + 2 < n; ++k) {
    const int len = n - k - 1;
    double norm2 = 0.0;
    for (int i = 0; i < len; ++i) {
      v[i] = at(k + 1 + i, k);
      norm2 += v[i] * v[i];
    }
    const double xnorm = std::sqrt(norm2);
    if (xnorm < 1e-300) {
      sub[k] = 0.0;
      continue;
    }
    const double alpha = v[0] >= 0 ? -xnorm : xnorm;
    v[0] -= alpha;
    double vn2 = 0.0;
    for (int i = 0; i < len; ++i) vn2 += v[i] * v[i];
    const double inv = 1.0 / std::sqrt(vn2);
    for (int i = 0; i < len; ++i) v[i] *= inv;

    // w = B v on the trailing symmetric block, then the rank-2 update
    for (int i = 0; i < len; ++i) {
      double acc = 0.0;
      const double* bcol = &at(k + 1, k + 1 + i);
      for (int j = 0; j < len; ++j) acc += bcol[j] * v[j];
      w[i] = acc;
    }
    double c = 0.0;
    for (int i = 0; i < len; ++i) c += v[i] * w[i];
    for (int i = 0; i < len; ++i) w[i] -= c * v[i];
    for (int j = 0; j < len; ++j) {
      double* bcol = &at(k + 1, k + 1 + j);
      const double vj = v[j], wj = w[j];
      for (int i = 0; i < len; ++i) bcol[i] -= 2.0 * (v[i] * wj + w[i] * vj);
    }
    sub[k] = alpha;
  }
  sub[n - 2] = at(n - 1, n - 2);
  for (int i = 0; i < n; ++i) diag[i] = at(i, i);
  for (int i = 0; i + 1 < n; ++i) sub2[i] = sub[i] * sub[i];

  // initial interval: Gershgorin from below, Cauchy interlacing from above
  double lo = diag[0], hi = diag[0];
  for (int i = 0; i < n; ++i) {
    const double off = (i > 0 ? std::abs(sub[i - 1]) : 0.0) +
                       (i + 1 < n ? std::abs(sub[i]) : 0.0);
    lo = std::min(lo, diag[i] - off);
    hi = std::min(hi, diag[i]);
  }
  // bisection; a midpoint is above the bottom eigenvalue iff the leading
  // principal minors of T - mid*I show a sign change (division-free Sturm)
  while (hi - lo > tol * std::max(1.0, std::abs(lo))) {
    const double mid = 0.5 * (lo + hi);
    double pm1 = 1.0, p = diag[0] - mid;
    bool below = p < 0.0;
    for (int i = 1; i < n && !below; ++i) {
      const double pn = (diag[i] - mid) * p - sub2[i - 1] * pm1;
      pm1 = p;
      p = pn;
      below = p < 0.0 || (p == 0.0 && pm1 != 0.0);
      if (std::abs(p) > 1e140) {
        p *= 1e-140;
        pm1 *= 1e-140;
      } else if (std::abs(p) < 1e-140 && p != 0.0) {
        p *= 1e140;
        pm1 *= 1e140;
      }
    }
    if (below) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Largest eigenvalue of a symmetric operator given only matrix-vector
/// products, via Lanczos with full reorthogonalization. `dim` is the vector
/// length; `warm` optionally seeds the Krylov space.
template <typename MatVec>
double lanczos_largest(const MatVec& apply, std::int64_t dim, double tol = 1e-11,
                       int max_iter = 220, const Eigen::VectorXd* warm = nullptr) {
  Eigen::VectorXd v = (warm && warm->size() == dim) ? *warm : Eigen::VectorXd::Ones(dim);
  // deterministic symmetry-breaking perturbation
  for (std::int64_t i = 0; i < dim; ++i) v[i] += 1e-3 * std::cos(0.7 * static_cast<double>(i));
  v.normalize();

  std::vector<Eigen::VectorXd> basis;
  std::vector<double> alpha, beta;
  Eigen::VectorXd w;
  double prev = -1e300;
  for (int it = 0; it < max_iter && it < dim; ++it) {
    basis.push_back(v);
    w = apply(v);
    double a = v.dot(w);
    alpha.push_back(a);
    w -= a * v;
    if (!beta.empty()) w -= beta.back() * basis[basis.size() - 2];
    for (const auto& q : basis) w -= q.dot(w) * q;  // full reorthogonalization
    double b = w.norm();

    // Rayleigh-Ritz on the tridiagonal section
    const int k = static_cast<int>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t, Eigen::EigenvaluesOnly);
    double top = es.eigenvalues()(k - 1);
    if (b < 1e-13 || std::abs(top - prev) < tol * std::max(1.0, std::abs(top))) return top;
    prev = top;
    beta.push_back(b);
    v = w / b;
  }
  return prev;
}

}  // namespace stabbell
