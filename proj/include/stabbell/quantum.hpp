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
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stabbell/bell.hpp"
#include "stabbell/operators.hpp"
#include "stabbell/parallel.hpp"
#include "stabbell/state.hpp"

namespace stabbell {

/// One measurement angle per party, each in [0, pi/2]. The canonical
/// assignment pi/4 everywhere realizes the maximal quantum value.
using AngleAssignment = std::vector<double>;

inline AngleAssignment canonical_angles(int n) {
  return AngleAssignment(static_cast<std::size_t>(n), std::numbers::pi / 4);
}

namespace detail {
inline void check_angle(double theta) {
  if (!(theta >= -1e-12 && theta <= std::numbers::pi / 2 + 1e-12)) {
    throw std::invalid_argument("measurement angle " + std::to_string(theta) +
                                " outside [0, pi/2]");
  }
}
inline void check_angles(const AngleAssignment& t, int n) {
  if (static_cast<int>(t.size()) != n) {
    throw std::invalid_argument("angle assignment length " + std::to_string(t.size()) +
                                " does not match " + std::to_string(n) + " parties");
  }
  for (double x : t) check_angle(x);
}
}  // namespace detail

/// The two dichotomic observables of one party at angle theta. On the
/// rotated set these are cos(t)X +- sin(t)Z; elsewhere the same combination
/// of H = (X+Z)/sqrt2 and V = (X-Z)/sqrt2, which at pi/4 reduces to X and Z.
inline std::pair<Eigen::Matrix2d, Eigen::Matrix2d> observables_real(double theta, bool in_ac) {
  detail::check_angle(theta);
  const Eigen::Matrix2d p = in_ac ? mats::pauli_x() : mats::hadamard_h();
  const Eigen::Matrix2d q = in_ac ? mats::pauli_z() : mats::hadamard_v();
  return {std::cos(theta) * p + std::sin(theta) * q, std::cos(theta) * p - std::sin(theta) * q};
}

inline std::pair<Eigen::Matrix2cd, Eigen::Matrix2cd> observables(double theta, bool in_ac) {
  auto [a, b] = observables_real(theta, in_ac);
  return {a.cast<std::complex<double>>(), b.cast<std::complex<double>>()};
}

namespace detail {

/// Per-party factor of one term at given settings.
inline Eigen::Matrix2d term_factor_matrix(const BellExpression& e, const BellTerm& t, int party,
                                          const Eigen::Matrix2d& a, const Eigen::Matrix2d& b) {
  const int s = t.seq[static_cast<std::size_t>(party) - 1];
  if (s == 0) return mats::identity2();
  if (e.in_ac(party)) return a + static_cast<double>(s) * b;
  return s > 0 ? a : b;
}

inline std::vector<std::pair<Eigen::Matrix2d, Eigen::Matrix2d>> party_observables(
    const BellExpression& e, const AngleAssignment& angles) {
  std::vector<std::pair<Eigen::Matrix2d, Eigen::Matrix2d>> ab;
  ab.reserve(static_cast<std::size_t>(e.n_parties));
  for (int i = 1; i <= e.n_parties; ++i) {
    ab.push_back(observables_real(angles[static_cast<std::size_t>(i) - 1], e.in_ac(i)));
  }
  return ab;
}

inline Eigen::MatrixXd bell_operator_real(const BellExpression& e, const AngleAssignment& angles,
                                          int max_qubits) {
  check_angles(angles, e.n_parties);
  check_operator_size(e.n_parties, max_qubits);
  const auto ab = party_observables(e, angles);
  const std::int64_t dim = std::int64_t{1} << e.n_parties;
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(dim, dim);
  std::vector<Eigen::Matrix2d> factors(static_cast<std::size_t>(e.n_parties));
  for (const auto& t : e.terms) {
    for (int i = 1; i <= e.n_parties; ++i) {
      factors[static_cast<std::size_t>(i) - 1] = term_factor_matrix(
          e, t, i, ab[static_cast<std::size_t>(i) - 1].first,
          ab[static_cast<std::size_t>(i) - 1].second);
    }
    total += t.weight * kron_chain(factors);
  }
  return total;
}

/// Matrix-free application of the Bell operator at fixed settings.
struct BellApplier {
  std::int64_t dim = 0;
  std::vector<double> weights;
  std::vector<std::vector<std::pair<int, Eigen::Matrix2d>>> site_ops;  // non-identity factors

  BellApplier(const BellExpression& e, const AngleAssignment& angles) {
    check_angles(angles, e.n_parties);
    dim = std::int64_t{1} << e.n_parties;
    const auto ab = party_observables(e, angles);
    for (const auto& t : e.terms) {
      weights.push_back(t.weight);
      std::vector<std::pair<int, Eigen::Matrix2d>> ops;
      for (int i = 1; i <= e.n_parties; ++i) {
        if (t.seq[static_cast<std::size_t>(i) - 1] != 0) {
          ops.emplace_back(i,
                           term_factor_matrix(e, t, i, ab[static_cast<std::size_t>(i) - 1].first,
                                              ab[static_cast<std::size_t>(i) - 1].second));
        }
      }
      site_ops.push_back(std::move(ops));
    }
  }

  Eigen::VectorXd operator()(const Eigen::VectorXd& v) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd tmp;
    for (std::size_t t = 0; t < weights.size(); ++t) {
      tmp = v;
      for (const auto& [site, m] : site_ops[t]) apply_single_qubit(tmp, site, m);
      out += weights[t] * tmp;
    }
    return out;
  }
};

}  // namespace detail

/// Dense Bell operator: weighted sum over terms of tensor products of the
/// per-party factors. Hermitian (in fact real symmetric) by construction.
inline HermitianOperator bell_operator(const BellExpression& e, const AngleAssignment& angles,
                                       int max_qubits = kDefaultDenseOperatorQubits) {
  return detail::bell_operator_real(e, angles, max_qubits).cast<std::complex<double>>();
}

/// <psi| B(angles) |psi> without materializing the operator.
inline double bell_expectation(const BellExpression& e, const AngleAssignment& angles,
                               const StateVector& psi) {
  detail::BellApplier op(e, angles);
  if (psi.size() != op.dim) {
    throw std::invalid_argument("state dimension does not match the expression");
  }
  const Eigen::VectorXd re = psi.real(), im = psi.imag();
  double val = re.dot(op(re));
  if (im.squaredNorm() > 0) val += im.dot(op(im));
  return val;
}

/// Quantum value at the canonical angles on the graph state; equals beta_q
/// for every valid stabilizer construction.
inline double canonical_quantum_value(const BellExpression& e, const Graph& g,
                                      int max_qubits = kDefaultDenseQubits) {
  return bell_expectation(e, canonical_angles(e.n_parties), graph_state_vector(g, max_qubits));
}

struct QuantumSearchOptions {
  double grid_step = std::numbers::pi / 32;
  double refine_tol = 1e-8;
  int threads = 0;                        // 0: hardware default
  std::int64_t max_grid_points = 200000;  // full grid only when points^n fits
  int dense_eig_dim = 256;                // dense eigensolver below, Lanczos above
  int extra_starts = 0;                   // additional random descent starts
  unsigned seed = 12345;                  // seed for the extra starts
};

struct QuantumSearchResult {
  double value = 0.0;
  AngleAssignment angles;
  std::string method;  // "grid+descent" or "descent-from-canonical"
};

namespace detail {

inline std::vector<double> angle_grid(double step) {
  const double half_pi = std::numbers::pi / 2;
  if (!(step > 1e-6)) throw std::invalid_argument("grid step must be positive");
  std::vector<double> pts;
  for (double x = 0.0; x < half_pi - 1e-12; x += step) pts.push_back(x);
  pts.push_back(half_pi);
  return pts;
}

struct LambdaMaxEval {
  const BellExpression& e;
  const QuantumSearchOptions& opt;
  Eigen::VectorXd seed;  // warm start for the iterative path; may be empty

  double operator()(const AngleAssignment& th) const {
    const std::int64_t dim = std::int64_t{1} << e.n_parties;
    if (dim <= opt.dense_eig_dim) {
      return largest_eigenvalue(bell_operator_real(e, th, 30));
    }
    BellApplier op(e, th);
    return lanczos_largest([&op](const Eigen::VectorXd& v) { return op(v); }, dim, 1e-12, 300,
                           seed.size() == dim ? &seed : nullptr);
  }
};

/// One coordinate-descent pass; returns true when some coordinate improved
/// by more than refine_tol. Golden-section polish runs only around genuine
/// scan improvements (or always on the cheap dense path).
inline bool descent_sweep_max(AngleAssignment& th, double& best, const LambdaMaxEval& eval,
                              double refine_tol, bool cheap_evals) {
  const double half_pi = std::numbers::pi / 2;
  const int n = static_cast<int>(th.size());
  const int scan_points = 16;
  bool improved = false;
  for (int i = 0; i < n; ++i) {
    const double start_theta = th[static_cast<std::size_t>(i)];
    double local_best = best, local_theta = start_theta;
    for (int k = 0; k <= scan_points; ++k) {
      const double x = half_pi * k / scan_points;
      th[static_cast<std::size_t>(i)] = x;
      const double v = eval(th);
      if (v > local_best) {
        local_best = v;
        local_theta = x;
      }
    }
    const bool scan_improved = local_best > best + refine_tol * std::max(1.0, std::abs(best));
    if (scan_improved || cheap_evals) {
      double lo = std::max(0.0, local_theta - half_pi / scan_points);
      double hi = std::min(half_pi, local_theta + half_pi / scan_points);
      const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
      double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
      th[static_cast<std::size_t>(i)] = c;
      double fc = eval(th);
      th[static_cast<std::size_t>(i)] = d;
      double fd = eval(th);
      while (hi - lo > 1e-9) {
        if (fc > fd) {
          hi = d;
          d = c;
          fd = fc;
          c = hi - gr * (hi - lo);
          th[static_cast<std::size_t>(i)] = c;
          fc = eval(th);
        } else {
          lo = c;
          c = d;
          fc = fd;
          d = lo + gr * (hi - lo);
          th[static_cast<std::size_t>(i)] = d;
          fd = eval(th);
        }
      }
      const double polished = std::max(fc, fd);
      if (polished > local_best) {
        local_best = polished;
        local_theta = fc > fd ? c : d;
      }
    }
    if (local_best > best + refine_tol * std::max(1.0, std::abs(best))) improved = true;
    if (local_best > best) {
      best = local_best;
      th[static_cast<std::size_t>(i)] = local_theta;
    } else {
      th[static_cast<std::size_t>(i)] = start_theta;
    }
  }
  return improved;
}

}  // namespace detail

/// Searches for the maximal quantum value over the angle parameterization.
///
/// Small systems get the full per-party grid (deterministic lexicographic
/// argmax) followed by coordinate descent from the best point. When the grid
/// would exceed max_grid_points the search starts from the canonical angles
/// and runs coordinate descent alone, so the result never falls below the
/// canonical value in either mode.
inline QuantumSearchResult quantum_bound_search(const BellExpression& e,
                                                const QuantumSearchOptions& opt = {}) {
  const int n = e.n_parties;
  const auto pts = detail::angle_grid(opt.grid_step);
  const std::int64_t npts = static_cast<std::int64_t>(pts.size());
  std::int64_t total = 1;
  bool grid_feasible = true;
  for (int i = 0; i < n; ++i) {
    total *= npts;
    if (total > opt.max_grid_points) {
      grid_feasible = false;
      break;
    }
  }

  detail::LambdaMaxEval eval{e, opt, {}};
  const std::int64_t dim = std::int64_t{1} << n;
  if (dim > opt.dense_eig_dim && e.provenance && n <= kDefaultDenseQubits) {
    // the graph state is the exact top eigenvector at the canonical angles
    // and an excellent Lanczos seed anywhere near them
    eval.seed = graph_state_vector(e.provenance->graph, kDefaultDenseQubits).real();
  }

  QuantumSearchResult res;
  if (grid_feasible) {
    res.method = "grid+descent";
    const int threads = opt.threads > 0 ? opt.threads : default_thread_count();
    const int max_chunks = 4 * threads;
    std::vector<double> chunk_best(static_cast<std::size_t>(max_chunks),
                                   -std::numeric_limits<double>::infinity());
    std::vector<std::int64_t> chunk_arg(static_cast<std::size_t>(max_chunks), -1);
    parallel_chunks(total, threads, [&](int chunk, std::int64_t b, std::int64_t en) {
      AngleAssignment th(static_cast<std::size_t>(n));
      for (std::int64_t idx = b; idx < en; ++idx) {
        std::int64_t rem = idx;
        for (int i = n - 1; i >= 0; --i) {  // party 1 is the most significant digit
          th[static_cast<std::size_t>(i)] = pts[static_cast<std::size_t>(rem % npts)];
          rem /= npts;
        }
        const double v = eval(th);
        if (v > chunk_best[static_cast<std::size_t>(chunk)]) {
          chunk_best[static_cast<std::size_t>(chunk)] = v;
          chunk_arg[static_cast<std::size_t>(chunk)] = idx;
        }
      }
    });
    double best = -std::numeric_limits<double>::infinity();
    std::int64_t arg = 0;
    for (std::size_t c = 0; c < chunk_best.size(); ++c) {
      if (chunk_arg[c] >= 0 && chunk_best[c] > best) {
        best = chunk_best[c];
        arg = chunk_arg[c];
      }
    }
    res.angles.assign(static_cast<std::size_t>(n), 0.0);
    std::int64_t rem = arg;
    for (int i = n - 1; i >= 0; --i) {
      res.angles[static_cast<std::size_t>(i)] = pts[static_cast<std::size_t>(rem % npts)];
      rem /= npts;
    }
    res.value = best;
  } else {
    res.method = "descent-from-canonical";
    res.angles = canonical_angles(n);
    res.value = eval(res.angles);
  }

  const bool cheap = dim <= opt.dense_eig_dim;
  for (int sweep = 0; sweep < 40; ++sweep) {
    if (!detail::descent_sweep_max(res.angles, res.value, eval, opt.refine_tol, cheap)) break;
  }

  if (opt.extra_starts > 0) {
    std::mt19937 rng(opt.seed);
    std::uniform_real_distribution<double> dist(0.0, std::numbers::pi / 2);
    for (int start = 0; start < opt.extra_starts; ++start) {
      AngleAssignment th(static_cast<std::size_t>(n));
      for (auto& t : th) t = dist(rng);
      double v = eval(th);
      for (int sweep = 0; sweep < 40; ++sweep) {
        if (!detail::descent_sweep_max(th, v, eval, opt.refine_tol, cheap)) break;
      }
      if (v > res.value) {
        res.value = v;
        res.angles = th;
      }
    }
  }
  return res;
}

/// lambda_max(B(angles)); the numeric side of the square-decomposition
/// bound lambda_max <= beta_q checked by the test suites.
inline double bell_spectral_max(const BellExpression& e, const AngleAssignment& angles,
                                int max_qubits = kDefaultDenseOperatorQubits) {
  return largest_eigenvalue(detail::bell_operator_real(e, angles, max_qubits));
}

}  // namespace stabbell
