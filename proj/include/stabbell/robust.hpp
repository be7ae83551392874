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
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stabbell/bell.hpp"
#include "stabbell/operators.hpp"
#include "stabbell/parallel.hpp"
#include "stabbell/quantum.hpp"
#include "stabbell/state.hpp"

namespace stabbell {

/// Mixing profile of the local extraction channel,
/// g(x) = (1+sqrt2)(sin x + cos x - 1). It maps [0, pi/2] onto [0, 1] with
/// g(pi/4) = 1, so the channel below is trace preserving and completely
/// positive on the whole domain. The variant with +1 in place of -1 exceeds
/// 1 and would not give a channel.
inline double extraction_g(double x) {
  detail::check_angle(x);
  return (1.0 + std::sqrt(2.0)) * (std::sin(x) + std::cos(x) - 1.0);
}

/// Dephasing direction of the extraction channel: X (rotated set) or
/// H = (X+Z)/sqrt2 while x < pi/4, switching to Z resp. V at x >= pi/4.
inline Eigen::Matrix2d extraction_gamma(double x, bool in_ac) {
  detail::check_angle(x);
  if (x < std::numbers::pi / 4) return in_ac ? mats::pauli_x() : mats::hadamard_h();
  return in_ac ? mats::pauli_z() : mats::hadamard_v();
}

/// Single-qubit extraction channel
///   L(rho) = (1+g)/2 rho + (1-g)/2 Gamma rho Gamma.
/// Gamma is Hermitian unitary, so the channel is self-dual.
inline Eigen::Matrix2cd extraction_channel(const Eigen::Matrix2cd& rho, double x, bool in_ac) {
  const double g = extraction_g(x);
  const Eigen::Matrix2cd gamma = extraction_gamma(x, in_ac).cast<std::complex<double>>();
  return 0.5 * (1.0 + g) * rho + 0.5 * (1.0 - g) * gamma * rho * gamma;
}

namespace detail {

inline void channel_conjugate_real(Eigen::MatrixXd& rho, Eigen::MatrixXd& scratch, int site,
                                   const Eigen::Matrix2d& gamma, double g) {
  scratch = rho;
  conjugate_single_qubit(scratch, site, gamma);
  rho = 0.5 * (1.0 + g) * rho + 0.5 * (1.0 - g) * scratch;
}

/// K(theta) as a real symmetric matrix, starting from the graph-state
/// projector `psi_proj`.
inline Eigen::MatrixXd dual_k_real(const Eigen::MatrixXd& psi_proj,
                                   const std::vector<bool>& party_in_ac,
                                   const AngleAssignment& angles) {
  Eigen::MatrixXd rho = psi_proj;
  Eigen::MatrixXd scratch;
  for (int i = 1; i <= static_cast<int>(party_in_ac.size()); ++i) {
    const double x = angles[static_cast<std::size_t>(i) - 1];
    channel_conjugate_real(rho, scratch, i, extraction_gamma(x, party_in_ac[static_cast<std::size_t>(i) - 1]),
                           extraction_g(x));
  }
  return rho;
}

inline std::vector<bool> ac_flags(int n, const std::vector<int>& ac) {
  std::vector<bool> flags(static_cast<std::size_t>(n) + 1, false);
  for (int pos : ac) {
    if (pos < 1 || pos > n) {
      throw std::invalid_argument("rotated position " + std::to_string(pos) + " outside 1.." +
                                  std::to_string(n));
    }
    flags[static_cast<std::size_t>(pos)] = true;
  }
  flags.erase(flags.begin());
  return flags;
}

}  // namespace detail

/// K(theta): the per-party dual extraction channels applied to the graph
/// state projector. Hermitian, trace one, positive semidefinite.
inline HermitianOperator dual_k_operator(const Graph& g, const std::vector<int>& ac,
                                         const AngleAssignment& angles,
                                         int max_qubits = kDefaultDenseOperatorQubits) {
  detail::check_angles(angles, g.size());
  detail::check_operator_size(g.size(), max_qubits);
  const StateVector psi = graph_state_vector(g, max_qubits);
  const Eigen::MatrixXd proj = (psi * psi.adjoint()).real();
  return detail::dual_k_real(proj, detail::ac_flags(g.size(), ac), angles)
      .cast<std::complex<double>>();
}

struct RobustOptions {
  double grid_step = std::numbers::pi / 60;
  double refine_tol = 1e-9;      // relative value tolerance of the descent
  double bisect_tol = 2e-4;      // width of the final bracket on s
  double saturation_slack = 1e-6;  // accept s when s*beta_q + mu >= 1 - slack
  double s_max = 2.0;
  int threads = 0;  // 0: hardware default
};

struct MuResult {
  double mu = 0.0;
  AngleAssignment argmin;
};

namespace detail {

/// Cheap certified lower bound on the smallest eigenvalue: the better of the
/// Gershgorin bound and the trace/Frobenius bound. Used to skip the exact
/// eigensolve when a point cannot improve the running minimum.
inline double lambda_min_lower_bound(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  double gersh = std::numeric_limits<double>::infinity();
  for (Eigen::Index r = 0; r < n; ++r) {
    double off = 0.0;
    for (Eigen::Index c = 0; c < n; ++c) {
      if (c != r) off += std::abs(m(r, c));
    }
    gersh = std::min(gersh, m(r, r) - off);
  }
  const double mean = m.trace() / static_cast<double>(n);
  const double frob2 = m.squaredNorm() / static_cast<double>(n);
  const double var = std::max(0.0, frob2 - mean * mean);
  const double wolk = mean - std::sqrt(var * static_cast<double>(n - 1));
  return std::max(gersh, wolk);
}

/// Point evaluator for lambda_min(K(theta) - s B(theta)) with per-party
/// tables over a fixed angle grid. Grid sweeps fix the angles of parties
/// 1..n-1 (the "outer" digits), precompute prefix data once, and then the
/// last party's axis costs one rank-structured update per point. Also
/// usable at arbitrary angles for the descent refinement.
class RobustObjective {
 public:
  RobustObjective(const BellExpression& e, const Graph& g, double s,
                  const std::vector<double>& grid)
      : e_(e), s_(s), n_(e.n_parties), grid_(grid) {
    if (g.size() != e.n_parties) {
      throw std::invalid_argument("graph size does not match the expression");
    }
    in_ac_ = ac_flags(n_, e.ac);
    const StateVector psi = graph_state_vector(g, kDefaultDenseOperatorQubits);
    proj_ = (psi * psi.adjoint()).real();
    const std::size_t np = grid.size();
    obs_.resize(static_cast<std::size_t>(n_));
    gam_.resize(static_cast<std::size_t>(n_));
    gval_.resize(static_cast<std::size_t>(n_));
    for (int i = 1; i <= n_; ++i) {
      auto& oi = obs_[static_cast<std::size_t>(i) - 1];
      auto& gi = gam_[static_cast<std::size_t>(i) - 1];
      auto& vi = gval_[static_cast<std::size_t>(i) - 1];
      oi.resize(np);
      gi.resize(np);
      vi.resize(np);
      for (std::size_t k = 0; k < np; ++k) {
        oi[k] = observables_real(grid[k], in_ac_[static_cast<std::size_t>(i) - 1]);
        gi[k] = extraction_gamma(grid[k], in_ac_[static_cast<std::size_t>(i) - 1]);
        vi[k] = extraction_g(grid[k]);
      }
    }
  }

  int parties() const { return n_; }
  const std::vector<double>& grid() const { return grid_; }
  std::int64_t outer_count() const {
    std::int64_t total = 1;
    for (int i = 1; i < n_; ++i) total *= static_cast<std::int64_t>(grid_.size());
    return total;
  }

  struct Workspace {
    Eigen::MatrixXd k_prefix;                 // channels of parties 1..n-1 applied
    Eigen::MatrixXd k_branch_a, k_branch_b;   // last-party Gamma conjugations
    std::vector<Eigen::MatrixXd> term_prefix; // per-term kron over parties 1..n-1
    Eigen::MatrixXd m, scratch;
  };

  /// Fixes the outer digits (parties 1..n-1) and fills the prefix caches.
  void load_outer(std::int64_t outer, Workspace& ws) const {
    const std::int64_t np = static_cast<std::int64_t>(grid_.size());
    std::vector<int> gidx(static_cast<std::size_t>(n_ > 0 ? n_ - 1 : 0));
    std::int64_t rem = outer;
    for (int i = n_ - 2; i >= 0; --i) {
      gidx[static_cast<std::size_t>(i)] = static_cast<int>(rem % np);
      rem /= np;
    }

    ws.k_prefix = proj_;
    for (int i = 1; i <= n_ - 1; ++i) {
      const std::size_t k = static_cast<std::size_t>(gidx[static_cast<std::size_t>(i) - 1]);
      channel_conjugate_real(ws.k_prefix, ws.scratch, i, gam_[static_cast<std::size_t>(i) - 1][k],
                             gval_[static_cast<std::size_t>(i) - 1][k]);
    }
    const bool last_ac = in_ac_[static_cast<std::size_t>(n_) - 1];
    ws.k_branch_a = ws.k_prefix;
    conjugate_single_qubit(ws.k_branch_a, n_, last_ac ? mats::pauli_x() : mats::hadamard_h());
    ws.k_branch_b = ws.k_prefix;
    conjugate_single_qubit(ws.k_branch_b, n_, last_ac ? mats::pauli_z() : mats::hadamard_v());

    ws.term_prefix.assign(e_.terms.size(), Eigen::MatrixXd());
    std::vector<Eigen::Matrix2d> factors(static_cast<std::size_t>(n_ - 1));
    for (std::size_t t = 0; t < e_.terms.size(); ++t) {
      for (int i = 1; i <= n_ - 1; ++i) {
        const std::size_t k = static_cast<std::size_t>(gidx[static_cast<std::size_t>(i) - 1]);
        const auto& [a, b] = obs_[static_cast<std::size_t>(i) - 1][k];
        factors[static_cast<std::size_t>(i) - 1] = term_factor_matrix(e_, e_.terms[t], i, a, b);
      }
      ws.term_prefix[t] = kron_chain(factors);
    }
  }

  /// Assembles K - sB for the last party's grid index into ws.m.
  void assemble_inner(int klast, Workspace& ws) const {
    const std::size_t k = static_cast<std::size_t>(klast);
    const double g = gval_[static_cast<std::size_t>(n_) - 1][k];
    const bool low_branch = grid_[k] < std::numbers::pi / 4;
    ws.m = 0.5 * (1.0 + g) * ws.k_prefix +
           0.5 * (1.0 - g) * (low_branch ? ws.k_branch_a : ws.k_branch_b);

    const auto& [a, b] = obs_[static_cast<std::size_t>(n_) - 1][k];
    const Eigen::Index half = ws.m.rows() / 2;
    for (std::size_t t = 0; t < e_.terms.size(); ++t) {
      const double w = -s_ * e_.terms[t].weight;
      const int sn = e_.terms[t].seq[static_cast<std::size_t>(n_) - 1];
      const auto& p = ws.term_prefix[t];
      if (sn == 0) {
        // identity on the last party: block diagonal
        ws.m.topLeftCorner(half, half) += w * p;
        ws.m.bottomRightCorner(half, half) += w * p;
      } else {
        const Eigen::Matrix2d f = term_factor_matrix(e_, e_.terms[t], n_, a, b);
        if (f(0, 0) != 0.0) ws.m.topLeftCorner(half, half) += (w * f(0, 0)) * p;
        if (f(0, 1) != 0.0) ws.m.topRightCorner(half, half) += (w * f(0, 1)) * p;
        if (f(1, 0) != 0.0) ws.m.bottomLeftCorner(half, half) += (w * f(1, 0)) * p;
        if (f(1, 1) != 0.0) ws.m.bottomRightCorner(half, half) += (w * f(1, 1)) * p;
      }
    }
  }

  double eig_min(Workspace& ws) const { return sym_smallest_eigenvalue_inplace(ws.m); }

  double at_angles(const AngleAssignment& th) const {
    check_angles(th, n_);
    Eigen::MatrixXd b = bell_operator_real(e_, th, kDefaultDenseOperatorQubits);
    Eigen::MatrixXd k = dual_k_real(proj_, in_ac_, th);
    return smallest_eigenvalue(Eigen::MatrixXd(k - s_ * b));
  }

 private:
  const BellExpression& e_;
  double s_;
  int n_;
  std::vector<double> grid_;
  std::vector<bool> in_ac_;
  Eigen::MatrixXd proj_;
  std::vector<std::vector<std::pair<Eigen::Matrix2d, Eigen::Matrix2d>>> obs_;
  std::vector<std::vector<Eigen::Matrix2d>> gam_;
  std::vector<std::vector<double>> gval_;
};

/// Coordinate-descent minimization of the objective from a start point.
inline void descent_sweep_min(const RobustObjective& obj, AngleAssignment& th, double& best,
                              double refine_tol) {
  const double half_pi = std::numbers::pi / 2;
  const int n = obj.parties();
  for (int pass = 0; pass < 30; ++pass) {
    bool improved = false;
    for (int i = 0; i < n; ++i) {
      const double start_theta = th[static_cast<std::size_t>(i)];
      double local_best = best, local_theta = start_theta;
      const int scan = 16;
      for (int k = 0; k <= scan; ++k) {
        const double x = half_pi * k / scan;
        th[static_cast<std::size_t>(i)] = x;
        const double v = obj.at_angles(th);
        if (v < local_best) {
          local_best = v;
          local_theta = x;
        }
      }
      double lo = std::max(0.0, local_theta - half_pi / scan);
      double hi = std::min(half_pi, local_theta + half_pi / scan);
      const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
      double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
      th[static_cast<std::size_t>(i)] = c;
      double fc = obj.at_angles(th);
      th[static_cast<std::size_t>(i)] = d;
      double fd = obj.at_angles(th);
      while (hi - lo > 1e-9) {
        if (fc < fd) {
          hi = d;
          d = c;
          fd = fc;
          c = hi - gr * (hi - lo);
          th[static_cast<std::size_t>(i)] = c;
          fc = obj.at_angles(th);
        } else {
          lo = c;
          c = d;
          fc = fd;
          d = lo + gr * (hi - lo);
          th[static_cast<std::size_t>(i)] = d;
          fd = obj.at_angles(th);
        }
      }
      if (std::min(fc, fd) < local_best) {
        local_best = std::min(fc, fd);
        local_theta = fc < fd ? c : d;
      }
      if (local_best < best - refine_tol * std::max(1.0, std::abs(best))) improved = true;
      if (local_best < best) {
        best = local_best;
        th[static_cast<std::size_t>(i)] = local_theta;
      } else {
        th[static_cast<std::size_t>(i)] = start_theta;
      }
    }
    if (!improved) break;
  }
}

}  // namespace detail

/// mu(s) = min over the angle grid (refined by coordinate descent) of
/// lambda_min(K(theta) - s B(theta)). With this mu the fidelity bound
/// F >= s beta + mu holds on the searched set of measurement angles.
inline MuResult mu_for_s(const BellExpression& e, const Graph& g, double s,
                         const RobustOptions& opt = {}) {
  if (s < 0) throw std::invalid_argument("slope s must be nonnegative");
  detail::check_operator_size(e.n_parties, kDefaultDenseOperatorQubits);
  const auto grid = detail::angle_grid(opt.grid_step);
  detail::RobustObjective obj(e, g, s, grid);

  const int n = e.n_parties;
  const std::int64_t npts = static_cast<std::int64_t>(grid.size());
  const std::int64_t outer_total = obj.outer_count();

  // head start for the eigensolve pruning; the canonical point is part of
  // the searched set either way
  const AngleAssignment canonical = canonical_angles(n);
  const double seed = obj.at_angles(canonical);

  const int threads = opt.threads > 0 ? opt.threads : default_thread_count();
  std::vector<double> chunk_best(static_cast<std::size_t>(threads), seed);
  std::vector<std::int64_t> chunk_arg(static_cast<std::size_t>(threads), -1);
  parallel_chunks(outer_total, threads, [&](int chunk, std::int64_t b, std::int64_t en) {
    detail::RobustObjective::Workspace ws;
    double& best = chunk_best[static_cast<std::size_t>(chunk)];
    std::int64_t& arg = chunk_arg[static_cast<std::size_t>(chunk)];
    for (std::int64_t outer = b; outer < en; ++outer) {
      obj.load_outer(outer, ws);
      for (std::int64_t k = 0; k < npts; ++k) {
        obj.assemble_inner(static_cast<int>(k), ws);
        const double v = obj.eig_min(ws);
        if (v < best) {
          best = v;
          arg = outer * npts + k;
        }
      }
    }
  });
  double best = seed;
  std::int64_t arg = -1;
  for (std::size_t c = 0; c < chunk_best.size(); ++c) {
    if (chunk_arg[c] >= 0 && chunk_best[c] < best) {
      best = chunk_best[c];
      arg = chunk_arg[c];
    }
  }

  MuResult res;
  res.mu = best;
  if (arg >= 0) {
    res.argmin.assign(static_cast<std::size_t>(n), 0.0);
    std::int64_t rem = arg;
    for (int i = n - 1; i >= 0; --i) {
      res.argmin[static_cast<std::size_t>(i)] = grid[static_cast<std::size_t>(rem % npts)];
      rem /= npts;
    }
  } else {
    res.argmin = canonical;  // no grid point beat the canonical value
  }
  detail::descent_sweep_min(obj, res.argmin, res.mu, opt.refine_tol);
  return res;
}

/// Linear fidelity bound F >= s*beta + mu against the raw Bell value, with
/// the normalized form F >= a*(beta-beta_c)/(beta_q-beta_c) + b and the
/// derived witness threshold beta_half = (0.5 - mu)/s.
struct LinearFidelityBound {
  double s = 0.0;
  double mu = 0.0;
  double beta_c = 0.0;
  double beta_q = 0.0;
  double a = 0.0;
  double b = 0.0;
  double beta_half = 0.0;
  double grid_step = 0.0;
  double refine_tol = 0.0;
};

inline LinearFidelityBound bound_from_constants(double s, double mu, double beta_c,
                                                double beta_q) {
  LinearFidelityBound out;
  out.s = s;
  out.mu = mu;
  out.beta_c = beta_c;
  out.beta_q = beta_q;
  out.a = s * (beta_q - beta_c);
  out.b = s * beta_c + mu;
  out.beta_half = s > 0 ? (0.5 - mu) / s : std::numeric_limits<double>::quiet_NaN();
  return out;
}

/// Smallest s (bisection over [0, s_max]) whose mu(s) keeps the bound
/// saturated at the maximal quantum value, i.e. s*beta_q + mu(s) >= 1 -
/// slack; reports mu = 1 - s*beta_q so the bound passes through (beta_q, 1).
inline LinearFidelityBound optimal_linear_bound(const BellExpression& e, const Graph& g,
                                                const RobustOptions& opt = {}) {
  const SelfTestResult st =
      e.provenance ? is_selftesting(*e.provenance) : SelfTestResult{true, 0, true};
  if (e.provenance && !st.selftesting) {
    throw std::invalid_argument("expression is not self-testing (rank " +
                                std::to_string(st.rank) + " of " +
                                std::to_string(e.n_parties) + ", graph " +
                                (st.connected ? "connected" : "disconnected") +
                                "); no fidelity bound");
  }
  // f is concave and nondecreasing in s; its smallest accepted point is
  // located by plain bisection, which keeps the sweep count predictable
  auto f = [&](double s) {
    return s * e.beta_q + mu_for_s(e, g, s, opt).mu - 1.0 + opt.saturation_slack;
  };

  double lo = 0.0, hi = opt.s_max;
  const double f_hi = f(hi);
  if (f_hi < 0.0) {
    throw std::runtime_error("no slope in [0, " + std::to_string(opt.s_max) +
                             "] saturates the bound at the maximal quantum value (deficit " +
                             std::to_string(f_hi) + "); bound not found");
  }
  if (f(lo) >= 0.0) {
    hi = lo;  // degenerate: even s = 0 saturates
  }
  while (hi - lo > opt.bisect_tol) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) >= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  LinearFidelityBound out = bound_from_constants(hi, 1.0 - hi * e.beta_q, e.beta_c, e.beta_q);
  out.grid_step = opt.grid_step;
  out.refine_tol = opt.refine_tol;
  return out;
}

/// Uniform samples of the bound over the normalized Bell value x in [0, 1]:
/// F(x) = s*(beta_c + x*(beta_q - beta_c)) + mu. F(1) = 1 by construction.
inline std::vector<std::pair<double, double>> fidelity_curve(const LinearFidelityBound& b,
                                                             int samples) {
  if (samples < 2) throw std::invalid_argument("fidelity curve needs at least 2 samples");
  std::vector<std::pair<double, double>> pts;
  pts.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const double x = static_cast<double>(i) / (samples - 1);
    pts.emplace_back(x, b.s * (b.beta_c + x * (b.beta_q - b.beta_c)) + b.mu);
  }
  return pts;
}

/// Bell value above which the extractable fidelity exceeds 1/2, certifying
/// genuine multipartite entanglement device-independently.
inline double witness_threshold(const LinearFidelityBound& b) {
  if (!(b.s > 0)) throw std::invalid_argument("witness threshold needs positive slope");
  return (0.5 - b.mu) / b.s;
}

/// Reference robustness constants for the Mermin-type comparison curves.
/// These are consumed as published literals, not recomputed: the underlying
/// operator needs a third local observable and sits outside this framework.
struct MerminReference {
  std::string family;
  double s, mu, beta_c, beta_q;
};

inline std::optional<MerminReference> mermin_reference(const std::string& family) {
  if (family == "ghz3") {
    return MerminReference{"ghz3", (2.0 + std::sqrt(2.0)) / 8.0, -1.0 / std::sqrt(2.0), 2.0, 4.0};
  }
  if (family == "ghz4") {
    return MerminReference{"ghz4", 0.219, -0.752, 4.0, 8.0};
  }
  return std::nullopt;
}

}  // namespace stabbell
