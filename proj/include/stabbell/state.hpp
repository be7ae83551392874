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

#include "stabbell/graph.hpp"
#include "stabbell/pauli.hpp"

namespace stabbell {

/// Amplitudes over 2^n basis states, little-endian: qubit 1 is the least
/// significant index bit.
using StateVector = Eigen::VectorXcd;

/// Default cap on dense state construction (2^14 amplitudes).
inline constexpr int kDefaultDenseQubits = 14;

/// |psi> = prod_{(i,j) in E} CZ(i,j) |+>^n. Every amplitude is +-2^{-n/2};
/// the sign at basis state x is the parity of edges inside the support of x.
inline StateVector graph_state_vector(const Graph& g, int max_qubits = kDefaultDenseQubits) {
  const int n = g.size();
  if (n > max_qubits) {
    throw std::invalid_argument("dense state for n=" + std::to_string(n) +
                                " exceeds the limit of " + std::to_string(max_qubits) +
                                " qubits");
  }
  const std::int64_t dim = std::int64_t{1} << n;
  const double amp = std::pow(2.0, -0.5 * n);
  StateVector psi(dim);
  for (std::int64_t x = 0; x < dim; ++x) {
    int edge_parity = 0;
    for (auto [i, j] : g.edges()) {
      if (((x >> (i - 1)) & 1) && ((x >> (j - 1)) & 1)) edge_parity ^= 1;
    }
    psi[x] = edge_parity ? -amp : amp;
  }
  return psi;
}

/// w|x> = (-1)^{z.x} |x ^ x_mask>.
inline StateVector apply_pauli(const PauliWord& w, const StateVector& psi) {
  const std::int64_t dim = psi.size();
  if (dim != (std::int64_t{1} << w.size())) {
    throw std::invalid_argument("state dimension " + std::to_string(dim) +
                                " does not match word on " + std::to_string(w.size()) + " sites");
  }
  StateVector out(dim);
  const auto x = static_cast<std::int64_t>(w.x_mask());
  const auto z = static_cast<std::int64_t>(w.z_mask());
  for (std::int64_t b = 0; b < dim; ++b) {
    const bool neg = __builtin_parityll(static_cast<std::uint64_t>(b & z));
    out[b ^ x] = neg ? -psi[b] : psi[b];
  }
  return out;
}

/// <psi| w |psi>. Exactly real in infinite precision since w is symmetric;
/// the tiny imaginary residue is dropped.
inline double expectation(const StateVector& psi, const PauliWord& w) {
  return psi.dot(apply_pauli(w, psi)).real();
}

inline double norm_error(const StateVector& psi) { return std::abs(psi.norm() - 1.0); }

}  // namespace stabbell
