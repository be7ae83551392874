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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stabbell/graph.hpp"

namespace stabbell {

/// Tensor product of I/X/Z single-site factors with an implicit +1 phase.
///
/// Stored as two bitmasks: bit (i-1) of x_mask set means factor X at site i,
/// bit (i-1) of z_mask means Z. The masks never overlap, so no site ever
/// carries Y and every represented word is real symmetric. The per-site
/// sequence value is +1 for X, -1 for Z, 0 for I.
class PauliWord {
 public:
  PauliWord() = default;

  static PauliWord identity(int n) { return PauliWord(n, 0, 0); }

  static PauliWord from_masks(int n, std::uint64_t x, std::uint64_t z) {
    if (n < 1 || n > Graph::kMaxVertices) {
      throw std::invalid_argument("pauli word length outside 1.." +
                                  std::to_string(Graph::kMaxVertices));
    }
    const std::uint64_t all = (std::uint64_t{1} << n) - 1;
    if ((x | z) & ~all) {
      throw std::invalid_argument("pauli word mask has bits beyond site " + std::to_string(n));
    }
    if (x & z) {
      throw std::invalid_argument("pauli word masks overlap at site " +
                                  std::to_string(__builtin_ctzll(x & z) + 1) +
                                  " (Y factors are not representable)");
    }
    return PauliWord(n, x, z);
  }

  /// Builds a word from per-site letters, e.g. "XZI".
  static PauliWord from_string(std::string_view letters) {
    std::uint64_t x = 0, z = 0;
    int n = static_cast<int>(letters.size());
    for (int i = 0; i < n; ++i) {
      switch (letters[i]) {
        case 'I': break;
        case 'X': x |= std::uint64_t{1} << i; break;
        case 'Z': z |= std::uint64_t{1} << i; break;
        default:
          throw std::invalid_argument(std::string("unexpected letter '") + letters[i] +
                                      "' in pauli word (only I, X, Z)");
      }
    }
    return from_masks(n, x, z);
  }

  int size() const { return n_; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }

  bool x_bit(int site) const { return (x_ >> (check(site) - 1)) & 1; }
  bool z_bit(int site) const { return (z_ >> (check(site) - 1)) & 1; }

  /// +1 for X, -1 for Z, 0 for identity at the given (1-based) site.
  int seq(int site) const {
    if (x_bit(site)) return 1;
    if (z_bit(site)) return -1;
    return 0;
  }

  bool is_identity() const { return x_ == 0 && z_ == 0; }

  int weight() const { return __builtin_popcountll(x_ | z_); }

  std::string str() const {
    std::string s(static_cast<std::size_t>(n_), 'I');
    for (int i = 1; i <= n_; ++i) {
      if (x_bit(i)) s[i - 1] = 'X';
      if (z_bit(i)) s[i - 1] = 'Z';
    }
    return s;
  }

  friend bool operator==(const PauliWord& a, const PauliWord& b) {
    return a.n_ == b.n_ && a.x_ == b.x_ && a.z_ == b.z_;
  }

 private:
  PauliWord(int n, std::uint64_t x, std::uint64_t z) : n_(n), x_(x), z_(z) {}

  int check(int site) const {
    if (site < 1 || site > n_) {
      throw std::invalid_argument("site " + std::to_string(site) + " outside 1.." +
                                  std::to_string(n_));
    }
    return site;
  }

  int n_ = 0;
  std::uint64_t x_ = 0, z_ = 0;
};

namespace detail {
inline void require_same_length(const PauliWord& a, const PauliWord& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("pauli word length mismatch: " + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()));
  }
}

inline std::string site_list(std::uint64_t mask) {
  std::string s;
  while (mask) {
    int site = __builtin_ctzll(mask) + 1;
    if (!s.empty()) s += ", ";
    s += std::to_string(site);
    mask &= mask - 1;
  }
  return s;
}
}  // namespace detail

/// Sites where one word acts as X and the other as Z (sequence product -1),
/// i.e. where the single-site factors anticommute. 1-based, ascending.
inline std::vector<int> anticommuting_positions(const PauliWord& a, const PauliWord& b) {
  detail::require_same_length(a, b);
  std::uint64_t clash = (a.x_mask() & b.z_mask()) | (a.z_mask() & b.x_mask());
  std::vector<int> out;
  while (clash) {
    out.push_back(__builtin_ctzll(clash) + 1);
    clash &= clash - 1;
  }
  return out;
}

inline bool is_pairable(const PauliWord& a, const PauliWord& b) {
  detail::require_same_length(a, b);
  return ((a.x_mask() & b.z_mask()) | (a.z_mask() & b.x_mask())) != 0;
}

/// Site-wise product. Rejects any site where one factor is X and the other Z,
/// because the result would carry a Y there and leave the two-observable
/// framework; accepted products therefore always have +1 phase.
inline PauliWord multiply(const PauliWord& a, const PauliWord& b) {
  detail::require_same_length(a, b);
  std::uint64_t clash = (a.x_mask() & b.z_mask()) | (a.z_mask() & b.x_mask());
  if (clash) {
    throw std::invalid_argument("product would create Y at site(s) " + detail::site_list(clash));
  }
  return PauliWord::from_masks(a.size(), a.x_mask() ^ b.x_mask(), a.z_mask() ^ b.z_mask());
}

/// Generator at vertex i: X on i, Z on every neighbor of i.
inline PauliWord generator(const Graph& g, int vertex) {
  std::uint64_t x = std::uint64_t{1} << (vertex - 1);
  std::uint64_t z = g.neighbors_mask(vertex);
  return PauliWord::from_masks(g.size(), x, z);
}

/// The n generators in vertex order.
inline std::vector<PauliWord> generators(const Graph& g) {
  std::vector<PauliWord> out;
  out.reserve(static_cast<std::size_t>(g.size()));
  for (int v = 1; v <= g.size(); ++v) out.push_back(generator(g, v));
  return out;
}

/// Product of the generators indexed by `vertices`. Valid whenever the
/// vertex set is independent in the graph (no two adjacent), which is
/// exactly when the result stays Y-free.
inline PauliWord generator_product(const Graph& g, const std::vector<int>& vertices) {
  PauliWord w = PauliWord::identity(g.size());
  for (int v : vertices) w = multiply(w, generator(g, v));
  return w;
}

/// True iff `w` stabilizes the graph state of `g` with eigenvalue +1, i.e.
/// its z mask is the mod-2 neighborhood sum of its x mask.
inline bool is_graph_stabilizer(const Graph& g, const PauliWord& w) {
  if (w.size() != g.size()) return false;
  std::uint64_t z = 0;
  for (int v = 1; v <= g.size(); ++v) {
    if ((w.x_mask() >> (v - 1)) & 1) z ^= g.neighbors_mask(v);
  }
  return z == w.z_mask();
}

}  // namespace stabbell
