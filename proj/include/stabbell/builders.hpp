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

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stabbell/bell.hpp"
#include "stabbell/coloring.hpp"
#include "stabbell/gf2.hpp"
#include "stabbell/graph.hpp"
#include "stabbell/pauli.hpp"

namespace stabbell {

/// Picks the first pairable pair in index order and its smallest
/// anticommuting position T, splits the stabilizers by their factor at T
/// (X side, Z side, identity side), pairs the two sides against each other
/// reusing the first element of the smaller side, and puts the identity side
/// into the remainder with the rotated set {T}. The result always validates.
inline BellConfig find_suitable_ac(const Graph& g, const std::vector<PauliWord>& st) {
  const int m = static_cast<int>(st.size());
  int t = 0;
  for (int i = 0; i < m && t == 0; ++i) {
    for (int j = i + 1; j < m && t == 0; ++j) {
      auto pos = anticommuting_positions(st[static_cast<std::size_t>(i)],
                                         st[static_cast<std::size_t>(j)]);
      if (!pos.empty()) t = pos.front();
    }
  }
  if (t == 0) {
    throw std::invalid_argument("no pairable pair in the stabilizer set");
  }

  std::vector<int> plus, minus, rest;  // 1-based indices
  for (int i = 1; i <= m; ++i) {
    switch (st[static_cast<std::size_t>(i) - 1].seq(t)) {
      case 1: plus.push_back(i); break;
      case -1: minus.push_back(i); break;
      default: rest.push_back(i); break;
    }
  }
  std::vector<std::pair<int, int>> pairs;
  const std::size_t big = std::max(plus.size(), minus.size());
  for (std::size_t k = 0; k < big; ++k) {
    const int p = k < plus.size() ? plus[k] : plus.front();
    const int q = k < minus.size() ? minus[k] : minus.front();
    pairs.emplace_back(p, q);
  }
  return BellConfig(g, st, std::move(pairs), std::move(rest), {t});
}

/// Expression with exactly one pairable pair plus remainder terms:
/// beta_c = 2 + |R|, beta_q = 2*sqrt(2) + |R|.
inline BellExpression single_pair_expression(const Graph& g, const std::vector<PauliWord>& st,
                                             std::pair<int, int> pair, std::vector<int> remainder,
                                             std::vector<int> ac) {
  BellConfig c(g, st, {pair}, std::move(remainder), std::move(ac));
  return build_expression(c);
}

/// Constant-ratio construction: for any connected graph (n >= 2) an
/// expression with exactly 2n correlations, beta_q/beta_c = sqrt(2), and a
/// full-rank stabilizer set.
///
/// An anchor vertex with a neighbor in every other color class exists for
/// every chromatic coloring (colorings lacking one get repaired first). The
/// X side is the anchor generator and its products with same-class
/// generators; each other class contributes its anchor-adjacent generators
/// plus products that pull the rest of the class in. One side's first or
/// last element is reused to pair the sides off completely.
inline BellExpression constant_ratio_expression(const Graph& g,
                                                std::optional<Coloring> coloring = std::nullopt) {
  const int n = g.size();
  if (!g.connected()) {
    throw std::invalid_argument("constant-ratio construction requires a connected graph");
  }
  if (n < 2) {
    throw std::invalid_argument("constant-ratio construction needs at least 2 vertices");
  }
  Coloring col = coloring ? *coloring : color_classes(g);
  if (!is_proper_coloring(g, col)) {
    throw std::invalid_argument("provided coloring is not a proper coloring of the graph");
  }
  const int anchor = ensure_anchor_vertex(g, col);
  const int own = col.class_of(anchor);

  std::vector<PauliWord> st;
  st.push_back(generator(g, anchor));
  for (int j : col.classes[static_cast<std::size_t>(own)]) {
    if (j != anchor) st.push_back(generator_product(g, {anchor, j}));
  }
  const int a = static_cast<int>(st.size());  // |C1|, all acting as X at the anchor

  for (int k = 0; k < col.count(); ++k) {
    if (k == own) continue;
    std::vector<int> adj, far;
    for (int v : col.classes[static_cast<std::size_t>(k)]) {
      (g.adjacent(anchor, v) ? adj : far).push_back(v);
    }
    if (adj.empty()) {
      throw std::logic_error("anchor vertex lost its neighbor in a color class");
    }
    for (int v : adj) st.push_back(generator(g, v));
    for (int v : far) st.push_back(generator_product(g, {adj.front(), v}));
  }
  if (static_cast<int>(st.size()) != n) {
    throw std::logic_error("constant-ratio stabilizer set has wrong size");
  }

  // pair X side 1..a against Z side a+1..n, reusing one element of the
  // smaller side for the overhang
  std::vector<std::pair<int, int>> pairs;
  const int b = n - a;
  if (a <= b) {
    for (int i = 1; i <= b; ++i) pairs.emplace_back(i <= a ? i : 1, a + i);
  } else {
    for (int i = 1; i <= a; ++i) pairs.emplace_back(i, i <= b ? a + i : n);
  }

  BellConfig c(g, std::move(st), std::move(pairs), {}, {anchor});
  BellExpression e = build_expression(c);
  if (gf2::rank_of_words(c.used_words()) != n) {
    throw std::logic_error("constant-ratio stabilizer set is rank deficient");
  }
  return e;
}

}  // namespace stabbell
