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
#include <stdexcept>
#include <string>
#include <vector>

#include "stabbell/graph.hpp"

namespace stabbell {

/// Partition of the vertices into independent classes (a proper coloring).
struct Coloring {
  std::vector<std::vector<int>> classes;  // each sorted ascending, classes ordered by first member
  bool minimal = false;                   // true when produced by the exact chromatic search

  int count() const { return static_cast<int>(classes.size()); }

  int class_of(int v) const {
    for (int k = 0; k < count(); ++k) {
      for (int u : classes[k]) {
        if (u == v) return k;
      }
    }
    throw std::invalid_argument("vertex " + std::to_string(v) + " not colored");
  }
};

inline bool is_proper_coloring(const Graph& g, const Coloring& c) {
  std::vector<int> color(static_cast<std::size_t>(g.size()) + 1, -1);
  int assigned = 0;
  for (int k = 0; k < c.count(); ++k) {
    for (int v : c.classes[k]) {
      if (v < 1 || v > g.size() || color[v] != -1) return false;
      color[v] = k;
      ++assigned;
    }
  }
  if (assigned != g.size()) return false;
  for (auto [i, j] : g.edges()) {
    if (color[i] == color[j]) return false;
  }
  return true;
}

namespace detail {

inline Coloring canonical_classes(const std::vector<int>& color, int n) {
  Coloring out;
  std::vector<int> relabel(static_cast<std::size_t>(n) + 1, -1);
  for (int v = 1; v <= n; ++v) {
    int c = color[v];
    if (relabel[c] == -1) {
      relabel[c] = static_cast<int>(out.classes.size());
      out.classes.emplace_back();
    }
    out.classes[relabel[c]].push_back(v);
  }
  return out;
}

inline bool backtrack_color(const Graph& g, int k, int v, std::vector<int>& color, int used) {
  if (v > g.size()) return true;
  // a fresh vertex may open at most one new color; prunes label symmetry
  int limit = std::min(k, used + 1);
  for (int c = 1; c <= limit; ++c) {
    bool ok = true;
    for (int u : g.neighbors(v)) {
      if (u < v && color[u] == c) {
        ok = false;
        break;
      }
    }
    if (ok) {
      color[v] = c;
      if (backtrack_color(g, k, v + 1, color, std::max(used, c))) return true;
      color[v] = 0;
    }
  }
  return false;
}

}  // namespace detail

/// Greedy coloring in vertex order (first available color).
inline Coloring greedy_coloring(const Graph& g) {
  std::vector<int> color(static_cast<std::size_t>(g.size()) + 1, 0);
  for (int v = 1; v <= g.size(); ++v) {
    std::uint64_t taken = 0;
    for (int u : g.neighbors(v)) {
      if (u < v) taken |= std::uint64_t{1} << color[u];
    }
    int c = 1;
    while (taken & (std::uint64_t{1} << c)) ++c;
    color[v] = c;
  }
  Coloring out = detail::canonical_classes(color, g.size());
  out.minimal = false;
  return out;
}

/// Proper coloring of the vertices. Exact chromatic coloring by backtracking
/// up to `exact_limit` vertices; greedy beyond that, flagged non-minimal.
inline Coloring color_classes(const Graph& g, int exact_limit = 12) {
  if (g.size() > exact_limit) return greedy_coloring(g);
  for (int k = 1; k <= g.size(); ++k) {
    std::vector<int> color(static_cast<std::size_t>(g.size()) + 1, 0);
    if (detail::backtrack_color(g, k, 1, color, 0)) {
      Coloring out = detail::canonical_classes(color, g.size());
      out.minimal = true;
      return out;
    }
  }
  throw std::logic_error("coloring search failed");  // unreachable: k = n always colors
}

/// A vertex having at least one neighbor in every class other than its own,
/// or 0 when none exists. Smallest such vertex for determinism.
inline int find_anchor_vertex(const Graph& g, const Coloring& c) {
  for (int v = 1; v <= g.size(); ++v) {
    int own = c.class_of(v);
    bool ok = true;
    for (int k = 0; k < c.count() && ok; ++k) {
      if (k == own) continue;
      bool hit = false;
      for (int u : c.classes[k]) {
        if (g.adjacent(v, u)) {
          hit = true;
          break;
        }
      }
      if (!hit) ok = false;
    }
    if (ok) return v;
  }
  return 0;
}

/// Repairs a proper coloring that lacks an anchor vertex by dissolving one
/// class at a time: every member of a class unreachable from the current
/// best-connected vertex can be moved into some other class it has no
/// neighbor in. Each round removes a class, so the loop terminates; an exact
/// chromatic coloring always has an anchor and never enters the loop.
inline int ensure_anchor_vertex(const Graph& g, Coloring& c) {
  for (;;) {
    int anchor = find_anchor_vertex(g, c);
    if (anchor != 0) return anchor;
    // vertex seeing the most distinct other classes
    int best_v = 1, best_seen = -1;
    std::vector<int> color(static_cast<std::size_t>(g.size()) + 1);
    for (int k = 0; k < c.count(); ++k) {
      for (int v : c.classes[k]) color[v] = k;
    }
    for (int v = 1; v <= g.size(); ++v) {
      std::uint64_t seen = 0;
      for (int u : g.neighbors(v)) seen |= std::uint64_t{1} << color[u];
      seen &= ~(std::uint64_t{1} << color[v]);
      int cnt = __builtin_popcountll(seen);
      if (cnt > best_seen) {
        best_seen = cnt;
        best_v = v;
      }
    }
    // a class with no neighbor of best_v (exists, else best_v were an anchor)
    int dissolve = -1;
    for (int k = 0; k < c.count() && dissolve < 0; ++k) {
      if (k == color[best_v]) continue;
      bool any = false;
      for (int u : c.classes[k]) {
        if (g.adjacent(best_v, u)) any = true;
      }
      if (!any) dissolve = k;
    }
    for (int u : c.classes[dissolve]) {
      int target = -1;
      for (int k = 0; k < c.count() && target < 0; ++k) {
        if (k == dissolve) continue;
        bool clash = false;
        for (int w : c.classes[k]) {
          if (g.adjacent(u, w)) clash = true;
        }
        if (!clash) target = k;
      }
      if (target < 0) {
        throw std::logic_error("coloring repair failed to relocate vertex " + std::to_string(u));
      }
      c.classes[target].push_back(u);
      std::sort(c.classes[target].begin(), c.classes[target].end());
    }
    c.classes.erase(c.classes.begin() + dissolve);
    c.minimal = false;
  }
}

}  // namespace stabbell
