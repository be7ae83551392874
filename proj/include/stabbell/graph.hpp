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
#include <utility>
#include <vector>

namespace stabbell {

/// Simple undirected graph on vertices 1..n. Immutable after construction.
///
/// Vertices are 1-based everywhere in the public interface. Adjacency is
/// kept as per-vertex bitmasks, which caps n at 32; plenty for the dense
/// numerics this library targets.
class Graph {
 public:
  static constexpr int kMaxVertices = 32;

  Graph(int n, std::vector<std::pair<int, int>> edges) : n_(n) {
    if (n < 1) {
      throw std::invalid_argument("graph needs at least one vertex, got n=" + std::to_string(n));
    }
    if (n > kMaxVertices) {
      throw std::invalid_argument("graph too large: n=" + std::to_string(n) + " exceeds " +
                                  std::to_string(kMaxVertices));
    }
    adj_.assign(static_cast<std::size_t>(n), 0);
    for (auto [i, j] : edges) {
      if (i < 1 || i > n || j < 1 || j > n) {
        throw std::invalid_argument("edge (" + std::to_string(i) + "," + std::to_string(j) +
                                    ") has endpoint outside 1.." + std::to_string(n));
      }
      if (i == j) {
        throw std::invalid_argument("self-loop at vertex " + std::to_string(i));
      }
      if (adjacent(i, j)) {
        throw std::invalid_argument("duplicate edge (" + std::to_string(i) + "," +
                                    std::to_string(j) + ")");
      }
      adj_[i - 1] |= bit(j);
      adj_[j - 1] |= bit(i);
      edges_.emplace_back(std::min(i, j), std::max(i, j));
    }
    connected_ = compute_connected();
  }

  int size() const { return n_; }

  /// Edges normalized to (min,max), in insertion order.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  bool adjacent(int i, int j) const { return (adj_[check(i) - 1] & bit(check(j))) != 0; }

  /// Bitmask of neighbors of vertex i; bit (v-1) set iff v is a neighbor.
  std::uint64_t neighbors_mask(int i) const { return adj_[check(i) - 1]; }

  std::vector<int> neighbors(int i) const {
    std::vector<int> out;
    std::uint64_t m = neighbors_mask(i);
    for (int v = 1; v <= n_; ++v) {
      if (m & bit(v)) out.push_back(v);
    }
    return out;
  }

  int degree(int i) const { return __builtin_popcountll(neighbors_mask(i)); }

  bool connected() const { return connected_; }

 private:
  static std::uint64_t bit(int v) { return std::uint64_t{1} << (v - 1); }

  int check(int v) const {
    if (v < 1 || v > n_) {
      throw std::invalid_argument("vertex " + std::to_string(v) + " outside 1.." +
                                  std::to_string(n_));
    }
    return v;
  }

  bool compute_connected() const {
    std::uint64_t seen = 1;  // vertex 1
    std::vector<int> stack{1};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      std::uint64_t fresh = adj_[v - 1] & ~seen;
      seen |= fresh;
      for (int u = 1; u <= n_; ++u) {
        if (fresh & bit(u)) stack.push_back(u);
      }
    }
    return seen == (std::uint64_t{1} << n_) - 1;
  }

  int n_;
  std::vector<std::uint64_t> adj_;
  std::vector<std::pair<int, int>> edges_;
  bool connected_;
};

inline Graph build_graph(int n, std::vector<std::pair<int, int>> edges) {
  return Graph(n, std::move(edges));
}

/// Path 1-2-...-n.
inline Graph path_graph(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i < n; ++i) e.emplace_back(i, i + 1);
  return Graph(n, std::move(e));
}

/// Star with center 1 and leaves 2..n.
inline Graph star_graph(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 2; i <= n; ++i) e.emplace_back(1, i);
  return Graph(n, std::move(e));
}

/// Cycle 1-2-...-n-1. Requires n >= 3.
inline Graph ring_graph(int n) {
  if (n < 3) throw std::invalid_argument("ring graph needs n >= 3, got " + std::to_string(n));
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i < n; ++i) e.emplace_back(i, i + 1);
  e.emplace_back(1, n);
  return Graph(n, std::move(e));
}

/// Parses the named built-ins "ghz:<N>", "cluster1d:<N>", "ring:<N>".
/// Returns false (without touching `out`) when `name` is not of that shape.
inline bool parse_builtin_graph(const std::string& name, std::vector<Graph>& out) {
  auto colon = name.find(':');
  if (colon == std::string::npos) return false;
  const std::string kind = name.substr(0, colon);
  int n = 0;
  try {
    std::size_t used = 0;
    n = std::stoi(name.substr(colon + 1), &used);
    if (used != name.size() - colon - 1) return false;
  } catch (const std::exception&) {
    return false;
  }
  if (kind == "ghz") {
    out.push_back(star_graph(n));
  } else if (kind == "cluster1d") {
    out.push_back(path_graph(n));
  } else if (kind == "ring") {
    out.push_back(ring_graph(n));
  } else {
    return false;
  }
  return true;
}

inline Graph builtin_graph(const std::string& name) {
  std::vector<Graph> out;
  if (!parse_builtin_graph(name, out)) {
    throw std::invalid_argument("unknown graph descriptor '" + name +
                                "' (expected ghz:<N>, cluster1d:<N> or ring:<N>)");
  }
  return out.front();
}

inline bool same_graph(const Graph& a, const Graph& b) {
  if (a.size() != b.size()) return false;
  for (int v = 1; v <= a.size(); ++v) {
    if (a.neighbors_mask(v) != b.neighbors_mask(v)) return false;
  }
  return true;
}

}  // namespace stabbell
