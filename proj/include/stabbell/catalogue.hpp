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

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stabbell/bell.hpp"
#include "stabbell/builders.hpp"
#include "stabbell/graph.hpp"
#include "stabbell/pauli.hpp"

namespace stabbell {

/// A named reference construction on one of the three small states the
/// library ships ready-made inequalities for.
struct CatalogueConstruction {
  std::string family;  // "ghz3", "ghz4", "cluster4"
  int number = 0;      // 1..4 within the family
  BellConfig config;
  std::vector<std::string> stabilizer_labels;  // e.g. "G2*G4", aligned with config.stabilizers
  double expected_ratio = 0.0;                 // beta_q / beta_c

  std::string name() const { return family + ":" + std::to_string(number); }
};

namespace detail {

struct FamilyData {
  Graph graph;
  std::vector<PauliWord> stabilizers;
  std::vector<std::string> labels;
};

inline FamilyData family_data(const std::string& family) {
  if (family == "ghz3") {
    // 3-qubit GHZ family on the 3-vertex path (its cluster form)
    Graph g = path_graph(3);
    return {g,
            {generator(g, 1), generator(g, 2), generator(g, 3), generator_product(g, {1, 3})},
            {"G1", "G2", "G3", "G1*G3"}};
  }
  if (family == "ghz4") {
    Graph g = star_graph(4);
    return {g,
            {generator(g, 1), generator(g, 2), generator(g, 3), generator(g, 4),
             generator_product(g, {2, 3}), generator_product(g, {2, 4})},
            {"G1", "G2", "G3", "G4", "G2*G3", "G2*G4"}};
  }
  if (family == "cluster4") {
    Graph g = path_graph(4);
    return {g,
            {generator(g, 1), generator(g, 2), generator(g, 3), generator(g, 4),
             generator_product(g, {1, 3}), generator_product(g, {2, 4})},
            {"G1", "G2", "G3", "G4", "G1*G3", "G2*G4"}};
  }
  throw std::invalid_argument("unknown catalogue family '" + family + "'");
}

inline CatalogueConstruction make_entry(const std::string& family, int number,
                                        std::vector<int> ac, std::vector<std::pair<int, int>> p,
                                        std::vector<int> r, double ratio) {
  FamilyData d = family_data(family);
  BellConfig cfg(d.graph, d.stabilizers, std::move(p), std::move(r), std::move(ac));
  return {family, number, std::move(cfg), d.labels, ratio};
}

}  // namespace detail

/// All twelve shipped constructions, four per family.
inline const std::vector<CatalogueConstruction>& catalogue() {
  static const std::vector<CatalogueConstruction> entries = [] {
    const double rt2 = std::sqrt(2.0);
    std::vector<CatalogueConstruction> v;
    v.push_back(detail::make_entry("ghz3", 1, {1}, {{1, 2}}, {3}, (2 * rt2 + 1) / 3));
    v.push_back(detail::make_entry("ghz3", 2, {1}, {{1, 2}, {2, 4}}, {3}, (4 * rt2 + 1) / 5));
    v.push_back(detail::make_entry("ghz3", 3, {1}, {{1, 2}, {2, 4}}, {}, rt2));
    v.push_back(detail::make_entry("ghz3", 4, {2}, {{1, 2}, {2, 3}}, {}, rt2));
    v.push_back(detail::make_entry("ghz4", 1, {1}, {{1, 2}}, {5, 6}, (rt2 + 1) / 2));
    v.push_back(detail::make_entry("ghz4", 2, {2}, {{1, 2}}, {3, 4}, (rt2 + 1) / 2));
    v.push_back(detail::make_entry("ghz4", 3, {1}, {{1, 2}, {1, 3}}, {6}, (4 * rt2 + 1) / 5));
    v.push_back(detail::make_entry("ghz4", 4, {1}, {{1, 2}, {1, 3}, {1, 4}}, {}, rt2));
    v.push_back(detail::make_entry("cluster4", 1, {1}, {{1, 2}}, {3, 4}, (rt2 + 1) / 2));
    v.push_back(detail::make_entry("cluster4", 2, {2}, {{1, 2}, {2, 3}}, {4}, (4 * rt2 + 1) / 5));
    v.push_back(detail::make_entry("cluster4", 3, {1}, {{1, 2}, {5, 6}}, {}, rt2));
    v.push_back(detail::make_entry("cluster4", 4, {2}, {{1, 2}, {3, 6}}, {}, rt2));
    return v;
  }();
  return entries;
}

inline const CatalogueConstruction& catalogue_lookup(const std::string& family, int number) {
  for (const auto& e : catalogue()) {
    if (e.family == family && e.number == number) return e;
  }
  throw std::invalid_argument("no catalogue construction " + family + ":" +
                              std::to_string(number));
}

/// The catalogue family whose defining graph matches `g` vertex-for-vertex,
/// if any. The 3-qubit family lives on the path graph.
inline std::optional<std::string> catalogue_family_for(const Graph& g) {
  if (same_graph(g, path_graph(3))) return "ghz3";
  if (same_graph(g, star_graph(4))) return "ghz4";
  if (same_graph(g, path_graph(4))) return "cluster4";
  return std::nullopt;
}

/// Stabilizer list that pair/remainder indices refer to by default: the
/// family list for the three catalogue graphs, the generators otherwise.
inline std::vector<PauliWord> default_stabilizer_universe(const Graph& g) {
  if (auto fam = catalogue_family_for(g)) return detail::family_data(*fam).stabilizers;
  return generators(g);
}

inline BellExpression single_pair_expression(const Graph& g, std::pair<int, int> pair,
                                             std::vector<int> remainder, std::vector<int> ac) {
  return single_pair_expression(g, default_stabilizer_universe(g), pair, std::move(remainder),
                                std::move(ac));
}

}  // namespace stabbell
