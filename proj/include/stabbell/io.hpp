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

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "stabbell/bell.hpp"
#include "stabbell/graph.hpp"
#include "stabbell/robust.hpp"

namespace stabbell {

// ordered_json keeps insertion order, which makes the emitted documents
// byte-stable for diff-based regression tests
using Json = nlohmann::ordered_json;

inline Json graph_to_json(const Graph& g) {
  Json j;
  j["n"] = g.size();
  Json edges = Json::array();
  for (auto [a, b] : g.edges()) edges.push_back(Json::array({a, b}));
  j["edges"] = std::move(edges);
  return j;
}

inline Graph graph_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("edges")) {
    throw std::invalid_argument("graph JSON must be an object with \"n\" and \"edges\"");
  }
  const int n = j.at("n").get<int>();
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) {
      throw std::invalid_argument("each graph edge must be a pair [i, j]");
    }
    edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return Graph(n, std::move(edges));
}

/// Loads a graph from a named built-in ("ghz:4", "cluster1d:3", "ring:5")
/// or from a JSON file path.
inline Graph load_graph(const std::string& source) {
  std::vector<Graph> parsed;
  if (parse_builtin_graph(source, parsed)) return parsed.front();
  std::ifstream in(source);
  if (!in) {
    throw std::invalid_argument("cannot open graph file '" + source +
                                "' (and it is not a ghz:/cluster1d:/ring: built-in)");
  }
  Json j;
  try {
    in >> j;
  } catch (const std::exception& ex) {
    throw std::invalid_argument("graph file '" + source + "' is not valid JSON: " + ex.what());
  }
  return graph_from_json(j);
}

inline Json expression_to_json(const BellExpression& e) {
  Json j;
  j["n"] = e.n_parties;
  j["ac"] = e.ac;
  Json terms = Json::array();
  for (const auto& t : e.terms) {
    Json jt;
    jt["w"] = t.weight;
    jt["seq"] = t.seq;
    terms.push_back(std::move(jt));
  }
  j["terms"] = std::move(terms);
  j["beta_c"] = e.beta_c;
  j["beta_q"] = e.beta_q;
  j["selftest"] = e.selftest;
  return j;
}

inline BellExpression expression_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("expression JSON must be an object");
  for (const char* key : {"n", "ac", "terms", "beta_c", "beta_q", "selftest"}) {
    if (!j.contains(key)) {
      throw std::invalid_argument(std::string("expression JSON is missing \"") + key + "\"");
    }
  }
  BellExpression e;
  e.n_parties = j.at("n").get<int>();
  if (e.n_parties < 1) throw std::invalid_argument("expression needs n >= 1");
  e.ac = j.at("ac").get<std::vector<int>>();
  for (int pos : e.ac) {
    if (pos < 1 || pos > e.n_parties) {
      throw std::invalid_argument("rotated position " + std::to_string(pos) + " outside 1.." +
                                  std::to_string(e.n_parties));
    }
  }
  std::sort(e.ac.begin(), e.ac.end());
  for (const auto& jt : j.at("terms")) {
    BellTerm t;
    t.weight = jt.at("w").get<double>();
    if (t.weight < 0) throw std::invalid_argument("term weights must be nonnegative");
    t.seq = jt.at("seq").get<std::vector<int>>();
    if (static_cast<int>(t.seq.size()) != e.n_parties) {
      throw std::invalid_argument("term sequence length does not match n");
    }
    for (int s : t.seq) {
      if (s < -1 || s > 1) {
        throw std::invalid_argument("sequence entries must be -1, 0 or +1");
      }
    }
    e.terms.push_back(std::move(t));
  }
  if (e.terms.empty()) throw std::invalid_argument("expression has no terms");
  e.beta_c = j.at("beta_c").get<double>();
  e.beta_q = j.at("beta_q").get<double>();
  e.selftest = j.at("selftest").get<bool>();
  return e;
}

inline BellExpression load_expression(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open expression file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& ex) {
    throw std::invalid_argument("expression file '" + path + "' is not valid JSON: " + ex.what());
  }
  return expression_from_json(j);
}

inline Json bound_to_json(const LinearFidelityBound& b) {
  Json j;
  j["s"] = b.s;
  j["mu"] = b.mu;
  j["a"] = b.a;
  j["b"] = b.b;
  j["beta_half"] = b.beta_half;
  j["grid_step"] = b.grid_step;
  j["refine_tol"] = b.refine_tol;
  return j;
}

/// CSV with header "normalized_beta,fidelity_lower_bound", 6 decimals.
inline std::string curve_to_csv(const std::vector<std::pair<double, double>>& points) {
  std::ostringstream out;
  out << "normalized_beta,fidelity_lower_bound\n" << std::fixed << std::setprecision(6);
  for (auto [x, f] : points) out << x << "," << f << "\n";
  return out.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

}  // namespace stabbell
