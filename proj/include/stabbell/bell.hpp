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
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stabbell/gf2.hpp"
#include "stabbell/graph.hpp"
#include "stabbell/operators.hpp"
#include "stabbell/pauli.hpp"
#include "stabbell/state.hpp"

namespace stabbell {

/// A stabilizer set partitioned into a pairing set, a remainder, and the set
/// of rotated measurement positions. Stabilizer indices are 1-based into
/// `stabilizers`; an index may appear in several pairs (reuse), and the
/// per-stabilizer weight scales every term it induces.
struct BellConfig {
  BellConfig(Graph g, std::vector<PauliWord> st, std::vector<std::pair<int, int>> p,
             std::vector<int> r, std::vector<int> ac_positions, std::vector<double> w = {})
      : graph(std::move(g)),
        stabilizers(std::move(st)),
        pairs(std::move(p)),
        remainder(std::move(r)),
        ac(std::move(ac_positions)),
        weights(std::move(w)) {
    if (weights.empty()) weights.assign(stabilizers.size(), 1.0);
    std::sort(ac.begin(), ac.end());
    ac.erase(std::unique(ac.begin(), ac.end()), ac.end());
  }

  Graph graph;
  std::vector<PauliWord> stabilizers;
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> remainder;
  std::vector<int> ac;  // sorted, unique, 1-based positions
  std::vector<double> weights;

  bool in_ac(int pos) const { return std::binary_search(ac.begin(), ac.end(), pos); }

  /// Indices referenced by pairs or remainder, ascending, deduplicated.
  std::vector<int> used_indices() const {
    std::vector<int> idx;
    for (auto [l, k] : pairs) {
      idx.push_back(l);
      idx.push_back(k);
    }
    idx.insert(idx.end(), remainder.begin(), remainder.end());
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    return idx;
  }

  std::vector<PauliWord> used_words() const {
    std::vector<PauliWord> out;
    for (int i : used_indices()) out.push_back(stabilizers[static_cast<std::size_t>(i) - 1]);
    return out;
  }
};

enum class ViolationKind {
  kIndexOutOfRange,
  kSelfPair,
  kWordLengthMismatch,
  kNotAGraphStabilizer,
  kNegativeWeight,
  kAcPositionOutOfRange,
  kNoAnticommutingPositionInAc,      // requirement 1: pair has no rotated clash
  kMultipleAnticommutingPositionsInAc,  // requirement 1: more than one
  kNonIdentityAtOtherAcPosition,     // requirement 1: residual support on the rotated set
  kRemainderActiveOnAc,              // requirement 2
};

struct Violation {
  ViolationKind kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }

  bool has(ViolationKind k) const {
    for (const auto& v : violations) {
      if (v.kind == k) return true;
    }
    return false;
  }

  std::string str() const {
    std::string s;
    for (const auto& v : violations) {
      if (!s.empty()) s += "; ";
      s += v.message;
    }
    return s.empty() ? "valid" : s;
  }
};

namespace detail {
inline std::string pair_str(std::pair<int, int> p) {
  return "(" + std::to_string(p.first) + "," + std::to_string(p.second) + ")";
}
}  // namespace detail

/// Checks the two structural requirements on the rotated set, plus basic
/// well-formedness. Violations are reported as data, never thrown.
inline ValidationReport validate_config(const BellConfig& c) {
  ValidationReport rep;
  const int n = c.graph.size();
  const int m = static_cast<int>(c.stabilizers.size());
  auto add = [&rep](ViolationKind k, std::string msg) {
    rep.violations.push_back({k, std::move(msg)});
  };

  for (int i = 0; i < m; ++i) {
    const auto& w = c.stabilizers[static_cast<std::size_t>(i)];
    if (w.size() != n) {
      add(ViolationKind::kWordLengthMismatch, "stabilizer " + std::to_string(i + 1) + " acts on " +
                                                  std::to_string(w.size()) + " sites, graph has " +
                                                  std::to_string(n));
    } else if (!is_graph_stabilizer(c.graph, w)) {
      add(ViolationKind::kNotAGraphStabilizer,
          "word " + std::to_string(i + 1) + " (" + w.str() + ") is not a stabilizer of the graph");
    }
  }
  if (c.weights.size() != c.stabilizers.size()) {
    add(ViolationKind::kIndexOutOfRange, "weight list length " + std::to_string(c.weights.size()) +
                                             " does not match " + std::to_string(m) +
                                             " stabilizers");
  } else {
    for (int i = 0; i < m; ++i) {
      if (c.weights[static_cast<std::size_t>(i)] < 0) {
        add(ViolationKind::kNegativeWeight,
            "weight of stabilizer " + std::to_string(i + 1) + " is negative");
      }
    }
  }
  for (int pos : c.ac) {
    if (pos < 1 || pos > n) {
      add(ViolationKind::kAcPositionOutOfRange,
          "rotated position " + std::to_string(pos) + " outside 1.." + std::to_string(n));
    }
  }
  auto index_ok = [&](int i) { return i >= 1 && i <= m; };
  for (auto p : c.pairs) {
    if (!index_ok(p.first) || !index_ok(p.second)) {
      add(ViolationKind::kIndexOutOfRange,
          "pair " + detail::pair_str(p) + " references a stabilizer outside 1.." +
              std::to_string(m));
    } else if (p.first == p.second) {
      add(ViolationKind::kSelfPair, "pair " + detail::pair_str(p) + " pairs a stabilizer with itself");
    }
  }
  for (int r : c.remainder) {
    if (!index_ok(r)) {
      add(ViolationKind::kIndexOutOfRange, "remainder index " + std::to_string(r) +
                                               " outside 1.." + std::to_string(m));
    }
  }
  if (!rep.ok()) return rep;  // later checks assume well-formed indices

  // Requirement 1: each pair anticommutes at exactly one rotated position and
  // both members are identity at every other rotated position.
  for (auto p : c.pairs) {
    const auto& a = c.stabilizers[static_cast<std::size_t>(p.first) - 1];
    const auto& b = c.stabilizers[static_cast<std::size_t>(p.second) - 1];
    std::vector<int> clash;
    std::vector<int> residual;
    for (int pos : c.ac) {
      const int sa = a.seq(pos), sb = b.seq(pos);
      if (sa * sb == -1) {
        clash.push_back(pos);
      } else if (sa != 0 || sb != 0) {
        residual.push_back(pos);
      }
    }
    if (clash.empty()) {
      add(ViolationKind::kNoAnticommutingPositionInAc,
          "pair " + detail::pair_str(p) + " has no anticommuting position in the rotated set");
    } else if (clash.size() > 1) {
      std::string sites;
      for (int pos : clash) sites += (sites.empty() ? "" : ", ") + std::to_string(pos);
      add(ViolationKind::kMultipleAnticommutingPositionsInAc,
          "pair " + detail::pair_str(p) + " anticommutes at rotated positions " + sites);
    }
    for (int pos : residual) {
      add(ViolationKind::kNonIdentityAtOtherAcPosition,
          "pair " + detail::pair_str(p) + " has non-identity factors at rotated position " +
              std::to_string(pos) + " without anticommuting there");
    }
  }
  // Requirement 2: remainder stabilizers are identity on the whole rotated set.
  for (int r : c.remainder) {
    const auto& w = c.stabilizers[static_cast<std::size_t>(r) - 1];
    for (int pos : c.ac) {
      if (w.seq(pos) != 0) {
        add(ViolationKind::kRemainderActiveOnAc,
            "remainder stabilizer " + std::to_string(r) + " acts as " +
                (w.seq(pos) > 0 ? "X" : "Z") + " at rotated position " + std::to_string(pos));
      }
    }
  }
  return rep;
}

/// The unique anticommuting rotated position of a valid pair.
inline int pair_anchor_position(const BellConfig& c, std::pair<int, int> p) {
  const auto& a = c.stabilizers[static_cast<std::size_t>(p.first) - 1];
  const auto& b = c.stabilizers[static_cast<std::size_t>(p.second) - 1];
  for (int pos : c.ac) {
    if (a.seq(pos) * b.seq(pos) == -1) return pos;
  }
  throw std::invalid_argument("pair " + detail::pair_str(p) +
                              " has no anticommuting rotated position");
}

struct SelfTestResult {
  bool selftesting = false;
  int rank = 0;
  bool connected = false;

  std::string verdict() const {
    if (selftesting) return "yes";
    if (!connected && rank > 0) return "unsupported (disconnected graph)";
    return "no";
  }
};

/// The expression self-tests the graph state iff the referenced stabilizers
/// have full GF(2) rank n and the graph is connected.
inline SelfTestResult is_selftesting(const BellConfig& c) {
  SelfTestResult r;
  r.rank = gf2::rank_of_words(c.used_words());
  r.connected = c.graph.connected();
  r.selftesting = (r.rank == c.graph.size()) && r.connected;
  return r;
}

/// One weighted product term of a Bell expression. At a rotated position the
/// factor is I for seq 0 and (A + seq*B) otherwise; elsewhere it is I, A or B
/// for seq 0, +1, -1.
struct BellTerm {
  double weight = 1.0;
  std::vector<int> seq;  // one entry per party, values in {-1, 0, +1}
};

struct BellExpression {
  int n_parties = 0;
  std::vector<int> ac;
  std::vector<BellTerm> terms;
  double beta_c = 0.0;
  double beta_q = 0.0;
  bool selftest = false;
  std::optional<BellConfig> provenance;

  bool in_ac(int pos) const { return std::binary_search(ac.begin(), ac.end(), pos); }

  bool term_active_on_ac(const BellTerm& t) const {
    for (int pos : ac) {
      if (t.seq[static_cast<std::size_t>(pos) - 1] != 0) return true;
    }
    return false;
  }

  /// Number of plain correlation functions once the (A+-B) factors are
  /// expanded: 2 per rotated-active term, 1 per term supported off the
  /// rotated set.
  int correlation_count() const {
    int total = 0;
    for (const auto& t : terms) total += term_active_on_ac(t) ? 2 : 1;
    return total;
  }

  PauliWord term_word(const BellTerm& t) const {
    std::uint64_t x = 0, z = 0;
    for (int i = 0; i < n_parties; ++i) {
      if (t.seq[static_cast<std::size_t>(i)] == 1) x |= std::uint64_t{1} << i;
      if (t.seq[static_cast<std::size_t>(i)] == -1) z |= std::uint64_t{1} << i;
    }
    return PauliWord::from_masks(n_parties, x, z);
  }

  std::vector<PauliWord> term_words() const {
    std::vector<PauliWord> out;
    out.reserve(terms.size());
    for (const auto& t : terms) out.push_back(term_word(t));
    return out;
  }
};

/// Assembles the evaluable expression from a valid configuration. Terms are
/// merged per stabilizer: a stabilizer used in several pairs keeps a single
/// term whose weight counts the occurrences.
///
/// Bounds: with per-position pairing groups, the classical bound is
/// sum_T 2*max(W+, W-) plus remainder weight and the quantum bound is
/// sum_T sqrt(2)*(W+ + W-) plus remainder weight, where W+- total the
/// weights of paired occurrences acting as X resp. Z at their group
/// position. For unit weights these reduce to 2|P|+|R| and 2sqrt2|P|+|R|.
inline BellExpression build_expression(const BellConfig& c) {
  ValidationReport rep = validate_config(c);
  if (!rep.ok()) {
    throw std::invalid_argument("invalid configuration: " + rep.str());
  }
  const int n = c.graph.size();
  const int m = static_cast<int>(c.stabilizers.size());

  std::vector<double> occurrences(static_cast<std::size_t>(m), 0.0);
  std::map<int, std::pair<double, double>> group;  // anchor position -> (W+, W-)
  double remainder_weight = 0.0;

  for (auto p : c.pairs) {
    const int t = pair_anchor_position(c, p);
    auto& [wplus, wminus] = group[t];
    for (int idx : {p.first, p.second}) {
      const auto& w = c.stabilizers[static_cast<std::size_t>(idx) - 1];
      const double wt = c.weights[static_cast<std::size_t>(idx) - 1];
      occurrences[static_cast<std::size_t>(idx) - 1] += 1.0;
      (w.seq(t) > 0 ? wplus : wminus) += wt;
    }
  }
  for (int r : c.remainder) {
    occurrences[static_cast<std::size_t>(r) - 1] += 1.0;
    remainder_weight += c.weights[static_cast<std::size_t>(r) - 1];
  }

  BellExpression e;
  e.n_parties = n;
  e.ac = c.ac;
  for (int i = 1; i <= m; ++i) {
    if (occurrences[static_cast<std::size_t>(i) - 1] == 0.0) continue;
    const auto& w = c.stabilizers[static_cast<std::size_t>(i) - 1];
    BellTerm term;
    term.weight = occurrences[static_cast<std::size_t>(i) - 1] *
                  c.weights[static_cast<std::size_t>(i) - 1];
    term.seq.resize(static_cast<std::size_t>(n));
    for (int pos = 1; pos <= n; ++pos) term.seq[static_cast<std::size_t>(pos) - 1] = w.seq(pos);
    e.terms.push_back(std::move(term));
  }

  double beta_c = remainder_weight, beta_q = remainder_weight;
  for (const auto& [t, w] : group) {
    beta_c += 2.0 * std::max(w.first, w.second);
    beta_q += std::sqrt(2.0) * (w.first + w.second);
  }
  e.beta_c = beta_c;
  e.beta_q = beta_q;
  e.selftest = is_selftesting(c).selftesting;
  e.provenance = c;
  return e;
}

/// The counterexample mixed state for a rank n-1 configuration, plus how it
/// was assembled: the lowest-index generator outside the span and the Z
/// pattern whose application flips exactly that generator's eigenvalue.
struct CounterexampleState {
  HermitianOperator rho;
  int missing_vertex = 0;
  std::uint64_t flip_mask = 0;
};

/// rho = (1/2) prod_{independent subset} (S + I)/2: the maximally mixed
/// state on the 2-dimensional joint +1 eigenspace. Equals the even mixture
/// of the graph state and the state with the missing generator flipped.
inline CounterexampleState counterexample_state(const Graph& graph,
                                                const std::vector<PauliWord>& words,
                                                int max_qubits = kDefaultDenseOperatorQubits) {
  const int n = graph.size();
  detail::check_operator_size(n, max_qubits);
  const int rank = gf2::rank_of_words(words);
  if (rank != n - 1) {
    throw std::invalid_argument("counterexample state needs rank n-1 = " + std::to_string(n - 1) +
                                ", configuration has rank " + std::to_string(rank));
  }
  const auto subset = gf2::independent_subset(words);

  // exponent vectors over the generator basis are exactly the x masks
  std::vector<std::uint64_t> xrows;
  gf2::RowBasis basis;
  for (int i : subset) {
    xrows.push_back(words[static_cast<std::size_t>(i)].x_mask());
    basis.insert(gf2::word_row(words[static_cast<std::size_t>(i)]));
  }
  int missing = 0;
  for (int v = 1; v <= n && missing == 0; ++v) {
    if (!basis.contains(gf2::word_row(generator(graph, v)))) missing = v;
  }
  if (missing == 0) throw std::logic_error("no generator outside a rank n-1 span");

  // the unique nonzero d with x.d = 0 for all kept stabilizers; it flips
  // exactly the generators in d, in particular the missing one
  const auto kernel = gf2::nullspace(xrows, n);
  if (kernel.size() != 1) throw std::logic_error("kernel of stabilizer x masks is not 1-dimensional");
  const std::uint64_t d = kernel.front();

  const StateVector psi = graph_state_vector(graph, max_qubits);
  const StateVector flipped = apply_pauli(PauliWord::from_masks(n, 0, d), psi);
  CounterexampleState out;
  out.missing_vertex = missing;
  out.flip_mask = d;
  out.rho = 0.5 * (psi * psi.adjoint() + flipped * flipped.adjoint());
  return out;
}

inline CounterexampleState counterexample_state(const BellConfig& c,
                                                int max_qubits = kDefaultDenseOperatorQubits) {
  return counterexample_state(c.graph, c.used_words(), max_qubits);
}

/// Self-testing verdict recomputed from a bare expression: the term words
/// must have full rank on a connected graph of matching size.
inline SelfTestResult expression_selftest(const BellExpression& e, const Graph& g) {
  SelfTestResult r;
  r.rank = gf2::rank_of_words(e.term_words());
  r.connected = g.connected();
  r.selftesting = (g.size() == e.n_parties) && (r.rank == e.n_parties) && r.connected;
  return r;
}

/// Readable rendering of one term, e.g. "(A1+B1) B2 B3".
inline std::string term_to_string(const BellExpression& e, const BellTerm& t) {
  std::string out;
  for (int i = 1; i <= e.n_parties; ++i) {
    const int s = t.seq[static_cast<std::size_t>(i) - 1];
    if (s == 0) continue;
    if (!out.empty()) out += " ";
    const std::string idx = std::to_string(i);
    if (e.in_ac(i)) {
      out += "(A" + idx + (s > 0 ? "+" : "-") + "B" + idx + ")";
    } else {
      out += (s > 0 ? "A" : "B") + idx;
    }
  }
  if (out.empty()) out = "1";
  if (t.weight != 1.0) {
    std::string w = std::to_string(t.weight);
    w.erase(w.find_last_not_of('0') + 1);
    if (!w.empty() && w.back() == '.') w.pop_back();
    out = w + " * " + out;
  }
  return out;
}

inline std::string expression_to_string(const BellExpression& e) {
  std::string out;
  for (const auto& t : e.terms) {
    if (!out.empty()) out += " + ";
    out += "<" + term_to_string(e, t) + ">";
  }
  return out;
}

}  // namespace stabbell
