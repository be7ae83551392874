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
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stabbell/bell.hpp"

namespace stabbell {

/// Deterministic local strategy: one (a_i, b_i) pair of +-1 outputs per party.
using Strategy = std::vector<std::pair<int, int>>;

namespace detail {
inline double term_factor(const BellExpression& e, const BellTerm& t, int party, int a, int b) {
  const int s = t.seq[static_cast<std::size_t>(party) - 1];
  if (s == 0) return 1.0;
  if (e.in_ac(party)) return static_cast<double>(a + s * b);
  return static_cast<double>(s > 0 ? a : b);
}
}  // namespace detail

/// Value of the expression under a deterministic strategy: rotated factors
/// become (a_i + s b_i), plain factors a_i or b_i.
inline double classical_value(const BellExpression& e, const Strategy& strategy) {
  if (static_cast<int>(strategy.size()) != e.n_parties) {
    throw std::invalid_argument("strategy length " + std::to_string(strategy.size()) +
                                " does not match " + std::to_string(e.n_parties) + " parties");
  }
  double total = 0.0;
  for (const auto& t : e.terms) {
    double prod = t.weight;
    for (int i = 1; i <= e.n_parties && prod != 0.0; ++i) {
      auto [a, b] = strategy[static_cast<std::size_t>(i) - 1];
      prod *= detail::term_factor(e, t, i, a, b);
    }
    total += prod;
  }
  return total;
}

struct ClassicalBound {
  double bound = 0.0;
  Strategy argmax;                     // first maximizer in enumeration order
  std::int64_t strategies_checked = 0;
};

/// Exact classical bound by enumerating all 4^n deterministic strategies.
///
/// Enumeration is depth-first over parties with per-term partial products,
/// party choices ordered (+1,+1), (+1,-1), (-1,+1), (-1,-1); ties keep the
/// first maximizer, so the reported strategy is reproducible.
inline ClassicalBound brute_force_classical_bound(const BellExpression& e, int max_parties = 13) {
  const int n = e.n_parties;
  if (n > max_parties) {
    throw std::invalid_argument("brute-force bound over 4^" + std::to_string(n) +
                                " strategies refused (limit n=" + std::to_string(max_parties) +
                                "); sample strategies instead");
  }
  const int nt = static_cast<int>(e.terms.size());
  static constexpr int kChoices[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};

  // partial[d] holds per-term products of the first d party factors
  std::vector<std::vector<double>> partial(static_cast<std::size_t>(n) + 1,
                                           std::vector<double>(static_cast<std::size_t>(nt)));
  for (int t = 0; t < nt; ++t) partial[0][static_cast<std::size_t>(t)] = 1.0;

  ClassicalBound result;
  result.bound = -std::numeric_limits<double>::infinity();
  Strategy current(static_cast<std::size_t>(n));

  // explicit stack of choice indices to avoid recursion
  std::vector<int> choice(static_cast<std::size_t>(n), 0);
  int depth = 0;
  while (depth >= 0) {
    if (choice[static_cast<std::size_t>(depth)] == 4) {
      choice[static_cast<std::size_t>(depth)] = 0;
      --depth;
      if (depth >= 0) ++choice[static_cast<std::size_t>(depth)];
      continue;
    }
    const int ci = choice[static_cast<std::size_t>(depth)];
    const int a = kChoices[ci][0], b = kChoices[ci][1];
    current[static_cast<std::size_t>(depth)] = {a, b};
    const auto& prev = partial[static_cast<std::size_t>(depth)];
    auto& next = partial[static_cast<std::size_t>(depth) + 1];
    for (int t = 0; t < nt; ++t) {
      next[static_cast<std::size_t>(t)] =
          prev[static_cast<std::size_t>(t)] *
          detail::term_factor(e, e.terms[static_cast<std::size_t>(t)], depth + 1, a, b);
    }
    if (depth + 1 == n) {
      double value = 0.0;
      for (int t = 0; t < nt; ++t) {
        value += e.terms[static_cast<std::size_t>(t)].weight * next[static_cast<std::size_t>(t)];
      }
      ++result.strategies_checked;
      if (value > result.bound) {
        result.bound = value;
        result.argmax = current;
      }
      ++choice[static_cast<std::size_t>(depth)];
    } else {
      ++depth;
    }
  }
  return result;
}

}  // namespace stabbell
