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
#include <vector>

#include "stabbell/pauli.hpp"

namespace stabbell::gf2 {

/// Row encoding of a word for rank computations: x mask in the low n bits,
/// z mask in the next n.
inline std::uint64_t word_row(const PauliWord& w) {
  return w.x_mask() | (w.z_mask() << w.size());
}

/// Incremental GF(2) row basis kept in echelon form.
class RowBasis {
 public:
  /// Inserts a row; returns true when it was independent of the basis.
  bool insert(std::uint64_t row) {
    reduce(row);
    if (row == 0) return false;
    rows_.push_back(row);
    // keep rows ordered by leading bit so reduce() stays a single pass
    for (std::size_t i = rows_.size(); i > 1 && rows_[i - 1] > rows_[i - 2]; --i) {
      std::swap(rows_[i - 1], rows_[i - 2]);
    }
    return true;
  }

  bool contains(std::uint64_t row) const {
    reduce(row);
    return row == 0;
  }

  int rank() const { return static_cast<int>(rows_.size()); }

 private:
  void reduce(std::uint64_t& row) const {
    for (std::uint64_t r : rows_) {
      std::uint64_t lead = std::uint64_t{1} << (63 - __builtin_clzll(r));
      if (row & lead) row ^= r;
    }
  }

  std::vector<std::uint64_t> rows_;  // strictly decreasing leading bits
};

inline int rank(const std::vector<std::uint64_t>& rows) {
  RowBasis basis;
  for (std::uint64_t r : rows) {
    if (r) basis.insert(r);
  }
  return basis.rank();
}

/// Rank of the 2n-column binary matrix whose rows are (x || z).
inline int rank_of_words(const std::vector<PauliWord>& words) {
  if (words.empty()) return 0;
  detail::require_same_length(words.front(), words.back());
  std::vector<std::uint64_t> rows;
  rows.reserve(words.size());
  for (const auto& w : words) {
    detail::require_same_length(words.front(), w);
    rows.push_back(word_row(w));
  }
  return rank(rows);
}

/// 0-based positions of a maximal independent subset, scanning in order
/// (Gaussian elimination pivot order).
inline std::vector<int> independent_subset(const std::vector<PauliWord>& words) {
  RowBasis basis;
  std::vector<int> picked;
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::uint64_t r = word_row(words[i]);
    if (r && basis.insert(r)) picked.push_back(static_cast<int>(i));
  }
  return picked;
}

inline bool in_span(std::uint64_t row, const std::vector<std::uint64_t>& rows) {
  RowBasis basis;
  for (std::uint64_t r : rows) {
    if (r) basis.insert(r);
  }
  return basis.contains(row);
}

/// All solutions d of  rows[k] . d = 0 (mod 2)  form a subspace; returns a
/// basis of it over `ncols` variables (each basis vector as a bitmask).
inline std::vector<std::uint64_t> nullspace(std::vector<std::uint64_t> rows, int ncols) {
  // forward elimination, tracking pivot columns
  std::vector<int> pivot_col;
  std::size_t r = 0;
  for (int c = 0; c < ncols && r < rows.size(); ++c) {
    std::size_t sel = r;
    while (sel < rows.size() && !((rows[sel] >> c) & 1)) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (k != r && ((rows[k] >> c) & 1)) rows[k] ^= rows[r];
    }
    pivot_col.push_back(c);
    ++r;
  }
  rows.resize(r);

  std::vector<std::uint64_t> basis;
  for (int c = 0; c < ncols; ++c) {
    bool is_pivot = false;
    for (int p : pivot_col) {
      if (p == c) is_pivot = true;
    }
    if (is_pivot) continue;
    std::uint64_t v = std::uint64_t{1} << c;  // free variable = 1
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if ((rows[k] >> c) & 1) v |= std::uint64_t{1} << pivot_col[k];
    }
    basis.push_back(v);
  }
  return basis;
}

}  // namespace stabbell::gf2
