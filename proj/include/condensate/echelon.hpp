#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <vector>

#include "condensate/sparse.hpp"

namespace condensate {

/// Incrementally maintained reduced row echelon form over the rationals.
///
/// Rows are sparse. Because the RREF of a row space is unique, every
/// quantity derived from it (pivots, kernel basis, particular solution with
/// free variables set to zero) is independent of insertion order.
class RowEchelon {
 public:
  explicit RowEchelon(std::size_t width) : width_(width) {}

  std::size_t width() const noexcept { return width_; }
  std::size_t rank() const noexcept { return rows_.size(); }

  /// Reduces `row` against the current basis. Returns true when it was
  /// independent (and has been absorbed as a new pivot row).
  bool add(const SparseVector& row) {
    SparseVector reduced = reduce(row);
    if (reduced.empty()) return false;
    insert_reduced(std::move(reduced));
    return true;
  }

  /// Residual of `row` modulo the current row space.
  SparseVector reduce(const SparseVector& row) const {
    detail::Accumulator acc(width_);
    for (const auto& e : row) acc.add(e.index, e.value);
    for (const auto& e : row) {
      auto it = pivot_of_.find(e.index);
      if (it == pivot_of_.end()) continue;
      Scalar c = -e.value;
      for (const auto& r : rows_[it->second]) acc.add_product(r.index, r.value, c);
    }
    return acc.take();
  }

  bool contains(const SparseVector& row) const { return reduce(row).empty(); }

  /// Pivot columns, ascending.
  std::vector<std::size_t> pivots() const {
    std::vector<std::size_t> p;
    p.reserve(pivot_of_.size());
    for (const auto& [col, idx] : pivot_of_) p.push_back(col);
    return p;
  }

  /// RREF rows ordered by pivot column.
  std::vector<SparseVector> rows() const {
    std::vector<SparseVector> out;
    out.reserve(rows_.size());
    for (const auto& [col, idx] : pivot_of_) out.push_back(rows_[idx]);
    return out;
  }

  /// Basis of the null space (column vectors, one per free column in
  /// ascending order), restricted to the first `n` coordinates.
  SparseMatrix kernel_basis(std::size_t n) const {
    std::vector<char> is_pivot(n, 0);
    for (const auto& [col, idx] : pivot_of_)
      if (col < n) is_pivot[col] = 1;
    std::vector<std::size_t> free;
    for (std::size_t c = 0; c < n; ++c)
      if (!is_pivot[c]) free.push_back(c);
    std::vector<std::size_t> free_pos(n, static_cast<std::size_t>(-1));
    for (std::size_t k = 0; k < free.size(); ++k) free_pos[free[k]] = k;

    std::vector<SparseVector> cols(free.size());
    for (std::size_t k = 0; k < free.size(); ++k) cols[k].push_back({free[k], Scalar(1)});
    for (const auto& [pc, idx] : pivot_of_) {
      if (pc >= n) continue;
      for (const auto& e : rows_[idx]) {
        if (e.index >= n || e.index == pc) continue;
        const std::size_t k = free_pos[e.index];
        if (k != static_cast<std::size_t>(-1)) cols[k].push_back({pc, -e.value});
      }
    }
    SparseMatrix out(n, free.size());
    for (std::size_t k = 0; k < free.size(); ++k) {
      std::sort(cols[k].begin(), cols[k].end(),
                [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
      out.set_column(k, std::move(cols[k]));
    }
    return out;
  }

 private:
  void insert_reduced(SparseVector v) {
    const std::size_t pc = v.front().index;
    const Scalar inv = 1 / v.front().value;
    for (auto& e : v) e.value *= inv;
    // Clear column pc from existing rows to keep the form reduced.
    detail::Accumulator acc(width_);
    for (auto& r : rows_) {
      auto it = std::lower_bound(r.begin(), r.end(), pc,
                                 [](const SparseEntry& e, std::size_t i) { return e.index < i; });
      if (it == r.end() || it->index != pc) continue;
      const Scalar c = -it->value;
      for (const auto& e : r) acc.add(e.index, e.value);
      for (const auto& e : v) acc.add_product(e.index, e.value, c);
      r = acc.take();
    }
    pivot_of_[pc] = rows_.size();
    rows_.push_back(std::move(v));
  }

  std::size_t width_;
  std::vector<SparseVector> rows_;
  std::map<std::size_t, std::size_t> pivot_of_;
};

}  // namespace condensate
