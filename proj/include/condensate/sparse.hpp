#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "condensate/errors.hpp"
#include "condensate/matrix.hpp"
#include "condensate/scalar.hpp"

namespace condensate {

struct SparseEntry {
  std::size_t index;
  Scalar value;
};

/// Sorted list of nonzero entries of one vector.
using SparseVector = std::vector<SparseEntry>;

namespace detail {

/// Collects (index, value) contributions and merges them into a sorted
/// SparseVector with zeros dropped. Dense scatter for short vectors,
/// sort-and-merge otherwise.
class Accumulator {
 public:
  explicit Accumulator(std::size_t length) : length_(length) {
    if (length_ <= kDenseLimit) {
      dense_.resize(length_);
      used_.assign(length_, 0);
    }
  }

  void add(std::size_t index, const Scalar& value) {
    if (!dense_.empty() || length_ == 0) {
      if (!used_[index]) {
        used_[index] = 1;
        touched_.push_back(index);
        dense_[index] = value;
      } else {
        dense_[index] += value;
      }
    } else {
      items_.push_back({index, value});
    }
  }

  void add_product(std::size_t index, const Scalar& a, const Scalar& b) {
    tmp_ = a * b;
    add(index, tmp_);
  }

  SparseVector take() {
    SparseVector out;
    if (!dense_.empty() || length_ == 0) {
      std::sort(touched_.begin(), touched_.end());
      out.reserve(touched_.size());
      for (std::size_t i : touched_) {
        if (!is_zero(dense_[i])) out.push_back({i, dense_[i]});
        used_[i] = 0;
      }
      touched_.clear();
      return out;
    }
    std::sort(items_.begin(), items_.end(),
              [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
    for (std::size_t i = 0; i < items_.size();) {
      std::size_t j = i;
      Scalar sum = items_[i].value;
      for (++j; j < items_.size() && items_[j].index == items_[i].index; ++j) sum += items_[j].value;
      if (!is_zero(sum)) out.push_back({items_[i].index, std::move(sum)});
      i = j;
    }
    items_.clear();
    return out;
  }

 private:
  static constexpr std::size_t kDenseLimit = 1u << 12;
  std::size_t length_;
  std::vector<Scalar> dense_;
  std::vector<char> used_;
  std::vector<std::size_t> touched_;
  std::vector<SparseEntry> items_;
  Scalar tmp_;
};

}  // namespace detail

/// Column-compressed exact matrix. The operator engine behind every
/// structure-map composition; dense Matrix is the public interchange type.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), columns_(cols) {}

  static SparseMatrix identity(std::size_t n) {
    SparseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.columns_[i].push_back({i, Scalar(1)});
    return m;
  }

  static SparseMatrix from_dense(const Matrix& d) {
    SparseMatrix m(d.rows(), d.cols());
    for (std::size_t j = 0; j < d.cols(); ++j)
      for (std::size_t i = 0; i < d.rows(); ++i)
        if (!condensate::is_zero(d(i, j))) m.columns_[j].push_back({i, d(i, j)});
    return m;
  }

  /// Builds from (row, col, value) triples; duplicates are summed.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::vector<std::pair<std::pair<std::size_t, std::size_t>, Scalar>> t) {
    std::sort(t.begin(), t.end(), [](const auto& a, const auto& b) {
      return a.first.second != b.first.second ? a.first.second < b.first.second
                                              : a.first.first < b.first.first;
    });
    SparseMatrix m(rows, cols);
    for (std::size_t i = 0; i < t.size();) {
      const auto [r, c] = t[i].first;
      if (r >= rows || c >= cols) throw InputError("triplet out of range");
      Scalar sum = t[i].second;
      std::size_t j = i + 1;
      for (; j < t.size() && t[j].first == t[i].first; ++j) sum += t[j].second;
      if (!condensate::is_zero(sum)) m.columns_[c].push_back({r, std::move(sum)});
      i = j;
    }
    return m;
  }

  Matrix to_dense() const {
    Matrix d(rows_, cols());
    for (std::size_t j = 0; j < cols(); ++j)
      for (const auto& e : columns_[j]) d(e.index, j) = e.value;
    return d;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return columns_.size(); }
  bool is_square() const noexcept { return rows_ == cols(); }

  const SparseVector& column(std::size_t j) const { return columns_[j]; }
  void set_column(std::size_t j, SparseVector v) { columns_[j] = std::move(v); }

  Scalar at(std::size_t r, std::size_t c) const {
    const auto& col = columns_[c];
    auto it = std::lower_bound(col.begin(), col.end(), r,
                               [](const SparseEntry& e, std::size_t i) { return e.index < i; });
    if (it != col.end() && it->index == r) return it->value;
    return Scalar(0);
  }

  std::size_t nonzeros() const {
    std::size_t n = 0;
    for (const auto& c : columns_) n += c.size();
    return n;
  }

  bool is_zero() const {
    for (const auto& c : columns_)
      if (!c.empty()) return false;
    return true;
  }

  Scalar trace() const {
    Scalar t;
    for (std::size_t j = 0; j < std::min(rows_, cols()); ++j) t += at(j, j);
    return t;
  }

  SparseMatrix transpose() const {
    std::vector<std::size_t> counts(rows_, 0);
    for (const auto& c : columns_)
      for (const auto& e : c) ++counts[e.index];
    SparseMatrix t(cols(), rows_);
    for (std::size_t r = 0; r < rows_; ++r) t.columns_[r].reserve(counts[r]);
    for (std::size_t j = 0; j < cols(); ++j)
      for (const auto& e : columns_[j]) t.columns_[e.index].push_back({j, e.value});
    return t;
  }

  /// Rows listed in `which`, in that order.
  SparseMatrix select_rows(std::span<const std::size_t> which) const {
    std::vector<std::size_t> pos(rows_, static_cast<std::size_t>(-1));
    for (std::size_t k = 0; k < which.size(); ++k) pos[which[k]] = k;
    SparseMatrix out(which.size(), cols());
    for (std::size_t j = 0; j < cols(); ++j) {
      SparseVector v;
      for (const auto& e : columns_[j])
        if (pos[e.index] != static_cast<std::size_t>(-1)) v.push_back({pos[e.index], e.value});
      std::sort(v.begin(), v.end(), [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
      out.columns_[j] = std::move(v);
    }
    return out;
  }

  SparseMatrix select_columns(std::span<const std::size_t> which) const {
    SparseMatrix out(rows_, which.size());
    for (std::size_t k = 0; k < which.size(); ++k) out.columns_[k] = columns_[which[k]];
    return out;
  }

  /// First entry (row-major order) where the two matrices differ.
  struct Difference {
    std::size_t row;
    std::size_t col;
    Scalar lhs;
    Scalar rhs;
  };
  friend std::optional<Difference> first_difference(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols() != b.cols()) throw InputError("sparse shape mismatch in comparison");
    std::optional<Difference> best;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const auto& ca = a.columns_[j];
      const auto& cb = b.columns_[j];
      std::size_t p = 0, q = 0;
      while (p < ca.size() || q < cb.size()) {
        std::size_t r;
        Scalar va, vb;
        if (q >= cb.size() || (p < ca.size() && ca[p].index < cb[q].index)) {
          r = ca[p].index;
          va = ca[p++].value;
        } else if (p >= ca.size() || cb[q].index < ca[p].index) {
          r = cb[q].index;
          vb = cb[q++].value;
        } else {
          r = ca[p].index;
          va = ca[p++].value;
          vb = cb[q++].value;
        }
        if (va != vb) {
          if (!best || r < best->row) best = Difference{r, j, va, vb};
          break;  // later rows in this column cannot beat r
        }
      }
    }
    return best;
  }

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols() != b.cols()) return false;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const auto& ca = a.columns_[j];
      const auto& cb = b.columns_[j];
      if (ca.size() != cb.size()) return false;
      for (std::size_t k = 0; k < ca.size(); ++k)
        if (ca[k].index != cb[k].index || ca[k].value != cb[k].value) return false;
    }
    return true;
  }

  friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.cols() != b.rows_)
      throw InputError("sparse product shape mismatch: " + std::to_string(a.rows_) + "x" +
                       std::to_string(a.cols()) + " * " + std::to_string(b.rows_) + "x" +
                       std::to_string(b.cols()));
    SparseMatrix c(a.rows_, b.cols());
    detail::Accumulator acc(a.rows_);
    for (std::size_t j = 0; j < b.cols(); ++j) {
      for (const auto& bk : b.columns_[j])
        for (const auto& ai : a.columns_[bk.index]) acc.add_product(ai.index, ai.value, bk.value);
      c.columns_[j] = acc.take();
    }
    return c;
  }

  friend SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) { return combine(a, b, 1); }
  friend SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) { return combine(a, b, -1); }

  friend SparseMatrix operator*(const Scalar& s, SparseMatrix a) {
    if (condensate::is_zero(s)) return SparseMatrix(a.rows_, a.cols());
    for (auto& c : a.columns_)
      for (auto& e : c) e.value *= s;
    return a;
  }

 private:
  static SparseMatrix combine(const SparseMatrix& a, const SparseMatrix& b, int sign) {
    if (a.rows_ != b.rows_ || a.cols() != b.cols()) throw InputError("sparse shape mismatch in sum");
    SparseMatrix c(a.rows_, a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const auto& ca = a.columns_[j];
      const auto& cb = b.columns_[j];
      SparseVector out;
      out.reserve(ca.size() + cb.size());
      std::size_t p = 0, q = 0;
      while (p < ca.size() || q < cb.size()) {
        if (q >= cb.size() || (p < ca.size() && ca[p].index < cb[q].index)) {
          out.push_back(ca[p++]);
        } else if (p >= ca.size() || cb[q].index < ca[p].index) {
          out.push_back({cb[q].index, sign > 0 ? Scalar(cb[q].value) : Scalar(-cb[q].value)});
          ++q;
        } else {
          Scalar v = sign > 0 ? Scalar(ca[p].value + cb[q].value) : Scalar(ca[p].value - cb[q].value);
          if (!condensate::is_zero(v)) out.push_back({ca[p].index, std::move(v)});
          ++p;
          ++q;
        }
      }
      c.columns_[j] = std::move(out);
    }
    return c;
  }

  std::size_t rows_ = 0;
  std::vector<SparseVector> columns_;
};

/// Kronecker product; the left factor's index is the slow one.
inline SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
  SparseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ja = 0; ja < a.cols(); ++ja)
    for (std::size_t jb = 0; jb < b.cols(); ++jb) {
      SparseVector col;
      col.reserve(a.column(ja).size() * b.column(jb).size());
      for (const auto& ea : a.column(ja))
        for (const auto& eb : b.column(jb)) col.push_back({ea.index * b.rows() + eb.index, ea.value * eb.value});
      out.set_column(ja * b.cols() + jb, std::move(col));
    }
  return out;
}

/// (I_outer ⊗ k ⊗ I_inner) · x, computed without forming the Kronecker product.
inline SparseMatrix apply_middle(const SparseMatrix& k, std::size_t outer, std::size_t inner,
                                 const SparseMatrix& x) {
  const std::size_t in_block = k.cols() * inner;
  if (x.rows() != outer * in_block)
    throw InputError("apply_middle: operand has " + std::to_string(x.rows()) + " rows, expected " +
                     std::to_string(outer * in_block));
  const std::size_t out_block = k.rows() * inner;
  SparseMatrix out(outer * out_block, x.cols());
  detail::Accumulator acc(out.rows());
  for (std::size_t j = 0; j < x.cols(); ++j) {
    for (const auto& e : x.column(j)) {
      const std::size_t o = e.index / in_block;
      const std::size_t rem = e.index % in_block;
      const std::size_t mid = rem / inner;
      const std::size_t i = rem % inner;
      for (const auto& ke : k.column(mid)) acc.add_product(o * out_block + ke.index * inner + i, ke.value, e.value);
    }
    out.set_column(j, acc.take());
  }
  return out;
}

/// Permutation of a composite tensor index. `dims` lists the factor
/// dimensions in the source order; `order[k]` names the source factor that
/// becomes factor k of the target. Returns target index for each source index.
inline std::vector<std::size_t> tensor_permutation(std::span<const std::size_t> dims,
                                                   std::span<const std::size_t> order) {
  const std::size_t n = dims.size();
  if (order.size() != n) throw InputError("tensor_permutation: order length mismatch");
  std::size_t total = 1;
  for (auto d : dims) total *= d;
  std::vector<std::size_t> target_dims(n);
  for (std::size_t k = 0; k < n; ++k) target_dims[k] = dims[order[k]];
  std::vector<std::size_t> out(total);
  std::vector<std::size_t> digits(n, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    for (std::size_t f = n; f-- > 0;) {
      digits[f] = rem % dims[f];
      rem /= dims[f];
    }
    std::size_t t = 0;
    for (std::size_t k = 0; k < n; ++k) t = t * target_dims[k] + digits[order[k]];
    out[idx] = t;
  }
  return out;
}

/// x·P for the permutation matrix P e_i = e_{perm[i]}.
inline SparseMatrix permute_columns(const SparseMatrix& x, std::span<const std::size_t> perm) {
  if (perm.size() != x.cols()) throw InputError("permute_columns: length mismatch");
  SparseMatrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < perm.size(); ++i) out.set_column(i, x.column(perm[i]));
  return out;
}

/// P·x for the permutation matrix P e_i = e_{perm[i]}.
inline SparseMatrix permute_rows(std::span<const std::size_t> perm, const SparseMatrix& x) {
  if (perm.size() != x.rows()) throw InputError("permute_rows: length mismatch");
  SparseMatrix out(x.rows(), x.cols());
  for (std::size_t j = 0; j < x.cols(); ++j) {
    SparseVector v;
    v.reserve(x.column(j).size());
    for (const auto& e : x.column(j)) v.push_back({perm[e.index], e.value});
    std::sort(v.begin(), v.end(), [](const SparseEntry& a, const SparseEntry& b) { return a.index < b.index; });
    out.set_column(j, std::move(v));
  }
  return out;
}

/// Permutation matrix P with P e_i = e_{perm[i]}.
inline SparseMatrix permutation_matrix(std::span<const std::size_t> perm) {
  SparseMatrix p(perm.size(), perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) p.set_column(i, {{perm[i], Scalar(1)}});
  return p;
}

}  // namespace condensate
