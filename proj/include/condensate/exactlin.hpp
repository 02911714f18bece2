#pragma once

#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "condensate/echelon.hpp"
#include "condensate/errors.hpp"
#include "condensate/matrix.hpp"
#include "condensate/sparse.hpp"

namespace condensate {

/// A splitting g·f = p of an idempotent p, with f·g the identity.
struct IdempotentSplit {
  Matrix p;
  Matrix f;  ///< rank × n surjection
  Matrix g;  ///< n × rank injection
  std::size_t rank() const noexcept { return f.rows(); }
};

/// Sparse form of IdempotentSplit used by the tensor machinery.
struct SparseSplit {
  SparseMatrix f;
  SparseMatrix g;
  std::size_t rank() const noexcept { return f.rows(); }
};

namespace detail {

inline void check_no_shape_overflow(std::size_t rows, std::size_t cols) {
  if (cols != 0 && rows > static_cast<std::size_t>(-1) / cols) throw InputError("matrix too large");
}

}  // namespace detail

inline std::size_t rank(const SparseMatrix& m) {
  RowEchelon ech(m.rows());
  for (std::size_t j = 0; j < m.cols(); ++j) ech.add(m.column(j));
  return ech.rank();
}

inline std::size_t rank(const Matrix& m) { return rank(SparseMatrix::from_dense(m)); }

/// Row echelon form of the row space of `m` (rows given by columns of mᵀ).
inline RowEchelon row_echelon(const SparseMatrix& m) {
  const SparseMatrix t = m.transpose();
  RowEchelon ech(m.cols());
  for (std::size_t i = 0; i < t.cols(); ++i) ech.add(t.column(i));
  return ech;
}

/// Columns span {x : m·x = 0}; one column per free variable in ascending order.
inline SparseMatrix kernel_basis(const SparseMatrix& m) { return row_echelon(m).kernel_basis(m.cols()); }

inline Matrix kernel_basis(const Matrix& m) { return kernel_basis(SparseMatrix::from_dense(m)).to_dense(); }

/// Some x with a·x = b, free variables set to zero; nullopt if inconsistent.
inline std::optional<SparseMatrix> solve(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != b.rows())
    throw InputError("solve: a has " + std::to_string(a.rows()) + " rows, b has " + std::to_string(b.rows()));
  const std::size_t n = a.cols();
  const std::size_t k = b.cols();
  // Row i of [a | b].
  const SparseMatrix at = a.transpose();
  const SparseMatrix bt = b.transpose();
  RowEchelon ech(n + k);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    SparseVector row = at.column(i);
    for (const auto& e : bt.column(i)) row.push_back({n + e.index, e.value});
    ech.add(row);
  }
  const auto pivots = ech.pivots();
  if (!pivots.empty() && pivots.back() >= n) return std::nullopt;
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, Scalar>> trip;
  for (const auto& row : ech.rows()) {
    const std::size_t pc = row.front().index;
    for (const auto& e : row)
      if (e.index >= n) trip.push_back({{pc, e.index - n}, e.value});
  }
  return SparseMatrix::from_triplets(n, k, std::move(trip));
}

inline std::optional<Matrix> solve(const Matrix& a, const Matrix& b) {
  auto x = solve(SparseMatrix::from_dense(a), SparseMatrix::from_dense(b));
  if (!x) return std::nullopt;
  return x->to_dense();
}

inline SparseMatrix inverse(const SparseMatrix& a) {
  if (!a.is_square()) throw InputError("inverse of non-square matrix");
  auto x = solve(a, SparseMatrix::identity(a.rows()));
  if (!x || rank(a) != a.rows()) throw PreconditionError("matrix is singular");
  return *x;
}

inline Matrix inverse(const Matrix& a) { return inverse(SparseMatrix::from_dense(a)).to_dense(); }

inline bool is_invertible(const SparseMatrix& a) { return a.is_square() && rank(a) == a.rows(); }

inline Matrix kron(const Matrix& a, const Matrix& b) {
  detail::check_no_shape_overflow(a.rows() * b.rows(), a.cols() * b.cols());
  return kron(SparseMatrix::from_dense(a), SparseMatrix::from_dense(b)).to_dense();
}

/// Deterministic column visiting orders used to produce alternative
/// splittings of one idempotent. Variant 0 is the natural order.
inline std::vector<std::size_t> pivot_order(std::size_t n, unsigned variant) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (n == 0) return order;
  switch (variant % 5) {
    case 0:
      break;
    case 1:
      std::reverse(order.begin(), order.end());
      break;
    case 2:
      std::rotate(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n / 2), order.end());
      break;
    case 3: {
      std::vector<std::size_t> o;
      for (std::size_t i = 1; i < n; i += 2) o.push_back(i);
      for (std::size_t i = 0; i < n; i += 2) o.push_back(i);
      order = std::move(o);
      break;
    }
    case 4: {
      std::size_t step = n / 3 + 1;
      while (std::gcd(step, n) != 1) ++step;
      for (std::size_t i = 0; i < n; ++i) order[i] = (i * step + n / 2) % n;
      break;
    }
  }
  return order;
}

/// Splits an exact idempotent p = g·f with f·g = id.
///
/// The image basis is formed from the first independent columns of p in
/// the given visiting order (natural order by default), normalised so that
/// g restricted to its leading independent rows is the identity. Exactness
/// of f·g = id and g·f = p is verified, which also certifies p·p = p.
inline SparseSplit split_idempotent(const SparseMatrix& p, std::span<const std::size_t> order = {}) {
  if (!p.is_square())
    throw InputError("split_idempotent: matrix is " + std::to_string(p.rows()) + "x" + std::to_string(p.cols()));
  const std::size_t n = p.rows();
  const auto not_idempotent = [&p]() {
    const SparseMatrix defect = p * p - p;
    if (defect.is_zero()) throw InternalError("split_idempotent: splitting identities failed");
    throw PreconditionError("split_idempotent: not idempotent, p^2 - p has " + std::to_string(defect.nonzeros()) +
                            " nonzero entries");
  };
  const Scalar tr = p.trace();
  if (tr.get_den() != 1 || sgn(tr) < 0 || tr > Scalar(static_cast<unsigned long>(n))) not_idempotent();
  const std::size_t r = tr.get_num().get_ui();

  std::vector<std::size_t> natural;
  if (order.empty()) {
    natural = pivot_order(n, 0);
    order = natural;
  }
  if (order.size() != n) throw InputError("split_idempotent: order has wrong length");

  std::vector<std::size_t> chosen;
  RowEchelon columns(n);
  for (std::size_t j : order) {
    if (columns.rank() == r) break;
    if (columns.add(p.column(j))) chosen.push_back(j);
  }
  if (columns.rank() != r) not_idempotent();

  const SparseMatrix c = p.select_columns(chosen);
  RowEchelon rows(n);
  for (std::size_t j = 0; j < r; ++j) rows.add(c.column(j));
  const std::vector<std::size_t> piv = rows.pivots();

  SparseSplit s;
  s.g = c * inverse(c.select_rows(piv));
  s.f = p.select_rows(piv);
  if (!(s.f * s.g == SparseMatrix::identity(r)) || !(s.g * s.f == p)) not_idempotent();
  return s;
}

inline IdempotentSplit split_idempotent(const Matrix& p, std::span<const std::size_t> order = {}) {
  const SparseSplit s = split_idempotent(SparseMatrix::from_dense(p), order);
  return IdempotentSplit{p, s.f.to_dense(), s.g.to_dense()};
}

}  // namespace condensate
