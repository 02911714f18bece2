#pragma once

// Independent reference routines for the tests. Dense, naive, and written
// without any of the library's linear algebra.

#include <gmpxx.h>

#include <cstddef>
#include <random>
#include <vector>

#include "condensate/sparse.hpp"

namespace oracle {

using Dense = std::vector<std::vector<mpq_class>>;

inline Dense zeros(std::size_t r, std::size_t c) { return Dense(r, std::vector<mpq_class>(c, 0)); }

inline Dense identity(std::size_t n) {
  Dense d = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 1;
  return d;
}

inline Dense from_sparse(const condensate::SparseMatrix& m) {
  Dense d = zeros(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) d[r][c] = m.at(r, c);
  return d;
}

inline condensate::SparseMatrix to_sparse(const Dense& d, std::size_t cols) {
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, mpq_class>> t;
  for (std::size_t r = 0; r < d.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (d[r][c] != 0) t.push_back({{r, c}, d[r][c]});
  return condensate::SparseMatrix::from_triplets(d.size(), cols, std::move(t));
}

inline Dense mul(const Dense& a, const Dense& b, std::size_t inner, std::size_t cols) {
  Dense out = zeros(a.size(), cols);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < inner; ++k)
      if (a[i][k] != 0)
        for (std::size_t j = 0; j < cols; ++j) out[i][j] += a[i][k] * b[k][j];
  return out;
}

inline Dense kron(const Dense& a, std::size_t ac, const Dense& b, std::size_t bc) {
  Dense out = zeros(a.size() * b.size(), ac * bc);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < ac; ++j)
      for (std::size_t k = 0; k < b.size(); ++k)
        for (std::size_t l = 0; l < bc; ++l) out[i * b.size() + k][j * bc + l] = a[i][j] * b[k][l];
  return out;
}

/// Rank by Gauss–Jordan elimination with full row swaps.
inline std::size_t rank(Dense a, std::size_t cols) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == r || a[i][c] == 0) continue;
      const mpq_class f = a[i][c] / a[r][c];
      for (std::size_t k = c; k < cols; ++k) a[i][k] -= f * a[r][k];
    }
    ++r;
  }
  return r;
}

inline mpq_class trace(const Dense& a) {
  mpq_class t = 0;
  for (std::size_t i = 0; i < a.size(); ++i) t += a[i][i];
  return t;
}

/// Random integer matrix with entries in [lo, hi].
inline Dense random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  Dense d = zeros(r, c);
  for (auto& row : d)
    for (auto& x : row) x = dist(rng);
  return d;
}

/// Inverse via Gauss–Jordan on [a | I]; empty if singular.
inline Dense inverse(Dense a) {
  const std::size_t n = a.size();
  Dense inv = identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return {};
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    const mpq_class s = a[c][c];
    for (std::size_t k = 0; k < n; ++k) {
      a[c][k] /= s;
      inv[c][k] /= s;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      const mpq_class f = a[i][c];
      for (std::size_t k = 0; k < n; ++k) {
        a[i][k] -= f * a[c][k];
        inv[i][k] -= f * inv[c][k];
      }
    }
  }
  return inv;
}

}  // namespace oracle
