#pragma once

#include <cstddef>
#include <cstdlib>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "condensate/algebra.hpp"
#include "condensate/bimodule.hpp"
#include "condensate/errors.hpp"
#include "condensate/exactlin.hpp"

namespace condensate {

inline constexpr std::size_t kDefaultDimCap = 10000;

/// Chain dimension cap: CONDENSATE_DIM_CAP if set to a positive integer, else 10^4.
inline std::size_t default_dim_cap() {
  if (const char* env = std::getenv("CONDENSATE_DIM_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultDimCap;
}

enum class Boundary { open, periodic };

inline const char* to_string(Boundary b) { return b == Boundary::open ? "open" : "periodic"; }

struct ChainSpec {
  AlgebraPtr algebra;
  std::size_t length = 1;
  Boundary boundary = Boundary::open;
  std::size_t cap = default_dim_cap();

  /// (dim e)^length; throws ResourceError past the cap and InputError on a bad shape.
  std::size_t total_dim() const {
    if (!algebra) throw InputError("chain: missing algebra");
    if (length == 0) throw InputError("chain: length must be at least 1");
    if (boundary == Boundary::periodic && length < 2) throw InputError("chain: periodic chains need length >= 2");
    const std::size_t d = algebra->dim();
    std::size_t total = 1;
    bool overflow = false;
    for (std::size_t i = 0; i < length && !overflow; ++i) {
      if (d != 0 && total > static_cast<std::size_t>(-1) / d) {
        overflow = true;
        total = static_cast<std::size_t>(-1);
      } else {
        total *= d;
      }
    }
    if (overflow || total > cap)
      throw ResourceError("chain: dimension " + std::to_string(d) + "^" + std::to_string(length) +
                              " exceeds the cap " + std::to_string(cap),
                          total);
    return total;
  }
};

namespace detail {

inline std::size_t ipow(std::size_t b, std::size_t e) {
  std::size_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace detail

/// Operator moving the content of site k to site k+1 (mod n).
inline SparseMatrix cyclic_shift(std::size_t d, std::size_t n) {
  std::vector<std::size_t> dims(n, d), order(n);
  for (std::size_t k = 0; k < n; ++k) order[k] = (k + n - 1) % n;
  return permutation_matrix(tensor_permutation(dims, order));
}

/// P_i = id^{⊗i} ⊗ (Δ∘m) ⊗ id^{⊗(n−i−2)}; for periodic chains also the
/// projector on sites (n−1, 0), obtained from P_{n−2} by the cyclic shift.
inline std::vector<SparseMatrix> build_projectors(const ChainSpec& spec) {
  const std::size_t total = spec.total_dim();
  const std::size_t d = spec.algebra->dim(), n = spec.length;
  const SparseMatrix local = spec.algebra->comult() * spec.algebra->mult();
  std::vector<SparseMatrix> out;
  for (std::size_t i = 0; i + 1 < n; ++i)
    out.push_back(kron(kron(SparseMatrix::identity(detail::ipow(d, i)), local),
                       SparseMatrix::identity(detail::ipow(d, n - i - 2))));
  if (spec.boundary == Boundary::periodic) {
    std::vector<std::size_t> dims(n, d), order(n), inverse_order(n);
    for (std::size_t k = 0; k < n; ++k) {
      order[k] = (k + n - 1) % n;
      inverse_order[k] = (k + 1) % n;
    }
    const auto q = tensor_permutation(dims, order);
    const auto qinv = tensor_permutation(dims, inverse_order);
    out.push_back(permute_rows(q, permute_columns(out.back(), qinv)));
  }
  for (const auto& p : out)
    if (p.rows() != total) throw InternalError("build_projectors: wrong projector size");
  return out;
}

struct CommutationVerdict {
  bool pass = true;
  std::optional<std::pair<std::size_t, std::size_t>> pair;  ///< first non-commuting (i, j), i < j
  std::optional<Witness> witness;
};

/// Checks P_i P_j = P_j P_i exactly for all i < j.
inline CommutationVerdict verify_commuting(const std::vector<SparseMatrix>& projs) {
  CommutationVerdict v;
  for (const auto& p : projs)
    if (!p.is_square() || p.rows() != projs.front().rows()) throw InputError("verify_commuting: shape mismatch");
  for (std::size_t i = 0; i < projs.size(); ++i)
    for (std::size_t j = i + 1; j < projs.size(); ++j) {
      const auto diff = first_difference(projs[i] * projs[j], projs[j] * projs[i]);
      if (diff) {
        v.pass = false;
        v.pair = {i, j};
        v.witness = Witness{{diff->row, diff->col}, diff->lhs, diff->rhs, "P_i·P_j != P_j·P_i"};
        return v;
      }
    }
  return v;
}

struct ChainReport {
  std::size_t total_dim = 0;
  std::size_t projector_count = 0;
  CommutationVerdict commuting;
  bool projectors_idempotent = true;
  std::size_t ground_dim = 0;
  SparseMatrix ground_basis;
};

/// Product of the projectors in the given order (default 0, 1, …).
inline SparseMatrix projector_product(const std::vector<SparseMatrix>& projs, std::size_t total,
                                      std::span<const std::size_t> order = {}) {
  SparseMatrix prod = SparseMatrix::identity(total);
  if (order.empty()) {
    for (const auto& p : projs) prod = prod * p;
  } else {
    for (std::size_t i : order) prod = prod * projs.at(i);
  }
  return prod;
}

/// Image of the ordered product of the commuting projectors.
inline ChainReport ground_space(const ChainSpec& spec) {
  ChainReport r;
  r.total_dim = spec.total_dim();
  const auto projs = build_projectors(spec);
  r.projector_count = projs.size();
  for (const auto& p : projs)
    if (!(p * p == p)) r.projectors_idempotent = false;
  r.commuting = verify_commuting(projs);
  const SparseMatrix prod = projector_product(projs, r.total_dim);
  // For commuting idempotents the product is a projector, so its trace is its rank.
  std::optional<std::size_t> rk;
  if (r.commuting.pass && r.projectors_idempotent) {
    const Scalar tr = prod.trace();
    if (tr.get_den() != 1) throw InternalError("ground_space: non-integral trace of a projector");
    rk = tr.get_num().get_ui();
  }
  std::vector<std::size_t> cols;
  RowEchelon ech(r.total_dim);
  for (std::size_t j = 0; j < prod.cols() && (!rk || ech.rank() < *rk); ++j)
    if (ech.add(prod.column(j))) cols.push_back(j);
  if (rk && ech.rank() != *rk) throw InternalError("ground_space: rank differs from trace");
  r.ground_dim = cols.size();
  r.ground_basis = prod.select_columns(cols);
  return r;
}

/// Open chains: dim e. Periodic chains: dim center(e). Unital algebras only.
inline std::size_t predicted_ground_dim(const ChainSpec& spec) {
  if (!spec.algebra) throw InputError("chain: missing algebra");
  if (!find_unit(*spec.algebra))
    throw PreconditionError("predicted_ground_dim: algebra '" + spec.algebra->label() +
                            "' has no unit; compare against the brute-force ground space only");
  return spec.boundary == Boundary::open ? spec.algebra->dim() : center(*spec.algebra).cols();
}

}  // namespace condensate
