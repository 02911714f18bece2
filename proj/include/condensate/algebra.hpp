#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "condensate/errors.hpp"
#include "condensate/exactlin.hpp"
#include "condensate/sparse.hpp"

namespace condensate {

/// Finite-dimensional algebra with multiplication and comultiplication,
/// meant to be a (possibly nonunital) special Frobenius algebra.
///
/// Structure maps are stored as matrices against the left-slow tensor
/// index i·dim + j:
///   mult   : dim × dim²,  mult(k, i·dim+j)   = coefficient of b_k in b_i·b_j
///   comult : dim² × dim,  comult(i·dim+j, k) = coefficient of b_i⊗b_j in Δ(b_k)
class CondensationAlgebra {
 public:
  CondensationAlgebra() : CondensationAlgebra(0, SparseMatrix(0, 0), SparseMatrix(0, 0), "0") {}

  CondensationAlgebra(std::size_t dim, SparseMatrix mult, SparseMatrix comult, std::string label)
      : dim_(dim), mult_(std::move(mult)), comult_(std::move(comult)), label_(std::move(label)) {
    if (mult_.rows() != dim_ || mult_.cols() != dim_ * dim_)
      throw InputError("algebra '" + label_ + "': mult has extents " + std::to_string(mult_.rows()) + "x" +
                       std::to_string(mult_.cols()) + ", expected " + std::to_string(dim_) + "x" +
                       std::to_string(dim_ * dim_));
    if (comult_.rows() != dim_ * dim_ || comult_.cols() != dim_)
      throw InputError("algebra '" + label_ + "': comult has extents " + std::to_string(comult_.rows()) + "x" +
                       std::to_string(comult_.cols()) + ", expected " + std::to_string(dim_ * dim_) + "x" +
                       std::to_string(dim_));
  }

  std::size_t dim() const noexcept { return dim_; }
  const SparseMatrix& mult() const noexcept { return mult_; }
  const SparseMatrix& comult() const noexcept { return comult_; }
  const std::string& label() const noexcept { return label_; }

  Scalar mult_coeff(std::size_t i, std::size_t j, std::size_t k) const { return mult_.at(k, i * dim_ + j); }
  Scalar comult_coeff(std::size_t k, std::size_t i, std::size_t j) const { return comult_.at(i * dim_ + j, k); }

  CondensationAlgebra relabeled(std::string label) const {
    CondensationAlgebra a = *this;
    a.label_ = std::move(label);
    return a;
  }

  /// Structural equality; labels are ignored.
  friend bool operator==(const CondensationAlgebra& a, const CondensationAlgebra& b) {
    return a.dim_ == b.dim_ && a.mult_ == b.mult_ && a.comult_ == b.comult_;
  }

 private:
  std::size_t dim_;
  SparseMatrix mult_;
  SparseMatrix comult_;
  std::string label_;
};

/// First failing entry of an equality between two composite maps.
/// `indices` lists the input multi-index followed by the output multi-index.
struct Witness {
  std::vector<std::size_t> indices;
  Scalar lhs;
  Scalar rhs;
  std::string note;
};

struct AxiomCheck {
  std::string name;
  bool pass = true;
  std::optional<Witness> witness;
};

namespace detail {

inline std::vector<std::size_t> digits(std::size_t index, std::span<const std::size_t> dims) {
  std::vector<std::size_t> out(dims.size());
  for (std::size_t f = dims.size(); f-- > 0;) {
    out[f] = index % dims[f];
    index /= dims[f];
  }
  return out;
}

/// Compares two maps with the given input/output tensor factorizations.
inline AxiomCheck compare_maps(std::string name, const SparseMatrix& lhs, const SparseMatrix& rhs,
                               std::vector<std::size_t> in_dims, std::vector<std::size_t> out_dims) {
  AxiomCheck c{std::move(name), true, std::nullopt};
  const auto diff = first_difference(lhs, rhs);
  if (!diff) return c;
  c.pass = false;
  Witness w;
  w.indices = digits(diff->col, in_dims);
  const auto out = digits(diff->row, out_dims);
  w.indices.insert(w.indices.end(), out.begin(), out.end());
  w.lhs = diff->lhs;
  w.rhs = diff->rhs;
  c.witness = std::move(w);
  return c;
}

/// If m == s·id for some scalar s, returns s.
inline std::optional<Scalar> scalar_multiple_of_identity(const SparseMatrix& m) {
  if (!m.is_square()) return std::nullopt;
  if (m.cols() == 0) return Scalar(1);
  std::optional<Scalar> s;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    const auto& col = m.column(j);
    if (col.size() != 1 || col.front().index != j) return std::nullopt;
    if (!s) s = col.front().value;
    if (*s != col.front().value) return std::nullopt;
  }
  return s;
}

inline std::string specialness_note(const SparseMatrix& composite, const char* expr) {
  if (auto s = scalar_multiple_of_identity(composite)) return std::string(expr) + " = " + to_string(*s) + "·id";
  return std::string(expr) + " != id";
}

}  // namespace detail

/// Verdicts for the four condensation-algebra axioms.
struct AxiomReport {
  AxiomCheck specialness{"specialness", true, std::nullopt};
  AxiomCheck associativity{"associativity", true, std::nullopt};
  AxiomCheck coassociativity{"coassociativity", true, std::nullopt};
  AxiomCheck frobenius{"frobenius", true, std::nullopt};

  bool pass() const { return specialness.pass && associativity.pass && coassociativity.pass && frobenius.pass; }
  std::vector<const AxiomCheck*> checks() const { return {&specialness, &associativity, &coassociativity, &frobenius}; }
};

/// Exact check of: m∘Δ = id; m(m⊗id) = m(id⊗m); (Δ⊗id)Δ = (id⊗Δ)Δ;
/// Δ∘m = (id⊗m)(Δ⊗id) = (m⊗id)(id⊗Δ).
inline AxiomReport check_condensation_algebra(const CondensationAlgebra& a) {
  const std::size_t d = a.dim();
  const SparseMatrix& m = a.mult();
  const SparseMatrix& c = a.comult();
  const SparseMatrix id = SparseMatrix::identity(d);
  AxiomReport r;

  const SparseMatrix md = m * c;
  r.specialness = detail::compare_maps("specialness", md, id, {d}, {d});
  if (!r.specialness.pass) r.specialness.witness->note = detail::specialness_note(md, "m∘Δ");

  r.associativity = detail::compare_maps("associativity", m * kron(m, id), m * kron(id, m), {d, d, d}, {d});
  r.coassociativity = detail::compare_maps("coassociativity", kron(c, id) * c, kron(id, c) * c, {d}, {d, d, d});

  const SparseMatrix dm = c * m;
  r.frobenius = detail::compare_maps("frobenius", dm, kron(id, m) * kron(c, id), {d, d}, {d, d});
  if (r.frobenius.pass) {
    r.frobenius = detail::compare_maps("frobenius", dm, kron(m, id) * kron(id, c), {d, d}, {d, d});
    if (!r.frobenius.pass) r.frobenius.witness->note = "Δ∘m != (m⊗id)(id⊗Δ)";
  } else {
    r.frobenius.witness->note = "Δ∘m != (id⊗m)(Δ⊗id)";
  }
  return r;
}

// ---------------------------------------------------------------------------
// Constructors

inline CondensationAlgebra zero_algebra() { return {}; }

inline CondensationAlgebra unit_algebra() {
  return {1, SparseMatrix::identity(1), SparseMatrix::identity(1), "Q"};
}

/// Multiplication table of a finite group: table[a][b] = index of a·b.
using CayleyTable = std::vector<std::vector<std::size_t>>;

inline CayleyTable cyclic_group(std::size_t n) {
  CayleyTable t(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  return t;
}

/// Symmetric group on {0..k-1}; elements are permutations in lexicographic
/// order and (σ·τ)(x) = σ(τ(x)).
inline CayleyTable symmetric_group(std::size_t k) {
  std::vector<std::vector<std::size_t>> perms;
  std::vector<std::size_t> p(k);
  std::iota(p.begin(), p.end(), std::size_t{0});
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  const std::size_t n = perms.size();
  CayleyTable t(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      std::vector<std::size_t> c(k);
      for (std::size_t x = 0; x < k; ++x) c[x] = perms[a][perms[b][x]];
      t[a][b] = static_cast<std::size_t>(std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  return t;
}

/// Group algebra with Δ(g) = (1/|G|) Σ_h (g·h⁻¹)⊗h.
inline CondensationAlgebra group_algebra(const CayleyTable& table, std::string label = "Q[G]") {
  const std::size_t n = table.size();
  if (n == 0) throw InputError("group_algebra: empty table");
  for (const auto& row : table) {
    if (row.size() != n) throw InputError("group_algebra: table is not square");
    for (auto v : row)
      if (v >= n) throw InputError("group_algebra: entry out of range");
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]]) throw InputError("group_algebra: table is not associative");
  std::optional<std::size_t> identity;
  for (std::size_t e = 0; e < n && !identity; ++e) {
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a) ok = table[e][a] == a && table[a][e] == a;
    if (ok) identity = e;
  }
  if (!identity) throw InputError("group_algebra: no identity element");
  std::vector<std::size_t> inv(n);
  for (std::size_t a = 0; a < n; ++a) {
    auto it = std::find(table[a].begin(), table[a].end(), *identity);
    if (it == table[a].end()) throw InputError("group_algebra: element without inverse");
    inv[a] = static_cast<std::size_t>(it - table[a].begin());
    if (table[inv[a]][a] != *identity) throw InputError("group_algebra: element without two-sided inverse");
  }

  std::vector<std::pair<std::pair<std::size_t, std::size_t>, Scalar>> mt, ct;
  const Scalar w(1, static_cast<unsigned long>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) mt.push_back({{table[a][b], a * n + b}, Scalar(1)});
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h) ct.push_back({{table[g][inv[h]] * n + h, g}, w});
  return {n, SparseMatrix::from_triplets(n, n * n, std::move(mt)), SparseMatrix::from_triplets(n * n, n, std::move(ct)),
          std::move(label)};
}

/// M_n(Q) on the matrix units E_ij (index i·n+j), Δ(E_ij) = (1/n) Σ_k E_ik⊗E_kj.
inline CondensationAlgebra matrix_algebra(std::size_t n) {
  if (n == 0) throw InputError("matrix_algebra: n = 0; use zero_algebra()");
  const std::size_t d = n * n;
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, Scalar>> mt, ct;
  const Scalar w(1, static_cast<unsigned long>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < n; ++l) {
        // E_ij · E_jl = E_il
        mt.push_back({{i * n + l, (i * n + j) * d + (j * n + l)}, Scalar(1)});
        // Δ(E_il) ∋ E_ij ⊗ E_jl
        ct.push_back({{(i * n + j) * d + (j * n + l), i * n + l}, w});
      }
  return {d, SparseMatrix::from_triplets(d, d * d, std::move(mt)), SparseMatrix::from_triplets(d * d, d, std::move(ct)),
          n == 1 ? std::string("Q") : "M" + std::to_string(n) + "(Q)"};
}

/// The nonunital ideal span{E11, E12} of M2(Q), with Δ(E_1j) = E_11⊗E_1j.
inline CondensationAlgebra nonunital_row_ideal() {
  // b0 = E11, b1 = E12; b0·b0 = b0, b0·b1 = b1, b1·b_j = 0.
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, Scalar>> mt{{{0, 0}, 1}, {{1, 1}, 1}};
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, Scalar>> ct{{{0, 0}, 1}, {{1, 1}, 1}};
  return {2, SparseMatrix::from_triplets(2, 4, std::move(mt)), SparseMatrix::from_triplets(4, 2, std::move(ct)),
          "span{E11,E12}"};
}

namespace detail {

/// Embedding of a block of size `size` at `offset` into dimension `total`.
inline SparseMatrix block_embedding(std::size_t total, std::size_t offset, std::size_t size) {
  SparseMatrix e(total, size);
  for (std::size_t i = 0; i < size; ++i) e.set_column(i, {{offset + i, Scalar(1)}});
  return e;
}

}  // namespace detail

/// Block-diagonal structure on A ⊕ B (A's basis first).
inline CondensationAlgebra direct_sum(const CondensationAlgebra& a, const CondensationAlgebra& b) {
  const std::size_t da = a.dim(), db = b.dim(), d = da + db;
  const SparseMatrix ia = detail::block_embedding(d, 0, da), ib = detail::block_embedding(d, da, db);
  const SparseMatrix pa = ia.transpose(), pb = ib.transpose();
  const SparseMatrix mult = ia * a.mult() * kron(pa, pa) + ib * b.mult() * kron(pb, pb);
  const SparseMatrix comult = kron(ia, ia) * a.comult() * pa + kron(ib, ib) * b.comult() * pb;
  return {d, mult, comult, a.label() + "+" + b.label()};
}

/// mult'(i,j) = mult(j,i); comult'(k)[i][j] = comult(k)[j][i].
inline CondensationAlgebra opposite(const CondensationAlgebra& a) {
  const std::vector<std::size_t> dims{a.dim(), a.dim()}, order{1, 0};
  const auto swap = tensor_permutation(dims, order);
  return {a.dim(), permute_columns(a.mult(), swap), permute_rows(swap, a.comult()), a.label() + "^op"};
}

/// Tensor product algebra A⊗B on the basis a_i⊗b_j (index i·dim B + j).
inline CondensationAlgebra tensor_product(const CondensationAlgebra& a, const CondensationAlgebra& b) {
  const std::size_t da = a.dim(), db = b.dim();
  const std::vector<std::size_t> order{0, 2, 1, 3};
  const std::vector<std::size_t> abab{da, db, da, db}, aabb{da, da, db, db};
  return {da * db, permute_columns(kron(a.mult(), b.mult()), tensor_permutation(abab, order)),
          permute_rows(tensor_permutation(aabb, order), kron(a.comult(), b.comult())), a.label() + "⊗" + b.label()};
}

/// Transports the structure along the basis change whose columns are the
/// new basis vectors in old coordinates: mult' = T⁻¹ m (T⊗T), Δ' = (T⁻¹⊗T⁻¹) Δ T.
inline CondensationAlgebra twist(const CondensationAlgebra& a, const SparseMatrix& t) {
  if (t.rows() != a.dim() || t.cols() != a.dim()) throw InputError("twist: basis change has wrong shape");
  const SparseMatrix ti = inverse(t);
  return {a.dim(), ti * a.mult() * kron(t, t), kron(ti, ti) * a.comult() * t, a.label() + "~"};
}

// ---------------------------------------------------------------------------
// Derived structure

/// Left multiplication operator by basis element x: (L_x)(k, j) = mult(x, j, k).
inline SparseMatrix left_multiplication(const CondensationAlgebra& a, std::size_t x) {
  const std::size_t d = a.dim();
  SparseMatrix l(d, d);
  for (std::size_t j = 0; j < d; ++j) l.set_column(j, a.mult().column(x * d + j));
  return l;
}

/// Right multiplication operator by basis element x: (R_x)(k, j) = mult(j, x, k).
inline SparseMatrix right_multiplication(const CondensationAlgebra& a, std::size_t x) {
  const std::size_t d = a.dim();
  SparseMatrix r(d, d);
  for (std::size_t j = 0; j < d; ++j) r.set_column(j, a.mult().column(j * d + x));
  return r;
}

/// The unit of the algebra if one exists (the zero vector for dim 0).
inline std::optional<std::vector<Scalar>> find_unit(const CondensationAlgebra& a) {
  const std::size_t d = a.dim();
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, Scalar>> eq;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t x = 0; x < d; ++x) {
      for (const auto& e : a.mult().column(i * d + x)) eq.push_back({{x * d + e.index, i}, e.value});          // u·x
      for (const auto& e : a.mult().column(x * d + i)) eq.push_back({{d * d + x * d + e.index, i}, e.value});  // x·u
    }
  const SparseMatrix lhs = SparseMatrix::from_triplets(2 * d * d, d, std::move(eq));
  SparseMatrix rhs(2 * d * d, 1);
  {
    SparseVector col;
    for (std::size_t x = 0; x < d; ++x) col.push_back({x * d + x, Scalar(1)});
    for (std::size_t x = 0; x < d; ++x) col.push_back({d * d + x * d + x, Scalar(1)});
    rhs.set_column(0, std::move(col));
  }
  const auto sol = solve(lhs, rhs);
  if (!sol) return std::nullopt;
  if (kernel_basis(lhs).cols() != 0) throw InternalError("find_unit: unit is not unique");
  std::vector<Scalar> u(d);
  for (const auto& e : sol->column(0)) u[e.index] = e.value;
  return u;
}

inline SparseMatrix as_column(std::span<const Scalar> v) {
  SparseMatrix m(v.size(), 1);
  SparseVector col;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!is_zero(v[i])) col.push_back({i, v[i]});
  m.set_column(0, std::move(col));
  return m;
}

/// Columns form a basis of {z : z·x = x·z for all x}.
inline SparseMatrix center(const CondensationAlgebra& a) {
  const std::size_t d = a.dim();
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, Scalar>> eq;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t x = 0; x < d; ++x) {
      for (const auto& e : a.mult().column(i * d + x)) eq.push_back({{x * d + e.index, i}, e.value});
      for (const auto& e : a.mult().column(x * d + i)) eq.push_back({{x * d + e.index, i}, -e.value});
    }
  return kernel_basis(SparseMatrix::from_triplets(d * d, d, std::move(eq)));
}

/// p = Δ(1), verified to satisfy m(p) = 1 and (x⊗1)·p = p·(1⊗x).
inline std::vector<Scalar> separability_idempotent(const CondensationAlgebra& a) {
  const auto unit = find_unit(a);
  if (!unit) throw PreconditionError("separability_idempotent: algebra '" + a.label() + "' has no unit; unitalize first");
  const std::size_t d = a.dim();
  const SparseMatrix u = as_column(*unit);
  const SparseMatrix p = a.comult() * u;
  if (!(a.mult() * p == u)) throw PreconditionError("separability_idempotent: m(Δ(1)) != 1");
  const SparseMatrix id = SparseMatrix::identity(d);
  for (std::size_t x = 0; x < d; ++x)
    if (!(kron(left_multiplication(a, x), id) * p == kron(id, right_multiplication(a, x)) * p))
      throw PreconditionError("separability_idempotent: Δ(1) does not commute with basis element " + std::to_string(x));
  std::vector<Scalar> out(d * d);
  for (const auto& e : p.column(0)) out[e.index] = e.value;
  return out;
}

}  // namespace condensate
