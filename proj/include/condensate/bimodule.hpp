#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "condensate/algebra.hpp"
#include "condensate/errors.hpp"
#include "condensate/exactlin.hpp"
#include "condensate/sparse.hpp"

namespace condensate {

using AlgebraPtr = std::shared_ptr<const CondensationAlgebra>;

inline AlgebraPtr share(CondensationAlgebra a) { return std::make_shared<const CondensationAlgebra>(std::move(a)); }

/// The shared unit algebra used for trivial sides.
inline const AlgebraPtr& trivial_algebra() {
  static const AlgebraPtr q = share(unit_algebra());
  return q;
}

inline bool same_algebra(const AlgebraPtr& a, const AlgebraPtr& b) { return a == b || *a == *b; }

/// Bimodule M over (A, B) with actions and coactions stored as matrices:
///   lact   : n × dA·n,  lact(m', i·n+m)     = coefficient of m' in a_i·m
///   ract   : n × n·dB,  ract(m', m·dB+j)    = coefficient of m' in m·b_j
///   lcoact : dA·n × n,  lcoact(i·n+m', m)   = coefficient of a_i⊗m' in the left coaction of m
///   rcoact : n·dB × n,  rcoact(m'·dB+j, m)  = coefficient of m'⊗b_j in the right coaction of m
class CondensationBimodule {
 public:
  CondensationBimodule(AlgebraPtr left, AlgebraPtr right, std::size_t dim, SparseMatrix lact, SparseMatrix ract,
                       SparseMatrix lcoact, SparseMatrix rcoact)
      : left_(std::move(left)),
        right_(std::move(right)),
        dim_(dim),
        lact_(std::move(lact)),
        ract_(std::move(ract)),
        lcoact_(std::move(lcoact)),
        rcoact_(std::move(rcoact)) {
    if (!left_ || !right_) throw InputError("bimodule: missing algebra");
    const std::size_t a = left_->dim(), b = right_->dim(), n = dim_;
    expect("lact", lact_, n, a * n);
    expect("ract", ract_, n, n * b);
    expect("lcoact", lcoact_, a * n, n);
    expect("rcoact", rcoact_, n * b, n);
  }

  const CondensationAlgebra& left() const noexcept { return *left_; }
  const CondensationAlgebra& right() const noexcept { return *right_; }
  const AlgebraPtr& left_ptr() const noexcept { return left_; }
  const AlgebraPtr& right_ptr() const noexcept { return right_; }
  std::size_t dim() const noexcept { return dim_; }
  const SparseMatrix& lact() const noexcept { return lact_; }
  const SparseMatrix& ract() const noexcept { return ract_; }
  const SparseMatrix& lcoact() const noexcept { return lcoact_; }
  const SparseMatrix& rcoact() const noexcept { return rcoact_; }

  Scalar lact_coeff(std::size_t i, std::size_t m, std::size_t mp) const { return lact_.at(mp, i * dim_ + m); }
  Scalar ract_coeff(std::size_t m, std::size_t j, std::size_t mp) const { return ract_.at(mp, m * right_->dim() + j); }
  Scalar lcoact_coeff(std::size_t m, std::size_t i, std::size_t mp) const { return lcoact_.at(i * dim_ + mp, m); }
  Scalar rcoact_coeff(std::size_t m, std::size_t mp, std::size_t j) const {
    return rcoact_.at(mp * right_->dim() + j, m);
  }

 private:
  void expect(const char* what, const SparseMatrix& m, std::size_t r, std::size_t c) const {
    if (m.rows() != r || m.cols() != c)
      throw InputError(std::string("bimodule: ") + what + " has extents " + std::to_string(m.rows()) + "x" +
                       std::to_string(m.cols()) + ", expected " + std::to_string(r) + "x" + std::to_string(c));
  }

  AlgebraPtr left_;
  AlgebraPtr right_;
  std::size_t dim_;
  SparseMatrix lact_;
  SparseMatrix ract_;
  SparseMatrix lcoact_;
  SparseMatrix rcoact_;
};

struct BimoduleReport {
  std::vector<AxiomCheck> checks;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  const AxiomCheck* first_failure() const {
    for (const auto& c : checks)
      if (!c.pass) return &c;
    return nullptr;
  }
};

/// Exact check of the one-sided module axioms on both sides plus the four
/// left/right commutation relations.
inline BimoduleReport check_condensation_bimodule(const CondensationBimodule& m) {
  const std::size_t a = m.left().dim(), b = m.right().dim(), n = m.dim();
  const SparseMatrix ia = SparseMatrix::identity(a), ib = SparseMatrix::identity(b), in = SparseMatrix::identity(n);
  const SparseMatrix &L = m.lact(), &R = m.ract(), &LC = m.lcoact(), &RC = m.rcoact();
  const SparseMatrix &MA = m.left().mult(), &DA = m.left().comult();
  const SparseMatrix &MB = m.right().mult(), &DB = m.right().comult();
  BimoduleReport r;
  auto add = [&r](AxiomCheck c) { r.checks.push_back(std::move(c)); };

  const SparseMatrix llc = L * LC;
  add(detail::compare_maps("left specialness", llc, in, {n}, {n}));
  if (!r.checks.back().pass) r.checks.back().witness->note = detail::specialness_note(llc, "lact∘lcoact");
  const SparseMatrix rrc = R * RC;
  add(detail::compare_maps("right specialness", rrc, in, {n}, {n}));
  if (!r.checks.back().pass) r.checks.back().witness->note = detail::specialness_note(rrc, "ract∘rcoact");

  add(detail::compare_maps("left associativity", L * kron(MA, in), L * kron(ia, L), {a, a, n}, {n}));
  add(detail::compare_maps("right associativity", R * kron(in, MB), R * kron(R, ib), {n, b, b}, {n}));
  add(detail::compare_maps("left coassociativity", kron(DA, in) * LC, kron(ia, LC) * LC, {n}, {a, a, n}));
  add(detail::compare_maps("right coassociativity", kron(in, DB) * RC, kron(RC, ib) * RC, {n}, {n, b, b}));

  const SparseMatrix lcl = LC * L;
  {
    AxiomCheck c = detail::compare_maps("left frobenius", lcl, kron(ia, L) * kron(DA, in), {a, n}, {a, n});
    if (c.pass) c = detail::compare_maps("left frobenius", lcl, kron(MA, in) * kron(ia, LC), {a, n}, {a, n});
    add(std::move(c));
  }
  const SparseMatrix rcr = RC * R;
  {
    AxiomCheck c = detail::compare_maps("right frobenius", rcr, kron(R, ib) * kron(in, DB), {n, b}, {n, b});
    if (c.pass) c = detail::compare_maps("right frobenius", rcr, kron(in, MB) * kron(RC, ib), {n, b}, {n, b});
    add(std::move(c));
  }

  add(detail::compare_maps("action commutation", L * kron(ia, R), R * kron(L, ib), {a, n, b}, {n}));
  add(detail::compare_maps("coaction commutation", kron(LC, ib) * RC, kron(ia, RC) * LC, {n}, {a, n, b}));
  add(detail::compare_maps("lact/rcoact commutation", RC * L, kron(L, ib) * kron(ia, RC), {a, n}, {n, b}));
  add(detail::compare_maps("ract/lcoact commutation", LC * R, kron(ia, R) * kron(LC, ib), {n, b}, {a, n}));
  return r;
}

// ---------------------------------------------------------------------------
// Constructors

inline CondensationBimodule regular_bimodule(const AlgebraPtr& a) {
  return {a, a, a->dim(), a->mult(), a->mult(), a->comult(), a->comult()};
}

inline CondensationBimodule zero_bimodule(const AlgebraPtr& a, const AlgebraPtr& b) {
  return {a,
          b,
          0,
          SparseMatrix(0, 0),
          SparseMatrix(0, 0),
          SparseMatrix(0, 0),
          SparseMatrix(0, 0)};
}

/// A as a bimodule over (A, ℚ) and over (ℚ, A).
inline std::pair<CondensationBimodule, CondensationBimodule> restriction_modules(const AlgebraPtr& a) {
  const SparseMatrix id = SparseMatrix::identity(a->dim());
  CondensationBimodule f(a, trivial_algebra(), a->dim(), a->mult(), id, a->comult(), id);
  CondensationBimodule g(trivial_algebra(), a, a->dim(), id, a->mult(), id, a->comult());
  return {std::move(f), std::move(g)};
}

/// The same underlying left structure with the right side replaced by ℚ.
inline CondensationBimodule left_restriction(const CondensationBimodule& m) {
  const SparseMatrix id = SparseMatrix::identity(m.dim());
  return {m.left_ptr(), trivial_algebra(), m.dim(), m.lact(), id, m.lcoact(), id};
}

inline CondensationBimodule right_restriction(const CondensationBimodule& m) {
  const SparseMatrix id = SparseMatrix::identity(m.dim());
  return {trivial_algebra(), m.right_ptr(), m.dim(), id, m.ract(), id, m.rcoact()};
}

/// Bimodule from unital actions of unital algebras, with the coactions
/// induced from Δ(1): lcoact(v) = Σ p₁ ⊗ p₂·v, rcoact(v) = Σ v·q₁ ⊗ q₂.
inline CondensationBimodule with_induced_coactions(const AlgebraPtr& a, const AlgebraPtr& b, std::size_t n,
                                                   SparseMatrix lact, SparseMatrix ract) {
  const SparseMatrix p = as_column(separability_idempotent(*a));
  const SparseMatrix q = as_column(separability_idempotent(*b));
  const SparseMatrix in = SparseMatrix::identity(n);
  SparseMatrix lco = kron(SparseMatrix::identity(a->dim()), lact) * kron(p, in);
  SparseMatrix rco = kron(ract, SparseMatrix::identity(b->dim())) * kron(in, q);
  return {a, b, n, std::move(lact), std::move(ract), std::move(lco), std::move(rco)};
}

/// Block-diagonal sum; m's basis first.
inline CondensationBimodule direct_sum_bimodules(const CondensationBimodule& m, const CondensationBimodule& n) {
  if (!same_algebra(m.left_ptr(), n.left_ptr()) || !same_algebra(m.right_ptr(), n.right_ptr()))
    throw InputError("direct_sum_bimodules: algebra pair mismatch");
  const std::size_t a = m.left().dim(), b = m.right().dim(), dm = m.dim(), dn = n.dim(), d = dm + dn;
  const SparseMatrix im = detail::block_embedding(d, 0, dm), in = detail::block_embedding(d, dm, dn);
  const SparseMatrix pm = im.transpose(), pn = in.transpose();
  const SparseMatrix ia = SparseMatrix::identity(a), ib = SparseMatrix::identity(b);
  return {m.left_ptr(),
          m.right_ptr(),
          d,
          im * m.lact() * kron(ia, pm) + in * n.lact() * kron(ia, pn),
          im * m.ract() * kron(pm, ib) + in * n.ract() * kron(pn, ib),
          kron(ia, im) * m.lcoact() * pm + kron(ia, in) * n.lcoact() * pn,
          kron(im, ib) * m.rcoact() * pm + kron(in, ib) * n.rcoact() * pn};
}

/// External tensor product M⊠N over (A⊗C, B⊗D) on the space M⊗N.
inline CondensationBimodule box_product(const CondensationBimodule& m, const CondensationBimodule& n) {
  const std::size_t a = m.left().dim(), c = n.left().dim(), b = m.right().dim(), d = n.right().dim();
  const std::size_t dm = m.dim(), dn = n.dim();
  const std::vector<std::size_t> order{0, 2, 1, 3};
  const std::vector<std::size_t> acmn{a, c, dm, dn}, amcn{a, dm, c, dn}, mnbd{dm, dn, b, d}, mbnd{dm, b, dn, d};
  return {share(tensor_product(m.left(), n.left())),
          share(tensor_product(m.right(), n.right())),
          dm * dn,
          permute_columns(kron(m.lact(), n.lact()), tensor_permutation(acmn, order)),
          permute_columns(kron(m.ract(), n.ract()), tensor_permutation(mnbd, order)),
          permute_rows(tensor_permutation(amcn, order), kron(m.lcoact(), n.lcoact())),
          permute_rows(tensor_permutation(mbnd, order), kron(m.rcoact(), n.rcoact()))};
}

// ---------------------------------------------------------------------------
// Intertwiners

/// A linear map between bimodules over the same algebra pair that commutes
/// with all actions and coactions.
struct Intertwiner {
  CondensationBimodule source;
  CondensationBimodule target;
  SparseMatrix map;
};

namespace detail {

inline void require_same_pair(const CondensationBimodule& m, const CondensationBimodule& n, const char* op) {
  if (!same_algebra(m.left_ptr(), n.left_ptr()) || !same_algebra(m.right_ptr(), n.right_ptr()))
    throw InputError(std::string(op) + ": bimodules are over different algebra pairs");
}

/// The four intertwining defects of φ : m → n, stacked into one column vector.
inline SparseVector intertwining_defect(const CondensationBimodule& m, const CondensationBimodule& n,
                                        const SparseMatrix& phi) {
  const std::size_t a = m.left().dim(), b = m.right().dim();
  const SparseMatrix ia = SparseMatrix::identity(a), ib = SparseMatrix::identity(b);
  const SparseMatrix parts[] = {
      phi * m.lact() - n.lact() * kron(ia, phi),
      phi * m.ract() - n.ract() * kron(phi, ib),
      kron(ia, phi) * m.lcoact() - n.lcoact() * phi,
      kron(phi, ib) * m.rcoact() - n.rcoact() * phi,
  };
  SparseVector out;
  std::size_t offset = 0;
  for (const auto& part : parts) {
    for (std::size_t j = 0; j < part.cols(); ++j)
      for (const auto& e : part.column(j)) out.push_back({offset + j * part.rows() + e.index, e.value});
    offset += part.rows() * part.cols();
  }
  std::sort(out.begin(), out.end(), [](const SparseEntry& x, const SparseEntry& y) { return x.index < y.index; });
  return out;
}

}  // namespace detail

inline bool is_intertwiner(const CondensationBimodule& m, const CondensationBimodule& n, const SparseMatrix& phi) {
  detail::require_same_pair(m, n, "is_intertwiner");
  if (phi.rows() != n.dim() || phi.cols() != m.dim()) return false;
  return detail::intertwining_defect(m, n, phi).empty();
}

inline bool is_intertwiner(const Intertwiner& t) { return is_intertwiner(t.source, t.target, t.map); }

/// Basis of all intertwiners m → n (each an n.dim × m.dim matrix).
inline std::vector<SparseMatrix> hom_space(const CondensationBimodule& m, const CondensationBimodule& n) {
  detail::require_same_pair(m, n, "hom_space");
  const std::size_t dm = m.dim(), dn = n.dim();
  // Unknown φ(r, c) has index r·dm + c.
  std::vector<SparseVector> eq_cols(dm * dn);
  std::size_t eq_rows = 0;
  for (std::size_t r = 0; r < dn; ++r)
    for (std::size_t c = 0; c < dm; ++c) {
      SparseMatrix unit(dn, dm);
      unit.set_column(c, {{r, Scalar(1)}});
      eq_cols[r * dm + c] = detail::intertwining_defect(m, n, unit);
    }
  {
    const std::size_t a = m.left().dim(), b = m.right().dim();
    eq_rows = dn * a * dm + dn * dm * b + a * dn * dm + dn * b * dm;
  }
  SparseMatrix eq(eq_rows, dm * dn);
  for (std::size_t k = 0; k < eq_cols.size(); ++k) eq.set_column(k, std::move(eq_cols[k]));
  const SparseMatrix ker = kernel_basis(eq);
  std::vector<SparseMatrix> basis;
  basis.reserve(ker.cols());
  for (std::size_t k = 0; k < ker.cols(); ++k) {
    std::vector<std::pair<std::pair<std::size_t, std::size_t>, Scalar>> t;
    for (const auto& e : ker.column(k)) t.push_back({{e.index / dm, e.index % dm}, e.value});
    basis.push_back(SparseMatrix::from_triplets(dn, dm, std::move(t)));
  }
  return basis;
}

struct IsoResult {
  bool verdict = false;
  std::size_t hom_mn = 0;
  std::size_t hom_mm = 0;
  std::size_t hom_nn = 0;
  std::optional<SparseMatrix> witness;
};

namespace detail {

inline SparseMatrix combine(const std::vector<SparseMatrix>& basis, std::span<const long> coeffs, std::size_t rows,
                            std::size_t cols) {
  SparseMatrix out(rows, cols);
  for (std::size_t k = 0; k < basis.size(); ++k)
    if (coeffs[k] != 0) out = out + Scalar(coeffs[k]) * basis[k];
  return out;
}

/// Small-integer combinations of `basis`: {−2..2}^k lexicographically when
/// k ≤ 6, otherwise 1000 draws from a fixed-seed generator. Returns the first
/// combination accepted by `accept`.
template <class Accept>
std::optional<SparseMatrix> lattice_search(const std::vector<SparseMatrix>& basis, std::size_t rows, std::size_t cols,
                                           Accept accept) {
  const std::size_t k = basis.size();
  std::vector<long> c(k, -2);
  if (k <= 6) {
    while (true) {
      SparseMatrix x = combine(basis, c, rows, cols);
      if (accept(x)) return x;
      std::size_t pos = k;
      while (pos > 0 && c[pos - 1] == 2) c[--pos] = -2;
      if (pos == 0) return std::nullopt;
      ++c[pos - 1];
    }
  }
  std::mt19937_64 rng(0x5EED);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    for (auto& v : c) v = static_cast<long>(rng() % 5) - 2;
    SparseMatrix x = combine(basis, c, rows, cols);
    if (accept(x)) return x;
  }
  return std::nullopt;
}

}  // namespace detail

/// Isomorphism by the Hom-dimension criterion, with an explicit invertible
/// intertwiner when one is found.
inline IsoResult are_isomorphic(const CondensationBimodule& m, const CondensationBimodule& n) {
  detail::require_same_pair(m, n, "are_isomorphic");
  IsoResult r;
  if (m.dim() != n.dim()) return r;
  const auto hmn = hom_space(m, n);
  r.hom_mn = hmn.size();
  r.hom_mm = hom_space(m, m).size();
  r.hom_nn = hom_space(n, n).size();
  r.verdict = r.hom_mn == r.hom_mm && r.hom_mm == r.hom_nn;
  if (!r.verdict) return r;
  if (m.dim() == 0) {
    r.witness = SparseMatrix(0, 0);
    return r;
  }
  r.witness = detail::lattice_search(hmn, n.dim(), m.dim(), [](const SparseMatrix& x) { return is_invertible(x); });
  return r;
}

// ---------------------------------------------------------------------------
// Relative tensor product

inline SparseMatrix tensor_epsilon(const CondensationBimodule& m1, const CondensationBimodule& m2) {
  if (!same_algebra(m1.right_ptr(), m2.left_ptr())) throw InputError("tensor_epsilon: middle algebras differ");
  // (id ⊗ lact₂)(rcoact₁ ⊗ id)
  return apply_middle(m2.lact(), m1.dim(), 1, kron(m1.rcoact(), SparseMatrix::identity(m2.dim())));
}

/// The other one-sided form (ract₁ ⊗ id)(id ⊗ lcoact₂).
inline SparseMatrix tensor_epsilon_alt(const CondensationBimodule& m1, const CondensationBimodule& m2) {
  if (!same_algebra(m1.right_ptr(), m2.left_ptr())) throw InputError("tensor_epsilon: middle algebras differ");
  return apply_middle(m1.ract(), 1, m2.dim(), kron(SparseMatrix::identity(m1.dim()), m2.lcoact()));
}

struct TensorProduct {
  CondensationBimodule bimodule;
  SparseSplit split;  ///< f : M1⊗M2 → result, g : result → M1⊗M2
};

/// Splits ε and transports the outer structure along the splitting.
inline TensorProduct tensor_over_split(const CondensationBimodule& m1, const CondensationBimodule& m2,
                                       std::span<const std::size_t> order = {}) {
  SparseSplit s = split_idempotent(tensor_epsilon(m1, m2), order);
  const std::size_t a = m1.left().dim(), b = m2.right().dim(), n1 = m1.dim(), n2 = m2.dim();
  const SparseMatrix ia = SparseMatrix::identity(a), ib = SparseMatrix::identity(b);
  const SparseMatrix i1 = SparseMatrix::identity(n1), i2 = SparseMatrix::identity(n2);
  SparseMatrix L = s.f * kron(m1.lact(), i2) * kron(ia, s.g);
  SparseMatrix LC = kron(ia, s.f) * kron(m1.lcoact(), i2) * s.g;
  SparseMatrix R = s.f * kron(i1, m2.ract()) * kron(s.g, ib);
  SparseMatrix RC = kron(s.f, ib) * kron(i1, m2.rcoact()) * s.g;
  CondensationBimodule out(m1.left_ptr(), m2.right_ptr(), s.rank(), std::move(L), std::move(R), std::move(LC),
                           std::move(RC));
  const BimoduleReport rep = check_condensation_bimodule(out);
  if (!rep.pass()) throw InternalError("tensor_over: transported structure fails " + rep.first_failure()->name);
  return {std::move(out), std::move(s)};
}

inline CondensationBimodule tensor_over(const CondensationBimodule& m1, const CondensationBimodule& m2) {
  return tensor_over_split(m1, m2).bimodule;
}

/// dim of (M1⊗M2)/span{(x·e)⊗y − x⊗(e·y)} over a unital middle algebra.
inline std::size_t coequalizer_oracle(const CondensationBimodule& m1, const CondensationBimodule& m2) {
  if (!same_algebra(m1.right_ptr(), m2.left_ptr())) throw InputError("coequalizer_oracle: middle algebras differ");
  const CondensationAlgebra& e = m1.right();
  const auto unit = find_unit(e);
  if (!unit) throw PreconditionError("coequalizer_oracle: middle algebra '" + e.label() + "' has no unit");
  const SparseMatrix u = as_column(*unit);
  const std::size_t n1 = m1.dim(), n2 = m2.dim();
  const SparseMatrix i1 = SparseMatrix::identity(n1), i2 = SparseMatrix::identity(n2);
  if (!(m1.ract() * kron(i1, u) == i1) || !(m2.lact() * kron(u, i2) == i2))
    throw PreconditionError("coequalizer_oracle: unit does not act as the identity");
  const SparseMatrix d = kron(m1.ract(), i2) - apply_middle(m2.lact(), n1, 1, SparseMatrix::identity(n1 * e.dim() * n2));
  return n1 * n2 - rank(d);
}

// ---------------------------------------------------------------------------
// Duals

struct DualResult {
  CondensationBimodule dual;
  Intertwiner unit;    ///< regular(B) → tensor_over(dual, m)
  Intertwiner counit;  ///< tensor_over(m, dual) → regular(A)
};

namespace detail {

/// Coordinates of the columns of `v` in the column basis `basis`.
inline SparseMatrix coordinates(const SparseMatrix& basis, const SparseMatrix& v) {
  auto x = solve(basis, v);
  if (!x) throw InternalError("coordinates: vector outside the span");
  return *x;
}

inline SparseMatrix flatten(const SparseMatrix& m) {
  SparseMatrix v(m.rows() * m.cols(), 1);
  SparseVector col;
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (const auto& e : m.column(j)) col.push_back({e.index * m.cols() + j, e.value});
  std::sort(col.begin(), col.end(), [](const SparseEntry& x, const SparseEntry& y) { return x.index < y.index; });
  v.set_column(0, std::move(col));
  return v;
}

inline SparseMatrix linear_combination(const std::vector<SparseMatrix>& basis, const SparseMatrix& coeffs,
                                       std::size_t rows, std::size_t cols) {
  SparseMatrix out(rows, cols);
  for (const auto& e : coeffs.column(0)) out = out + e.value * basis[e.index];
  return out;
}

/// Splittings needed to evaluate both triangle composites for the pair
/// (m, dual); the composites are linear in the unit and counit maps.
class TriangleContext {
 public:
  TriangleContext(const CondensationBimodule& m, const CondensationBimodule& mr)
      : m_(m),
        mr_(mr),
        S_(tensor_over_split(mr, m)),
        U_(tensor_over_split(m, mr)),
        T1_(tensor_over_split(m, regular_bimodule(m.right_ptr()))),
        T2_(tensor_over_split(m, S_.bimodule)),
        T4_(tensor_over_split(U_.bimodule, m)),
        T5_(tensor_over_split(regular_bimodule(m.left_ptr()), m)),
        T6_(tensor_over_split(regular_bimodule(m.right_ptr()), mr)),
        T7_(tensor_over_split(S_.bimodule, mr)),
        T8_(tensor_over_split(mr, U_.bimodule)),
        T9_(tensor_over_split(mr, regular_bimodule(m.left_ptr()))) {
    const SparseMatrix im = SparseMatrix::identity(m.dim()), ir = SparseMatrix::identity(mr.dim());
    alpha_ = T4_.split.f * kron(U_.split.f, im) * kron(im, S_.split.g) * T2_.split.g;
    alpha2_ = T8_.split.f * kron(ir, U_.split.f) * kron(S_.split.g, ir) * T7_.split.g;
  }

  const TensorProduct& left_composite() const { return S_; }   ///< dual ⊗ m
  const TensorProduct& right_composite() const { return U_; }  ///< m ⊗ dual

  /// m → m⊗_B B → m⊗_B S → U⊗_A m → A⊗_A m → m
  SparseMatrix first(const SparseMatrix& unit, const SparseMatrix& counit) const {
    const SparseMatrix im = SparseMatrix::identity(m_.dim());
    SparseMatrix z = T2_.split.f * kron(im, unit) * T1_.split.g * T1_.split.f * m_.rcoact();
    z = T5_.split.f * kron(counit, im) * T4_.split.g * alpha_ * z;
    return m_.lact() * T5_.split.g * z;
  }

  /// mR → B⊗_B mR → S⊗_B mR → mR⊗_A U → mR⊗_A A → mR
  SparseMatrix second(const SparseMatrix& unit, const SparseMatrix& counit) const {
    const SparseMatrix ir = SparseMatrix::identity(mr_.dim());
    SparseMatrix z = T7_.split.f * kron(unit, ir) * T6_.split.g * T6_.split.f * mr_.lcoact();
    z = T9_.split.f * kron(ir, counit) * T8_.split.g * alpha2_ * z;
    return mr_.ract() * T9_.split.g * z;
  }

 private:
  const CondensationBimodule& m_;
  const CondensationBimodule& mr_;
  TensorProduct S_, U_, T1_, T2_, T4_, T5_, T6_, T7_, T8_, T9_;
  SparseMatrix alpha_, alpha2_;
};

}  // namespace detail

struct ZigzagVerdict {
  bool first = false;   ///< (counit⊗id)∘(id⊗unit) = id_m
  bool second = false;  ///< (id⊗counit)∘(unit⊗id) = id_dual
  bool pass() const { return first && second; }
};

/// Verifies both triangle identities, with composites transported along
/// the splittings of every relative tensor product involved.
inline ZigzagVerdict zigzag_check(const CondensationBimodule& m, const CondensationBimodule& mr,
                                  const Intertwiner& unit, const Intertwiner& counit) {
  ZigzagVerdict v;
  if (!same_algebra(m.left_ptr(), mr.right_ptr()) || !same_algebra(m.right_ptr(), mr.left_ptr())) return v;
  const detail::TriangleContext ctx(m, mr);
  if (unit.map.rows() != ctx.left_composite().split.rank() || unit.map.cols() != m.right().dim()) return v;
  if (counit.map.rows() != m.left().dim() || counit.map.cols() != ctx.right_composite().split.rank()) return v;
  v.first = ctx.first(unit.map, counit.map) == SparseMatrix::identity(m.dim());
  v.second = ctx.second(unit.map, counit.map) == SparseMatrix::identity(mr.dim());
  return v;
}

/// Right adjoint of m over (A, B): a bimodule over (B, A) built on
/// Hom_A(M, A), made a condensation bimodule by splitting the induced
/// idempotent on B ⊗ Hom_A(M, A) ⊗ A, together with unit and counit.
inline DualResult dual_bimodule(const CondensationBimodule& m) {
  const AlgebraPtr& A = m.left_ptr();
  const AlgebraPtr& B = m.right_ptr();
  const std::size_t da = A->dim(), db = B->dim(), n = m.dim();

  // N = Hom_A(M, A), maps da × n.
  const auto hom = hom_space(left_restriction(m), restriction_modules(A).first);
  const std::size_t k = hom.size();
  SparseMatrix psi(da * n, k);
  for (std::size_t i = 0; i < k; ++i) psi.set_column(i, detail::flatten(hom[i]).column(0));

  // (b·ψ) = ψ∘R_b and (ψ·a) = R^A_a∘ψ, in coordinates.
  std::vector<SparseMatrix> rb(db), ra(da);
  for (std::size_t j = 0; j < db; ++j) {
    SparseMatrix r(n, n);
    for (std::size_t p = 0; p < n; ++p) r.set_column(p, m.ract().column(p * db + j));
    rb[j] = std::move(r);
  }
  for (std::size_t i = 0; i < da; ++i) ra[i] = right_multiplication(*A, i);
  SparseMatrix lv(da * n, db * k), rv(da * n, k * da);
  for (std::size_t j = 0; j < db; ++j)
    for (std::size_t i = 0; i < k; ++i) lv.set_column(j * k + i, detail::flatten(hom[i] * rb[j]).column(0));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t a = 0; a < da; ++a) rv.set_column(i * da + a, detail::flatten(ra[a] * hom[i]).column(0));
  const SparseMatrix LN = detail::coordinates(psi, lv);  // k × db·k
  const SparseMatrix RN = detail::coordinates(psi, rv);  // k × k·da

  const SparseMatrix ia = SparseMatrix::identity(da), ib = SparseMatrix::identity(db), ik = SparseMatrix::identity(k);
  const SparseMatrix pl = kron(kron(ib, LN) * kron(B->comult(), ik), ia);
  const SparseMatrix pr = kron(ib, kron(RN, ia) * kron(ik, A->comult()));
  const SparseSplit s = split_idempotent(pl * pr);
  const std::size_t r = s.rank();
  const std::size_t nka = k * da;
  const SparseMatrix inka = SparseMatrix::identity(nka), ibk = SparseMatrix::identity(db * k);
  CondensationBimodule dual(B, A, r, s.f * kron(B->mult(), inka) * kron(ib, s.g),
                            s.f * kron(ibk, A->mult()) * kron(s.g, ia), kron(ib, s.f) * kron(B->comult(), inka) * s.g,
                            kron(s.f, ia) * kron(ibk, A->comult()) * s.g);
  {
    const BimoduleReport rep = check_condensation_bimodule(dual);
    if (!rep.pass()) throw InternalError("dual_bimodule: dual fails " + rep.first_failure()->name);
  }

  // counit: x⊗b⊗ψ⊗a ↦ ψ(x·b)·a on M⊗B⊗N⊗A, restricted along the splittings.
  const TensorProduct U = tensor_over_split(m, dual);
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, Scalar>> kt;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t j = 0; j < db; ++j) {
      const SparseVector& xb = m.ract().column(x * db + j);
      for (std::size_t i = 0; i < k; ++i) {
        SparseMatrix v(da, 1);
        {
          SparseMatrix col(n, 1);
          col.set_column(0, xb);
          v = hom[i] * col;
        }
        for (std::size_t a = 0; a < da; ++a) {
          const SparseMatrix out = ra[a] * v;
          const std::size_t c = ((x * db + j) * k + i) * da + a;
          for (const auto& e : out.column(0)) kt.push_back({{e.index, c}, e.value});
        }
      }
    }
  const SparseMatrix kappa = SparseMatrix::from_triplets(da, n * db * k * da, std::move(kt));
  SparseMatrix counit = kappa * kron(SparseMatrix::identity(n), s.g) * U.split.g;
  const CondensationBimodule regA = regular_bimodule(A);
  if (!is_intertwiner(U.bimodule, regA, counit)) throw InternalError("dual_bimodule: counit is not an intertwiner");

  // unit: the combination of Hom(regular(B), dual⊗_A m) satisfying both triangles.
  const CondensationBimodule regB = regular_bimodule(B);
  const detail::TriangleContext ctx(m, dual);
  const TensorProduct& S = ctx.left_composite();
  const auto units = hom_space(regB, S.bimodule);
  const std::size_t z1 = n * n, z2 = r * r;
  SparseMatrix sys(z1 + z2, units.size());
  for (std::size_t i = 0; i < units.size(); ++i) {
    SparseVector col = detail::flatten(ctx.first(units[i], counit)).column(0);
    const SparseMatrix second = detail::flatten(ctx.second(units[i], counit));
    for (const auto& e : second.column(0)) col.push_back({z1 + e.index, e.value});
    sys.set_column(i, std::move(col));
  }
  SparseMatrix rhs(z1 + z2, 1);
  {
    SparseVector col;
    for (std::size_t i = 0; i < n; ++i) col.push_back({i * n + i, Scalar(1)});
    for (std::size_t i = 0; i < r; ++i) col.push_back({z1 + i * r + i, Scalar(1)});
    rhs.set_column(0, std::move(col));
  }
  const auto coeffs = solve(sys, rhs);
  if (!coeffs) throw InternalError("dual_bimodule: no unit satisfies the triangle identities");
  SparseMatrix unit = detail::linear_combination(units, *coeffs, S.split.rank(), db);

  return {dual, Intertwiner{regB, S.bimodule, std::move(unit)}, Intertwiner{U.bimodule, regA, std::move(counit)}};
}

}  // namespace condensate
