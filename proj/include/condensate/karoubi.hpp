#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "condensate/algebra.hpp"
#include "condensate/bimodule.hpp"
#include "condensate/errors.hpp"
#include "condensate/exactlin.hpp"

namespace condensate {

/// An object of ΣVect: a condensation algebra that passes the checker.
class SigmaObject {
 public:
  explicit SigmaObject(CondensationAlgebra a) : SigmaObject(share(std::move(a))) {}
  explicit SigmaObject(AlgebraPtr a) : algebra_(std::move(a)) {
    const AxiomReport r = check_condensation_algebra(*algebra_);
    if (!r.pass()) throw PreconditionError("SigmaObject: algebra '" + algebra_->label() + "' fails the axioms");
  }

  const CondensationAlgebra& algebra() const noexcept { return *algebra_; }
  const AlgebraPtr& ptr() const noexcept { return algebra_; }

 private:
  AlgebraPtr algebra_;
};

/// Bimodules m over (A, B), n over (B, A) with isomorphisms
/// tensor_over(m, n) ≅ regular(A) and tensor_over(n, m) ≅ regular(B).
struct MoritaWitness {
  CondensationBimodule m;
  CondensationBimodule n;
  Intertwiner iso1;
  Intertwiner iso2;
};

/// Verifies both isomorphisms exactly: intertwiners with nonsingular matrices.
inline bool verify_morita_witness(const MoritaWitness& w) {
  const auto ok = [](const Intertwiner& t) { return is_intertwiner(t) && is_invertible(t.map); };
  return ok(w.iso1) && ok(w.iso2);
}

/// Builds the witness from (m, n) using are_isomorphic for both composites;
/// nullopt when either composite is not isomorphic to the regular bimodule.
inline std::optional<MoritaWitness> make_morita_witness(CondensationBimodule m, CondensationBimodule n) {
  CondensationBimodule mn = tensor_over(m, n);
  CondensationBimodule nm = tensor_over(n, m);
  CondensationBimodule ra = regular_bimodule(m.left_ptr());
  CondensationBimodule rb = regular_bimodule(m.right_ptr());
  const IsoResult i1 = are_isomorphic(mn, ra);
  const IsoResult i2 = are_isomorphic(nm, rb);
  if (!i1.verdict || !i2.verdict || !i1.witness || !i2.witness) return std::nullopt;
  MoritaWitness w{std::move(m), std::move(n), Intertwiner{std::move(mn), std::move(ra), *i1.witness},
                  Intertwiner{std::move(nm), std::move(rb), *i2.witness}};
  if (!verify_morita_witness(w)) return std::nullopt;
  return w;
}

// ---------------------------------------------------------------------------
// Unitalization

struct Unitalization {
  SigmaObject unital;
  /// Multiplier maps of the new basis: element s acts on A by the d×d matrix basis[s].
  std::vector<SparseMatrix> basis;
  MoritaWitness witness;
};

namespace detail {

/// Separability idempotent of a unital algebra given only its multiplication,
/// preferring a symmetric solution.
inline std::optional<SparseMatrix> solve_separability_idempotent(const SparseMatrix& mult, std::size_t k,
                                                                 const SparseMatrix& unit) {
  const std::size_t kk = k * k;
  // Unknown p(s, t), index s·k + t.
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, Scalar>> eq;
  std::size_t row = 0;
  // m(p) = 1
  for (std::size_t c = 0; c < kk; ++c)
    for (const auto& e : mult.column(c)) eq.push_back({{row + e.index, c}, e.value});
  row += k;
  // (x⊗1)p − p(1⊗x) = 0 for each basis x
  for (std::size_t x = 0; x < k; ++x) {
    for (std::size_t s = 0; s < k; ++s)
      for (std::size_t t = 0; t < k; ++t) {
        const std::size_t c = s * k + t;
        for (const auto& e : mult.column(x * k + s)) eq.push_back({{row + e.index * k + t, c}, e.value});
        for (const auto& e : mult.column(t * k + x)) eq.push_back({{row + s * k + e.index, c}, -e.value});
      }
    row += kk;
  }
  const std::size_t base_rows = row;
  // p = swap(p)
  for (std::size_t s = 0; s < k; ++s)
    for (std::size_t t = 0; t < k; ++t)
      if (s < t) {
        eq.push_back({{row, s * k + t}, Scalar(1)});
        eq.push_back({{row, t * k + s}, Scalar(-1)});
        ++row;
      }
  SparseMatrix rhs(row, 1);
  rhs.set_column(0, unit.column(0));
  const SparseMatrix full = SparseMatrix::from_triplets(row, kk, eq);
  if (auto p = solve(full, rhs)) return p;
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, Scalar>> base;
  for (auto& t : eq)
    if (t.first.first < base_rows) base.push_back(t);
  SparseMatrix rhs0(base_rows, 1);
  rhs0.set_column(0, unit.column(0));
  return solve(SparseMatrix::from_triplets(base_rows, kk, std::move(base)), rhs0);
}

/// Δ(x) = (x⊗1)·p as a k²×k matrix.
inline SparseMatrix comult_from_separability(const SparseMatrix& mult, std::size_t k, const SparseMatrix& p) {
  // (L_x ⊗ id) p for every basis x.
  SparseMatrix out(k * k, k);
  for (std::size_t x = 0; x < k; ++x) {
    SparseMatrix lx(k, k);
    for (std::size_t j = 0; j < k; ++j) lx.set_column(j, mult.column(x * k + j));
    out.set_column(x, (kron(lx, SparseMatrix::identity(k)) * p).column(0));
  }
  return out;
}

/// Column-major vectorization (index c·d + r) of a d×d matrix.
inline SparseVector vec_columns(const SparseMatrix& t) {
  SparseVector v;
  for (std::size_t c = 0; c < t.cols(); ++c)
    for (const auto& e : t.column(c)) v.push_back({c * t.rows() + e.index, e.value});
  return v;
}

inline SparseMatrix unvec_columns(const SparseVector& v, std::size_t d) {
  SparseMatrix t(d, d);
  std::vector<SparseVector> cols(d);
  for (const auto& e : v) cols[e.index / d].push_back({e.index % d, e.value});
  for (std::size_t c = 0; c < d; ++c) t.set_column(c, std::move(cols[c]));
  return t;
}

/// Unital algebra with separable structure from its multiplication alone.
inline CondensationAlgebra separable_from_mult(SparseMatrix mult, std::size_t k, const SparseMatrix& unit,
                                               std::string label) {
  const auto p = solve_separability_idempotent(mult, k, unit);
  if (!p) throw InternalError("algebra '" + label + "' is not separable");
  SparseMatrix comult = comult_from_separability(mult, k, *p);
  return {k, std::move(mult), std::move(comult), std::move(label)};
}

}  // namespace detail

/// Splits π(T) = m(id⊗T)Δ on End(A); the image is the algebra of left
/// A-module endomorphisms of A, multiplied by T⋆S = S∘T so that a unital
/// input is recovered up to isomorphism. The Morita witness is A itself as
/// an (A, A') bimodule together with its dual.
inline Unitalization unitalize(const SigmaObject& e) {
  const CondensationAlgebra& a = e.algebra();
  const std::size_t d = a.dim();
  // π = Σ_i Δ_iᵀ ⊗ L_i in column-major vectorization.
  SparseMatrix pi(d * d, d * d);
  for (std::size_t i = 0; i < d; ++i) {
    SparseMatrix di(d, d);
    for (std::size_t c = 0; c < d; ++c) {
      SparseVector col;
      for (const auto& en : a.comult().column(c))
        if (en.index / d == i) col.push_back({en.index % d, en.value});
      di.set_column(c, std::move(col));
    }
    pi = pi + kron(di.transpose(), left_multiplication(a, i));
  }
  const SparseSplit s = split_idempotent(pi);
  const std::size_t k = s.rank();
  std::vector<SparseMatrix> basis(k);
  for (std::size_t j = 0; j < k; ++j) basis[j] = detail::unvec_columns(s.g.column(j), d);

  // mult'(s, t) = coordinates of basis[t]·basis[s]
  SparseMatrix mult(k, k * k);
  for (std::size_t x = 0; x < k; ++x)
    for (std::size_t y = 0; y < k; ++y) {
      SparseMatrix v(d * d, 1);
      v.set_column(0, detail::vec_columns(basis[y] * basis[x]));
      mult.set_column(x * k + y, (s.f * v).column(0));
    }
  SparseMatrix idv(d * d, 1);
  idv.set_column(0, detail::vec_columns(SparseMatrix::identity(d)));
  const SparseMatrix unit = s.f * idv;
  const AlgebraPtr ap = share(detail::separable_from_mult(std::move(mult), k, unit, a.label() + "'"));
  SigmaObject unital(ap);
  if (!find_unit(*ap)) throw InternalError("unitalize: result has no unit");
  (void)separability_idempotent(*ap);

  // A as an (A, A') bimodule: y·T = T(y).
  SparseMatrix ract(d, d * k);
  for (std::size_t y = 0; y < d; ++y)
    for (std::size_t t = 0; t < k; ++t) {
      SparseVector col;
      for (const auto& en : basis[t].column(y)) col.push_back(en);
      ract.set_column(y * k + t, std::move(col));
    }
  const SparseMatrix p = as_column(separability_idempotent(*ap));
  SparseMatrix rcoact = kron(ract, SparseMatrix::identity(k)) * kron(SparseMatrix::identity(d), p);
  CondensationBimodule m(e.ptr(), ap, d, a.mult(), std::move(ract), a.comult(), std::move(rcoact));
  {
    const BimoduleReport rep = check_condensation_bimodule(m);
    if (!rep.pass()) throw InternalError("unitalize: witness bimodule fails " + rep.first_failure()->name);
  }
  DualResult dual = dual_bimodule(m);
  auto w = make_morita_witness(std::move(m), std::move(dual.dual));
  if (!w) throw InternalError("unitalize: Morita witness does not verify");
  return {std::move(unital), std::move(basis), std::move(*w)};
}

/// For unital e: the map x ↦ (y ↦ y·x) identifies e with its unitalization
/// as algebras. Returns that map in the unitalization's coordinates when it
/// is an algebra isomorphism.
inline std::optional<SparseMatrix> unital_comparison(const SigmaObject& e, const Unitalization& u) {
  const CondensationAlgebra& a = e.algebra();
  if (!find_unit(a)) return std::nullopt;
  const std::size_t d = a.dim(), k = u.unital.algebra().dim();
  if (k != d) return std::nullopt;
  SparseMatrix gmat(d * d, k);
  for (std::size_t j = 0; j < k; ++j) gmat.set_column(j, detail::vec_columns(u.basis[j]));
  SparseMatrix images(d * d, d);
  for (std::size_t x = 0; x < d; ++x) images.set_column(x, detail::vec_columns(right_multiplication(a, x)));
  const auto phi = solve(gmat, images);
  if (!phi || !is_invertible(*phi)) return std::nullopt;
  // φ(x·y) = φ(x)⋆φ(y)
  if (!(*phi * a.mult() == u.unital.algebra().mult() * kron(*phi, *phi))) return std::nullopt;
  return phi;
}

// ---------------------------------------------------------------------------
// Simple modules and Morita equivalence

/// Left module over a unital algebra given by its action operators.
struct LeftModule {
  std::size_t dim = 0;
  std::vector<SparseMatrix> action;  ///< action[i] = operator of basis element i
};

namespace detail {

/// Basis (as operators) of the commutant of the module action.
inline std::vector<SparseMatrix> module_endomorphisms(const LeftModule& v) {
  const std::size_t n = v.dim;
  SparseMatrix eq(v.action.size() * n * n, n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      SparseMatrix unit(n, n);
      unit.set_column(c, {{r, Scalar(1)}});
      SparseVector col;
      for (std::size_t i = 0; i < v.action.size(); ++i) {
        const SparseMatrix d = unit * v.action[i] - v.action[i] * unit;
        for (std::size_t j = 0; j < n; ++j)
          for (const auto& e : d.column(j)) col.push_back({(i * n + e.index) * n + j, e.value});
      }
      std::sort(col.begin(), col.end(), [](const SparseEntry& x, const SparseEntry& y) { return x.index < y.index; });
      eq.set_column(r * n + c, std::move(col));
    }
  const SparseMatrix ker = kernel_basis(eq);
  std::vector<SparseMatrix> out;
  for (std::size_t k = 0; k < ker.cols(); ++k) {
    std::vector<std::pair<std::pair<std::size_t, std::size_t>, Scalar>> t;
    for (const auto& e : ker.column(k)) t.push_back({{e.index / n, e.index % n}, e.value});
    out.push_back(SparseMatrix::from_triplets(n, n, std::move(t)));
  }
  return out;
}

inline std::size_t module_hom_dim(const LeftModule& v, const LeftModule& w) {
  const std::size_t n = v.dim, m = w.dim;
  SparseMatrix eq(v.action.size() * m * n, m * n);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      SparseMatrix unit(m, n);
      unit.set_column(c, {{r, Scalar(1)}});
      SparseVector col;
      for (std::size_t i = 0; i < v.action.size(); ++i) {
        const SparseMatrix d = unit * v.action[i] - w.action[i] * unit;
        for (std::size_t j = 0; j < n; ++j)
          for (const auto& e : d.column(j)) col.push_back({(i * m + e.index) * n + j, e.value});
      }
      std::sort(col.begin(), col.end(), [](const SparseEntry& x, const SparseEntry& y) { return x.index < y.index; });
      eq.set_column(r * n + c, std::move(col));
    }
  return m * n - rank(eq);
}

/// Restriction of the module to an invariant subspace with column basis `b`.
inline LeftModule restrict_module(const LeftModule& v, const SparseMatrix& b) {
  LeftModule w;
  w.dim = b.cols();
  for (const auto& op : v.action) w.action.push_back(detail::coordinates(b, op * b));
  return w;
}

inline SparseMatrix power(SparseMatrix x, std::size_t e) {
  SparseMatrix r = SparseMatrix::identity(x.rows());
  while (e > 0) {
    if (e & 1) r = r * x;
    x = x * x;
    e >>= 1;
  }
  return r;
}

/// Column basis of the image of x.
inline SparseMatrix image_basis(const SparseMatrix& x) {
  std::vector<std::size_t> cols;
  RowEchelon ech(x.rows());
  for (std::size_t j = 0; j < x.cols(); ++j)
    if (ech.add(x.column(j))) cols.push_back(j);
  return x.select_columns(cols);
}

/// Monic minimal polynomial of x, coefficients from constant term upward.
inline std::vector<Scalar> minimal_polynomial(const SparseMatrix& x) {
  const std::size_t n = x.rows();
  std::vector<SparseMatrix> powers{SparseMatrix::identity(n)};
  while (true) {
    SparseMatrix basis(n * n, powers.size());
    for (std::size_t k = 0; k < powers.size(); ++k) basis.set_column(k, vec_columns(powers[k]));
    const SparseMatrix next = powers.back() * x;
    SparseMatrix target(n * n, 1);
    target.set_column(0, vec_columns(next));
    if (auto c = solve(basis, target)) {
      std::vector<Scalar> poly(powers.size() + 1);
      for (const auto& e : c->column(0)) poly[e.index] = -e.value;
      poly.back() = 1;
      return poly;
    }
    powers.push_back(next);
  }
}

/// Rational roots of a polynomial (coefficients from constant term upward), ascending.
inline std::vector<Scalar> rational_roots(std::vector<Scalar> poly) {
  std::vector<Scalar> roots;
  while (poly.size() > 1 && is_zero(poly.front())) {
    poly.erase(poly.begin());
    if (roots.empty()) roots.push_back(Scalar(0));
  }
  if (poly.size() < 2) return roots;
  mpz_class l = 1;
  for (const auto& c : poly) l = lcm(l, mpz_class(c.get_den()));
  std::vector<mpz_class> z;
  for (const auto& c : poly) z.push_back(mpz_class(c * l));
  auto divisors = [](const mpz_class& v) {
    std::vector<mpz_class> out;
    for (mpz_class d = 1; d * d <= v; ++d)
      if (v % d == 0) {
        out.push_back(d);
        if (d * d != v) out.push_back(v / d);
      }
    return out;
  };
  std::vector<Scalar> candidates;
  for (const auto& p : divisors(abs(z.front())))
    for (const auto& q : divisors(abs(z.back()))) {
      Scalar c(p, q);
      c.canonicalize();
      candidates.push_back(c);
      candidates.push_back(-c);
    }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  for (const auto& c : candidates) {
    Scalar v = 0;
    for (std::size_t k = poly.size(); k-- > 0;) v = v * c + poly[k];
    if (is_zero(v)) roots.push_back(c);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

/// Splits V along x when x is neither invertible nor nilpotent:
/// V = im(x^n) ⊕ ker(x^n). Returns both column bases or nullopt.
inline std::optional<std::pair<SparseMatrix, SparseMatrix>> fitting_split(const SparseMatrix& x) {
  const std::size_t n = x.rows();
  const SparseMatrix xn = power(x, n);
  const std::size_t r = rank(xn);
  if (r == 0 || r == n) return std::nullopt;
  return std::make_pair(image_basis(xn), kernel_basis(xn));
}

struct SimpleModule {
  LeftModule module;
  std::size_t endo_dim = 0;
};

/// Decomposes a semisimple module into simple summands.
inline void decompose(const LeftModule& v, std::vector<SimpleModule>& out) {
  if (v.dim == 0) return;
  const auto ends = module_endomorphisms(v);
  if (ends.size() == 1) {
    out.push_back({v, 1});
    return;
  }
  bool commutative = true;
  for (std::size_t i = 0; i < ends.size() && commutative; ++i)
    for (std::size_t j = i + 1; j < ends.size() && commutative; ++j)
      commutative = ends[i] * ends[j] == ends[j] * ends[i];

  std::optional<std::pair<SparseMatrix, SparseMatrix>> parts;
  bool field = false;
  lattice_search(ends, v.dim, v.dim, [&](const SparseMatrix& x) {
    const auto mu = minimal_polynomial(x);
    const auto roots = rational_roots(mu);
    for (const auto& lam : roots) {
      parts = fitting_split(x - lam * SparseMatrix::identity(v.dim));
      if (parts) return true;
    }
    if (auto p = fitting_split(x)) {
      parts = std::move(p);
      return true;
    }
    // A commutative endomorphism algebra generated by an element with an
    // irreducible minimal polynomial is a field.
    const std::size_t deg = mu.size() - 1;
    if (commutative && roots.empty() && deg == ends.size() && deg <= 3) {
      field = true;
      return true;
    }
    return false;
  });
  if (field) {
    out.push_back({v, ends.size()});
    return;
  }
  if (!parts) throw InternalError("simple module decomposition: no splitting element found");
  decompose(restrict_module(v, parts->first), out);
  decompose(restrict_module(v, parts->second), out);
}

}  // namespace detail

/// One representative per isomorphism class of simple left modules of a
/// unital algebra, with the dimension of its endomorphism algebra, in the
/// order they first occur in the regular module.
inline std::vector<detail::SimpleModule> simple_modules(const CondensationAlgebra& a) {
  LeftModule reg;
  reg.dim = a.dim();
  for (std::size_t i = 0; i < a.dim(); ++i) reg.action.push_back(left_multiplication(a, i));
  std::vector<detail::SimpleModule> all;
  detail::decompose(reg, all);
  std::vector<detail::SimpleModule> classes;
  for (auto& s : all) {
    bool seen = false;
    for (const auto& c : classes)
      if (c.module.dim == s.module.dim && detail::module_hom_dim(s.module, c.module) > 0) seen = true;
    if (!seen) classes.push_back(std::move(s));
  }
  return classes;
}

/// Sorted endomorphism dimensions of the simple modules.
inline std::vector<std::size_t> simple_inventory(const CondensationAlgebra& a) {
  std::vector<std::size_t> out;
  for (const auto& s : simple_modules(a)) out.push_back(s.endo_dim);
  std::sort(out.begin(), out.end());
  return out;
}

struct MoritaResult {
  bool verdict = false;
  std::vector<std::size_t> inventory_a;
  std::vector<std::size_t> inventory_b;
  std::optional<MoritaWitness> witness;
};

namespace detail {

/// ⊕ S_i ⊗ T_i* over (A, B) for paired simple modules with trivial endomorphisms.
inline CondensationBimodule pairing_bimodule(const AlgebraPtr& a, const AlgebraPtr& b,
                                             const std::vector<SimpleModule>& sa, const std::vector<SimpleModule>& sb) {
  std::size_t total = 0;
  for (std::size_t i = 0; i < sa.size(); ++i) total += sa[i].module.dim * sb[i].module.dim;
  const std::size_t da = a->dim(), db = b->dim();
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, Scalar>> lt, rt;
  std::size_t off = 0;
  for (std::size_t i = 0; i < sa.size(); ++i) {
    const std::size_t ns = sa[i].module.dim, nt = sb[i].module.dim;
    // basis s⊗t* at off + s·nt + t
    for (std::size_t x = 0; x < da; ++x)
      for (std::size_t s = 0; s < ns; ++s)
        for (const auto& e : sa[i].module.action[x].column(s))
          for (std::size_t t = 0; t < nt; ++t)
            lt.push_back({{off + e.index * nt + t, x * total + off + s * nt + t}, e.value});
    // (s⊗ψ)·y = s⊗(ψ∘ y·): (t*·y)(t') = t*(y·t'), so t*·y = Σ_{t'} act_y(t, t') t'*
    for (std::size_t y = 0; y < db; ++y)
      for (std::size_t tp = 0; tp < nt; ++tp)
        for (const auto& e : sb[i].module.action[y].column(tp))
          for (std::size_t s = 0; s < ns; ++s)
            rt.push_back({{off + s * nt + tp, (off + s * nt + e.index) * db + y}, e.value});
    off += ns * nt;
  }
  return with_induced_coactions(a, b, total, SparseMatrix::from_triplets(total, da * total, std::move(lt)),
                                SparseMatrix::from_triplets(total, total * db, std::move(rt)));
}

}  // namespace detail

/// Morita comparison via the simple-module inventories of the
/// unitalizations. A witness is built for identical algebras and for
/// pairs whose simples all have one-dimensional endomorphism algebras.
inline MoritaResult morita_equivalent(const SigmaObject& a, const SigmaObject& b) {
  MoritaResult r;
  if (same_algebra(a.ptr(), b.ptr())) {
    const auto inv = simple_inventory(unitalize(a).unital.algebra());
    r.verdict = true;
    r.inventory_a = r.inventory_b = inv;
    r.witness = make_morita_witness(regular_bimodule(a.ptr()), regular_bimodule(a.ptr()));
    if (!r.witness) throw InternalError("morita_equivalent: identity witness failed");
    return r;
  }
  Unitalization ua = unitalize(a), ub = unitalize(b);
  const auto sa = simple_modules(ua.unital.algebra());
  const auto sb = simple_modules(ub.unital.algebra());
  for (const auto& s : sa) r.inventory_a.push_back(s.endo_dim);
  for (const auto& s : sb) r.inventory_b.push_back(s.endo_dim);
  std::sort(r.inventory_a.begin(), r.inventory_a.end());
  std::sort(r.inventory_b.begin(), r.inventory_b.end());
  r.verdict = r.inventory_a == r.inventory_b;
  if (!r.verdict) return r;
  const bool split = std::all_of(r.inventory_a.begin(), r.inventory_a.end(), [](std::size_t d) { return d == 1; });
  if (!split) return r;

  const AlgebraPtr& ea = ua.unital.ptr();
  const AlgebraPtr& eb = ub.unital.ptr();
  const CondensationBimodule p = detail::pairing_bimodule(ea, eb, sa, sb);
  const CondensationBimodule q = detail::pairing_bimodule(eb, ea, sb, sa);
  // a → a' → b' → b and back
  CondensationBimodule m = tensor_over(tensor_over(ua.witness.m, p), ub.witness.n);
  CondensationBimodule n = tensor_over(tensor_over(ub.witness.m, q), ua.witness.n);
  r.witness = make_morita_witness(std::move(m), std::move(n));
  if (!r.witness) throw InternalError("morita_equivalent: composite witness does not verify");
  return r;
}

// ---------------------------------------------------------------------------
// Condensates inside ΣVect

struct CondenseResult {
  std::optional<SigmaObject> object;
  std::vector<AxiomCheck> checks;  ///< every check run, in order
  const AxiomCheck* first_failure() const {
    for (const auto& c : checks)
      if (!c.pass) return &c;
    return nullptr;
  }
};

/// Condenses a condensation algebra E in the endomorphism category of e:
/// E is an (e, e) bimodule with its own multiplication E⊗_e E → E and
/// comultiplication, given on E⊗E. The two monad structures must commute:
/// mult and comult are (e, e)-bilinear and compatible with ε.
inline CondenseResult condense_in_sigma(const SigmaObject& e, const CondensationBimodule& E,
                                        const SparseMatrix& mult, const SparseMatrix& comult) {
  CondenseResult res;
  auto add = [&res](AxiomCheck c) { res.checks.push_back(std::move(c)); };
  if (!same_algebra(E.left_ptr(), e.ptr()) || !same_algebra(E.right_ptr(), e.ptr()))
    throw InputError("condense_in_sigma: E is not a bimodule over (e, e)");
  const std::size_t n = E.dim(), d = e.algebra().dim();
  if (mult.rows() != n || mult.cols() != n * n || comult.rows() != n * n || comult.cols() != n)
    throw InputError("condense_in_sigma: structure maps have the wrong shape");

  for (auto& c : check_condensation_bimodule(E).checks) {
    c.name = "bimodule " + c.name;
    add(std::move(c));
  }
  const CondensationAlgebra ealg(n, mult, comult, "E");
  const AxiomReport ar = check_condensation_algebra(ealg);
  for (const AxiomCheck* c : ar.checks()) {
    AxiomCheck copy = *c;
    copy.name = "algebra " + copy.name;
    add(std::move(copy));
  }

  // Commutation with the e-structure: m∘ε = m, ε∘Δ = Δ, and bilinearity.
  const SparseMatrix eps = tensor_epsilon(E, E);
  const SparseMatrix id = SparseMatrix::identity(d), in = SparseMatrix::identity(n);
  add(detail::compare_maps("balance mult∘ε = mult", mult * eps, mult, {n, n}, {n}));
  add(detail::compare_maps("balance ε∘comult = comult", eps * comult, comult, {n}, {n, n}));
  add(detail::compare_maps("left linearity of mult", mult * kron(E.lact(), in), E.lact() * kron(id, mult), {d, n, n},
                           {n}));
  add(detail::compare_maps("right linearity of mult", mult * kron(in, E.ract()), E.ract() * kron(mult, id), {n, n, d},
                           {n}));
  add(detail::compare_maps("left colinearity of comult", kron(E.lcoact(), in) * comult, kron(id, comult) * E.lcoact(),
                           {n}, {d, n, n}));
  add(detail::compare_maps("right colinearity of comult", kron(in, E.rcoact()) * comult, kron(comult, id) * E.rcoact(),
                           {n}, {n, n, d}));
  if (res.first_failure()) return res;
  res.object.emplace(ealg.relabeled("condensate(" + e.algebra().label() + ")"));
  return res;
}

// ---------------------------------------------------------------------------
// Dual objects

struct DualObject {
  SigmaObject opposite;
  CondensationBimodule ev;    ///< a over (a⊗aᵒᵖ, ℚ)
  CondensationBimodule coev;  ///< a over (ℚ, aᵒᵖ⊗a)
  bool snake_a = false;       ///< (id⊠coev)⊗(ev⊠id) ≅ regular(a)
  bool snake_op = false;      ///< (coev⊠id)⊗(id⊠ev) ≅ regular(aᵒᵖ)
};

inline DualObject dual_object(const SigmaObject& obj) {
  const AlgebraPtr& a = obj.ptr();
  const std::size_t d = a->dim();
  const AlgebraPtr aop = share(opposite(*a));
  const AlgebraPtr aaop = share(tensor_product(*a, *aop));
  const AlgebraPtr aopa = share(tensor_product(*aop, *a));
  const SparseMatrix& M = a->mult();
  const SparseMatrix& D = a->comult();
  const SparseMatrix id = SparseMatrix::identity(d);
  const std::vector<std::size_t> dims3{d, d, d};

  // (x⊗y)·s = x·s·y: index ((x·d + y)·d + s) ↦ M(I⊗M) at (x, s, y).
  const SparseMatrix xsy = M * kron(id, M);  // on (x, s, y)
  const std::vector<std::size_t> to_xsy{0, 2, 1};
  const SparseMatrix ev_l = permute_columns(xsy, tensor_permutation(dims3, std::vector<std::size_t>{0, 2, 1}));
  // s ↦ Σ (s1⊗s3)⊗s2 : (Δ⊗I)Δ lands in (s1, s2, s3); reorder to (s1, s3, s2).
  const SparseMatrix d3 = kron(D, id) * D;
  const SparseMatrix ev_lc = permute_rows(tensor_permutation(dims3, to_xsy), d3);
  const SparseMatrix one = SparseMatrix::identity(d);
  CondensationBimodule ev(aaop, trivial_algebra(), d, ev_l, one, ev_lc, one);

  // s·(y⊗x) = y·s·x: index ((s·d + y)·d + x) ↦ (y, s, x).
  const SparseMatrix coev_r = permute_columns(xsy, tensor_permutation(dims3, std::vector<std::size_t>{1, 0, 2}));
  // s ↦ Σ s2⊗(s1⊗s3)
  const SparseMatrix coev_rc = permute_rows(tensor_permutation(dims3, std::vector<std::size_t>{1, 0, 2}), d3);
  CondensationBimodule coev(trivial_algebra(), aopa, d, one, coev_r, one, coev_rc);

  for (const auto* m : {&ev, &coev}) {
    const BimoduleReport rep = check_condensation_bimodule(*m);
    if (!rep.pass()) throw InternalError("dual_object: evaluation bimodule fails " + rep.first_failure()->name);
  }

  DualObject out{SigmaObject(aop), ev, coev};
  const CondensationBimodule ida = regular_bimodule(a), idop = regular_bimodule(aop);
  const CondensationBimodule s1 = tensor_over(box_product(ida, coev), box_product(ev, ida));
  out.snake_a = are_isomorphic(s1, ida).verdict;
  const CondensationBimodule s2 = tensor_over(box_product(coev, idop), box_product(idop, ev));
  out.snake_op = are_isomorphic(s2, idop).verdict;
  return out;
}

}  // namespace condensate
