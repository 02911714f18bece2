#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "condensate/algebra.hpp"
#include "condensate/bimodule.hpp"
#include "condensate/catalog.hpp"
#include "condensate/errors.hpp"
#include "condensate/exactlin.hpp"
#include "condensate/hamiltonian.hpp"
#include "condensate/json_io.hpp"
#include "condensate/karoubi.hpp"

namespace condensate::battery {

namespace fs = std::filesystem;

/// Loaded fixture directory.
struct Fixtures {
  fs::path dir;
  std::map<std::string, AlgebraPtr> algebras;  ///< battery algebras plus q_plus_q, by stem
  std::size_t cap = default_dim_cap();

  const AlgebraPtr& at(const std::string& name) const {
    const auto it = algebras.find(name);
    if (it == algebras.end()) throw InputError("fixture '" + name + "' not loaded");
    return it->second;
  }
};

inline const std::vector<std::string>& battery_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& a : catalog::battery_algebras()) n.push_back(a.name);
    return n;
  }();
  return names;
}

inline Fixtures load_fixtures(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw InputError("fixture directory '" + dir.string() + "' not found");
  Fixtures f;
  f.dir = dir;
  for (const auto& a : catalog::all_algebras()) {
    CondensationAlgebra loaded = load_algebra(dir / (a.name + ".algebra.json"));
    f.algebras.emplace(a.name, share(std::move(loaded)));
  }
  for (const char* extra : {"m2_unscaled.algebra.json", "z2_scaled_coaction.bimodule.json", "m2_row.bimodule.json",
                            "m2_column.bimodule.json", "malformed.algebra.json"})
    if (!fs::exists(dir / extra)) throw InputError(std::string("fixture '") + extra + "' missing");
  return f;
}

struct ItemResult {
  bool pass = false;
  Json detail = Json::object();
};

struct ItemRecord {
  std::string name;
  bool pass = false;
  Json detail;
  double seconds = 0;
};

struct Criterion {
  int id = 0;
  std::string name;
  std::string module;
  double limit_seconds = 0;  ///< 0 = no limit
  std::vector<std::pair<std::string, std::function<ItemResult()>>> items;
  /// Extra records computed from the finished items (sorted by name).
  std::function<std::vector<ItemRecord>(const std::vector<ItemRecord>&)> finalize;
};

namespace detail {

using condensate::detail::Triplets;

struct Bimod {
  std::string name;
  CondensationBimodule m;
};

/// regular, f = (A, Q) restriction and g = (Q, A) restriction of each battery
/// algebra, plus the row and column modules of M2.
inline std::vector<Bimod> battery_bimodules(const Fixtures& fx) {
  std::vector<Bimod> out;
  for (const auto& n : battery_names()) {
    const AlgebraPtr& a = fx.at(n);
    auto [f, g] = restriction_modules(a);
    out.push_back({"f(" + n + ")", std::move(f)});
    out.push_back({"g(" + n + ")", std::move(g)});
    out.push_back({"regular(" + n + ")", regular_bimodule(a)});
  }
  out.push_back({"m2_column", load_bimodule(fx.dir / "m2_column.bimodule.json").bimodule});
  out.push_back({"m2_row", load_bimodule(fx.dir / "m2_row.bimodule.json").bimodule});
  return out;
}

inline Bimod find_bimod(const Fixtures& fx, const std::string& name) {
  for (auto& b : battery_bimodules(fx))
    if (b.name == name) return b;
  throw InternalError("battery: unknown bimodule " + name);
}

inline bool verified_iso(const CondensationBimodule& x, const CondensationBimodule& y) {
  const IsoResult r = are_isomorphic(x, y);
  return r.verdict && r.witness && is_intertwiner(x, y, *r.witness) && is_invertible(*r.witness);
}

inline Json sizes(const std::vector<std::size_t>& v) {
  Json j = Json::array();
  for (std::size_t x : v) j.push_back(x);
  return j;
}

/// Invertible integer matrix with entries in {-2..2} from a seeded mt19937.
inline SparseMatrix random_twist(std::size_t d, std::uint32_t seed) {
  std::mt19937 rng(seed);
  while (true) {
    Triplets t;
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) {
        const long v = static_cast<long>(rng() % 5) - 2;
        if (v != 0) t.push_back({{r, c}, Scalar(v)});
      }
    SparseMatrix m = SparseMatrix::from_triplets(d, d, std::move(t));
    if (is_invertible(m)) return m;
  }
}

// --- 1 --------------------------------------------------------------------

inline Criterion axioms(const Fixtures& fx) {
  Criterion c{1, "axioms", "algebra", 5.0, {}, {}};
  for (const auto& n : battery_names())
    c.items.push_back({"check " + n, [&fx, n] {
                         const AxiomReport r = check_condensation_algebra(*fx.at(n));
                         Json d = Json::object();
                         for (const AxiomCheck* ch : r.checks()) d[ch->name] = ch->pass;
                         return ItemResult{r.pass(), d};
                       }});
  c.items.push_back({"negative m2_unscaled", [&fx] {
                       const AxiomReport r = check_condensation_algebra(load_algebra(fx.dir / "m2_unscaled.algebra.json"));
                       const Json w = first_witness(r.checks());
                       const bool ok = !r.pass() && !w.is_null() && w["check"] == "specialness" &&
                                       w["note"] == "m∘Δ = 2·id";
                       return ItemResult{ok, Json{{"witness", w}}};
                     }});
  c.items.push_back({"negative z2_scaled_coaction", [&fx] {
                       const auto m = load_bimodule(fx.dir / "z2_scaled_coaction.bimodule.json");
                       const BimoduleReport r = check_condensation_bimodule(m.bimodule);
                       const Json w = first_witness(r.checks);
                       const bool ok = !r.pass() && !w.is_null() && w["check"] == "left specialness" &&
                                       w["note"] == "lact∘lcoact = 2·id";
                       return ItemResult{ok, Json{{"witness", w}}};
                     }});
  c.items.push_back({"negative malformed", [&fx] {
                       try {
                         (void)load_algebra(fx.dir / "malformed.algebra.json");
                       } catch (const InputError& e) {
                         return ItemResult{true, Json{{"rejected", true}}};
                       }
                       return ItemResult{false, Json{{"rejected", false}}};
                     }});
  return c;
}

// --- 2 --------------------------------------------------------------------

inline Criterion frobenius_implication(const Fixtures& fx) {
  Criterion c{2, "frobenius-implication", "algebra", 30.0, {}, {}};
  const auto& names = battery_names();
  for (std::size_t idx = 0; idx < names.size(); ++idx) {
    const std::string n = names[idx];
    c.items.push_back({"twists " + n, [&fx, n, idx] {
                         const CondensationAlgebra& a = *fx.at(n);
                         std::size_t premise = 0, conclusion = 0, held = 0;
                         for (std::uint32_t k = 0; k < 20; ++k) {
                           const SparseMatrix t = random_twist(a.dim(), static_cast<std::uint32_t>(1000 * idx + k + 1));
                           const AxiomReport r = check_condensation_algebra(twist(a, t));
                           const bool p = r.specialness.pass && r.frobenius.pass;
                           const bool q = r.associativity.pass && r.coassociativity.pass;
                           premise += p;
                           conclusion += p && q;
                           held += !p || q;
                         }
                         return ItemResult{held == 20, Json{{"twists", 20},
                                                            {"premise_held", premise},
                                                            {"conclusion_held", conclusion},
                                                            {"implication_held", held}}};
                       }});
  }
  return c;
}

// --- 3 --------------------------------------------------------------------

inline Criterion tensor_oracle(const Fixtures& fx) {
  Criterion c{3, "tensor-oracle", "bimodule", 60.0, {}, {}};
  const auto add = [&](std::string name, std::string left, std::string right, std::optional<std::size_t> expected) {
    c.items.push_back({std::move(name), [&fx, left, right, expected] {
                         const Bimod l = find_bimod(fx, left), r = find_bimod(fx, right);
                         const std::size_t rk = rank(tensor_epsilon(l.m, r.m));
                         const std::size_t oracle = coequalizer_oracle(l.m, r.m);
                         Json d{{"rank_epsilon", rk}, {"coequalizer", oracle}};
                         bool ok = rk == oracle;
                         if (expected) {
                           d["expected"] = *expected;
                           ok = ok && rk == *expected;
                         }
                         return ItemResult{ok, d};
                       }});
  };
  for (const auto& n : battery_names()) {
    if (n == "span") continue;
    const std::size_t d = fx.at(n)->dim();
    add(n + ": regular x regular", "regular(" + n + ")", "regular(" + n + ")", d);
    add(n + ": f x g", "f(" + n + ")", "g(" + n + ")", d * d);
    add(n + ": g x f", "g(" + n + ")", "f(" + n + ")", d);
    add(n + ": regular x f", "regular(" + n + ")", "f(" + n + ")", d);
    add(n + ": g x regular", "g(" + n + ")", "regular(" + n + ")", d);
  }
  add("m2: row x column", "m2_row", "m2_column", 1);
  add("m2: column x row", "m2_column", "m2_row", 4);
  return c;
}

// --- 4 --------------------------------------------------------------------

inline Criterion composition_laws(const Fixtures& fx) {
  Criterion c{4, "composition-laws", "bimodule", 0, {}, {}};
  for (const auto& b : battery_bimodules(fx)) {
    const std::string name = b.name;
    c.items.push_back({"unit " + name, [&fx, name] {
                         const Bimod x = find_bimod(fx, name);
                         const bool left = verified_iso(tensor_over(regular_bimodule(x.m.left_ptr()), x.m), x.m);
                         const bool right = verified_iso(tensor_over(x.m, regular_bimodule(x.m.right_ptr())), x.m);
                         return ItemResult{left && right, Json{{"left_unit", left}, {"right_unit", right}}};
                       }});
  }
  const auto assoc = [&](std::string a, std::string b, std::string d) {
    c.items.push_back({"assoc " + a + " " + b + " " + d, [&fx, a, b, d] {
                         const Bimod x = find_bimod(fx, a), y = find_bimod(fx, b), z = find_bimod(fx, d);
                         const CondensationBimodule lhs = tensor_over(tensor_over(x.m, y.m), z.m);
                         const CondensationBimodule rhs = tensor_over(x.m, tensor_over(y.m, z.m));
                         const bool ok = verified_iso(lhs, rhs);
                         return ItemResult{ok, Json{{"dim", lhs.dim()}, {"isomorphic", ok}}};
                       }});
  };
  for (const auto& n : battery_names()) {
    const std::string r = "regular(" + n + ")", f = "f(" + n + ")", g = "g(" + n + ")";
    assoc(r, r, r);
    assoc(r, r, f);
    assoc(g, r, f);
    assoc(g, r, r);
  }
  assoc("m2_column", "m2_row", "m2_column");
  assoc("m2_row", "m2_column", "m2_row");
  return c;
}

// --- 5 --------------------------------------------------------------------

inline Criterion unitalization(const Fixtures& fx) {
  Criterion c{5, "unitalization", "karoubi", 60.0, {}, {}};
  for (const auto& n : battery_names())
    c.items.push_back({"unitalize " + n, [&fx, n] {
                         const SigmaObject e(fx.at(n));
                         const bool was_unital = find_unit(e.algebra()).has_value();
                         const Unitalization u = unitalize(e);
                         const bool unital = find_unit(u.unital.algebra()).has_value();
                         bool separable = true;
                         try {
                           (void)separability_idempotent(u.unital.algebra());
                         } catch (const PreconditionError&) {
                           separable = false;
                         }
                         const bool witness = verify_morita_witness(u.witness);
                         Json d{{"dim", e.algebra().dim()},
                                {"unital_dim", u.unital.algebra().dim()},
                                {"input_unital", was_unital},
                                {"unit", unital},
                                {"separability_idempotent", separable},
                                {"witness_verified", witness}};
                         bool ok = unital && separable && witness;
                         if (was_unital) {
                           const bool same = unital_comparison(e, u).has_value();
                           d["isomorphic_to_input"] = same;
                           ok = ok && same;
                         }
                         return ItemResult{ok, d};
                       }});
  return c;
}

// --- 6 --------------------------------------------------------------------

inline Criterion morita(const Fixtures& fx) {
  Criterion c{6, "morita", "karoubi", 0, {}, {}};
  for (const auto& a : battery_names())
    for (const auto& b : battery_names())
      c.items.push_back({"pair " + a + " ~ " + b, [&fx, a, b] {
                           const MoritaResult r = morita_equivalent(SigmaObject(fx.at(a)), SigmaObject(fx.at(b)));
                           const bool verified = r.witness && verify_morita_witness(*r.witness);
                           const bool split = std::all_of(r.inventory_a.begin(), r.inventory_a.end(),
                                                          [](std::size_t x) { return x == 1; });
                           // A witness is required whenever one is constructible.
                           const bool ok = !r.verdict || verified || (!split && a != b);
                           return ItemResult{ok, Json{{"a", a},
                                                      {"b", b},
                                                      {"verdict", r.verdict},
                                                      {"inventory_a", sizes(r.inventory_a)},
                                                      {"inventory_b", sizes(r.inventory_b)},
                                                      {"witness_verified", verified}}};
                         }});
  c.finalize = [](const std::vector<ItemRecord>& items) {
    std::map<std::pair<std::string, std::string>, bool> rel;
    for (const auto& it : items)
      if (it.detail.contains("verdict"))
        rel[{it.detail["a"].get<std::string>(), it.detail["b"].get<std::string>()}] = it.detail["verdict"].get<bool>();
    const auto& names = battery_names();
    const auto get = [&](const std::string& x, const std::string& y) {
      const auto f = rel.find({x, y});
      return f != rel.end() && f->second;
    };
    bool refl = true, sym = true, trans = true;
    for (const auto& x : names) {
      refl = refl && get(x, x);
      for (const auto& y : names) {
        sym = sym && get(x, y) == get(y, x);
        for (const auto& z : names) trans = trans && (!(get(x, y) && get(y, z)) || get(x, z));
      }
    }
    Json classes = Json::array();
    std::vector<bool> seen(names.size(), false);
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (seen[i]) continue;
      Json cls = Json::array();
      for (std::size_t j = i; j < names.size(); ++j)
        if (!seen[j] && get(names[i], names[j])) {
          seen[j] = true;
          cls.push_back(names[j]);
        }
      classes.push_back(cls);
    }
    const auto pair_ok = [&](const std::string& x, const std::string& y, bool want) {
      for (const auto& it : items)
        if (it.name == "pair " + x + " ~ " + y)
          return it.detail["verdict"].get<bool>() == want && (!want || it.detail["witness_verified"].get<bool>());
      return false;
    };
    return std::vector<ItemRecord>{
        {"equivalence relation", refl && sym && trans && rel.size() == names.size() * names.size(),
         Json{{"reflexive", refl}, {"symmetric", sym}, {"transitive", trans}, {"classes", classes}}},
        {"m2 ~ q with witness", pair_ok("m2", "q", true), Json{{"expected", true}}},
        {"q_z2 !~ q", pair_ok("q_z2", "q", false), Json{{"expected", false}}},
    };
  };
  return c;
}

// --- 7 --------------------------------------------------------------------

inline Criterion dualizability(const Fixtures& fx) {
  Criterion c{7, "dualizability", "karoubi", 0, {}, {}};
  for (const auto& b : battery_bimodules(fx)) {
    const std::string name = b.name;
    c.items.push_back({"dual " + name, [&fx, name] {
                         const Bimod x = find_bimod(fx, name);
                         const DualResult d = dual_bimodule(x.m);
                         const ZigzagVerdict z = zigzag_check(x.m, d.dual, d.unit, d.counit);
                         const bool unit_ok = is_intertwiner(d.unit), counit_ok = is_intertwiner(d.counit);
                         return ItemResult{z.pass() && unit_ok && counit_ok,
                                           Json{{"dual_dim", d.dual.dim()},
                                                {"zigzag_first", z.first},
                                                {"zigzag_second", z.second},
                                                {"unit_intertwiner", unit_ok},
                                                {"counit_intertwiner", counit_ok}}};
                       }});
  }
  for (const auto& n : battery_names())
    c.items.push_back({"dual object " + n, [&fx, n] {
                         const DualObject d = dual_object(SigmaObject(fx.at(n)));
                         return ItemResult{d.snake_a && d.snake_op,
                                           Json{{"snake_a", d.snake_a}, {"snake_op", d.snake_op}}};
                       }});
  return c;
}

// --- 8 --------------------------------------------------------------------

inline Criterion hamiltonian(const Fixtures& fx) {
  Criterion c{8, "hamiltonian", "hamiltonian", 120.0, {}, {}};
  struct Expect {
    const char* name;
    std::size_t n;
    Boundary b;
    std::size_t ground;
  };
  static const Expect expected[] = {{"q_plus_q", 3, Boundary::periodic, 2},
                                    {"q_s3", 2, Boundary::periodic, 3},
                                    {"m2", 2, Boundary::periodic, 1},
                                    {"q_z2", 3, Boundary::open, 2}};
  std::vector<std::string> names = battery_names();
  names.push_back("q_plus_q");
  std::sort(names.begin(), names.end());
  for (const auto& n : names)
    for (std::size_t len = 2; len <= 4; ++len)
      for (Boundary b : {Boundary::open, Boundary::periodic}) {
        const std::string label = "chain " + n + " n=" + std::to_string(len) + " " + to_string(b);
        c.items.push_back({label, [&fx, n, len, b] {
                             const ChainSpec spec{fx.at(n), len, b, fx.cap};
                             Json d = Json::object();
                             try {
                               (void)spec.total_dim();
                             } catch (const ResourceError& e) {
                               d["skipped"] = "dimension cap";
                               d["required"] = e.required();
                               return ItemResult{true, d};
                             }
                             const ChainReport r = ground_space(spec);
                             const auto projs = build_projectors(spec);
                             std::vector<std::size_t> rev(projs.size());
                             for (std::size_t i = 0; i < rev.size(); ++i) rev[i] = rev.size() - 1 - i;
                             const SparseMatrix prod = projector_product(projs, r.total_dim);
                             const bool order_free = projector_product(projs, r.total_dim, rev) == prod;
                             bool ok = r.commuting.pass && r.projectors_idempotent && order_free;
                             d["total_dim"] = r.total_dim;
                             d["projectors"] = r.projector_count;
                             d["commuting"] = r.commuting.pass;
                             d["idempotent"] = r.projectors_idempotent;
                             d["order_independent"] = order_free;
                             d["ground_dim"] = r.ground_dim;
                             if (b == Boundary::periodic) {
                               const SparseMatrix q = cyclic_shift(spec.algebra->dim(), len);
                               const bool inv = q * prod == prod * q;
                               d["translation_invariant"] = inv;
                               ok = ok && inv;
                             }
                             if (find_unit(*spec.algebra)) {
                               const std::size_t p = predicted_ground_dim(spec);
                               d["predicted"] = p;
                               ok = ok && p == r.ground_dim;
                             }
                             for (const auto& e : expected)
                               if (n == e.name && len == e.n && b == e.b) {
                                 d["expected"] = e.ground;
                                 ok = ok && r.ground_dim == e.ground;
                               }
                             return ItemResult{ok, d};
                           }});
      }
  return c;
}

// --- 9 --------------------------------------------------------------------

inline Criterion uniqueness(const Fixtures& fx) {
  Criterion c{9, "uniqueness", "karoubi", 0, {}, {}};
  for (const auto& n : battery_names())
    c.items.push_back({"idempotent " + n, [&fx, n] {
                         const CondensationAlgebra& a = *fx.at(n);
                         const SparseMatrix p = a.comult() * a.mult();
                         std::vector<SparseSplit> splits;
                         for (unsigned v = 0; v < 5; ++v) splits.push_back(split_idempotent(p, pivot_order(p.rows(), v)));
                         bool ok = true;
                         const std::size_t r = splits[0].rank();
                         for (std::size_t v = 1; v < splits.size(); ++v) {
                           // θ = f_v g_0 with inverse f_0 g_v
                           const SparseMatrix theta = splits[v].f * splits[0].g;
                           const SparseMatrix back = splits[0].f * splits[v].g;
                           ok = ok && theta * back == SparseMatrix::identity(r) && back * theta == SparseMatrix::identity(r) &&
                                splits[v].g * theta == splits[0].g && theta * splits[0].f == splits[v].f;
                         }
                         return ItemResult{ok, Json{{"rank", r}, {"orders", 5}}};
                       }});
  const auto eps = [&](std::string left, std::string right) {
    c.items.push_back({"epsilon " + left + " x " + right, [&fx, left, right] {
                         const Bimod l = find_bimod(fx, left), r = find_bimod(fx, right);
                         const std::size_t n = l.m.dim() * r.m.dim();
                         std::vector<TensorProduct> ts;
                         for (unsigned v = 0; v < 5; ++v) ts.push_back(tensor_over_split(l.m, r.m, pivot_order(n, v)));
                         bool iso = true, canonical = true;
                         for (std::size_t v = 1; v < ts.size(); ++v) {
                           iso = iso && verified_iso(ts[0].bimodule, ts[v].bimodule);
                           const SparseMatrix theta = ts[v].split.f * ts[0].split.g;
                           canonical = canonical && is_intertwiner(ts[0].bimodule, ts[v].bimodule, theta) &&
                                       is_invertible(theta);
                         }
                         return ItemResult{iso && canonical, Json{{"dim", ts[0].bimodule.dim()},
                                                                  {"orders", 5},
                                                                  {"are_isomorphic", iso},
                                                                  {"comparison_intertwiner", canonical}}};
                       }});
  };
  for (const auto& n : battery_names()) eps("regular(" + n + ")", "regular(" + n + ")");
  for (const auto& n : battery_names())
    if (n != "span") eps("g(" + n + ")", "f(" + n + ")");
  eps("m2_row", "m2_column");
  eps("m2_column", "m2_row");
  return c;
}

}  // namespace detail

inline std::vector<Criterion> criteria(const Fixtures& fx) {
  return {detail::axioms(fx),         detail::frobenius_implication(fx), detail::tensor_oracle(fx),
          detail::composition_laws(fx), detail::unitalization(fx),       detail::morita(fx),
          detail::dualizability(fx),  detail::hamiltonian(fx),           detail::uniqueness(fx)};
}

struct CriterionOutcome {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0;
  std::size_t items = 0;
  std::size_t failed = 0;
};

struct BatteryResult {
  Json report;  ///< deterministic; no timings
  std::vector<CriterionOutcome> outcomes;
  bool pass() const {
    return std::all_of(outcomes.begin(), outcomes.end(), [](const CriterionOutcome& o) { return o.pass; });
  }
};

inline bool selected(const std::string& filter, const std::string& name, const std::string& module) {
  return filter.empty() || name.find(filter) != std::string::npos || module.find(filter) != std::string::npos;
}

namespace detail {

inline unsigned resolve_threads(unsigned threads) {
  if (threads != 0) return threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs every item of the given criteria on `threads` workers; results are
/// assembled in canonical order.
inline BatteryResult run_criteria(std::vector<Criterion> crits, unsigned threads) {
  struct Task {
    std::size_t crit;
    std::size_t item;
  };
  std::vector<Task> tasks;
  for (std::size_t c = 0; c < crits.size(); ++c)
    for (std::size_t i = 0; i < crits[c].items.size(); ++i) tasks.push_back({c, i});
  std::vector<ItemRecord> done(tasks.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      const auto& [name, fn] = crits[tasks[k].crit].items[tasks[k].item];
      const auto t0 = std::chrono::steady_clock::now();
      ItemRecord rec{name, false, Json::object(), 0};
      try {
        ItemResult r = fn();
        rec.pass = r.pass;
        rec.detail = std::move(r.detail);
      } catch (const std::exception& e) {
        rec.detail = Json{{"error", e.what()}};
      }
      rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      done[k] = std::move(rec);
    }
  };
  const unsigned n = std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(tasks.size(), 1));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  BatteryResult out;
  out.report = Json::array();
  std::size_t k = 0;
  for (auto& c : crits) {
    std::vector<ItemRecord> items(done.begin() + static_cast<std::ptrdiff_t>(k),
                                  done.begin() + static_cast<std::ptrdiff_t>(k + c.items.size()));
    k += c.items.size();
    std::sort(items.begin(), items.end(), [](const ItemRecord& a, const ItemRecord& b) { return a.name < b.name; });
    double seconds = 0;
    for (const auto& it : items) seconds += it.seconds;
    if (c.finalize)
      for (auto& extra : c.finalize(items)) items.push_back(std::move(extra));
    CriterionOutcome o{c.id, c.name, true, seconds, items.size(), 0};
    Json jitems = Json::array();
    for (const auto& it : items) {
      if (!it.pass) ++o.failed;
      jitems.push_back(Json{{"name", it.name}, {"pass", it.pass}, {"detail", it.detail}});
    }
    const bool within = c.limit_seconds == 0 || seconds < c.limit_seconds;
    o.pass = o.failed == 0 && within;
    Json jc{{"id", c.id}, {"name", c.name}, {"module", c.module}, {"pass", o.pass}, {"items", jitems}};
    if (c.limit_seconds != 0) {
      jc["limit_seconds"] = c.limit_seconds;
      jc["within_limit"] = within;
    }
    out.report.push_back(std::move(jc));
    out.outcomes.push_back(o);
  }
  return out;
}

}  // namespace detail

/// Runs the acceptance criteria selected by `filter` (substring of the
/// criterion name or module). The determinism criterion re-runs criteria
/// 1–9 single-threaded twice and multi-threaded once and compares the
/// serialized reports byte for byte.
inline BatteryResult run_battery(const Fixtures& fx, const std::string& filter = {}, unsigned threads = 0) {
  std::vector<Criterion> chosen;
  for (auto& c : criteria(fx))
    if (selected(filter, c.name, c.module)) chosen.push_back(std::move(c));
  const bool determinism = selected(filter, "determinism", "cli");
  const bool all_chosen = chosen.size() == 9;

  const auto t0 = std::chrono::steady_clock::now();
  BatteryResult res = detail::run_criteria(chosen, threads);
  if (determinism) {
    const unsigned t = detail::resolve_threads(threads);
    const unsigned multi = std::max(2u, t == 1 ? std::max(1u, std::thread::hardware_concurrency()) : t);
    std::vector<std::string> dumps;
    if (all_chosen) dumps.push_back(canonical_dump(res.report));
    else dumps.push_back(canonical_dump(detail::run_criteria(criteria(fx), t).report));
    dumps.push_back(canonical_dump(detail::run_criteria(criteria(fx), 1).report));
    dumps.push_back(canonical_dump(detail::run_criteria(criteria(fx), t == 1 ? multi : 1).report));
    // dumps: [t threads, 1 thread, other]; two of them are 1-thread runs in a row.
    const bool repeat = t == 1 ? dumps[0] == dumps[1] : dumps[1] == dumps[2];
    const bool threads_agree = t == 1 ? dumps[1] == dumps[2] : dumps[0] == dumps[1];
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CriterionOutcome o{10, "determinism", repeat && threads_agree, seconds, 2, 0};
    o.failed = !repeat + !threads_agree;
    Json items = Json::array();
    items.push_back(Json{{"name", "consecutive runs identical"}, {"pass", repeat}, {"detail", Json::object()}});
    items.push_back(Json{{"name", "1 thread vs multi-thread identical"},
                         {"pass", threads_agree},
                         {"detail", Json{{"runs", 3}, {"bytes", dumps[1].size()}}}});
    res.report.push_back(
        Json{{"id", 10}, {"name", "determinism"}, {"module", "cli"}, {"pass", o.pass}, {"items", items}});
    res.outcomes.push_back(o);
  }
  res.report = Json{{"criteria", res.report}, {"pass", res.pass()}};
  return res;
}

}  // namespace condensate::battery
