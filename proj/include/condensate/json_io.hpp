#pragma once

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "condensate/algebra.hpp"
#include "condensate/bimodule.hpp"
#include "condensate/errors.hpp"
#include "condensate/scalar.hpp"
#include "condensate/sparse.hpp"

namespace condensate {

/// Object keys are kept sorted, which makes dump() canonical.
using Json = nlohmann::json;

namespace detail {

using Triplets = std::vector<std::pair<std::pair<std::size_t, std::size_t>, Scalar>>;

inline void require_keys(const Json& j, const char* what, std::initializer_list<const char*> required,
                         std::initializer_list<const char*> optional = {}) {
  if (!j.is_object()) throw InputError(std::string(what) + ": expected a JSON object");
  for (const char* k : required)
    if (!j.contains(k)) throw InputError(std::string(what) + ": missing key '" + k + "'");
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (const char* k : required) known = known || key == k;
    for (const char* k : optional) known = known || key == k;
    if (!known) throw InputError(std::string(what) + ": unknown key '" + key + "'");
  }
}

inline std::size_t size_from_json(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) throw InputError(where + ": expected a non-negative integer");
  return j.get<std::size_t>();
}

inline const Json& array_of(const Json& j, std::size_t n, const std::string& where) {
  if (!j.is_array() || j.size() != n)
    throw InputError(where + ": expected an array of length " + std::to_string(n));
  return j;
}

/// Reads a nested [a][b][c] array of rationals, calling put(a, b, c, value) for nonzeros.
template <class Put>
void read_tensor3(const Json& j, std::size_t n0, std::size_t n1, std::size_t n2, const std::string& where, Put put);

}  // namespace detail

inline Json scalar_to_json(const Scalar& s) { return to_string(s); }

inline Scalar scalar_from_json(const Json& j, const std::string& where = "rational") {
  if (!j.is_string()) throw InputError(where + ": rationals must be strings like \"p\" or \"p/q\"");
  try {
    return parse_scalar(j.get<std::string>());
  } catch (const InputError& e) {
    throw InputError(where + ": " + e.what());
  }
}

template <class Put>
void detail::read_tensor3(const Json& j, std::size_t n0, std::size_t n1, std::size_t n2, const std::string& where,
                          Put put) {
  array_of(j, n0, where);
  for (std::size_t a = 0; a < n0; ++a) {
    const std::string wa = where + "[" + std::to_string(a) + "]";
    array_of(j[a], n1, wa);
    for (std::size_t b = 0; b < n1; ++b) {
      const std::string wb = wa + "[" + std::to_string(b) + "]";
      array_of(j[a][b], n2, wb);
      for (std::size_t c = 0; c < n2; ++c) {
        Scalar v = scalar_from_json(j[a][b][c], wb + "[" + std::to_string(c) + "]");
        if (!is_zero(v)) put(a, b, c, std::move(v));
      }
    }
  }
}

namespace detail {

/// Nested [a][b][c] array of "0" strings to be filled in.
inline Json zero_tensor3(std::size_t n0, std::size_t n1, std::size_t n2) {
  return Json(n0, Json(n1, Json(n2, Json("0"))));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Matrices

inline Json matrix_to_json(const SparseMatrix& m) {
  std::vector<std::string> entries(m.rows() * m.cols(), "0");
  for (std::size_t c = 0; c < m.cols(); ++c)
    for (const auto& e : m.column(c)) entries[e.index * m.cols() + c] = to_string(e.value);
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

inline SparseMatrix matrix_from_json(const Json& j) {
  detail::require_keys(j, "matrix", {"rows", "cols", "entries"});
  const std::size_t r = detail::size_from_json(j["rows"], "matrix.rows");
  const std::size_t c = detail::size_from_json(j["cols"], "matrix.cols");
  if (c != 0 && r > static_cast<std::size_t>(-1) / c) throw InputError("matrix: shape overflows");
  detail::array_of(j["entries"], r * c, "matrix.entries");
  detail::Triplets t;
  for (std::size_t k = 0; k < r * c; ++k) {
    Scalar v = scalar_from_json(j["entries"][k], "matrix.entries[" + std::to_string(k) + "]");
    if (!is_zero(v)) t.push_back({{k / c, k % c}, std::move(v)});
  }
  return SparseMatrix::from_triplets(r, c, std::move(t));
}

// ---------------------------------------------------------------------------
// Algebras: mult[i][j][k] = coefficient of b_k in b_i·b_j,
// comult[k][i][j] = coefficient of b_i⊗b_j in Δ(b_k).

inline Json algebra_to_json(const CondensationAlgebra& a) {
  const std::size_t d = a.dim();
  Json mult = detail::zero_tensor3(d, d, d);
  Json comult = detail::zero_tensor3(d, d, d);
  for (std::size_t col = 0; col < d * d; ++col)
    for (const auto& e : a.mult().column(col)) mult[col / d][col % d][e.index] = to_string(e.value);
  for (std::size_t k = 0; k < d; ++k)
    for (const auto& e : a.comult().column(k)) comult[k][e.index / d][e.index % d] = to_string(e.value);
  return Json{{"label", a.label()}, {"dim", d}, {"mult", mult}, {"comult", comult}};
}

inline CondensationAlgebra algebra_from_json(const Json& j) {
  detail::require_keys(j, "algebra", {"dim", "mult", "comult"}, {"label"});
  const std::size_t d = detail::size_from_json(j["dim"], "algebra.dim");
  std::string label = "A";
  if (j.contains("label")) {
    if (!j["label"].is_string()) throw InputError("algebra.label: expected a string");
    label = j["label"].get<std::string>();
  }
  detail::Triplets mt, ct;
  detail::read_tensor3(j["mult"], d, d, d, "algebra.mult", [&](std::size_t i, std::size_t jj, std::size_t k, Scalar v) {
    mt.push_back({{k, i * d + jj}, std::move(v)});
  });
  detail::read_tensor3(j["comult"], d, d, d, "algebra.comult",
                       [&](std::size_t k, std::size_t i, std::size_t jj, Scalar v) {
                         ct.push_back({{i * d + jj, k}, std::move(v)});
                       });
  return CondensationAlgebra(d, SparseMatrix::from_triplets(d, d * d, std::move(mt)),
                             SparseMatrix::from_triplets(d * d, d, std::move(ct)), std::move(label));
}

// ---------------------------------------------------------------------------
// Files

inline std::string canonical_dump(const Json& j) { return j.dump(1) + "\n"; }

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const Json::parse_error& e) {
    throw InputError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

inline void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << canonical_dump(j);
}

inline CondensationAlgebra load_algebra(const std::filesystem::path& path) {
  try {
    return algebra_from_json(read_json_file(path));
  } catch (const InputError& e) {
    throw InputError(path.filename().string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Bimodules: lact[i][m][m'], ract[m][j][m'], lcoact[m][i][m'], rcoact[m][m'][j].
// "left"/"right" hold either an inline algebra or a path relative to the
// bimodule file.

/// A bimodule together with the JSON of its algebra references, so that a
/// loaded file re-serializes to the same bytes.
struct LoadedBimodule {
  CondensationBimodule bimodule;
  Json left_ref;
  Json right_ref;
};

inline Json bimodule_to_json(const CondensationBimodule& m, Json left_ref = nullptr, Json right_ref = nullptr) {
  const std::size_t a = m.left().dim(), b = m.right().dim(), n = m.dim();
  Json lact = detail::zero_tensor3(a, n, n), ract = detail::zero_tensor3(n, b, n);
  Json lcoact = detail::zero_tensor3(n, a, n), rcoact = detail::zero_tensor3(n, n, b);
  for (std::size_t col = 0; col < a * n; ++col)
    for (const auto& e : m.lact().column(col)) lact[col / n][col % n][e.index] = to_string(e.value);
  for (std::size_t col = 0; col < n * b; ++col)
    for (const auto& e : m.ract().column(col)) ract[col / b][col % b][e.index] = to_string(e.value);
  for (std::size_t x = 0; x < n; ++x) {
    for (const auto& e : m.lcoact().column(x)) lcoact[x][e.index / n][e.index % n] = to_string(e.value);
    for (const auto& e : m.rcoact().column(x)) rcoact[x][e.index / b][e.index % b] = to_string(e.value);
  }
  return Json{{"left", left_ref.is_null() ? algebra_to_json(m.left()) : std::move(left_ref)},
              {"right", right_ref.is_null() ? algebra_to_json(m.right()) : std::move(right_ref)},
              {"dim", n},
              {"lact", lact},
              {"ract", ract},
              {"lcoact", lcoact},
              {"rcoact", rcoact}};
}

inline LoadedBimodule bimodule_from_json(const Json& j, const std::filesystem::path& base_dir = {}) {
  detail::require_keys(j, "bimodule", {"left", "right", "dim", "lact", "ract", "lcoact", "rcoact"});
  const auto resolve = [&](const Json& ref, const char* side) -> AlgebraPtr {
    if (ref.is_string()) return share(load_algebra(base_dir / ref.get<std::string>()));
    if (ref.is_object()) return share(algebra_from_json(ref));
    throw InputError(std::string("bimodule.") + side + ": expected an algebra object or a file reference");
  };
  const AlgebraPtr A = resolve(j["left"], "left");
  const AlgebraPtr B = resolve(j["right"], "right");
  const std::size_t a = A->dim(), b = B->dim();
  const std::size_t n = detail::size_from_json(j["dim"], "bimodule.dim");
  detail::Triplets lt, rt, lct, rct;
  detail::read_tensor3(j["lact"], a, n, n, "bimodule.lact", [&](std::size_t i, std::size_t m, std::size_t mp, Scalar v) {
    lt.push_back({{mp, i * n + m}, std::move(v)});
  });
  detail::read_tensor3(j["ract"], n, b, n, "bimodule.ract", [&](std::size_t m, std::size_t jj, std::size_t mp, Scalar v) {
    rt.push_back({{mp, m * b + jj}, std::move(v)});
  });
  detail::read_tensor3(j["lcoact"], n, a, n, "bimodule.lcoact",
                       [&](std::size_t m, std::size_t i, std::size_t mp, Scalar v) {
                         lct.push_back({{i * n + mp, m}, std::move(v)});
                       });
  detail::read_tensor3(j["rcoact"], n, n, b, "bimodule.rcoact",
                       [&](std::size_t m, std::size_t mp, std::size_t jj, Scalar v) {
                         rct.push_back({{mp * b + jj, m}, std::move(v)});
                       });
  CondensationBimodule m(A, B, n, SparseMatrix::from_triplets(n, a * n, std::move(lt)),
                         SparseMatrix::from_triplets(n, n * b, std::move(rt)),
                         SparseMatrix::from_triplets(a * n, n, std::move(lct)),
                         SparseMatrix::from_triplets(n * b, n, std::move(rct)));
  return {std::move(m), j["left"].is_string() ? j["left"] : Json(nullptr),
          j["right"].is_string() ? j["right"] : Json(nullptr)};
}

inline LoadedBimodule load_bimodule(const std::filesystem::path& path) {
  try {
    return bimodule_from_json(read_json_file(path), path.parent_path());
  } catch (const InputError& e) {
    throw InputError(path.filename().string() + ": " + e.what());
  }
}

/// Re-serializes a loaded bimodule, keeping file references in place.
inline Json bimodule_to_json(const LoadedBimodule& m) { return bimodule_to_json(m.bimodule, m.left_ref, m.right_ref); }

// ---------------------------------------------------------------------------
// Verdicts

inline Json witness_to_json(const Witness& w) {
  Json idx = Json::array();
  for (std::size_t i : w.indices) idx.push_back(i);
  return Json{{"indices", idx}, {"lhs", to_string(w.lhs)}, {"rhs", to_string(w.rhs)}, {"note", w.note}};
}

inline Json check_to_json(const AxiomCheck& c) {
  Json j{{"name", c.name}, {"pass", c.pass}};
  j["witness"] = c.witness ? witness_to_json(*c.witness) : Json(nullptr);
  return j;
}

inline Json checks_to_json(const std::vector<const AxiomCheck*>& checks) {
  Json out = Json::array();
  for (const AxiomCheck* c : checks) out.push_back(check_to_json(*c));
  return out;
}

inline Json checks_to_json(const std::vector<AxiomCheck>& checks) {
  Json out = Json::array();
  for (const auto& c : checks) out.push_back(check_to_json(c));
  return out;
}

/// Witness of the first failing check, tagged with the check name; null if all pass.
inline Json first_witness(const std::vector<const AxiomCheck*>& checks) {
  for (const AxiomCheck* c : checks) {
    if (c->pass) continue;
    Json w = c->witness ? witness_to_json(*c->witness) : Json::object();
    w["check"] = c->name;
    return w;
  }
  return nullptr;
}

inline Json first_witness(const std::vector<AxiomCheck>& checks) {
  std::vector<const AxiomCheck*> ptrs;
  for (const auto& c : checks) ptrs.push_back(&c);
  return first_witness(ptrs);
}

inline Json intertwiner_to_json(const Intertwiner& t) {
  return Json{{"source_dim", t.source.dim()}, {"target_dim", t.target.dim()}, {"map", matrix_to_json(t.map)}};
}

/// {"op", "verdict", "witness", "paper_ref", "details"}.
inline Json make_report(std::string op, bool verdict, Json witness, std::string anchor, Json details = Json::object()) {
  return Json{{"op", std::move(op)},
              {"verdict", verdict},
              {"witness", std::move(witness)},
              {"paper_ref", std::move(anchor)},
              {"details", std::move(details)}};
}

}  // namespace condensate
