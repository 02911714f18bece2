#pragma once

#include <CLI11.hpp>

#include <cstddef>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include "condensate/battery.hpp"
#include "condensate/bimodule.hpp"
#include "condensate/errors.hpp"
#include "condensate/exactlin.hpp"
#include "condensate/hamiltonian.hpp"
#include "condensate/json_io.hpp"
#include "condensate/karoubi.hpp"

namespace condensate::cli {

enum Exit : int { ok = 0, math_failure = 1, malformed = 2, resource = 3 };

namespace fs = std::filesystem;

namespace detail {

inline bool is_bimodule_json(const Json& j) { return j.is_object() && j.contains("lact"); }

inline Json iso_json(const IsoResult& r) {
  Json j{{"verdict", r.verdict}, {"hom_mn", r.hom_mn}, {"hom_mm", r.hom_mm}, {"hom_nn", r.hom_nn}};
  j["witness"] = r.witness ? matrix_to_json(*r.witness) : Json(nullptr);
  return j;
}

inline Json morita_witness_json(const MoritaWitness& w) {
  return Json{{"m", bimodule_to_json(w.m)},
              {"n", bimodule_to_json(w.n)},
              {"iso1", intertwiner_to_json(w.iso1)},
              {"iso2", intertwiner_to_json(w.iso2)}};
}

inline int emit(std::ostream& out, const Json& report) {
  out << canonical_dump(report);
  return report["verdict"].get<bool>() ? ok : math_failure;
}

inline int cmd_check(const std::string& path, std::ostream& out) {
  const Json j = read_json_file(path);
  if (is_bimodule_json(j)) {
    const LoadedBimodule m = bimodule_from_json(j, fs::path(path).parent_path());
    const BimoduleReport r = check_condensation_bimodule(m.bimodule);
    return emit(out, make_report("check_condensation_bimodule", r.pass(), first_witness(r.checks),
                                 "condensation bimodule axioms", Json{{"checks", checks_to_json(r.checks)}}));
  }
  const CondensationAlgebra a = algebra_from_json(j);
  const AxiomReport r = check_condensation_algebra(a);
  return emit(out, make_report("check_condensation_algebra", r.pass(), first_witness(r.checks()),
                               "condensation algebra axioms",
                               Json{{"label", a.label()}, {"checks", checks_to_json(r.checks())}}));
}

inline int cmd_split(const std::string& path, unsigned variant, std::ostream& out) {
  const SparseMatrix p = matrix_from_json(read_json_file(path));
  if (!p.is_square()) throw InputError("split: matrix is not square");
  try {
    const SparseSplit s = split_idempotent(p, pivot_order(p.rows(), variant));
    return emit(out, make_report("split_idempotent", true, nullptr, "splitting of idempotents",
                                 Json{{"rank", s.rank()}, {"f", matrix_to_json(s.f)}, {"g", matrix_to_json(s.g)}}));
  } catch (const PreconditionError& e) {
    return emit(out, make_report("split_idempotent", false, Json{{"note", e.what()}}, "splitting of idempotents"));
  }
}

inline int cmd_tensor(const std::string& p1, const std::string& p2, std::ostream& out) {
  const LoadedBimodule m1 = load_bimodule(p1), m2 = load_bimodule(p2);
  for (const auto* m : {&m1, &m2}) {
    const BimoduleReport r = check_condensation_bimodule(m->bimodule);
    if (!r.pass())
      return emit(out, make_report("tensor_over", false, first_witness(r.checks), "relative tensor product"));
  }
  if (!same_algebra(m1.bimodule.right_ptr(), m2.bimodule.left_ptr()))
    throw InputError("tensor: right algebra of the first bimodule differs from the left algebra of the second");
  const TensorProduct t = tensor_over_split(m1.bimodule, m2.bimodule);
  Json details{{"rank_epsilon", t.split.rank()}, {"bimodule", bimodule_to_json(t.bimodule)}};
  if (find_unit(m1.bimodule.right())) details["coequalizer_dim"] = coequalizer_oracle(m1.bimodule, m2.bimodule);
  return emit(out, make_report("tensor_over", true, nullptr, "relative tensor product", details));
}

inline int cmd_unitalize(const std::string& path, std::ostream& out) {
  const CondensationAlgebra a = load_algebra(path);
  const AxiomReport r = check_condensation_algebra(a);
  if (!r.pass()) return emit(out, make_report("unitalize", false, first_witness(r.checks()), "unitalization"));
  const SigmaObject e(a);
  const Unitalization u = unitalize(e);
  const bool verified = verify_morita_witness(u.witness);
  Json details{{"input_dim", a.dim()},
               {"unital", algebra_to_json(u.unital.algebra())},
               {"witness_verified", verified}};
  if (find_unit(a)) details["isomorphic_to_input"] = unital_comparison(e, u).has_value();
  return emit(out, make_report("unitalize", verified, morita_witness_json(u.witness), "unitalization", details));
}

inline int cmd_morita(const std::string& pa, const std::string& pb, std::ostream& out) {
  const CondensationAlgebra a = load_algebra(pa), b = load_algebra(pb);
  for (const auto* x : {&a, &b}) {
    const AxiomReport r = check_condensation_algebra(*x);
    if (!r.pass()) return emit(out, make_report("morita_equivalent", false, first_witness(r.checks()), "Morita equivalence"));
  }
  const MoritaResult r = morita_equivalent(SigmaObject(a), SigmaObject(b));
  const bool verified = r.witness && verify_morita_witness(*r.witness);
  return emit(out, make_report("morita_equivalent", r.verdict,
                               r.witness ? morita_witness_json(*r.witness) : Json(nullptr), "Morita equivalence",
                               Json{{"inventory_a", battery::detail::sizes(r.inventory_a)},
                                    {"inventory_b", battery::detail::sizes(r.inventory_b)},
                                    {"witness_verified", verified}}));
}

inline int cmd_dual(const std::string& path, std::ostream& out) {
  const Json j = read_json_file(path);
  if (is_bimodule_json(j)) {
    const LoadedBimodule m = bimodule_from_json(j, fs::path(path).parent_path());
    const BimoduleReport r = check_condensation_bimodule(m.bimodule);
    if (!r.pass()) return emit(out, make_report("dual_bimodule", false, first_witness(r.checks), "dual bimodule"));
    const DualResult d = dual_bimodule(m.bimodule);
    const ZigzagVerdict z = zigzag_check(m.bimodule, d.dual, d.unit, d.counit);
    return emit(out, make_report("dual_bimodule", z.pass(),
                                 Json{{"dual", bimodule_to_json(d.dual)},
                                      {"unit", intertwiner_to_json(d.unit)},
                                      {"counit", intertwiner_to_json(d.counit)}},
                                 "dual bimodule", Json{{"zigzag_first", z.first}, {"zigzag_second", z.second}}));
  }
  const CondensationAlgebra a = algebra_from_json(j);
  const AxiomReport r = check_condensation_algebra(a);
  if (!r.pass()) return emit(out, make_report("dual_object", false, first_witness(r.checks()), "dual object"));
  const DualObject d = dual_object(SigmaObject(a));
  return emit(out, make_report("dual_object", d.snake_a && d.snake_op,
                               Json{{"opposite", algebra_to_json(d.opposite.algebra())},
                                    {"ev", bimodule_to_json(d.ev)},
                                    {"coev", bimodule_to_json(d.coev)}},
                               "dual object", Json{{"snake_a", d.snake_a}, {"snake_op", d.snake_op}}));
}

inline int cmd_chain(const std::string& path, std::size_t length, bool periodic, bool no_basis,
                     std::optional<std::size_t> cap, std::ostream& out) {
  const CondensationAlgebra a = load_algebra(path);
  const AxiomReport ar = check_condensation_algebra(a);
  if (!ar.pass()) return emit(out, make_report("chain", false, first_witness(ar.checks()), "commuting-projector chain"));
  ChainSpec spec{share(a), length, periodic ? Boundary::periodic : Boundary::open};
  if (cap) spec.cap = *cap;
  const ChainReport r = ground_space(spec);
  Json details{{"algebra", a.label()},
               {"length", length},
               {"boundary", to_string(spec.boundary)},
               {"total_dim", r.total_dim},
               {"projector_count", r.projector_count},
               {"commuting", r.commuting.pass},
               {"projectors_idempotent", r.projectors_idempotent},
               {"ground_dim", r.ground_dim}};
  if (r.commuting.pair) details["noncommuting_pair"] = Json::array({r.commuting.pair->first, r.commuting.pair->second});
  if (find_unit(a)) details["predicted_ground_dim"] = predicted_ground_dim(spec);
  if (!no_basis) details["ground_basis"] = matrix_to_json(r.ground_basis);
  const bool pass = r.commuting.pass && r.projectors_idempotent;
  return emit(out, make_report("chain", pass, r.commuting.witness ? witness_to_json(*r.commuting.witness) : Json(nullptr),
                               "commuting-projector chain", details));
}

inline int cmd_battery(const std::string& dir, const std::string& filter, unsigned threads, std::ostream& out,
                       std::ostream& err) {
  battery::Fixtures fx = battery::load_fixtures(dir);
  const battery::BatteryResult r = battery::run_battery(fx, filter, threads);
  for (const auto& o : r.outcomes)
    err << "criterion " << std::setw(2) << o.id << " " << std::left << std::setw(22) << o.name << std::right
        << (o.pass ? "PASS" : "FAIL") << "  " << o.items - o.failed << "/" << o.items << " items  " << std::fixed
        << std::setprecision(2) << o.seconds << " s\n";
  out << canonical_dump(r.report);
  return r.pass() ? ok : math_failure;
}

inline Json error_report(const std::string& verb, const std::string& kind, const std::string& message) {
  return Json{{"op", verb}, {"verdict", false}, {"error", Json{{"kind", kind}, {"message", message}}}};
}

}  // namespace detail

/// Parses the command line and runs one verb. JSON goes to `out`,
/// diagnostics to `err`. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact condensation toolkit over the rationals", "condensate"};
  app.require_subcommand(1, 1);

  std::string path, path2, fixtures = "fixtures", filter;
  unsigned variant = 0, threads = 0;
  std::size_t length = 2;
  bool periodic = false, no_basis = false;
  std::optional<std::size_t> cap;

  auto* check = app.add_subcommand("check", "Check the axioms of an algebra or bimodule file");
  check->add_option("file", path, "algebra or bimodule JSON")->required();
  auto* split = app.add_subcommand("split", "Split an idempotent matrix");
  split->add_option("file", path, "matrix JSON")->required();
  split->add_option("--order", variant, "pivot visiting order 0-4")->check(CLI::Range(0u, 4u));
  auto* tensor = app.add_subcommand("tensor", "Relative tensor product of two bimodules");
  tensor->add_option("first", path, "bimodule over (A, B)")->required();
  tensor->add_option("second", path2, "bimodule over (B, C)")->required();
  auto* unital = app.add_subcommand("unitalize", "Unital Morita-equivalent replacement of an algebra");
  unital->add_option("file", path, "algebra JSON")->required();
  auto* morita = app.add_subcommand("morita", "Decide Morita equivalence of two algebras");
  morita->add_option("first", path, "algebra JSON")->required();
  morita->add_option("second", path2, "algebra JSON")->required();
  auto* dual = app.add_subcommand("dual", "Dual of a bimodule, or dual object of an algebra");
  dual->add_option("file", path, "algebra or bimodule JSON")->required();
  auto* chain = app.add_subcommand("chain", "Ground space of the commuting-projector chain");
  chain->add_option("--algebra", path, "algebra JSON")->required();
  chain->add_option("--length", length, "number of sites")->check(CLI::PositiveNumber);
  chain->add_flag("--periodic", periodic, "periodic boundary");
  chain->add_flag("--no-basis", no_basis, "omit the ground-space basis");
  chain->add_option("--cap", cap, "dimension cap (default 10000 or CONDENSATE_DIM_CAP)")->check(CLI::PositiveNumber);
  auto* bat = app.add_subcommand("battery", "Run the acceptance battery");
  bat->add_option("--fixtures", fixtures, "fixture directory");
  bat->add_option("--filter", filter, "substring of criterion name or module");
  bat->add_option("--threads", threads, "worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return malformed;
  }

  const std::string verb = app.get_subcommands().front()->get_name();
  try {
    if (verb == "check") return detail::cmd_check(path, out);
    if (verb == "split") return detail::cmd_split(path, variant, out);
    if (verb == "tensor") return detail::cmd_tensor(path, path2, out);
    if (verb == "unitalize") return detail::cmd_unitalize(path, out);
    if (verb == "morita") return detail::cmd_morita(path, path2, out);
    if (verb == "dual") return detail::cmd_dual(path, out);
    if (verb == "chain") return detail::cmd_chain(path, length, periodic, no_basis, cap, out);
    if (verb == "battery") return detail::cmd_battery(fixtures, filter, threads, out, err);
  } catch (const InputError& e) {
    err << "condensate " << verb << ": " << e.what() << "\n";
    out << canonical_dump(detail::error_report(verb, "malformed input", e.what()));
    return malformed;
  } catch (const ResourceError& e) {
    err << "condensate " << verb << ": " << e.what() << "\n";
    Json rep = detail::error_report(verb, "resource cap", e.what());
    rep["error"]["required"] = e.required();
    out << canonical_dump(rep);
    return resource;
  } catch (const PreconditionError& e) {
    err << "condensate " << verb << ": " << e.what() << "\n";
    out << canonical_dump(detail::error_report(verb, "precondition", e.what()));
    return math_failure;
  } catch (const InternalError& e) {
    err << "condensate " << verb << ": internal error: " << e.what() << "\n";
    out << canonical_dump(detail::error_report(verb, "internal", e.what()));
    return math_failure;
  }
  return malformed;
}

}  // namespace condensate::cli
