// Regenerates the fixture directory from the catalog constructors.
#include <filesystem>
#include <fstream>
#include <iostream>

#include "condensate/catalog.hpp"
#include "condensate/json_io.hpp"

namespace fs = std::filesystem;
using namespace condensate;

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures <dir>\n";
    return 2;
  }
  const fs::path dir = argv[1];
  fs::create_directories(dir);
  for (const auto& a : catalog::all_algebras()) write_json_file(dir / (a.name + ".algebra.json"), algebra_to_json(a.algebra));
  write_json_file(dir / "m2_unscaled.algebra.json", algebra_to_json(catalog::unscaled_m2()));

  const AlgebraPtr m2 = share(matrix_algebra(2).relabeled("M2(Q)"));
  const AlgebraPtr q = share(unit_algebra());
  const AlgebraPtr z2 = share(group_algebra(cyclic_group(2), "Q[Z2]"));
  write_json_file(dir / "m2_row.bimodule.json", bimodule_to_json(catalog::row_module(m2, q), "q.algebra.json", "m2.algebra.json"));
  write_json_file(dir / "m2_column.bimodule.json",
                  bimodule_to_json(catalog::column_module(m2, q), "m2.algebra.json", "q.algebra.json"));
  write_json_file(dir / "z2_scaled_coaction.bimodule.json",
                  bimodule_to_json(catalog::scaled_coaction(z2), "q_z2.algebra.json", "q_z2.algebra.json"));

  // The ε idempotent of row ⊗ column, for the split verb.
  write_json_file(dir / "m2_row_column.epsilon.json",
                  matrix_to_json(tensor_epsilon(catalog::row_module(m2, q), catalog::column_module(m2, q))));

  std::ofstream(dir / "malformed.algebra.json") << "{\"dim\": 2, \"label\": \"broken\", \"mult\": [[[\"1\", 0.5]]], \"comult\": []}\n";
  return 0;
}
