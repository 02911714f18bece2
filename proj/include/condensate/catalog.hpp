#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "condensate/algebra.hpp"
#include "condensate/bimodule.hpp"

namespace condensate::catalog {

struct NamedAlgebra {
  std::string name;  ///< fixture stem
  CondensationAlgebra algebra;
};

/// The eight battery algebras, sorted by fixture name.
inline std::vector<NamedAlgebra> battery_algebras() {
  return {
      {"m2", matrix_algebra(2).relabeled("M2(Q)")},
      {"m3", matrix_algebra(3).relabeled("M3(Q)")},
      {"q", unit_algebra()},
      {"q_plus_m2", direct_sum(unit_algebra(), matrix_algebra(2)).relabeled("Q+M2(Q)")},
      {"q_s3", group_algebra(symmetric_group(3), "Q[S3]")},
      {"q_z2", group_algebra(cyclic_group(2), "Q[Z2]")},
      {"q_z3", group_algebra(cyclic_group(3), "Q[Z3]")},
      {"span", nonunital_row_ideal()},
  };
}

/// Battery algebras plus the extra chain algebra Q+Q.
inline std::vector<NamedAlgebra> all_algebras() {
  auto out = battery_algebras();
  out.push_back({"q_plus_q", direct_sum(unit_algebra(), unit_algebra()).relabeled("Q+Q")});
  return out;
}

/// M2 with Δ(E_ij) = Σ_k E_ik⊗E_kj, so that m∘Δ = 2·id.
inline CondensationAlgebra unscaled_m2() {
  const CondensationAlgebra m2 = matrix_algebra(2);
  return CondensationAlgebra(4, m2.mult(), Scalar(2) * m2.comult(), "M2(Q) unscaled");
}

/// Column vectors Q² as an (M2, Q) bimodule.
inline CondensationBimodule column_module(const AlgebraPtr& m2, const AlgebraPtr& q = trivial_algebra()) {
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, Scalar>> t;
  // E_ij·e_j = e_i
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) t.push_back({{i, (i * 2 + j) * 2 + j}, Scalar(1)});
  return with_induced_coactions(m2, q, 2, SparseMatrix::from_triplets(2, 8, std::move(t)), SparseMatrix::identity(2));
}

/// Row vectors Q² as a (Q, M2) bimodule.
inline CondensationBimodule row_module(const AlgebraPtr& m2, const AlgebraPtr& q = trivial_algebra()) {
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, Scalar>> t;
  // e_i·E_ij = e_j
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) t.push_back({{j, i * 4 + (i * 2 + j)}, Scalar(1)});
  return with_induced_coactions(q, m2, 2, SparseMatrix::identity(2), SparseMatrix::from_triplets(2, 8, std::move(t)));
}

/// Regular Z/2 bimodule with its left coaction doubled.
inline CondensationBimodule scaled_coaction(const AlgebraPtr& z2) {
  const CondensationBimodule r = regular_bimodule(z2);
  return {z2, z2, r.dim(), r.lact(), r.ract(), Scalar(2) * r.lcoact(), r.rcoact()};
}

}  // namespace condensate::catalog
