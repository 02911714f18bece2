#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "condensate/algebra.hpp"
#include "condensate/catalog.hpp"
#include "oracle.hpp"

using namespace condensate;

namespace {

/// Conjugacy classes of a group given by its Cayley table, counted directly.
std::size_t class_count(const CayleyTable& t) {
  const std::size_t n = t.size();
  std::size_t e = 0;
  while (!std::all_of(t[e].begin(), t[e].end(), [&, i = std::size_t{0}](std::size_t x) mutable { return x == i++; }))
    ++e;
  std::vector<std::size_t> inv(n);
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h)
      if (t[g][h] == e) inv[g] = h;
  std::vector<int> cls(n, -1);
  int next = 0;
  for (std::size_t x = 0; x < n; ++x) {
    if (cls[x] >= 0) continue;
    for (std::size_t g = 0; g < n; ++g) cls[t[t[g][x]][inv[g]]] = next;
    ++next;
  }
  return static_cast<std::size_t>(next);
}

SparseMatrix random_invertible(std::mt19937& rng, std::size_t d) {
  while (true) {
    auto m = oracle::random_matrix(rng, d, d, -2, 2);
    if (!oracle::inverse(m).empty()) return oracle::to_sparse(m, d);
  }
}

}  // namespace

TEST(Algebra, BatteryPassesAllAxioms) {
  for (const auto& a : catalog::all_algebras()) {
    const AxiomReport r = check_condensation_algebra(a.algebra);
    EXPECT_TRUE(r.pass()) << a.name;
    for (const AxiomCheck* c : r.checks()) EXPECT_FALSE(c->witness) << a.name << " " << c->name;
  }
}

TEST(Algebra, UnitAlgebraExample) {
  const CondensationAlgebra q = unit_algebra();
  EXPECT_EQ(q.dim(), 1u);
  EXPECT_EQ(q.mult_coeff(0, 0, 0), 1);
  EXPECT_EQ(q.comult_coeff(0, 0, 0), 1);
  EXPECT_TRUE(check_condensation_algebra(q).pass());
}

TEST(Algebra, GroupAlgebraMatchesCayleyTable) {
  const CayleyTable z3 = cyclic_group(3);
  const CondensationAlgebra a = group_algebra(z3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_EQ(a.mult_coeff(i, j, k), Scalar(k == (i + j) % 3 ? 1 : 0));
        // Δ(g) = (1/|G|) Σ_h h ⊗ h⁻¹g
        EXPECT_EQ(a.comult_coeff(k, i, j), Scalar((i + j) % 3 == k ? Scalar(1, 3) : Scalar(0)));
      }
}

TEST(Algebra, SymmetricGroupTableIsAGroup) {
  const CayleyTable s3 = symmetric_group(3);
  ASSERT_EQ(s3.size(), 6u);
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = 0; b < 6; ++b)
      for (std::size_t c = 0; c < 6; ++c) EXPECT_EQ(s3[s3[a][b]][c], s3[a][s3[b][c]]);
  EXPECT_EQ(class_count(s3), 3u);
}

TEST(Algebra, MatrixUnitsMultiply) {
  const CondensationAlgebra m = matrix_algebra(3);
  // E_ij E_kl = δ_jk E_il with index i·3+j.
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t l = 0; l < 3; ++l)
          for (std::size_t out = 0; out < 9; ++out)
            EXPECT_EQ(m.mult_coeff(i * 3 + j, k * 3 + l, out), Scalar(j == k && out == i * 3 + l ? 1 : 0));
}

TEST(Algebra, UnscaledMatrixComultiplicationFailsSpecialnessWithDocumentedWitness) {
  const AxiomReport r = check_condensation_algebra(catalog::unscaled_m2());
  EXPECT_FALSE(r.pass());
  ASSERT_FALSE(r.specialness.pass);
  ASSERT_TRUE(r.specialness.witness);
  EXPECT_EQ(r.specialness.witness->note, "m∘Δ = 2·id");
  EXPECT_EQ(r.specialness.witness->lhs, 2);
  EXPECT_EQ(r.specialness.witness->rhs, 1);
  EXPECT_TRUE(r.associativity.pass);
  EXPECT_TRUE(r.frobenius.pass);
}

TEST(Algebra, NonassociativeWitnessPointsAtFailingEntry) {
  // b0·b0 = b1, everything else zero: (b0 b0) b0 = 0, b0 (b0 b0) = 0, but
  // with b1·b0 = b0 the two sides differ.
  SparseMatrix mult = SparseMatrix::from_triplets(2, 4, {{{1, 0}, 1}, {{0, 2}, 1}});
  const CondensationAlgebra a(2, mult, SparseMatrix(4, 2), "bad");
  const AxiomReport r = check_condensation_algebra(a);
  EXPECT_FALSE(r.associativity.pass);
  ASSERT_TRUE(r.associativity.witness);
  EXPECT_EQ(r.associativity.witness->indices.size(), 4u);
  EXPECT_NE(r.associativity.witness->lhs, r.associativity.witness->rhs);
}

TEST(Algebra, ShapeErrorsAreInputErrors) {
  EXPECT_THROW(CondensationAlgebra(2, SparseMatrix(2, 3), SparseMatrix(4, 2), "x"), InputError);
  EXPECT_THROW(CondensationAlgebra(2, SparseMatrix(2, 4), SparseMatrix(4, 3), "x"), InputError);
  EXPECT_THROW(group_algebra({{0, 1}, {0, 1}}), InputError);
  EXPECT_THROW(twist(unit_algebra(), SparseMatrix::identity(2)), InputError);
}

TEST(Algebra, ZeroAlgebraIsACondensationAlgebra) {
  EXPECT_TRUE(check_condensation_algebra(zero_algebra()).pass());
  EXPECT_EQ(zero_algebra().dim(), 0u);
}

TEST(Algebra, TwistsPreserveTheAxiomsAndTheCenterDimension) {
  std::mt19937 rng(43);
  for (const auto& a : catalog::battery_algebras()) {
    for (int k = 0; k < 3; ++k) {
      const SparseMatrix t = random_invertible(rng, a.algebra.dim());
      const CondensationAlgebra b = twist(a.algebra, t);
      EXPECT_TRUE(check_condensation_algebra(b).pass()) << a.name;
      EXPECT_EQ(center(b).cols(), center(a.algebra).cols()) << a.name;
      EXPECT_EQ(find_unit(b).has_value(), find_unit(a.algebra).has_value()) << a.name;
    }
  }
}

TEST(Algebra, TwistByIdentityIsStructurallyEqual) {
  const CondensationAlgebra a = group_algebra(symmetric_group(3));
  EXPECT_EQ(twist(a, SparseMatrix::identity(6)), a);
}

TEST(Algebra, CentersMatchClassCounts) {
  EXPECT_EQ(center(group_algebra(symmetric_group(3))).cols(), class_count(symmetric_group(3)));
  EXPECT_EQ(center(group_algebra(cyclic_group(3))).cols(), 3u);
  EXPECT_EQ(center(matrix_algebra(2)).cols(), 1u);
  EXPECT_EQ(center(matrix_algebra(3)).cols(), 1u);
  EXPECT_EQ(center(direct_sum(unit_algebra(), matrix_algebra(2))).cols(), 2u);
  EXPECT_EQ(center(nonunital_row_ideal()).cols(), 0u);
}

TEST(Algebra, UnitsExistExactlyForUnitalBattery) {
  for (const auto& a : catalog::all_algebras()) {
    const auto u = find_unit(a.algebra);
    EXPECT_EQ(u.has_value(), a.name != "span") << a.name;
    if (!u) continue;
    const SparseMatrix uc = as_column(*u);
    const SparseMatrix id = SparseMatrix::identity(a.algebra.dim());
    EXPECT_EQ(a.algebra.mult() * kron(uc, id), id) << a.name;
    EXPECT_EQ(a.algebra.mult() * kron(id, uc), id) << a.name;
  }
}

TEST(Algebra, SeparabilityIdempotentRequiresUnit) {
  EXPECT_THROW(separability_idempotent(nonunital_row_ideal()), PreconditionError);
  const auto p = separability_idempotent(matrix_algebra(2));
  EXPECT_EQ(p.size(), 16u);
}

TEST(Algebra, OppositeAndTensorProductsStayInTheClass) {
  const CondensationAlgebra m2 = matrix_algebra(2);
  const CondensationAlgebra z2 = group_algebra(cyclic_group(2));
  for (const auto& a : {opposite(m2), tensor_product(m2, opposite(m2)), tensor_product(z2, nonunital_row_ideal()),
                        direct_sum(z2, nonunital_row_ideal())})
    EXPECT_TRUE(check_condensation_algebra(a).pass()) << a.label();
  EXPECT_EQ(opposite(opposite(m2)), m2);
  // Commutative algebras are their own opposites.
  EXPECT_EQ(opposite(z2), z2);
}

TEST(Algebra, LeftAndRightMultiplicationOperators) {
  const CondensationAlgebra m2 = matrix_algebra(2);
  // L_x L_y = L_{xy} on basis elements: E_01 E_10 = E_00.
  EXPECT_EQ(left_multiplication(m2, 1) * left_multiplication(m2, 2), left_multiplication(m2, 0));
  EXPECT_EQ(right_multiplication(m2, 2) * right_multiplication(m2, 1), right_multiplication(m2, 0));
}
