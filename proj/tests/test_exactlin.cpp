#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "condensate/exactlin.hpp"
#include "condensate/scalar.hpp"
#include "oracle.hpp"

using namespace condensate;

namespace {

SparseMatrix dense(std::initializer_list<std::initializer_list<Scalar>> rows) {
  return SparseMatrix::from_dense(Matrix::from_rows(rows));
}

SparseMatrix random_sparse(std::mt19937& rng, std::size_t r, std::size_t c, int lo = -3, int hi = 3) {
  return oracle::to_sparse(oracle::random_matrix(rng, r, c, lo, hi), c);
}

/// Random idempotent S·diag(1,…,1,0,…,0)·S⁻¹ of the given rank.
SparseMatrix random_idempotent(std::mt19937& rng, std::size_t n, std::size_t r) {
  oracle::Dense s, si;
  do {
    s = oracle::random_matrix(rng, n, n, -2, 2);
    si = oracle::inverse(s);
  } while (si.empty());
  oracle::Dense d = oracle::zeros(n, n);
  for (std::size_t i = 0; i < r; ++i) d[i][i] = 1;
  return oracle::to_sparse(oracle::mul(oracle::mul(s, d, n, n), si, n, n), n);
}

}  // namespace

TEST(Scalar, ParsesCanonicalForms) {
  EXPECT_EQ(to_string(parse_scalar("2/4")), "1/2");
  EXPECT_EQ(to_string(parse_scalar("-6/3")), "-2");
  EXPECT_EQ(to_string(parse_scalar("0")), "0");
  EXPECT_EQ(to_string(parse_scalar("-0/5")), "0");
}

TEST(Scalar, RejectsMalformedText) {
  for (const char* bad : {"", "1/0", "1/", "/2", "1.5", "abc", "--1", "1/-2", " 1", "+1"})
    EXPECT_THROW(parse_scalar(bad), InputError) << bad;
}

TEST(Sparse, FromTripletsSumsDuplicatesAndDropsZeros) {
  const SparseMatrix m = SparseMatrix::from_triplets(2, 2, {{{0, 0}, 1}, {{0, 0}, 2}, {{1, 1}, 1}, {{1, 1}, -1}});
  EXPECT_EQ(m.at(0, 0), 3);
  EXPECT_EQ(m.nonzeros(), 1u);
}

TEST(Sparse, ProductMatchesDenseOracle) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t r = 1 + rng() % 6, k = 1 + rng() % 6, c = 1 + rng() % 6;
    const SparseMatrix a = random_sparse(rng, r, k), b = random_sparse(rng, k, c);
    const auto expect = oracle::mul(oracle::from_sparse(a), oracle::from_sparse(b), k, c);
    EXPECT_EQ(oracle::from_sparse(a * b), expect);
  }
}

TEST(Sparse, KronMatchesDenseOracleWithLeftFactorSlow) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t ar = 1 + rng() % 3, ac = 1 + rng() % 3, br = 1 + rng() % 3, bc = 1 + rng() % 3;
    const SparseMatrix a = random_sparse(rng, ar, ac), b = random_sparse(rng, br, bc);
    EXPECT_EQ(oracle::from_sparse(kron(a, b)), oracle::kron(oracle::from_sparse(a), ac, oracle::from_sparse(b), bc));
  }
}

TEST(Sparse, ApplyMiddleEqualsExplicitKron) {
  std::mt19937 rng(13);
  const SparseMatrix k = random_sparse(rng, 3, 2);
  const SparseMatrix x = random_sparse(rng, 4 * 2 * 5, 3);
  const SparseMatrix explicit_kron = kron(kron(SparseMatrix::identity(4), k), SparseMatrix::identity(5)) * x;
  EXPECT_EQ(apply_middle(k, 4, 5, x), explicit_kron);
  EXPECT_THROW(apply_middle(k, 4, 4, x), InputError);
}

TEST(Sparse, TensorPermutationSwapsFactors) {
  // Swapping two factors of dims (2, 3): index a·3+b ↦ b·2+a.
  const std::vector<std::size_t> dims{2, 3}, order{1, 0};
  const auto perm = tensor_permutation(dims, order);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 3; ++b) EXPECT_EQ(perm[a * 3 + b], b * 2 + a);
}

TEST(Sparse, PermutationHelpersAgreeWithPermutationMatrix) {
  std::mt19937 rng(17);
  std::vector<std::size_t> perm(6);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  const SparseMatrix p = permutation_matrix(perm);
  const SparseMatrix x = random_sparse(rng, 6, 6);
  EXPECT_EQ(permute_rows(perm, x), p * x);
  EXPECT_EQ(permute_columns(x, perm), x * p);
  // p·pᵀ = I
  EXPECT_EQ(p * p.transpose(), SparseMatrix::identity(6));
}

TEST(Exactlin, RankMatchesOracleOnRandomMatrices) {
  std::mt19937 rng(19);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t r = 1 + rng() % 7, c = 1 + rng() % 7;
    // Low-rank products exercise dependent rows.
    const std::size_t inner = 1 + rng() % 4;
    const SparseMatrix m = random_sparse(rng, r, inner) * random_sparse(rng, inner, c);
    EXPECT_EQ(rank(m), oracle::rank(oracle::from_sparse(m), c));
  }
}

TEST(Exactlin, KernelBasisIsAKernelOfFullDimension) {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t r = 1 + rng() % 6, c = 1 + rng() % 7;
    const SparseMatrix m = random_sparse(rng, r, 2) * random_sparse(rng, 2, c);
    const SparseMatrix k = kernel_basis(m);
    EXPECT_TRUE((m * k).is_zero());
    EXPECT_EQ(k.cols() + rank(m), c);
    EXPECT_EQ(rank(k), k.cols());
  }
}

TEST(Exactlin, KernelExample) {
  const SparseMatrix m = dense({{1, 2}, {2, 4}});
  const SparseMatrix k = kernel_basis(m);
  ASSERT_EQ(k.cols(), 1u);
  EXPECT_EQ(k.at(0, 0), -2);
  EXPECT_EQ(k.at(1, 0), 1);
}

TEST(Exactlin, SolveSetsFreeVariablesToZero) {
  const SparseMatrix a = dense({{1, 1, 0}});
  const SparseMatrix b = dense({{3}});
  const auto x = solve(a, b);
  ASSERT_TRUE(x);
  EXPECT_EQ(x->at(0, 0), 3);
  EXPECT_EQ(x->at(1, 0), 0);
  EXPECT_EQ(x->at(2, 0), 0);
}

TEST(Exactlin, SolveDetectsInconsistency) {
  EXPECT_FALSE(solve(dense({{1, 1}, {2, 2}}), dense({{1}, {3}})));
  EXPECT_THROW(solve(dense({{1, 1}}), dense({{1}, {2}})), InputError);
}

TEST(Exactlin, SolveRandomConsistentSystems) {
  std::mt19937 rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
    const SparseMatrix a = random_sparse(rng, r, c);
    const SparseMatrix b = a * random_sparse(rng, c, 2);
    const auto x = solve(a, b);
    ASSERT_TRUE(x);
    EXPECT_EQ(a * *x, b);
  }
}

TEST(Exactlin, InverseMatchesOracleAndRejectsSingular) {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = oracle::random_matrix(rng, 4, 4, -3, 3);
    const auto inv = oracle::inverse(d);
    const SparseMatrix m = oracle::to_sparse(d, 4);
    if (inv.empty()) {
      EXPECT_THROW(inverse(m), PreconditionError);
      EXPECT_FALSE(is_invertible(m));
    } else {
      EXPECT_EQ(oracle::from_sparse(inverse(m)), inv);
    }
  }
  EXPECT_THROW(inverse(dense({{1, 2, 3}})), InputError);
}

TEST(Exactlin, DenseWrappersAgreeWithSparse) {
  const Matrix m = Matrix::from_rows({{1, 2}, {3, 4}});
  EXPECT_EQ(rank(m), 2u);
  EXPECT_EQ(inverse(m) * m, Matrix::identity(2));
  EXPECT_EQ(kron(Matrix::identity(2), m).rows(), 4u);
}

TEST(Exactlin, PivotOrdersArePermutations) {
  for (std::size_t n : {0u, 1u, 2u, 5u, 9u, 16u})
    for (unsigned v = 0; v < 5; ++v) {
      auto o = pivot_order(n, v);
      std::sort(o.begin(), o.end());
      std::vector<std::size_t> id(n);
      std::iota(id.begin(), id.end(), 0);
      EXPECT_EQ(o, id) << n << " " << v;
    }
}

TEST(SplitIdempotent, ProjectionExample) {
  const Matrix p = Matrix::from_rows({{1, 0}, {0, 0}});
  const IdempotentSplit s = split_idempotent(p);
  EXPECT_EQ(s.rank(), 1u);
  EXPECT_EQ(s.g * s.f, p);
  EXPECT_EQ(s.f * s.g, Matrix::identity(1));
}

TEST(SplitIdempotent, ZeroAndIdentity) {
  EXPECT_EQ(split_idempotent(SparseMatrix(3, 3)).rank(), 0u);
  const SparseSplit s = split_idempotent(SparseMatrix::identity(3));
  EXPECT_EQ(s.rank(), 3u);
  EXPECT_EQ(s.f * s.g, SparseMatrix::identity(3));
}

TEST(SplitIdempotent, RandomIdempotentsUnderEveryPivotOrder) {
  std::mt19937 rng(37);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t n = 2 + rng() % 5, r = rng() % (n + 1);
    const SparseMatrix p = random_idempotent(rng, n, r);
    ASSERT_EQ(p * p, p);
    for (unsigned v = 0; v < 5; ++v) {
      const SparseSplit s = split_idempotent(p, pivot_order(n, v));
      EXPECT_EQ(s.rank(), r);
      EXPECT_EQ(s.g * s.f, p);
      EXPECT_EQ(s.f * s.g, SparseMatrix::identity(r));
    }
  }
}

TEST(SplitIdempotent, SplittingsAreRelatedByInvertibleComparison) {
  std::mt19937 rng(41);
  const SparseMatrix p = random_idempotent(rng, 6, 3);
  const SparseSplit a = split_idempotent(p, pivot_order(6, 0));
  const SparseSplit b = split_idempotent(p, pivot_order(6, 1));
  const SparseMatrix theta = b.f * a.g;
  EXPECT_EQ(theta * (a.f * b.g), SparseMatrix::identity(3));
  EXPECT_EQ(b.g * theta, a.g);
}

TEST(SplitIdempotent, RejectsNonIdempotent) {
  EXPECT_THROW(split_idempotent(Matrix::from_rows({{1, 1}, {0, 1}})), PreconditionError);
  EXPECT_THROW(split_idempotent(Matrix::from_rows({{2, 0}, {0, 0}})), PreconditionError);
  EXPECT_THROW(split_idempotent(Matrix::from_rows({{Scalar(1, 2), 0}, {0, Scalar(1, 2)}})), PreconditionError);
  // Trace 1 but not idempotent.
  EXPECT_THROW(split_idempotent(Matrix::from_rows({{1, 1}, {1, 0}})), PreconditionError);
  EXPECT_THROW(split_idempotent(Matrix::from_rows({{1, 0, 0}})), InputError);
}

TEST(SplitIdempotent, RejectsBadOrder) {
  const std::vector<std::size_t> order{0};
  EXPECT_THROW(split_idempotent(SparseMatrix::identity(2), order), InputError);
}
