#include <gtest/gtest.h>

#include <random>

#include "aybe/tensor.hpp"

using namespace aybe;

namespace {

MatA random_matrix(int n, std::mt19937_64& g) {
  std::normal_distribution<double> d;
  MatA m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cplx(d(g), d(g));
  return m;
}

Tensor2 random_tensor(int n, std::mt19937_64& g) {
  std::normal_distribution<double> d;
  Tensor2 t(n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) t.add(p, q, r, s, cplx(d(g), d(g)));
  return t;
}

// Acts on u (x) v (x) w stored as a flat vector by summing coefficients of
// basis tensors, independent of the Kronecker layout used by embed.
Vec apply_embedded(const Tensor2& t, int a, int b, const Vec& x) {
  const int n = t.n();
  Vec y = Vec::Zero(x.size());
  for (int i0 = 0; i0 < n; ++i0)
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2) {
        int in[3] = {i0, i1, i2};
        for (int p = 0; p < n; ++p)
          for (int r = 0; r < n; ++r) {
            int q = in[a - 1], s = in[b - 1];
            cplx k = t.coeff(p, q, r, s);
            if (k == cplx(0.0)) continue;
            int out[3] = {i0, i1, i2};
            out[a - 1] = p;
            out[b - 1] = r;
            y((out[0] * n + out[1]) * n + out[2]) += k * x((i0 * n + i1) * n + i2);
          }
      }
  return y;
}

}  // namespace

TEST(Tensor2, CoefficientLayout) {
  Tensor2 t(3);
  t.add(0, 1, 2, 0, cplx(2.0, 1.0));
  EXPECT_EQ(t.op_matrix()(0 * 3 + 2, 1 * 3 + 0), cplx(2.0, 1.0));
  EXPECT_EQ(t.pairing_matrix()(0 * 3 + 1, 2 * 3 + 0), cplx(2.0, 1.0));
  EXPECT_EQ(t.coeff(0, 1, 2, 0), cplx(2.0, 1.0));
  EXPECT_EQ(Tensor2::from_pairing(t.pairing_matrix()).op_matrix(), t.op_matrix());
}

TEST(Tensor2, ProductMatchesCoefficients) {
  std::mt19937_64 g(3);
  MatA a = random_matrix(3, g), b = random_matrix(3, g);
  Tensor2 t = Tensor2::product(a, b);
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q)
      for (int r = 0; r < 3; ++r)
        for (int s = 0; s < 3; ++s) EXPECT_NEAR(std::abs(t.coeff(p, q, r, s) - a(p, q) * b(r, s)), 0.0, 1e-14);
}

TEST(Tensor2, PermutationSwapsFactors) {
  std::mt19937_64 g(5);
  for (int n = 1; n <= 4; ++n) {
    MatA a = random_matrix(n, g), b = random_matrix(n, g);
    Tensor2 P = perm_P(n);
    EXPECT_LT(max_abs(P * P - unit2(n)), 1e-14);
    EXPECT_LT(max_abs(P * Tensor2::product(a, b) * P - Tensor2::product(b, a)), 1e-12);
    EXPECT_LT(max_abs(swap_factors(Tensor2::product(a, b)) - Tensor2::product(b, a)), 1e-14);
  }
}

TEST(Tensor2, DiagonalP0) {
  Tensor2 d = diag_P0(3);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(d.coeff(i, i, i, i), cplx(1.0));
  EXPECT_NEAR(std::abs(full_trace(d)), 3.0, 1e-14);
}

TEST(Tensor3, EmbedAgreesWithIndexOracle) {
  std::mt19937_64 g(7);
  for (int n = 1; n <= 3; ++n) {
    Tensor2 t = random_tensor(n, g);
    Vec x(n * n * n);
    for (int i = 0; i < x.size(); ++i) x(i) = cplx(std::normal_distribution<double>()(g), 0.3 * i);
    for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 2}, {1, 3}, {2, 3}, {2, 1}, {3, 1}, {3, 2}}) {
      Vec lhs = embed(t, a, b).op_matrix() * x;
      Vec rhs = apply_embedded(t, a, b, x);
      EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12) << "slots " << a << b << " n " << n;
    }
  }
}

TEST(Tensor3, EmbedRejectsBadSlots) {
  Tensor2 t(2);
  EXPECT_THROW(embed(t, 1, 1), std::invalid_argument);
  EXPECT_THROW(embed(t, 0, 2), std::invalid_argument);
  EXPECT_THROW(embed(t, 1, 4), std::invalid_argument);
}

TEST(Tensor3, ComposeIsAssociative) {
  std::mt19937_64 g(11);
  Tensor3 a = embed(random_tensor(2, g), 1, 2), b = embed(random_tensor(2, g), 2, 3), c = embed(random_tensor(2, g), 1, 3);
  EXPECT_LT(max_abs((a * b) * c - a * (b * c)), 1e-11);
}

TEST(Tensor2, SizeMismatchThrows) {
  EXPECT_THROW(Tensor2(2) + Tensor2(3), SizeMismatch);
  EXPECT_THROW(compose2(Tensor2(2), Tensor2(3)), SizeMismatch);
}

TEST(Tensor2, ProjectSlRemovesTraces) {
  std::mt19937_64 g(13);
  Tensor2 t = random_tensor(3, g);
  Tensor2 both = project_sl(t, true, true);
  EXPECT_LT(partial_trace(both, 1).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(partial_trace(both, 2).cwiseAbs().maxCoeff(), 1e-12);
  Tensor2 first = project_sl(t, true, false);
  EXPECT_LT(partial_trace(first, 1).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(max_abs(project_sl(both, true, true) - both), 1e-12);
  // 1 (x) 1 lies in the kernel of the projection on either factor.
  EXPECT_LT(max_abs(project_sl(unit2(3), true, false)), 1e-14);
}

TEST(Tensor2, TracesAndMultiplication) {
  std::mt19937_64 g(17);
  MatA a = random_matrix(3, g), b = random_matrix(3, g);
  Tensor2 t = Tensor2::product(a, b);
  EXPECT_LT((mu2(t) - a * b).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((partial_trace(t, 1) - a.trace() * b).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((partial_trace(t, 2) - b.trace() * a).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(std::abs(full_trace(t) - a.trace() * b.trace()), 0.0, 1e-12);
  // mu(P) = N * 1.
  EXPECT_LT((mu2(perm_P(3)) - 3.0 * unit_matrix(3)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Tensor2, Nondegeneracy) {
  EXPECT_TRUE(is_nondegenerate(perm_P(3)).nondegenerate);
  EXPECT_FALSE(is_nondegenerate(unit2(2)).nondegenerate);
  EXPECT_FALSE(is_nondegenerate(diag_P0(2)).nondegenerate);
}

TEST(Tensor2, SymmetryCommutator) {
  MatA a = elementary(3, 0, 0) - elementary(3, 2, 2);
  EXPECT_LT(max_abs(sym_commutator(perm_P(3), a)), 1e-14);
  EXPECT_LT(max_abs(sym_commutator(unit2(3), a)), 1e-14);
  Tensor2 e = Tensor2::product(elementary(3, 0, 1), elementary(3, 0, 0));
  EXPECT_NEAR(max_abs(sym_commutator(e, a)), 1.0, 1e-14);
}
