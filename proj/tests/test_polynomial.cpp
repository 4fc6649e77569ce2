#include <gtest/gtest.h>

#include "support.hpp"

using namespace pcqo;
using pcqo::testing::random_polynomial;

namespace {

Monomial mono(std::initializer_list<int> exps) {
  Monomial m;
  std::size_t i = 0;
  for (int v : exps) m.e[i++] = static_cast<std::uint8_t>(v);
  return m;
}

BosonPolynomial x1() { return from_xp({{{1}, {0}, 1.0}}, 1); }
BosonPolynomial p1() { return from_xp({{{0}, {1}, 1.0}}, 1); }

}  // namespace

TEST(FromXp, PositionIsLadderSum) {
  const auto X = x1();
  EXPECT_EQ(X.terms().size(), 2u);
  EXPECT_NEAR(std::abs(X.coefficient(mono({1, 0})) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(X.coefficient(mono({0, 1})) - 1.0), 0.0, 1e-15);
}

TEST(FromXp, PositionSquaredNormalOrders) {
  const auto X2 = from_xp({{{2}, {0}, 1.0}}, 1);
  EXPECT_NEAR(std::abs(X2.coefficient(mono({2, 0})) - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(X2.coefficient(mono({0, 2})) - 1.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(X2.coefficient(mono({1, 1})) - 2.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(X2.coefficient(mono({0, 0})) - 1.0), 0.0, 1e-14);
  const std::size_t D = 12;
  const auto x = quadratures(D).first.entries;
  const Matrix dense = x * x;
  const Matrix sym = to_matrix(X2, D).entries;
  EXPECT_LT(max_abs((sym - dense).topLeftCorner(D - 1, D - 1)), 1e-12);
}

TEST(FromXp, HarmonicOscillator) {
  const double hbar = 2.0;
  const auto H = from_xp({{{2}, {0}, 1.0}, {{0}, {2}, 1.0}}, 1, hbar);
  const std::size_t D = 12;
  const Matrix want = 2.0 * hbar * number_operator(D).entries + hbar * Matrix::Identity(D, D);
  EXPECT_LT(max_abs(to_matrix(H, D).entries - want), 1e-12);
}

TEST(FromXp, MixedOrderIsLiteral) {
  const auto XP = from_xp({{{1}, {1}, 1.0}}, 1);
  EXPECT_EQ(XP, x1() * p1());
  EXPECT_FALSE(XP.is_hermitian());
  EXPECT_TRUE((XP + XP.adjoint()).is_hermitian());
}

TEST(Commutator, CanonicalPair) {
  const double hbar = 2.0;
  EXPECT_LT(commutator(x1(), p1()).distance(BosonPolynomial::constant(1, cplx(0, hbar))), 1e-14);
}

TEST(Commutator, PositionWithMomentumSquared) {
  const double hbar = 2.0;
  const auto C = commutator(x1(), from_xp({{{0}, {2}, 1.0}}, 1));
  EXPECT_LT(C.distance(p1() * cplx(0, 2.0 * hbar)), 1e-13);
  const std::size_t D = 14;
  const auto [x, p] = quadratures(D);
  const Matrix dense = x.entries * p.entries * p.entries - p.entries * p.entries * x.entries;
  const Matrix sym = to_matrix(C, D).entries;
  const Eigen::Index keep = static_cast<Eigen::Index>(D - 3);
  EXPECT_LT(max_abs((dense - sym).topLeftCorner(keep, keep)), 1e-10);
}

TEST(Commutator, SelfCommutatorVanishes) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    const auto A = random_polynomial(2, 3, 5, rng);
    EXPECT_TRUE(commutator(A, A).empty());
  }
}

TEST(Commutator, ModeMismatchRejected) {
  EXPECT_THROW(commutator(BosonPolynomial::position(1, 0), BosonPolynomial::position(2, 0)), Error);
  EXPECT_THROW(commutator(BosonPolynomial::position(1, 0, 2.0), BosonPolynomial::position(1, 0, 1.0)), Error);
}

TEST(Commutator, JacobiIdentity) {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 25; ++trial) {
    const auto A = random_polynomial(2, 2, 4, rng);
    const auto B = random_polynomial(2, 2, 4, rng);
    const auto C = random_polynomial(2, 2, 4, rng);
    const auto J = commutator(A, commutator(B, C)) + commutator(B, commutator(C, A)) + commutator(C, commutator(A, B));
    EXPECT_LT(J.max_coefficient(), 1e-10);
  }
}

TEST(Product, AssociationOrderIrrelevant) {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 25; ++trial) {
    const auto A = random_polynomial(2, 3, 3, rng);
    const auto B = random_polynomial(2, 3, 3, rng);
    const auto C = random_polynomial(2, 3, 3, rng);
    const auto left = (A * B) * C, right = A * (B * C);
    EXPECT_LT(left.distance(right), 1e-10 * std::max(1.0, left.max_coefficient()));
  }
}

TEST(ToMatrix, NumberOperator) {
  const Matrix n = to_matrix(BosonPolynomial::number(1, 0), 3).entries;
  EXPECT_LT(max_abs(n - number_operator(3).entries), 0.0 + 1e-15);
}

TEST(ToMatrix, ConstantIsScaledIdentity) {
  const cplx c(1.5, -0.25);
  EXPECT_LT(max_abs(to_matrix(BosonPolynomial::constant(2, c), 3).entries - c * Matrix::Identity(9, 9)), 1e-15);
}

TEST(ToMatrix, CommutatorMatchesDenseBelowEdge) {
  std::mt19937_64 rng(83);
  const std::size_t D = 14;
  for (int trial = 0; trial < 30; ++trial) {
    const auto A = random_polynomial(1, 3, 3, rng);
    const auto B = random_polynomial(1, 3, 3, rng);
    const Matrix a = to_matrix(A, D).entries, b = to_matrix(B, D).entries;
    const Matrix sym = to_matrix(commutator(A, B), D).entries;
    const Matrix dense = a * b - b * a;
    const int cols = static_cast<int>(D) - A.degree() - B.degree();
    ASSERT_GT(cols, 0);
    const double scale = std::max(1.0, max_abs(dense.leftCols(cols)));
    EXPECT_LT(max_abs((sym - dense).leftCols(cols)) / scale, 1e-8);
  }
}

TEST(ToMatrix, TwoModeCommutatorMatchesDenseBelowEdge) {
  std::mt19937_64 rng(89);
  const std::size_t D = 7;
  for (int trial = 0; trial < 10; ++trial) {
    const auto A = random_polynomial(2, 2, 3, rng);
    const auto B = random_polynomial(2, 2, 3, rng);
    const Matrix a = to_matrix(A, D).entries, b = to_matrix(B, D).entries;
    const Matrix diff = to_matrix(commutator(A, B), D).entries - (a * b - b * a);
    const int reach = A.degree() + B.degree();
    ModeState probe(2, D);
    for (std::size_t col = 0; col < probe.size(); ++col) {
      const auto pat = probe.pattern_of(col);
      if (pat[0] + reach >= static_cast<int>(D) || pat[1] + reach >= static_cast<int>(D)) continue;
      EXPECT_LT(diff.col(static_cast<Eigen::Index>(col)).cwiseAbs().maxCoeff(), 1e-8);
    }
  }
}

TEST(Hermiticity, SymmetrizedPolynomialsAreHermitianMatrices) {
  std::mt19937_64 rng(97);
  for (int trial = 0; trial < 20; ++trial) {
    const auto H = random_polynomial(2, 3, 4, rng, true);
    EXPECT_TRUE(H.is_hermitian());
    EXPECT_TRUE(is_hermitian(to_matrix(H, 5).entries, 1e-10));
    // i[H, K] is Hermitian for Hermitian H, K
    const auto K = random_polynomial(2, 2, 3, rng, true);
    EXPECT_TRUE((commutator(H, K) * cplx(0, 1)).is_hermitian(1e-10));
  }
}

TEST(WeylSymbol, RoundTripsThroughOperator) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 10; ++trial) {
    const auto H = random_polynomial(2, 3, 4, rng, true);
    BosonPolynomial back(2);
    for (const auto& [key, c] : weyl_symbol(H)) back += weyl_operator(key, 2, c);
    EXPECT_LT(back.distance(H), 1e-10);
  }
}

TEST(Format, StableText) {
  EXPECT_EQ(format(BosonPolynomial(1)), "0\n");
  EXPECT_NE(format(BosonPolynomial::number(2, 1)).find("a†_1"), std::string::npos);
}
