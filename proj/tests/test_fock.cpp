#include <gtest/gtest.h>

#include "support.hpp"

using namespace pcqo;
using pcqo::testing::random_hermitian;
using pcqo::testing::random_state;
using pcqo::testing::random_unitary;

TEST(Annihilation, D3HasSqrtLadder) {
  const Matrix a = annihilation(3).entries;
  EXPECT_EQ(a.rows(), 3);
  EXPECT_NEAR(std::abs(a(0, 1) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(a(1, 2) - std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_EQ(a.col(0).norm(), 0.0);
}

TEST(Annihilation, D2SingleEntry) {
  const Matrix a = annihilation(2).entries;
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 1) = 1.0;
  EXPECT_EQ(max_abs(a - expected), 0.0);
}

TEST(Annihilation, NumberOperatorIsDiagonal) {
  const Matrix a = annihilation(5).entries;
  const Matrix n = a.adjoint() * a;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) EXPECT_NEAR(std::abs(n(i, j) - cplx(i == j ? i : 0)), 0.0, 1e-14);
}

TEST(Annihilation, RejectsSmallCutoff) {
  try {
    annihilation(1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidCutoff);
  }
}

TEST(Quadratures, VacuumVarianceIsHalfHbar) {
  const auto [x, p] = quadratures(10, 2.0);
  EXPECT_TRUE(is_hermitian(x.entries));
  EXPECT_TRUE(is_hermitian(p.entries));
  const Matrix x2 = x.entries * x.entries;
  EXPECT_NEAR(x2(0, 0).real(), 1.0, 1e-14);
}

TEST(Quadratures, CanonicalCommutatorAwayFromEdge) {
  const std::size_t D = 10;
  const double hbar = 2.0;
  const auto [x, p] = quadratures(D, hbar);
  const Matrix C = x.entries * p.entries - p.entries * x.entries;
  for (std::size_t n = 0; n < D; ++n) {
    Vector e = Vector::Zero(D);
    e(static_cast<Eigen::Index>(n)) = 1.0;
    const double residual = (C * e - cplx(0, hbar) * e).norm();
    if (n + 2 <= D - 1 && n <= D - 3) EXPECT_LT(residual, 1e-12) << "n = " << n;
    if (n == D - 1) EXPECT_GT(residual, 1.0);
  }
}

TEST(Quadratures, CommutatorHoldsBelowEdgeForAnyCutoff) {
  for (std::size_t D = 4; D <= 14; ++D) {
    const auto [x, p] = quadratures(D, 2.0);
    const Matrix C = x.entries * p.entries - p.entries * x.entries - cplx(0, 2.0) * Matrix::Identity(D, D);
    EXPECT_LT(C.topLeftCorner(D - 2, D - 2).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(C.block(0, 0, D, D - 2).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Operators, MixingHbarIsRejected) {
  EXPECT_THROW(compose(annihilation(4, 2.0), annihilation(4, 1.0)), Error);
  EXPECT_THROW(kron(annihilation(4, 2.0), annihilation(4, 1.0)), Error);
}

TEST(HermitianExp, NumberGeneratorGivesPhases) {
  const double phi = 0.7;
  const Matrix U = hermitian_exp(number_operator(5), phi).entries;
  for (int n = 0; n < 5; ++n) EXPECT_NEAR(std::abs(U(n, n) - std::polar(1.0, phi * n)), 0.0, 1e-12);
}

TEST(HermitianExp, ZeroIsIdentity) {
  std::mt19937_64 rng(3);
  const Matrix U = hermitian_exp({6, 1, 2.0, random_hermitian(6, rng)}, 0.0).entries;
  EXPECT_LT(max_abs(U - Matrix::Identity(6, 6)), 1e-12);
}

TEST(HermitianExp, RandomGeneratorsAreUnitary) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix U = hermitian_exp({15, 1, 2.0, random_hermitian(15, rng)}, 0.37 * trial).entries;
    EXPECT_TRUE(is_unitary(U, 1e-10));
  }
}

TEST(HermitianExp, NonHermitianRejected) {
  Matrix G = Matrix::Zero(3, 3);
  G(0, 1) = 1.0;
  try {
    hermitian_exp({3, 1, 2.0, G}, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ContractViolation);
  }
}

TEST(Vacuum, Examples) {
  const auto v = vacuum(1, 3);
  EXPECT_EQ(v.amplitudes()(0), cplx(1.0));
  EXPECT_EQ(v.amplitudes()(1), cplx(0.0));
  const auto w = vacuum(2, 2);
  EXPECT_EQ(w.size(), 4u);
  EXPECT_EQ(w.amplitudes()(0), cplx(1.0));
  EXPECT_DOUBLE_EQ(w.norm(), 1.0);
}

TEST(ModeState, SlowestIndexIsModeZero) {
  const int pattern[3] = {1, 0, 2};
  const auto s = fock_state(3, pattern);
  EXPECT_EQ(s.index_of(pattern), 1u * 9 + 0 * 3 + 2);
  EXPECT_EQ(s.pattern_of(11), (std::vector<int>{1, 0, 2}));
  EXPECT_EQ(s.stride(0), 9u);
}

TEST(ApplyGate, IdentityLeavesStateUnchanged) {
  std::mt19937_64 rng(5);
  const auto st = random_state(3, 4, rng);
  const TruncatedOperator I{4, 1, 2.0, Matrix::Identity(4, 4)};
  const auto out = apply_gate(st, I, {1});
  EXPECT_LT(pcqo::testing::max_diff(out.amplitudes(), st.amplitudes()), 1e-15);
}

TEST(ApplyGate, BalancedBeamsplitter) {
  const int p10[2] = {1, 0};
  const auto out = apply_gate(fock_state(4, p10), make_gate(GateKind::BS, {M_PI / 4, 0.0}, 4), {0, 1});
  const auto probs = fock_probabilities(out, 1e-12);
  ASSERT_EQ(probs.size(), 2u);
  EXPECT_NEAR(probs.at({1, 0}), 0.5, 1e-12);
  EXPECT_NEAR(probs.at({0, 1}), 0.5, 1e-12);
}

TEST(ApplyGate, DisjointTargetsCommute) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t D = 3;
    const auto st = random_state(3, D, rng);
    const TruncatedOperator U{D, 1, 2.0, random_unitary(D, rng)};
    const TruncatedOperator V{D, 1, 2.0, random_unitary(D, rng)};
    const TruncatedOperator W{D, 2, 2.0, random_unitary(D * D, rng)};
    const auto a = apply_gate(apply_gate(st, U, {1}), V, {0});
    const auto b = apply_gate(apply_gate(st, V, {0}), U, {1});
    EXPECT_LT(pcqo::testing::max_diff(a.amplitudes(), b.amplitudes()), 1e-12);
    const auto c = apply_gate(apply_gate(st, W, {0, 2}), U, {1});
    const auto d = apply_gate(apply_gate(st, U, {1}), W, {0, 2});
    EXPECT_LT(pcqo::testing::max_diff(c.amplitudes(), d.amplitudes()), 1e-12);
  }
}

/// Dense reference: builds the full operator by Kronecker products.
static Matrix embed(const Matrix& U, std::size_t N, std::size_t D, std::size_t first, std::size_t second) {
  const std::size_t dim = ipow(D, N);
  Matrix out = Matrix::Zero(dim, dim);
  ModeState probe(N, D);
  for (std::size_t c = 0; c < dim; ++c) {
    const auto pc = probe.pattern_of(c);
    for (std::size_t r = 0; r < dim; ++r) {
      const auto pr = probe.pattern_of(r);
      bool others_equal = true;
      for (std::size_t k = 0; k < N; ++k)
        if (k != first && k != second && pr[k] != pc[k]) others_equal = false;
      if (!others_equal) continue;
      const auto row = static_cast<Eigen::Index>(pr[first] * D + pr[second]);
      const auto col = static_cast<Eigen::Index>(pc[first] * D + pc[second]);
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = U(row, col);
    }
  }
  return out;
}

TEST(ApplyGate, TwoModeMatchesDenseReferenceForAllTargetOrders) {
  std::mt19937_64 rng(23);
  const std::size_t N = 4, D = 3;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      if (i == j) continue;
      const auto st = random_state(N, D, rng);
      const Matrix U = random_unitary(D * D, rng);
      const auto got = apply_gate(st, {D, 2, 2.0, U}, {i, j});
      const Vector want = embed(U, N, D, i, j) * st.amplitudes();
      EXPECT_LT(pcqo::testing::max_diff(got.amplitudes(), want), 1e-12) << i << "," << j;
    }
}

TEST(ApplyGate, ValidatesTargets) {
  auto st = vacuum(2, 3);
  const auto U1 = make_gate(GateKind::R, {0.1}, 3);
  const auto U2 = make_gate(GateKind::BS, {0.1, 0.0}, 3);
  EXPECT_THROW(apply_gate(st, U1, {2}), Error);
  EXPECT_THROW(apply_gate(st, U2, {0, 0}), Error);
  EXPECT_THROW(apply_gate(st, U2, {0}), Error);
  EXPECT_THROW(apply_gate(st, make_gate(GateKind::R, {0.1}, 4), {0}), Error);
}

TEST(Expect, VacuumValues) {
  const auto v = vacuum(2, 6);
  EXPECT_NEAR(expect(v, number_operator(6), 0), 0.0, 1e-15);
  EXPECT_NEAR(expect(v, quadratures(6).first, 1), 0.0, 1e-15);
}

TEST(Expect, DisplacedVacuumMeanPosition) {
  const auto st = apply_gate(vacuum(1, 20), make_gate(GateKind::X, {0.3}, 20), {0});
  EXPECT_NEAR(expect(st, quadratures(20).first, 0), 0.3, 1e-10);
}

TEST(Expect, LinearAndPhaseInvariant) {
  std::mt19937_64 rng(29);
  const auto st = random_state(2, 5, rng);
  const auto [x, p] = quadratures(5);
  const auto n = number_operator(5);
  const TruncatedOperator combo{5, 1, 2.0, 2.0 * x.entries - 0.5 * n.entries};
  EXPECT_NEAR(expect(st, combo, 1), 2.0 * expect(st, x, 1) - 0.5 * expect(st, n, 1), 1e-12);
  ModeState rotated = st;
  rotated.amplitudes() *= std::polar(1.0, 1.234);
  EXPECT_NEAR(expect(rotated, p, 0), expect(st, p, 0), 1e-12);
}

TEST(Expect, RejectsNonHermitian) {
  EXPECT_THROW(expect(vacuum(1, 4), annihilation(4), 0), Error);
}

TEST(FockProbabilities, VacuumSingleEntry) {
  const auto probs = fock_probabilities(vacuum(3, 4), 0.0);
  ASSERT_EQ(probs.size(), 1u);
  EXPECT_DOUBLE_EQ(probs.at({0, 0, 0}), 1.0);
}

TEST(FockProbabilities, SumsToOne) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const auto st = random_state(3, 4, rng);
    double total = 0.0;
    for (const auto& [pattern, p] : fock_probabilities(st, 0.0)) total += p;
    EXPECT_NEAR(total, 1.0, 1e-9);
  }
  EXPECT_THROW(fock_probabilities(vacuum(1, 3), -1.0), Error);
}

TEST(EdgePopulation, CountsAnyModeOnTopLevel) {
  const int edge[2] = {0, 2};
  EXPECT_DOUBLE_EQ(edge_population(fock_state(3, edge)), 1.0);
  EXPECT_DOUBLE_EQ(edge_population(vacuum(2, 3)), 0.0);
}

TEST(ReducedDensityMatrix, TraceOneAndHermitian) {
  std::mt19937_64 rng(37);
  const auto st = random_state(3, 4, rng);
  for (std::size_t m = 0; m < 3; ++m) {
    const Matrix rho = reduced_density_matrix(st, m);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
    EXPECT_TRUE(is_hermitian(rho, 1e-12));
  }
}
