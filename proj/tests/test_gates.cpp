#include <gtest/gtest.h>

#include "support.hpp"

using namespace pcqo;
using pcqo::testing::max_diff;
using pcqo::testing::random_params;
using pcqo::testing::random_state;

namespace {

std::vector<double> sample_values(GateKind k, std::mt19937_64& rng) {
  return random_params(gate_param_count(k), 0.8, rng);
}

}  // namespace

TEST(MakeGate, EveryKindIsUnitary) {
  std::mt19937_64 rng(41);
  for (GateKind k : kAllGateKinds)
    for (std::size_t D : {3u, 6u, 9u})
      for (int trial = 0; trial < 5; ++trial) {
        const auto v = sample_values(k, rng);
        const auto U = make_gate(k, v, D);
        EXPECT_EQ(U.dim(), ipow(D, gate_arity(k)));
        EXPECT_TRUE(is_unitary(U.entries, 1e-10)) << gate_name(k) << " D=" << D;
      }
}

TEST(MakeGate, RotationIsDiagonalPhase) {
  const double phi = 0.9;
  const Matrix U = make_gate(GateKind::R, {phi}, 4).entries;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      EXPECT_NEAR(std::abs(U(r, c) - (r == c ? std::polar(1.0, phi * r) : cplx(0))), 0.0, 1e-12);
}

TEST(MakeGate, PzIsMomentumQuadraticPhase) {
  const std::size_t D = 12;
  const double hbar = 2.0;
  for (double s : {-0.7, 0.3, 1.1}) {
    const auto p = quadratures(D, hbar).second;
    const Matrix want = hermitian_exp(compose(p, p), s / (2.0 * hbar)).entries;
    EXPECT_LT(max_abs(make_gate(GateKind::Pz, {s}, D, hbar).entries - want), 1e-9);
    // rotation conjugation of the position quadratic phase
    const Matrix rpr = make_gate(GateKind::R, {-M_PI / 2}, D, hbar).entries *
                       make_gate(GateKind::QuadPhase, {s}, D, hbar).entries *
                       make_gate(GateKind::R, {M_PI / 2}, D, hbar).entries;
    EXPECT_LT(max_abs(make_gate(GateKind::Pz, {s}, D, hbar).entries - rpr), 1e-9);
  }
}

TEST(MakeGate, CrossKerrIsDiagonal) {
  const double kappa = 0.45;
  const std::size_t D = 4;
  const Matrix U = make_gate(GateKind::CrossKerr, {kappa}, D).entries;
  for (std::size_t ni = 0; ni < D; ++ni)
    for (std::size_t nj = 0; nj < D; ++nj) {
      const auto idx = static_cast<Eigen::Index>(ni * D + nj);
      EXPECT_NEAR(std::abs(U(idx, idx) - std::polar(1.0, kappa * double(ni * nj))), 0.0, 1e-12);
      EXPECT_NEAR(U.col(idx).norm(), 1.0, 1e-12);
    }
}

TEST(MakeGate, KerrAtPiFixesTwoPhotons) {
  const int two[1] = {2};
  const auto out = apply_gate(fock_state(5, two), make_gate(GateKind::Kerr, {M_PI}, 5), {0});
  EXPECT_NEAR(std::abs(out.amplitude(two) - 1.0), 0.0, 1e-12);
}

TEST(MakeGate, DisplacementSignConvention) {
  const double alpha = 0.4;
  const auto st = apply_gate(vacuum(1, 25), make_gate(GateKind::Disp, {alpha, 0.0}, 25), {0});
  EXPECT_NEAR(mean_quadratures(st)[0], std::sqrt(2.0 * 2.0) * alpha, 1e-8);
}

TEST(MakeGate, RejectsBadParameters) {
  EXPECT_THROW(make_gate(GateKind::BS, {0.1}, 4), Error);
  EXPECT_THROW(make_gate(GateKind::R, {0.1, 0.2}, 4), Error);
  EXPECT_THROW(make_gate(GateKind::R, {std::nan("")}, 4), Error);
  EXPECT_THROW(make_gate(GateKind::X, {INFINITY}, 4), Error);
  EXPECT_THROW(make_gate(GateKind::R, {0.1}, 1), Error);
}

TEST(MakeGate, CacheReturnsIdenticalMatrices) {
  const auto a = make_gate(GateKind::CZ, {0.123}, 5);
  const auto b = make_gate(GateKind::CZ, {0.123}, 5);
  EXPECT_EQ(max_abs(a.entries - b.entries), 0.0);
}

TEST(NumberConservation, RotationsAndBeamsplittersKeepTotalPhotons) {
  std::mt19937_64 rng(43);
  const std::size_t N = 3, D = 5;
  for (int trial = 0; trial < 10; ++trial) {
    Circuit c = empty_circuit(N, D, 2.0);
    for (int g = 0; g < 8; ++g) {
      if (g % 2 == 0) {
        c.add_trainable(GateKind::R, {static_cast<std::size_t>(g / 2 % N)});
      } else {
        const std::size_t i = static_cast<std::size_t>(g % N), j = (i + 1) % N;
        c.add_trainable(GateKind::BS, {i, j}, {0.3 * g});
      }
    }
    const auto theta = random_params(c.n_params, 2.0, rng);
    const auto st = random_state(N, D, rng);
    const auto out = run_circuit(c, theta, st);
    const auto before = mean_photon_numbers(st), after = mean_photon_numbers(out);
    double sum_before = 0, sum_after = 0;
    for (std::size_t k = 0; k < N; ++k) {
      sum_before += before[k];
      sum_after += after[k];
    }
    EXPECT_NEAR(sum_before, sum_after, 1e-9);
    EXPECT_NEAR(out.norm(), 1.0, 1e-9);
  }
}

TEST(RunCircuit, EmptyCircuitIsIdentity) {
  std::mt19937_64 rng(47);
  const auto st = random_state(2, 4, rng);
  const Circuit c = empty_circuit(2, 4, 2.0);
  EXPECT_EQ(max_diff(run_circuit(c, {}, st).amplitudes(), st.amplitudes()), 0.0);
}

TEST(RunCircuit, ZeroParametersGiveIdentity) {
  std::mt19937_64 rng(53);
  const auto c = pcqo_fock_ansatz(3, 2, 4);
  const std::vector<double> zeros(c.n_params, 0.0);
  const auto st = random_state(3, 4, rng);
  EXPECT_LT(max_diff(run_circuit(c, zeros, st).amplitudes(), st.amplitudes()), 1e-12);
}

TEST(RunCircuit, PositionDisplacementShiftsMean) {
  Circuit c = empty_circuit(1, 20, 2.0);
  c.add_trainable(GateKind::X, {0});
  const std::vector<double> theta{0.5};
  EXPECT_NEAR(mean_quadratures(run_circuit(c, theta, vacuum(1, 20)))[0], 0.5, 1e-9);
}

TEST(RunCircuit, ParameterLengthMismatch) {
  const auto c = pcqo_fock_ansatz(2, 1, 4);
  const std::vector<double> wrong(c.n_params + 1, 0.0);
  try {
    run_circuit(c, wrong, vacuum(2, 4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ContractViolation);
  }
  const std::vector<double> ok(c.n_params, 0.0);
  EXPECT_THROW(run_circuit(c, ok, vacuum(2, 5)), Error);
}

TEST(RunCircuit, ConcatenationMatchesSequentialRuns) {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = pcqo_fock_ansatz(3, 1, 4);
    const auto b = pcqo_phase_ansatz(3, 1, 4);
    const auto ta = random_params(a.n_params, 0.5, rng), tb = random_params(b.n_params, 0.5, rng);
    std::vector<double> tab = ta;
    tab.insert(tab.end(), tb.begin(), tb.end());
    const auto st = random_state(3, 4, rng);
    const auto seq = run_circuit(b, tb, run_circuit(a, ta, st));
    const auto joint = run_circuit(concat(a, b), tab, st);
    EXPECT_LT(max_diff(seq.amplitudes(), joint.amplitudes()), 1e-12);
  }
}

TEST(Circuit, ValidateCatchesMalformedSpecs) {
  Circuit c = empty_circuit(2, 4, 2.0);
  c.gates.push_back({GateKind::BS, {0}, {ParamBinding::fixed(0.1), ParamBinding::fixed(0.0)}});
  EXPECT_THROW(c.validate(), Error);
  c = empty_circuit(2, 4, 2.0);
  c.gates.push_back({GateKind::R, {2}, {ParamBinding::fixed(0.1)}});
  EXPECT_THROW(c.validate(), Error);
  c = empty_circuit(2, 4, 2.0);
  c.n_params = 2;
  c.gates.push_back({GateKind::R, {0}, {ParamBinding::trainable(0)}});
  EXPECT_THROW(c.validate(), Error);  // slot 1 unused
}

namespace {

/// Symplectic eigenvalues of the two-mode covariance matrix, ordered (x0, p0, x1, p1).
std::vector<double> symplectic_eigenvalues(const ModeState& st, double hbar) {
  const std::size_t D = st.cutoff();
  const auto [x, p] = quadratures(D, hbar);
  const Matrix I = Matrix::Identity(D, D);
  const std::array<Matrix, 4> R = {kron(x, {D, 1, hbar, I}).entries, kron(p, {D, 1, hbar, I}).entries,
                                   kron({D, 1, hbar, I}, x).entries, kron({D, 1, hbar, I}, p).entries};
  const Vector& psi = st.amplitudes();
  Eigen::Matrix4d V;
  std::array<double, 4> mean{};
  for (int a = 0; a < 4; ++a) mean[a] = psi.dot(R[a] * psi).real();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      V(a, b) = 0.5 * psi.dot((R[a] * R[b] + R[b] * R[a]) * psi).real() - mean[a] * mean[b];
  Eigen::Matrix4d Omega = Eigen::Matrix4d::Zero();
  Omega(0, 1) = Omega(2, 3) = 1.0;
  Omega(1, 0) = Omega(3, 2) = -1.0;
  const Eigen::Matrix4cd M = cplx(0, 1) * (Omega * V).cast<cplx>();
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(M);
  std::vector<double> out;
  for (int k = 0; k < 4; ++k) out.push_back(std::abs(es.eigenvalues()(k).real()));
  return out;
}

}  // namespace

TEST(GaussianSubset, UncertaintyBoundHolds) {
  std::mt19937_64 rng(61);
  const std::array<GateKind, 9> gaussian = {GateKind::R,  GateKind::Disp,           GateKind::Squeeze,
                                            GateKind::BS, GateKind::QuadPhase,      GateKind::CZ,
                                            GateKind::TwoModeSqueeze, GateKind::X, GateKind::Pz};
  std::uniform_int_distribution<std::size_t> pick(0, gaussian.size() - 1);
  const double hbar = 2.0;
  for (int trial = 0; trial < 8; ++trial) {
    Circuit c = empty_circuit(2, 16, hbar);
    for (int g = 0; g < 4; ++g) {
      const GateKind k = gaussian[pick(rng)];
      GateSpec spec{k, gate_arity(k) == 2 ? std::vector<std::size_t>{0, 1} : std::vector<std::size_t>{std::size_t(g % 2)},
                    {}};
      for (double v : random_params(gate_param_count(k), 0.2, rng)) spec.params.push_back(ParamBinding::fixed(v));
      c.gates.push_back(spec);
    }
    const auto st = run_circuit(c, {}, vacuum(2, 16));
    ASSERT_LT(edge_population(st), 1e-6);
    for (double nu : symplectic_eigenvalues(st, hbar)) EXPECT_GE(nu, hbar / 2 - 1e-6);
  }
}
