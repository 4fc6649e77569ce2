#pragma once

// Truncated Fock-space linear algebra: ladder and quadrature operators,
// exact unitaries from Hermitian generators, multimode pure states, gate
// contraction, expectation values and Fock-basis probabilities.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "pcqo/error.hpp"

namespace pcqo {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RowMajorMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr double kDefaultHbar = 2.0;

inline std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

/// Dense operator on one or more truncated modes. The basis of a multi-mode
/// operator is the tensor product with the first mode varying slowest.
struct TruncatedOperator {
  std::size_t cutoff = 0;
  std::size_t arity = 1;
  double hbar = kDefaultHbar;
  Matrix entries;

  std::size_t dim() const { return static_cast<std::size_t>(entries.rows()); }
};

inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Matrix& m, double tol = 1e-12) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

inline bool is_unitary(const Matrix& m, double tol = 1e-10) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m.adjoint() * m - Matrix::Identity(m.rows(), m.cols())) <= tol;
}

inline void require_cutoff(std::size_t D) {
  if (D < 2) throw Error(ErrorCode::InvalidCutoff, "cutoff must be at least 2, got " + std::to_string(D));
}

inline TruncatedOperator annihilation(std::size_t D, double hbar = kDefaultHbar) {
  require_cutoff(D);
  TruncatedOperator op{D, 1, hbar, Matrix::Zero(D, D)};
  for (std::size_t n = 1; n < D; ++n) op.entries(n - 1, n) = std::sqrt(static_cast<double>(n));
  return op;
}

inline TruncatedOperator creation(std::size_t D, double hbar = kDefaultHbar) {
  auto op = annihilation(D, hbar);
  op.entries = op.entries.adjoint().eval();
  return op;
}

inline TruncatedOperator number_operator(std::size_t D, double hbar = kDefaultHbar) {
  require_cutoff(D);
  TruncatedOperator op{D, 1, hbar, Matrix::Zero(D, D)};
  for (std::size_t n = 0; n < D; ++n) op.entries(n, n) = static_cast<double>(n);
  return op;
}

/// x = sqrt(hbar/2)(a + a^dag), p = i sqrt(hbar/2)(a^dag - a).
inline std::pair<TruncatedOperator, TruncatedOperator> quadratures(std::size_t D, double hbar = kDefaultHbar) {
  if (!(hbar > 0.0)) throw Error(ErrorCode::ContractViolation, "hbar must be positive");
  const Matrix a = annihilation(D, hbar).entries;
  const Matrix ad = a.adjoint();
  const double s = std::sqrt(hbar / 2.0);
  TruncatedOperator x{D, 1, hbar, s * (a + ad)};
  TruncatedOperator p{D, 1, hbar, cplx(0.0, s) * (ad - a)};
  return {std::move(x), std::move(p)};
}

inline TruncatedOperator kron(const TruncatedOperator& A, const TruncatedOperator& B) {
  if (A.cutoff != B.cutoff) throw Error(ErrorCode::DimensionMismatch, "kron of operators with different cutoffs");
  if (A.hbar != B.hbar) throw Error(ErrorCode::ContractViolation, "kron of operators built with different hbar");
  const auto na = A.dim(), nb = B.dim();
  Matrix out(na * nb, na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j)
      out.block(i * nb, j * nb, nb, nb) = A.entries(i, j) * B.entries;
  return {A.cutoff, A.arity + B.arity, A.hbar, std::move(out)};
}

inline TruncatedOperator compose(const TruncatedOperator& A, const TruncatedOperator& B) {
  if (A.cutoff != B.cutoff || A.arity != B.arity)
    throw Error(ErrorCode::DimensionMismatch, "compose of operators on different spaces");
  if (A.hbar != B.hbar) throw Error(ErrorCode::ContractViolation, "compose of operators built with different hbar");
  return {A.cutoff, A.arity, A.hbar, A.entries * B.entries};
}

struct Spectrum {
  Matrix vectors;
  Eigen::VectorXd values;
};

inline Spectrum hermitian_spectrum(const Matrix& G) {
  if (!is_hermitian(G, 1e-10))
    throw Error(ErrorCode::ContractViolation, "generator is not Hermitian (max |G - G^dag| = " +
                                                  std::to_string(max_abs(G - G.adjoint())) + ")");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(G);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::NumericContract, "eigendecomposition failed");
  return {solver.eigenvectors(), solver.eigenvalues()};
}

/// exp(i s G) from the eigendecomposition of G.
inline Matrix exp_from_spectrum(const Spectrum& sp, double s) {
  const auto n = sp.values.size();
  if (s == 0.0) return Matrix::Identity(n, n);
  Vector phases(n);
  for (Eigen::Index k = 0; k < n; ++k) phases(k) = std::polar(1.0, s * sp.values(k));
  return sp.vectors * phases.asDiagonal() * sp.vectors.adjoint();
}

inline TruncatedOperator hermitian_exp(const TruncatedOperator& G, double s) {
  return {G.cutoff, G.arity, G.hbar, exp_from_spectrum(hermitian_spectrum(G.entries), s)};
}

/// Pure state of N modes at cutoff D; amplitude index = sum_k n_k D^(N-1-k).
class ModeState {
 public:
  ModeState(std::size_t modes, std::size_t cutoff) : modes_(modes), cutoff_(cutoff) {
    if (modes == 0) throw Error(ErrorCode::DimensionMismatch, "a state needs at least one mode");
    require_cutoff(cutoff);
    amplitudes_ = Vector::Zero(static_cast<Eigen::Index>(ipow(cutoff, modes)));
  }

  std::size_t modes() const { return modes_; }
  std::size_t cutoff() const { return cutoff_; }
  std::size_t size() const { return static_cast<std::size_t>(amplitudes_.size()); }

  const Vector& amplitudes() const { return amplitudes_; }
  Vector& amplitudes() { return amplitudes_; }

  std::size_t stride(std::size_t mode) const { return ipow(cutoff_, modes_ - 1 - mode); }

  std::size_t index_of(std::span<const int> pattern) const {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < modes_; ++k) idx = idx * cutoff_ + static_cast<std::size_t>(pattern[k]);
    return idx;
  }

  std::vector<int> pattern_of(std::size_t idx) const {
    std::vector<int> p(modes_);
    for (std::size_t k = modes_; k-- > 0;) {
      p[k] = static_cast<int>(idx % cutoff_);
      idx /= cutoff_;
    }
    return p;
  }

  cplx amplitude(std::span<const int> pattern) const { return amplitudes_(static_cast<Eigen::Index>(index_of(pattern))); }

  double norm() const { return amplitudes_.norm(); }

 private:
  std::size_t modes_;
  std::size_t cutoff_;
  Vector amplitudes_;
};

inline ModeState vacuum(std::size_t N, std::size_t D) {
  ModeState s(N, D);
  s.amplitudes()(0) = 1.0;
  return s;
}

inline ModeState fock_state(std::size_t D, std::span<const int> pattern) {
  ModeState s(pattern.size(), D);
  for (int n : pattern)
    if (n < 0 || static_cast<std::size_t>(n) >= D) throw Error(ErrorCode::DimensionMismatch, "Fock level outside cutoff");
  s.amplitudes()(static_cast<Eigen::Index>(s.index_of(pattern))) = 1.0;
  return s;
}

namespace detail {

inline Matrix swap_two_mode(const Matrix& U, std::size_t D) {
  const auto dim = D * D;
  Matrix out(dim, dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c)
      out((r % D) * D + r / D, (c % D) * D + c / D) = U(r, c);
  return out;
}

inline void apply_single(ModeState& st, const Matrix& U, std::size_t mode) {
  const std::size_t D = st.cutoff();
  const std::size_t stride = st.stride(mode);
  const std::size_t outer = st.size() / (D * stride);
  cplx* data = st.amplitudes().data();
  if (stride == 1) {
    Eigen::Map<RowMajorMatrix> M(data, static_cast<Eigen::Index>(outer), static_cast<Eigen::Index>(D));
    M = (M * U.transpose()).eval();
    return;
  }
  RowMajorMatrix tmp(D, stride);
  for (std::size_t o = 0; o < outer; ++o) {
    Eigen::Map<RowMajorMatrix> M(data + o * D * stride, static_cast<Eigen::Index>(D), static_cast<Eigen::Index>(stride));
    tmp.noalias() = U * M;
    M = tmp;
  }
}

inline void apply_pair(ModeState& st, const Matrix& U, std::size_t first, std::size_t second) {
  const std::size_t D = st.cutoff();
  const std::size_t N = st.modes();
  cplx* data = st.amplitudes().data();
  if (second == first + 1) {
    const std::size_t stride = st.stride(second);
    const std::size_t outer = st.size() / (D * D * stride);
    if (stride == 1) {
      Eigen::Map<RowMajorMatrix> M(data, static_cast<Eigen::Index>(outer), static_cast<Eigen::Index>(D * D));
      M = (M * U.transpose()).eval();
      return;
    }
    RowMajorMatrix tmp(D * D, stride);
    for (std::size_t o = 0; o < outer; ++o) {
      Eigen::Map<RowMajorMatrix> M(data + o * D * D * stride, static_cast<Eigen::Index>(D * D),
                                   static_cast<Eigen::Index>(stride));
      tmp.noalias() = U * M;
      M = tmp;
    }
    return;
  }
  // Non-adjacent targets: gather the two target indices into rows.
  const std::size_t s1 = st.stride(first), s2 = st.stride(second);
  const std::size_t rest = st.size() / (D * D);
  std::vector<std::size_t> base;
  base.reserve(rest);
  for (std::size_t idx = 0; idx < st.size(); ++idx) {
    std::size_t r = idx, ok = 1;
    for (std::size_t k = N; k-- > 0;) {
      const std::size_t digit = r % D;
      r /= D;
      if ((k == first || k == second) && digit != 0) {
        ok = 0;
        break;
      }
    }
    if (ok) base.push_back(idx);
  }
  Matrix M(D * D, rest);
  for (std::size_t c = 0; c < rest; ++c)
    for (std::size_t a = 0; a < D; ++a)
      for (std::size_t b = 0; b < D; ++b) M(a * D + b, c) = data[base[c] + a * s1 + b * s2];
  const Matrix out = U * M;
  for (std::size_t c = 0; c < rest; ++c)
    for (std::size_t a = 0; a < D; ++a)
      for (std::size_t b = 0; b < D; ++b) data[base[c] + a * s1 + b * s2] = out(a * D + b, c);
}

}  // namespace detail

/// Contracts U against the target modes in place. For two-mode U the first
/// target is the slower index of U's basis.
inline void apply_gate_inplace(ModeState& state, const Matrix& U, std::span<const std::size_t> targets) {
  const std::size_t D = state.cutoff();
  if (targets.empty() || targets.size() > 2)
    throw Error(ErrorCode::DimensionMismatch, "gates act on one or two modes");
  for (auto t : targets)
    if (t >= state.modes()) throw Error(ErrorCode::DimensionMismatch, "target mode " + std::to_string(t) + " out of range");
  if (targets.size() == 2 && targets[0] == targets[1])
    throw Error(ErrorCode::DimensionMismatch, "duplicate target modes");
  const auto expected = ipow(D, targets.size());
  if (static_cast<std::size_t>(U.rows()) != expected || static_cast<std::size_t>(U.cols()) != expected)
    throw Error(ErrorCode::DimensionMismatch, "operator dimension does not match cutoff^arity");
  if (targets.size() == 1) {
    detail::apply_single(state, U, targets[0]);
  } else if (targets[0] < targets[1]) {
    detail::apply_pair(state, U, targets[0], targets[1]);
  } else {
    detail::apply_pair(state, detail::swap_two_mode(U, D), targets[1], targets[0]);
  }
}

inline ModeState apply_gate(ModeState state, const TruncatedOperator& U, std::span<const std::size_t> targets) {
  if (U.arity != targets.size())
    throw Error(ErrorCode::DimensionMismatch, "operator arity does not match number of targets");
  if (U.cutoff != state.cutoff()) throw Error(ErrorCode::DimensionMismatch, "operator cutoff does not match state");
  apply_gate_inplace(state, U.entries, targets);
  return state;
}

inline ModeState apply_gate(ModeState state, const TruncatedOperator& U, std::initializer_list<std::size_t> targets) {
  return apply_gate(std::move(state), U, std::span<const std::size_t>(targets.begin(), targets.size()));
}

/// rho_k(a, b) = sum over the other modes of psi(.., a, ..) conj(psi(.., b, ..)).
inline Matrix reduced_density_matrix(const ModeState& st, std::size_t mode) {
  if (mode >= st.modes()) throw Error(ErrorCode::DimensionMismatch, "mode index out of range");
  const std::size_t D = st.cutoff();
  const std::size_t stride = st.stride(mode);
  const std::size_t outer = st.size() / (D * stride);
  const cplx* data = st.amplitudes().data();
  Matrix rho = Matrix::Zero(D, D);
  if (stride == 1) {
    Eigen::Map<const RowMajorMatrix> A(data, static_cast<Eigen::Index>(outer), static_cast<Eigen::Index>(D));
    rho.noalias() = A.transpose() * A.conjugate();
    return rho;
  }
  for (std::size_t o = 0; o < outer; ++o) {
    Eigen::Map<const RowMajorMatrix> B(data + o * D * stride, static_cast<Eigen::Index>(D),
                                       static_cast<Eigen::Index>(stride));
    rho.noalias() += B * B.adjoint();
  }
  return rho;
}

inline double expect(const ModeState& st, const TruncatedOperator& O, std::size_t mode) {
  if (O.arity != 1 || O.cutoff != st.cutoff())
    throw Error(ErrorCode::DimensionMismatch, "expect needs a single-mode operator at the state's cutoff");
  if (!is_hermitian(O.entries, 1e-10)) throw Error(ErrorCode::ContractViolation, "observable is not Hermitian");
  const Matrix rho = reduced_density_matrix(st, mode);
  const cplx value = (rho * O.entries).trace();
  if (std::abs(value.imag()) >= 1e-9)
    throw Error(ErrorCode::NumericContract, "expectation has imaginary residue " + std::to_string(value.imag()));
  return value.real();
}

inline std::vector<double> mean_photon_numbers(const ModeState& st) {
  std::vector<double> out(st.modes());
  for (std::size_t k = 0; k < st.modes(); ++k) {
    const Matrix rho = reduced_density_matrix(st, k);
    double n = 0.0;
    for (Eigen::Index j = 0; j < rho.rows(); ++j) n += static_cast<double>(j) * rho(j, j).real();
    out[k] = n;
  }
  return out;
}

inline std::vector<double> mean_quadratures(const ModeState& st, double hbar = kDefaultHbar) {
  const auto x = quadratures(st.cutoff(), hbar).first;
  std::vector<double> out(st.modes());
  for (std::size_t k = 0; k < st.modes(); ++k) out[k] = expect(st, x, k);
  return out;
}

/// Single-mode Fock distribution of one mode.
inline std::vector<double> mode_distribution(const ModeState& st, std::size_t mode) {
  const Matrix rho = reduced_density_matrix(st, mode);
  std::vector<double> p(st.cutoff());
  for (std::size_t j = 0; j < st.cutoff(); ++j) p[j] = rho(j, j).real();
  return p;
}

using FockDistribution = std::map<std::vector<int>, double>;

inline FockDistribution fock_probabilities(const ModeState& st, double threshold = 0.0) {
  if (threshold < 0.0) throw Error(ErrorCode::ContractViolation, "threshold must be non-negative");
  FockDistribution out;
  const auto& amp = st.amplitudes();
  for (std::size_t idx = 0; idx < st.size(); ++idx) {
    const double p = std::norm(amp(static_cast<Eigen::Index>(idx)));
    if (p > threshold) out.emplace(st.pattern_of(idx), p);
  }
  return out;
}

/// Probability that at least one mode sits on the top retained level D-1.
inline double edge_population(const ModeState& st) {
  const std::size_t D = st.cutoff();
  const auto& amp = st.amplitudes();
  double total = 0.0;
  for (std::size_t idx = 0; idx < st.size(); ++idx) {
    std::size_t r = idx;
    bool edge = false;
    for (std::size_t k = 0; k < st.modes(); ++k, r /= D) {
      if (r % D == D - 1) {
        edge = true;
        break;
      }
    }
    if (edge) total += std::norm(amp(static_cast<Eigen::Index>(idx)));
  }
  return total;
}

}  // namespace pcqo
