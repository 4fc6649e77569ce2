#pragma once

// CV-QAOA baseline for Fock-encoded problems quadratic in n:
//   U_c(gamma) = exp(-i gamma F(n))  as R, Kerr and CrossKerr gates
//   U_b(beta)  = exp(-i beta sum p_i^2)  as Pz gates
// on an x-squeezed input S(r, 0)|0> per mode.

#include <map>
#include <utility>

#include "pcqo/variational.hpp"

namespace pcqo {

enum class QaoaMode { SharedAngle, MultiAngle };

inline std::string to_string(QaoaMode m) { return m == QaoaMode::SharedAngle ? "shared" : "multi"; }

struct QaoaVariant {
  QaoaMode mode = QaoaMode::SharedAngle;
  std::size_t layers = 1;
  double squeeze_r = 1.0;
};

/// F = c + sum a_i n_i + sum b_i n_i^2 + sum_{i<j} c_ij n_i n_j
struct QuadraticForm {
  double constant = 0.0;
  std::vector<double> linear, square;
  std::map<std::pair<std::size_t, std::size_t>, double> cross;
};

inline QuadraticForm quadratic_form(const ProblemSpec& problem) {
  if (problem.encoding != Encoding::FockSpace)
    throw Error(ErrorCode::NotDecomposable, "QAOA cost unitary needs a Fock-encoded problem");
  const std::size_t N = problem.N;
  QuadraticForm q{0.0, std::vector<double>(N, 0.0), std::vector<double>(N, 0.0), {}};
  for (const auto& [e, c] : problem.cost.terms()) {
    std::vector<std::size_t> vars;
    int deg = 0;
    for (std::size_t i = 0; i < N; ++i) {
      deg += e[i];
      if (e[i] > 0) vars.push_back(i);
    }
    if (deg == 0) {
      q.constant += c;
    } else if (deg == 1) {
      q.linear[vars[0]] += c;
    } else if (deg == 2 && vars.size() == 1) {
      q.square[vars[0]] += c;
    } else if (deg == 2) {
      q.cross[{vars[0], vars[1]}] += c;
    } else {
      throw Error(ErrorCode::NotDecomposable, problem.name + " has a term of degree " + std::to_string(deg) +
                                                  "; the cost unitary needs F quadratic in n");
    }
  }
  return q;
}

namespace detail {

inline ParamBinding qaoa_binding(Circuit& c, QaoaMode mode, std::optional<std::size_t>& shared, double scale) {
  if (mode == QaoaMode::MultiAngle) return ParamBinding::trainable(c.n_params++, scale);
  if (!shared) shared = c.n_params++;
  return ParamBinding::trainable(*shared, scale);
}

}  // namespace detail

/// Appends exp(-i gamma F(n)) with the global phase dropped. Zero coefficients emit no gate.
inline void append_qaoa_cost(Circuit& c, const ProblemSpec& problem, QaoaMode mode) {
  const auto q = quadratic_form(problem);
  std::optional<std::size_t> gamma;
  for (std::size_t i = 0; i < problem.N; ++i)
    if (q.linear[i] != 0.0)
      c.gates.push_back({GateKind::R, {i}, {detail::qaoa_binding(c, mode, gamma, -q.linear[i])}});
  for (std::size_t i = 0; i < problem.N; ++i)
    if (q.square[i] != 0.0)
      c.gates.push_back({GateKind::Kerr, {i}, {detail::qaoa_binding(c, mode, gamma, -q.square[i])}});
  for (const auto& [ij, v] : q.cross)
    if (v != 0.0)
      c.gates.push_back({GateKind::CrossKerr, {ij.first, ij.second}, {detail::qaoa_binding(c, mode, gamma, -v)}});
}

/// Appends exp(-i beta sum_i p_i^2): Pz(s) per mode with s = -2 hbar beta,
/// all modes sharing one beta slot.
inline void append_qaoa_mixer(Circuit& c) {
  const std::size_t beta = c.n_params++;
  for (std::size_t i = 0; i < c.modes; ++i)
    c.gates.push_back({GateKind::Pz, {i}, {ParamBinding::trainable(beta, -2.0 * c.hbar)}});
}

struct QaoaSetup {
  Circuit circuit;
  ModeState initial;
};

inline QaoaSetup build_cvqaoa(const ProblemSpec& problem, const QaoaVariant& variant, std::size_t D,
                              double hbar = kDefaultHbar) {
  if (variant.layers < 1) throw Error(ErrorCode::ContractViolation, "QAOA needs at least one layer");
  Circuit c = empty_circuit(problem.N, D, hbar);
  for (std::size_t l = 0; l < variant.layers; ++l) {
    append_qaoa_cost(c, problem, variant.mode);
    append_qaoa_mixer(c);
  }
  ModeState st = vacuum(problem.N, D);
  const auto S = make_gate(GateKind::Squeeze, {variant.squeeze_r, 0.0}, D, hbar);
  for (std::size_t i = 0; i < problem.N; ++i) st = apply_gate(std::move(st), S, {i});
  return {std::move(c), std::move(st)};
}

}  // namespace pcqo
