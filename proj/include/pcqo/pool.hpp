#pragma once

// Counterdiabatic operator pool from the nested-commutator gauge potential
//   A^(l) = i sum_{k=1..l} alpha_k [H_a, [H_a, ... [H_a, d_lambda H_a]]]   (2k-1 brackets)
// with H_a = (1 - lambda) H_m + lambda H_p. The alpha_k are never computed:
// the pool is the set of Hermitian x/p monomial families appearing in any
// order k and any power of lambda, and each family becomes an independently
// parameterized gate.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pcqo/boson_polynomial.hpp"
#include "pcqo/gates.hpp"

namespace pcqo {

struct PoolOperator {
  BosonPolynomial generator;
  std::string label;     // family, mode-agnostic ("x_i p_j")
  std::string instance;  // concrete ("x0 p1")
  int degree = 0;
  int arity = 0;
  XPKey key;
  double weight = 0.0;  // Weyl coefficient where the family first appeared
  int order = 0;        // smallest k producing it
};

struct PoolOptions {
  /// Weyl coefficients below rel_tol * (largest coefficient of the same
  /// lambda-power polynomial) are treated as round-off.
  double rel_tol = 1e-10;
};

/// Polynomial in the formal scalar lambda; entry j multiplies lambda^j.
using LambdaPolynomial = std::vector<BosonPolynomial>;

inline LambdaPolynomial lambda_commutator(const LambdaPolynomial& A, const LambdaPolynomial& B) {
  const std::size_t modes = A.front().modes();
  const double hbar = A.front().hbar();
  LambdaPolynomial out(A.size() + B.size() - 1, BosonPolynomial(modes, hbar));
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < B.size(); ++j) {
      if (A[i].empty() || B[j].empty()) continue;
      out[i + j] += commutator(A[i], B[j]);
    }
  while (out.size() > 1 && out.back().empty()) out.pop_back();
  return out;
}

inline std::vector<PoolOperator> nested_pool(const BosonPolynomial& H_m, const BosonPolynomial& H_p, int order,
                                             const PoolOptions& opts = {}) {
  if (order < 1) throw Error(ErrorCode::ContractViolation, "expansion order must be positive");
  if (!H_m.is_hermitian(1e-10) || !H_p.is_hermitian(1e-10))
    throw Error(ErrorCode::ContractViolation, "mixer and problem Hamiltonians must be Hermitian");
  if (commutator(H_p, H_m).empty())
    throw Error(ErrorCode::DegeneratePool, "[H_p, H_m] = 0; the nested commutators vanish\nH_m:\n" + format(H_m) +
                                               "H_p:\n" + format(H_p));
  const std::size_t N = H_m.modes();
  const double hbar = H_m.hbar();
  const BosonPolynomial dH = H_p - H_m;
  const LambdaPolynomial H_a{H_m, dH};

  std::map<XPKey, PoolOperator> found;
  LambdaPolynomial nested{dH};
  const cplx i(0.0, 1.0);
  for (int depth = 1; depth <= 2 * order - 1; ++depth) {
    nested = lambda_commutator(H_a, nested);
    if (depth % 2 == 0) continue;
    const int k = (depth + 1) / 2;
    for (const auto& coeff_poly : nested) {
      if (coeff_poly.empty()) continue;
      const WeylSymbol sym = weyl_symbol(coeff_poly * i);
      double scale = 0.0;
      for (const auto& [key, c] : sym) scale = std::max(scale, std::abs(c));
      for (const auto& [key, c] : sym) {
        if (key.degree() == 0 || std::abs(c) <= opts.rel_tol * scale) continue;
        if (found.count(key)) continue;
        PoolOperator op{weyl_operator(key, N, c.real(), hbar),
                        xp_family_label(key, N),
                        xp_instance_label(key, N),
                        key.degree(),
                        key.arity(),
                        key,
                        c.real(),
                        k};
        found.emplace(key, std::move(op));
      }
    }
  }
  std::vector<PoolOperator> pool;
  pool.reserve(found.size());
  for (auto& [key, op] : found) pool.push_back(std::move(op));
  std::sort(pool.begin(), pool.end(), [](const PoolOperator& a, const PoolOperator& b) {
    if (a.degree != b.degree) return a.degree < b.degree;
    if (a.arity != b.arity) return a.arity < b.arity;
    if (a.label != b.label) return a.label < b.label;
    return a.instance < b.instance;
  });
  return pool;
}

/// Distinct family labels in pool order.
inline std::vector<std::string> pool_families(const std::vector<PoolOperator>& pool) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& op : pool)
    if (seen.insert(op.label).second) out.push_back(op.label);
  return out;
}

enum class Connectivity { NearestNeighbor, AllToAll };

/// Gate kinds whose generator realizes a pool family, in preference order.
/// BS at direction pi/2 generates x_i x_j + p_i p_j, so it also covers the
/// symmetric quadratic couplings.
inline std::vector<GateKind> realizing_gates(const std::string& family) {
  static const std::map<std::string, std::vector<GateKind>> table = {
      {"x_i", {GateKind::X, GateKind::Disp}},
      {"p_i", {GateKind::X, GateKind::Disp}},
      {"x_i^2", {GateKind::R, GateKind::QuadPhase}},
      {"p_i^2", {GateKind::R, GateKind::Pz}},
      {"x_i p_i", {GateKind::Squeeze}},
      {"x_i x_j", {GateKind::CZ, GateKind::BS}},
      {"p_i p_j", {GateKind::BS}},
      {"x_i p_j", {GateKind::TwoModeSqueeze, GateKind::BS}},
      {"x_i^3", {GateKind::CubicPhase}},
      {"x_i^4", {GateKind::Kerr}},
      {"p_i^4", {GateKind::Kerr}},
      {"x_i^2 x_j^2", {GateKind::CrossKerr}},
  };
  auto it = table.find(family);
  return it == table.end() ? std::vector<GateKind>{} : it->second;
}

inline std::vector<std::pair<std::size_t, std::size_t>> edges(std::size_t N, Connectivity c) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j)
      if (c == Connectivity::AllToAll || j == i + 1) out.emplace_back(i, j);
  return out;
}

/// Appends one layer of `kind` on every mode (single-mode) or every edge.
inline void add_gate_layer(Circuit& c, GateKind kind, Connectivity conn) {
  const std::vector<double> tail(gate_param_count(kind) - 1, 0.0);
  if (gate_arity(kind) == 1) {
    for (std::size_t m = 0; m < c.modes; ++m) c.add_trainable(kind, {m}, tail);
  } else {
    for (auto [i, j] : edges(c.modes, conn)) c.add_trainable(kind, {i, j}, tail);
  }
}

struct AnsatzSelection {
  Circuit circuit;
  std::vector<std::pair<std::string, GateKind>> families;  // family -> gate, in layout order
};

/// Filters the pool to whitelisted gates and lays them out as: the first
/// single-mode family on all modes, then two-mode families on the edges, then
/// the remaining single-mode families.
inline AnsatzSelection select_ansatz(const std::vector<PoolOperator>& pool, const std::set<GateKind>& whitelist,
                                     Connectivity conn, std::size_t N) {
  if (pool.empty()) throw Error(ErrorCode::NoRealizableAnsatz, "empty operator pool");
  std::vector<std::pair<std::string, GateKind>> matched;
  std::set<GateKind> used;
  for (const auto& family : pool_families(pool)) {
    for (auto kind : realizing_gates(family)) {
      if (!whitelist.count(kind) || used.count(kind)) continue;
      if (gate_arity(kind) == 2 && N < 2) continue;
      matched.emplace_back(family, kind);
      used.insert(kind);
      break;
    }
  }
  if (matched.empty()) throw Error(ErrorCode::NoRealizableAnsatz, "no pool family is realizable by the whitelisted gates");

  AnsatzSelection sel;
  sel.circuit.modes = N;
  std::vector<std::pair<std::string, GateKind>> singles, pairs;
  for (const auto& m : matched) (gate_arity(m.second) == 1 ? singles : pairs).push_back(m);
  std::vector<std::pair<std::string, GateKind>> layout;
  if (!singles.empty()) layout.push_back(singles.front());
  layout.insert(layout.end(), pairs.begin(), pairs.end());
  if (singles.size() > 1) layout.insert(layout.end(), singles.begin() + 1, singles.end());
  for (const auto& [family, kind] : layout) add_gate_layer(sel.circuit, kind, conn);
  sel.families = std::move(layout);
  return sel;
}

inline std::string format_pool(const std::vector<PoolOperator>& pool, bool with_generators = true) {
  std::string out;
  for (const auto& op : pool) {
    out += "[deg " + std::to_string(op.degree) + ", arity " + std::to_string(op.arity) + ", k=" +
           std::to_string(op.order) + "] " + op.label + " | " + op.instance + " | weight " +
           format_coefficient(op.weight) + "\n";
    if (with_generators) {
      std::istringstream lines(format(op.generator));
      for (std::string line; std::getline(lines, line);) out += "    " + line + "\n";
    }
  }
  return out;
}

// Mixers used for pool generation.

/// sum_i (p_i - p0)^2
inline BosonPolynomial phase_space_mixer(std::size_t N, double p0, double hbar = kDefaultHbar) {
  std::vector<XPTerm> terms;
  for (std::size_t k = 0; k < N; ++k) {
    std::vector<int> z(N, 0), p1(N, 0), p2(N, 0);
    p1[k] = 1;
    p2[k] = 2;
    terms.push_back({z, p2, 1.0});
    terms.push_back({z, p1, -2.0 * p0});
    terms.push_back({z, z, p0 * p0});
  }
  return from_xp(terms, N, hbar);
}

/// sum_i (x_i - x0)^2 + (p_i - p0)^2
inline BosonPolynomial fock_mixer(std::size_t N, double x0, double p0, double hbar = kDefaultHbar) {
  std::vector<XPTerm> terms;
  for (std::size_t k = 0; k < N; ++k) {
    std::vector<int> z(N, 0), e1(N, 0), e2(N, 0);
    e1[k] = 1;
    e2[k] = 2;
    terms.push_back({e2, z, 1.0});
    terms.push_back({e1, z, -2.0 * x0});
    terms.push_back({z, e2, 1.0});
    terms.push_back({z, e1, -2.0 * p0});
    terms.push_back({z, z, x0 * x0 + p0 * p0});
  }
  return from_xp(terms, N, hbar);
}

}  // namespace pcqo
