#pragma once

// Benchmark cost functions as real polynomials, with their operator
// Hamiltonians (x -> x-hat for phase-space problems, n -> n-hat for Fock
// problems) and an exhaustive integer oracle.

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pcqo/boson_polynomial.hpp"

namespace pcqo {

/// Real polynomial over N variables: exponent vector -> coefficient.
class RealPolynomial {
 public:
  using Exponents = std::vector<int>;

  explicit RealPolynomial(std::size_t n = 1) : n_(n) {}

  static RealPolynomial constant(std::size_t n, double c) {
    RealPolynomial p(n);
    p.add(Exponents(n, 0), c);
    return p;
  }

  static RealPolynomial variable(std::size_t n, std::size_t i, double c = 1.0) {
    RealPolynomial p(n);
    Exponents e(n, 0);
    e[i] = 1;
    p.add(e, c);
    return p;
  }

  std::size_t variables() const { return n_; }
  const std::map<Exponents, double>& terms() const { return terms_; }

  void add(const Exponents& e, double c) {
    auto& slot = terms_[e];
    slot += c;
    if (slot == 0.0) terms_.erase(e);
  }

  int degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
      int s = 0;
      for (int v : e) s += v;
      d = std::max(d, s);
    }
    return d;
  }

  double operator()(std::span<const double> x) const {
    double total = 0.0;
    for (const auto& [e, c] : terms_) {
      double t = c;
      for (std::size_t i = 0; i < n_; ++i)
        for (int k = 0; k < e[i]; ++k) t *= x[i];
      total += t;
    }
    return total;
  }

  RealPolynomial& operator+=(const RealPolynomial& o) {
    for (const auto& [e, c] : o.terms_) add(e, c);
    return *this;
  }
  friend RealPolynomial operator+(RealPolynomial a, const RealPolynomial& b) { return a += b; }
  friend RealPolynomial operator-(RealPolynomial a, const RealPolynomial& b) { return a += b * -1.0; }
  friend RealPolynomial operator*(RealPolynomial a, double s) {
    RealPolynomial out(a.n_);
    for (const auto& [e, c] : a.terms_) out.add(e, c * s);
    return out;
  }
  friend RealPolynomial operator*(const RealPolynomial& a, const RealPolynomial& b) {
    RealPolynomial out(a.n_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e(a.n_);
        for (std::size_t i = 0; i < a.n_; ++i) e[i] = ea[i] + eb[i];
        out.add(e, ca * cb);
      }
    return out;
  }

 private:
  std::size_t n_;
  std::map<Exponents, double> terms_;
};

enum class Encoding { PhaseSpace, FockSpace };

inline std::string to_string(Encoding e) { return e == Encoding::PhaseSpace ? "phase-space" : "fock"; }

struct KnownOptimum {
  double value = 0.0;
  std::vector<std::vector<double>> optimizers;
};

struct ProblemSpec {
  std::string name;
  Encoding encoding = Encoding::FockSpace;
  std::size_t N = 1;
  RealPolynomial cost;
  std::optional<KnownOptimum> known_optimum;
  std::map<std::string, double> penalties;

  double evaluate(std::span<const double> v) const {
    if (v.size() != N)
      throw Error(ErrorCode::DimensionMismatch, name + " expects " + std::to_string(N) + " values, got " +
                                                    std::to_string(v.size()));
    return cost(v);
  }

  double evaluate(std::initializer_list<double> v) const { return evaluate(std::span<const double>(v.begin(), v.size())); }

  /// F with x_i -> x-hat_i (phase space) or n_i -> n-hat_i (Fock).
  BosonPolynomial hamiltonian(double hbar = kDefaultHbar) const {
    if (encoding == Encoding::PhaseSpace) {
      std::vector<XPTerm> terms;
      for (const auto& [e, c] : cost.terms()) terms.push_back({e, std::vector<int>(N, 0), c});
      return from_xp(terms, N, hbar);
    }
    BosonPolynomial H(N, hbar);
    std::vector<std::vector<BosonPolynomial>> npow(N);
    for (const auto& [e, c] : cost.terms()) {
      auto term = BosonPolynomial::constant(N, c, hbar);
      for (std::size_t k = 0; k < N; ++k) {
        auto& cache = npow[k];
        if (cache.empty()) cache.push_back(BosonPolynomial::constant(N, 1.0, hbar));
        while (static_cast<int>(cache.size()) <= e[k]) cache.push_back(cache.back() * BosonPolynomial::number(N, k, hbar));
        if (e[k] > 0) term = term * cache[static_cast<std::size_t>(e[k])];
      }
      H += term;
    }
    return H;
  }
};

/// sum_{i<N-1} 100 (x_{i+1} - x_i^2)^2 + (1 - x_i)^2
inline ProblemSpec rosenbrock(std::size_t N) {
  if (N < 2) throw Error(ErrorCode::InvalidProblem, "Rosenbrock needs N >= 2");
  RealPolynomial F(N);
  for (std::size_t i = 0; i + 1 < N; ++i) {
    const auto xi = RealPolynomial::variable(N, i);
    const auto a = RealPolynomial::variable(N, i + 1) - xi * xi;
    const auto b = RealPolynomial::constant(N, 1.0) - xi;
    F += a * a * 100.0 + b * b;
  }
  ProblemSpec p{"rosenbrock", Encoding::PhaseSpace, N, F, KnownOptimum{0.0, {std::vector<double>(N, 1.0)}}, {}};
  return p;
}

/// (x1^3 + x2^3 + x3^3 - x1 + 2 x2 - 3 x3)^2 + (-x1 + x2 + x3)^2 + 0.01 (x1 + x2 + x3)
inline ProblemSpec toy_sixth() {
  constexpr std::size_t N = 3;
  const auto x1 = RealPolynomial::variable(N, 0), x2 = RealPolynomial::variable(N, 1), x3 = RealPolynomial::variable(N, 2);
  const auto a = x1 * x1 * x1 + x2 * x2 * x2 + x3 * x3 * x3 - x1 + x2 * 2.0 - x3 * 3.0;
  const auto b = x2 + x3 - x1;
  const auto F = a * a + b * b + (x1 + x2 + x3) * 0.01;
  return {"toy_sixth", Encoding::PhaseSpace, N, F, KnownOptimum{-0.028457, {{-1.42212, -0.127017, -1.29723}}}, {}};
}

struct UkpInstance {
  std::vector<double> values, weights;
  double capacity;
  double f_min;
  std::vector<double> n_opt;
};

/// Reference knapsack rows (N = 3 and N = 4, capacity 10) and their optima at penalty 4.
inline const std::vector<UkpInstance>& ukp_reference_instances() {
  static const std::vector<UkpInstance> rows = {
      {{3, 4, 1}, {9, 5, 8}, 10, -8, {0, 2, 0}},
      {{3, 4, 1, 3}, {2, 7, 6, 6}, 10, -15, {5, 0, 0, 0}},
  };
  return rows;
}

/// -sum v_i n_i + delta (sum w_i n_i - C)^2
inline ProblemSpec ukp(const std::vector<double>& v, const std::vector<double>& w, double C, double delta) {
  if (v.empty() || v.size() != w.size()) throw Error(ErrorCode::InvalidProblem, "values and weights must be non-empty and equal length");
  for (double wi : w)
    if (!(wi > 0)) throw Error(ErrorCode::InvalidProblem, "knapsack weights must be positive");
  if (!(delta > 0)) throw Error(ErrorCode::InvalidProblem, "knapsack penalty must be positive");
  const std::size_t N = v.size();
  RealPolynomial value(N), load = RealPolynomial::constant(N, -C);
  for (std::size_t i = 0; i < N; ++i) {
    value += RealPolynomial::variable(N, i, v[i]);
    load += RealPolynomial::variable(N, i, w[i]);
  }
  ProblemSpec p{"ukp", Encoding::FockSpace, N, value * -1.0 + load * load * delta, std::nullopt,
                {{"delta", delta}, {"capacity", C}}};
  if (delta == 4.0)
    for (const auto& row : ukp_reference_instances())
      if (row.values == v && row.weights == w && row.capacity == C) p.known_optimum = KnownOptimum{row.f_min, {row.n_opt}};
  return p;
}

using Adjacency = std::vector<std::vector<int>>;

inline Adjacency adjacency_from_edges(std::size_t nodes, const std::vector<std::pair<std::size_t, std::size_t>>& edge_list) {
  Adjacency Z(nodes, std::vector<int>(nodes, 0));
  for (auto [i, j] : edge_list) {
    if (i >= nodes || j >= nodes || i == j) throw Error(ErrorCode::InvalidProblem, "bad edge");
    Z[i][j] = Z[j][i] = 1;
  }
  return Z;
}

/// Five-node graph whose only maximum cliques are {0,1,3} and {0,2,3}.
inline Adjacency maxclique_graph_5() {
  return adjacency_from_edges(5, {{0, 1}, {1, 3}, {0, 3}, {0, 2}, {2, 3}, {1, 4}, {2, 4}});
}

/// Six-node extension of the five-node graph; vertex 5 joins 3 and 4, which
/// are not adjacent, so the maximum cliques stay {0,1,3} and {0,2,3}.
inline Adjacency maxclique_graph_6() {
  return adjacency_from_edges(6, {{0, 1}, {1, 3}, {0, 3}, {0, 2}, {2, 3}, {1, 4}, {2, 4}, {3, 5}, {4, 5}});
}

struct OracleResult {
  double f_min = 0.0;
  std::vector<std::vector<int>> argmin;
};

inline OracleResult brute_force_integer_min(const ProblemSpec& p, int bound, double tie_tol = 1e-9);

/// -sum n_i + delta1 sum_{i != j} (1 - Z_ij) n_i n_j + delta2 sum n_i (n_i - 1)
inline ProblemSpec maxclique(const Adjacency& Z, double delta1, double delta2) {
  const std::size_t N = Z.size();
  if (N == 0) throw Error(ErrorCode::InvalidProblem, "empty graph");
  for (std::size_t i = 0; i < N; ++i) {
    if (Z[i].size() != N) throw Error(ErrorCode::InvalidProblem, "adjacency matrix must be square");
    if (Z[i][i] != 0) throw Error(ErrorCode::InvalidProblem, "adjacency matrix must have a zero diagonal");
    for (std::size_t j = 0; j < N; ++j) {
      if (Z[i][j] != 0 && Z[i][j] != 1) throw Error(ErrorCode::InvalidProblem, "adjacency matrix must be 0/1");
      if (Z[i][j] != Z[j][i]) throw Error(ErrorCode::InvalidProblem, "adjacency matrix must be symmetric");
    }
  }
  RealPolynomial F(N);
  for (std::size_t i = 0; i < N; ++i) {
    const auto ni = RealPolynomial::variable(N, i);
    F += ni * -1.0;
    F += (ni * ni - ni) * delta2;
    for (std::size_t j = 0; j < N; ++j)
      if (i != j && Z[i][j] == 0) F += ni * RealPolynomial::variable(N, j) * delta1;
  }
  ProblemSpec p{"maxclique", Encoding::FockSpace, N, F, std::nullopt, {{"delta1", delta1}, {"delta2", delta2}}};
  if (N <= 20) {
    const auto oracle = brute_force_integer_min(p, 1);
    KnownOptimum opt{oracle.f_min, {}};
    for (const auto& a : oracle.argmin) opt.optimizers.emplace_back(a.begin(), a.end());
    p.known_optimum = std::move(opt);
  }
  return p;
}

/// (n_0 + n_2 - 0.75)^2 on a register of `modes` modes (4, or 8 for the full chip).
inline ProblemSpec two_mode_toy(std::size_t modes = 4) {
  if (modes < 3) throw Error(ErrorCode::InvalidProblem, "two-mode toy needs at least 3 modes");
  const auto s = RealPolynomial::variable(modes, 0) + RealPolynomial::variable(modes, 2) - RealPolynomial::constant(modes, 0.75);
  return {"two_mode_toy", Encoding::FockSpace, modes, s * s, KnownOptimum{0.0, {}}, {}};
}

inline OracleResult brute_force_integer_min(const ProblemSpec& p, int bound, double tie_tol) {
  if (bound < 0) throw Error(ErrorCode::ContractViolation, "bound must be non-negative");
  const double space = std::pow(static_cast<double>(bound) + 1.0, static_cast<double>(p.N));
  if (space > 1e7) throw Error(ErrorCode::SearchSpaceTooLarge, "search space has " + std::to_string(space) + " points");
  OracleResult best{std::numeric_limits<double>::infinity(), {}};
  std::vector<int> n(p.N, 0);
  std::vector<double> v(p.N, 0.0);
  while (true) {
    for (std::size_t i = 0; i < p.N; ++i) v[i] = n[i];
    const double f = p.evaluate(v);
    if (f < best.f_min - tie_tol) {
      best.f_min = f;
      best.argmin.assign(1, n);
    } else if (std::abs(f - best.f_min) <= tie_tol) {
      best.argmin.push_back(n);
    }
    std::size_t k = p.N;
    while (k > 0) {
      --k;
      if (n[k] < bound) {
        ++n[k];
        break;
      }
      n[k] = 0;
      if (k == 0) return best;
    }
    if (p.N == 0) return best;
  }
}

}  // namespace pcqo
