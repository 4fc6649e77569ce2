#pragma once

// Normal-ordered polynomials in per-mode ladder operators, their x/p
// (Weyl-symmetric) symbols, and realization as truncated matrices.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pcqo/error.hpp"
#include "pcqo/fock.hpp"

namespace pcqo {

inline constexpr std::size_t kMaxPolyModes = 8;

/// Per mode k: e[2k] creation power, e[2k+1] annihilation power, meaning
/// a_k^dag^e[2k] a_k^e[2k+1].
struct Monomial {
  std::array<std::uint8_t, 2 * kMaxPolyModes> e{};

  int creation(std::size_t k) const { return e[2 * k]; }
  int annihilation(std::size_t k) const { return e[2 * k + 1]; }

  int degree() const {
    int d = 0;
    for (auto v : e) d += v;
    return d;
  }

  Monomial adjoint() const {
    Monomial m;
    for (std::size_t k = 0; k < kMaxPolyModes; ++k) {
      m.e[2 * k] = e[2 * k + 1];
      m.e[2 * k + 1] = e[2 * k];
    }
    return m;
  }

  auto operator<=>(const Monomial&) const = default;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const {
    std::uint64_t lo = 0, hi = 0;
    for (std::size_t i = 0; i < 8; ++i) lo = (lo << 8) | m.e[i];
    for (std::size_t i = 8; i < 16; ++i) hi = (hi << 8) | m.e[i];
    return std::hash<std::uint64_t>{}(lo * 0x9e3779b97f4a7c15ULL ^ hi);
  }
};

namespace detail {

inline double falling(int n, int j) {
  double r = 1.0;
  for (int t = 0; t < j; ++t) r *= static_cast<double>(n - t);
  return r;
}

inline double factorial(int n) { return falling(n, n); }

inline double binom(int n, int k) { return falling(n, k) / factorial(k); }

}  // namespace detail

class BosonPolynomial {
 public:
  using TermMap = std::map<Monomial, cplx>;

  static constexpr double kPruneTol = 1e-12;

  explicit BosonPolynomial(std::size_t modes = 1, double hbar = kDefaultHbar) : modes_(modes), hbar_(hbar) {
    if (modes == 0 || modes > kMaxPolyModes)
      throw Error(ErrorCode::DimensionMismatch, "polynomials support 1.." + std::to_string(kMaxPolyModes) + " modes");
  }

  static BosonPolynomial constant(std::size_t modes, cplx c, double hbar = kDefaultHbar) {
    BosonPolynomial p(modes, hbar);
    p.add_term(Monomial{}, c);
    return p;
  }

  static BosonPolynomial monomial(std::size_t modes, const Monomial& m, cplx c = 1.0, double hbar = kDefaultHbar) {
    BosonPolynomial p(modes, hbar);
    p.add_term(m, c);
    return p;
  }

  static BosonPolynomial lowering(std::size_t modes, std::size_t k, double hbar = kDefaultHbar) {
    Monomial m;
    m.e[2 * k + 1] = 1;
    return monomial(modes, m, 1.0, hbar);
  }

  static BosonPolynomial raising(std::size_t modes, std::size_t k, double hbar = kDefaultHbar) {
    Monomial m;
    m.e[2 * k] = 1;
    return monomial(modes, m, 1.0, hbar);
  }

  static BosonPolynomial number(std::size_t modes, std::size_t k, double hbar = kDefaultHbar) {
    Monomial m;
    m.e[2 * k] = 1;
    m.e[2 * k + 1] = 1;
    return monomial(modes, m, 1.0, hbar);
  }

  static BosonPolynomial position(std::size_t modes, std::size_t k, double hbar = kDefaultHbar) {
    const double s = std::sqrt(hbar / 2.0);
    return (lowering(modes, k, hbar) + raising(modes, k, hbar)) * cplx(s);
  }

  static BosonPolynomial momentum(std::size_t modes, std::size_t k, double hbar = kDefaultHbar) {
    const double s = std::sqrt(hbar / 2.0);
    return (raising(modes, k, hbar) - lowering(modes, k, hbar)) * cplx(0.0, s);
  }

  std::size_t modes() const { return modes_; }
  double hbar() const { return hbar_; }
  const TermMap& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  cplx coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? cplx{} : it->second;
  }

  void add_term(const Monomial& m, cplx c) {
    for (std::size_t k = modes_; k < kMaxPolyModes; ++k)
      if (m.e[2 * k] || m.e[2 * k + 1]) throw Error(ErrorCode::DimensionMismatch, "monomial touches a mode beyond the polynomial's mode count");
    auto& slot = terms_[m];
    slot += c;
    if (std::abs(slot) < kPruneTol) terms_.erase(m);
  }

  int degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
  }

  BosonPolynomial adjoint() const {
    BosonPolynomial out(modes_, hbar_);
    for (const auto& [m, c] : terms_) out.terms_.emplace(m.adjoint(), std::conj(c));
    return out;
  }

  bool is_hermitian(double tol = 1e-12) const {
    for (const auto& [m, c] : terms_) {
      if (std::abs(std::conj(c) - coefficient(m.adjoint())) > tol * std::max(1.0, std::abs(c))) return false;
    }
    return true;
  }

  double max_coefficient() const {
    double m = 0.0;
    for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c));
    return m;
  }

  BosonPolynomial& operator+=(const BosonPolynomial& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }

  BosonPolynomial& operator-=(const BosonPolynomial& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }

  BosonPolynomial& operator*=(cplx s) {
    if (s == cplx{}) {
      terms_.clear();
      return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
      it->second *= s;
      it = std::abs(it->second) < kPruneTol ? terms_.erase(it) : std::next(it);
    }
    return *this;
  }

  friend BosonPolynomial operator+(BosonPolynomial a, const BosonPolynomial& b) { return a += b; }
  friend BosonPolynomial operator-(BosonPolynomial a, const BosonPolynomial& b) { return a -= b; }
  friend BosonPolynomial operator*(BosonPolynomial a, cplx s) { return a *= s; }
  friend BosonPolynomial operator*(cplx s, BosonPolynomial a) { return a *= s; }

  /// Operator product, normal-ordered with [a_j, a_k^dag] = delta_jk.
  friend BosonPolynomial operator*(const BosonPolynomial& A, const BosonPolynomial& B) {
    A.check_compatible(B);
    std::unordered_map<Monomial, cplx, MonomialHash> acc;
    acc.reserve(A.size() * B.size());
    std::vector<std::pair<Monomial, double>> partial, next;
    for (const auto& [ma, ca] : A.terms_) {
      for (const auto& [mb, cb] : B.terms_) {
        partial.assign(1, {Monomial{}, 1.0});
        for (std::size_t k = 0; k < A.modes_; ++k) {
          const int c1 = ma.e[2 * k], b1 = ma.e[2 * k + 1];
          const int c2 = mb.e[2 * k], b2 = mb.e[2 * k + 1];
          const int jmax = std::min(b1, c2);
          if (jmax == 0) {
            for (auto& [m, w] : partial) {
              m.e[2 * k] = static_cast<std::uint8_t>(c1 + c2);
              m.e[2 * k + 1] = static_cast<std::uint8_t>(b1 + b2);
            }
            continue;
          }
          // a^b1 a^dag^c2 = sum_j C(b1,j) C(c2,j) j! a^dag^(c2-j) a^(b1-j)
          next.clear();
          for (const auto& [m, w] : partial) {
            for (int j = 0; j <= jmax; ++j) {
              Monomial mm = m;
              mm.e[2 * k] = static_cast<std::uint8_t>(c1 + c2 - j);
              mm.e[2 * k + 1] = static_cast<std::uint8_t>(b1 + b2 - j);
              next.emplace_back(mm, w * detail::binom(b1, j) * detail::binom(c2, j) * detail::factorial(j));
            }
          }
          partial.swap(next);
        }
        const cplx c = ca * cb;
        for (const auto& [m, w] : partial) acc[m] += c * w;
      }
    }
    BosonPolynomial out(A.modes_, A.hbar_);
    for (const auto& [m, c] : acc)
      if (std::abs(c) >= kPruneTol) out.terms_.emplace(m, c);
    return out;
  }

  bool operator==(const BosonPolynomial& o) const {
    return modes_ == o.modes_ && hbar_ == o.hbar_ && terms_ == o.terms_;
  }

  /// Largest coefficient magnitude of (this - o).
  double distance(const BosonPolynomial& o) const { return (*this - o).max_coefficient(); }

 private:
  void check_compatible(const BosonPolynomial& o) const {
    if (modes_ != o.modes_) throw Error(ErrorCode::DimensionMismatch, "polynomials on different mode counts");
    if (hbar_ != o.hbar_) throw Error(ErrorCode::ContractViolation, "polynomials built with different hbar");
  }

  std::size_t modes_;
  double hbar_;
  TermMap terms_;
};

inline BosonPolynomial power(const BosonPolynomial& p, int k) {
  auto out = BosonPolynomial::constant(p.modes(), 1.0, p.hbar());
  for (int i = 0; i < k; ++i) out = out * p;
  return out;
}

inline BosonPolynomial commutator(const BosonPolynomial& A, const BosonPolynomial& B) { return A * B - B * A; }

/// One x/p product term: prod_k x_k^x[k] p_k^p[k] (x before p within a mode).
struct XPTerm {
  std::vector<int> x;
  std::vector<int> p;
  cplx coeff = 1.0;
};

inline BosonPolynomial from_xp(const std::vector<XPTerm>& terms, std::size_t N, double hbar = kDefaultHbar) {
  BosonPolynomial out(N, hbar);
  std::vector<std::vector<BosonPolynomial>> xpow(N), ppow(N);
  auto get = [&](std::vector<std::vector<BosonPolynomial>>& cache, std::size_t k, int e, bool is_x) {
    auto& v = cache[k];
    if (v.empty()) v.push_back(BosonPolynomial::constant(N, 1.0, hbar));
    const auto base = is_x ? BosonPolynomial::position(N, k, hbar) : BosonPolynomial::momentum(N, k, hbar);
    while (static_cast<int>(v.size()) <= e) v.push_back(v.back() * base);
    return v[static_cast<std::size_t>(e)];
  };
  for (const auto& t : terms) {
    if (!std::isfinite(t.coeff.real()) || !std::isfinite(t.coeff.imag()))
      throw Error(ErrorCode::ContractViolation, "non-finite coefficient");
    auto term = BosonPolynomial::constant(N, t.coeff, hbar);
    for (std::size_t k = 0; k < N; ++k) {
      const int xe = k < t.x.size() ? t.x[k] : 0;
      const int pe = k < t.p.size() ? t.p[k] : 0;
      if (xe > 0) term = term * get(xpow, k, xe, true);
      if (pe > 0) term = term * get(ppow, k, pe, false);
    }
    out += term;
  }
  return out;
}

/// Realizes each monomial as the Kronecker product of truncated a^dag^c a^b.
inline TruncatedOperator to_matrix(const BosonPolynomial& P, std::size_t D) {
  require_cutoff(D);
  const std::size_t N = P.modes();
  const std::size_t dim = ipow(D, N);
  const Matrix a = annihilation(D, P.hbar()).entries;
  const Matrix ad = a.adjoint();
  std::map<std::pair<int, int>, Matrix> factors;
  auto factor = [&](int c, int b) -> const Matrix& {
    auto it = factors.find({c, b});
    if (it != factors.end()) return it->second;
    Matrix m = Matrix::Identity(D, D);
    for (int i = 0; i < c; ++i) m = m * ad;
    for (int i = 0; i < b; ++i) m = m * a;
    return factors.emplace(std::make_pair(c, b), std::move(m)).first->second;
  };
  Matrix out = Matrix::Zero(dim, dim);
  for (const auto& [m, coeff] : P.terms()) {
    Matrix acc = Matrix::Constant(1, 1, coeff);
    for (std::size_t k = 0; k < N; ++k) {
      const Matrix& f = factor(m.creation(k), m.annihilation(k));
      Matrix next = Matrix::Zero(acc.rows() * D, acc.cols() * D);
      for (Eigen::Index r = 0; r < acc.rows(); ++r)
        for (Eigen::Index c = 0; c < acc.cols(); ++c)
          if (acc(r, c) != cplx{}) next.block(r * D, c * D, D, D) = acc(r, c) * f;
      acc.swap(next);
    }
    out += acc;
  }
  return {D, N, P.hbar(), std::move(out)};
}

/// Stable text form: one term per line, "coeff · a†_k^c a_k^b ⊗ ...".
inline std::string format_coefficient(cplx c) {
  std::ostringstream os;
  os.precision(12);
  if (c.imag() == 0.0) {
    os << c.real();
  } else if (c.real() == 0.0) {
    os << c.imag() << "i";
  } else {
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
  }
  return os.str();
}

inline std::string format_monomial(const Monomial& m, std::size_t modes) {
  std::string s;
  for (std::size_t k = 0; k < modes; ++k) {
    const int c = m.creation(k), b = m.annihilation(k);
    if (c == 0 && b == 0) continue;
    std::string f;
    if (c > 0) f += "a†_" + std::to_string(k) + (c > 1 ? "^" + std::to_string(c) : "");
    if (b > 0) f += std::string(f.empty() ? "" : " ") + "a_" + std::to_string(k) + (b > 1 ? "^" + std::to_string(b) : "");
    s += (s.empty() ? "" : " ⊗ ") + f;
  }
  return s.empty() ? "I" : s;
}

inline std::string format(const BosonPolynomial& P) {
  if (P.empty()) return "0\n";
  std::string out;
  for (const auto& [m, c] : P.terms()) out += format_coefficient(c) + " · " + format_monomial(m, P.modes()) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Weyl symbols: the unique real polynomial f(x, p) whose symmetric ordering
// reproduces a Hermitian operator. Normal-ordered and Weyl symbols are related
// per mode by f_W = exp(-1/2 d_alpha d_alpha*) f_N.

/// Per mode k: e[2k] power of x_k, e[2k+1] power of p_k.
struct XPKey {
  std::array<std::uint8_t, 2 * kMaxPolyModes> e{};

  int x(std::size_t k) const { return e[2 * k]; }
  int p(std::size_t k) const { return e[2 * k + 1]; }

  int degree() const {
    int d = 0;
    for (auto v : e) d += v;
    return d;
  }

  int arity() const {
    int a = 0;
    for (std::size_t k = 0; k < kMaxPolyModes; ++k) a += (e[2 * k] || e[2 * k + 1]) ? 1 : 0;
    return a;
  }

  auto operator<=>(const XPKey&) const = default;
};

using WeylSymbol = std::map<XPKey, cplx>;

namespace detail {

// (mx, px) -> coefficient, for one mode.
using ModeXP = std::map<std::pair<int, int>, cplx>;

inline ModeXP normal_to_weyl_mode(int c, int b, double hbar) {
  const double s = std::sqrt(hbar / 2.0);
  const cplx i(0.0, 1.0);
  ModeXP out;
  for (int j = 0; j <= std::min(c, b); ++j) {
    const double w = std::pow(-0.5, j) / factorial(j) * falling(c, j) * falling(b, j);
    const int m = c - j, n = b - j;  // conj(alpha)^m alpha^n, alpha = (x + i p) / (2 s)
    const double norm = std::pow(2.0 * s, -(m + n));
    for (int u = 0; u <= m; ++u)
      for (int v = 0; v <= n; ++v) {
        const cplx coeff = w * norm * binom(m, u) * binom(n, v) * std::pow(-i, u) * std::pow(i, v);
        out[{m - u + n - v, u + v}] += coeff;
      }
  }
  return out;
}

// Weyl monomial x^a p^b of one mode -> normal-ordered (c, b) -> coefficient.
inline std::map<std::pair<int, int>, cplx> weyl_to_normal_mode(int a, int b, double hbar) {
  const double s = std::sqrt(hbar / 2.0);
  const cplx i(0.0, 1.0);
  // x = s (alpha + conj alpha), p = i s (conj alpha - alpha): classical expansion.
  std::map<std::pair<int, int>, cplx> sym;  // (power of conj alpha, power of alpha)
  for (int u = 0; u <= a; ++u)
    for (int v = 0; v <= b; ++v) {
      const cplx coeff = std::pow(s, a + b) * binom(a, u) * binom(b, v) * std::pow(i, b) * std::pow(-1.0, b - v);
      sym[{u + v, (a - u) + (b - v)}] += coeff;
    }
  std::map<std::pair<int, int>, cplx> out;
  for (const auto& [mn, c] : sym) {
    const auto [m, n] = mn;
    for (int j = 0; j <= std::min(m, n); ++j)
      out[{m - j, n - j}] += c * std::pow(0.5, j) / factorial(j) * falling(m, j) * falling(n, j);
  }
  return out;
}

}  // namespace detail

inline WeylSymbol weyl_symbol(const BosonPolynomial& P) {
  const std::size_t N = P.modes();
  std::map<std::tuple<int, int>, detail::ModeXP> cache;
  WeylSymbol out;
  for (const auto& [m, coeff] : P.terms()) {
    std::vector<std::pair<XPKey, cplx>> partial{{XPKey{}, coeff}};
    for (std::size_t k = 0; k < N; ++k) {
      const int c = m.creation(k), b = m.annihilation(k);
      if (c == 0 && b == 0) continue;
      auto it = cache.find({c, b});
      if (it == cache.end()) it = cache.emplace(std::make_tuple(c, b), detail::normal_to_weyl_mode(c, b, P.hbar())).first;
      std::vector<std::pair<XPKey, cplx>> next;
      for (const auto& [key, w] : partial)
        for (const auto& [xp, v] : it->second) {
          if (v == cplx{}) continue;
          XPKey kk = key;
          kk.e[2 * k] = static_cast<std::uint8_t>(xp.first);
          kk.e[2 * k + 1] = static_cast<std::uint8_t>(xp.second);
          next.emplace_back(kk, w * v);
        }
      partial.swap(next);
    }
    for (const auto& [key, w] : partial) out[key] += w;
  }
  for (auto it = out.begin(); it != out.end();) it = std::abs(it->second) < 1e-12 ? out.erase(it) : std::next(it);
  return out;
}

/// Symmetric-ordered operator of a single Weyl monomial, as a normal-ordered polynomial.
inline BosonPolynomial weyl_operator(const XPKey& key, std::size_t N, cplx coeff = 1.0, double hbar = kDefaultHbar) {
  std::vector<std::pair<Monomial, cplx>> partial{{Monomial{}, coeff}};
  for (std::size_t k = 0; k < N; ++k) {
    if (key.x(k) == 0 && key.p(k) == 0) continue;
    const auto mode = detail::weyl_to_normal_mode(key.x(k), key.p(k), hbar);
    std::vector<std::pair<Monomial, cplx>> next;
    for (const auto& [m, w] : partial)
      for (const auto& [cb, v] : mode) {
        if (std::abs(v) < 1e-15) continue;
        Monomial mm = m;
        mm.e[2 * k] = static_cast<std::uint8_t>(cb.first);
        mm.e[2 * k + 1] = static_cast<std::uint8_t>(cb.second);
        next.emplace_back(mm, w * v);
      }
    partial.swap(next);
  }
  BosonPolynomial out(N, hbar);
  for (const auto& [m, w] : partial) out.add_term(m, w);
  return out;
}

/// Concrete label of a Weyl monomial, e.g. "x0^2 p0 x1".
inline std::string xp_instance_label(const XPKey& key, std::size_t N) {
  std::string s;
  for (std::size_t k = 0; k < N; ++k) {
    auto add = [&](char q, int e) {
      if (e == 0) return;
      s += (s.empty() ? "" : " ") + std::string(1, q) + std::to_string(k) + (e > 1 ? "^" + std::to_string(e) : "");
    };
    add('x', key.x(k));
    add('p', key.p(k));
  }
  return s.empty() ? "1" : s;
}

/// Mode-agnostic family label, e.g. "x_i p_j": per-mode factors sorted by
/// descending x power then ascending p power, then lettered i, j, k, ...
inline std::string xp_family_label(const XPKey& key, std::size_t N) {
  std::vector<std::pair<int, int>> factors;
  for (std::size_t k = 0; k < N; ++k)
    if (key.x(k) || key.p(k)) factors.emplace_back(key.x(k), key.p(k));
  std::sort(factors.begin(), factors.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  static constexpr const char* kLetters[] = {"i", "j", "k", "l", "m", "q", "r", "s"};
  std::string s;
  for (std::size_t f = 0; f < factors.size(); ++f) {
    auto add = [&](char q, int e) {
      if (e == 0) return;
      s += (s.empty() ? "" : " ") + std::string(1, q) + "_" + kLetters[f] + (e > 1 ? "^" + std::to_string(e) : "");
    };
    add('x', factors[f].first);
    add('p', factors[f].second);
  }
  return s.empty() ? "1" : s;
}

}  // namespace pcqo
