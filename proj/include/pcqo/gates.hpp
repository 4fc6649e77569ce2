#pragma once

// Table-style CV gate constructors and the parameterized circuit container.
//
// Every gate is exp(i * m * G) of a truncated Hermitian generator G, where m
// is the gate's magnitude parameter and G may depend on a phase-like
// direction parameter. Conventions:
//   R(phi)         exp(i phi n)
//   Disp(alpha)    exp(alpha a^dag - alpha* a), params (Re alpha, Im alpha)
//   Squeeze(r,phi) exp(r/2 (e^{-i phi} a^2 - e^{i phi} a^dag^2))
//   BS(theta,phi)  exp(theta (e^{i phi} a_i a_j^dag - e^{-i phi} a_i^dag a_j))
//   QuadPhase(s)   exp(i s x^2 / (2 hbar))
//   CZ(s)          exp(i s x_i x_j / hbar)
//   S2(z)          exp(z a_i^dag a_j^dag - z* a_i a_j), params (Re z, Im z)
//   Cubic(gamma)   exp(i gamma x^3 / (3 hbar))
//   Kerr(kappa)    exp(i kappa n^2)
//   CrossKerr      exp(i kappa n_i n_j)
//   X(s)           exp(-i s p / hbar), shifts <x> by +s
//   Pz(s)          R(-pi/2) P(s) R(pi/2) = exp(i s p^2 / (2 hbar))

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pcqo/fock.hpp"

namespace pcqo {

enum class GateKind : std::uint8_t {
  R,
  Disp,
  Squeeze,
  BS,
  QuadPhase,
  CZ,
  TwoModeSqueeze,
  CubicPhase,
  Kerr,
  CrossKerr,
  X,
  Pz,
};

inline constexpr std::array<GateKind, 12> kAllGateKinds = {
    GateKind::R,          GateKind::Disp, GateKind::Squeeze,   GateKind::BS, GateKind::QuadPhase, GateKind::CZ,
    GateKind::TwoModeSqueeze, GateKind::CubicPhase, GateKind::Kerr, GateKind::CrossKerr, GateKind::X, GateKind::Pz};

inline std::string_view gate_name(GateKind k) {
  switch (k) {
    case GateKind::R: return "R";
    case GateKind::Disp: return "Disp";
    case GateKind::Squeeze: return "Squeeze";
    case GateKind::BS: return "BS";
    case GateKind::QuadPhase: return "QuadPhase";
    case GateKind::CZ: return "CZ";
    case GateKind::TwoModeSqueeze: return "S2";
    case GateKind::CubicPhase: return "V";
    case GateKind::Kerr: return "K";
    case GateKind::CrossKerr: return "CK";
    case GateKind::X: return "X";
    case GateKind::Pz: return "Pz";
  }
  return "?";
}

inline std::optional<GateKind> parse_gate_kind(std::string_view name) {
  for (auto k : kAllGateKinds)
    if (gate_name(k) == name) return k;
  if (name == "TwoModeSqueeze") return GateKind::TwoModeSqueeze;
  if (name == "CubicPhase") return GateKind::CubicPhase;
  if (name == "Kerr") return GateKind::Kerr;
  if (name == "CrossKerr") return GateKind::CrossKerr;
  if (name == "P") return GateKind::QuadPhase;
  return std::nullopt;
}

inline std::size_t gate_arity(GateKind k) {
  switch (k) {
    case GateKind::BS:
    case GateKind::CZ:
    case GateKind::TwoModeSqueeze:
    case GateKind::CrossKerr: return 2;
    default: return 1;
  }
}

inline std::size_t gate_param_count(GateKind k) {
  switch (k) {
    case GateKind::Disp:
    case GateKind::Squeeze:
    case GateKind::BS:
    case GateKind::TwoModeSqueeze: return 2;
    default: return 1;
  }
}

/// A gate parameter: constant + scale * theta[slot], or just the constant.
struct ParamBinding {
  std::optional<std::size_t> slot;
  double scale = 1.0;
  double constant = 0.0;

  static ParamBinding trainable(std::size_t slot, double scale = 1.0) { return {slot, scale, 0.0}; }
  static ParamBinding fixed(double value) { return {std::nullopt, 1.0, value}; }

  double resolve(std::span<const double> theta) const {
    return slot ? constant + scale * theta[*slot] : constant;
  }
};

struct GateSpec {
  GateKind kind = GateKind::R;
  std::vector<std::size_t> targets;
  std::vector<ParamBinding> params;
};

namespace detail {

inline double gate_magnitude(GateKind k, std::span<const double> v) {
  if (k == GateKind::Disp || k == GateKind::TwoModeSqueeze) return std::hypot(v[0], v[1]);
  return v[0];
}

inline double gate_direction(GateKind k, std::span<const double> v) {
  switch (k) {
    case GateKind::Disp:
    case GateKind::TwoModeSqueeze: return (v[0] == 0.0 && v[1] == 0.0) ? 0.0 : std::atan2(v[1], v[0]);
    case GateKind::Squeeze:
    case GateKind::BS: return v[1];
    default: return 0.0;
  }
}

/// Unit generator: gate = exp(i * magnitude * G).
inline Matrix unit_generator(GateKind k, double phi, std::size_t D, double hbar) {
  const Matrix a = annihilation(D, hbar).entries;
  const Matrix ad = a.adjoint();
  const auto [xo, po] = quadratures(D, hbar);
  const Matrix& x = xo.entries;
  const Matrix& p = po.entries;
  const Matrix n = number_operator(D, hbar).entries;
  const Matrix I = Matrix::Identity(D, D);
  const cplx i(0.0, 1.0);
  const cplx e = std::polar(1.0, phi);
  auto kr = [D](const Matrix& A, const Matrix& B) {
    Matrix out(D * D, D * D);
    for (std::size_t r = 0; r < D; ++r)
      for (std::size_t c = 0; c < D; ++c) out.block(r * D, c * D, D, D) = A(r, c) * B;
    return out;
  };
  switch (k) {
    case GateKind::R: return n;
    case GateKind::Disp: return -i * (e * ad - std::conj(e) * a);
    case GateKind::Squeeze: return -i * 0.5 * (std::conj(e) * (a * a) - e * (ad * ad));
    case GateKind::BS: {
      const Matrix ai = kr(a, I), aj = kr(I, a);
      return -i * (e * (ai * aj.adjoint()) - std::conj(e) * (ai.adjoint() * aj));
    }
    case GateKind::QuadPhase: return (x * x) / (2.0 * hbar);
    case GateKind::CZ: return kr(x, x) / hbar;
    case GateKind::TwoModeSqueeze: {
      const Matrix ai = kr(a, I), aj = kr(I, a);
      return -i * (e * (ai.adjoint() * aj.adjoint()) - std::conj(e) * (ai * aj));
    }
    case GateKind::CubicPhase: return (x * x * x) / (3.0 * hbar);
    case GateKind::Kerr: return n * n;
    case GateKind::CrossKerr: return kr(n, n);
    case GateKind::X: return -p / hbar;
    case GateKind::Pz: return (p * p) / (2.0 * hbar);
  }
  throw Error(ErrorCode::ContractViolation, "unknown gate kind");
}

inline std::uint64_t bits(double v) { return std::bit_cast<std::uint64_t>(v); }

struct SpectrumKey {
  GateKind kind;
  std::size_t cutoff;
  std::uint64_t hbar;
  std::uint64_t direction;
  bool operator==(const SpectrumKey&) const = default;
};

struct MatrixKey {
  GateKind kind;
  std::size_t cutoff;
  std::uint64_t hbar;
  std::array<std::uint64_t, 2> params;
  bool operator==(const MatrixKey&) const = default;
};

struct KeyHash {
  static std::size_t mix(std::size_t h, std::uint64_t v) {
    return h ^ (std::hash<std::uint64_t>{}(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
  }
  std::size_t operator()(const SpectrumKey& k) const {
    std::size_t h = static_cast<std::size_t>(k.kind);
    h = mix(h, k.cutoff);
    h = mix(h, k.hbar);
    return mix(h, k.direction);
  }
  std::size_t operator()(const MatrixKey& k) const {
    std::size_t h = static_cast<std::size_t>(k.kind);
    h = mix(h, k.cutoff);
    h = mix(h, k.hbar);
    h = mix(h, k.params[0]);
    return mix(h, k.params[1]);
  }
};

}  // namespace detail

/// Process-wide cache of generator spectra and gate matrices keyed by the
/// exact bit pattern of (kind, parameters, cutoff, hbar). Readers share a
/// lock; inserts are serialized. The matrix store is dropped wholesale when it
/// exceeds its byte budget.
class GateCache {
 public:
  static GateCache& global() {
    static GateCache cache;
    return cache;
  }

  std::shared_ptr<const Spectrum> spectrum(GateKind kind, double direction, std::size_t D, double hbar) {
    const detail::SpectrumKey key{kind, D, detail::bits(hbar), detail::bits(direction)};
    {
      std::shared_lock lock(mutex_);
      if (auto it = spectra_.find(key); it != spectra_.end()) return it->second;
    }
    auto sp = std::make_shared<const Spectrum>(hermitian_spectrum(detail::unit_generator(kind, direction, D, hbar)));
    std::unique_lock lock(mutex_);
    if (spectra_.size() > kMaxSpectra) spectra_.clear();
    return spectra_.emplace(key, std::move(sp)).first->second;
  }

  std::shared_ptr<const Matrix> matrix(GateKind kind, std::span<const double> values, std::size_t D, double hbar) {
    detail::MatrixKey key{kind, D, detail::bits(hbar), {detail::bits(values[0]), 0}};
    if (values.size() > 1) key.params[1] = detail::bits(values[1]);
    {
      std::shared_lock lock(mutex_);
      if (auto it = matrices_.find(key); it != matrices_.end()) return it->second;
    }
    const auto sp = spectrum(kind, detail::gate_direction(kind, values), D, hbar);
    auto U = std::make_shared<const Matrix>(exp_from_spectrum(*sp, detail::gate_magnitude(kind, values)));
    const std::size_t bytes = static_cast<std::size_t>(U->size()) * sizeof(cplx);
    std::unique_lock lock(mutex_);
    if (matrix_bytes_ + bytes > kMaxMatrixBytes) {
      matrices_.clear();
      matrix_bytes_ = 0;
    }
    auto [it, inserted] = matrices_.emplace(key, std::move(U));
    if (inserted) matrix_bytes_ += bytes;
    return it->second;
  }

  void clear() {
    std::unique_lock lock(mutex_);
    spectra_.clear();
    matrices_.clear();
    matrix_bytes_ = 0;
  }

 private:
  static constexpr std::size_t kMaxSpectra = 256;
  static constexpr std::size_t kMaxMatrixBytes = std::size_t{256} << 20;

  std::shared_mutex mutex_;
  std::unordered_map<detail::SpectrumKey, std::shared_ptr<const Spectrum>, detail::KeyHash> spectra_;
  std::unordered_map<detail::MatrixKey, std::shared_ptr<const Matrix>, detail::KeyHash> matrices_;
  std::size_t matrix_bytes_ = 0;
};

inline void check_gate_values(GateKind kind, std::span<const double> values) {
  if (values.size() != gate_param_count(kind))
    throw Error(ErrorCode::ContractViolation, std::string(gate_name(kind)) + " expects " +
                                                  std::to_string(gate_param_count(kind)) + " parameters, got " +
                                                  std::to_string(values.size()));
  for (double v : values)
    if (!std::isfinite(v)) throw Error(ErrorCode::ContractViolation, std::string(gate_name(kind)) + " parameter is not finite");
}

inline TruncatedOperator make_gate(GateKind kind, std::span<const double> values, std::size_t D,
                                   double hbar = kDefaultHbar) {
  require_cutoff(D);
  check_gate_values(kind, values);
  return {D, gate_arity(kind), hbar, *GateCache::global().matrix(kind, values, D, hbar)};
}

inline TruncatedOperator make_gate(GateKind kind, std::initializer_list<double> values, std::size_t D,
                                   double hbar = kDefaultHbar) {
  return make_gate(kind, std::span<const double>(values.begin(), values.size()), D, hbar);
}

inline std::vector<double> resolve_params(const GateSpec& spec, std::span<const double> theta) {
  std::vector<double> v;
  v.reserve(spec.params.size());
  for (const auto& b : spec.params) v.push_back(b.resolve(theta));
  return v;
}

inline TruncatedOperator make_gate(const GateSpec& spec, std::span<const double> theta, std::size_t D,
                                   double hbar = kDefaultHbar) {
  return make_gate(spec.kind, resolve_params(spec, theta), D, hbar);
}

struct Circuit {
  std::size_t modes = 1;
  std::size_t cutoff = 2;
  double hbar = kDefaultHbar;
  std::vector<GateSpec> gates;
  std::size_t n_params = 0;

  /// Appends a gate with one fresh trainable slot for its first parameter and
  /// the given constants for the rest.
  std::size_t add_trainable(GateKind kind, std::vector<std::size_t> targets, std::vector<double> fixed_tail = {}) {
    GateSpec g{kind, std::move(targets), {ParamBinding::trainable(n_params)}};
    for (double c : fixed_tail) g.params.push_back(ParamBinding::fixed(c));
    gates.push_back(std::move(g));
    return n_params++;
  }

  void validate() const {
    require_cutoff(cutoff);
    std::vector<bool> used(n_params, false);
    for (const auto& g : gates) {
      if (g.targets.size() != gate_arity(g.kind))
        throw Error(ErrorCode::ContractViolation, std::string(gate_name(g.kind)) + " has wrong number of targets");
      if (g.params.size() != gate_param_count(g.kind))
        throw Error(ErrorCode::ContractViolation, std::string(gate_name(g.kind)) + " has wrong number of parameters");
      for (auto t : g.targets)
        if (t >= modes) throw Error(ErrorCode::DimensionMismatch, "gate target out of range");
      if (g.targets.size() == 2 && g.targets[0] == g.targets[1])
        throw Error(ErrorCode::DimensionMismatch, "duplicate gate targets");
      for (const auto& b : g.params) {
        if (!b.slot) continue;
        if (*b.slot >= n_params) throw Error(ErrorCode::ContractViolation, "parameter slot out of range");
        used[*b.slot] = true;
      }
    }
    for (std::size_t s = 0; s < n_params; ++s)
      if (!used[s]) throw Error(ErrorCode::ContractViolation, "parameter slot " + std::to_string(s) + " is never used");
  }
};

/// Appends b after a; b's slots are renumbered after a's.
inline Circuit concat(const Circuit& a, const Circuit& b) {
  if (a.modes != b.modes || a.cutoff != b.cutoff || a.hbar != b.hbar)
    throw Error(ErrorCode::DimensionMismatch, "cannot concatenate circuits on different spaces");
  Circuit out = a;
  for (auto g : b.gates) {
    for (auto& p : g.params)
      if (p.slot) *p.slot += a.n_params;
    out.gates.push_back(std::move(g));
  }
  out.n_params = a.n_params + b.n_params;
  return out;
}

/// Applies gates [begin, end) of the circuit to state in place.
inline void apply_gates(const Circuit& c, std::span<const double> theta, ModeState& state, std::size_t begin,
                        std::size_t end) {
  std::array<double, 2> values{};
  for (std::size_t gi = begin; gi < end; ++gi) {
    const auto& g = c.gates[gi];
    for (std::size_t k = 0; k < g.params.size(); ++k) values[k] = g.params[k].resolve(theta);
    const std::span<const double> v(values.data(), g.params.size());
    check_gate_values(g.kind, v);
    if (detail::gate_magnitude(g.kind, v) == 0.0) continue;  // exact identity
    const auto U = GateCache::global().matrix(g.kind, v, c.cutoff, c.hbar);
    apply_gate_inplace(state, *U, g.targets);
  }
}

inline ModeState run_circuit(const Circuit& c, std::span<const double> theta, ModeState initial) {
  if (theta.size() != c.n_params)
    throw Error(ErrorCode::ContractViolation, "expected " + std::to_string(c.n_params) + " parameters, got " +
                                                  std::to_string(theta.size()));
  if (initial.modes() != c.modes || initial.cutoff() != c.cutoff)
    throw Error(ErrorCode::DimensionMismatch, "initial state does not match circuit shape");
  apply_gates(c, theta, initial, 0, c.gates.size());
  return initial;
}

inline std::string describe(const GateSpec& g) {
  std::string s(gate_name(g.kind));
  s += "(";
  for (std::size_t k = 0; k < g.params.size(); ++k) {
    if (k) s += ", ";
    const auto& b = g.params[k];
    if (b.slot) {
      if (b.scale != 1.0) s += std::to_string(b.scale) + "*";
      s += "theta[" + std::to_string(*b.slot) + "]";
    } else {
      s += std::to_string(b.constant);
    }
  }
  s += ") on ";
  for (std::size_t k = 0; k < g.targets.size(); ++k) s += (k ? "," : "") + std::to_string(g.targets[k]);
  return s;
}

}  // namespace pcqo
