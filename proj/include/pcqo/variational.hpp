#pragma once

// Mean-value cost F(<x>) / F(<n>), finite-difference gradients, Adam and
// Nelder-Mead loops, and multi-restart aggregation.

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <memory>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "pcqo/gates.hpp"
#include "pcqo/problems.hpp"

namespace pcqo {

enum class Method { Adam, DerivativeFree };

inline std::string to_string(Method m) { return m == Method::Adam ? "adam" : "derivative-free"; }

struct OptimizerConfig {
  Method method = Method::Adam;
  double learning_rate = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double fd_step = 1e-3;
  int max_iterations = 500;
  double init_scale = 0.1;
  std::uint64_t seed = 0;
  int restarts = 5;
  double simplex_step = 0.5;
  int threads = 1;

  std::vector<std::string> problems() const {
    std::vector<std::string> out;
    if (!(learning_rate > 0)) out.push_back("learning_rate must be > 0");
    if (!(beta1 > 0 && beta1 < 1)) out.push_back("beta1 must lie in (0, 1)");
    if (!(beta2 > 0 && beta2 < 1)) out.push_back("beta2 must lie in (0, 1)");
    if (!(eps > 0)) out.push_back("eps must be > 0");
    if (!(fd_step > 0)) out.push_back("fd_step must be > 0");
    if (max_iterations < 0) out.push_back("max_iterations must be >= 0");
    if (!(init_scale >= 0)) out.push_back("init_scale must be >= 0");
    if (restarts < 1) out.push_back("restarts must be >= 1");
    if (!(simplex_step > 0)) out.push_back("simplex_step must be > 0");
    if (threads < 1) out.push_back("threads must be >= 1");
    return out;
  }

  void validate() const {
    const auto p = problems();
    if (p.empty()) return;
    std::string msg = "invalid optimizer config:";
    for (const auto& s : p) msg += "\n  " + s;
    throw Error(ErrorCode::Config, msg);
  }
};

using EnergyFn = std::function<double(std::span<const double>)>;

inline double checked_energy(double e, std::span<const double> theta) {
  if (std::isfinite(e)) return e;
  std::string msg = "non-finite energy at theta = [";
  for (std::size_t i = 0; i < theta.size(); ++i) msg += (i ? ", " : "") + std::to_string(theta[i]);
  throw Error(ErrorCode::NumericContract, msg + "]");
}

/// Central differences (E(t + h e_i) - E(t - h e_i)) / 2h.
inline std::vector<double> fd_gradient(const EnergyFn& f, std::span<const double> theta, double h) {
  if (!(h > 0)) throw Error(ErrorCode::ContractViolation, "fd_step must be positive");
  std::vector<double> t(theta.begin(), theta.end()), g(theta.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = theta[i] + h;
    const double ep = checked_energy(f(t), t);
    t[i] = theta[i] - h;
    const double em = checked_energy(f(t), t);
    t[i] = theta[i];
    g[i] = (ep - em) / (2.0 * h);
  }
  return g;
}

/// Anything the optimizers can drive.
template <typename T>
concept Objective = requires(const T& o, std::span<const double> theta, double h, std::vector<double>& grad) {
  { o.n_params() } -> std::convertible_to<std::size_t>;
  { o(theta) } -> std::convertible_to<double>;
  { o.value_and_gradient(theta, h, grad) } -> std::convertible_to<double>;
};

/// Wraps a plain function; gradients by fd_gradient.
class FunctionObjective {
 public:
  FunctionObjective(EnergyFn f, std::size_t n) : f_(std::move(f)), n_(n) {}
  std::size_t n_params() const { return n_; }
  double operator()(std::span<const double> theta) const { return checked_energy(f_(theta), theta); }
  double value_and_gradient(std::span<const double> theta, double h, std::vector<double>& grad) const {
    grad = fd_gradient(f_, theta, h);
    return (*this)(theta);
  }

 private:
  EnergyFn f_;
  std::size_t n_;
};

/// Circuit + problem + input state. Gradients reuse the state just before the
/// first gate touching each slot, which is bit-identical to a full rerun.
class CircuitObjective {
 public:
  CircuitObjective(Circuit circuit, ProblemSpec problem, ModeState initial)
      : circuit_(std::move(circuit)), problem_(std::move(problem)), initial_(std::move(initial)) {
    circuit_.validate();
    if (initial_.modes() != circuit_.modes || initial_.cutoff() != circuit_.cutoff)
      throw Error(ErrorCode::DimensionMismatch, "initial state does not match circuit shape");
    if (problem_.N != circuit_.modes)
      throw Error(ErrorCode::DimensionMismatch, "problem has " + std::to_string(problem_.N) + " variables but circuit has " +
                                                    std::to_string(circuit_.modes) + " modes");
    first_gate_.assign(circuit_.n_params, circuit_.gates.size());
    for (std::size_t g = circuit_.gates.size(); g-- > 0;)
      for (const auto& b : circuit_.gates[g].params)
        if (b.slot) first_gate_[*b.slot] = g;
  }

  const Circuit& circuit() const { return circuit_; }
  const ProblemSpec& problem() const { return problem_; }
  const ModeState& initial() const { return initial_; }
  std::size_t n_params() const { return circuit_.n_params; }

  ModeState state(std::span<const double> theta) const { return run_circuit(circuit_, theta, initial_); }

  std::vector<double> means(const ModeState& st) const {
    return problem_.encoding == Encoding::PhaseSpace ? mean_quadratures(st, circuit_.hbar) : mean_photon_numbers(st);
  }

  double energy_of(const ModeState& st) const { return problem_.evaluate(means(st)); }

  double operator()(std::span<const double> theta) const { return checked_energy(energy_of(state(theta)), theta); }

  double value_and_gradient(std::span<const double> theta, double h, std::vector<double>& grad) const {
    if (!(h > 0)) throw Error(ErrorCode::ContractViolation, "fd_step must be positive");
    if (theta.size() != n_params()) throw Error(ErrorCode::ContractViolation, "parameter count mismatch");
    const std::size_t G = circuit_.gates.size();
    std::vector<bool> needed(G + 1, false);
    for (auto g : first_gate_) needed[g] = true;
    std::vector<std::unique_ptr<ModeState>> prefix(G + 1);
    ModeState st = initial_;
    for (std::size_t g = 0; g <= G; ++g) {
      if (needed[g]) prefix[g] = std::make_unique<ModeState>(st);
      if (g < G) apply_gates(circuit_, theta, st, g, g + 1);
    }
    const double e0 = checked_energy(energy_of(st), theta);
    std::vector<double> t(theta.begin(), theta.end());
    grad.assign(theta.size(), 0.0);
    for (std::size_t i = 0; i < t.size(); ++i) {
      const std::size_t g0 = first_gate_[i];
      t[i] = theta[i] + h;
      ModeState sp = *prefix[g0];
      apply_gates(circuit_, t, sp, g0, G);
      const double ep = checked_energy(energy_of(sp), t);
      t[i] = theta[i] - h;
      ModeState sm = *prefix[g0];
      apply_gates(circuit_, t, sm, g0, G);
      const double em = checked_energy(energy_of(sm), t);
      t[i] = theta[i];
      grad[i] = (ep - em) / (2.0 * h);
    }
    return e0;
  }

 private:
  Circuit circuit_;
  ProblemSpec problem_;
  ModeState initial_;
  std::vector<std::size_t> first_gate_;
};

struct RestartRecord {
  std::uint64_t seed = 0;
  std::string optimizer;
  std::vector<double> trace;  // trace[t] = energy after update t + 1
  double initial_energy = 0.0;
  double best_energy = 0.0;
  double final_energy = 0.0;
  std::vector<double> initial_params, best_params, final_params;
  int evaluations = 0;
  int simplex_restarts = 0;
  bool aborted = false;
  std::string note;
  // Filled by multi_start for circuit objectives.
  std::vector<double> final_means;
  double final_edge_population = 0.0;
};

inline std::vector<double> random_init(std::size_t n, double scale, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> theta(n);
  for (auto& t : theta) t = scale > 0 ? u(rng) : 0.0;
  return theta;
}

namespace detail {

inline constexpr int kDivergencePatience = 50;

inline double divergence_threshold(double e0) { return 10.0 * std::max(std::abs(e0), 1.0); }

inline void record_step(RestartRecord& r, double e, std::span<const double> theta) {
  r.trace.push_back(e);
  if (e < r.best_energy) {
    r.best_energy = e;
    r.best_params.assign(theta.begin(), theta.end());
  }
}

}  // namespace detail

template <Objective O>
RestartRecord adam_optimize(const O& obj, const OptimizerConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  std::mt19937_64 rng(seed);
  RestartRecord r;
  r.seed = seed;
  r.optimizer = "adam";
  std::vector<double> theta = random_init(obj.n_params(), cfg.init_scale, rng);
  r.initial_params = theta;
  std::vector<double> grad, m(theta.size(), 0.0), v(theta.size(), 0.0);
  double e = obj.value_and_gradient(theta, cfg.fd_step, grad);
  r.evaluations += 1 + 2 * static_cast<int>(theta.size());
  r.initial_energy = r.best_energy = e;
  r.best_params = theta;
  const double limit = detail::divergence_threshold(r.initial_energy);
  int above = 0;
  double b1t = 1.0, b2t = 1.0;
  r.trace.reserve(static_cast<std::size_t>(cfg.max_iterations));
  for (int t = 0; t < cfg.max_iterations; ++t) {
    b1t *= cfg.beta1;
    b2t *= cfg.beta2;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * grad[i];
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
      const double mh = m[i] / (1.0 - b1t);
      const double vh = v[i] / (1.0 - b2t);
      theta[i] -= cfg.learning_rate * mh / (std::sqrt(vh) + cfg.eps);
    }
    if (t + 1 < cfg.max_iterations) {
      e = obj.value_and_gradient(theta, cfg.fd_step, grad);
      r.evaluations += 1 + 2 * static_cast<int>(theta.size());
    } else {
      e = obj(theta);
      r.evaluations += 1;
    }
    detail::record_step(r, e, theta);
    above = e > limit ? above + 1 : 0;
    if (above >= detail::kDivergencePatience) {
      r.aborted = true;
      r.note = "diverged: energy above " + std::to_string(limit) + " for " +
               std::to_string(detail::kDivergencePatience) + " consecutive iterations";
      break;
    }
  }
  r.final_params = theta;
  r.final_energy = r.trace.empty() ? r.initial_energy : r.trace.back();
  return r;
}

namespace detail {

struct GslContext {
  std::function<double(std::span<const double>)> f;
  int evaluations = 0;
  std::exception_ptr error;
};

inline double gsl_trampoline(const gsl_vector* x, void* params) {
  auto* ctx = static_cast<GslContext*>(params);
  if (ctx->error) return std::numeric_limits<double>::infinity();
  try {
    ++ctx->evaluations;
    return ctx->f(std::span<const double>(x->data, x->size));
  } catch (...) {
    ctx->error = std::current_exception();
    return std::numeric_limits<double>::infinity();
  }
}

struct GslVectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};
struct GslMinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};

inline void silence_gsl() {
  static const bool once = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)once;
}

}  // namespace detail

/// Nelder-Mead simplex (GSL nmsimplex2). One trace entry per simplex
/// iteration, holding the best vertex value. A simplex that stops making
/// progress or shrinks below 1e-9 is rebuilt around a perturbed best point.
template <Objective O>
RestartRecord derivative_free_optimize(const O& obj, const OptimizerConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  detail::silence_gsl();
  std::mt19937_64 rng(seed);
  RestartRecord r;
  r.seed = seed;
  r.optimizer = "nelder-mead (gsl nmsimplex2)";
  const std::size_t n = obj.n_params();
  std::vector<double> theta = random_init(n, cfg.init_scale, rng);
  r.initial_params = theta;
  r.initial_energy = r.best_energy = obj(theta);
  r.best_params = theta;
  r.evaluations = 1;
  if (n == 0 || cfg.max_iterations == 0) {
    r.final_params = theta;
    r.final_energy = r.initial_energy;
    return r;
  }

  detail::GslContext ctx{[&obj](std::span<const double> t) { return obj(t); }, 0, nullptr};
  gsl_multimin_function fn{&detail::gsl_trampoline, n, &ctx};
  std::unique_ptr<gsl_vector, detail::GslVectorDeleter> x(gsl_vector_alloc(n)), step(gsl_vector_alloc(n));
  std::unique_ptr<gsl_multimin_fminimizer, detail::GslMinimizerDeleter> s(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n));

  auto start = [&](std::span<const double> at) {
    for (std::size_t i = 0; i < n; ++i) gsl_vector_set(x.get(), i, at[i]);
    gsl_vector_set_all(step.get(), cfg.simplex_step);
    gsl_multimin_fminimizer_set(s.get(), &fn, x.get(), step.get());
  };
  start(theta);
  std::normal_distribution<double> kick(0.0, cfg.simplex_step * 0.1);
  const double limit = detail::divergence_threshold(r.initial_energy);
  int above = 0;
  for (int t = 0; t < cfg.max_iterations; ++t) {
    const int status = gsl_multimin_fminimizer_iterate(s.get());
    if (ctx.error) std::rethrow_exception(ctx.error);
    const double e = s->fval;
    const gsl_vector* best = gsl_multimin_fminimizer_x(s.get());
    theta.assign(best->data, best->data + n);
    detail::record_step(r, e, theta);
    above = e > limit ? above + 1 : 0;
    if (above >= detail::kDivergencePatience) {
      r.aborted = true;
      r.note = "diverged";
      break;
    }
    if (status != GSL_SUCCESS || gsl_multimin_fminimizer_size(s.get()) < 1e-9) {
      ++r.simplex_restarts;
      std::vector<double> p = r.best_params;
      for (auto& v : p) v += kick(rng);
      start(p);
      if (ctx.error) std::rethrow_exception(ctx.error);
    }
  }
  if (r.simplex_restarts > 0) r.note = "simplex rebuilt " + std::to_string(r.simplex_restarts) + " times";
  r.evaluations += ctx.evaluations;
  r.final_params = theta;
  r.final_energy = r.trace.empty() ? r.initial_energy : r.trace.back();
  return r;
}

template <Objective O>
RestartRecord optimize(const O& obj, const OptimizerConfig& cfg, std::uint64_t seed) {
  return cfg.method == Method::Adam ? adam_optimize(obj, cfg, seed) : derivative_free_optimize(obj, cfg, seed);
}

struct Diagnostics {
  std::vector<double> means;
  FockDistribution distribution;  // patterns with p > 0.001
  double edge_population = 0.0;
};

inline constexpr double kEdgeThreshold = 0.05;
inline constexpr double kDistributionThreshold = 0.001;

struct RunRecord {
  std::vector<RestartRecord> restarts;
  std::vector<std::size_t> included;  // restarts entering the aggregates
  std::vector<double> mean_trace, stderr_trace;
  std::size_t best_restart = 0;
  double best_energy = std::numeric_limits<double>::infinity();
  std::vector<double> best_params;
  std::vector<double> best_trace;
  Diagnostics best_diagnostics;  // at best_params of the best restart
  bool truncation_unsafe = false;
  std::string optimizer;
};

inline Diagnostics diagnose(const CircuitObjective& obj, std::span<const double> theta) {
  const ModeState st = obj.state(theta);
  return {obj.means(st), fock_probabilities(st, kDistributionThreshold), edge_population(st)};
}

/// Pointwise mean and standard error (sample std / sqrt(r)) over equal-length traces.
inline void aggregate_traces(const std::vector<const std::vector<double>*>& traces, std::vector<double>& mean,
                             std::vector<double>& stderr_out) {
  mean.clear();
  stderr_out.clear();
  if (traces.empty()) return;
  const std::size_t T = traces.front()->size();
  const double r = static_cast<double>(traces.size());
  mean.assign(T, 0.0);
  stderr_out.assign(T, 0.0);
  for (std::size_t t = 0; t < T; ++t) {
    double s = 0.0;
    for (const auto* tr : traces) s += (*tr)[t];
    mean[t] = s / r;
    if (traces.size() > 1) {
      double ss = 0.0;
      for (const auto* tr : traces) ss += ((*tr)[t] - mean[t]) * ((*tr)[t] - mean[t]);
      stderr_out[t] = std::sqrt(ss / (r - 1.0)) / std::sqrt(r);
    }
  }
}

/// Runs restarts with seeds seed + 0 .. seed + restarts - 1 on up to
/// cfg.threads workers. Aborted or failed restarts are kept in `restarts` but
/// left out of the aggregates.
inline RunRecord multi_start(const CircuitObjective& obj, const OptimizerConfig& cfg) {
  cfg.validate();
  const auto R = static_cast<std::size_t>(cfg.restarts);
  RunRecord run;
  run.restarts.resize(R);
  std::vector<std::exception_ptr> errors(R);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < R;) {
      try {
        auto rec = optimize(obj, cfg, cfg.seed + k);
        const ModeState st = obj.state(rec.final_params);
        rec.final_means = obj.means(st);
        rec.final_edge_population = edge_population(st);
        run.restarts[k] = std::move(rec);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(cfg.threads), R);
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  }

  for (std::size_t k = 0; k < R; ++k) {
    auto& rec = run.restarts[k];
    if (errors[k]) {
      rec.seed = cfg.seed + k;
      rec.aborted = true;
      try {
        std::rethrow_exception(errors[k]);
      } catch (const std::exception& e) {
        rec.note = std::string("failed: ") + e.what();
      }
      continue;
    }
    if (!rec.aborted) run.included.push_back(k);
  }
  std::vector<const std::vector<double>*> traces;
  for (auto k : run.included) traces.push_back(&run.restarts[k].trace);
  aggregate_traces(traces, run.mean_trace, run.stderr_trace);

  bool found = false;
  for (auto k : run.included) {
    if (!found || run.restarts[k].best_energy < run.best_energy) {
      run.best_energy = run.restarts[k].best_energy;
      run.best_restart = k;
      found = true;
    }
  }
  if (!found) throw Error(ErrorCode::NumericContract, "every restart failed or diverged");
  const auto& best = run.restarts[run.best_restart];
  run.best_params = best.best_params;
  run.best_trace = best.trace;
  run.optimizer = best.optimizer;
  run.best_diagnostics = diagnose(obj, run.best_params);
  run.truncation_unsafe = run.best_diagnostics.edge_population >= kEdgeThreshold;
  return run;
}

// Ansatz builders.

enum class XpReading { TwoMode, SingleMode };

inline Circuit empty_circuit(std::size_t N, std::size_t D, double hbar) {
  Circuit c;
  c.modes = N;
  c.cutoff = D;
  c.hbar = hbar;
  return c;
}

/// Per layer: X on every mode, S2(theta, 0) on nearest-neighbor edges, V on every mode.
/// The single-mode reading swaps the S2 edge layer for Squeeze(theta, 0) on every mode.
inline Circuit pcqo_phase_ansatz(std::size_t N, std::size_t p, std::size_t D = 10, double hbar = kDefaultHbar,
                                 XpReading reading = XpReading::TwoMode) {
  if (N < 2 || p < 1) throw Error(ErrorCode::ContractViolation, "phase-space ansatz needs N >= 2 and p >= 1");
  Circuit c = empty_circuit(N, D, hbar);
  for (std::size_t l = 0; l < p; ++l) {
    add_gate_layer(c, GateKind::X, Connectivity::NearestNeighbor);
    add_gate_layer(c, reading == XpReading::TwoMode ? GateKind::TwoModeSqueeze : GateKind::Squeeze,
                   Connectivity::NearestNeighbor);
    add_gate_layer(c, GateKind::CubicPhase, Connectivity::NearestNeighbor);
  }
  return c;
}

/// Per layer: X on every mode, CZ on nearest-neighbor edges.
inline Circuit pcqo_fock_ansatz(std::size_t N, std::size_t p, std::size_t D = 10, double hbar = kDefaultHbar) {
  if (N < 2 || p < 1) throw Error(ErrorCode::ContractViolation, "Fock ansatz needs N >= 2 and p >= 1");
  Circuit c = empty_circuit(N, D, hbar);
  for (std::size_t l = 0; l < p; ++l) {
    add_gate_layer(c, GateKind::X, Connectivity::NearestNeighbor);
    add_gate_layer(c, GateKind::CZ, Connectivity::NearestNeighbor);
  }
  return c;
}

/// R on modes offset..offset+3, then BS(theta, 0) on the three neighbor edges.
/// Slots start at 0 each time, so two copies share parameters.
inline void append_experiment_block(Circuit& c, std::size_t offset) {
  for (std::size_t m = 0; m < 4; ++m)
    c.gates.push_back({GateKind::R, {offset + m}, {ParamBinding::trainable(m)}});
  for (std::size_t e = 0; e < 3; ++e)
    c.gates.push_back(
        {GateKind::BS, {offset + e, offset + e + 1}, {ParamBinding::trainable(4 + e), ParamBinding::fixed(0.0)}});
  c.n_params = 7;
}

struct ExperimentSetup {
  Circuit circuit;
  ModeState initial;
};

inline constexpr double kExperimentSqueezing = 1.0;

/// Single-mode amplitudes sqrt(p_n), p_n the Fock marginal of the truncated
/// two-mode squeezed vacuum S2(r)|00> at cutoff D.
inline Vector squeezed_marginal_amplitudes(std::size_t D, double r, double hbar = kDefaultHbar) {
  const ModeState tmsv = apply_gate(vacuum(2, D), make_gate(GateKind::TwoModeSqueeze, {r, 0.0}, D, hbar), {0, 1});
  const auto p = mode_distribution(tmsv, 0);
  Vector amp(static_cast<Eigen::Index>(D));
  for (std::size_t n = 0; n < D; ++n) amp(static_cast<Eigen::Index>(n)) = std::sqrt(std::max(p[n], 0.0));
  return amp / amp.norm();
}

/// Four-mode reduction: modes 0 and 2 carry the squeezed-vacuum marginal.
inline ExperimentSetup experiment_ansatz(std::size_t D = 3, double r = kExperimentSqueezing, double hbar = kDefaultHbar) {
  Circuit c = empty_circuit(4, D, hbar);
  append_experiment_block(c, 0);
  const Vector m = squeezed_marginal_amplitudes(D, r, hbar);
  ModeState st(4, D);
  for (std::size_t a = 0; a < D; ++a)
    for (std::size_t b = 0; b < D; ++b) {
      const int pattern[4] = {static_cast<int>(a), 0, static_cast<int>(b), 0};
      st.amplitudes()(static_cast<Eigen::Index>(st.index_of(pattern))) =
          m(static_cast<Eigen::Index>(a)) * m(static_cast<Eigen::Index>(b));
    }
  return {std::move(c), std::move(st)};
}

/// Full eight-mode chip: S2(r, 0) on (0,4) and (2,6), then the same four-mode
/// block on modes 0..3 and 4..7 with shared parameters.
inline ExperimentSetup experiment_full_chip(std::size_t D = 3, double r = kExperimentSqueezing,
                                            double hbar = kDefaultHbar) {
  Circuit c = empty_circuit(8, D, hbar);
  append_experiment_block(c, 0);
  append_experiment_block(c, 4);
  ModeState st = vacuum(8, D);
  const auto S2 = make_gate(GateKind::TwoModeSqueeze, {r, 0.0}, D, hbar);
  st = apply_gate(std::move(st), S2, {0, 4});
  st = apply_gate(std::move(st), S2, {2, 6});
  return {std::move(c), std::move(st)};
}

}  // namespace pcqo
