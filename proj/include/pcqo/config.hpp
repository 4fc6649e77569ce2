#pragma once

// Scenario config: flat "section.key = value" lines, '#' starts a comment.
// Lists are comma-separated; edge lists are "i-j" pairs; optimizer lists in
// known_argmin are ';'-separated vectors of space-separated integers.

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pcqo/pool.hpp"
#include "pcqo/qaoa.hpp"

namespace pcqo {

enum class AnsatzKind { PcqoPhase, PcqoFock, Experiment, CvQaoa, Pool };

inline std::string to_string(AnsatzKind k) {
  switch (k) {
    case AnsatzKind::PcqoPhase: return "pcqo-phase";
    case AnsatzKind::PcqoFock: return "pcqo-fock";
    case AnsatzKind::Experiment: return "experiment";
    case AnsatzKind::CvQaoa: return "cvqaoa";
    case AnsatzKind::Pool: return "pool";
  }
  return "?";
}

inline std::string to_string(Connectivity c) { return c == Connectivity::AllToAll ? "all-to-all" : "nearest-neighbor"; }
inline std::string to_string(XpReading r) { return r == XpReading::TwoMode ? "two-mode" : "single-mode"; }

struct ProblemConfig {
  std::string kind = "ukp";
  std::vector<double> values{3, 4, 1};
  std::vector<double> weights{9, 5, 8};
  double capacity = 10;
  double penalty = 4;
  std::size_t nodes = 5;
  std::vector<std::pair<std::size_t, std::size_t>> edges{{0, 1}, {1, 3}, {0, 3}, {0, 2}, {2, 3}, {1, 4}, {2, 4}};
  double delta1 = 10;
  double delta2 = 1;
  std::size_t n = 4;
  int oracle_bound = -1;  // -1: 9 for ukp, 1 for maxclique
  std::optional<double> known_min;
  std::vector<std::vector<int>> known_argmin;
};

struct AnsatzConfig {
  AnsatzKind kind = AnsatzKind::PcqoFock;
  QaoaMode variant = QaoaMode::SharedAngle;
  std::size_t layers = 1;
  double squeeze_r = 1.0;
  bool full_chip = false;
  XpReading xp_reading = XpReading::TwoMode;
};

struct PoolConfig {
  int order = 2;
  double mixer_x0 = 1.0;
  double mixer_p0 = 1.0;
  Connectivity connectivity = Connectivity::NearestNeighbor;
  std::vector<GateKind> whitelist;  // empty: derived from the ansatz kind
  bool show_generators = false;
};

struct OutputConfig {
  std::string trace = "trace.csv";
  std::string summary = "summary.json";
  std::string distribution = "distribution.csv";
};

struct ScenarioConfig {
  ProblemConfig problem;
  AnsatzConfig ansatz;
  std::size_t cutoff = 10;
  double hbar = kDefaultHbar;
  OptimizerConfig optimizer;
  PoolConfig pool;
  OutputConfig output;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline double parse_double(const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) throw std::invalid_argument("'" + s + "' is not a number");
  return v;
}

template <typename Int>
Int parse_int(const std::string& s) {
  Int v{};
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) throw std::invalid_argument("'" + s + "' is not an integer");
  return v;
}

inline bool parse_bool(const std::string& s) {
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw std::invalid_argument("'" + s + "' is not a boolean");
}

inline std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& t : split(s, ',')) out.push_back(parse_double(t));
  return out;
}

inline std::vector<int> parse_pattern(const std::string& s) {
  std::vector<int> out;
  std::istringstream in(s);
  for (std::string t; in >> t;) out.push_back(parse_int<int>(t));
  if (out.empty()) throw std::invalid_argument("empty pattern");
  return out;
}

using Setter = std::function<void(ScenarioConfig&, const std::string&)>;

template <typename E>
Setter enum_setter(E AnsatzConfig::*member, std::vector<std::pair<std::string, E>> names) {
  return [member, names](ScenarioConfig& c, const std::string& v) {
    for (const auto& [n, e] : names)
      if (n == v) {
        c.ansatz.*member = e;
        return;
      }
    std::string options;
    for (const auto& [n, e] : names) options += (options.empty() ? "" : ", ") + n;
    throw std::invalid_argument("'" + v + "' is not one of: " + options);
  };
}

inline const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    t["problem.kind"] = [](ScenarioConfig& c, const std::string& v) { c.problem.kind = v; };
    t["problem.values"] = [](ScenarioConfig& c, const std::string& v) { c.problem.values = parse_doubles(v); };
    t["problem.weights"] = [](ScenarioConfig& c, const std::string& v) { c.problem.weights = parse_doubles(v); };
    t["problem.capacity"] = [](ScenarioConfig& c, const std::string& v) { c.problem.capacity = parse_double(v); };
    t["problem.penalty"] = [](ScenarioConfig& c, const std::string& v) { c.problem.penalty = parse_double(v); };
    t["problem.nodes"] = [](ScenarioConfig& c, const std::string& v) { c.problem.nodes = parse_int<std::size_t>(v); };
    t["problem.edges"] = [](ScenarioConfig& c, const std::string& v) {
      c.problem.edges.clear();
      for (const auto& e : split(v, ',')) {
        const auto ij = split(e, '-');
        if (ij.size() != 2) throw std::invalid_argument("edge '" + e + "' is not of the form i-j");
        c.problem.edges.emplace_back(parse_int<std::size_t>(ij[0]), parse_int<std::size_t>(ij[1]));
      }
    };
    t["problem.delta1"] = [](ScenarioConfig& c, const std::string& v) { c.problem.delta1 = parse_double(v); };
    t["problem.delta2"] = [](ScenarioConfig& c, const std::string& v) { c.problem.delta2 = parse_double(v); };
    t["problem.n"] = [](ScenarioConfig& c, const std::string& v) { c.problem.n = parse_int<std::size_t>(v); };
    t["problem.oracle_bound"] = [](ScenarioConfig& c, const std::string& v) { c.problem.oracle_bound = parse_int<int>(v); };
    t["problem.known_min"] = [](ScenarioConfig& c, const std::string& v) { c.problem.known_min = parse_double(v); };
    t["problem.known_argmin"] = [](ScenarioConfig& c, const std::string& v) {
      c.problem.known_argmin.clear();
      for (const auto& p : split(v, ';')) c.problem.known_argmin.push_back(parse_pattern(p));
    };
    t["ansatz.kind"] = enum_setter(&AnsatzConfig::kind, {{"pcqo-phase", AnsatzKind::PcqoPhase},
                                                         {"pcqo-fock", AnsatzKind::PcqoFock},
                                                         {"experiment", AnsatzKind::Experiment},
                                                         {"cvqaoa", AnsatzKind::CvQaoa},
                                                         {"pool", AnsatzKind::Pool}});
    t["ansatz.variant"] =
        enum_setter(&AnsatzConfig::variant, {{"shared", QaoaMode::SharedAngle}, {"multi", QaoaMode::MultiAngle}});
    t["ansatz.layers"] = [](ScenarioConfig& c, const std::string& v) { c.ansatz.layers = parse_int<std::size_t>(v); };
    t["ansatz.squeeze_r"] = [](ScenarioConfig& c, const std::string& v) { c.ansatz.squeeze_r = parse_double(v); };
    t["ansatz.full_chip"] = [](ScenarioConfig& c, const std::string& v) { c.ansatz.full_chip = parse_bool(v); };
    t["ansatz.xp_reading"] = enum_setter(&AnsatzConfig::xp_reading,
                                         {{"two-mode", XpReading::TwoMode}, {"single-mode", XpReading::SingleMode}});
    t["simulation.cutoff"] = [](ScenarioConfig& c, const std::string& v) { c.cutoff = parse_int<std::size_t>(v); };
    t["simulation.hbar"] = [](ScenarioConfig& c, const std::string& v) { c.hbar = parse_double(v); };
    t["optimizer.method"] = [](ScenarioConfig& c, const std::string& v) {
      if (v == "adam") c.optimizer.method = Method::Adam;
      else if (v == "derivative-free") c.optimizer.method = Method::DerivativeFree;
      else throw std::invalid_argument("'" + v + "' is not one of: adam, derivative-free");
    };
    t["optimizer.learning_rate"] = [](ScenarioConfig& c, const std::string& v) { c.optimizer.learning_rate = parse_double(v); };
    t["optimizer.beta1"] = [](ScenarioConfig& c, const std::string& v) { c.optimizer.beta1 = parse_double(v); };
    t["optimizer.beta2"] = [](ScenarioConfig& c, const std::string& v) { c.optimizer.beta2 = parse_double(v); };
    t["optimizer.eps"] = [](ScenarioConfig& c, const std::string& v) { c.optimizer.eps = parse_double(v); };
    t["optimizer.fd_step"] = [](ScenarioConfig& c, const std::string& v) { c.optimizer.fd_step = parse_double(v); };
    t["optimizer.max_iterations"] = [](ScenarioConfig& c, const std::string& v) { c.optimizer.max_iterations = parse_int<int>(v); };
    t["optimizer.init_scale"] = [](ScenarioConfig& c, const std::string& v) { c.optimizer.init_scale = parse_double(v); };
    t["optimizer.seed"] = [](ScenarioConfig& c, const std::string& v) { c.optimizer.seed = parse_int<std::uint64_t>(v); };
    t["optimizer.restarts"] = [](ScenarioConfig& c, const std::string& v) { c.optimizer.restarts = parse_int<int>(v); };
    t["optimizer.simplex_step"] = [](ScenarioConfig& c, const std::string& v) { c.optimizer.simplex_step = parse_double(v); };
    t["optimizer.threads"] = [](ScenarioConfig& c, const std::string& v) { c.optimizer.threads = parse_int<int>(v); };
    t["pool.order"] = [](ScenarioConfig& c, const std::string& v) { c.pool.order = parse_int<int>(v); };
    t["pool.mixer_x0"] = [](ScenarioConfig& c, const std::string& v) { c.pool.mixer_x0 = parse_double(v); };
    t["pool.mixer_p0"] = [](ScenarioConfig& c, const std::string& v) { c.pool.mixer_p0 = parse_double(v); };
    t["pool.connectivity"] = [](ScenarioConfig& c, const std::string& v) {
      if (v == "nearest-neighbor") c.pool.connectivity = Connectivity::NearestNeighbor;
      else if (v == "all-to-all") c.pool.connectivity = Connectivity::AllToAll;
      else throw std::invalid_argument("'" + v + "' is not one of: nearest-neighbor, all-to-all");
    };
    t["pool.whitelist"] = [](ScenarioConfig& c, const std::string& v) {
      c.pool.whitelist.clear();
      for (const auto& name : split(v, ',')) {
        const auto k = parse_gate_kind(name);
        if (!k) throw std::invalid_argument("unknown gate '" + name + "'");
        c.pool.whitelist.push_back(*k);
      }
    };
    t["pool.show_generators"] = [](ScenarioConfig& c, const std::string& v) { c.pool.show_generators = parse_bool(v); };
    t["output.trace"] = [](ScenarioConfig& c, const std::string& v) { c.output.trace = v; };
    t["output.summary"] = [](ScenarioConfig& c, const std::string& v) { c.output.summary = v; };
    t["output.distribution"] = [](ScenarioConfig& c, const std::string& v) { c.output.distribution = v; };
    return t;
  }();
  return table;
}

}  // namespace detail

inline const std::vector<std::string> kProblemKinds = {"ukp", "maxclique", "rosenbrock", "toy", "two_mode_toy"};

inline Encoding problem_encoding(const std::string& kind) {
  return (kind == "rosenbrock" || kind == "toy") ? Encoding::PhaseSpace : Encoding::FockSpace;
}

/// Everything wrong with a parsed config, one message per problem.
inline std::vector<std::string> validation_problems(const ScenarioConfig& c) {
  std::vector<std::string> out;
  const auto& p = c.problem;
  const bool known_kind = std::find(kProblemKinds.begin(), kProblemKinds.end(), p.kind) != kProblemKinds.end();
  if (!known_kind) out.push_back("problem.kind '" + p.kind + "' is not one of: ukp, maxclique, rosenbrock, toy, two_mode_toy");
  if (c.cutoff < 3) out.push_back("simulation.cutoff must be >= 3 (got " + std::to_string(c.cutoff) + ")");
  if (!(c.hbar > 0)) out.push_back("simulation.hbar must be > 0");
  if (c.ansatz.layers < 1) out.push_back("ansatz.layers must be >= 1");
  if (!(c.ansatz.squeeze_r >= 0)) out.push_back("ansatz.squeeze_r must be >= 0");
  if (c.pool.order < 1) out.push_back("pool.order must be >= 1");
  for (const auto& s : c.optimizer.problems()) out.push_back("optimizer." + s);
  if (p.kind == "ukp") {
    if (p.values.empty() || p.values.size() != p.weights.size())
      out.push_back("problem.values and problem.weights must be non-empty and of equal length");
    for (double w : p.weights)
      if (!(w > 0)) {
        out.push_back("problem.weights must all be positive");
        break;
      }
    if (!(p.penalty > 0)) out.push_back("problem.penalty must be > 0");
  }
  if (p.kind == "maxclique") {
    if (p.nodes < 1) out.push_back("problem.nodes must be >= 1");
    for (auto [i, j] : p.edges)
      if (i >= p.nodes || j >= p.nodes || i == j) {
        out.push_back("problem.edges contains invalid edge " + std::to_string(i) + "-" + std::to_string(j));
        break;
      }
  }
  if (p.kind == "rosenbrock" && p.n < 2) out.push_back("problem.n must be >= 2 for rosenbrock");
  if (p.kind == "two_mode_toy" && p.n != 4 && p.n != 8) out.push_back("problem.n must be 4 or 8 for two_mode_toy");
  if (known_kind) {
    const Encoding enc = problem_encoding(p.kind);
    switch (c.ansatz.kind) {
      case AnsatzKind::PcqoPhase:
        if (enc != Encoding::PhaseSpace) out.push_back("ansatz pcqo-phase needs a phase-space problem (rosenbrock, toy)");
        break;
      case AnsatzKind::PcqoFock:
      case AnsatzKind::CvQaoa:
        if (enc != Encoding::FockSpace)
          out.push_back("ansatz " + to_string(c.ansatz.kind) + " needs a Fock-encoded problem (ukp, maxclique, two_mode_toy)");
        break;
      case AnsatzKind::Experiment:
        if (p.kind != "two_mode_toy") out.push_back("ansatz experiment needs problem.kind = two_mode_toy");
        break;
      case AnsatzKind::Pool: break;
    }
  }
  return out;
}

inline ScenarioConfig parse_config(std::istream& in, const std::string& source = "<config>") {
  ScenarioConfig cfg;
  std::vector<std::string> errors;
  std::map<std::string, int> seen;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    const auto hash = line.find('#');
    const std::string body = detail::trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = source + ":" + std::to_string(lineno) + ": ";
    if (eq == std::string::npos) {
      errors.push_back(where + "expected 'key = value', got '" + body + "'");
      continue;
    }
    const std::string key = detail::trim(body.substr(0, eq));
    const std::string value = detail::trim(body.substr(eq + 1));
    const auto& table = detail::setters();
    const auto it = table.find(key);
    if (it == table.end()) {
      errors.push_back(where + "unknown key '" + key + "'");
      continue;
    }
    if (auto [prev, fresh] = seen.emplace(key, lineno); !fresh) {
      errors.push_back(where + "duplicate key '" + key + "' (first set on line " + std::to_string(prev->second) + ")");
      continue;
    }
    try {
      it->second(cfg, value);
    } catch (const std::exception& e) {
      errors.push_back(where + key + ": " + e.what());
    }
  }
  for (const auto& p : validation_problems(cfg)) errors.push_back(source + ": " + p);
  if (!errors.empty()) {
    std::string msg = "config has " + std::to_string(errors.size()) + " problem" + (errors.size() == 1 ? "" : "s") + ":";
    for (const auto& e : errors) msg += "\n  " + e;
    throw Error(ErrorCode::Config, msg);
  }
  return cfg;
}

inline ScenarioConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot open config '" + path + "'");
  return parse_config(in, path);
}

inline int default_oracle_bound(const ScenarioConfig& c) {
  if (c.problem.oracle_bound >= 0) return c.problem.oracle_bound;
  return c.problem.kind == "maxclique" ? 1 : 9;
}

inline ProblemSpec build_problem(const ScenarioConfig& c) {
  const auto& p = c.problem;
  if (p.kind == "ukp") return ukp(p.values, p.weights, p.capacity, p.penalty);
  if (p.kind == "maxclique") return maxclique(adjacency_from_edges(p.nodes, p.edges), p.delta1, p.delta2);
  if (p.kind == "rosenbrock") return rosenbrock(p.n);
  if (p.kind == "toy") return toy_sixth();
  if (p.kind == "two_mode_toy") return two_mode_toy(p.n);
  throw Error(ErrorCode::Config, "unknown problem kind '" + p.kind + "'");
}

/// Gates select_ansatz may use when pool.whitelist is not given.
inline std::set<GateKind> effective_whitelist(const ScenarioConfig& c) {
  if (!c.pool.whitelist.empty()) return {c.pool.whitelist.begin(), c.pool.whitelist.end()};
  switch (c.ansatz.kind) {
    case AnsatzKind::PcqoPhase:
      return {GateKind::X, c.ansatz.xp_reading == XpReading::TwoMode ? GateKind::TwoModeSqueeze : GateKind::Squeeze,
              GateKind::CubicPhase};
    case AnsatzKind::Experiment: return {GateKind::R, GateKind::BS};
    case AnsatzKind::Pool:
      return problem_encoding(c.problem.kind) == Encoding::PhaseSpace
                 ? std::set<GateKind>{GateKind::X, GateKind::TwoModeSqueeze, GateKind::CubicPhase}
                 : std::set<GateKind>{GateKind::X, GateKind::CZ};
    default: return {GateKind::X, GateKind::CZ};
  }
}

/// Mixer for pool generation: sum (p - p0)^2 for phase-space problems,
/// sum (x - x0)^2 + (p - p0)^2 for Fock problems.
inline BosonPolynomial pool_mixer(const ScenarioConfig& c, std::size_t N) {
  return problem_encoding(c.problem.kind) == Encoding::PhaseSpace ? phase_space_mixer(N, c.pool.mixer_p0, c.hbar)
                                                                  : fock_mixer(N, c.pool.mixer_x0, c.pool.mixer_p0, c.hbar);
}

inline nlohmann::ordered_json to_json(const ScenarioConfig& c) {
  nlohmann::ordered_json j;
  const auto& p = c.problem;
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (auto [a, b] : p.edges) edges.push_back({a, b});
  j["problem"] = {{"kind", p.kind},         {"values", p.values},       {"weights", p.weights},
                  {"capacity", p.capacity}, {"penalty", p.penalty},     {"nodes", p.nodes},
                  {"edges", edges},         {"delta1", p.delta1},       {"delta2", p.delta2},
                  {"n", p.n},               {"oracle_bound", default_oracle_bound(c)}};
  j["problem"]["known_min"] = p.known_min ? nlohmann::ordered_json(*p.known_min) : nlohmann::ordered_json(nullptr);
  j["problem"]["known_argmin"] = p.known_argmin;
  j["ansatz"] = {{"kind", to_string(c.ansatz.kind)},
                 {"variant", to_string(c.ansatz.variant)},
                 {"layers", c.ansatz.layers},
                 {"squeeze_r", c.ansatz.squeeze_r},
                 {"full_chip", c.ansatz.full_chip},
                 {"xp_reading", to_string(c.ansatz.xp_reading)}};
  j["simulation"] = {{"cutoff", c.cutoff}, {"hbar", c.hbar}};
  const auto& o = c.optimizer;
  j["optimizer"] = {{"method", to_string(o.method)}, {"learning_rate", o.learning_rate},
                    {"beta1", o.beta1},              {"beta2", o.beta2},
                    {"eps", o.eps},                  {"fd_step", o.fd_step},
                    {"max_iterations", o.max_iterations}, {"init_scale", o.init_scale},
                    {"seed", o.seed},                {"restarts", o.restarts},
                    {"simplex_step", o.simplex_step}, {"threads", o.threads}};
  std::vector<std::string> wl;
  for (auto k : effective_whitelist(c)) wl.emplace_back(gate_name(k));
  j["pool"] = {{"order", c.pool.order},
               {"mixer_x0", c.pool.mixer_x0},
               {"mixer_p0", c.pool.mixer_p0},
               {"connectivity", to_string(c.pool.connectivity)},
               {"whitelist", wl},
               {"show_generators", c.pool.show_generators}};
  j["output"] = {{"trace", c.output.trace}, {"summary", c.output.summary}, {"distribution", c.output.distribution}};
  return j;
}

}  // namespace pcqo
