#pragma once

// run / pool / compare / oracle commands and their output writers.
//
// Output files (all begin with a version comment):
//   trace CSV         restart,iteration,energy          (compare: algorithm,restart,iteration,energy)
//   summary JSON      resolved config, seeds, per-restart results, diagnostics
//   distribution CSV  section,pattern,probability       (Fock problems only)
// CSVs end with "# complete", or "# aborted: <reason>" if the run failed.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>

#include "pcqo/config.hpp"

namespace pcqo {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitTruncationUnsafe = 2, kExitOracleMismatch = 3 };

struct CommandOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string out = ".";
};

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string pattern_string(const std::vector<int>& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? " " : "") + std::to_string(p[i]);
  return s;
}

inline ScenarioConfig resolve_config(const CommandOptions& opts) {
  ScenarioConfig c = load_config(opts.config);
  if (opts.seed) c.optimizer.seed = *opts.seed;
  if (opts.threads) c.optimizer.threads = *opts.threads;
  c.optimizer.validate();
  return c;
}

inline std::string output_path(const CommandOptions& opts, const std::string& name) {
  std::filesystem::create_directories(opts.out);
  return (std::filesystem::path(opts.out) / name).string();
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::Config, "cannot write '" + path + "'");
  return f;
}

// Scenario construction.

inline Circuit pool_ansatz(const ScenarioConfig& c, const ProblemSpec& problem) {
  const auto pool = nested_pool(pool_mixer(c, problem.N), problem.hamiltonian(c.hbar), c.pool.order);
  auto sel = select_ansatz(pool, effective_whitelist(c), c.pool.connectivity, problem.N);
  sel.circuit.cutoff = c.cutoff;
  sel.circuit.hbar = c.hbar;
  Circuit out = sel.circuit;
  for (std::size_t l = 1; l < c.ansatz.layers; ++l) out = concat(out, sel.circuit);
  return out;
}

inline CircuitObjective build_objective(const ScenarioConfig& c, AnsatzKind kind) {
  ProblemSpec problem = build_problem(c);
  const std::size_t D = c.cutoff;
  switch (kind) {
    case AnsatzKind::PcqoPhase:
      return {pcqo_phase_ansatz(problem.N, c.ansatz.layers, D, c.hbar, c.ansatz.xp_reading), problem,
              vacuum(problem.N, D)};
    case AnsatzKind::PcqoFock:
      return {pcqo_fock_ansatz(problem.N, c.ansatz.layers, D, c.hbar), problem, vacuum(problem.N, D)};
    case AnsatzKind::CvQaoa: {
      auto setup = build_cvqaoa(problem, {c.ansatz.variant, c.ansatz.layers, c.ansatz.squeeze_r}, D, c.hbar);
      return {std::move(setup.circuit), problem, std::move(setup.initial)};
    }
    case AnsatzKind::Experiment: {
      const bool full = c.ansatz.full_chip || problem.N == 8;
      if (full && problem.N != 8) problem = two_mode_toy(8);
      auto setup = full ? experiment_full_chip(D, c.ansatz.squeeze_r, c.hbar) : experiment_ansatz(D, c.ansatz.squeeze_r, c.hbar);
      return {std::move(setup.circuit), problem, std::move(setup.initial)};
    }
    case AnsatzKind::Pool: {
      Circuit circ = pool_ansatz(c, problem);
      return {std::move(circ), problem, vacuum(problem.N, D)};
    }
  }
  throw Error(ErrorCode::Config, "unknown ansatz kind");
}

inline CircuitObjective build_objective(const ScenarioConfig& c) { return build_objective(c, c.ansatz.kind); }

// Writers.

inline void write_trace_rows(std::ostream& out, const RunRecord& run, const std::string& algorithm = {}) {
  for (std::size_t r = 0; r < run.restarts.size(); ++r) {
    const auto& tr = run.restarts[r].trace;
    for (std::size_t t = 0; t < tr.size(); ++t) {
      if (!algorithm.empty()) out << algorithm << ',';
      out << r << ',' << (t + 1) << ',' << fmt17(tr[t]) << '\n';
    }
  }
}

inline nlohmann::ordered_json restart_json(const RestartRecord& r) {
  return {{"seed", r.seed},
          {"optimizer", r.optimizer},
          {"initial_energy", r.initial_energy},
          {"best_energy", r.best_energy},
          {"final_energy", r.final_energy},
          {"iterations", r.trace.size()},
          {"evaluations", r.evaluations},
          {"aborted", r.aborted},
          {"note", r.note},
          {"best_params", r.best_params},
          {"final_params", r.final_params},
          {"final_means", r.final_means},
          {"final_edge_population", r.final_edge_population}};
}

inline nlohmann::ordered_json run_json(const RunRecord& run, const CircuitObjective& obj) {
  nlohmann::ordered_json j;
  std::vector<std::string> gates;
  for (const auto& g : obj.circuit().gates) gates.push_back(describe(g));
  j["ansatz"] = {{"parameters", obj.n_params()}, {"gates", gates}};
  j["optimizer"] = run.optimizer;
  j["best_restart"] = run.best_restart;
  j["best_energy"] = run.best_energy;
  j["best_params"] = run.best_params;
  double mean_final = 0.0;
  double best_final = std::numeric_limits<double>::infinity();
  for (auto k : run.included) {
    mean_final += run.restarts[k].final_energy;
    best_final = std::min(best_final, run.restarts[k].final_energy);
  }
  j["best_final_energy"] = best_final;
  j["mean_final_energy"] = run.included.empty() ? 0.0 : mean_final / static_cast<double>(run.included.size());
  j["included_restarts"] = run.included;
  const auto& d = run.best_diagnostics;
  j["diagnostics"] = {{"encoding", to_string(obj.problem().encoding)},
                      {obj.problem().encoding == Encoding::PhaseSpace ? "mean_x" : "mean_n", d.means},
                      {"edge_population", d.edge_population},
                      {"edge_threshold", kEdgeThreshold},
                      {"truncation_unsafe", run.truncation_unsafe}};
  if (obj.problem().known_optimum) {
    j["known_optimum"] = {{"value", obj.problem().known_optimum->value},
                          {"optimizers", obj.problem().known_optimum->optimizers}};
  }
  nlohmann::ordered_json rs = nlohmann::ordered_json::array();
  for (const auto& r : run.restarts) rs.push_back(restart_json(r));
  j["restarts"] = rs;
  return j;
}

/// Sections: threshold (p > 0.001, descending), inset (UKP: the solution
/// mode swept over 0..D-1 with the others at the known optimizer), top20.
inline void write_distribution(std::ostream& out, const CircuitObjective& obj, std::span<const double> theta,
                               const std::string& problem_kind) {
  const ModeState st = obj.state(theta);
  std::vector<std::pair<std::vector<int>, double>> all;
  for (std::size_t idx = 0; idx < st.size(); ++idx)
    all.emplace_back(st.pattern_of(idx), std::norm(st.amplitudes()(static_cast<Eigen::Index>(idx))));
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  out << "# pcqo-bench " << kVersion << " distribution v1\n";
  out << "section,pattern,probability\n";
  for (const auto& [p, v] : all)
    if (v > kDistributionThreshold) out << "threshold," << pattern_string(p) << ',' << fmt17(v) << '\n';
  const auto& known = obj.problem().known_optimum;
  if (problem_kind == "ukp" && known && !known->optimizers.empty()) {
    const auto& opt = known->optimizers.front();
    std::vector<int> base(opt.size());
    std::size_t carrier = 0;
    for (std::size_t i = 0; i < opt.size(); ++i) {
      base[i] = static_cast<int>(std::lround(opt[i]));
      if (opt[i] > opt[carrier]) carrier = i;
    }
    bool fits = true;
    for (int b : base) fits = fits && b >= 0 && static_cast<std::size_t>(b) < st.cutoff();
    if (fits)
      for (std::size_t n = 0; n < st.cutoff(); ++n) {
        base[carrier] = static_cast<int>(n);
        out << "inset," << pattern_string(base) << ',' << fmt17(std::norm(st.amplitude(base))) << '\n';
      }
  }
  for (std::size_t k = 0; k < std::min<std::size_t>(20, all.size()); ++k)
    out << "top20," << pattern_string(all[k].first) << ',' << fmt17(all[k].second) << '\n';
  out << "# complete\n";
}

// Commands.

inline int report_error(std::ostream& err, const std::exception& e) {
  err << "error: " << e.what() << '\n';
  return kExitError;
}

inline int cmd_run(const CommandOptions& opts, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::ofstream trace;
  try {
    const ScenarioConfig cfg = resolve_config(opts);
    const CircuitObjective obj = build_objective(cfg);
    trace = open_output(output_path(opts, cfg.output.trace));
    trace << "# pcqo-bench " << kVersion << " trace v1\n";
    trace << "restart,iteration,energy\n";
    trace.flush();
    const RunRecord run = multi_start(obj, cfg.optimizer);
    write_trace_rows(trace, run);
    trace << "# complete\n";
    trace.close();

    nlohmann::ordered_json summary;
    summary["version"] = kVersion;
    summary["command"] = "run";
    summary["config"] = to_json(cfg);
    std::vector<std::uint64_t> seeds;
    for (const auto& r : run.restarts) seeds.push_back(r.seed);
    summary["seeds"] = seeds;
    summary["result"] = run_json(run, obj);
    auto sf = open_output(output_path(opts, cfg.output.summary));
    sf << summary.dump(2) << '\n';

    if (obj.problem().encoding == Encoding::FockSpace) {
      auto df = open_output(output_path(opts, cfg.output.distribution));
      write_distribution(df, obj, run.best_params, cfg.problem.kind);
    }
    out << "problem " << obj.problem().name << ", ansatz " << to_string(cfg.ansatz.kind) << ", Q = " << obj.n_params()
        << ", cutoff " << cfg.cutoff << '\n';
    out << "best energy " << fmt17(run.best_energy) << " (restart " << run.best_restart << ", " << run.optimizer << ")\n";
    out << "edge population " << fmt17(run.best_diagnostics.edge_population) << '\n';
    for (const auto& r : run.restarts)
      if (r.aborted) out << "restart seed " << r.seed << " excluded: " << r.note << '\n';
    if (run.truncation_unsafe) {
      out << "truncation-unsafe: edge population >= " << kEdgeThreshold << '\n';
      return kExitTruncationUnsafe;
    }
    return kExitOk;
  } catch (const std::exception& e) {
    if (trace.is_open()) trace << "# aborted: " << e.what() << '\n';
    return report_error(err, e);
  }
}

inline int cmd_pool(const CommandOptions& opts, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    const ScenarioConfig cfg = resolve_config(opts);
    const ProblemSpec problem = build_problem(cfg);
    const auto H_m = pool_mixer(cfg, problem.N);
    const auto H_p = problem.hamiltonian(cfg.hbar);
    const auto pool = nested_pool(H_m, H_p, cfg.pool.order);
    out << "# pcqo-bench " << kVersion << " pool v1\n";
    out << "problem " << problem.name << ", order " << cfg.pool.order << ", " << pool.size() << " operators, "
        << pool_families(pool).size() << " families\n";
    out << format_pool(pool, cfg.pool.show_generators);
    const auto sel = select_ansatz(pool, effective_whitelist(cfg), cfg.pool.connectivity, problem.N);
    out << "selected:";
    for (const auto& [family, kind] : sel.families) out << ' ' << family << " -> " << gate_name(kind) << ';';
    out << '\n';
    for (const auto& g : sel.circuit.gates) out << "  " << describe(g) << '\n';
    out << "Q = " << sel.circuit.n_params << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    return report_error(err, e);
  }
}

struct CompareResult {
  std::string algorithm;
  RunRecord run;
  std::size_t n_params = 0;
  double best_final = 0.0;
};

inline double best_final_energy(const RunRecord& run) {
  double b = std::numeric_limits<double>::infinity();
  for (auto k : run.included) b = std::min(b, run.restarts[k].final_energy);
  return b;
}

inline int cmd_compare(const CommandOptions& opts, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::ofstream trace;
  try {
    ScenarioConfig cfg = resolve_config(opts);
    const ProblemSpec problem = build_problem(cfg);
    if (problem.encoding != Encoding::FockSpace)
      throw Error(ErrorCode::Config, "compare needs a Fock-encoded quadratic problem");
    (void)quadratic_form(problem);
    trace = open_output(output_path(opts, cfg.output.trace));
    trace << "# pcqo-bench " << kVersion << " compare v1\n";
    trace << "algorithm,restart,iteration,energy\n";
    trace.flush();

    std::vector<CompareResult> results;
    auto run_one = [&](const std::string& name, AnsatzKind kind, QaoaMode mode) {
      ScenarioConfig c = cfg;
      c.ansatz.variant = mode;
      const CircuitObjective obj = build_objective(c, kind);
      CompareResult r{name, multi_start(obj, c.optimizer), obj.n_params(), 0.0};
      r.best_final = best_final_energy(r.run);
      write_trace_rows(trace, r.run, name);
      results.push_back(std::move(r));
    };
    run_one("pcqo", AnsatzKind::PcqoFock, QaoaMode::SharedAngle);
    run_one("qaoa-shared", AnsatzKind::CvQaoa, QaoaMode::SharedAngle);
    run_one("qaoa-multi", AnsatzKind::CvQaoa, QaoaMode::MultiAngle);
    trace << "# complete\n";
    trace.close();

    nlohmann::ordered_json summary;
    summary["version"] = kVersion;
    summary["command"] = "compare";
    summary["config"] = to_json(cfg);
    for (const auto& r : results) {
      nlohmann::ordered_json j;
      j["parameters"] = r.n_params;
      j["best_final_energy"] = r.best_final;
      j["best_energy"] = r.run.best_energy;
      nlohmann::ordered_json rs = nlohmann::ordered_json::array();
      for (const auto& rr : r.run.restarts) rs.push_back(restart_json(rr));
      j["restarts"] = rs;
      summary["algorithms"][r.algorithm] = j;
    }
    const bool wins = results[0].best_final < results[1].best_final && results[0].best_final < results[2].best_final;
    summary["pcqo_outperforms_both"] = wins;
    auto sf = open_output(output_path(opts, cfg.output.summary));
    sf << summary.dump(2) << '\n';
    for (const auto& r : results)
      out << r.algorithm << ": Q = " << r.n_params << ", best final " << fmt17(r.best_final) << '\n';
    out << "verdict: pcqo " << (wins ? "outperforms" : "does not outperform") << " both QAOA variants\n";
    return kExitOk;
  } catch (const std::exception& e) {
    if (trace.is_open()) trace << "# aborted: " << e.what() << '\n';
    return report_error(err, e);
  }
}

inline int cmd_oracle(const CommandOptions& opts, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    const ScenarioConfig cfg = resolve_config(opts);
    const ProblemSpec problem = build_problem(cfg);
    if (problem.encoding != Encoding::FockSpace)
      throw Error(ErrorCode::Config, "oracle needs an integer (Fock-encoded) problem");
    const int bound = default_oracle_bound(cfg);
    const auto res = brute_force_integer_min(problem, bound);
    out << "# pcqo-bench " << kVersion << " oracle v1\n";
    out << "problem " << problem.name << ", bound " << bound << '\n';
    out << "F_min = " << fmt17(res.f_min) << '\n';
    out << "minimizers (" << res.argmin.size() << "):\n";
    for (const auto& a : res.argmin) out << "  (" << pattern_string(a) << ")\n";

    std::optional<double> expected_min = cfg.problem.known_min;
    std::vector<std::vector<int>> expected_argmin = cfg.problem.known_argmin;
    if (cfg.problem.kind == "ukp" && problem.known_optimum) {
      if (!expected_min) expected_min = problem.known_optimum->value;
      if (expected_argmin.empty())
        for (const auto& o : problem.known_optimum->optimizers) {
          std::vector<int> v;
          for (double x : o) v.push_back(static_cast<int>(std::lround(x)));
          expected_argmin.push_back(v);
        }
    }
    bool ok = true;
    if (expected_min && std::abs(*expected_min - res.f_min) > 1e-9) {
      out << "mismatch: expected F_min " << fmt17(*expected_min) << '\n';
      ok = false;
    }
    if (!expected_argmin.empty()) {
      const std::set<std::vector<int>> want(expected_argmin.begin(), expected_argmin.end());
      const std::set<std::vector<int>> got(res.argmin.begin(), res.argmin.end());
      if (want != got) {
        out << "mismatch: expected minimizers";
        for (const auto& a : want) out << " (" << pattern_string(a) << ")";
        out << '\n';
        ok = false;
      }
    }
    if (!ok) return kExitOracleMismatch;
    if (expected_min || !expected_argmin.empty()) out << "known optimum confirmed\n";
    return kExitOk;
  } catch (const std::exception& e) {
    return report_error(err, e);
  }
}

}  // namespace pcqo
