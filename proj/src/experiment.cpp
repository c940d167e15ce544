#include "cpm/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "cpm/baselines.hpp"
#include "cpm/checks.hpp"
#include "cpm/metrics.hpp"
#include "cpm/proximal.hpp"

namespace cpm {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

double parse_double(const std::string& s, const char* what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("cannot parse ") + what + " from '" + s + "'");
  }
  if (pos != s.size()) throw std::invalid_argument(std::string("trailing characters in ") + what + " '" + s + "'");
  return v;
}

std::uint64_t parse_unsigned(const std::string& s, const char* what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw std::invalid_argument(std::string("cannot parse ") + what + " from '" + s + "'");
  }
  return std::stoull(s);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

SolverKind parse_solver(const std::string& name) {
  if (name == "cpm") return SolverKind::cpm;
  if (name == "cpm-decentralized") return SolverKind::cpm_decentralized;
  if (name == "cmwu") return SolverKind::cmwu;
  if (name == "mwu") return SolverKind::mwu;
  if (name == "omwu") return SolverKind::omwu;
  if (name == "mirror-prox") return SolverKind::mirror_prox;
  throw std::invalid_argument("unknown solver '" + name + "'");
}

std::string solver_name(SolverKind kind) {
  switch (kind) {
    case SolverKind::cpm: return "cpm";
    case SolverKind::cpm_decentralized: return "cpm-decentralized";
    case SolverKind::cmwu: return "cmwu";
    case SolverKind::mwu: return "mwu";
    case SolverKind::omwu: return "omwu";
    case SolverKind::mirror_prox: return "mirror-prox";
  }
  return "?";
}

RandomGameRequest parse_random_request(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 4) throw std::invalid_argument("--random expects n:d1,d2,...:V:seed, got '" + text + "'");
  RandomGameRequest r;
  r.players = parse_unsigned(parts[0], "player count");
  for (const auto& d : split(parts[1], ',')) r.actions.push_back(parse_unsigned(d, "action count"));
  r.utility_bound = parse_double(parts[2], "V");
  r.seed = parse_unsigned(parts[3], "seed");
  if (r.players == 0 || r.actions.size() != r.players) {
    throw std::invalid_argument("--random: need exactly n action counts");
  }
  return r;
}

ToleranceSchedule ToleranceRequest::schedule() const {
  return inverse_square ? inverse_square_schedule() : constant_schedule(value);
}

ToleranceRequest parse_tolerance_request(const std::string& text) {
  if (text == "inv-t2") return {};
  if (text.rfind("const:", 0) == 0) {
    const double v = parse_double(text.substr(6), "constant tolerance");
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("constant tolerance must be positive");
    return {false, v};
  }
  throw std::invalid_argument("--eps-schedule expects inv-t2 or const:<v>, got '" + text + "'");
}

NormalFormGame load_experiment_game(const ExperimentConfig& config) {
  if (config.game_file.has_value() == config.random_game.has_value()) {
    throw std::invalid_argument("give exactly one of --game and --random");
  }
  if (config.game_file) return load_game(*config.game_file);
  const auto& r = *config.random_game;
  return random_game(r.players, r.actions, r.utility_bound, r.seed);
}

RunTrace run_experiment(const NormalFormGame& game, const ExperimentConfig& config) {
  const GameSpec spec = make_normal_form_spec(game);
  const ProximalSetup setup = ProximalSetup::for_spec(spec);
  SolverConfig sc;
  sc.eta = config.eta;
  sc.clamp_eta = config.clamp_eta;
  sc.tolerance = config.tolerance.schedule();
  sc.outer_iterations = config.horizon;
  sc.inner_mode = config.inner_mode;
  BaselineConfig bc;
  bc.eta = config.eta;
  bc.horizon = config.horizon;
  switch (config.solver) {
    case SolverKind::cpm:
      return run_centralized(setup, spec, sc);
    case SolverKind::cpm_decentralized:
      return run_decentralized(setup, spec, sc);
    case SolverKind::cmwu:
      return run_cmwu(game, sc);
    case SolverKind::mwu:
      bc.learner = LearnerKind::mwu;
      break;
    case SolverKind::omwu:
      bc.learner = LearnerKind::optimistic_mwu;
      break;
    case SolverKind::mirror_prox:
      bc.learner = LearnerKind::mirror_prox;
      break;
  }
  return run_baseline(setup, spec, bc);
}

void write_trace_csv(const RunTrace& trace, const NormalFormGame& game, std::size_t cadence, std::ostream& out) {
  if (cadence == 0) throw std::invalid_argument("cadence must be >= 1");
  out << "t,inner_iters,residual,eps_t";
  for (std::size_t i = 1; i <= trace.num_players(); ++i) out << ",regret_p" << i;
  out << ",cce_gap\n";
  for (std::size_t t = 1; t <= trace.size(); ++t) {
    const auto& s = trace.step(t);
    out << t << ',' << s.inner_iterations << ',' << format_double(s.residual) << ',' << format_double(s.epsilon);
    const auto regs = regrets(trace, t);
    for (double r : regs) out << ',' << format_double(r);
    out << ',';
    if (t % cadence == 0 || t == trace.size()) out << format_double(cce_gap(trace, game, t));
    out << '\n';
  }
}

std::vector<TraceRow> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty trace file");
  const auto header = split(line, ',');
  if (header.size() < 6 || header[0] != "t" || header.back() != "cce_gap") {
    throw std::invalid_argument("unrecognized trace header");
  }
  const std::size_t players = header.size() - 5;
  std::vector<TraceRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != header.size()) throw std::invalid_argument("trace row has wrong field count: " + line);
    TraceRow r;
    r.t = parse_unsigned(f[0], "t");
    r.inner_iters = parse_unsigned(f[1], "inner_iters");
    r.residual = parse_double(f[2], "residual");
    r.eps_t = parse_double(f[3], "eps_t");
    for (std::size_t i = 0; i < players; ++i) r.regrets.push_back(parse_double(f[4 + i], "regret"));
    if (!f.back().empty()) r.cce_gap = parse_double(f.back(), "cce_gap");
    rows.push_back(std::move(r));
  }
  return rows;
}

nlohmann::json run_summary(const RunTrace& trace, const NormalFormGame& game) {
  const GameSpec spec = make_normal_form_spec(game);
  const ProximalSetup setup = ProximalSetup::for_spec(spec);
  const std::size_t horizon = trace.size();
  nlohmann::json j;
  j["solver"] = trace.solver();
  j["T"] = horizon;
  j["eta_requested"] = trace.eta_requested();
  j["eta"] = trace.eta();
  j["eta_clamped"] = trace.eta_clamped();
  j["B"] = spec.gradient_bound;
  j["L"] = spec.lipschitz;
  j["total_inner_iterations"] = trace.total_inner_iterations();
  j["total_prox_evaluations"] = trace.total_prox_evaluations();
  if (trace.error()) j["error"] = *trace.error();
  if (horizon == 0) return j;

  j["final_regrets"] = regrets(trace, horizon);
  j["final_cce_gap"] = cce_gap(trace, game, horizon);
  std::vector<double> bound, reference;
  const double n = double(game.num_players());
  const double v = game.utility_bound();
  double worst = 0.0;
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    bound.push_back(regret_bound(trace, setup, spec.gradient_bound, i, horizon));
    reference.push_back(2.0 * std::sqrt(n) * v * (1.0 + std::log(double(game.action_counts()[i]))));
    worst = std::max(worst, bound.back());
  }
  // Valid for the prox-method solvers; reported for baselines for comparison only.
  j["bounds"] = {{"regret", bound},
                 {"regret_reference_2sqrt_n_V_1_plus_log_d", reference},
                 {"cce_gap", worst / double(horizon)}};
  return j;
}

int cmd_run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  if (config.cadence == 0) {
    err << "error: --cadence must be >= 1\n";
    return kExitInput;
  }
  std::optional<NormalFormGame> loaded;
  try {
    loaded.emplace(load_experiment_game(config));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  const NormalFormGame& game = *loaded;

  auto emit = [&](const RunTrace& trace) -> bool {
    const auto summary = run_summary(trace, game);
    if (config.out) {
      std::ofstream csv(*config.out);
      if (!csv) {
        err << "error: cannot write " << config.out->string() << '\n';
        return false;
      }
      write_trace_csv(trace, game, config.cadence, csv);
      std::ofstream js(config.out->string() + ".summary.json");
      if (!js) {
        err << "error: cannot write summary next to " << config.out->string() << '\n';
        return false;
      }
      js << summary.dump(2) << '\n';
      out << summary.dump(2) << '\n';
    } else {
      write_trace_csv(trace, game, config.cadence, out);
      err << summary.dump(2) << '\n';
    }
    if (trace.eta_clamped()) {
      err << "warning: eta " << trace.eta_requested() << " exceeds 1/(2L); using " << trace.eta() << '\n';
    }
    return true;
  };

  try {
    const RunTrace trace = run_experiment(game, config);
    return emit(trace) ? kExitOk : kExitInput;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    if (e.partial_trace()) emit(*e.partial_trace());
    return kExitConvergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

std::vector<BenchRow> bench(const NormalFormGame& game, const BenchConfig& config) {
  if (config.solvers.empty()) throw std::invalid_argument("bench needs at least one solver");
  if (config.targets.empty()) throw std::invalid_argument("bench needs at least one target epsilon");
  std::vector<BenchRow> rows;
  for (auto kind : config.solvers) {
    ExperimentConfig ec = config.base;
    ec.solver = kind;
    const RunTrace trace = run_experiment(game, ec);
    std::vector<double> gaps(trace.size() + 1, 0.0);
    std::vector<std::size_t> evals(trace.size() + 1, 0);
    for (std::size_t t = 1; t <= trace.size(); ++t) {
      gaps[t] = cce_gap(trace, game, t);
      evals[t] = evals[t - 1] + trace.step(t).prox_evaluations;
    }
    for (double target : config.targets) {
      BenchRow row;
      row.solver = solver_name(kind);
      row.target = target;
      row.final_cce_gap = trace.empty() ? 0.0 : gaps.back();
      for (std::size_t t = 1; t <= trace.size(); ++t) {
        if (gaps[t] <= target) {
          row.prox_evaluations = evals[t];
          row.outer_iterations = t;
          break;
        }
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
  out << "solver,epsilon,prox_evals,outer_iters,reached,final_cce_gap\n";
  for (const auto& r : rows) {
    out << r.solver << ',' << format_double(r.target) << ',';
    if (r.prox_evaluations) out << *r.prox_evaluations;
    out << ',';
    if (r.outer_iterations) out << *r.outer_iterations;
    out << ',' << (r.prox_evaluations ? 1 : 0) << ',' << format_double(r.final_cce_gap) << '\n';
  }
}

int cmd_bench(const BenchConfig& config, std::ostream& out, std::ostream& err) {
  if (config.solvers.empty()) {
    err << "error: bench needs at least one solver (--solvers)\n";
    return kExitInput;
  }
  try {
    const NormalFormGame game = load_experiment_game(config.base);
    const auto rows = bench(game, config);
    if (config.base.out) {
      std::ofstream csv(*config.base.out);
      if (!csv) {
        err << "error: cannot write " << config.base.out->string() << '\n';
        return kExitInput;
      }
      write_bench_csv(rows, csv);
    }
    write_bench_csv(rows, out);
    return kExitOk;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

int cmd_verify(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
  std::optional<NormalFormGame> loaded;
  try {
    loaded.emplace(load_experiment_game(config));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  const NormalFormGame& game = *loaded;
  if (config.solver != SolverKind::cpm && config.solver != SolverKind::cpm_decentralized &&
      config.solver != SolverKind::cmwu) {
    err << "error: verify supports the prox-method solvers only (cpm, cpm-decentralized, cmwu)\n";
    return kExitInput;
  }

  const GameSpec spec = make_normal_form_spec(game);
  const ProximalSetup setup = ProximalSetup::for_spec(spec);
  ExperimentConfig raw = config;
  raw.clamp_eta = false;
  double eta = 0.0;
  try {
    eta = resolve_step_size(config.eta, spec.lipschitz, false).effective;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }

  std::mt19937_64 rng(0x5eed);
  std::vector<CheckResult> results;
  results.push_back(check_gradient_bound(setup, spec, 1000, rng));
  results.push_back(check_lipschitz_bound(setup, spec, 1000, rng));
  results.push_back(check_strong_convexity(setup, 1000, rng));
  results.push_back(check_prox_lipschitz(setup, 1000, rng));
  results.push_back(check_three_point(setup, 1000, rng));
  results.push_back(check_map_contraction(setup, spec, eta, 1000, rng));

  std::optional<RunTrace> trace;
  try {
    trace = run_experiment(game, raw);
  } catch (const ConvergenceError& e) {
    CheckResult conv;
    conv.name = "inner loop convergence";
    conv.passed = false;
    conv.detail = e.what();
    results.push_back(conv);
    if (e.partial_trace()) trace = *e.partial_trace();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }

  if (trace) {
    results.push_back(check_residual_contraction(*trace, eta * spec.lipschitz));
    if (config.solver == SolverKind::cpm && config.inner_mode == InnerMode::residual_check) {
      results.push_back(check_inner_budget(*trace, setup));
    }
    results.push_back(check_residual_tolerance(*trace));
    results.push_back(check_per_iteration_inequality(*trace, setup, spec.gradient_bound, 100, rng));
    results.push_back(check_regret_bound(*trace, setup, spec.gradient_bound));
  }

  bool all = true;
  for (const auto& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
    all = all && r.passed;
  }
  out << (all ? "all checks passed\n" : "verification failed\n");
  return all ? kExitOk : kExitVerification;
}

}  // namespace cpm
