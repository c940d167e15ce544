#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cpm/games.hpp"
#include "cpm/solver.hpp"
#include "cpm/trace.hpp"

namespace cpm {

enum ExitCode : int {
  kExitOk = 0,
  kExitInput = 1,
  kExitConvergence = 2,
  kExitVerification = 3,
};

enum class SolverKind { cpm, cpm_decentralized, cmwu, mwu, omwu, mirror_prox };

SolverKind parse_solver(const std::string& name);
std::string solver_name(SolverKind kind);

/// `n:d1,d2,...:V:seed`
struct RandomGameRequest {
  std::size_t players = 2;
  std::vector<std::size_t> actions;
  double utility_bound = 1.0;
  std::uint64_t seed = 0;
};
RandomGameRequest parse_random_request(const std::string& text);

/// `inv-t2` or `const:<v>`
struct ToleranceRequest {
  bool inverse_square = true;
  double value = 0.0;

  ToleranceSchedule schedule() const;
};
ToleranceRequest parse_tolerance_request(const std::string& text);

struct ExperimentConfig {
  std::optional<std::filesystem::path> game_file;
  std::optional<RandomGameRequest> random_game;
  SolverKind solver = SolverKind::cpm;
  /// nullopt means auto (1/(2L)).
  std::optional<double> eta;
  /// Reduce step sizes above 1/(2L) for the prox-method solvers.
  bool clamp_eta = true;
  ToleranceRequest tolerance;
  InnerMode inner_mode = InnerMode::residual_check;
  std::size_t horizon = 100;
  std::optional<std::filesystem::path> out;
  std::size_t cadence = 10;
};

/// Loads or generates the game. Throws on I/O or validation failure.
NormalFormGame load_experiment_game(const ExperimentConfig& config);

/// Runs the configured learner on a normal-form game.
RunTrace run_experiment(const NormalFormGame& game, const ExperimentConfig& config);

/// One parsed row of a trace CSV.
struct TraceRow {
  std::size_t t = 0;
  std::size_t inner_iters = 0;
  double residual = 0.0;
  double eps_t = 0.0;
  std::vector<double> regrets;
  std::optional<double> cce_gap;
};

/// Header `t,inner_iters,residual,eps_t,regret_p1..regret_pn,cce_gap`; values
/// use 17 significant digits; cce_gap is filled every `cadence` steps and on
/// the last row.
void write_trace_csv(const RunTrace& trace, const NormalFormGame& game, std::size_t cadence, std::ostream& out);
std::vector<TraceRow> read_trace_csv(std::istream& in);

/// Final regrets, gap, totals, step sizes and the theoretical bounds.
nlohmann::json run_summary(const RunTrace& trace, const NormalFormGame& game);

int cmd_run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

struct BenchConfig {
  ExperimentConfig base;
  std::vector<SolverKind> solvers;
  std::vector<double> targets{0.1, 0.01};
};

/// One row per (solver, target): prox evaluations until the CCE gap first
/// drops to the target, blank when it never does within the horizon.
struct BenchRow {
  std::string solver;
  double target = 0.0;
  std::optional<std::size_t> prox_evaluations;
  std::optional<std::size_t> outer_iterations;
  double final_cce_gap = 0.0;
};

std::vector<BenchRow> bench(const NormalFormGame& game, const BenchConfig& config);
void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out);
int cmd_bench(const BenchConfig& config, std::ostream& out, std::ostream& err);

/// Runs the property suites on the game and on a residual-check prox-method
/// trace with the requested step size taken as is.
int cmd_verify(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

}  // namespace cpm
