// Experiment runner: run / bench / verify on normal-form games.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cpm/experiment.hpp"

namespace {

struct RawOptions {
  std::string game;
  std::string random;
  std::string solver = "cpm";
  std::string eta = "auto";
  std::string eps_schedule = "inv-t2";
  std::string inner_mode = "residual";
  std::size_t horizon = 100;
  std::string out;
  std::size_t cadence = 10;
};

void add_common(CLI::App* cmd, RawOptions& o) {
  cmd->add_option("--game", o.game, "JSON game file");
  cmd->add_option("--random", o.random, "random game n:d1,d2,...:V:seed");
  cmd->add_option("--eta", o.eta, "step size, or auto for 1/(2L)");
  cmd->add_option("--eps-schedule", o.eps_schedule, "inv-t2 or const:<v>");
  cmd->add_option("--inner-mode", o.inner_mode, "residual or budget");
  cmd->add_option("--T", o.horizon, "number of outer iterations");
  cmd->add_option("--out", o.out, "output CSV path");
  cmd->add_option("--cadence", o.cadence, "CCE gap every k iterations");
}

cpm::ExperimentConfig to_config(const RawOptions& o) {
  cpm::ExperimentConfig c;
  if (!o.game.empty()) c.game_file = o.game;
  if (!o.random.empty()) c.random_game = cpm::parse_random_request(o.random);
  c.solver = cpm::parse_solver(o.solver);
  if (o.eta != "auto") {
    std::size_t pos = 0;
    c.eta = std::stod(o.eta, &pos);
    if (pos != o.eta.size()) throw std::invalid_argument("cannot parse --eta '" + o.eta + "'");
  }
  c.tolerance = cpm::parse_tolerance_request(o.eps_schedule);
  if (o.inner_mode == "residual") {
    c.inner_mode = cpm::InnerMode::residual_check;
  } else if (o.inner_mode == "budget") {
    c.inner_mode = cpm::InnerMode::fixed_budget;
  } else {
    throw std::invalid_argument("--inner-mode expects residual or budget");
  }
  c.horizon = o.horizon;
  if (!o.out.empty()) c.out = o.out;
  c.cadence = o.cadence;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clairvoyant OMD / conceptual prox method experiments"};
  app.require_subcommand(1);

  RawOptions run_opts, bench_opts, verify_opts;
  auto* run = app.add_subcommand("run", "run one solver and write a trace CSV");
  add_common(run, run_opts);
  run->add_option("--solver", run_opts.solver, "cpm|cpm-decentralized|cmwu|mwu|omwu|mirror-prox");

  std::string solver_list;
  std::vector<double> targets{0.1, 0.01};
  auto* bench = app.add_subcommand("bench", "prox evaluations until the CCE gap reaches each target");
  add_common(bench, bench_opts);
  bench->add_option("--solvers", solver_list, "comma-separated solver list")->required();
  bench->add_option("--eps-grid", targets, "target CCE gaps")->delimiter(',');

  auto* verify = app.add_subcommand("verify", "run the property suites on a game");
  add_common(verify, verify_opts);
  verify->add_option("--solver", verify_opts.solver, "cpm|cpm-decentralized|cmwu");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? cpm::kExitOk : cpm::kExitInput;
  }

  try {
    if (*run) return cpm::cmd_run(to_config(run_opts), std::cout, std::cerr);
    if (*verify) return cpm::cmd_verify(to_config(verify_opts), std::cout, std::cerr);
    cpm::BenchConfig bc;
    bc.base = to_config(bench_opts);
    std::string item;
    std::istringstream is(solver_list);
    while (std::getline(is, item, ',')) {
      if (!item.empty()) bc.solvers.push_back(cpm::parse_solver(item));
    }
    bc.targets = targets;
    return cpm::cmd_bench(bc, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cpm::kExitInput;
  }
}
