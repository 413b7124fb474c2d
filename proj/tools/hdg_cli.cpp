#include <iostream>

#include "CLI11.hpp"
#include "hdgame/ops.hpp"

namespace {

void add_common(CLI::App* app, hdg::ops::RunConfig& cfg) {
  app->set_config("--config", "", "flat key=value config file; flags win");
  app->add_option("--dim", cfg.dim, "ambient dimension (0 = infer from target)");
  app->add_option("--rho0", cfg.rho0, "initial radius rho_0 (rational)");
  app->add_option("--delta", cfg.delta, "dimension parameter delta (rational)");
  app->add_option("--s", cfg.s, "transferred-game exponent s > delta (rational)");
  app->add_option("--schedule", cfg.schedule, "beta schedule, e.g. harmonic:offset=3");
  app->add_option("--rounds", cfg.rounds, "rounds to play");
  app->add_option("--horizon", cfg.horizon, "audit horizon (0 = auto)");
  app->add_option("--budget-c", cfg.budget_c, "budget constant c");
  app->add_option("--eta", cfg.eta, "schedule speed audit parameter");
  app->add_option("--epsilon", cfg.epsilon, "harness mass exponent (positive integer)");
  app->add_option("--target", cfg.target, "cantor | carpet | finite:(p1;p2;...) | empty");
  app->add_option("--seed", cfg.seed, "run seed");
  app->add_option("--out", cfg.out, "output file stem");
  app->add_option("--repeat", cfg.repeat, "independent seeded runs (parallel)");
  app->add_option("--digit-cap", cfg.digit_cap, "witness digits range over {0..cap-1}");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hdg: referee, strategies and estimators for the Hausdorff dimension game"};
  app.require_subcommand(1);
  hdg::ops::RunConfig cfg;

  auto* play = app.add_subcommand("play", "run one game (or a seed batch)");
  add_common(play, cfg);
  play->add_option("--I", cfg.player_I, "player I: ifs | ifs:<target>:<delta> | random:<seed>");
  play->add_option("--II", cfg.player_II, "player II: random:<seed> | avoid | nearest:<point>");
  play->add_flag("--unfolded", cfg.unfolded, "play the unfolded game (witness digits)");

  auto* transfer = app.add_subcommand("transfer", "run a strategy transferred from the unfolded game");
  add_common(transfer, cfg);
  transfer->add_option("--tau", cfg.tau, "unfolded player-II strategy to transfer");
  transfer->add_option("--I", cfg.player_I, "player I opponent (default random:<seed>)");

  auto* harness = app.add_subcommand("harness", "build the coded challenge tree against a strategy");
  add_common(harness, cfg);
  harness->add_option("--tau", cfg.tau, "player-II strategy under challenge");
  harness->add_option("--depth", cfg.depth, "tree depth");

  auto* estimate = app.add_subcommand("estimate", "dimension estimators and certificates");
  add_common(estimate, cfg);
  estimate->add_option("--method", cfg.method, "box | tree | mass-lower | mass-upper");
  estimate->add_option("--scales", cfg.scales, "scale count for box counting");
  estimate->add_option("--depth", cfg.depth, "tree depth for tree-based methods");
  estimate->add_option("--I", cfg.player_I, "player I for tree-based methods");
  estimate->add_option("--m", cfg.m_constant, "certificate constant m");
  estimate->add_option("--cert-s", cfg.cert_s, "certificate exponent (defaults to delta)");

  auto* verify = app.add_subcommand("verify-lemmas", "exhaustive small-case lemma suites");
  add_common(verify, cfg);
  verify->add_option("--max-set", cfg.max_set, "max |A| for the selection lemma");
  verify->add_option("--max-orders", cfg.max_orders, "max number of linear orders");
  verify->add_option("--trials", cfg.trials, "random order tuples per size");

  CLI11_PARSE(app, argc, argv);

  try {
    hdg::ops::OpResult res;
    if (play->parsed()) res = hdg::ops::cmd_play(cfg);
    else if (transfer->parsed()) res = hdg::ops::cmd_transfer(cfg);
    else if (harness->parsed()) res = hdg::ops::cmd_harness(cfg);
    else if (estimate->parsed()) res = hdg::ops::cmd_estimate(cfg);
    else if (verify->parsed()) res = hdg::ops::cmd_verify_lemmas(cfg);
    std::cout << res.report.dump(2) << "\n";
    return res.exit_code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return hdg::ops::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return hdg::ops::kExitAbort;
  }
}
