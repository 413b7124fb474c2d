#pragma once

#include <string>

#include "json.hpp"

namespace hdg::ops {

// Flat run configuration: parsed from CLI flags or a key=value config file,
// flags winning. Also the surface the python module drives.
struct RunConfig {
  int dim = 0;  // 0 = infer from target
  std::string rho0 = "1";
  std::string delta = "1/2";
  std::string s;  // transferred-game exponent, empty = unset
  std::string schedule = "harmonic:offset=3";
  int rounds = 30;
  int horizon = 0;  // 0 = max(rounds, depth) + slack
  double budget_c = 1e12;
  double eta = 0.5;
  std::string epsilon = "1";
  std::string target = "cantor";
  std::string player_I = "ifs";
  std::string player_II = "random:1";
  std::string tau = "avoid";
  uint64_t seed = 1;
  std::string out;  // output stem; empty = no files
  int repeat = 1;
  bool unfolded = false;
  int depth = 4;    // harness / tree / trace / uniformization depth
  int scales = 10;  // estimate scale count
  std::string method = "box";  // estimate method: box | tree | mass-lower | mass-upper
  double m_constant = 2.0;     // certificate constant m
  std::string cert_s;          // certificate exponent (defaults to delta)
  int max_set = 6;
  int max_orders = 3;
  int trials = 10000;
  int digit_cap = 2;
};

// exit codes shared by every subcommand
inline constexpr int kExitClean = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIForfeit = 3;
inline constexpr int kExitIIForfeit = 4;
inline constexpr int kExitAbort = 5;
inline constexpr int kExitCounterexample = 6;

struct OpResult {
  int exit_code = kExitClean;
  nlohmann::ordered_json report;
};

OpResult cmd_play(const RunConfig& cfg);
OpResult cmd_transfer(const RunConfig& cfg);
OpResult cmd_harness(const RunConfig& cfg);
OpResult cmd_estimate(const RunConfig& cfg);
OpResult cmd_verify_lemmas(const RunConfig& cfg);

/// Builds engine parameters (and the target) out of a config; throws
/// invalid_argument on inconsistent settings.
struct BuiltConfig;
nlohmann::ordered_json describe_config(const RunConfig& cfg);

}  // namespace hdg::ops
