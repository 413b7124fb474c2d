#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "hdgame/game.hpp"
#include "hdgame/strategy.hpp"
#include "hdgame/targets.hpp"

namespace hdg::eng {

enum class VerdictKind {
  OpenConsistentWithI,  // target meets every localization ball so far
  ILostCertified,       // distance lower bound cleared 2 rho: limit provably misses A
  IForfeits,
  IIForfeits,
  AbortI,  // strategy raised an internal error
  AbortII,
};

std::string verdict_name(VerdictKind k);

struct Starvation {
  int longest_gap = 0;  // rounds without a new witness digit
  bool flagged = false;
};

struct Verdict {
  VerdictKind kind = VerdictKind::OpenConsistentWithI;
  std::optional<MoveViolation> violation;
  std::string abort_message;
  bool budget_health = true;  // max S_n <= ln(budget_c)
  double max_S = 0.0;
  std::optional<int> first_certified_round;
  Starvation starvation;  // unfolded mode only
};

struct RunTranscript {
  GameParams params;
  std::string target_spec;
  std::string strategy_I_spec;
  std::string strategy_II_spec;
  uint64_t seed = 0;
  bool unfolded = false;

  Position position;            // all completed rounds
  std::optional<MoveI> pending;  // the violating/aborted move, if any
  std::vector<double> S_trace;  // S_{n+1} after round n
  WitnessLog witness;
  Verdict verdict;
};

// Runs the full game loop: alternates strategy calls, validates every player-I
// move, picks up witness digits in unfolded mode, keeps the budget ledger, and
// closes with the finite-horizon verdict. Deterministic in its arguments.
RunTranscript play(const GameParams& params, const tgt::TargetSet& target,
                   strat::StrategyI& player_I, strat::StrategyII& player_II, int rounds,
                   uint64_t seed, bool unfolded = false);

// Finite-horizon proxy of "lim x_n in A": certifies a loss for I when the
// target's distance lower bound at x_{n-1} exceeds 2 rho_{n-1}. Returns the
// outcome together with the first round at which it certified.
std::pair<VerdictKind, std::optional<int>> finite_horizon_verdict(const GameParams& params,
                                                                  const Position& pos,
                                                                  const tgt::TargetSet& target);

/// Refinement level used by the verdict at scale rho: piece diameter <= rho.
int verdict_level(const GameParams& params, const tgt::TargetSet& target, const Rat& scale);

// JSON-lines transcript: header record (params, seed, specs), one record per
// round, footer with the verdict. Rationals travel as "num/den" strings.
void save_transcript(const RunTranscript& t, std::ostream& os);
std::string transcript_to_string(const RunTranscript& t);
RunTranscript load_transcript(std::istream& is);
RunTranscript transcript_from_string(const std::string& s);

}  // namespace hdg::eng
