#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "hdgame/game.hpp"
#include "hdgame/targets.hpp"

namespace hdg::strat {

using eng::GameParams;
using eng::MoveI;
using eng::Position;

/// Raised by a strategy that cannot produce a move (e.g. target/parameter
/// mismatch); the referee turns it into an abort verdict with attribution.
struct StrategyAbort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class StrategyI {
 public:
  virtual ~StrategyI() = default;
  virtual MoveI next_move(const GameParams& p, const Position& pos) = 0;
  virtual std::string spec() const = 0;
  virtual std::unique_ptr<StrategyI> clone() const = 0;
};

class StrategyII {
 public:
  virtual ~StrategyII() = default;
  virtual Point choose(const GameParams& p, const Position& pos, const MoveI& offered) = 0;
  virtual std::string spec() const = 0;
  virtual std::unique_ptr<StrategyII> clone() const = 0;
};

// --- concrete players -----------------------------------------------------

/// II picking a pseudo-random element of F; pure in (position, offer, seed),
/// so repeated queries at the same position reproduce the same pick.
std::unique_ptr<StrategyII> random_player_II(uint64_t seed);

/// II picking the offered point nearest to a fixed anchor (canonical ties).
std::unique_ptr<StrategyII> nearest_player_II(Point anchor);

/// II maximizing exact distance to a finite (or empty) target, canonical ties.
std::unique_ptr<StrategyII> avoid_player_II(tgt::TargetSet target);

/// I playing random legal moves: a few lattice points inside the current
/// constraint ball, greedily filtered to 3 rho_i separation. Always legal.
std::unique_ptr<StrategyI> random_player_I(uint64_t seed);

struct IfsPlayerOptions {
  bool unfolded = false;  // emit witness digits of the pinned piece address
};

// Player I following an equicontractive attractor: at each round it offers
// the centers of the shallowest pieces with diameter < rho_i that fit
// strictly inside the constraint ball, greedily pruned to 3 rho_i separation.
// Requires delta < similarity dimension for a healthy budget.
std::unique_ptr<StrategyI> ifs_player_I(tgt::IFSSystem ifs, const Rat& delta,
                                        IfsPlayerOptions opts = {});

/// Least level whose piece diameter is < the given scale.
int ifs_level_for_scale(const tgt::IFSSystem& ifs, const Rat& scale);

// Registry parsing: "ifs" / "ifs:<target>:<delta>" / "random:<seed>" for I;
// "random:<seed>" / "avoid" / "nearest:<point>" for II. The bare "ifs" form
// takes the target and delta from the surrounding configuration.
std::unique_ptr<StrategyI> parse_strategy_I(const std::string& spec, const tgt::TargetSet& target,
                                            const GameParams& params, bool unfolded);
std::unique_ptr<StrategyII> parse_strategy_II(const std::string& spec,
                                              const tgt::TargetSet& target);

}  // namespace hdg::strat
