#pragma once

#include <memory>
#include <vector>

#include "hdgame/engine.hpp"
#include "hdgame/strategy.hpp"

namespace hdg::unf {

using eng::GameParams;
using eng::MoveI;
using eng::Position;
using strat::StrategyII;

// Selects an element whose rank is >= |A|/n under every one of the n total
// orders (each order given as a bijective rank map onto 1..|A|). Existence is
// a theorem, so failure to find one throws logic_error.
int linord_select(const std::vector<std::vector<int>>& ranks);

struct SimulationEntry {
  std::vector<int> witness;   // partial witness u_i
  int witness_index = 0;      // position of u_i in the fixed enumeration
  Position q;                 // unfolded shadow position, consistent with tau
};

// Shadow runs of an unfolded strategy kept alongside a real position:
// per round each entry offered a subset of the real move with the same
// chosen point.
struct SimulationState {
  Position real;
  std::vector<SimulationEntry> entries;
};

/// Replays tau over an entry and checks it reproduces every recorded pick,
/// and that the entry simulates the real position (subsets + same x).
bool entry_consistent(const GameParams& p, StrategyII& tau, const Position& real,
                      const SimulationEntry& e);

// Rank maps r_i: F -> {1..|F|} from tau's removal preferences: rank |F| is
// tau's first pick on (F, v_i), rank j its pick once all higher ranks are
// removed. One map per entry; |F| tau queries each.
std::vector<std::vector<int>> rank_profile(const GameParams& p, StrategyII& tau,
                                           const SimulationState& sim,
                                           const std::vector<Point>& F,
                                           const std::vector<std::vector<int>>& v);

struct ExtendResult {
  Point x;
  std::vector<size_t> entry_sizes;  // |E_i| per entry
  size_t move_size = 0;             // |F|
};

// The witness-extension step: picks x in F so that every entry can legally
// follow with E_i = downward closure of x under its induced order, each of
// size >= |F| / #entries, staying consistent with tau. Mutates sim in place
// (entries extended, real position appended).
ExtendResult extwit_extend(const GameParams& p, StrategyII& tau, SimulationState& sim,
                           const MoveI& move, const std::vector<std::vector<int>>& v);

/// Breadth-first enumeration of digit strings with digits < cap:
/// length first, lexicographic inside a length; prefixes come first.
std::vector<std::vector<int>> witness_enumeration(int cap, int count);

struct TransferAuditRow {
  int round = 0;
  struct Entry {
    std::vector<int> witness;
    size_t E_size = 0;
    size_t F_size = 0;
    bool consistent = true;
  };
  std::vector<Entry> entries;
};

// Player-II strategy for the s-game built from an unfolded strategy at delta:
// passes tau through until beta_i^(s-delta) < 1/2, then maintains simulations
// for the witness enumeration, adding w_k exactly when beta_i^(s-delta)
// drops below 1/(k+1) (duplicating w_k's parent entry for that round).
// Stateful: one instance drives one run.
class TransferredII : public StrategyII {
 public:
  TransferredII(std::unique_ptr<StrategyII> tau, Rat delta, Rat s, int digit_cap);

  Point choose(const GameParams& p, const Position& pos, const MoveI& offered) override;
  std::string spec() const override;
  std::unique_ptr<StrategyII> clone() const override;

  const SimulationState& state() const { return sim_; }
  const std::vector<TransferAuditRow>& audit() const { return audit_; }

 private:
  std::unique_ptr<StrategyII> tau_;
  Rat delta_, s_;
  int digit_cap_;
  SimulationState sim_;
  std::vector<std::vector<int>> wseq_;
  int next_witness_ = 1;
  std::vector<TransferAuditRow> audit_;
};

/// Exact test beta^(s-delta) < 1/m for rational beta and s-delta = p/q > 0.
bool beta_power_below(const Rat& beta, const Rat& exponent, long m);

// --- uniformization --------------------------------------------------------

struct UnifNode {
  int depth = 0;
  std::vector<int> witness_prefix;  // digits emitted through this node's move
  Point x;                          // II's pick entering this node (depth >= 1)
  std::vector<std::unique_ptr<UnifNode>> children;
};

struct UnifResult {
  std::unique_ptr<UnifNode> root;
  std::vector<int> modulus;  // h(k) = min emitted-prefix length at depth k
  long long node_count = 0;
  bool prefixes_monotone = true;  // children extend their parent's prefix
};

// Expands the finitely splitting tree of sigma-consistent positions to the
// given depth, recording the witness prefix sigma has emitted at each node
// and the per-depth sharing modulus h(k). Illegal sigma moves abort.
UnifResult uniformization_extract(const GameParams& p, strat::StrategyI& sigma, int depth);

}  // namespace hdg::unf
