#pragma once

#include <memory>
#include <vector>

#include "hdgame/engine.hpp"
#include "hdgame/strategy.hpp"

namespace hdg::strat {

using eng::GameParams;
using geo::Ball;

// Node of the coded challenge tree built against a player-II strategy.
// code pairs (class index i, removal index j); masses follow the rule
//   mu(child) = mu(parent) / (ell_u * j^(1+eps) * sum_{j'<=k_u} j'^-(1+eps))
// kept exact when eps is a positive integer.
struct HarnessNode {
  std::vector<int> code_i;  // s ^ i
  std::vector<int> code_j;  // t ^ j
  eng::Position pos;        // p_u
  Ball ball;                // B_u = B(x_u, (1-beta_n) rho_n)
  Rat mass = Rat(1);        // mu(N_u)
  long long k_u = 0;        // |class cap B_parent| for this node's class
  long long ell_u = 0;      // classes of the parent net with appropriate children
  std::vector<std::unique_ptr<HarnessNode>> children;

  int depth() const { return static_cast<int>(code_i.size()); }
};

struct HarnessOptions {
  int depth = 4;
  Rat epsilon = Rat(1);       // positive integer for exact masses
  Rat mass_floor = Rat(0);    // skip subtrees below this mass (0 = keep all)
  std::optional<Ball> start_region;  // defaults to B(0, rho0)
};

struct HarnessResult {
  std::unique_ptr<HarnessNode> root;
  long long node_count = 0;
  long long max_classes = 0;  // max class count over all nets built
  long long skipped_by_floor = 0;
};

// Builds the tree: at each node, a fresh net of spacing rho_n/2 inside the
// node's ball, partitioned into 3 rho_n separated classes; per class the
// offered sets remove tau's favorite points first (j = k_u down to 1).
HarnessResult harness_build(const GameParams& params, StrategyII& tau,
                            const HarnessOptions& opts);

struct TraceStep {
  int n = 0;
  Point net_point;  // x_n: net point nearest the traced x
  int class_index = 0;
  long long j = 0;  // removal index at which tau picked x_n
  long long k_u = 0;
  bool legality_ok = true;  // |x_n - x_{n-1}| < (1 - beta_{n-1}) rho_{n-1}
};

struct TraceResult {
  std::vector<TraceStep> steps;
  eng::Position pos;
  bool all_legal = true;
};

// Replays the point-tracing argument: per level, the net point nearest x is
// recovered as tau's pick from one of the removal sets of its class.
TraceResult trace_point(const GameParams& params, StrategyII& tau, const Point& x, int depth,
                        const std::optional<Ball>& start_region = std::nullopt);

}  // namespace hdg::strat
