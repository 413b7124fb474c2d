#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hdgame/params.hpp"

namespace hdg::eng {

using geo::Ball;

// One player-I move: a finite set of rational points, plus any witness digits
// played alongside it in the unfolded game.
struct MoveI {
  std::vector<Point> points;
  std::vector<int> digits;
};

struct Round {
  MoveI move;
  Point x;
};

struct Position {
  std::vector<Round> rounds;

  int round() const { return static_cast<int>(rounds.size()); }
  const Point& last_x() const { return rounds.back().x; }
};

/// Containment ball binding the next player-I move: B(x_{n-1}, (1-beta_{n-1}) rho_{n-1}),
/// or the configured start ball at round 0 (none if unset).
std::optional<Ball> move_constraint(const GameParams& p, const Position& pos);

struct MoveViolation {
  enum class Rule { EmptyMove, DimensionMismatch, Separation, Containment, StartBall };
  Rule rule;
  int round = 0;
  std::string detail;
};

std::string rule_name(MoveViolation::Rule r);

// ok (nullopt) iff F is nonempty, all points have dimension d, F is
// 3 rho_i separated, and (for i >= 1) every point lies strictly inside
// B(x_{i-1}, (1-beta_{i-1}) rho_{i-1}). Round 0 is only constrained by the
// optional start ball.
std::optional<MoveViolation> validate_move_I(const GameParams& p, const Position& pos,
                                             const MoveI& move);

// Log-domain budget statistic S_n = sum_{i<n} (delta ln(1/beta_i) - ln|F_i|).
struct BudgetLedger {
  double S = 0.0;
  double max_S = 0.0;
  std::vector<double> trace;  // S_{n+1} after each round

  void update(size_t move_size, const Rat& beta, double delta);
};

/// exp(S_n) as an exact rational power comparison aid: returns
/// (prod |F_i|^-1)^q / (prod beta_i)^p for delta = p/q, i.e. R^q with
/// R the budget ratio. Used to cross-check the float ledger.
Rat budget_ratio_power(const GameParams& p, const std::vector<size_t>& move_sizes);

struct WitnessLog {
  std::vector<int> digits;
  std::vector<int> round_played;  // digit index -> round

  void append(const std::vector<int>& ds, int round);
};

/// B(x_{n-1}, 2 rho_{n-1}); any legal continuation's limit stays inside.
Ball localize_limit(const GameParams& p, const Position& pos);

}  // namespace hdg::eng
