#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hdgame/geometry.hpp"
#include "hdgame/schedule.hpp"

namespace hdg::eng {

// Everything governing one game: ambient dimension, the initial radius,
// the dimension parameter delta (and s for transferred games), the beta
// schedule, the budget constant c and the speed audit parameter eta.
struct GameParams {
  int d = 1;
  Rat rho0 = Rat(1);
  Rat delta = Rat(1, 2);
  std::optional<Rat> s;  // target exponent of a transferred game, s > delta
  Schedule schedule = Schedule::harmonic(3);
  double budget_c = 1e12;
  double eta = 0.5;
  Rat epsilon = Rat(1);  // challenge-harness mass exponent
  int horizon = 64;
  std::optional<geo::Ball> start_ball;  // optional round-0 containment, off by default
  int digit_cap = 2;                    // witness digits range over {0..digit_cap-1}
  int starvation_window = 8;            // unfolded-mode digit-gap report threshold

  Rat beta(long i) const { return schedule.beta(i); }
  /// rho_n = (prod_{i<n} beta_i) * rho0, exact.
  Rat rho(long n) const;
};

struct ParamsAudit {
  bool ok = false;
  bool monotone_ok = true;
  bool below_half_ok = true;
  bool tends_to_zero = true;
  std::optional<long> failing_index;        // first index violating an order rule
  std::optional<long> speed_n0;             // least n0 with Eq-audit valid on [n0, horizon]
  std::vector<std::string> messages;
};

// Checks 0 < beta_{i+1} <= beta_i < 1/2 up to the horizon, the declared
// beta_i -> 0 property, and finds the least n0 <= horizon such that
// beta_n >= (prod_{i<n} beta_i)^eta for all n in [n0, horizon].
ParamsAudit validate_params(const GameParams& p);

}  // namespace hdg::eng
