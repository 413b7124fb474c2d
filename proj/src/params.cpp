#include "hdgame/params.hpp"

#include <cmath>

namespace hdg::eng {

Rat GameParams::rho(long n) const {
  Rat r = rho0;
  for (long i = 0; i < n; ++i) r *= schedule.beta(i);
  return r;
}

ParamsAudit validate_params(const GameParams& p) {
  ParamsAudit a;
  if (p.d < 1) {
    a.messages.push_back("dimension d must be >= 1");
    return a;
  }
  if (sgn(p.rho0) <= 0) {
    a.messages.push_back("rho0 must be > 0");
    return a;
  }
  if (sgn(p.delta) <= 0 || p.delta > Rat(p.d)) {
    a.messages.push_back("delta must lie in (0, d]");
    return a;
  }
  if (p.s && *p.s <= p.delta) {
    a.messages.push_back("s must exceed delta");
    return a;
  }

  const Rat half(1, 2);
  Rat prev;
  for (long i = 0; i <= p.horizon; ++i) {
    Rat b = p.beta(i);
    if (sgn(b) <= 0 || b >= half) {
      a.below_half_ok = false;
      a.failing_index = i;
      a.messages.push_back("beta_" + std::to_string(i) + " = " + rat_to_string(b) +
                           " violates 0 < beta < 1/2");
      break;
    }
    if (i > 0 && b > prev) {
      a.monotone_ok = false;
      a.failing_index = i;
      a.messages.push_back("beta_" + std::to_string(i) + " exceeds beta_" + std::to_string(i - 1));
      break;
    }
    prev = b;
  }

  a.tends_to_zero = p.schedule.tends_to_zero();
  if (!a.tends_to_zero)
    a.messages.push_back("schedule '" + p.schedule.spec() + "' does not tend to zero");

  if (a.monotone_ok && a.below_half_ok) {
    // beta_n >= (prod_{i<n} beta_i)^eta, audited in the log domain.
    double log_prod = 0.0;
    long last_fail = 0;  // n = 0 always fails: empty product is 1 > beta_0
    for (long n = 0; n <= p.horizon; ++n) {
      double lhs = rat_log(p.beta(n));
      if (lhs < p.eta * log_prod) last_fail = n + 1;
      log_prod += lhs;
    }
    if (last_fail <= p.horizon)
      a.speed_n0 = last_fail;
    else
      a.messages.push_back("speed condition beta_n >= prod(beta_i)^eta fails at the horizon");
  }

  a.ok = a.monotone_ok && a.below_half_ok && a.tends_to_zero && a.speed_n0.has_value() &&
         a.messages.empty();
  return a;
}

}  // namespace hdg::eng
