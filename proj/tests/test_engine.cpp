#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "hdgame/engine.hpp"

using namespace hdg;
using namespace hdg::eng;

namespace {

GameParams harmonic_params(const char* delta = "1/2", int horizon = 64) {
  GameParams p;
  p.delta = rat_from_string(delta);
  p.horizon = horizon;
  return p;
}

Point pt(const char* s) { return point_of({rat_from_string(s)}); }

}  // namespace

TEST_CASE("rho is the exact product of betas") {
  GameParams p = harmonic_params();
  CHECK(p.rho(0) == Rat(1));                 // empty product
  CHECK(p.rho(1) == Rat(1, 3));
  CHECK(p.rho(2) == Rat(1, 12));             // 1/3 * 1/4
  p.rho0 = Rat(2);
  CHECK(p.rho(1) == Rat(2, 3));
}

TEST_CASE("validate_params") {
  GameParams p = harmonic_params();
  p.eta = 0.5;
  p.horizon = 100;
  auto a = validate_params(p);
  CHECK(a.ok);
  REQUIRE(a.speed_n0.has_value());
  CHECK(*a.speed_n0 <= 5);  // harmonic + eta=0.5 settles by n0 = 5

  GameParams c = p;
  c.schedule = Schedule::constant(Rat(1, 3));
  auto ac = validate_params(c);
  CHECK_FALSE(ac.ok);
  CHECK_FALSE(ac.tends_to_zero);

  // beta_0 = 2/3 >= 1/2 must fail the order rule
  GameParams bad = p;
  bad.schedule = Schedule::constant(Rat(2, 3));
  auto ab = validate_params(bad);
  CHECK_FALSE(ab.ok);
  CHECK_FALSE(ab.below_half_ok);
  CHECK(ab.failing_index == 0);
}

TEST_CASE("validate_move_I rules") {
  GameParams p = harmonic_params();
  Position pos;

  MoveI f0;
  f0.points = {pt("0"), pt("4"), pt("8")};
  CHECK_FALSE(validate_move_I(p, pos, f0).has_value());  // 3*rho_0 = 3 separation holds

  MoveI close;
  close.points = {pt("0"), pt("1")};
  auto v = validate_move_I(p, pos, close);
  REQUIRE(v.has_value());
  CHECK(v->rule == MoveViolation::Rule::Separation);

  MoveI empty;
  CHECK(validate_move_I(p, pos, empty)->rule == MoveViolation::Rule::EmptyMove);

  // containment: after x_0 = 0 with beta_0 = 1/3, F_1 must be inside B(0, 2/3)
  pos.rounds.push_back(Round{f0, pt("0")});
  MoveI f1;
  f1.points = {pt("9/10")};
  auto cv = validate_move_I(p, pos, f1);
  REQUIRE(cv.has_value());
  CHECK(cv->rule == MoveViolation::Rule::Containment);
  f1.points = {pt("1/2")};
  CHECK_FALSE(validate_move_I(p, pos, f1).has_value());

  // boundary is excluded: distance exactly (1-beta_0) rho_0
  f1.points = {pt("2/3")};
  CHECK(validate_move_I(p, pos, f1).has_value());
}

TEST_CASE("optional start ball constrains round 0") {
  GameParams p = harmonic_params();
  p.start_ball = geo::Ball{pt("0"), Rat(1)};
  Position pos;
  MoveI mv;
  mv.points = {pt("4")};
  CHECK(validate_move_I(p, pos, mv)->rule == MoveViolation::Rule::StartBall);
  mv.points = {pt("1/2")};
  CHECK_FALSE(validate_move_I(p, pos, mv).has_value());
}

TEST_CASE("budget ledger") {
  GameParams p = harmonic_params("1");
  BudgetLedger led;
  led.update(3, p.beta(0), 1.0);  // |F_0| = 3, beta_0 = 1/3
  led.update(4, p.beta(1), 1.0);  // |F_1| = 4, beta_1 = 1/4
  CHECK(std::abs(led.S) < 1e-12);  // (1/12)/(1/12) = 1

  BudgetLedger single;
  single.update(1, p.beta(0), 1.0);
  CHECK(single.S == doctest::Approx(std::log(3.0)).epsilon(1e-12));

  // |F_i| = ceil(beta_i^-delta) keeps S_n <= 0 termwise
  GameParams q = harmonic_params("1/2");
  BudgetLedger l2;
  for (int i = 0; i < 30; ++i) {
    Rat b = q.beta(i);
    auto size = static_cast<size_t>(ceil_int(1 / sqrt_lb(b)).get_ui());
    l2.update(size, b, 0.5);
    CHECK(l2.S <= 1e-12);
  }
}

TEST_CASE("ledger matches the exact rational cross-check") {
  GameParams p = harmonic_params("1/2");
  std::vector<size_t> sizes = {1, 2, 3, 5, 2, 7, 1, 4, 9, 2};
  BudgetLedger led;
  for (size_t i = 0; i < sizes.size(); ++i) led.update(sizes[i], p.beta(static_cast<long>(i)), 0.5);
  // exp(S_n)^q == prod |F|^-q / prod beta^p for delta = p/q
  Rat exact = budget_ratio_power(p, sizes);
  double q = static_cast<double>(p.delta.get_den().get_si());
  CHECK(q * led.S == doctest::Approx(rat_log(exact)).epsilon(1e-9));
}

TEST_CASE("localize_limit") {
  GameParams p = harmonic_params();
  Position pos;
  MoveI mv;
  mv.points = {pt("0")};
  pos.rounds.push_back(Round{mv, pt("0")});
  auto ball = localize_limit(p, pos);
  CHECK(ball.center == pt("0"));
  CHECK(ball.radius == Rat(2));
}

TEST_CASE("play: clean run, forfeits, aborts") {
  GameParams p = harmonic_params();
  auto target = tgt::parse_target("cantor");

  auto sI = strat::ifs_player_I(target.ifs(), p.delta);
  auto sII = strat::random_player_II(7);
  auto t = play(p, target, *sI, *sII, 12, 7);
  CHECK(t.verdict.kind == VerdictKind::OpenConsistentWithI);
  CHECK(t.position.round() == 12);

  // re-validation pass: every round legal and every pick a member of its move
  Position replay;
  for (const auto& r : t.position.rounds) {
    CHECK_FALSE(validate_move_I(p, replay, r.move).has_value());
    bool member = false;
    for (const auto& q : r.move.points) member = member || q == r.x;
    CHECK(member);
    replay.rounds.push_back(r);
  }

  // localization: every later pick stays in the round-n localization ball
  for (int n = 1; n <= t.position.round(); ++n) {
    Position prefix;
    prefix.rounds.assign(t.position.rounds.begin(), t.position.rounds.begin() + n);
    auto ball = localize_limit(p, prefix);
    for (int m = n; m < t.position.round(); ++m)
      CHECK(ball.contains_strict(t.position.rounds[static_cast<size_t>(m)].x));
  }

  // player I offering a non-separated set forfeits at round 0
  struct BadI : strat::StrategyI {
    MoveI next_move(const GameParams&, const Position&) override {
      MoveI mv;
      mv.points = {point_of({Rat(0)}), point_of({Rat(1)})};
      return mv;
    }
    std::string spec() const override { return "bad"; }
    std::unique_ptr<StrategyI> clone() const override { return std::make_unique<BadI>(); }
  } bad_I;
  auto t2 = play(p, target, bad_I, *sII, 5, 1);
  CHECK(t2.verdict.kind == VerdictKind::IForfeits);
  CHECK(t2.verdict.violation->round == 0);
  CHECK(t2.position.round() == 0);  // truncated at the violation
  CHECK(t2.pending.has_value());

  // player II returning a point outside F forfeits
  struct BadII : strat::StrategyII {
    Point choose(const GameParams&, const Position&, const MoveI&) override {
      return point_of({Rat(99)});
    }
    std::string spec() const override { return "bad"; }
    std::unique_ptr<StrategyII> clone() const override { return std::make_unique<BadII>(); }
  } bad_II;
  auto t3 = play(p, target, *sI, bad_II, 5, 1);
  CHECK(t3.verdict.kind == VerdictKind::IIForfeits);

  // a throwing strategy aborts with attribution
  struct Throwing : strat::StrategyI {
    MoveI next_move(const GameParams&, const Position&) override {
      throw strat::StrategyAbort("boom");
    }
    std::string spec() const override { return "throwing"; }
    std::unique_ptr<StrategyI> clone() const override { return std::make_unique<Throwing>(); }
  } throwing;
  auto t4 = play(p, target, throwing, *sII, 5, 1);
  CHECK(t4.verdict.kind == VerdictKind::AbortI);
  CHECK(t4.verdict.abort_message == "boom");
}

TEST_CASE("finite-horizon verdict") {
  GameParams p = harmonic_params();

  // A = {1}: picking x = 0 certifies a loss once 2 rho < 1
  auto target = tgt::parse_target("finite:(1)");
  Position pos;
  MoveI mv;
  mv.points = {pt("0")};
  pos.rounds.push_back(Round{mv, pt("0")});
  // round 1: 2 rho_0 = 2 >= 1, still open
  auto [k1, f1] = finite_horizon_verdict(p, pos, target);
  CHECK(k1 == VerdictKind::OpenConsistentWithI);
  // extend twice: 2 rho_2 = 1/6 < 1 certifies
  MoveI mv2;
  mv2.points = {pt("0")};
  pos.rounds.push_back(Round{mv2, pt("0")});
  pos.rounds.push_back(Round{mv2, pt("0")});
  auto [k2, f2] = finite_horizon_verdict(p, pos, target);
  CHECK(k2 == VerdictKind::ILostCertified);

  // empty target certifies at round 1
  auto empty = tgt::parse_target("empty", 1);
  auto [k3, f3] = finite_horizon_verdict(p, pos, empty);
  CHECK(k3 == VerdictKind::ILostCertified);
  CHECK(*f3 == 1);

  // a Cantor piece center stays open-consistent at every round
  auto cantor = tgt::parse_target("cantor");
  Position cpos;
  MoveI cm;
  cm.points = {pt("1/6")};
  cpos.rounds.push_back(Round{cm, pt("1/6")});
  auto [k4, f4] = finite_horizon_verdict(p, cpos, cantor);
  CHECK(k4 == VerdictKind::OpenConsistentWithI);
}

TEST_CASE("transcript round-trips bit-exactly and replays deterministically") {
  GameParams p = harmonic_params();
  auto target = tgt::parse_target("cantor");
  auto sI = strat::ifs_player_I(target.ifs(), p.delta, strat::IfsPlayerOptions{true});
  auto sII = strat::random_player_II(3);
  auto t = play(p, target, *sI, *sII, 10, 3, true);

  std::string a = transcript_to_string(t);
  auto loaded = transcript_from_string(a);
  std::string b = transcript_to_string(loaded);
  CHECK(a == b);  // byte-identical after a round trip

  auto sI2 = strat::ifs_player_I(target.ifs(), p.delta, strat::IfsPlayerOptions{true});
  auto sII2 = strat::random_player_II(3);
  auto t2 = play(p, target, *sI2, *sII2, 10, 3, true);
  CHECK(transcript_to_string(t2) == a);  // replay determinism

  CHECK(t.witness.digits.size() >= 1);  // unfolded mode recorded digits
  for (size_t i = 0; i + 1 < t.witness.round_played.size(); ++i)
    CHECK(t.witness.round_played[i] <= t.witness.round_played[i + 1]);
}

TEST_CASE("ledger S reproducible from a saved transcript") {
  GameParams p = harmonic_params();
  auto target = tgt::parse_target("cantor");
  auto sI = strat::ifs_player_I(target.ifs(), p.delta);
  auto sII = strat::nearest_player_II(pt("0"));
  auto t = play(p, target, *sI, *sII, 14, 1);
  BudgetLedger led;
  for (int n = 0; n < t.position.round(); ++n) {
    led.update(t.position.rounds[static_cast<size_t>(n)].move.points.size(), p.beta(n),
               to_double(p.delta));
    CHECK(led.S == doctest::Approx(t.S_trace[static_cast<size_t>(n)]).epsilon(1e-12));
  }
}
