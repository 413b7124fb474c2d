#include "hdgame/engine.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"

namespace hdg::eng {

using nlohmann::ordered_json;

std::optional<Ball> move_constraint(const GameParams& p, const Position& pos) {
  if (pos.rounds.empty()) return p.start_ball;
  const int i = pos.round() - 1;
  Rat radius = (Rat(1) - p.beta(i)) * p.rho(i);
  return Ball{pos.last_x(), radius};
}

std::string rule_name(MoveViolation::Rule r) {
  switch (r) {
    case MoveViolation::Rule::EmptyMove: return "empty-move";
    case MoveViolation::Rule::DimensionMismatch: return "dimension-mismatch";
    case MoveViolation::Rule::Separation: return "separation";
    case MoveViolation::Rule::Containment: return "containment";
    case MoveViolation::Rule::StartBall: return "start-ball";
  }
  return "?";
}

std::optional<MoveViolation> validate_move_I(const GameParams& p, const Position& pos,
                                             const MoveI& move) {
  const int n = pos.round();
  if (move.points.empty())
    return MoveViolation{MoveViolation::Rule::EmptyMove, n, "player I offered no points"};
  for (const auto& pt : move.points)
    if (pt.dim() != p.d)
      return MoveViolation{MoveViolation::Rule::DimensionMismatch, n,
                           "point " + point_to_string(pt) + " has wrong dimension"};

  const Rat sep = Rat(3) * p.rho(n);
  for (size_t i = 0; i < move.points.size(); ++i)
    for (size_t j = i + 1; j < move.points.size(); ++j)
      if (!geo::dist_ge(move.points[i], move.points[j], sep))
        return MoveViolation{MoveViolation::Rule::Separation, n,
                             "points " + point_to_string(move.points[i]) + " and " +
                                 point_to_string(move.points[j]) + " are closer than 3*rho_" +
                                 std::to_string(n)};

  auto ball = move_constraint(p, pos);
  if (ball) {
    for (const auto& pt : move.points)
      if (!ball->contains_strict(pt))
        return MoveViolation{n == 0 ? MoveViolation::Rule::StartBall
                                    : MoveViolation::Rule::Containment,
                             n,
                             "point " + point_to_string(pt) + " is not strictly inside B(" +
                                 point_to_string(ball->center) + ", " +
                                 rat_to_string(ball->radius) + ")"};
  }
  return std::nullopt;
}

void BudgetLedger::update(size_t move_size, const Rat& beta, double delta) {
  S += delta * (-rat_log(beta)) - std::log(static_cast<double>(move_size));
  max_S = std::max(max_S, S);
  trace.push_back(S);
}

Rat budget_ratio_power(const GameParams& p, const std::vector<size_t>& move_sizes) {
  const Int num = p.delta.get_num();
  const Int den = p.delta.get_den();
  if (!num.fits_slong_p() || !den.fits_ulong_p())
    throw std::overflow_error("delta exponents too large for exact cross-check");
  Rat inv_sizes(1);
  Rat betas(1);
  for (size_t i = 0; i < move_sizes.size(); ++i) {
    inv_sizes /= Rat(static_cast<long>(move_sizes[i]));
    betas *= p.beta(static_cast<long>(i));
  }
  return pow_int(inv_sizes, den.get_si()) / pow_int(betas, num.get_si());
}

void WitnessLog::append(const std::vector<int>& ds, int round) {
  for (int d : ds) {
    digits.push_back(d);
    round_played.push_back(round);
  }
}

Ball localize_limit(const GameParams& p, const Position& pos) {
  if (pos.rounds.empty()) throw std::invalid_argument("localize_limit needs >= 1 round");
  const int n = pos.round() - 1;
  return Ball{pos.last_x(), Rat(2) * p.rho(n)};
}

std::string verdict_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::OpenConsistentWithI: return "open-consistent-with-I";
    case VerdictKind::ILostCertified: return "I-lost-certified";
    case VerdictKind::IForfeits: return "I-forfeits";
    case VerdictKind::IIForfeits: return "II-forfeits";
    case VerdictKind::AbortI: return "abort-I";
    case VerdictKind::AbortII: return "abort-II";
  }
  return "?";
}

namespace {

VerdictKind verdict_from_name(const std::string& s) {
  for (auto k : {VerdictKind::OpenConsistentWithI, VerdictKind::ILostCertified,
                 VerdictKind::IForfeits, VerdictKind::IIForfeits, VerdictKind::AbortI,
                 VerdictKind::AbortII})
    if (verdict_name(k) == s) return k;
  throw std::invalid_argument("unknown verdict: " + s);
}

}  // namespace

int verdict_level(const GameParams& params, const tgt::TargetSet& target, const Rat& scale) {
  if (target.kind() != tgt::TargetSet::Kind::IfsAttractor) return 0;
  const auto& f = target.ifs();
  int level = 0;
  Rat diam = f.piece_diameter(0);
  while (diam > scale && level < 4 * params.horizon + 64) {
    diam *= f.ratio;
    ++level;
  }
  return level;
}

std::pair<VerdictKind, std::optional<int>> finite_horizon_verdict(const GameParams& params,
                                                                  const Position& pos,
                                                                  const tgt::TargetSet& target) {
  if (pos.rounds.empty()) throw std::invalid_argument("verdict needs >= 1 completed round");
  std::optional<int> first;
  for (int n = 1; n <= pos.round(); ++n) {
    const Point& x = pos.rounds[static_cast<size_t>(n - 1)].x;
    const Rat bound = Rat(2) * params.rho(n - 1);
    auto lb = target.dist_lower(x, verdict_level(params, target, params.rho(n - 1)));
    bool certified = !lb.has_value() || *lb > bound;
    if (certified) { first = n; break; }
  }
  return {first ? VerdictKind::ILostCertified : VerdictKind::OpenConsistentWithI, first};
}

RunTranscript play(const GameParams& params, const tgt::TargetSet& target,
                   strat::StrategyI& player_I, strat::StrategyII& player_II, int rounds,
                   uint64_t seed, bool unfolded) {
  if (rounds > params.horizon)
    throw std::invalid_argument("rounds exceed the configured horizon");
  RunTranscript t;
  t.params = params;
  t.target_spec = target.spec();
  t.strategy_I_spec = player_I.spec();
  t.strategy_II_spec = player_II.spec();
  t.seed = seed;
  t.unfolded = unfolded;

  BudgetLedger ledger;
  int last_digit_round = -1;

  for (int n = 0; n < rounds; ++n) {
    MoveI move;
    try {
      move = player_I.next_move(params, t.position);
    } catch (const std::exception& e) {
      t.verdict.kind = VerdictKind::AbortI;
      t.verdict.abort_message = e.what();
      break;
    }
    if (auto v = validate_move_I(params, t.position, move)) {
      t.verdict.kind = VerdictKind::IForfeits;
      t.verdict.violation = v;
      t.pending = move;
      break;
    }
    if (unfolded && !move.digits.empty()) {
      t.witness.append(move.digits, n);
      last_digit_round = n;
    }

    Point x;
    try {
      x = player_II.choose(params, t.position, move);
    } catch (const std::exception& e) {
      t.verdict.kind = VerdictKind::AbortII;
      t.verdict.abort_message = e.what();
      t.pending = move;
      break;
    }
    bool member = false;
    for (const auto& p : move.points)
      if (p == x) { member = true; break; }
    if (!member) {
      t.verdict.kind = VerdictKind::IIForfeits;
      t.pending = move;
      break;
    }

    ledger.update(move.points.size(), params.beta(n), to_double(params.delta));
    t.position.rounds.push_back(Round{std::move(move), std::move(x)});
  }

  t.S_trace = ledger.trace;
  t.verdict.max_S = ledger.max_S;
  t.verdict.budget_health = ledger.max_S <= std::log(params.budget_c);
  if (unfolded) {
    int gap = 0, longest = 0, prev = -1;
    for (int n = 0; n < t.position.round(); ++n) {
      bool has = !t.position.rounds[static_cast<size_t>(n)].move.digits.empty();
      if (has) prev = n;
      gap = n - prev;  // prev = -1 counts from the start
      if (prev < 0) gap = n + 1;
      longest = std::max(longest, gap);
    }
    t.verdict.starvation.longest_gap = longest;
    t.verdict.starvation.flagged = longest >= params.starvation_window;
    (void)last_digit_round;
  }

  const bool forfeited = t.verdict.kind == VerdictKind::IForfeits ||
                         t.verdict.kind == VerdictKind::IIForfeits ||
                         t.verdict.kind == VerdictKind::AbortI ||
                         t.verdict.kind == VerdictKind::AbortII;
  if (!forfeited && !t.position.rounds.empty()) {
    auto [kind, first] = finite_horizon_verdict(params, t.position, target);
    t.verdict.kind = kind;
    t.verdict.first_certified_round = first;
  }
  return t;
}

// --- serialization ---------------------------------------------------------

namespace {

ordered_json point_json(const Point& p) {
  ordered_json a = ordered_json::array();
  for (const auto& q : p.c) a.push_back(rat_to_string(q));
  return a;
}

Point point_from_json(const ordered_json& a) {
  Point p;
  for (const auto& s : a) p.c.push_back(rat_from_string(s.get<std::string>()));
  return p;
}

ordered_json params_json(const GameParams& p) {
  ordered_json j;
  j["d"] = p.d;
  j["rho0"] = rat_to_string(p.rho0);
  j["delta"] = rat_to_string(p.delta);
  j["s"] = p.s ? ordered_json(rat_to_string(*p.s)) : ordered_json(nullptr);
  j["schedule"] = p.schedule.spec();
  j["budget_c"] = p.budget_c;
  j["eta"] = p.eta;
  j["epsilon"] = rat_to_string(p.epsilon);
  j["horizon"] = p.horizon;
  if (p.start_ball) {
    j["start_ball"] = ordered_json{{"center", point_json(p.start_ball->center)},
                                   {"radius", rat_to_string(p.start_ball->radius)}};
  } else {
    j["start_ball"] = nullptr;
  }
  j["digit_cap"] = p.digit_cap;
  j["starvation_window"] = p.starvation_window;
  return j;
}

GameParams params_from_json(const ordered_json& j) {
  GameParams p;
  p.d = j.at("d").get<int>();
  p.rho0 = rat_from_string(j.at("rho0").get<std::string>());
  p.delta = rat_from_string(j.at("delta").get<std::string>());
  if (!j.at("s").is_null()) p.s = rat_from_string(j.at("s").get<std::string>());
  p.schedule = Schedule::parse(j.at("schedule").get<std::string>());
  p.budget_c = j.at("budget_c").get<double>();
  p.eta = j.at("eta").get<double>();
  p.epsilon = rat_from_string(j.at("epsilon").get<std::string>());
  p.horizon = j.at("horizon").get<int>();
  if (!j.at("start_ball").is_null()) {
    p.start_ball = Ball{point_from_json(j.at("start_ball").at("center")),
                        rat_from_string(j.at("start_ball").at("radius").get<std::string>())};
  }
  p.digit_cap = j.at("digit_cap").get<int>();
  p.starvation_window = j.at("starvation_window").get<int>();
  return p;
}

// The "digit" field is null for no digit, an integer for one, and an array
// when a strategy pins several digits in the same round.
ordered_json digits_json(const std::vector<int>& ds) {
  if (ds.empty()) return nullptr;
  if (ds.size() == 1) return ds.front();
  return ordered_json(ds);
}

std::vector<int> digits_from_json(const ordered_json& j) {
  if (j.is_null()) return {};
  if (j.is_number_integer()) return {j.get<int>()};
  return j.get<std::vector<int>>();
}

}  // namespace

void save_transcript(const RunTranscript& t, std::ostream& os) {
  ordered_json header;
  header["type"] = "header";
  header["mode"] = t.unfolded ? "unfolded" : "folded";
  header["params"] = params_json(t.params);
  header["target"] = t.target_spec;
  header["I"] = t.strategy_I_spec;
  header["II"] = t.strategy_II_spec;
  header["seed"] = t.seed;
  os << header.dump() << "\n";

  for (int n = 0; n < t.position.round(); ++n) {
    const Round& r = t.position.rounds[static_cast<size_t>(n)];
    ordered_json row;
    row["type"] = "round";
    row["round"] = n;
    ordered_json F = ordered_json::array();
    for (const auto& p : r.move.points) F.push_back(point_json(p));
    row["F"] = F;
    row["x"] = point_json(r.x);
    row["digit"] = digits_json(r.move.digits);
    row["S"] = t.S_trace[static_cast<size_t>(n)];
    os << row.dump() << "\n";
  }

  ordered_json footer;
  footer["type"] = "footer";
  footer["verdict"] = verdict_name(t.verdict.kind);
  footer["rounds"] = t.position.round();
  footer["max_S"] = t.verdict.max_S;
  footer["budget_health"] = t.verdict.budget_health;
  footer["first_certified_round"] = t.verdict.first_certified_round
                                        ? ordered_json(*t.verdict.first_certified_round)
                                        : ordered_json(nullptr);
  if (t.verdict.violation) {
    footer["violation"] = ordered_json{{"rule", rule_name(t.verdict.violation->rule)},
                                       {"round", t.verdict.violation->round},
                                       {"detail", t.verdict.violation->detail}};
  } else {
    footer["violation"] = nullptr;
  }
  footer["abort_message"] = t.verdict.abort_message;
  if (t.pending) {
    ordered_json F = ordered_json::array();
    for (const auto& p : t.pending->points) F.push_back(point_json(p));
    footer["pending_move"] = ordered_json{{"F", F}, {"digit", digits_json(t.pending->digits)}};
  } else {
    footer["pending_move"] = nullptr;
  }
  if (t.unfolded) {
    footer["starvation"] = ordered_json{{"longest_gap", t.verdict.starvation.longest_gap},
                                        {"flagged", t.verdict.starvation.flagged}};
  } else {
    footer["starvation"] = nullptr;
  }
  os << footer.dump() << "\n";
}

std::string transcript_to_string(const RunTranscript& t) {
  std::ostringstream os;
  save_transcript(t, os);
  return os.str();
}

RunTranscript load_transcript(std::istream& is) {
  RunTranscript t;
  std::string line;
  bool have_header = false, have_footer = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    ordered_json j = ordered_json::parse(line);
    const std::string type = j.at("type").get<std::string>();
    if (type == "header") {
      t.params = params_from_json(j.at("params"));
      t.unfolded = j.at("mode").get<std::string>() == "unfolded";
      t.target_spec = j.at("target").get<std::string>();
      t.strategy_I_spec = j.at("I").get<std::string>();
      t.strategy_II_spec = j.at("II").get<std::string>();
      t.seed = j.at("seed").get<uint64_t>();
      have_header = true;
    } else if (type == "round") {
      Round r;
      for (const auto& pj : j.at("F")) r.move.points.push_back(point_from_json(pj));
      r.x = point_from_json(j.at("x"));
      r.move.digits = digits_from_json(j.at("digit"));
      if (t.unfolded && !r.move.digits.empty())
        t.witness.append(r.move.digits, j.at("round").get<int>());
      t.S_trace.push_back(j.at("S").get<double>());
      t.position.rounds.push_back(std::move(r));
    } else if (type == "footer") {
      t.verdict.kind = verdict_from_name(j.at("verdict").get<std::string>());
      t.verdict.max_S = j.at("max_S").get<double>();
      t.verdict.budget_health = j.at("budget_health").get<bool>();
      if (!j.at("first_certified_round").is_null())
        t.verdict.first_certified_round = j.at("first_certified_round").get<int>();
      if (!j.at("violation").is_null()) {
        MoveViolation v;
        const auto& vj = j.at("violation");
        const std::string rn = vj.at("rule").get<std::string>();
        for (auto r : {MoveViolation::Rule::EmptyMove, MoveViolation::Rule::DimensionMismatch,
                       MoveViolation::Rule::Separation, MoveViolation::Rule::Containment,
                       MoveViolation::Rule::StartBall})
          if (rule_name(r) == rn) v.rule = r;
        v.round = vj.at("round").get<int>();
        v.detail = vj.at("detail").get<std::string>();
        t.verdict.violation = v;
      }
      t.verdict.abort_message = j.at("abort_message").get<std::string>();
      if (!j.at("pending_move").is_null()) {
        MoveI mv;
        for (const auto& pj : j.at("pending_move").at("F")) mv.points.push_back(point_from_json(pj));
        mv.digits = digits_from_json(j.at("pending_move").at("digit"));
        t.pending = std::move(mv);
      }
      if (!j.at("starvation").is_null()) {
        t.verdict.starvation.longest_gap = j.at("starvation").at("longest_gap").get<int>();
        t.verdict.starvation.flagged = j.at("starvation").at("flagged").get<bool>();
      }
      have_footer = true;
    }
  }
  if (!have_header || !have_footer) throw std::invalid_argument("truncated transcript");
  return t;
}

RunTranscript transcript_from_string(const std::string& s) {
  std::istringstream is(s);
  return load_transcript(is);
}

}  // namespace hdg::eng
