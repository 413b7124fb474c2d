#include "hdgame/strategy.hpp"

#include <algorithm>

namespace hdg::strat {

namespace {

// FNV-1a over the canonical serialization; strategies built on this are pure
// functions of (position, offer, seed) as the determinism contract requires.
uint64_t fnv(uint64_t h, const std::string& s) {
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

uint64_t hash_position(uint64_t seed, const Position& pos, const MoveI& offered) {
  uint64_t h = 14695981039346656037ULL ^ seed;
  for (const auto& r : pos.rounds) {
    for (const auto& p : r.move.points) h = fnv(h, point_to_string(p) + "|");
    for (int dgt : r.move.digits) h = fnv(h, "#" + std::to_string(dgt));
    h = fnv(h, ">" + point_to_string(r.x) + ";");
  }
  h = fnv(h, "!");
  for (const auto& p : offered.points) h = fnv(h, point_to_string(p) + "|");
  for (int dgt : offered.digits) h = fnv(h, "#" + std::to_string(dgt));
  return h;
}

class RandomII final : public StrategyII {
 public:
  explicit RandomII(uint64_t seed) : seed_(seed) {}

  Point choose(const GameParams&, const Position& pos, const MoveI& offered) override {
    if (offered.points.empty()) throw StrategyAbort("random II offered an empty set");
    uint64_t h = hash_position(seed_, pos, offered);
    return offered.points[h % offered.points.size()];
  }
  std::string spec() const override { return "random:" + std::to_string(seed_); }
  std::unique_ptr<StrategyII> clone() const override { return std::make_unique<RandomII>(seed_); }

 private:
  uint64_t seed_;
};

class NearestII final : public StrategyII {
 public:
  explicit NearestII(Point anchor) : anchor_(std::move(anchor)) {}

  Point choose(const GameParams&, const Position&, const MoveI& offered) override {
    if (offered.points.empty()) throw StrategyAbort("nearest II offered an empty set");
    const Point* best = nullptr;
    Rat best_d2;
    for (const auto& p : offered.points) {
      Rat d2 = dist2(p, anchor_);
      if (!best || d2 < best_d2 || (d2 == best_d2 && lex_less(p, *best))) {
        best = &p;
        best_d2 = d2;
      }
    }
    return *best;
  }
  std::string spec() const override { return "nearest:" + point_to_string(anchor_); }
  std::unique_ptr<StrategyII> clone() const override { return std::make_unique<NearestII>(anchor_); }

 private:
  Point anchor_;
};

class AvoidII final : public StrategyII {
 public:
  explicit AvoidII(tgt::TargetSet target) : target_(std::move(target)) {
    if (target_.kind() == tgt::TargetSet::Kind::IfsAttractor)
      throw std::invalid_argument("avoid player needs a finite or empty target");
  }

  Point choose(const GameParams&, const Position&, const MoveI& offered) override {
    if (offered.points.empty()) throw StrategyAbort("avoid II offered an empty set");
    if (target_.kind() == tgt::TargetSet::Kind::Empty) {
      // all distances are infinite; canonical-least tie-break
      const Point* best = &offered.points.front();
      for (const auto& p : offered.points)
        if (lex_less(p, *best)) best = &p;
      return *best;
    }
    const Point* best = nullptr;
    Rat best_d2;
    for (const auto& p : offered.points) {
      Rat d2 = *target_.min_dist2_finite(p);
      if (!best || d2 > best_d2 || (d2 == best_d2 && lex_less(p, *best))) {
        best = &p;
        best_d2 = d2;
      }
    }
    return *best;
  }
  std::string spec() const override { return "avoid"; }
  std::unique_ptr<StrategyII> clone() const override { return std::make_unique<AvoidII>(target_); }

 private:
  tgt::TargetSet target_;
};

class RandomLegalI final : public StrategyI {
 public:
  explicit RandomLegalI(uint64_t seed) : seed_(seed) {}

  MoveI next_move(const GameParams& p, const Position& pos) override {
    const int n = pos.round();
    const Rat sep = Rat(3) * p.rho(n);
    geo::Ball region = [&] {
      auto c = eng::move_constraint(p, pos);
      if (c) return *c;
      return geo::Ball{zero_point(p.d), p.rho0};  // round-0 default region
    }();

    uint64_t h = hash_position(seed_, pos, MoveI{});
    const int want = 1 + static_cast<int>(h % 4);
    MoveI mv;
    const Int grid = 64;
    for (int t = 0; t < 6 * want && static_cast<int>(mv.points.size()) < want; ++t) {
      h = fnv(h, "@" + std::to_string(t));
      Point cand = region.center;
      uint64_t hh = h;
      for (int i = 0; i < p.d; ++i) {
        hh = fnv(hh, "." + std::to_string(i));
        // offset in (-radius, radius) on a rational grid
        Int num = Int(static_cast<long>(hh % (2 * 64 - 1))) - (grid - 1);
        cand.c[i] += region.radius * Rat(num, grid);
      }
      if (!region.contains_strict(cand)) continue;
      bool ok = true;
      for (const auto& q : mv.points)
        if (!geo::dist_ge(cand, q, sep)) { ok = false; break; }
      if (ok) mv.points.push_back(cand);
    }
    if (mv.points.empty()) mv.points.push_back(region.center);  // always legal
    std::sort(mv.points.begin(), mv.points.end(), lex_less);
    return mv;
  }
  std::string spec() const override { return "random:" + std::to_string(seed_); }
  std::unique_ptr<StrategyI> clone() const override { return std::make_unique<RandomLegalI>(seed_); }

 private:
  uint64_t seed_;
};

class IfsPlayerI final : public StrategyI {
 public:
  IfsPlayerI(tgt::IFSSystem ifs, Rat delta, IfsPlayerOptions opts)
      : ifs_(std::move(ifs)), delta_(std::move(delta)), opts_(opts) {
    if (to_double(delta_) >= tgt::similarity_dimension(ifs_))
      throw std::invalid_argument("ifs player needs delta < similarity dimension");
  }

  MoveI next_move(const GameParams& p, const Position& pos) override {
    const int n = pos.round();
    const int level = ifs_level_for_scale(ifs_, p.rho(n));
    auto constraint = eng::move_constraint(p, pos);
    auto pieces = tgt::pieces_in_ball(ifs_, level, constraint);

    std::vector<Point> centers;
    centers.reserve(pieces.size());
    for (auto& pc : pieces) centers.push_back(std::move(pc.ball.center));
    std::sort(centers.begin(), centers.end(), lex_less);

    MoveI mv;
    const Rat sep = Rat(3) * p.rho(n);
    for (auto& c : centers) {
      bool ok = true;
      for (const auto& kept : mv.points)
        if (!geo::dist_ge(c, kept, sep)) { ok = false; break; }
      if (ok) mv.points.push_back(std::move(c));
    }
    if (mv.points.empty())
      throw StrategyAbort("ifs player has no candidate piece inside the constraint ball");

    if (opts_.unfolded && n >= 1) {
      auto chain = [&](int round_idx) {
        geo::Ball ball{pos.rounds[static_cast<size_t>(round_idx)].x,
                       Rat(2) * p.rho(round_idx)};
        return ifs_.ball_chain(ball, 4 * (level + 2));
      };
      std::vector<int> now = chain(n - 1);
      size_t before = n >= 2 ? chain(n - 2).size() : 0;
      // nested localization balls make the chain monotone; emit the new digits
      for (size_t i = before; i < now.size(); ++i) mv.digits.push_back(now[i]);
    }
    return mv;
  }

  std::string spec() const override {
    return std::string("ifs") + (opts_.unfolded ? "[unfolded]" : "");
  }
  std::unique_ptr<StrategyI> clone() const override {
    return std::make_unique<IfsPlayerI>(ifs_, delta_, opts_);
  }

 private:
  tgt::IFSSystem ifs_;
  Rat delta_;
  IfsPlayerOptions opts_;
};

}  // namespace

std::unique_ptr<StrategyII> random_player_II(uint64_t seed) {
  return std::make_unique<RandomII>(seed);
}

std::unique_ptr<StrategyII> nearest_player_II(Point anchor) {
  return std::make_unique<NearestII>(std::move(anchor));
}

std::unique_ptr<StrategyII> avoid_player_II(tgt::TargetSet target) {
  return std::make_unique<AvoidII>(std::move(target));
}

std::unique_ptr<StrategyI> random_player_I(uint64_t seed) {
  return std::make_unique<RandomLegalI>(seed);
}

std::unique_ptr<StrategyI> ifs_player_I(tgt::IFSSystem ifs, const Rat& delta,
                                        IfsPlayerOptions opts) {
  return std::make_unique<IfsPlayerI>(std::move(ifs), delta, opts);
}

int ifs_level_for_scale(const tgt::IFSSystem& ifs, const Rat& scale) {
  int level = 0;
  Rat diam = ifs.piece_diameter(0);
  while (diam >= scale) {
    diam *= ifs.ratio;
    ++level;
    if (level > 100000) throw std::logic_error("level search runaway");
  }
  return level;
}

std::unique_ptr<StrategyI> parse_strategy_I(const std::string& spec, const tgt::TargetSet& target,
                                            const GameParams& params, bool unfolded) {
  if (spec == "ifs") {
    if (target.kind() != tgt::TargetSet::Kind::IfsAttractor)
      throw std::invalid_argument("strategy 'ifs' needs an IFS target");
    return ifs_player_I(target.ifs(), params.delta, IfsPlayerOptions{unfolded});
  }
  if (spec.rfind("ifs:", 0) == 0) {
    auto rest = spec.substr(4);
    auto colon = rest.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("expected ifs:<target>:<delta>");
    auto t = tgt::parse_target(rest.substr(0, colon));
    return ifs_player_I(t.ifs(), rat_from_string(rest.substr(colon + 1)),
                        IfsPlayerOptions{unfolded});
  }
  if (spec.rfind("random:", 0) == 0) return random_player_I(std::stoull(spec.substr(7)));
  throw std::invalid_argument("unknown player-I strategy: " + spec);
}

std::unique_ptr<StrategyII> parse_strategy_II(const std::string& spec,
                                              const tgt::TargetSet& target) {
  if (spec == "avoid") return avoid_player_II(target);
  if (spec.rfind("random:", 0) == 0) return random_player_II(std::stoull(spec.substr(7)));
  if (spec.rfind("nearest:", 0) == 0) return nearest_player_II(point_from_string(spec.substr(8)));
  throw std::invalid_argument("unknown player-II strategy: " + spec);
}

}  // namespace hdg::strat
