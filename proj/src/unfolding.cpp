#include "hdgame/unfolding.hpp"

#include <algorithm>
#include <limits>
#include <map>

namespace hdg::unf {

int linord_select(const std::vector<std::vector<int>>& ranks) {
  if (ranks.empty() || ranks.front().empty())
    throw std::invalid_argument("linord_select needs >= 1 order over >= 1 element");
  const int m = static_cast<int>(ranks.size());
  const int N = static_cast<int>(ranks.front().size());

  // candidates in order-1-descending rank; ranks are bijections onto 1..N,
  // so |{b : b <=_i a}| is exactly ranks[i][a]
  std::vector<int> by_first(static_cast<size_t>(N));
  for (int e = 0; e < N; ++e) by_first[static_cast<size_t>(N - ranks[0][static_cast<size_t>(e)])] = e;

  for (int cand : by_first) {
    bool ok = true;
    for (const auto& r : ranks)
      if (r[static_cast<size_t>(cand)] * m < N) { ok = false; break; }
    if (ok) return cand;
  }
  throw std::logic_error("linord_select found no witness (violates the selection lemma)");
}

bool entry_consistent(const GameParams& p, StrategyII& tau, const Position& real,
                      const SimulationEntry& e) {
  if (e.q.rounds.size() != real.rounds.size()) return false;
  Position prefix;
  for (size_t i = 0; i < e.q.rounds.size(); ++i) {
    const auto& qr = e.q.rounds[i];
    const auto& rr = real.rounds[i];
    if (!(qr.x == rr.x)) return false;
    for (const auto& pt : qr.move.points) {
      if (std::find(rr.move.points.begin(), rr.move.points.end(), pt) == rr.move.points.end())
        return false;
    }
    Point pick = tau.choose(p, prefix, qr.move);
    if (!(pick == qr.x)) return false;
    prefix.rounds.push_back(qr);
  }
  return true;
}

std::vector<std::vector<int>> rank_profile(const GameParams& p, StrategyII& tau,
                                           const SimulationState& sim,
                                           const std::vector<Point>& F,
                                           const std::vector<std::vector<int>>& v) {
  if (v.size() != sim.entries.size())
    throw std::invalid_argument("rank_profile: one target witness per entry");
  const int N = static_cast<int>(F.size());
  std::vector<std::vector<int>> ranks(sim.entries.size(), std::vector<int>(F.size(), 0));

  for (size_t i = 0; i < sim.entries.size(); ++i) {
    const auto& entry = sim.entries[i];
    // digits offered with this move: v_i minus u_i (empty or one digit)
    std::vector<int> extra(v[i].begin() + static_cast<long>(entry.witness.size()), v[i].end());
    std::vector<int> alive(F.size());
    for (int e = 0; e < N; ++e) alive[static_cast<size_t>(e)] = e;

    for (int rank = N; rank >= 1; --rank) {
      MoveI mv;
      for (int e : alive) mv.points.push_back(F[static_cast<size_t>(e)]);
      mv.digits = extra;
      Point pick = tau.choose(p, entry.q, mv);
      auto it = std::find_if(alive.begin(), alive.end(),
                             [&](int e) { return F[static_cast<size_t>(e)] == pick; });
      if (it == alive.end())
        throw strat::StrategyAbort("tau picked outside the offered set during ranking");
      ranks[i][static_cast<size_t>(*it)] = rank;
      alive.erase(it);
    }
  }
  return ranks;
}

ExtendResult extwit_extend(const GameParams& p, StrategyII& tau, SimulationState& sim,
                           const MoveI& move, const std::vector<std::vector<int>>& v) {
  for (size_t i = 0; i < sim.entries.size(); ++i) {
    const auto& u = sim.entries[i].witness;
    const auto& vi = v[i];
    bool same = vi == u;
    bool ext = vi.size() == u.size() + 1 && std::equal(u.begin(), u.end(), vi.begin());
    if (!same && !ext)
      throw std::invalid_argument("target witness must equal or one-digit-extend the entry's");
  }

  auto ranks = rank_profile(p, tau, sim, move.points, v);
  const int xi = linord_select(ranks);
  const Point& x = move.points[static_cast<size_t>(xi)];

  ExtendResult out;
  out.x = x;
  out.move_size = move.points.size();
  for (size_t i = 0; i < sim.entries.size(); ++i) {
    auto& entry = sim.entries[i];
    MoveI sub;
    for (size_t e = 0; e < move.points.size(); ++e)
      if (ranks[i][e] <= ranks[i][static_cast<size_t>(xi)]) sub.points.push_back(move.points[e]);
    std::vector<int> extra(v[i].begin() + static_cast<long>(entry.witness.size()), v[i].end());
    sub.digits = extra;
    out.entry_sizes.push_back(sub.points.size());
    entry.q.rounds.push_back(eng::Round{std::move(sub), x});
    entry.witness = v[i];
  }
  sim.real.rounds.push_back(eng::Round{move, x});
  return out;
}

std::vector<std::vector<int>> witness_enumeration(int cap, int count) {
  if (cap < 1) throw std::invalid_argument("digit cap must be >= 1");
  std::vector<std::vector<int>> out;
  out.push_back({});
  std::vector<std::vector<int>> frontier = {{}};
  while (static_cast<int>(out.size()) < count) {
    std::vector<std::vector<int>> next;
    for (const auto& w : frontier)
      for (int d = 0; d < cap; ++d) {
        auto e = w;
        e.push_back(d);
        next.push_back(e);
        out.push_back(std::move(e));
        if (static_cast<int>(out.size()) >= count) break;
      }
    frontier = std::move(next);
    if (frontier.empty()) break;
  }
  out.resize(static_cast<size_t>(count));
  return out;
}

bool beta_power_below(const Rat& beta, const Rat& exponent, long m) {
  if (sgn(exponent) <= 0) throw std::invalid_argument("exponent must be positive");
  // beta^(p/q) < 1/m  <=>  beta^p * m^q < 1   (beta > 0)
  const long pp = exponent.get_num().get_si();
  const long qq = exponent.get_den().get_si();
  return pow_int(beta, pp) * pow_int(Rat(m), qq) < 1;
}

TransferredII::TransferredII(std::unique_ptr<StrategyII> tau, Rat delta, Rat s, int digit_cap)
    : tau_(std::move(tau)), delta_(std::move(delta)), s_(std::move(s)), digit_cap_(digit_cap) {
  if (s_ <= delta_) throw std::invalid_argument("transfer needs s > delta");
  // single no-witness entry; the first slot of the enumeration is the empty witness
  wseq_ = witness_enumeration(digit_cap_, 1);
  sim_.entries.push_back(SimulationEntry{{}, 0, {}});
}

Point TransferredII::choose(const GameParams& p, const Position& pos, const MoveI& offered) {
  const int i = pos.round();
  if (sim_.real.rounds.size() != pos.rounds.size())
    throw std::logic_error("transferred strategy is single-run; position diverged");

  const Rat gap = s_ - delta_;
  // admissions for this round: w_k joins as soon as beta_i^(s-delta) < 1/(k+1)
  while (beta_power_below(p.beta(i), gap, next_witness_ + 1)) {
    if (static_cast<int>(wseq_.size()) <= next_witness_)
      wseq_ = witness_enumeration(digit_cap_, next_witness_ + 1);
    const auto& w = wseq_[static_cast<size_t>(next_witness_)];
    std::vector<int> parent(w.begin(), w.end() - 1);
    auto parent_it =
        std::find_if(sim_.entries.begin(), sim_.entries.end(),
                     [&](const SimulationEntry& e) { return e.witness == parent; });
    if (parent_it == sim_.entries.end())
      throw std::logic_error("witness enumeration admitted a child before its parent");
    SimulationEntry dup = *parent_it;  // the ancestor appears twice this round
    dup.witness_index = next_witness_;
    sim_.entries.push_back(std::move(dup));
    ++next_witness_;
  }

  // target witnesses: w_k for the entry slots, which extends duplicated
  // ancestors by their one fresh digit and fixes everyone else
  std::vector<std::vector<int>> v;
  v.reserve(sim_.entries.size());
  for (const auto& e : sim_.entries) v.push_back(wseq_[static_cast<size_t>(e.witness_index)]);

  auto res = extwit_extend(p, *tau_, sim_, offered, v);

  TransferAuditRow row;
  row.round = i;
  for (size_t k = 0; k < sim_.entries.size(); ++k) {
    TransferAuditRow::Entry e;
    e.witness = sim_.entries[k].witness;
    e.E_size = res.entry_sizes[k];
    e.F_size = res.move_size;
    e.consistent = entry_consistent(p, *tau_, sim_.real, sim_.entries[k]);
    row.entries.push_back(std::move(e));
  }
  audit_.push_back(std::move(row));
  return res.x;
}

std::string TransferredII::spec() const {
  return "transfer(" + tau_->spec() + ",delta=" + rat_to_string(delta_) +
         ",s=" + rat_to_string(s_) + ")";
}

std::unique_ptr<StrategyII> TransferredII::clone() const {
  return std::make_unique<TransferredII>(tau_->clone(), delta_, s_, digit_cap_);
}

// --- uniformization --------------------------------------------------------

namespace {

struct UnifBuilder {
  const GameParams& params;
  strat::StrategyI& sigma;
  int depth;
  UnifResult result;

  void expand(UnifNode& node, Position& pos) {
    MoveI move = sigma.next_move(params, pos);
    if (auto viol = eng::validate_move_I(params, pos, move))
      throw strat::StrategyAbort("sigma played an illegal move at depth " +
                                 std::to_string(node.depth) + ": " + viol->detail);
    for (int d : move.digits) node.witness_prefix.push_back(d);

    const int k = node.depth;
    if (static_cast<size_t>(k) >= result.modulus.size())
      result.modulus.resize(static_cast<size_t>(k) + 1,
                            std::numeric_limits<int>::max());
    result.modulus[static_cast<size_t>(k)] =
        std::min(result.modulus[static_cast<size_t>(k)],
                 static_cast<int>(node.witness_prefix.size()));

    if (k >= depth) return;
    for (const auto& x : move.points) {
      auto child = std::make_unique<UnifNode>();
      child->depth = k + 1;
      child->witness_prefix = node.witness_prefix;  // extended by its own move
      child->x = x;
      ++result.node_count;
      pos.rounds.push_back(eng::Round{move, x});
      expand(*child, pos);
      pos.rounds.pop_back();
      if (!std::equal(node.witness_prefix.begin(), node.witness_prefix.end(),
                      child->witness_prefix.begin()))
        result.prefixes_monotone = false;
      node.children.push_back(std::move(child));
    }
  }
};

}  // namespace

UnifResult uniformization_extract(const GameParams& p, strat::StrategyI& sigma, int depth) {
  UnifResult empty;
  if (depth <= 0) {
    empty.modulus = {0};
    return empty;
  }
  UnifBuilder b{p, sigma, depth, {}};
  b.result.root = std::make_unique<UnifNode>();
  b.result.node_count = 1;
  Position pos;
  b.expand(*b.result.root, pos);
  return std::move(b.result);
}

}  // namespace hdg::unf
