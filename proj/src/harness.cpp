#include "hdgame/harness.hpp"

#include <algorithm>

#include "hdgame/geometry.hpp"

namespace hdg::strat {

namespace {

bool eps_is_positive_integer(const Rat& eps) {
  return sgn(eps) > 0 && eps.get_den() == 1;
}

// j^(1+eps) for integer eps >= 1.
Rat j_weight(long long j, const Rat& eps) {
  return pow_int(Rat(static_cast<long>(j)), 1 + eps.get_num().get_si());
}

struct Builder {
  const GameParams& params;
  StrategyII& tau;
  const HarnessOptions& opts;
  HarnessResult result;

  void expand(HarnessNode& node) {
    const int n = node.depth();
    if (n >= opts.depth) return;
    const Rat rho_n = params.rho(n);
    auto net = geo::build_net(node.ball, rho_n / 2, n);
    result.max_classes = std::max(result.max_classes,
                                  static_cast<long long>(net.classes.size()));

    // per class: members strictly inside the node's ball, in net order
    std::vector<std::vector<Point>> cls_pts(net.classes.size());
    long long ell_u = 0;
    for (size_t i = 0; i < net.classes.size(); ++i) {
      for (int idx : net.classes[i]) {
        const Point& p = net.points[static_cast<size_t>(idx)];
        if (node.ball.contains_strict(p)) cls_pts[i].push_back(p);
      }
      if (!cls_pts[i].empty()) ++ell_u;
    }
    if (ell_u == 0) return;

    Rat harmonic_eps_sum;  // reused below per class
    for (size_t i = 0; i < cls_pts.size(); ++i) {
      if (cls_pts[i].empty()) continue;
      const long long k_u = static_cast<long long>(cls_pts[i].size());
      harmonic_eps_sum = Rat(0);
      for (long long j = 1; j <= k_u; ++j) harmonic_eps_sum += 1 / j_weight(j, params.epsilon);

      // Remove tau's favorite points first: E[k_u] is the whole class trace,
      // E[j-1] drops tau's pick from E[j].
      std::vector<Point> offered = cls_pts[i];
      std::vector<std::pair<long long, std::pair<std::vector<Point>, Point>>> plays;
      for (long long j = k_u; j >= 1; --j) {
        MoveI mv;
        mv.points = offered;
        Point pick = tau.choose(params, node.pos, mv);
        auto it = std::find(offered.begin(), offered.end(), pick);
        if (it == offered.end())
          throw StrategyAbort("tau picked a point outside the offered set");
        plays.emplace_back(j, std::make_pair(offered, pick));
        offered.erase(it);
      }

      for (auto& [j, play] : plays) {
        auto& [pts, pick] = play;
        auto child = std::make_unique<HarnessNode>();
        child->code_i = node.code_i;
        child->code_i.push_back(static_cast<int>(i));
        child->code_j = node.code_j;
        child->code_j.push_back(static_cast<int>(j));
        child->pos = node.pos;
        MoveI mv;
        mv.points = pts;
        child->pos.rounds.push_back(eng::Round{std::move(mv), pick});
        child->ball = geo::Ball{pick, (Rat(1) - params.beta(n)) * rho_n};
        child->k_u = k_u;
        child->ell_u = ell_u;
        child->mass = node.mass / (Rat(static_cast<long>(ell_u)) * j_weight(j, params.epsilon) *
                                   harmonic_eps_sum);
        if (sgn(opts.mass_floor) > 0 && child->mass < opts.mass_floor) {
          ++result.skipped_by_floor;
          continue;
        }
        ++result.node_count;
        expand(*child);
        node.children.push_back(std::move(child));
      }
    }
  }
};

}  // namespace

HarnessResult harness_build(const GameParams& params, StrategyII& tau,
                            const HarnessOptions& opts) {
  if (opts.depth > params.horizon)
    throw std::invalid_argument("harness depth exceeds the horizon");
  if (!eps_is_positive_integer(params.epsilon))
    throw std::invalid_argument("harness masses need a positive integer epsilon");

  Builder b{params, tau, opts, {}};
  b.result.root = std::make_unique<HarnessNode>();
  b.result.root->ball = opts.start_region ? *opts.start_region
                                          : geo::Ball{zero_point(params.d), params.rho0};
  b.result.root->mass = Rat(1);
  b.result.node_count = 1;
  b.expand(*b.result.root);
  return std::move(b.result);
}

TraceResult trace_point(const GameParams& params, StrategyII& tau, const Point& x, int depth,
                        const std::optional<geo::Ball>& start_region) {
  geo::Ball region = start_region ? *start_region : geo::Ball{zero_point(params.d), params.rho0};
  if (!region.contains_strict(x))
    throw std::invalid_argument("traced point must lie strictly inside the starting region");

  TraceResult out;
  for (int n = 0; n < depth; ++n) {
    const Rat rho_n = params.rho(n);
    auto net = geo::build_net(region, rho_n / 2, n);

    // nearest eligible net point (strictly inside the region), canonical ties
    const Point* nearest = nullptr;
    Rat best_d2;
    int cls_of_nearest = -1;
    for (size_t ci = 0; ci < net.classes.size(); ++ci) {
      for (int idx : net.classes[ci]) {
        const Point& p = net.points[static_cast<size_t>(idx)];
        if (!region.contains_strict(p)) continue;
        Rat d2 = dist2(p, x);
        if (!nearest || d2 < best_d2 || (d2 == best_d2 && lex_less(p, *nearest))) {
          nearest = &p;
          best_d2 = d2;
          cls_of_nearest = static_cast<int>(ci);
        }
      }
    }
    if (!nearest) throw std::logic_error("trace found no eligible net point");

    std::vector<Point> offered;
    for (int idx : net.classes[static_cast<size_t>(cls_of_nearest)]) {
      const Point& p = net.points[static_cast<size_t>(idx)];
      if (region.contains_strict(p)) offered.push_back(p);
    }
    const long long k_u = static_cast<long long>(offered.size());

    TraceStep step;
    step.n = n;
    step.net_point = *nearest;
    step.class_index = cls_of_nearest;
    step.k_u = k_u;
    if (n > 0) {
      const Point& prev = out.pos.last_x();
      Rat allowed = (Rat(1) - params.beta(n - 1)) * params.rho(n - 1);
      step.legality_ok = dist2(*nearest, prev) < allowed * allowed;
      out.all_legal = out.all_legal && step.legality_ok;
    }

    // Query tau on the removal chain until it picks the traced net point;
    // j = 1 is a singleton, so the loop terminates there at the latest.
    long long j = k_u;
    while (true) {
      MoveI mv;
      mv.points = offered;
      Point pick = tau.choose(params, out.pos, mv);
      auto it = std::find(offered.begin(), offered.end(), pick);
      if (it == offered.end()) throw StrategyAbort("tau picked outside the offered set");
      if (pick == *nearest) {
        step.j = j;
        out.pos.rounds.push_back(eng::Round{std::move(mv), pick});
        break;
      }
      offered.erase(it);
      --j;
      if (j < 1) throw std::logic_error("trace exhausted removal sets without finding the point");
    }
    out.steps.push_back(std::move(step));
    region = geo::Ball{*nearest, (Rat(1) - params.beta(n)) * rho_n};
  }
  return out;
}

}  // namespace hdg::strat
