#include "hdgame/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace hdg::dim {

DyadicConstants dyadic_constants(int d) {
  if (d < 1) throw std::invalid_argument("d >= 1");
  Int n = ceil_int(Rat(1) + Rat(12) * sqrt_ub_int(d));
  DyadicConstants c;
  c.N_d = n.get_si();
  c.c_d = ipow(n, static_cast<unsigned long>(2 * d));
  return c;
}

TreeMeasure::TreeMeasure(GameParams params, std::unique_ptr<TreeNode> root, int depth)
    : params_(std::move(params)), root_(std::move(root)), depth_(depth) {
  // collect leaves with exact masses and localization balls
  std::vector<int> path;
  Point last_x;
  std::function<void(const TreeNode&, Rat)> walk = [&](const TreeNode& node, Rat mass) {
    ++node_count_;
    if (static_cast<int>(path.size()) == depth_) {
      leaves_.push_back(Leaf{path, mass,
                             Ball{last_x, Rat(2) * params_.rho(depth_ - 1)}});
      return;
    }
    const Rat child_mass = mass / Rat(static_cast<long>(node.move.points.size()));
    for (size_t i = 0; i < node.children.size(); ++i) {
      path.push_back(static_cast<int>(i));
      Point saved = last_x;
      last_x = node.move.points[i];
      walk(*node.children[i], child_mass);
      last_x = saved;
      path.pop_back();
    }
  };
  walk(*root_, Rat(1));
}

Rat TreeMeasure::cylinder_mass(const std::vector<int>& path) const {
  Rat mass(1);
  const TreeNode* node = root_.get();
  for (int idx : path) {
    mass /= Rat(static_cast<long>(node->move.points.size()));
    node = node->children.at(static_cast<size_t>(idx)).get();
  }
  return mass;
}

Rat TreeMeasure::depth_mass_sum(int depth) const {
  Rat sum(0);
  std::function<void(const TreeNode&, Rat, int)> walk = [&](const TreeNode& node, Rat mass, int k) {
    if (k == depth) {
      sum += mass;
      return;
    }
    const Rat child_mass = mass / Rat(static_cast<long>(node.move.points.size()));
    for (const auto& ch : node.children) walk(*ch, child_mass, k + 1);
  };
  walk(*root_, Rat(1), 0);
  return sum;
}

TreeMeasure strategy_tree(const GameParams& params, strat::StrategyI& sigma, int depth) {
  if (depth < 1) throw std::invalid_argument("strategy_tree depth >= 1");
  eng::Position pos;
  std::function<std::unique_ptr<TreeNode>()> build = [&]() -> std::unique_ptr<TreeNode> {
    auto node = std::make_unique<TreeNode>();
    node->move = sigma.next_move(params, pos);
    if (auto v = eng::validate_move_I(params, pos, node->move))
      throw strat::StrategyAbort("sigma illegal at depth " + std::to_string(pos.round()) + ": " +
                                 v->detail);
    if (pos.round() < depth - 1) {
      for (const auto& x : node->move.points) {
        pos.rounds.push_back(eng::Round{node->move, x});
        node->children.push_back(build());
        pos.rounds.pop_back();
      }
    } else {
      // leaf-level nodes still need children markers for localization balls
      for (const auto& x : node->move.points) {
        pos.rounds.push_back(eng::Round{node->move, x});
        node->children.push_back(std::make_unique<TreeNode>());
        pos.rounds.pop_back();
      }
    }
    return node;
  };
  auto root = build();
  return TreeMeasure(params, std::move(root), depth);
}

std::pair<Rat, Rat> ball_mass(const TreeMeasure& tm, const Ball& b) {
  if (sgn(b.radius) <= 0) throw std::invalid_argument("ball_mass needs r > 0");
  Rat lower(0), upper(0);
  for (const auto& leaf : tm.leaves()) {
    const Rat d2 = dist2(leaf.localization.center, b.center);
    // contained: |c - x| + r_leaf <= r  (compare squares only when RHS >= 0)
    const Rat slack = b.radius - leaf.localization.radius;
    if (sgn(slack) >= 0 && d2 <= slack * slack) lower += leaf.mass;
    // meets: |c - x| < r + r_leaf
    const Rat reach = b.radius + leaf.localization.radius;
    if (d2 < reach * reach) upper += leaf.mass;
  }
  return {lower, upper};
}

double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys, double* residual) {
  if (xs.size() != ys.size() || xs.empty()) throw std::invalid_argument("ls_slope: bad inputs");
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  const double slope = denom == 0 ? 0.0 : (n * sxy - sx * sy) / denom;
  if (residual) {
    const double intercept = (sy - slope * sx) / n;
    double rss = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
      const double e = ys[i] - (slope * xs[i] + intercept);
      rss += e * e;
    }
    *residual = std::sqrt(rss / n);
  }
  return slope;
}

DimensionEstimate local_exponent(const TreeMeasure& tm, const std::vector<int>& branch,
                                 int from_depth, int to_depth) {
  if (from_depth < 1 || to_depth > tm.depth() || from_depth > to_depth)
    throw std::invalid_argument("local_exponent: bad depth range");
  if (static_cast<int>(branch.size()) < to_depth)
    throw std::invalid_argument("local_exponent: branch shorter than range");

  DimensionEstimate est;
  est.kind = "local-exponent";
  est.bound = "two-sided";
  std::vector<double> lx, ly, ratios;
  for (int n = from_depth; n <= to_depth; ++n) {
    std::vector<int> prefix(branch.begin(), branch.begin() + n);
    const double lm = rat_log(tm.cylinder_mass(prefix));
    const double lr = rat_log(tm.params().rho(n));
    lx.push_back(lr);
    ly.push_back(lm);
    ratios.push_back(lm / lr);
    est.scales.push_back(lr);
    est.samples.push_back(lm);
  }
  if (lx.size() == 1) {
    est.exponent = ratios.front();
  } else {
    est.exponent = ls_slope(lx, ly, &est.residual);
  }
  est.min_ratio = *std::min_element(ratios.begin(), ratios.end());
  auto mid = ratios;
  std::nth_element(mid.begin(), mid.begin() + static_cast<long>(mid.size() / 2), mid.end());
  est.median_ratio = mid[mid.size() / 2];
  return est;
}

// --- measure oracles ---------------------------------------------------------

MeasureOracle MeasureOracle::lebesgue_interval(const Rat& a, const Rat& b) {
  if (a >= b) throw std::invalid_argument("empty interval");
  MeasureOracle m;
  m.desc_ = "lebesgue[" + rat_to_string(a) + "," + rat_to_string(b) + "]";
  Rat len = b - a;
  m.fn_ = [a, b, len](const Ball& ball) -> std::pair<Rat, Rat> {
    if (ball.center.dim() != 1) throw std::invalid_argument("lebesgue oracle is 1-d");
    Rat lo = ball.center.c[0] - ball.radius;
    Rat hi = ball.center.c[0] + ball.radius;
    Rat v = std::min(hi, b) - std::max(lo, a);
    if (sgn(v) < 0) v = Rat(0);
    v /= len;  // normalized to a probability measure
    return {v, v};
  };
  return m;
}

MeasureOracle MeasureOracle::point_mass(Point at) {
  MeasureOracle m;
  m.desc_ = "pointmass(" + point_to_string(at) + ")";
  m.fn_ = [at = std::move(at)](const Ball& ball) -> std::pair<Rat, Rat> {
    Rat v = ball.contains_strict(at) ? Rat(1) : Rat(0);
    return {v, v};
  };
  return m;
}

MeasureOracle MeasureOracle::tree(const TreeMeasure* tm) {
  if (!tm) throw std::invalid_argument("null tree measure");
  MeasureOracle m;
  m.desc_ = "tree-measure(depth=" + std::to_string(tm->depth()) + ")";
  m.fn_ = [tm](const Ball& ball) { return ball_mass(*tm, ball); };
  return m;
}

std::pair<Rat, Rat> MeasureOracle::ball_bounds(const Ball& b) const { return fn_(b); }

CertificateReport mass_lower_certificate(const MeasureOracle& mu, const std::vector<Point>& xs,
                                         const std::vector<Rat>& radii, double s, double m) {
  CertificateReport rep;
  rep.kind = "mass-lower";
  rep.s = s;
  rep.m = m;
  double sup = 0.0;
  for (const auto& x : xs) {
    for (const auto& r : radii) {
      const double ub = to_double(mu.ball_bounds(Ball{x, r}).second);
      const double ratio = ub / std::pow(to_double(r), s);
      sup = std::max(sup, ratio);
      ++rep.sample_count;
      if (ratio >= m) {
        rep.accepted = false;
        std::ostringstream w;
        w << "mu(B(" << point_to_string(x) << ", " << rat_to_string(r) << "))/r^s = " << ratio
          << " >= m = " << m;
        rep.witness = w.str();
        rep.achieved = sup;
        rep.statement = "refused: a sampled ratio reached m";
        return rep;
      }
    }
  }
  rep.accepted = true;
  rep.achieved = sup;
  std::ostringstream st;
  st << "sampled sup mu(B(x,r))/r^" << s << " = " << sup << " < m = " << m
     << "; if the sampled bound is global, H^s(A) >= " << (1.0 / m) << " * mu*(A) ["
     << mu.describe() << ", sampled evidence only]";
  rep.statement = st.str();
  return rep;
}

CertificateReport mass_upper_certificate(const MeasureOracle& mu, const std::vector<Point>& xs,
                                         const std::vector<Rat>& radii, double s, double m,
                                         int d) {
  CertificateReport rep;
  rep.kind = "mass-upper";
  rep.s = s;
  rep.m = m;
  // in every band of 3 consecutive scales (descending), some radius must
  // witness a ratio > m: the finite stand-in for "at arbitrarily small scales"
  std::vector<Rat> sorted = radii;
  std::sort(sorted.begin(), sorted.end(), [](const Rat& a, const Rat& b) { return a > b; });
  constexpr size_t kBand = 3;
  double min_band_best = std::numeric_limits<double>::infinity();
  for (const auto& x : xs) {
    for (size_t start = 0; start < sorted.size(); start += kBand) {
      double band_best = -1.0;
      const size_t end = std::min(start + kBand, sorted.size());
      for (size_t i = start; i < end; ++i) {
        const double lb = to_double(mu.ball_bounds(Ball{x, sorted[i]}).first);
        band_best = std::max(band_best, lb / std::pow(to_double(sorted[i]), s));
        ++rep.sample_count;
      }
      if (band_best <= m) {
        rep.accepted = false;
        std::ostringstream w;
        w << "scale band starting at r = " << rat_to_string(sorted[start]) << " at x = "
          << point_to_string(x) << " never exceeds m = " << m << " (best " << band_best << ")";
        rep.witness = w.str();
        rep.statement = "refused: ratios fail to exceed m at the smallest sampled scales";
        rep.achieved = band_best;
        return rep;
      }
      min_band_best = std::min(min_band_best, band_best);
    }
  }
  rep.accepted = true;
  rep.achieved = min_band_best;
  const auto cd = dyadic_constants(d);
  std::ostringstream st;
  st << "sampled ratios exceed m = " << m << " at every tail of the scale grid; if that holds as "
     << "r -> 0, H^s(A) <= c_d * m^-1 * mu*(A) with c_d = N_d^(2d) = " << cd.c_d.get_str() << " ["
     << mu.describe() << ", sampled evidence only]";
  rep.statement = st.str();
  return rep;
}

DimensionEstimate box_count(const tgt::TargetSet& target, int max_level) {
  DimensionEstimate est;
  est.kind = "box-count";
  est.bound = "two-sided";
  std::vector<double> lx, ly;
  switch (target.kind()) {
    case tgt::TargetSet::Kind::IfsAttractor: {
      const auto& f = target.ifs();
      for (int k = 1; k <= max_level; ++k) {
        const double scale = to_double(pow_int(f.ratio, k));
        const double count = static_cast<double>(k) * std::log(static_cast<double>(f.count()));
        lx.push_back(-std::log(scale));  // ln(1/scale)
        ly.push_back(count);             // ln N^k
        est.scales.push_back(scale);
        est.samples.push_back(count);
      }
      break;
    }
    case tgt::TargetSet::Kind::FinitePoints: {
      // grid boxes of side 2^-k occupied by the points
      for (int k = 1; k <= max_level; ++k) {
        Rat side = pow_int(Rat(1, 2), k);
        std::vector<std::vector<Int>> cells;
        for (const auto& p : target.points()) {
          std::vector<Int> cell;
          for (const auto& c : p.c) cell.push_back(floor_int(c / side));
          cells.push_back(std::move(cell));
        }
        std::sort(cells.begin(), cells.end());
        cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
        lx.push_back(static_cast<double>(k) * std::log(2.0));
        ly.push_back(std::log(static_cast<double>(cells.size())));
        est.scales.push_back(to_double(side));
        est.samples.push_back(ly.back());
      }
      break;
    }
    case tgt::TargetSet::Kind::Empty:
      throw std::invalid_argument("box_count needs a nonempty target");
  }
  est.exponent = ls_slope(lx, ly, &est.residual);
  est.min_ratio = est.exponent;
  est.median_ratio = est.exponent;
  return est;
}

double hausdorff_presum(const std::vector<Rat>& radii, double s) {
  double sum = 0.0;
  for (const auto& r : radii) {
    if (sgn(r) <= 0) throw std::invalid_argument("cover radii must be positive");
    sum += std::pow(to_double(r), s);
  }
  return sum;
}

}  // namespace hdg::dim
