#include "hdgame/geometry.hpp"

#include <limits>
#include <map>
#include <stdexcept>

namespace hdg::geo {

bool Ball::contains_strict(const Point& p) const {
  return dist2(p, center) < radius * radius;
}

bool Ball::contains_closed(const Point& p) const {
  return dist2(p, center) <= radius * radius;
}

bool dist_ge(const Point& x, const Point& y, const Rat& r) {
  if (sgn(r) < 0) throw std::invalid_argument("dist_ge: negative radius");
  return dist2(x, y) >= r * r;
}

bool is_separated(const std::vector<Point>& pts, const Rat& r) {
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      if (!dist_ge(pts[i], pts[j], r)) return false;
  return true;
}

namespace {

long long to_ll_checked(const Int& v) {
  if (!v.fits_slong_p()) throw std::overflow_error("bound exceeds long long");
  return v.get_si();
}

}  // namespace

long long packing_bound(int d, const Rat& beta) {
  if (d < 1) throw std::invalid_argument("packing_bound: d >= 1");
  if (sgn(beta) <= 0 || beta >= Rat(1, 2))
    throw std::invalid_argument("packing_bound: beta in (0, 1/2)");
  Rat base = Rat(4) * sqrt_ub_int(d) / (Rat(3) * beta);
  Int b = ceil_int(base);
  return to_ll_checked(ipow(b, static_cast<unsigned long>(d)));
}

long long class_bound(int d) {
  if (d < 1) throw std::invalid_argument("class_bound: d >= 1");
  Int b = ceil_int(Rat(14) * sqrt_ub_int(d));
  return to_ll_checked(ipow(b, static_cast<unsigned long>(d)));
}

Rat net_lattice_step(int d, const Rat& spacing) {
  return spacing / (Rat(2) * sqrt_ub_int(d));
}

NetFamily build_net(const Ball& region, const Rat& spacing, int level) {
  if (sgn(spacing) <= 0) throw std::invalid_argument("build_net: spacing > 0");
  const int d = region.dim();
  const Rat h = net_lattice_step(d, spacing);
  const Rat r2 = region.radius * region.radius;

  std::vector<Int> lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    lo[i] = ceil_int((region.center.c[i] - region.radius) / h);
    hi[i] = floor_int((region.center.c[i] + region.radius) / h);
  }

  NetFamily net;
  net.level = level;
  net.spacing = spacing;

  // Buckets of kept points on a spacing-sized grid: any point closer than
  // spacing lives in a neighboring cell, so the greedy check stays local.
  std::map<std::vector<long>, std::vector<int>> buckets;
  const Rat spacing2 = spacing * spacing;
  auto cell_of = [&](const Point& p) {
    std::vector<long> cell(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) cell[static_cast<size_t>(i)] = floor_int(p.c[i] / spacing).get_si();
    return cell;
  };
  auto near_kept = [&](const Point& p, const std::vector<long>& cell) {
    std::vector<long> nb(static_cast<size_t>(d));
    const long combos = 1;
    long total = 1;
    for (int i = 0; i < d; ++i) total *= 3;
    (void)combos;
    for (long mask = 0; mask < total; ++mask) {
      long mm = mask;
      for (int i = 0; i < d; ++i) {
        nb[static_cast<size_t>(i)] = cell[static_cast<size_t>(i)] + (mm % 3) - 1;
        mm /= 3;
      }
      auto it = buckets.find(nb);
      if (it == buckets.end()) continue;
      for (int idx : it->second)
        if (dist2(p, net.points[static_cast<size_t>(idx)]) < spacing2) return true;
    }
    return false;
  };

  // Lexicographic scan of the lattice box; greedy keep at >= spacing.
  std::vector<Int> idx = lo;
  Point p = zero_point(d);
  while (true) {
    bool in_region = true;
    Rat s(0);
    for (int i = 0; i < d; ++i) {
      p.c[i] = Rat(idx[i]) * h;
      Rat diff = p.c[i] - region.center.c[i];
      s += diff * diff;
      if (s > r2) { in_region = false; break; }
    }
    if (in_region) {
      auto cell = cell_of(p);
      if (!near_kept(p, cell)) {
        buckets[cell].push_back(static_cast<int>(net.points.size()));
        net.points.push_back(p);
      }
    }
    // advance multi-index, last coordinate fastest (keeps lexicographic order)
    int axis = d - 1;
    while (axis >= 0) {
      idx[axis] += 1;
      if (idx[axis] <= hi[axis]) break;
      idx[axis] = lo[axis];
      --axis;
    }
    if (axis < 0) break;
  }

  net.classes = partition_net(net.points, Rat(6) * spacing);
  return net;
}

std::vector<std::vector<int>> partition_net(const std::vector<Point>& pts, const Rat& separation) {
  if (sgn(separation) <= 0) throw std::invalid_argument("partition_net: separation > 0");
  const long long bound = pts.empty() ? 1 : class_bound(pts.front().dim());
  std::vector<std::vector<int>> classes;
  std::vector<bool> used(pts.size(), false);
  size_t remaining = pts.size();
  while (remaining > 0) {
    std::vector<int> cls;
    for (size_t i = 0; i < pts.size(); ++i) {
      if (used[i]) continue;
      bool ok = true;
      for (int j : cls)
        if (!dist_ge(pts[i], pts[static_cast<size_t>(j)], separation)) { ok = false; break; }
      if (ok) cls.push_back(static_cast<int>(i));
    }
    for (int j : cls) used[static_cast<size_t>(j)] = true;
    remaining -= cls.size();
    classes.push_back(std::move(cls));
    if (static_cast<long long>(classes.size()) > bound)
      throw std::logic_error("partition_net exceeded the class bound");
  }
  return classes;
}

}  // namespace hdg::geo
