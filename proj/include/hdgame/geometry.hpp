#pragma once

#include <vector>

#include "hdgame/rational.hpp"

namespace hdg::geo {

struct Ball {
  Point center;
  Rat radius;  // > 0

  int dim() const { return center.dim(); }
  /// Strict (open-ball) containment: dist(p, center) < radius.
  bool contains_strict(const Point& p) const;
  /// Closed containment: dist(p, center) <= radius.
  bool contains_closed(const Point& p) const;
};

/// true iff Euclidean dist(x,y) >= r, decided by comparing squared values.
bool dist_ge(const Point& x, const Point& y, const Rat& r);

/// true iff all distinct pairs are >= r apart. Empty/singleton sets pass.
bool is_separated(const std::vector<Point>& pts, const Rat& r);

// Packing and partition bounds. sqrt(d) is rounded outward so the computed
// value is never below the exact formula.
long long packing_bound(int d, const Rat& beta);  // ceil(4*sqrt(d)/(3*beta))^d
long long class_bound(int d);                     // ceil(14*sqrt(d))^d

struct NetFamily {
  int level = 0;
  Rat spacing;
  std::vector<Point> points;              // canonical (lexicographic) order
  std::vector<std::vector<int>> classes;  // index lists into points
};

// Maximal spacing-separated subset of the lattice (spacing/(2*sqrt(d)))*Z^d
// meeting the closed region ball, kept in lexicographic scan order. The
// lattice step uses an outward bound on sqrt(d) so the grid is fine enough
// for a covering radius <= spacing over the lattice points.
NetFamily build_net(const Ball& region, const Rat& spacing, int level = 0);

// Greedy partition into separation-separated classes: class i is a maximal
// separation-separated subset of the residue, scanned in input order.
// Expects inputs pairwise >= separation/6 apart; class count <= class_bound(d).
std::vector<std::vector<int>> partition_net(const std::vector<Point>& pts, const Rat& separation);

/// Rational lattice step used by build_net.
Rat net_lattice_step(int d, const Rat& spacing);

}  // namespace hdg::geo
