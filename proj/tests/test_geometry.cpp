#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "hdgame/geometry.hpp"

using namespace hdg;
using geo::Ball;

namespace {

Point pt1(const char* s) { return point_of({rat_from_string(s)}); }
Point pt2(const char* a, const char* b) { return point_of({rat_from_string(a), rat_from_string(b)}); }

// Interval-arithmetic oracle for dist_ge: double intervals with outward
// rounding; returns nullopt when the interval straddles r^2.
std::optional<bool> interval_dist_ge(const Point& x, const Point& y, const Rat& r) {
  double lo = 0, hi = 0;
  for (int i = 0; i < x.dim(); ++i) {
    double a = to_double(x.c[i] - y.c[i]);
    double sq = a * a;
    lo += sq * (1 - 1e-12);
    hi += sq * (1 + 1e-12);
  }
  double r2 = to_double(r * r);
  if (lo > r2 * (1 + 1e-9)) return true;
  if (hi < r2 * (1 - 1e-9)) return false;
  return std::nullopt;
}

}  // namespace

TEST_CASE("dist_ge decides exactly") {
  CHECK(geo::dist_ge(pt1("0"), pt1("1"), rat_from_string("1")));
  CHECK(geo::dist_ge(pt2("0", "0"), pt2("3/5", "4/5"), rat_from_string("1")));  // 3-4-5 scaled
  CHECK_FALSE(geo::dist_ge(pt1("0"), pt1("1/2"), rat_from_string("2/3")));
  CHECK_THROWS(geo::dist_ge(pt1("0"), pt2("0", "0"), Rat(1)));
}

TEST_CASE("dist_ge agrees with interval arithmetic when it decides") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 2000; ++t) {
    int d = 1 + static_cast<int>(rng() % 3);
    Point x = zero_point(d), y = zero_point(d);
    for (int i = 0; i < d; ++i) {
      x.c[i] = Rat(static_cast<long>(rng() % 2001) - 1000, 1 + static_cast<long>(rng() % 97));
      y.c[i] = Rat(static_cast<long>(rng() % 2001) - 1000, 1 + static_cast<long>(rng() % 97));
    }
    Rat r(static_cast<long>(rng() % 100), 1 + static_cast<long>(rng() % 13));
    auto oracle = interval_dist_ge(x, y, r);
    if (oracle) CHECK(geo::dist_ge(x, y, r) == *oracle);
  }
}

TEST_CASE("is_separated") {
  CHECK(geo::is_separated({pt1("0"), pt1("1"), pt1("2")}, Rat(1)));
  CHECK_FALSE(geo::is_separated({pt1("0"), pt1("1/2")}, Rat(1)));
  CHECK(geo::is_separated({}, Rat(5)));
  CHECK(geo::is_separated({pt1("3")}, Rat(5)));
  // non-strict: distance exactly r counts as separated
  CHECK(geo::is_separated({pt1("0"), pt1("1")}, Rat(1)));
}

TEST_CASE("packing_bound and class_bound") {
  CHECK(geo::packing_bound(1, Rat(1, 3)) == 4);
  CHECK(geo::packing_bound(2, Rat(1, 4)) == 64);
  CHECK(geo::packing_bound(1, Rat(1, 6)) == 8);
  CHECK(geo::class_bound(1) == 14);
  CHECK(geo::class_bound(2) == 400);
  CHECK(geo::class_bound(3) == 15625);
}

TEST_CASE("build_net small cases") {
  // d=1, region B(0,1), spacing 1: lattice {-1,-1/2,0,1/2,1}, greedy {-1,0,1}
  auto net = geo::build_net(Ball{pt1("0"), Rat(1)}, Rat(1));
  REQUIRE(net.points.size() == 3);
  CHECK(net.points[0] == pt1("-1"));
  CHECK(net.points[1] == pt1("0"));
  CHECK(net.points[2] == pt1("1"));
  CHECK(geo::is_separated(net.points, Rat(1)));

  auto single = geo::build_net(Ball{pt1("0"), Rat(1)}, Rat(3));
  CHECK(single.points.size() == 1);
}

TEST_CASE("build_net outputs are separated, maximal over the lattice, deterministic") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 40; ++t) {
    int d = 1 + static_cast<int>(rng() % 2);
    Point c = zero_point(d);
    for (int i = 0; i < d; ++i) c.c[i] = Rat(static_cast<long>(rng() % 9) - 4, 1 + static_cast<long>(rng() % 3));
    Ball region{c, Rat(1 + static_cast<long>(rng() % 3), 1 + static_cast<long>(rng() % 2))};
    Rat spacing(1 + static_cast<long>(rng() % 3), 1 + static_cast<long>(rng() % 3));
    auto net = geo::build_net(region, spacing);
    CHECK(geo::is_separated(net.points, spacing));

    // maximality relative to the declared lattice: no lattice point of the
    // region can be added at >= spacing from every net point
    Rat h = geo::net_lattice_step(d, spacing);
    if (d == 1) {
      for (Int k = ceil_int((c.c[0] - region.radius) / h); k <= floor_int((c.c[0] + region.radius) / h); ++k) {
        Point p = point_of({Rat(k) * h});
        if (!region.contains_closed(p)) continue;
        bool coverable = false;
        for (const auto& q : net.points)
          if (!geo::dist_ge(p, q, spacing)) coverable = true;
        bool member = false;
        for (const auto& q : net.points)
          if (q == p) member = true;
        CHECK((coverable || member));
      }
    }

    auto again = geo::build_net(region, spacing);
    CHECK(net.points == again.points);  // replay stability
  }
}

TEST_CASE("partition_net greedy trace") {
  std::vector<Point> pts = {pt1("0"), pt1("1"), pt1("2"), pt1("3")};
  auto classes = geo::partition_net(pts, Rat(2));
  REQUIRE(classes.size() == 2);
  CHECK(classes[0] == std::vector<int>{0, 2});
  CHECK(classes[1] == std::vector<int>{1, 3});

  auto one = geo::partition_net({pt1("5")}, Rat(7));
  CHECK(one.size() == 1);
}

TEST_CASE("partition is a partition and classes are separated") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    int d = 1 + static_cast<int>(rng() % 2);
    Point c = zero_point(d);
    Ball region{c, Rat(2)};
    Rat spacing(1, 2 + static_cast<long>(rng() % 3));
    auto net = geo::build_net(region, spacing);
    Rat sep = Rat(6) * spacing;
    auto classes = geo::partition_net(net.points, sep);
    CHECK(static_cast<long long>(classes.size()) <= geo::class_bound(d));
    std::vector<bool> seen(net.points.size(), false);
    for (const auto& cls : classes) {
      std::vector<Point> members;
      for (int i : cls) {
        CHECK_FALSE(seen[static_cast<size_t>(i)]);
        seen[static_cast<size_t>(i)] = true;
        members.push_back(net.points[static_cast<size_t>(i)]);
      }
      CHECK(geo::is_separated(members, sep));
    }
    for (bool s : seen) CHECK(s);
  }
}

TEST_CASE("separated sets inside balls respect the packing bound") {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 300; ++t) {
    int d = 1 + static_cast<int>(rng() % 3);
    // keep the ball/spacing ratio dimension-appropriate so lattices stay small
    long beta_min = d == 1 ? 3 : d == 2 ? 9 : 15;
    Rat beta(beta_min + static_cast<long>(rng() % (41 - beta_min)), 100);
    Rat rho(1 + static_cast<long>(rng() % 6), 1 + static_cast<long>(rng() % 3));
    Ball ball{zero_point(d), rho};
    auto net = geo::build_net(ball, Rat(3) * beta * rho);
    CHECK(geo::is_separated(net.points, Rat(3) * beta * rho));
    CHECK(static_cast<long long>(net.points.size()) <= geo::packing_bound(d, beta));
  }
}

TEST_CASE("rational wire format") {
  CHECK(rat_to_string(rat_from_string("2/4")) == "1/2");
  CHECK(rat_to_string(rat_from_string("-0.25")) == "-1/4");
  CHECK(rat_to_string(Rat(3)) == "3/1");
  CHECK(rat_from_string("7") == Rat(7));
  CHECK_THROWS(rat_from_string("1/0"));
}

TEST_CASE("sqrt bounds bracket and are exact on squares") {
  CHECK(sqrt_lb(Rat(4)) == Rat(2));
  CHECK(sqrt_ub(Rat(4)) == Rat(2));
  CHECK(sqrt_ub(Rat(9, 16)) == Rat(3, 4));
  std::mt19937_64 rng(23);
  for (int t = 0; t < 500; ++t) {
    Rat q(static_cast<long>(rng() % 1000), 1 + static_cast<long>(rng() % 50));
    Rat lo = sqrt_lb(q), hi = sqrt_ub(q);
    CHECK(lo <= hi);
    CHECK(lo * lo <= q);
    CHECK(hi * hi >= q);
  }
}
