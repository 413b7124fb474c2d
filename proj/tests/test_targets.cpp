#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "hdgame/targets.hpp"

using namespace hdg;
using namespace hdg::tgt;

namespace {

Point pt(const char* s) { return point_of({rat_from_string(s)}); }

// random grid-aligned IFS: ratio 1/m, translations on distinct cells of the
// m^d grid, so the open-set condition holds by construction
IFSSystem random_grid_ifs(std::mt19937_64& rng) {
  IFSSystem s;
  s.d = 1 + static_cast<int>(rng() % 2);
  const long m = 3 + static_cast<long>(rng() % 3);
  s.ratio = Rat(1, m);
  long cells = 1;
  for (int i = 0; i < s.d; ++i) cells *= m;
  const int count = 2 + static_cast<int>(rng() % std::min<long>(4, cells - 1));
  std::vector<long> chosen;
  while (static_cast<int>(chosen.size()) < count) {
    long c = static_cast<long>(rng() % static_cast<uint64_t>(cells));
    if (std::find(chosen.begin(), chosen.end(), c) == chosen.end()) chosen.push_back(c);
  }
  for (long c : chosen) {
    Point t = zero_point(s.d);
    long rem = c;
    for (int i = 0; i < s.d; ++i) {
      t.c[i] = Rat(rem % m, m);
      rem /= m;
    }
    s.maps.push_back(SimilarityMap{s.ratio, SignedPerm::identity(s.d), t});
  }
  Point hi = zero_point(s.d);
  for (auto& v : hi.c) v = Rat(1);
  s.box = BoxRegion{zero_point(s.d), hi};
  s.circumradius = s.d == 1 ? Rat(1, 2) : sqrt_ub(Rat(s.d, 4));
  return s;
}

}  // namespace

TEST_CASE("cantor structure") {
  auto f = cantor();
  CHECK(verify_osc_level1(f));
  CHECK(similarity_dimension(f) == doctest::Approx(std::log(2) / std::log(3)).epsilon(1e-12));

  // level-2 pieces are the four middle-thirds intervals as balls
  auto pieces = enumerate_pieces(f, 2);
  REQUIRE(pieces.size() == 4);
  CHECK(pieces[0].ball.center == pt("1/18"));
  CHECK(pieces[1].ball.center == pt("5/18"));
  CHECK(pieces[2].ball.center == pt("13/18"));
  CHECK(pieces[3].ball.center == pt("17/18"));
  for (auto& pc : pieces) CHECK(pc.ball.radius == Rat(1, 18));

  for (int k = 0; k <= 10; ++k) CHECK(f.piece_count(k) == (1LL << k));
}

TEST_CASE("carpet structure") {
  auto f = sierpinski_carpet();
  CHECK(f.count() == 8);
  CHECK(verify_osc_level1(f));
  CHECK(similarity_dimension(f) == doctest::Approx(std::log(8) / std::log(3)).epsilon(1e-12));
  // circumradius is an outward rational bound on sqrt(2)/2
  CHECK(f.circumradius * f.circumradius >= Rat(1, 2));
  CHECK(to_double(f.circumradius) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
}

TEST_CASE("piece refinement: every child ball sits inside its parent ball") {
  auto check_refinement = [](const IFSSystem& f, int max_level) {
    for (int k = 0; k < max_level; ++k) {
      for (auto& parent : enumerate_pieces(f, k)) {
        for (int j = 0; j < f.count(); ++j) {
          auto child_addr = parent.addr;
          child_addr.push_back(j);
          auto child = f.piece_ball(child_addr);
          // |c_child - c_parent| + r_child <= r_parent, compared via squares
          Rat slack = parent.ball.radius - child.radius;
          REQUIRE(sgn(slack) >= 0);
          CHECK(dist2(child.center, parent.ball.center) <= slack * slack);
        }
      }
    }
  };
  check_refinement(cantor(), 8);
  check_refinement(sierpinski_carpet(), 4);

  // deep random-address spot checks for the carpet
  auto f = sierpinski_carpet();
  std::mt19937_64 rng(5);
  for (int t = 0; t < 300; ++t) {
    std::vector<int> addr;
    for (int k = 0; k < 8; ++k) addr.push_back(static_cast<int>(rng() % 8));
    auto child = f.piece_ball(addr);
    auto parent_addr = addr;
    parent_addr.pop_back();
    auto parent = f.piece_ball(parent_addr);
    Rat slack = parent.radius - child.radius;
    CHECK(dist2(child.center, parent.center) <= slack * slack);
  }
}

TEST_CASE("dist_lower examples") {
  auto fin = parse_target("finite:(1)");
  CHECK(*fin.dist_lower(pt("0"), 0) == Rat(1));

  auto c = parse_target("cantor");
  // true dist(1/2, C) = 1/6; the oracle reports a sound positive bound
  auto lb = *c.dist_lower(pt("1/2"), 1);
  CHECK(sgn(lb) > 0);
  CHECK(lb <= Rat(1, 6));
  // deeper levels stay sound
  auto lb5 = *c.dist_lower(pt("1/2"), 5);
  CHECK(sgn(lb5) > 0);
  CHECK(lb5 <= Rat(1, 6));

  // points of the attractor get bound 0 at every level
  CHECK(*c.dist_lower(pt("0"), 6) == Rat(0));
  CHECK(*c.dist_lower(pt("1"), 6) == Rat(0));
  CHECK(*c.dist_lower(pt("1/3"), 6) == Rat(0));

  auto e = parse_target("empty", 1);
  CHECK_FALSE(e.dist_lower(pt("0"), 3).has_value());
}

TEST_CASE("dist_lower soundness on random IFS targets") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    IFSSystem f = random_grid_ifs(rng);
    REQUIRE(verify_osc_level1(f));
    auto target = TargetSet::attractor(f);

    // attractor points: fixed point of map 0 pushed through k random maps
    // (grid IFS without rotation: fixed point = t/(1 - r))
    Point fixed = zero_point(f.d);
    for (int i = 0; i < f.d; ++i)
      fixed.c[i] = f.maps[0].trans.c[i] / (Rat(1) - f.ratio);
    for (int k = 0; k < 4; ++k) {
      Point a = fixed;
      for (int step = 0; step < k + 5; ++step)
        a = f.maps[rng() % f.maps.size()].apply(a);

      Point x = zero_point(f.d);
      for (int i = 0; i < f.d; ++i)
        x.c[i] = Rat(static_cast<long>(rng() % 33) - 16, 8);

      for (int level = 0; level <= 5; ++level) {
        Rat lb = *target.dist_lower(x, level);
        CHECK(sgn(lb) >= 0);
        // never exceeds distance to an explicitly enumerated attractor point
        CHECK(lb * lb <= dist2(x, a));
      }
    }
  }
}

TEST_CASE("locate and ball_chain agree with cell boxes") {
  auto f = cantor();
  // 1/4 lies in the Cantor set: address alternates 0,2 in ternary -> maps 0,1
  auto addr = f.locate(pt("1/4"), 6);
  REQUIRE(addr.size() == 6);
  for (size_t i = 0; i < addr.size(); ++i) CHECK(addr[i] == (i % 2 == 0 ? 0 : 1));

  // chain of a ball well inside the left-left cell
  geo::Ball b{pt("1/18"), Rat(1, 30)};
  auto chain = f.ball_chain(b, 10);
  REQUIRE(chain.size() >= 2);
  CHECK(chain[0] == 0);
  CHECK(chain[1] == 0);
  // every prefix box contains the ball
  for (size_t k = 1; k <= chain.size(); ++k) {
    std::vector<int> prefix(chain.begin(), chain.begin() + static_cast<long>(k));
    CHECK(f.cell_box(prefix).contains_ball(b));
  }
}

TEST_CASE("coded branch relation") {
  auto oracle = coded_branch_relation(cantor());
  // left third forces first digit 0, right third digit 1
  CHECK(oracle.accepts(pt("1/6"), {0}));
  CHECK_FALSE(oracle.accepts(pt("1/6"), {1}));
  CHECK(oracle.accepts(pt("5/6"), {1}));
  // witness prefixes are nested with pieces
  auto f = cantor();
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    std::vector<int> addr;
    for (int k = 0; k < 6; ++k) addr.push_back(static_cast<int>(rng() % 2));
    auto w = oracle.witness_prefix(addr);
    CHECK(w == addr);
    CHECK(oracle.accepts(f.cell_center(addr), addr));
    for (size_t k = 0; k < addr.size(); ++k) {
      std::vector<int> prefix(addr.begin(), addr.begin() + static_cast<long>(k));
      CHECK(oracle.accepts(f.cell_center(addr), prefix));
    }
  }
}

TEST_CASE("target spec parsing") {
  auto fin = parse_target("finite:(1/2;3/4)");
  CHECK(fin.points().size() == 2);
  auto fin2d = parse_target("finite:(1/2,1/3;0,0)");
  CHECK(fin2d.dim() == 2);
  CHECK_THROWS(parse_target("nope"));
  CHECK_THROWS(parse_target("carpet", 1));  // dimension mismatch
}
