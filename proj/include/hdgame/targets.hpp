#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hdgame/geometry.hpp"

namespace hdg::tgt {

using geo::Ball;

// Rotation part of a similarity, restricted to signed coordinate permutations
// so rational points map to rational points.
struct SignedPerm {
  std::vector<int> perm;  // output axis i reads input axis perm[i]
  std::vector<int> sign;  // +1 / -1 per output axis

  static SignedPerm identity(int d);
  Point apply(const Point& x) const;
  SignedPerm after(const SignedPerm& inner) const;  // this ∘ inner
};

struct SimilarityMap {
  Rat ratio;  // in (0,1), shared across the system
  SignedPerm rot;
  Point trans;

  Point apply(const Point& x) const;
};

struct BoxRegion {
  Point lo, hi;

  int dim() const { return lo.dim(); }
  Point center() const;
  bool contains_closed(const Point& p) const;
  bool contains_ball(const Ball& b) const;  // closed box contains the closed ball
};

// Accumulated outer-first composition of similarity maps: the cell of address
// (a0..ak-1) is map(a0) ∘ ... ∘ map(ak-1) applied to the witness box, so a
// child's box nests inside its parent's (which makes descent pruning sound).
struct Affine {
  Rat scale;
  SignedPerm rot;
  Point trans;

  static Affine identity(int d);
  Point apply(const Point& x) const;
  Affine then(const SimilarityMap& m) const;  // this ∘ m
  BoxRegion apply_box(const BoxRegion& b) const;
};

// Equicontractive rational IFS with an open-set witness box. Cell boxes are
// exact; pieces(k) are closed balls circumscribing the level-k cells.
struct IFSSystem {
  int d = 1;
  Rat ratio;
  std::vector<SimilarityMap> maps;
  BoxRegion box;     // witness box, images pairwise disjoint at level 1
  Rat circumradius;  // rational >= true circumradius of the box

  int count() const { return static_cast<int>(maps.size()); }
  Rat piece_radius(int level) const;    // circumradius * ratio^level
  Rat piece_diameter(int level) const;  // 2 * piece_radius

  Point cell_center(const std::vector<int>& addr) const;
  BoxRegion cell_box(const std::vector<int>& addr) const;
  Ball piece_ball(const std::vector<int>& addr) const;

  /// Level-k cell count N^k (throws if it cannot fit a long long).
  long long piece_count(int level) const;

  /// Address of the deepest cell chain (max length max_len) whose closed box
  /// contains the ball; descends by exact box containment, ties to least index.
  std::vector<int> ball_chain(const Ball& b, int max_len) const;

  /// Address chain of a point, ties broken toward the least map index.
  std::vector<int> locate(const Point& x, int depth) const;
};

IFSSystem cantor();             // middle-thirds set in d=1: x/3 and x/3 + 2/3
IFSSystem sierpinski_carpet();  // 8 maps of ratio 1/3 in d=2

/// Exact open-box disjointness of the level-1 images.
bool verify_osc_level1(const IFSSystem& ifs);

double similarity_dimension(const IFSSystem& ifs);  // ln N / ln(1/r)

struct Piece {
  std::vector<int> addr;
  Ball ball;
};

std::vector<Piece> enumerate_pieces(const IFSSystem& ifs, int level);

/// Piece centers at the given level whose center meets `within` (strictly, if
/// given); pruned by exact cell-box/ball intersection tests during descent.
std::vector<Piece> pieces_in_ball(const IFSSystem& ifs, int level,
                                  const std::optional<Ball>& within);

class TargetSet {
 public:
  enum class Kind { FinitePoints, IfsAttractor, Empty };

  static TargetSet finite_points(std::vector<Point> pts);
  static TargetSet attractor(IFSSystem ifs);
  static TargetSet empty(int d);

  Kind kind() const { return kind_; }
  int dim() const { return d_; }
  const std::vector<Point>& points() const { return points_; }
  const IFSSystem& ifs() const;

  // Sound rational lower bound on dist(x, A) at refinement level k.
  // nullopt means the target is empty (every bound holds vacuously).
  std::optional<Rat> dist_lower(const Point& x, int level) const;

  std::vector<Ball> pieces(int level) const;  // IFS targets only

  /// Exact comparison min_{a in A} dist(x,a)^2, for tie-breaking strategies.
  std::optional<Rat> min_dist2_finite(const Point& x) const;

  std::string spec() const { return spec_; }
  void set_spec(std::string s) { spec_ = std::move(s); }

 private:
  Kind kind_ = Kind::Empty;
  int d_ = 1;
  std::vector<Point> points_;
  std::optional<IFSSystem> ifs_;
  std::string spec_;
};

/// "cantor" | "carpet" | "finite:(p1;p2;...)" | "empty" (points "a/b,c/d").
TargetSet parse_target(const std::string& spec, int d_hint = 0);

// Relation oracle for the coded-branch relation of an attractor: the witness
// of a point is its piece-address digit sequence.
struct RelationOracle {
  IFSSystem base;

  std::vector<int> witness_prefix(const std::vector<int>& addr) const { return addr; }
  /// True iff x lies in the level-|digits| piece ball addressed by digits.
  bool accepts(const Point& x, const std::vector<int>& digits) const;
};

RelationOracle coded_branch_relation(const IFSSystem& ifs);

}  // namespace hdg::tgt
