#include "hdgame/targets.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hdg::tgt {

SignedPerm SignedPerm::identity(int d) {
  SignedPerm sp;
  sp.perm.resize(d);
  sp.sign.assign(d, 1);
  for (int i = 0; i < d; ++i) sp.perm[i] = i;
  return sp;
}

Point SignedPerm::apply(const Point& x) const {
  Point y = zero_point(static_cast<int>(perm.size()));
  for (size_t i = 0; i < perm.size(); ++i) {
    y.c[i] = x.c[static_cast<size_t>(perm[i])];
    if (sign[i] < 0) y.c[i] = -y.c[i];
  }
  return y;
}

SignedPerm SignedPerm::after(const SignedPerm& inner) const {
  SignedPerm out;
  out.perm.resize(perm.size());
  out.sign.resize(perm.size());
  for (size_t i = 0; i < perm.size(); ++i) {
    out.perm[i] = inner.perm[static_cast<size_t>(perm[i])];
    out.sign[i] = sign[i] * inner.sign[static_cast<size_t>(perm[i])];
  }
  return out;
}

Point SimilarityMap::apply(const Point& x) const {
  Point y = rot.apply(x);
  for (auto& v : y.c) v *= ratio;
  for (size_t i = 0; i < y.c.size(); ++i) y.c[i] += trans.c[i];
  return y;
}

Affine Affine::identity(int d) {
  return Affine{Rat(1), SignedPerm::identity(d), zero_point(d)};
}

Point Affine::apply(const Point& x) const {
  Point y = rot.apply(x);
  for (auto& v : y.c) v *= scale;
  for (size_t i = 0; i < y.c.size(); ++i) y.c[i] += trans.c[i];
  return y;
}

Affine Affine::then(const SimilarityMap& m) const {
  // (this ∘ m)(x) = scale*rot(m.ratio*m.rot(x) + m.trans) + trans
  Affine out;
  out.scale = scale * m.ratio;
  out.rot = rot.after(m.rot);
  Point shifted = rot.apply(m.trans);
  for (auto& v : shifted.c) v *= scale;
  for (size_t i = 0; i < shifted.c.size(); ++i) shifted.c[i] += trans.c[i];
  out.trans = std::move(shifted);
  return out;
}

BoxRegion Affine::apply_box(const BoxRegion& b) const {
  Point a = apply(b.lo);
  Point c = apply(b.hi);
  BoxRegion out{a, a};
  for (int i = 0; i < b.dim(); ++i) {
    out.lo.c[i] = std::min(a.c[i], c.c[i]);
    out.hi.c[i] = std::max(a.c[i], c.c[i]);
  }
  return out;
}

Point BoxRegion::center() const {
  Point c = lo;
  for (int i = 0; i < dim(); ++i) c.c[i] = (lo.c[i] + hi.c[i]) / 2;
  return c;
}

bool BoxRegion::contains_closed(const Point& p) const {
  for (int i = 0; i < dim(); ++i)
    if (p.c[i] < lo.c[i] || p.c[i] > hi.c[i]) return false;
  return true;
}

bool BoxRegion::contains_ball(const Ball& b) const {
  for (int i = 0; i < dim(); ++i) {
    if (b.center.c[i] - b.radius < lo.c[i]) return false;
    if (b.center.c[i] + b.radius > hi.c[i]) return false;
  }
  return true;
}

namespace {

// Image of an axis-aligned box under a signed-permutation similarity is again
// an axis-aligned box; take per-axis min/max of the two mapped corners.
BoxRegion map_box(const SimilarityMap& m, const BoxRegion& b) {
  Point a = m.apply(b.lo);
  Point c = m.apply(b.hi);
  BoxRegion out{a, a};
  for (int i = 0; i < b.dim(); ++i) {
    out.lo.c[i] = std::min(a.c[i], c.c[i]);
    out.hi.c[i] = std::max(a.c[i], c.c[i]);
  }
  return out;
}

bool boxes_open_disjoint(const BoxRegion& a, const BoxRegion& b) {
  for (int i = 0; i < a.dim(); ++i)
    if (a.hi.c[i] <= b.lo.c[i] || b.hi.c[i] <= a.lo.c[i]) return true;
  return false;
}

// Squared distance from a point to a closed box (0 when inside).
Rat dist2_point_box(const Point& x, const BoxRegion& b) {
  Rat s(0);
  for (int i = 0; i < b.dim(); ++i) {
    if (x.c[i] < b.lo.c[i]) {
      Rat diff = b.lo.c[i] - x.c[i];
      s += diff * diff;
    } else if (x.c[i] > b.hi.c[i]) {
      Rat diff = x.c[i] - b.hi.c[i];
      s += diff * diff;
    }
  }
  return s;
}

}  // namespace

Rat IFSSystem::piece_radius(int level) const { return circumradius * pow_int(ratio, level); }

Rat IFSSystem::piece_diameter(int level) const { return Rat(2) * piece_radius(level); }

Point IFSSystem::cell_center(const std::vector<int>& addr) const {
  Point p = box.center();
  for (auto it = addr.rbegin(); it != addr.rend(); ++it) p = maps[static_cast<size_t>(*it)].apply(p);
  return p;
}

BoxRegion IFSSystem::cell_box(const std::vector<int>& addr) const {
  BoxRegion b = box;
  for (auto it = addr.rbegin(); it != addr.rend(); ++it) b = map_box(maps[static_cast<size_t>(*it)], b);
  return b;
}

Ball IFSSystem::piece_ball(const std::vector<int>& addr) const {
  return Ball{cell_center(addr), piece_radius(static_cast<int>(addr.size()))};
}

long long IFSSystem::piece_count(int level) const {
  Int n = ipow(Int(count()), static_cast<unsigned long>(level));
  if (!n.fits_slong_p()) throw std::overflow_error("piece count overflow");
  return n.get_si();
}

std::vector<int> IFSSystem::ball_chain(const Ball& b, int max_len) const {
  std::vector<int> addr;
  Affine acc = Affine::identity(d);
  if (!box.contains_ball(b)) return addr;
  while (static_cast<int>(addr.size()) < max_len) {
    int found = -1;
    Affine next;
    for (int j = 0; j < count(); ++j) {
      Affine cand = acc.then(maps[static_cast<size_t>(j)]);
      if (cand.apply_box(box).contains_ball(b)) { found = j; next = cand; break; }
    }
    if (found < 0) break;
    addr.push_back(found);
    acc = next;
  }
  return addr;
}

std::vector<int> IFSSystem::locate(const Point& x, int depth) const {
  std::vector<int> addr;
  Affine acc = Affine::identity(d);
  if (!box.contains_closed(x)) return addr;
  while (static_cast<int>(addr.size()) < depth) {
    int found = -1;
    Affine next;
    for (int j = 0; j < count(); ++j) {
      Affine cand = acc.then(maps[static_cast<size_t>(j)]);
      if (cand.apply_box(box).contains_closed(x)) { found = j; next = cand; break; }
    }
    if (found < 0) break;
    addr.push_back(found);
    acc = next;
  }
  return addr;
}

IFSSystem cantor() {
  IFSSystem s;
  s.d = 1;
  s.ratio = Rat(1, 3);
  SimilarityMap left{s.ratio, SignedPerm::identity(1), point_of({Rat(0)})};
  SimilarityMap right{s.ratio, SignedPerm::identity(1), point_of({Rat(2, 3)})};
  s.maps = {left, right};
  s.box = BoxRegion{point_of({Rat(0)}), point_of({Rat(1)})};
  s.circumradius = Rat(1, 2);
  return s;
}

IFSSystem sierpinski_carpet() {
  IFSSystem s;
  s.d = 2;
  s.ratio = Rat(1, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == 1 && j == 1) continue;
      SimilarityMap m{s.ratio, SignedPerm::identity(2), point_of({Rat(i, 3), Rat(j, 3)})};
      s.maps.push_back(m);
    }
  s.box = BoxRegion{zero_point(2), point_of({Rat(1), Rat(1)})};
  // outward bound on sqrt(2)/2: half the box diagonal
  s.circumradius = sqrt_ub(Rat(1, 2));
  return s;
}

bool verify_osc_level1(const IFSSystem& ifs) {
  std::vector<BoxRegion> images;
  images.reserve(ifs.maps.size());
  for (const auto& m : ifs.maps) images.push_back(map_box(m, ifs.box));
  for (size_t i = 0; i < images.size(); ++i)
    for (size_t j = i + 1; j < images.size(); ++j)
      if (!boxes_open_disjoint(images[i], images[j])) return false;
  return true;
}

double similarity_dimension(const IFSSystem& ifs) {
  return std::log(static_cast<double>(ifs.count())) / -rat_log(ifs.ratio);
}

std::vector<Piece> enumerate_pieces(const IFSSystem& ifs, int level) {
  std::vector<Piece> out;
  std::vector<int> addr;
  auto rec = [&](auto&& self) -> void {
    if (static_cast<int>(addr.size()) == level) {
      out.push_back(Piece{addr, ifs.piece_ball(addr)});
      return;
    }
    for (int j = 0; j < ifs.count(); ++j) {
      addr.push_back(j);
      self(self);
      addr.pop_back();
    }
  };
  rec(rec);
  return out;
}

std::vector<Piece> pieces_in_ball(const IFSSystem& ifs, int level,
                                  const std::optional<Ball>& within) {
  std::vector<Piece> out;
  std::vector<int> addr;
  auto rec = [&](auto&& self, const Affine& acc) -> void {
    BoxRegion cell = acc.apply_box(ifs.box);
    if (within) {
      // prune subtrees whose cell box misses the ball entirely
      if (dist2_point_box(within->center, cell) > within->radius * within->radius) return;
    }
    if (static_cast<int>(addr.size()) == level) {
      Point c = cell.center();
      if (!within || within->contains_strict(c))
        out.push_back(Piece{addr, Ball{c, ifs.piece_radius(level)}});
      return;
    }
    for (int j = 0; j < ifs.count(); ++j) {
      addr.push_back(j);
      self(self, acc.then(ifs.maps[static_cast<size_t>(j)]));
      addr.pop_back();
    }
  };
  rec(rec, Affine::identity(ifs.d));
  return out;
}

TargetSet TargetSet::finite_points(std::vector<Point> pts) {
  if (pts.empty()) throw std::invalid_argument("finite target needs >= 1 point");
  TargetSet t;
  t.kind_ = Kind::FinitePoints;
  t.d_ = pts.front().dim();
  t.points_ = std::move(pts);
  return t;
}

TargetSet TargetSet::attractor(IFSSystem ifs) {
  if (!verify_osc_level1(ifs)) throw std::invalid_argument("IFS fails the open-set witness check");
  TargetSet t;
  t.kind_ = Kind::IfsAttractor;
  t.d_ = ifs.d;
  t.ifs_ = std::move(ifs);
  return t;
}

TargetSet TargetSet::empty(int d) {
  TargetSet t;
  t.kind_ = Kind::Empty;
  t.d_ = d;
  return t;
}

const IFSSystem& TargetSet::ifs() const {
  if (!ifs_) throw std::logic_error("target has no IFS");
  return *ifs_;
}

std::optional<Rat> TargetSet::min_dist2_finite(const Point& x) const {
  if (kind_ == Kind::Empty) return std::nullopt;
  if (kind_ != Kind::FinitePoints) throw std::logic_error("min_dist2_finite on non-finite target");
  std::optional<Rat> best;
  for (const auto& p : points_) {
    Rat d2 = dist2(x, p);
    if (!best || d2 < *best) best = d2;
  }
  return best;
}

std::optional<Rat> TargetSet::dist_lower(const Point& x, int level) const {
  switch (kind_) {
    case Kind::Empty:
      return std::nullopt;
    case Kind::FinitePoints: {
      Rat best2 = *min_dist2_finite(x);
      return sqrt_lb(best2);  // exact in d=1, tight lower bound otherwise
    }
    case Kind::IfsAttractor: {
      const IFSSystem& f = *ifs_;
      // branch & bound over the cell tree: min over level-k pieces of
      // (dist to center - piece radius), floored at 0
      Rat best(-1);  // sentinel: unset
      std::vector<int> addr;
      auto rec = [&](auto&& self, const Affine& acc) -> void {
        if (sgn(best) == 0) return;  // cannot improve on 0
        BoxRegion cell = acc.apply_box(f.box);
        Rat box_lb2 = dist2_point_box(x, cell);
        if (sgn(best) > 0 && box_lb2 >= best * best) return;  // subtree cannot beat best
        if (static_cast<int>(addr.size()) == level) {
          Rat lb = sqrt_lb(dist2(x, cell.center())) - f.piece_radius(level);
          if (sgn(lb) < 0) lb = Rat(0);
          if (sgn(best) < 0 || lb < best) best = lb;
          return;
        }
        for (int j = 0; j < f.count(); ++j) {
          addr.push_back(j);
          self(self, acc.then(f.maps[static_cast<size_t>(j)]));
          addr.pop_back();
        }
      };
      rec(rec, Affine::identity(f.d));
      if (sgn(best) < 0) best = Rat(0);
      return best;
    }
  }
  throw std::logic_error("unreachable");
}

std::vector<Ball> TargetSet::pieces(int level) const {
  if (kind_ != Kind::IfsAttractor) throw std::logic_error("pieces() needs an IFS target");
  std::vector<Ball> out;
  for (auto& p : enumerate_pieces(*ifs_, level)) out.push_back(std::move(p.ball));
  return out;
}

TargetSet parse_target(const std::string& spec, int d_hint) {
  TargetSet t = [&] {
    if (spec == "cantor") return TargetSet::attractor(cantor());
    if (spec == "carpet") return TargetSet::attractor(sierpinski_carpet());
    if (spec == "empty") return TargetSet::empty(d_hint > 0 ? d_hint : 1);
    if (spec.rfind("finite:", 0) == 0) {
      std::string body = spec.substr(7);
      if (body.size() >= 2 && body.front() == '(' && body.back() == ')')
        body = body.substr(1, body.size() - 2);
      std::vector<Point> pts;
      std::stringstream ss(body);
      std::string tok;
      while (std::getline(ss, tok, ';'))
        if (!tok.empty()) pts.push_back(point_from_string(tok));
      return TargetSet::finite_points(std::move(pts));
    }
    throw std::invalid_argument("unknown target spec: " + spec);
  }();
  if (d_hint > 0 && t.dim() != d_hint)
    throw std::invalid_argument("target dimension " + std::to_string(t.dim()) +
                                " does not match --dim " + std::to_string(d_hint));
  t.set_spec(spec);
  return t;
}

bool RelationOracle::accepts(const Point& x, const std::vector<int>& digits) const {
  return base.piece_ball(digits).contains_closed(x);
}

RelationOracle coded_branch_relation(const IFSSystem& ifs) { return RelationOracle{ifs}; }

}  // namespace hdg::tgt
