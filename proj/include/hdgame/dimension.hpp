#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hdgame/engine.hpp"
#include "hdgame/strategy.hpp"

namespace hdg::dim {

using eng::GameParams;
using geo::Ball;

// Dyadic-cover constants: N_d = ceil(1 + 12 sqrt(d)) and the upper-bound
// constant c_d = N_d^(2d).
struct DyadicConstants {
  long long N_d = 0;
  Int c_d;
};
DyadicConstants dyadic_constants(int d);

struct TreeNode {
  eng::MoveI move;  // sigma's move at this node
  std::vector<std::unique_ptr<TreeNode>> children;  // child i follows move.points[i]
};

// The finitely splitting tree of all II replies against a fixed player-I
// strategy, with the product cylinder measure: a depth-n node has exact mass
// prod_{i<n} |F_i|^-1 along its path.
class TreeMeasure {
 public:
  TreeMeasure(GameParams params, std::unique_ptr<TreeNode> root, int depth);

  const GameParams& params() const { return params_; }
  int depth() const { return depth_; }
  const TreeNode& root() const { return *root_; }

  struct Leaf {
    std::vector<int> path;  // child indices
    Rat mass;
    Ball localization;  // B(x_{depth-1}, 2 rho_{depth-1})
  };
  const std::vector<Leaf>& leaves() const { return leaves_; }

  /// Exact cylinder mass along a path (prefix of a branch).
  Rat cylinder_mass(const std::vector<int>& path) const;

  /// Masses at the given depth sum to one (exact); exposed for invariants.
  Rat depth_mass_sum(int depth) const;

  long long node_count() const { return node_count_; }

 private:
  GameParams params_;
  std::unique_ptr<TreeNode> root_;
  int depth_;
  std::vector<Leaf> leaves_;
  long long node_count_ = 0;
};

/// Expands every II choice against sigma to the given depth; sigma must stay
/// legal at every node (aborts otherwise).
TreeMeasure strategy_tree(const GameParams& params, strat::StrategyI& sigma, int depth);

/// Lower/upper bounds on the pushforward mass of B(x, r): sums of leaf masses
/// whose localization balls are contained in / meet the ball.
std::pair<Rat, Rat> ball_mass(const TreeMeasure& tm, const Ball& b);

struct DimensionEstimate {
  std::string kind;         // "local-exponent" | "box-count" | ...
  double exponent = 0.0;    // primary estimate (least-squares fit)
  std::string bound;        // "lower" | "upper" | "two-sided"
  double constant_m = 0.0;
  double min_ratio = 0.0;
  double median_ratio = 0.0;
  std::vector<double> samples;
  std::vector<double> scales;
  double residual = 0.0;
};

// Fits ln(mass) against ln(rho_n) along one branch over [from_depth, to_depth]:
// the exponent is the least-squares slope; pointwise ratios are reported as
// min/median.
DimensionEstimate local_exponent(const TreeMeasure& tm, const std::vector<int>& branch,
                                 int from_depth, int to_depth);

// --- measure oracles and certificates ---------------------------------------

// mu(B(x,r)) bounds for the measures the certificates are checked against.
class MeasureOracle {
 public:
  static MeasureOracle lebesgue_interval(const Rat& a, const Rat& b);  // d = 1
  static MeasureOracle point_mass(Point at);
  static MeasureOracle tree(const TreeMeasure* tm);  // borrowed pointer

  std::pair<Rat, Rat> ball_bounds(const Ball& b) const;
  std::string describe() const { return desc_; }

 private:
  std::function<std::pair<Rat, Rat>(const Ball&)> fn_;
  std::string desc_;
};

struct CertificateReport {
  bool accepted = false;
  std::string kind;  // "mass-lower" | "mass-upper"
  double s = 0.0;
  double m = 0.0;
  double achieved = 0.0;  // sup (lower) or min-of-tail-suprema (upper)
  std::string statement;  // sampled-evidence claim with the numbers filled in
  std::optional<std::string> witness;  // violating sample when refused
  size_t sample_count = 0;
};

// Sampled mass-distribution certificates. The lower certificate checks
// sup mu(B(x,r))/r^s < m over all samples (using the oracle's upper bounds);
// on acceptance the statement instantiates H^s(A) >= m^-1 mu*(A).
CertificateReport mass_lower_certificate(const MeasureOracle& mu, const std::vector<Point>& xs,
                                         const std::vector<Rat>& radii, double s, double m);

// The upper certificate checks that ratios exceed m at arbitrarily small
// sampled scales (every tail of the radius grid must contain one); on
// acceptance the statement instantiates H^s(A) <= c_d m^-1 mu*(A).
CertificateReport mass_upper_certificate(const MeasureOracle& mu, const std::vector<Point>& xs,
                                         const std::vector<Rat>& radii, double s, double m, int d);

// --- independent oracles -----------------------------------------------------

/// Piece/grid cover counts per scale with a least-squares slope of
/// ln N against ln(1/scale).
DimensionEstimate box_count(const tgt::TargetSet& target, int max_level);

/// sum r_i^s over a cover's radii.
double hausdorff_presum(const std::vector<Rat>& radii, double s);

/// Least-squares slope helper (exposed for tests).
double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys, double* residual = nullptr);

}  // namespace hdg::dim
