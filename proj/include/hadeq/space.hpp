#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace hadeq {

enum class SpaceKind { kEuclidean, kHyperboloid, kStarTree };

const char* to_string(SpaceKind kind);

/// A location in one of the concrete Hadamard spaces.
///
/// Euclidean points carry n coordinates. Hyperboloid points carry n+1 ambient
/// coordinates on the upper sheet {x : -x0^2 + |x_1..n|^2 = -1, x0 > 0}; the
/// factory renormalizes. Star-tree points are (ray, radius) with the origin
/// canonicalized to ray 0.
class Point {
 public:
  static Point euclidean(Eigen::VectorXd coords);
  static Point hyperboloid(Eigen::VectorXd ambient);
  static Point star_tree(int ray, double radius);

  SpaceKind kind() const { return kind_; }
  const Eigen::VectorXd& coords() const { return coords_; }
  int ray() const { return ray_; }
  double radius() const { return radius_; }

  /// Exact representation equality (used by determinism checks).
  friend bool operator==(const Point& a, const Point& b);

 private:
  Point() = default;

  SpaceKind kind_ = SpaceKind::kEuclidean;
  Eigen::VectorXd coords_;
  int ray_ = 0;
  double radius_ = 0.0;
};

/// Minkowski bilinear form -x0*y0 + sum_i xi*yi.
double minkowski(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Test hook: distances strictly above `threshold` are multiplied by `scale`.
/// Geodesics are left untouched, so a corrupted handle violates the metric
/// identities the property sweeps check.
struct MetricCorruption {
  double scale = 1.0;
  double threshold = 0.0;
};

/// Geometry of one concrete Hadamard space. Immutable; all members are pure.
class Space {
 public:
  static Space euclidean(int dim);
  static Space hyperboloid(int dim);
  static Space star_tree(int rays);

  SpaceKind kind() const { return kind_; }
  /// Manifold dimension n (Euclidean, hyperboloid) or 0 for the star tree.
  int dim() const { return dim_; }
  /// Number of rays (star tree) or 0.
  int rays() const { return rays_; }
  bool is_manifold() const { return kind_ != SpaceKind::kStarTree; }

  Space with_metric_corruption(MetricCorruption corruption) const;
  const std::optional<MetricCorruption>& metric_corruption() const { return corruption_; }

  /// Throws ErrorCode::kContractViolation if `p` does not live in this space.
  void require(const Point& p) const;
  bool contains(const Point& p) const;

  /// Canonical base point: 0, (1,0,...,0) or the tree origin.
  Point origin() const;
  /// Hyperboloid point above the given spatial coordinates (x0 recomputed).
  Point lift(const Eigen::VectorXd& spatial) const;

  double distance(const Point& p, const Point& q) const;
  double squared_distance(const Point& p, const Point& q) const;

  /// (1-t)p (+) tq: the point at fraction t of the geodesic from p to q.
  Point geodesic_point(const Point& p, const Point& q, double t) const;

  /// <ab, cd> = 1/2 (d^2(a,d) + d^2(b,c) - d^2(a,c) - d^2(b,d)).
  double quasilinearization(const Point& a, const Point& b, const Point& c,
                            const Point& d) const;

  // Tangent-space plumbing for the manifold kinds. The star tree throws
  // ErrorCode::kUnsupported. Hyperboloid tangent vectors are ambient (n+1)
  // vectors Minkowski-orthogonal to the base point.
  Eigen::VectorXd log_map(const Point& base, const Point& target) const;
  Point exp_map(const Point& base, const Eigen::VectorXd& v) const;
  double tangent_inner(const Point& base, const Eigen::VectorXd& u,
                       const Eigen::VectorXd& v) const;
  double tangent_norm(const Point& base, const Eigen::VectorXd& v) const;
  /// Projects an ambient vector onto the tangent space at `base`.
  Eigen::VectorXd to_tangent(const Point& base, const Eigen::VectorXd& v) const;

 private:
  Space(SpaceKind kind, int dim, int rays) : kind_(kind), dim_(dim), rays_(rays) {}

  double raw_distance(const Point& p, const Point& q) const;

  SpaceKind kind_;
  int dim_ = 0;
  int rays_ = 0;
  std::optional<MetricCorruption> corruption_;
};

/// (1-t)d^2(x,z) + t d^2(y,z) - t(1-t)d^2(x,y) - d^2((1-t)x(+)ty, z).
/// Nonnegative in every CAT(0) space; zero in flat spaces.
double check_cat0_inequality(const Space& space, const Point& x, const Point& y,
                             const Point& z, double t);

/// d(a,b) d(c,d) - <ab, cd>; nonnegative in every CAT(0) space.
double check_cauchy_schwarz(const Space& space, const Point& a, const Point& b,
                            const Point& c, const Point& d);

/// Finite surrogate for the asymptotic center of a sequence: the candidate
/// minimizing the largest distance to the tail. Diagnostic only.
Point estimate_asymptotic_center(const Space& space, std::span<const Point> tail,
                                 std::span<const Point> candidates);

}  // namespace hadeq
