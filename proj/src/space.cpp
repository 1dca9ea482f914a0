#include "hadeq/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hadeq/error.hpp"

namespace hadeq {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kContractViolation: return "CONTRACT_VIOLATION";
    case ErrorCode::kUnsupported: return "UNSUPPORTED";
    case ErrorCode::kInvalidSet: return "INVALID_SET";
    case ErrorCode::kEmptyInput: return "EMPTY_INPUT";
    case ErrorCode::kInvalidSchedule: return "INVALID_SCHEDULE";
    case ErrorCode::kNoStrategy: return "NO_STRATEGY";
    case ErrorCode::kInnerDiverged: return "INNER_DIVERGED";
    case ErrorCode::kLambdaTooSmall: return "LAMBDA_TOO_SMALL";
    case ErrorCode::kParse: return "PARSE";
  }
  return "UNKNOWN";
}

const char* to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::kEuclidean: return "euclidean";
    case SpaceKind::kHyperboloid: return "hyperboloid";
    case SpaceKind::kStarTree: return "star_tree";
  }
  return "unknown";
}

namespace {

[[noreturn]] void contract(const std::string& what) {
  throw Error(ErrorCode::kContractViolation, what);
}

void require_unit_interval(double t) {
  if (!(t >= 0.0 && t <= 1.0)) contract("geodesic parameter outside [0,1]: " + std::to_string(t));
}

// sinh(x)/x without cancellation near 0.
double sinhc(double x) {
  if (std::abs(x) < 1e-5) return 1.0 + x * x / 6.0;
  return std::sinh(x) / x;
}

}  // namespace

// ---------------------------------------------------------------------------
// Point

Point Point::euclidean(Eigen::VectorXd coords) {
  if (coords.size() < 1) contract("euclidean point needs at least one coordinate");
  if (!coords.allFinite()) contract("euclidean point has non-finite coordinates");
  Point p;
  p.kind_ = SpaceKind::kEuclidean;
  p.coords_ = std::move(coords);
  return p;
}

Point Point::hyperboloid(Eigen::VectorXd ambient) {
  if (ambient.size() < 2) contract("hyperboloid point needs at least two ambient coordinates");
  if (!ambient.allFinite()) contract("hyperboloid point has non-finite coordinates");
  const double q = -minkowski(ambient, ambient);
  if (!(q > 0.0) || !(ambient(0) > 0.0)) {
    contract("hyperboloid point is not on the upper sheet");
  }
  Point p;
  p.kind_ = SpaceKind::kHyperboloid;
  // Points already on the sheet are kept bit-for-bit so serialization round-trips.
  p.coords_ = std::abs(q - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon() ? std::move(ambient)
                                                                                 : ambient / std::sqrt(q);
  return p;
}

Point Point::star_tree(int ray, double radius) {
  if (ray < 0) contract("star tree ray must be nonnegative");
  if (!(radius >= 0.0) || !std::isfinite(radius)) contract("star tree radius must be finite and >= 0");
  Point p;
  p.kind_ = SpaceKind::kStarTree;
  p.ray_ = radius == 0.0 ? 0 : ray;
  p.radius_ = radius;
  return p;
}

bool operator==(const Point& a, const Point& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.kind_ == SpaceKind::kStarTree) return a.ray_ == b.ray_ && a.radius_ == b.radius_;
  return a.coords_.size() == b.coords_.size() && a.coords_ == b.coords_;
}

double minkowski(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  return -x(0) * y(0) + x.tail(x.size() - 1).dot(y.tail(y.size() - 1));
}

// ---------------------------------------------------------------------------
// Space

Space Space::euclidean(int dim) {
  if (dim < 1) contract("euclidean dimension must be >= 1");
  return Space(SpaceKind::kEuclidean, dim, 0);
}

Space Space::hyperboloid(int dim) {
  if (dim < 1) contract("hyperboloid dimension must be >= 1");
  return Space(SpaceKind::kHyperboloid, dim, 0);
}

Space Space::star_tree(int rays) {
  if (rays < 2) contract("star tree needs at least two rays");
  return Space(SpaceKind::kStarTree, 0, rays);
}

Space Space::with_metric_corruption(MetricCorruption corruption) const {
  Space copy = *this;
  copy.corruption_ = corruption;
  return copy;
}

bool Space::contains(const Point& p) const {
  if (p.kind() != kind_) return false;
  switch (kind_) {
    case SpaceKind::kEuclidean: return p.coords().size() == dim_;
    case SpaceKind::kHyperboloid: return p.coords().size() == dim_ + 1;
    case SpaceKind::kStarTree: return p.ray() < rays_;
  }
  return false;
}

void Space::require(const Point& p) const {
  if (!contains(p)) {
    contract(std::string("point of kind ") + to_string(p.kind()) + " does not belong to " +
             to_string(kind_) + " space");
  }
}

Point Space::origin() const {
  switch (kind_) {
    case SpaceKind::kEuclidean: return Point::euclidean(Eigen::VectorXd::Zero(dim_));
    case SpaceKind::kHyperboloid: {
      Eigen::VectorXd x = Eigen::VectorXd::Zero(dim_ + 1);
      x(0) = 1.0;
      return Point::hyperboloid(std::move(x));
    }
    case SpaceKind::kStarTree: return Point::star_tree(0, 0.0);
  }
  contract("unknown space kind");
}

Point Space::lift(const Eigen::VectorXd& spatial) const {
  if (kind_ != SpaceKind::kHyperboloid) contract("lift is only defined on the hyperboloid");
  if (spatial.size() != dim_) contract("lift: wrong number of spatial coordinates");
  Eigen::VectorXd x(dim_ + 1);
  x(0) = std::sqrt(1.0 + spatial.squaredNorm());
  x.tail(dim_) = spatial;
  return Point::hyperboloid(std::move(x));
}

double Space::raw_distance(const Point& p, const Point& q) const {
  switch (kind_) {
    case SpaceKind::kEuclidean: return (p.coords() - q.coords()).norm();
    case SpaceKind::kHyperboloid: {
      // m(p-q, p-q) = 4 sinh^2(d/2); avoids arccosh cancellation near p = q.
      const Eigen::VectorXd delta = p.coords() - q.coords();
      const double s = std::max(minkowski(delta, delta), 0.0);
      return 2.0 * std::asinh(0.5 * std::sqrt(s));
    }
    case SpaceKind::kStarTree:
      if (p.ray() == q.ray()) return std::abs(p.radius() - q.radius());
      return p.radius() + q.radius();
  }
  contract("unknown space kind");
}

double Space::distance(const Point& p, const Point& q) const {
  require(p);
  require(q);
  const double d = raw_distance(p, q);
  if (corruption_ && d > corruption_->threshold) return d * corruption_->scale;
  return d;
}

double Space::squared_distance(const Point& p, const Point& q) const {
  const double d = distance(p, q);
  return d * d;
}

Point Space::geodesic_point(const Point& p, const Point& q, double t) const {
  require(p);
  require(q);
  require_unit_interval(t);
  if (t == 0.0) return p;
  if (t == 1.0) return q;
  switch (kind_) {
    case SpaceKind::kEuclidean: return Point::euclidean((1.0 - t) * p.coords() + t * q.coords());
    case SpaceKind::kHyperboloid: return exp_map(p, t * log_map(p, q));
    case SpaceKind::kStarTree: {
      if (p.ray() == q.ray()) {
        return Point::star_tree(p.ray(), (1.0 - t) * p.radius() + t * q.radius());
      }
      // Cross-ray geodesics pass through the origin.
      const double s = t * (p.radius() + q.radius());
      if (s <= p.radius()) return Point::star_tree(p.ray(), p.radius() - s);
      return Point::star_tree(q.ray(), s - p.radius());
    }
  }
  contract("unknown space kind");
}

double Space::quasilinearization(const Point& a, const Point& b, const Point& c,
                                 const Point& d) const {
  return 0.5 * (squared_distance(a, d) + squared_distance(b, c) - squared_distance(a, c) -
                squared_distance(b, d));
}

Eigen::VectorXd Space::log_map(const Point& base, const Point& target) const {
  require(base);
  require(target);
  switch (kind_) {
    case SpaceKind::kEuclidean: return target.coords() - base.coords();
    case SpaceKind::kHyperboloid: {
      const Eigen::VectorXd delta = target.coords() - base.coords();
      const double s = std::max(minkowski(delta, delta), 0.0);
      const double d = 2.0 * std::asinh(0.5 * std::sqrt(s));
      // q + m(p,q) p with m(p,q) = -1 - s/2, written without cancellation.
      const Eigen::VectorXd w = to_tangent(base, delta - 0.5 * s * base.coords());
      return w / sinhc(d);
    }
    case SpaceKind::kStarTree: break;
  }
  throw Error(ErrorCode::kUnsupported, "log_map is not defined on the star tree");
}

Point Space::exp_map(const Point& base, const Eigen::VectorXd& v) const {
  require(base);
  switch (kind_) {
    case SpaceKind::kEuclidean:
      if (v.size() != dim_) contract("exp_map: tangent vector has wrong size");
      return Point::euclidean(base.coords() + v);
    case SpaceKind::kHyperboloid: {
      if (v.size() != dim_ + 1) contract("exp_map: tangent vector has wrong size");
      const double n = tangent_norm(base, v);
      return Point::hyperboloid(std::cosh(n) * base.coords() + sinhc(n) * v);
    }
    case SpaceKind::kStarTree: break;
  }
  throw Error(ErrorCode::kUnsupported, "exp_map is not defined on the star tree");
}

double Space::tangent_inner(const Point& base, const Eigen::VectorXd& u,
                            const Eigen::VectorXd& v) const {
  require(base);
  switch (kind_) {
    case SpaceKind::kEuclidean: return u.dot(v);
    case SpaceKind::kHyperboloid: return minkowski(u, v);
    case SpaceKind::kStarTree: break;
  }
  throw Error(ErrorCode::kUnsupported, "tangent vectors are not defined on the star tree");
}

double Space::tangent_norm(const Point& base, const Eigen::VectorXd& v) const {
  return std::sqrt(std::max(tangent_inner(base, v, v), 0.0));
}

Eigen::VectorXd Space::to_tangent(const Point& base, const Eigen::VectorXd& v) const {
  switch (kind_) {
    case SpaceKind::kEuclidean: return v;
    case SpaceKind::kHyperboloid: return v + minkowski(base.coords(), v) * base.coords();
    case SpaceKind::kStarTree: break;
  }
  throw Error(ErrorCode::kUnsupported, "tangent vectors are not defined on the star tree");
}

// ---------------------------------------------------------------------------

double check_cat0_inequality(const Space& space, const Point& x, const Point& y,
                             const Point& z, double t) {
  const Point m = space.geodesic_point(x, y, t);
  return (1.0 - t) * space.squared_distance(x, z) + t * space.squared_distance(y, z) -
         t * (1.0 - t) * space.squared_distance(x, y) - space.squared_distance(m, z);
}

double check_cauchy_schwarz(const Space& space, const Point& a, const Point& b,
                            const Point& c, const Point& d) {
  return space.distance(a, b) * space.distance(c, d) - space.quasilinearization(a, b, c, d);
}

Point estimate_asymptotic_center(const Space& space, std::span<const Point> tail,
                                 std::span<const Point> candidates) {
  if (tail.empty()) throw Error(ErrorCode::kEmptyInput, "asymptotic center: empty tail");
  if (candidates.empty()) throw Error(ErrorCode::kEmptyInput, "asymptotic center: no candidates");
  const Point* best = nullptr;
  double best_radius = std::numeric_limits<double>::infinity();
  for (const Point& c : candidates) {
    double r = 0.0;
    for (const Point& x : tail) r = std::max(r, space.distance(c, x));
    if (r < best_radius) {
      best_radius = r;
      best = &c;
    }
  }
  return *best;
}

}  // namespace hadeq
