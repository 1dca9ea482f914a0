#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "hadeq/space.hpp"

namespace hadeq {

struct WholeSpace {};

struct Ball {
  Point center;
  double radius;
};

/// Geodesic segment [a, b]; endpoints must be distinct.
struct Segment {
  Point a;
  Point b;
};

/// Star tree only: the rays in `rays` (plus the origin), truncated at `cap`.
struct Subtree {
  std::vector<int> rays;
  std::optional<double> cap;
};

/// Closed convex feasible set K.
class ConvexSet {
 public:
  using Variant = std::variant<WholeSpace, Ball, Segment, Subtree>;

  static ConvexSet whole_space() { return ConvexSet(WholeSpace{}); }
  static ConvexSet ball(Point center, double radius);
  static ConvexSet segment(Point a, Point b);
  static ConvexSet subtree(std::vector<int> rays, std::optional<double> cap = std::nullopt);

  const Variant& variant() const { return v_; }
  bool is_whole_space() const { return std::holds_alternative<WholeSpace>(v_); }

  /// Throws ErrorCode::kInvalidSet when the description does not define a
  /// nonempty closed convex subset of `space`.
  void validate(const Space& space) const;

  bool contains(const Space& space, const Point& x, double tol = 1e-9) const;

  /// Structured probe points: endpoints, center, boundary extremes.
  std::vector<Point> extreme_points(const Space& space) const;

 private:
  explicit ConvexSet(Variant v) : v_(std::move(v)) {}

  Variant v_;
};


/// Metric projection P_K(x).
Point project(const Space& space, const ConvexSet& set, const Point& x);

/// Parameter t in [0,1] of the point of the segment nearest to x.
double project_segment_parameter(const Space& space, const Segment& segment, const Point& x);

/// Interval [lo, hi] of radii along `ray` that lie in `set` (star tree only).
/// The origin belongs to every ray. Empty when the ray misses the set.
std::optional<std::pair<double, double>> ray_interval(const Space& space, const ConvexSet& set,
                                                      int ray);

}  // namespace hadeq
