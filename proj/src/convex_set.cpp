#include "hadeq/convex_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hadeq/error.hpp"

namespace hadeq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::kInvalidSet, what); }

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Unit tangent directions at `base` spanning the tangent space.
std::vector<Eigen::VectorXd> tangent_basis(const Space& space, const Point& base) {
  std::vector<Eigen::VectorXd> basis;
  const int n = space.dim();
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd e;
    if (space.kind() == SpaceKind::kEuclidean) {
      e = Eigen::VectorXd::Unit(n, i);
    } else {
      e = space.to_tangent(base, Eigen::VectorXd::Unit(n + 1, i + 1));
      // Gram-Schmidt in the (positive definite) tangent inner product.
      for (const auto& b : basis) e -= space.tangent_inner(base, e, b) * b;
      const double norm = space.tangent_norm(base, e);
      if (norm < 1e-12) continue;
      e /= norm;
    }
    basis.push_back(std::move(e));
  }
  return basis;
}

}  // namespace

ConvexSet ConvexSet::ball(Point center, double radius) {
  return ConvexSet(Ball{std::move(center), radius});
}

ConvexSet ConvexSet::segment(Point a, Point b) { return ConvexSet(Segment{std::move(a), std::move(b)}); }

ConvexSet ConvexSet::subtree(std::vector<int> rays, std::optional<double> cap) {
  std::sort(rays.begin(), rays.end());
  rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
  return ConvexSet(Subtree{std::move(rays), cap});
}

void ConvexSet::validate(const Space& space) const {
  std::visit(Overloaded{
                 [](const WholeSpace&) {},
                 [&](const Ball& b) {
                   if (!space.contains(b.center)) invalid("ball center does not belong to the space");
                   if (!(b.radius > 0.0) || !std::isfinite(b.radius)) invalid("ball radius must be finite and > 0");
                 },
                 [&](const Segment& s) {
                   if (!space.contains(s.a) || !space.contains(s.b)) {
                     invalid("segment endpoint does not belong to the space");
                   }
                   if (space.distance(s.a, s.b) <= 1e-12) invalid("segment endpoints must be distinct");
                 },
                 [&](const Subtree& t) {
                   if (space.kind() != SpaceKind::kStarTree) invalid("subtree sets need a star tree space");
                   if (t.rays.empty()) invalid("subtree needs at least one ray");
                   for (int r : t.rays) {
                     if (r < 0 || r >= space.rays()) invalid("subtree ray out of range: " + std::to_string(r));
                   }
                   if (t.cap && !(*t.cap > 0.0)) invalid("subtree cap must be > 0");
                 },
             },
             v_);
}

bool ConvexSet::contains(const Space& space, const Point& x, double tol) const {
  if (!space.contains(x)) return false;
  return std::visit(
      Overloaded{
          [](const WholeSpace&) { return true; },
          [&](const Ball& b) { return space.distance(b.center, x) <= b.radius + tol; },
          [&](const Segment& s) {
            return space.distance(s.a, x) + space.distance(x, s.b) <= space.distance(s.a, s.b) + tol;
          },
          [&](const Subtree& t) {
            if (x.radius() == 0.0) return true;
            if (!std::binary_search(t.rays.begin(), t.rays.end(), x.ray())) return false;
            return !t.cap || x.radius() <= *t.cap + tol;
          },
      },
      v_);
}

std::vector<Point> ConvexSet::extreme_points(const Space& space) const {
  std::vector<Point> out;
  std::visit(Overloaded{
                 [](const WholeSpace&) {},
                 [&](const Ball& b) {
                   out.push_back(b.center);
                   if (space.is_manifold()) {
                     for (const auto& e : tangent_basis(space, b.center)) {
                       out.push_back(space.exp_map(b.center, b.radius * e));
                       out.push_back(space.exp_map(b.center, -b.radius * e));
                     }
                   } else {
                     for (int r = 0; r < space.rays(); ++r) {
                       if (auto iv = ray_interval(space, *this, r)) out.push_back(Point::star_tree(r, iv->second));
                     }
                   }
                 },
                 [&](const Segment& s) {
                   out.push_back(s.a);
                   out.push_back(s.b);
                   out.push_back(space.geodesic_point(s.a, s.b, 0.5));
                 },
                 [&](const Subtree& t) {
                   out.push_back(space.origin());
                   if (t.cap) {
                     for (int r : t.rays) out.push_back(Point::star_tree(r, *t.cap));
                   }
                 },
             },
             v_);
  return out;
}

double project_segment_parameter(const Space& space, const Segment& segment, const Point& x) {
  space.require(x);
  const Point& a = segment.a;
  const Point& b = segment.b;
  switch (space.kind()) {
    case SpaceKind::kEuclidean: {
      const Eigen::VectorXd ab = b.coords() - a.coords();
      return std::clamp((x.coords() - a.coords()).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
    }
    case SpaceKind::kHyperboloid: {
      // Along gamma(s) = cosh(s) a + sinh(s) u with u the unit tangent toward
      // b, -m(gamma(s), x) = A cosh(s) - B sinh(s) is minimized at tanh(s) = B/A.
      const double len = space.distance(a, b);
      const Eigen::VectorXd u = space.log_map(a, b) / len;
      const double A = -minkowski(a.coords(), x.coords());
      const double B = minkowski(u, x.coords());
      return std::clamp(std::atanh(std::clamp(B / A, -1.0, 1.0)) / len, 0.0, 1.0);
    }
    case SpaceKind::kStarTree: {
      if (a.ray() == b.ray()) {
        const double r = x.ray() == a.ray() ? x.radius() : 0.0;
        const double lo = std::min(a.radius(), b.radius());
        const double hi = std::max(a.radius(), b.radius());
        return std::abs(std::clamp(r, lo, hi) - a.radius()) / (hi - lo);
      }
      // Arclength from a along a -> origin -> b.
      double s = a.radius();
      if (x.ray() == a.ray()) {
        s = a.radius() - std::min(x.radius(), a.radius());
      } else if (x.ray() == b.ray()) {
        s = a.radius() + std::min(x.radius(), b.radius());
      }
      return s / (a.radius() + b.radius());
    }
  }
  throw Error(ErrorCode::kContractViolation, "unknown space kind");
}

Point project(const Space& space, const ConvexSet& set, const Point& x) {
  space.require(x);
  set.validate(space);
  return std::visit(
      Overloaded{
          [&](const WholeSpace&) { return x; },
          [&](const Ball& b) {
            const double d = space.distance(b.center, x);
            if (d <= b.radius) return x;
            return space.geodesic_point(b.center, x, b.radius / d);
          },
          [&](const Segment& s) {
            return space.geodesic_point(s.a, s.b, project_segment_parameter(space, s, x));
          },
          [&](const Subtree& t) {
            if (!std::binary_search(t.rays.begin(), t.rays.end(), x.ray())) return space.origin();
            return Point::star_tree(x.ray(), t.cap ? std::min(x.radius(), *t.cap) : x.radius());
          },
      },
      set.variant());
}

std::optional<std::pair<double, double>> ray_interval(const Space& space, const ConvexSet& set,
                                                      int ray) {
  if (space.kind() != SpaceKind::kStarTree) {
    throw Error(ErrorCode::kUnsupported, "ray_interval is defined on the star tree only");
  }
  using Interval = std::optional<std::pair<double, double>>;
  return std::visit(
      Overloaded{
          [](const WholeSpace&) -> Interval { return std::pair{0.0, kInf}; },
          [&](const Ball& b) -> Interval {
            const Point& c = b.center;
            if (c.radius() == 0.0 || c.ray() == ray) {
              return std::pair{std::max(0.0, c.radius() - b.radius), c.radius() + b.radius};
            }
            if (b.radius < c.radius()) return std::nullopt;
            return std::pair{0.0, b.radius - c.radius()};
          },
          [&](const Segment& s) -> Interval {
            const bool same_ray = s.a.radius() > 0.0 && s.b.radius() > 0.0 && s.a.ray() == s.b.ray();
            if (same_ray) {
              if (s.a.ray() != ray) return std::nullopt;
              return std::pair{std::min(s.a.radius(), s.b.radius()), std::max(s.a.radius(), s.b.radius())};
            }
            // The segment passes through the origin.
            double hi = 0.0;
            for (const Point* p : {&s.a, &s.b}) {
              if (p->radius() > 0.0 && p->ray() == ray) hi = p->radius();
            }
            return std::pair{0.0, hi};
          },
          [&](const Subtree& t) -> Interval {
            if (!std::binary_search(t.rays.begin(), t.rays.end(), ray)) return std::pair{0.0, 0.0};
            return std::pair{0.0, t.cap.value_or(kInf)};
          },
      },
      set.variant());
}

}  // namespace hadeq
