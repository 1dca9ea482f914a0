#include "hadeq/bifunction.hpp"

#include <cmath>
#include <numeric>

#include "hadeq/error.hpp"

namespace hadeq {

Objective half_squared_distance(const Space& space, const Point& a) {
  space.require(a);
  Objective obj;
  obj.name = "half_squared_distance";
  obj.value = [space, a](const Point& x) { return 0.5 * space.squared_distance(x, a); };
  if (space.is_manifold()) {
    obj.gradient = [space, a](const Point& x) -> Eigen::VectorXd { return -space.log_map(x, a); };
  }
  // argmin 1/2 d^2(y,a) + lambda/2 d^2(y,xbar) lies on [xbar, a] at t = 1/(1+lambda).
  obj.resolvent = [space, a](const ConvexSet& set, const Point& anchor,
                             double lambda) -> std::optional<Point> {
    if (!set.is_whole_space()) return std::nullopt;
    return space.geodesic_point(anchor, a, 1.0 / (1.0 + lambda));
  };
  return obj;
}

Objective frechet_objective(const Space& space, std::vector<Point> anchors,
                            std::vector<double> weights) {
  if (anchors.empty()) throw Error(ErrorCode::kEmptyInput, "frechet objective needs anchors");
  if (weights.empty()) weights.assign(anchors.size(), 1.0);
  if (weights.size() != anchors.size()) {
    throw Error(ErrorCode::kContractViolation, "frechet objective: weights/anchors size mismatch");
  }
  for (const auto& a : anchors) space.require(a);
  for (double w : weights) {
    if (!(w > 0.0)) throw Error(ErrorCode::kContractViolation, "frechet objective: weights must be > 0");
  }
  if (anchors.size() == 1 && weights[0] == 1.0) return half_squared_distance(space, anchors[0]);

  Objective obj;
  obj.name = "frechet";
  obj.value = [space, anchors, weights](const Point& x) {
    double v = 0.0;
    for (std::size_t i = 0; i < anchors.size(); ++i) v += weights[i] * space.squared_distance(x, anchors[i]);
    return 0.5 * v;
  };
  if (space.is_manifold()) {
    obj.gradient = [space, anchors, weights](const Point& x) -> Eigen::VectorXd {
      Eigen::VectorXd g = Eigen::VectorXd::Zero(x.coords().size());
      for (std::size_t i = 0; i < anchors.size(); ++i) g -= weights[i] * space.log_map(x, anchors[i]);
      return g;
    };
  }
  if (space.kind() == SpaceKind::kEuclidean) {
    // Quadratic objective: the prox is a weighted average.
    obj.resolvent = [anchors, weights](const ConvexSet& set, const Point& anchor,
                                       double lambda) -> std::optional<Point> {
      if (!set.is_whole_space()) return std::nullopt;
      Eigen::VectorXd acc = lambda * anchor.coords();
      double total = lambda;
      for (std::size_t i = 0; i < anchors.size(); ++i) {
        acc += weights[i] * anchors[i].coords();
        total += weights[i];
      }
      return Point::euclidean(acc / total);
    };
  }
  return obj;
}

Objective set_distance_objective(const Space& space, ConvexSet set) {
  set.validate(space);
  Objective obj;
  obj.name = "set_distance";
  obj.value = [space, set](const Point& x) { return 0.5 * space.squared_distance(x, project(space, set, x)); };
  if (space.is_manifold()) {
    obj.gradient = [space, set](const Point& x) -> Eigen::VectorXd {
      return -space.log_map(x, project(space, set, x));
    };
  }
  return obj;
}

Bifunction::Bifunction(Eval eval, BifunctionHints hints, std::string name)
    : eval_(std::move(eval)), hints_(std::move(hints)), name_(std::move(name)) {
  if (!eval_) throw Error(ErrorCode::kContractViolation, "bifunction needs an evaluator");
}

Bifunction make_minimization_bifunction(const Space& space, Objective phi) {
  (void)space;
  BifunctionHints hints;
  hints.theta = 0.0;
  hints.phi = phi.value;
  hints.grad_phi = phi.gradient;
  hints.analytic_resolvent = phi.resolvent;
  auto value = phi.value;
  return Bifunction([value](const Point& x, const Point& y) { return value(y) - value(x); },
                    std::move(hints), "minimization:" + phi.name);
}

Bifunction make_minimization_bifunction(const Space& space, ScalarField phi, GradientField grad) {
  Objective obj;
  obj.value = std::move(phi);
  obj.gradient = std::move(grad);
  obj.name = "custom";
  return make_minimization_bifunction(space, std::move(obj));
}

Bifunction make_vi_bifunction(const Space& space, PointMap T, std::string name) {
  BifunctionHints hints;
  hints.map_T = T;
  // <(Tx)x, xy> vanishes at y = x because d(x,x) = 0 makes both sides equal.
  return Bifunction(
      [space, T](const Point& x, const Point& y) { return space.quasilinearization(T(x), x, x, y); },
      std::move(hints), std::move(name));
}

Bifunction make_zero_bifunction(const Space& space) {
  BifunctionHints hints;
  hints.theta = 0.0;
  hints.phi = [](const Point&) { return 0.0; };
  if (space.is_manifold()) {
    hints.grad_phi = [](const Point& x) -> Eigen::VectorXd { return Eigen::VectorXd::Zero(x.coords().size()); };
  }
  hints.analytic_resolvent = [space](const ConvexSet& set, const Point& anchor,
                                     double) -> std::optional<Point> { return project(space, set, anchor); };
  return Bifunction([](const Point&, const Point&) { return 0.0; }, std::move(hints), "zero");
}

Bifunction make_regularized_bifunction(const Space& space, Bifunction f, Point anchor, double lambda) {
  space.require(anchor);
  BifunctionHints hints;
  if (f.hints().theta) hints.theta = std::max(0.0, *f.hints().theta - lambda);
  std::string name = "regularized:" + f.name();
  return Bifunction(
      [space, f = std::move(f), anchor = std::move(anchor), lambda](const Point& x, const Point& y) {
        return f(x, y) + lambda * space.quasilinearization(anchor, x, x, y);
      },
      std::move(hints), std::move(name));
}

PointMap identity_map() {
  return [](const Point& x) { return x; };
}

PointMap constant_map(Point c) {
  return [c = std::move(c)](const Point&) { return c; };
}

PointMap projection_map(const Space& space, ConvexSet set) {
  set.validate(space);
  return [space, set = std::move(set)](const Point& x) { return project(space, set, x); };
}

PointMap dilation_map(const Space& space, double factor) {
  if (!space.is_manifold()) throw Error(ErrorCode::kUnsupported, "dilation map needs a manifold space");
  const Point o = space.origin();
  return [space, o, factor](const Point& x) { return space.exp_map(o, factor * space.log_map(o, x)); };
}

}  // namespace hadeq
