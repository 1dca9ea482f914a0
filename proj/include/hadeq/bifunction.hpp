#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hadeq/convex_set.hpp"
#include "hadeq/space.hpp"

namespace hadeq {

using PointMap = std::function<Point(const Point&)>;
using ScalarField = std::function<double(const Point&)>;
/// Riemannian gradient, expressed as a tangent vector at the argument.
using GradientField = std::function<Eigen::VectorXd(const Point&)>;
/// Closed-form resolvent (set, anchor, lambda) -> point; nullopt when the
/// closed form does not cover the given set.
using AnalyticResolvent =
    std::function<std::optional<Point>(const ConvexSet&, const Point&, double)>;

/// A convex objective phi with optional structure for the resolvent solvers.
struct Objective {
  ScalarField value;
  GradientField gradient;  // empty on the star tree
  AnalyticResolvent resolvent;
  std::string name;
};

/// phi(x) = 1/2 d^2(x, a). Resolvent on the whole space is the geodesic point
/// at t = 1/(1+lambda) from the anchor toward a.
Objective half_squared_distance(const Space& space, const Point& a);

/// phi(x) = 1/2 sum_i w_i d^2(x, a_i); minimizer is the weighted Frechet mean.
Objective frechet_objective(const Space& space, std::vector<Point> anchors,
                            std::vector<double> weights = {});

/// phi(x) = 1/2 d^2(x, P_S x); its minimizers are exactly S.
Objective set_distance_objective(const Space& space, ConvexSet set);

struct BifunctionHints {
  /// Declared undermonotonicity constant (P4-bullet).
  std::optional<double> theta;
  ScalarField phi;
  GradientField grad_phi;
  PointMap map_T;
  AnalyticResolvent analytic_resolvent;
};

/// f: K x K -> R with optional structure hints. Evaluation must be pure.
class Bifunction {
 public:
  using Eval = std::function<double(const Point&, const Point&)>;

  Bifunction(Eval eval, BifunctionHints hints, std::string name);

  double operator()(const Point& x, const Point& y) const { return eval_(x, y); }
  const BifunctionHints& hints() const { return hints_; }
  const std::string& name() const { return name_; }

 private:
  Eval eval_;
  BifunctionHints hints_;
  std::string name_;
};

/// f(x,y) = phi(y) - phi(x).
Bifunction make_minimization_bifunction(const Space& space, Objective phi);
Bifunction make_minimization_bifunction(const Space& space, ScalarField phi,
                                        GradientField grad = {});

/// f(x,y) = <(Tx)x, xy>, evaluated through the quasi-linearization.
Bifunction make_vi_bifunction(const Space& space, PointMap T, std::string name = "vi");

/// f == 0; S(f,K) = K and the resolvent is the projection onto K.
Bifunction make_zero_bifunction(const Space& space);

/// f(x,y) + lambda <(anchor)x, xy>: the regularized bifunction whose unique
/// equilibrium is the resolvent of f at the anchor.
Bifunction make_regularized_bifunction(const Space& space, Bifunction f, Point anchor,
                                       double lambda);

// Point maps for VI bifunctions.
PointMap identity_map();
PointMap constant_map(Point c);
PointMap projection_map(const Space& space, ConvexSet set);
/// Geodesic dilation about the space origin: exp_o(factor * log_o x).
/// Nonexpansive for |factor| <= 1 on Euclidean spaces; factor -1 is x -> -x.
PointMap dilation_map(const Space& space, double factor);

}  // namespace hadeq
