#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hadeq/bifunction.hpp"
#include "hadeq/property_check.hpp"

namespace hadeq {

// Lambda convention: the regularized bifunction is
//   f~(x,y) = f(x,y) + lambda <(anchor)x, xy>,
// so a large lambda is strong regularization and lambda -> 0 removes it. The
// classical proximal map argmin phi + 1/(2 mu) d^2(., anchor) corresponds to
// lambda = 1/mu.

enum class ResolventStrategy { kAnalytic, kFixedPoint, kProxDescent };

const char* to_string(ResolventStrategy s);
std::optional<ResolventStrategy> strategy_from_string(const std::string& name);

/// Picks the first applicable strategy: analytic, then fixed point, then
/// proximal descent. Throws kNoStrategy when no hint matches.
ResolventStrategy default_strategy(const Bifunction& f, const Space& space);

struct ResolventOptions {
  /// Unset: default_strategy() of the bifunction.
  std::optional<ResolventStrategy> strategy;
  double tol = 1e-12;
  int max_inner = 10000;
  int residual_samples = 200;
  /// Constrained fixed-point solves are rejected when the sampled residual
  /// falls below -residual_tol.
  double residual_tol = 1e-8;
  std::uint64_t seed = 0;
};

struct ResolventRequest {
  Bifunction f;
  Space space;
  ConvexSet set;
  Point anchor;
  double lambda;
  ResolventOptions options;
  /// Starting point for the iterative strategies (default P_K(anchor)).
  std::optional<Point> initial;
  /// Added to the residual probes when known.
  std::optional<Point> known_solution;
};

struct ResolventResult {
  Point point;
  double residual;
  int inner_iterations;
  ResolventStrategy strategy_used;
  /// Inner step lengths d(z_i, z_{i+1}) for the iterative strategies.
  std::vector<double> steps;
};

/// J_lambda(anchor): the unique equilibrium point of f~ on K.
ResolventResult solve_resolvent(const ResolventRequest& request);

/// min over probe points y in K of f(z,y) + lambda <(anchor)z, zy>.
///
/// Probes are the set's extreme points, P_K(anchor), any `extra` points, and
/// seeded draws up to `samples` total; every other draw is pulled toward z so
/// first-order violations are caught. A true resolvent gives >= -tol.
/// lambda = 0 measures how far z is from solving EP(f, K) itself.
double residual(const Bifunction& f, const Space& space, const ConvexSet& set, const Point& z,
                const Point& anchor, double lambda, int samples = 200, std::uint64_t seed = 0,
                std::span<const Point> extra = {});

struct FirmnessReport {
  /// d^2(Jx,Jz) - <xz, JxJz>, should be <= tol.
  PropertyReport firm;
  /// d(Jx,Jz) - d(x,z), should be <= tol.
  PropertyReport nonexpansive;
};

FirmnessReport check_firmly_nonexpansive(const Bifunction& f, const Space& space,
                                         const ConvexSet& set, double lambda,
                                         std::span<const std::pair<Point, Point>> pairs,
                                         const ResolventOptions& options);

/// (J_{lambda_j} x)_j for a strictly decreasing positive sequence lambda_j.
std::vector<Point> resolvent_path(const Bifunction& f, const Space& space, const ConvexSet& set,
                                  const Point& x, std::span<const double> lambdas,
                                  const ResolventOptions& options);

}  // namespace hadeq
