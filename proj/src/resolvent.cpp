#include "hadeq/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "hadeq/error.hpp"
#include "hadeq/sampling.hpp"

namespace hadeq {

namespace {

constexpr double kArmijoC = 1e-4;
constexpr double kBacktrack = 0.5;
constexpr int kMaxBacktracks = 50;
// Sufficient-decrease slack for objective values at the rounding floor.
constexpr double kRoundoffSlack = 8.0 * std::numeric_limits<double>::epsilon();

[[noreturn]] void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

ResolventResult finish(const ResolventRequest& req, Point z, int iterations, std::vector<double> steps) {
  std::vector<Point> extra;
  if (req.known_solution) extra.push_back(*req.known_solution);
  const double r = residual(req.f, req.space, req.set, z, req.anchor, req.lambda,
                            req.options.residual_samples, req.options.seed, extra);
  return ResolventResult{std::move(z), r, iterations, *req.options.strategy, std::move(steps)};
}

ResolventResult solve_analytic(const ResolventRequest& req) {
  const auto& closed_form = req.f.hints().analytic_resolvent;
  if (!closed_form) fail(ErrorCode::kNoStrategy, "bifunction " + req.f.name() + " has no closed-form resolvent");
  std::optional<Point> z = closed_form(req.set, req.anchor, req.lambda);
  if (!z) fail(ErrorCode::kNoStrategy, "closed-form resolvent does not cover this feasible set");
  return finish(req, std::move(*z), 0, {});
}

// z <- P_K((1/(1+lambda)) Tz (+) (lambda/(1+lambda)) anchor), a contraction
// with factor 1/(1+lambda) when T is nonexpansive.
ResolventResult solve_fixed_point(const ResolventRequest& req) {
  const auto& T = req.f.hints().map_T;
  if (!T) fail(ErrorCode::kNoStrategy, "bifunction " + req.f.name() + " has no underlying map T");
  const Space& space = req.space;
  const double weight = req.lambda / (1.0 + req.lambda);
  Point z = req.initial ? *req.initial : project(space, req.set, req.anchor);
  std::vector<double> steps;
  bool converged = false;
  int it = 0;
  while (it < req.options.max_inner) {
    Point next = project(space, req.set, space.geodesic_point(T(z), req.anchor, weight));
    const double step = space.distance(z, next);
    steps.push_back(step);
    z = std::move(next);
    ++it;
    if (step <= req.options.tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    fail(ErrorCode::kInnerDiverged, "fixed-point iteration did not reach tol in " +
                                        std::to_string(req.options.max_inner) + " steps");
  }
  ResolventResult result = finish(req, std::move(z), it, std::move(steps));
  if (!req.set.is_whole_space() && result.residual < -req.options.residual_tol) {
    fail(ErrorCode::kInnerDiverged,
         "constrained fixed point failed the residual check (" + std::to_string(result.residual) + ")");
  }
  return result;
}

// Projected Riemannian gradient descent on psi(y) = phi(y) + lambda/2 d^2(y, anchor).
ResolventResult solve_prox_manifold(const ResolventRequest& req) {
  const auto& phi = req.f.hints().phi;
  const auto& grad_phi = req.f.hints().grad_phi;
  if (!grad_phi) fail(ErrorCode::kNoStrategy, "proximal descent needs a gradient oracle on manifold spaces");
  const Space& space = req.space;
  const double lambda = req.lambda;
  auto psi = [&](const Point& y) { return phi(y) + 0.5 * lambda * space.squared_distance(y, req.anchor); };
  auto grad = [&](const Point& y) -> Eigen::VectorXd {
    return space.to_tangent(y, grad_phi(y)) - lambda * space.log_map(y, req.anchor);
  };
  auto step_to = [&](const Point& y, const Eigen::VectorXd& g, double s) {
    return project(space, req.set, space.exp_map(y, -s * g));
  };

  // Length of the unit projected step; zero exactly at constrained minimizers.
  auto stationarity_at = [&](const Point& y, const Eigen::VectorXd& g) {
    return req.set.is_whole_space() ? space.tangent_norm(y, g) : space.distance(y, step_to(y, g, 1.0));
  };

  Point y = req.initial ? project(space, req.set, *req.initial) : project(space, req.set, req.anchor);
  double s = 1.0;  // warm-started across iterations
  std::vector<double> steps;
  int it = 0;
  for (; it < req.options.max_inner; ++it) {
    const Eigen::VectorXd g = grad(y);
    const double stationarity = stationarity_at(y, g);
    if (stationarity <= req.options.tol) return finish(req, std::move(y), it, std::move(steps));

    const double psi_y = psi(y);
    const double floor = kRoundoffSlack * (std::abs(psi_y) + 1.0);
    bool accepted = false;
    for (int bt = 0; bt < kMaxBacktracks; ++bt, s *= kBacktrack) {
      Point trial = step_to(y, g, s);
      const double decrease = kArmijoC * space.tangent_inner(y, g, space.log_map(y, trial));
      const double psi_trial = psi(trial);
      const bool armijo = psi_trial <= psi_y + decrease;
      // Values no longer resolve progress at the rounding floor; stationarity
      // still does, so such trials must shrink it instead.
      const bool floor_step =
          !armijo && psi_trial <= psi_y + floor && stationarity_at(trial, grad(trial)) < stationarity;
      if (armijo || floor_step) {
        steps.push_back(space.distance(y, trial));
        y = std::move(trial);
        accepted = true;
        if (armijo && bt == 0) s = std::min(1.0, 2.0 * s);
        break;
      }
    }
    if (!accepted) {
      fail(ErrorCode::kInnerDiverged, "Armijo line search failed after " + std::to_string(kMaxBacktracks) +
                                          " backtracks (stationarity " + std::to_string(stationarity) + ")");
    }
  }
  fail(ErrorCode::kInnerDiverged,
       "proximal descent did not converge in " + std::to_string(req.options.max_inner) + " iterations");
}

// Star tree: minimize psi restricted to each ray (a convex 1-D problem) and
// keep the best ray.
ResolventResult solve_prox_tree(const ResolventRequest& req) {
  const auto& phi = req.f.hints().phi;
  const Space& space = req.space;
  auto psi = [&](const Point& y) { return phi(y) + 0.5 * req.lambda * space.squared_distance(y, req.anchor); };

  std::optional<Point> best;
  double best_value = std::numeric_limits<double>::infinity();
  int evaluations = 0;
  for (int ray = 0; ray < space.rays(); ++ray) {
    const auto interval = ray_interval(space, req.set, ray);
    if (!interval) continue;
    auto [lo, hi] = *interval;
    auto along = [&](double r) {
      ++evaluations;
      return psi(Point::star_tree(ray, r));
    };
    if (std::isinf(hi)) {
      // Expand until psi starts increasing; psi is coercive along every ray.
      double prev = along(lo);
      hi = std::max(lo + 1.0, 2.0 * (req.anchor.radius() + 1.0));
      for (int k = 0; k < 64; ++k) {
        const double v = along(hi);
        if (v > prev) break;
        prev = v;
        hi *= 2.0;
      }
    }
    double r = lo;
    if (hi > lo) {
      std::uintmax_t max_iter = static_cast<std::uintmax_t>(req.options.max_inner);
      // Half the mantissa: the resolution limit for locating a smooth minimum.
      constexpr int kBits = std::numeric_limits<double>::digits / 2;
      r = boost::math::tools::brent_find_minima(along, lo, hi, kBits, max_iter).first;
    }
    for (double candidate : {r, lo, hi}) {
      const Point p = Point::star_tree(ray, candidate);
      const double v = psi(p);
      if (v < best_value) {
        best_value = v;
        best = p;
      }
    }
  }
  if (!best) fail(ErrorCode::kInvalidSet, "feasible set meets no ray of the tree");
  return finish(req, std::move(*best), evaluations, {});
}

ResolventResult solve_prox_descent(const ResolventRequest& req) {
  if (!req.f.hints().phi) {
    fail(ErrorCode::kNoStrategy, "proximal descent needs a minimization bifunction (phi hint)");
  }
  return req.space.is_manifold() ? solve_prox_manifold(req) : solve_prox_tree(req);
}

void validate(const ResolventRequest& req) {
  req.space.require(req.anchor);
  req.set.validate(req.space);
  if (!(req.lambda > 0.0) || !std::isfinite(req.lambda)) {
    fail(ErrorCode::kContractViolation, "lambda must be finite and > 0");
  }
  if (const auto& theta = req.f.hints().theta; theta && req.lambda <= *theta) {
    fail(ErrorCode::kLambdaTooSmall,
         "lambda " + std::to_string(req.lambda) + " <= declared theta " + std::to_string(*theta));
  }
  if (!(req.options.tol > 0.0)) fail(ErrorCode::kContractViolation, "tol must be > 0");
  if (req.options.max_inner < 1) fail(ErrorCode::kContractViolation, "max_inner must be >= 1");
}

}  // namespace

const char* to_string(ResolventStrategy s) {
  switch (s) {
    case ResolventStrategy::kAnalytic: return "analytic";
    case ResolventStrategy::kFixedPoint: return "fixed_point";
    case ResolventStrategy::kProxDescent: return "prox_descent";
  }
  return "unknown";
}

std::optional<ResolventStrategy> strategy_from_string(const std::string& name) {
  for (auto s : {ResolventStrategy::kAnalytic, ResolventStrategy::kFixedPoint, ResolventStrategy::kProxDescent}) {
    if (name == to_string(s)) return s;
  }
  return std::nullopt;
}

ResolventStrategy default_strategy(const Bifunction& f, const Space& space) {
  const auto& h = f.hints();
  if (h.analytic_resolvent) return ResolventStrategy::kAnalytic;
  if (h.map_T) return ResolventStrategy::kFixedPoint;
  if (h.phi && (h.grad_phi || !space.is_manifold())) return ResolventStrategy::kProxDescent;
  fail(ErrorCode::kNoStrategy, "no resolvent strategy applies to bifunction " + f.name());
}

ResolventResult solve_resolvent(const ResolventRequest& request) {
  validate(request);
  if (!request.options.strategy) {
    // Closed forms may not cover every feasible set; fall through when not.
    ResolventRequest filled = request;
    const auto& h = request.f.hints();
    if (h.analytic_resolvent && h.analytic_resolvent(request.set, request.anchor, request.lambda)) {
      filled.options.strategy = ResolventStrategy::kAnalytic;
    } else if (h.map_T) {
      filled.options.strategy = ResolventStrategy::kFixedPoint;
    } else {
      filled.options.strategy = ResolventStrategy::kProxDescent;
    }
    return solve_resolvent(filled);
  }
  switch (*request.options.strategy) {
    case ResolventStrategy::kAnalytic: return solve_analytic(request);
    case ResolventStrategy::kFixedPoint: return solve_fixed_point(request);
    case ResolventStrategy::kProxDescent: return solve_prox_descent(request);
  }
  fail(ErrorCode::kNoStrategy, "unknown strategy");
}

double residual(const Bifunction& f, const Space& space, const ConvexSet& set, const Point& z,
                const Point& anchor, double lambda, int samples, std::uint64_t seed,
                std::span<const Point> extra) {
  std::vector<Point> probes = set.extreme_points(space);
  probes.push_back(project(space, set, anchor));
  for (const Point& p : extra) probes.push_back(project(space, set, p));

  // Unbounded sets are probed in a ball around z that reaches the anchor.
  const double reach = std::max(1.0, 2.0 * space.distance(z, anchor));
  Sampler sampler(space, seed, reach, z);
  for (int i = 0; static_cast<int>(probes.size()) < samples; ++i) {
    Point y = sampler.point_in(set);
    if (i % 2 == 1) y = space.geodesic_point(z, y, 0.05);
    probes.push_back(std::move(y));
  }

  double worst = std::numeric_limits<double>::infinity();
  for (const Point& y : probes) {
    const double v = f(z, y) + (lambda == 0.0 ? 0.0 : lambda * space.quasilinearization(anchor, z, z, y));
    worst = std::min(worst, v);
  }
  return worst;
}

FirmnessReport check_firmly_nonexpansive(const Bifunction& f, const Space& space,
                                         const ConvexSet& set, double lambda,
                                         std::span<const std::pair<Point, Point>> pairs,
                                         const ResolventOptions& options) {
  auto J = [&](const Point& x) {
    return solve_resolvent(ResolventRequest{f, space, set, x, lambda, options, std::nullopt, std::nullopt}).point;
  };
  FirmnessReport report;
  report.firm.property = PropertyKind::kFirmlyNonexpansive;
  report.nonexpansive.property = PropertyKind::kNonexpansive;
  double worst_firm = -std::numeric_limits<double>::infinity();
  double worst_nonexp = -std::numeric_limits<double>::infinity();
  for (const auto& [x, z] : pairs) {
    const Point jx = J(x);
    const Point jz = J(z);
    const double firm = space.squared_distance(jx, jz) - space.quasilinearization(x, z, jx, jz);
    const double nonexp = space.distance(jx, jz) - space.distance(x, z);
    if (firm > worst_firm) {
      worst_firm = firm;
      report.firm.witnesses = {{x, z, jx, jz}};
    }
    if (nonexp > worst_nonexp) {
      worst_nonexp = nonexp;
      report.nonexpansive.witnesses = {{x, z, jx, jz}};
    }
  }
  const int n = static_cast<int>(pairs.size());
  report.firm.samples = n;
  report.nonexpansive.samples = n;
  report.firm.worst_violation = n ? worst_firm : 0.0;
  report.nonexpansive.worst_violation = n ? worst_nonexp : 0.0;
  return report;
}

std::vector<Point> resolvent_path(const Bifunction& f, const Space& space, const ConvexSet& set,
                                  const Point& x, std::span<const double> lambdas,
                                  const ResolventOptions& options) {
  if (lambdas.empty()) throw Error(ErrorCode::kEmptyInput, "resolvent path needs at least one lambda");
  for (std::size_t j = 0; j < lambdas.size(); ++j) {
    if (!(lambdas[j] > 0.0) || (j > 0 && !(lambdas[j] < lambdas[j - 1]))) {
      fail(ErrorCode::kContractViolation, "resolvent path lambdas must be positive and strictly decreasing");
    }
  }
  std::vector<Point> path;
  path.reserve(lambdas.size());
  for (double lambda : lambdas) {
    path.push_back(
        solve_resolvent(ResolventRequest{f, space, set, x, lambda, options, std::nullopt, std::nullopt}).point);
  }
  return path;
}

}  // namespace hadeq
