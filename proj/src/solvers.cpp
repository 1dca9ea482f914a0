#include "hadeq/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hadeq/error.hpp"
#include "hadeq/sampling.hpp"

namespace hadeq {

namespace {

void validate_common(const Bifunction& f, const Space& space, const ConvexSet& set,
                     const SolveConfig& config) {
  space.require(config.x0);
  set.validate(space);
  if (config.max_outer < 1) throw Error(ErrorCode::kContractViolation, "max_outer must be >= 1");
  if (!(config.tol_step > 0.0)) throw Error(ErrorCode::kContractViolation, "tol_step must be > 0");
  config.lambda_schedule.validate_as_lambda(f.hints().theta.value_or(0.0));
}

ResolventResult resolve(const Bifunction& f, const Space& space, const ConvexSet& set, const Point& anchor,
                        double lambda, const SolveConfig& config, int k) {
  ResolventOptions options = config.resolvent;
  options.seed = config.rng_seed + static_cast<std::uint64_t>(k);
  return solve_resolvent(ResolventRequest{f, space, set, anchor, lambda, options, std::nullopt, std::nullopt});
}

std::optional<double> distance_to(const Space& space, const Point& x, const std::optional<Point>& ref) {
  if (!ref) return std::nullopt;
  return space.distance(x, *ref);
}

bool residual_ok(double residual, const ResolventOptions& options) {
  return residual >= -10.0 * options.residual_tol;
}

}  // namespace

const char* to_string(TerminalStatus status) {
  switch (status) {
    case TerminalStatus::kConverged: return "CONVERGED";
    case TerminalStatus::kMaxIter: return "MAX_ITER";
    case TerminalStatus::kSubproblemFailed: return "SUBPROBLEM_FAILED";
  }
  return "UNKNOWN";
}

const char* to_string(StrongMode mode) {
  switch (mode) {
    case StrongMode::kStrongPseudo: return "STRONG_PSEUDO";
    case StrongMode::kStrongConvexY: return "STRONG_CONVEX_Y";
    case StrongMode::kStrongConcaveX: return "STRONG_CONCAVE_X";
  }
  return "UNKNOWN";
}

IterateTrace run_ppa(const Bifunction& f, const Space& space, const ConvexSet& set,
                     const SolveConfig& config, const std::optional<Point>& reference) {
  validate_common(f, space, set, config);
  config.error_schedule.validate_as_error();

  IterateTrace trace{config.x0, {}, TerminalStatus::kMaxIter, {}};
  Sampler probes(space, config.rng_seed, config.probe_radius, config.x0);
  Point x = config.x0;
  for (int k = 0; k < config.max_outer; ++k) {
    const double e = config.error_schedule.at(k);
    const double lambda = config.lambda_schedule.at(k);
    Point y = x;
    if (e > 0.0) {
      const Point probe = probes.point_near(x, config.probe_radius);
      const double d = space.distance(x, probe);
      if (d > 0.0) y = space.geodesic_point(x, probe, std::min(e, d) / d);
    }
    std::optional<ResolventResult> r;
    try {
      r = resolve(f, space, set, y, lambda, config, k);
    } catch (const Error& err) {
      trace.status = TerminalStatus::kSubproblemFailed;
      trace.failure = err.what();
      return trace;
    }

    const double step = space.distance(x, r->point);
    x = r->point;
    trace.records.push_back(
        IterateRecord{k + 1, x, step, r->residual, distance_to(space, x, reference), e, lambda, std::nullopt});
    if (step <= config.tol_step && residual_ok(r->residual, config.resolvent)) {
      trace.status = TerminalStatus::kConverged;
      break;
    }
  }
  return trace;
}

IterateTrace run_halpern(const Bifunction& f, const Space& space, const ConvexSet& set,
                         const SolveConfig& config, const std::optional<Point>& reference) {
  validate_common(f, space, set, config);
  config.alpha_schedule.validate_as_alpha();
  if (!config.anchor_u) throw Error(ErrorCode::kContractViolation, "Halpern iteration needs an anchor u");
  const Point& u = *config.anchor_u;
  space.require(u);

  IterateTrace trace{config.x0, {}, TerminalStatus::kMaxIter, {}};
  Point x = config.x0;
  for (int k = 1; k <= config.max_outer; ++k) {
    const double lambda = config.lambda_schedule.at(k - 1);
    const double alpha = config.alpha_schedule.at(k);
    std::optional<ResolventResult> r;
    try {
      r = resolve(f, space, set, x, lambda, config, k);
    } catch (const Error& err) {
      trace.status = TerminalStatus::kSubproblemFailed;
      trace.failure = err.what();
      return trace;
    }
    // alpha u (+) (1 - alpha) y: fraction alpha of the way from y to u.
    Point next = space.geodesic_point(r->point, u, alpha);
    const double step = space.distance(x, next);
    x = std::move(next);
    trace.records.push_back(
        IterateRecord{k, x, step, r->residual, distance_to(space, x, reference), 0.0, lambda, alpha});
    if (step <= config.tol_step && alpha <= config.tol_step && residual_ok(r->residual, config.resolvent)) {
      trace.status = TerminalStatus::kConverged;
      break;
    }
  }
  return trace;
}

IterateTrace run_resolvent_path(const Bifunction& f, const Space& space, const ConvexSet& set,
                                const Point& x, std::span<const double> lambdas,
                                const ResolventOptions& options, const std::optional<Point>& reference) {
  IterateTrace trace{x, {}, TerminalStatus::kConverged, {}};
  std::vector<Point> path;
  try {
    path = resolvent_path(f, space, set, x, lambdas, options);
  } catch (const Error& err) {
    if (err.code() == ErrorCode::kContractViolation || err.code() == ErrorCode::kEmptyInput) throw;
    trace.status = TerminalStatus::kSubproblemFailed;
    trace.failure = err.what();
    return trace;
  }
  const Point* prev = &x;
  for (std::size_t j = 0; j < path.size(); ++j) {
    const double r = residual(f, space, set, path[j], x, lambdas[j], options.residual_samples,
                              options.seed + j);
    trace.records.push_back(IterateRecord{static_cast<int>(j), path[j], space.distance(*prev, path[j]), r,
                                          distance_to(space, path[j], reference), 0.0, lambdas[j],
                                          std::nullopt});
    prev = &path[j];
  }
  return trace;
}

FejerReport fejer_report(const Space& space, const IterateTrace& trace, const Point& solution,
                         const Schedule& error_schedule, double slack) {
  FejerReport report{};
  report.max_excess = -std::numeric_limits<double>::infinity();
  report.distances.push_back(space.distance(trace.x0, solution));
  for (const auto& rec : trace.records) {
    const double prev = report.distances.back();
    const double cur = space.distance(rec.x, solution);
    const double excess = cur - prev - error_schedule.at(rec.k - 1);
    report.max_excess = std::max(report.max_excess, excess);
    if (excess > slack) report.violations.push_back(rec.k);
    report.distances.push_back(cur);
  }
  const std::size_t n = trace.records.size();
  if (n == 0) {
    report.max_excess = 0.0;
    return report;
  }
  const std::size_t quarter = std::max<std::size_t>(1, n / 4);
  auto mean_steps = [&](std::size_t begin, std::size_t end) {
    double s = 0.0;
    for (std::size_t i = begin; i < end; ++i) s += trace.records[i].step;
    return s / static_cast<double>(end - begin);
  };
  report.first_quartile_step_mean = mean_steps(0, quarter);
  report.last_quartile_step_mean = mean_steps(n - quarter, n);
  return report;
}

StrongModeReport strong_mode_check(const Bifunction& f, const Space& space, const ConvexSet& set,
                                   const SolveConfig& config, StrongMode mode, const Point& solution,
                                   double threshold, int samples) {
  double modulus = std::numeric_limits<double>::infinity();
  if (mode == StrongMode::kStrongPseudo) {
    SamplerConfig sc;
    sc.seed = config.rng_seed;
    sc.samples = samples;
    modulus = *check_property(f, space, set, PropertyKind::kStronglyPseudo, sc).estimate;
  } else {
    // Midpoint form of strong convexity: g(mid) <= (g(a) + g(b))/2 - (kappa/4) d^2(a,b).
    Sampler sampler(space, config.rng_seed, 2.0);
    for (int i = 0; i < samples; ++i) {
      const Point x = sampler.point_in(set);
      const Point a = sampler.point_in(set);
      const Point b = sampler.point_in(set);
      const double d = space.distance(a, b);
      if (d < 1e-6) continue;
      const Point m = space.geodesic_point(a, b, 0.5);
      const double gap = mode == StrongMode::kStrongConvexY ? 0.5 * f(x, a) + 0.5 * f(x, b) - f(x, m)
                                                            : f(m, x) - 0.5 * f(a, x) - 0.5 * f(b, x);
      modulus = std::min(modulus, gap / (0.25 * d * d));
    }
  }
  IterateTrace trace = run_ppa(f, space, set, config, solution);
  const double final_distance = space.distance(trace.final_point(), solution);
  return StrongModeReport{mode, modulus, final_distance, threshold, std::move(trace)};
}

}  // namespace hadeq
