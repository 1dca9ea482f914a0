#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hadeq/bifunction.hpp"
#include "hadeq/resolvent.hpp"
#include "hadeq/schedule.hpp"

namespace hadeq {

struct SolveConfig {
  Point x0;
  Schedule lambda_schedule = Schedule::constant(1.0);
  Schedule error_schedule = Schedule::constant(0.0);
  /// Halpern only.
  Schedule alpha_schedule = Schedule::harmonic();
  /// Halpern anchor u.
  std::optional<Point> anchor_u{};
  int max_outer = 1000;
  double tol_step = 1e-8;
  ResolventOptions resolvent{};
  std::uint64_t rng_seed = 0;
  /// Radius of the ball the inexactness probe is drawn from.
  double probe_radius = 1.0;
};

enum class TerminalStatus { kConverged, kMaxIter, kSubproblemFailed };

const char* to_string(TerminalStatus status);

struct IterateRecord {
  int k;
  Point x;
  /// d(x_{k-1}, x_k)
  double step;
  /// Sampled residual of the subproblem solved at this iteration.
  double residual;
  std::optional<double> dist_to_ref;
  double e_k;
  double lambda_k;
  std::optional<double> alpha_k;
};

struct IterateTrace {
  Point x0;
  std::vector<IterateRecord> records;
  TerminalStatus status = TerminalStatus::kMaxIter;
  std::string failure;

  const Point& final_point() const { return records.empty() ? x0 : records.back().x; }
};

/// Inexact proximal point method. Given x_k, y_k is x_k moved a distance
/// min(e_k, d(x_k, probe)) toward a seeded random probe, and x_{k+1} is the
/// resolvent of f at y_k with parameter lambda_k. e == 0 is the exact method.
IterateTrace run_ppa(const Bifunction& f, const Space& space, const ConvexSet& set,
                     const SolveConfig& config, const std::optional<Point>& reference = std::nullopt);

/// Halpern-regularized proximal point method:
///   y_k = J_{lambda_{k-1}} x_{k-1},  x_k = alpha_k u (+) (1 - alpha_k) y_k.
IterateTrace run_halpern(const Bifunction& f, const Space& space, const ConvexSet& set,
                         const SolveConfig& config,
                         const std::optional<Point>& reference = std::nullopt);

/// Resolvent path as a trace: record j holds J_{lambda_j} x with step measured
/// from the previous path point (from x for j = 0).
IterateTrace run_resolvent_path(const Bifunction& f, const Space& space, const ConvexSet& set,
                                const Point& x, std::span<const double> lambdas,
                                const ResolventOptions& options,
                                const std::optional<Point>& reference = std::nullopt);

struct FejerReport {
  /// d(x_k, x*) for k = 0..N.
  std::vector<double> distances;
  /// Indices k where d(x_k, x*) > d(x_{k-1}, x*) + e_{k-1} + slack.
  std::vector<int> violations;
  double max_excess;
  double first_quartile_step_mean;
  double last_quartile_step_mean;

  bool quasi_fejer() const { return violations.empty(); }
  bool steps_vanishing() const { return last_quartile_step_mean <= first_quartile_step_mean; }
};

FejerReport fejer_report(const Space& space, const IterateTrace& trace, const Point& solution,
                         const Schedule& error_schedule, double slack = 1e-8);

enum class StrongMode { kStrongPseudo, kStrongConvexY, kStrongConcaveX };

const char* to_string(StrongMode mode);

struct StrongModeReport {
  StrongMode mode;
  /// Sampled modulus: beta for STRONG_PSEUDO, the midpoint strong convexity
  /// (concavity) constant otherwise. Positive means the mode holds on samples.
  double modulus_estimate;
  double final_distance;
  double threshold;
  IterateTrace trace;

  bool mode_verified() const { return modulus_estimate > 0.0; }
  bool converged() const { return final_distance <= threshold; }
};

/// Runs the proximal point method on an instance built to satisfy one of the
/// strong-convergence conditions and measures d(x_N, solution).
StrongModeReport strong_mode_check(const Bifunction& f, const Space& space, const ConvexSet& set,
                                   const SolveConfig& config, StrongMode mode,
                                   const Point& solution, double threshold = 1e-6,
                                   int samples = 2000);

}  // namespace hadeq
