#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hadeq/bifunction.hpp"

namespace hadeq {

enum class PropertyKind {
  kP1,                    // f(x,x) = 0
  kMonotone,              // P4: f(x,y) + f(y,x) <= 0
  kPseudoMonotone,        // P4*: f(x,y) >= 0 => f(y,x) <= 0
  kUndermonotone,         // P4-bullet: estimate theta
  kStronglyMonotone,      // estimate alpha
  kStronglyPseudo,        // estimate beta
  kCyclicMonotone,
  kProperlyQuasiMonotone,
  kConvexInSecond,        // geodesic midpoint convexity of f(x, .)
  kFirmlyNonexpansive,    // resolvent map, see resolvent.hpp
  kNonexpansive,
};

const char* to_string(PropertyKind kind);
std::optional<PropertyKind> property_from_string(const std::string& name);

/// Worst signed violation of a sampled property.
///
/// worst_violation <= 0 means no violation was found. For the estimating
/// properties (undermonotone, strongly monotone, strongly pseudo-monotone)
/// `estimate` holds the sampled constant and worst_violation is measured
/// against the declared constant in the sampler configuration.
struct PropertyReport {
  PropertyKind property = PropertyKind::kP1;
  int samples = 0;
  double worst_violation = 0.0;
  std::optional<double> estimate;
  std::vector<std::vector<Point>> witnesses;

  bool holds(double tolerance) const { return worst_violation <= tolerance; }
};

struct SamplerConfig {
  std::uint64_t seed = 0;
  int samples = 10000;
  double radius = 2.0;
  /// Declared theta / alpha / beta for the estimating properties.
  double declared = 0.0;
  /// Pairs closer than this are skipped by ratio-based estimates.
  double min_separation = 1e-6;
  int max_cycle_length = 6;
  int max_hull_set = 4;
  int hull_rounds = 3;
};

PropertyReport check_property(const Bifunction& f, const Space& space, const ConvexSet& set,
                              PropertyKind property, const SamplerConfig& config = {});

}  // namespace hadeq
