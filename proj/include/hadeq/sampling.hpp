#pragma once

#include <cstdint>
#include <random>

#include "hadeq/convex_set.hpp"
#include "hadeq/space.hpp"

namespace hadeq {

/// Seeded, deterministic point sampler.
///
/// Manifold kinds draw uniformly from a tangent ball of `radius` around
/// `center` pushed through exp; the star tree draws a uniform ray and a
/// uniform radius in [0, radius]. Draws restricted to a ConvexSet are taken
/// directly from the set (segments by a uniform geodesic parameter, balls by
/// the same tangent-ball rule, subtrees by uniform ray and radius).
class Sampler {
 public:
  Sampler(Space space, std::uint64_t seed, double radius = 2.0);
  Sampler(Space space, std::uint64_t seed, double radius, Point center);

  Point point();
  Point point_in(const ConvexSet& set);
  Point point_near(const Point& center, double radius);

  double uniform(double lo = 0.0, double hi = 1.0);
  int uniform_int(int lo, int hi);  // inclusive

  std::mt19937_64& engine() { return rng_; }
  const Space& space() const { return space_; }

 private:
  Eigen::VectorXd unit_direction(int n);
  Point tangent_ball(const Point& center, double radius);

  Space space_;
  std::mt19937_64 rng_;
  double radius_;
  Point center_;
};

}  // namespace hadeq
