#include "hadeq/sampling.hpp"

#include <cmath>
#include <variant>

#include "hadeq/error.hpp"

namespace hadeq {

Sampler::Sampler(Space space, std::uint64_t seed, double radius)
    : Sampler(space, seed, radius, space.origin()) {}

Sampler::Sampler(Space space, std::uint64_t seed, double radius, Point center)
    : space_(std::move(space)), rng_(seed), radius_(radius), center_(std::move(center)) {
  if (!(radius_ > 0.0)) throw Error(ErrorCode::kContractViolation, "sampler radius must be > 0");
  space_.require(center_);
}

double Sampler::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

int Sampler::uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

Eigen::VectorXd Sampler::unit_direction(int n) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(n);
  do {
    for (int i = 0; i < n; ++i) v(i) = normal(rng_);
  } while (v.norm() < 1e-12);
  return v / v.norm();
}

Point Sampler::tangent_ball(const Point& center, double radius) {
  const int n = space_.dim();
  const double r = radius * std::pow(uniform(), 1.0 / n);
  const Eigen::VectorXd dir = unit_direction(n);
  if (space_.kind() == SpaceKind::kEuclidean) return space_.exp_map(center, r * dir);
  // Embed the spatial direction and move it into the tangent space at center.
  Eigen::VectorXd ambient = Eigen::VectorXd::Zero(n + 1);
  ambient.tail(n) = dir;
  Eigen::VectorXd v = space_.to_tangent(center, ambient);
  const double norm = space_.tangent_norm(center, v);
  return space_.exp_map(center, (r / norm) * v);
}

Point Sampler::point() { return point_near(center_, radius_); }

Point Sampler::point_near(const Point& center, double radius) {
  if (space_.is_manifold()) return tangent_ball(center, radius);
  return Point::star_tree(uniform_int(0, space_.rays() - 1), uniform(0.0, radius));
}

Point Sampler::point_in(const ConvexSet& set) {
  const auto& v = set.variant();
  if (std::holds_alternative<WholeSpace>(v)) return point();
  if (const auto* s = std::get_if<Segment>(&v)) return space_.geodesic_point(s->a, s->b, uniform());
  if (space_.is_manifold()) {
    const auto& b = std::get<Ball>(v);
    return tangent_ball(b.center, b.radius);
  }
  // Star tree balls and subtrees: uniform over rays that meet the set.
  std::vector<std::pair<int, std::pair<double, double>>> rays;
  for (int r = 0; r < space_.rays(); ++r) {
    if (auto iv = ray_interval(space_, set, r); iv && iv->second > iv->first) rays.emplace_back(r, *iv);
  }
  if (rays.empty()) return project(space_, set, space_.origin());
  const auto& [ray, iv] = rays[static_cast<std::size_t>(uniform_int(0, static_cast<int>(rays.size()) - 1))];
  const double hi = std::min(iv.second, iv.first + radius_);
  return Point::star_tree(ray, uniform(iv.first, hi));
}

}  // namespace hadeq
