#include "hadeq/property_check.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "hadeq/error.hpp"
#include "hadeq/sampling.hpp"

namespace hadeq {

namespace {

constexpr std::array<std::pair<PropertyKind, const char*>, 11> kNames{{
    {PropertyKind::kP1, "P1"},
    {PropertyKind::kMonotone, "P4_MONOTONE"},
    {PropertyKind::kPseudoMonotone, "P4STAR_PSEUDO"},
    {PropertyKind::kUndermonotone, "P4BULLET_UNDER"},
    {PropertyKind::kStronglyMonotone, "STRONG_MONO"},
    {PropertyKind::kStronglyPseudo, "STRONG_PSEUDO"},
    {PropertyKind::kCyclicMonotone, "CYCLIC_MONO"},
    {PropertyKind::kProperlyQuasiMonotone, "PROPERLY_QUASI_MONO"},
    {PropertyKind::kConvexInSecond, "CONVEX_IN_Y"},
    {PropertyKind::kFirmlyNonexpansive, "FIRMLY_NONEXPANSIVE"},
    {PropertyKind::kNonexpansive, "NONEXPANSIVE"},
}};

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Tracks the largest violation and the tuple that produced it.
struct Worst {
  double value = kNegInf;
  std::vector<Point> witness;

  void offer(double v, std::vector<Point> w) {
    if (v > value || std::isnan(v)) {
      value = std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
      witness = std::move(w);
    }
  }
};

PropertyReport finish(PropertyKind kind, int samples, Worst worst,
                      std::optional<double> estimate = std::nullopt) {
  PropertyReport r;
  r.property = kind;
  r.samples = samples;
  r.worst_violation = worst.value == kNegInf ? 0.0 : worst.value;
  r.estimate = estimate;
  if (!worst.witness.empty()) r.witnesses.push_back(std::move(worst.witness));
  return r;
}

}  // namespace

const char* to_string(PropertyKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "UNKNOWN";
}

std::optional<PropertyKind> property_from_string(const std::string& name) {
  for (const auto& [k, n] : kNames) {
    if (name == n) return k;
  }
  return std::nullopt;
}

PropertyReport check_property(const Bifunction& f, const Space& space, const ConvexSet& set,
                              PropertyKind property, const SamplerConfig& config) {
  set.validate(space);
  if (config.samples < 1) throw Error(ErrorCode::kContractViolation, "property check needs samples >= 1");
  Sampler sampler(space, config.seed, config.radius);
  const int n = config.samples;
  Worst worst;

  switch (property) {
    case PropertyKind::kP1: {
      for (int i = 0; i < n; ++i) {
        const Point x = sampler.point_in(set);
        worst.offer(std::abs(f(x, x)), {x});
      }
      return finish(property, n, std::move(worst));
    }
    case PropertyKind::kMonotone: {
      for (int i = 0; i < n; ++i) {
        const Point x = sampler.point_in(set);
        const Point y = sampler.point_in(set);
        worst.offer(f(x, y) + f(y, x), {x, y});
      }
      return finish(property, n, std::move(worst));
    }
    case PropertyKind::kPseudoMonotone: {
      for (int i = 0; i < n; ++i) {
        const Point x = sampler.point_in(set);
        const Point y = sampler.point_in(set);
        const double fxy = f(x, y);
        const double fyx = f(y, x);
        if (fxy >= 0.0) worst.offer(fyx, {x, y});
        if (fyx >= 0.0) worst.offer(fxy, {y, x});
      }
      return finish(property, n, std::move(worst));
    }
    case PropertyKind::kUndermonotone:
    case PropertyKind::kStronglyMonotone: {
      // sup (f(x,y) + f(y,x)) / d^2(x,y)
      double sup_ratio = kNegInf;
      std::vector<Point> witness;
      int used = 0;
      for (int i = 0; i < n; ++i) {
        const Point x = sampler.point_in(set);
        const Point y = sampler.point_in(set);
        const double d = space.distance(x, y);
        if (d < config.min_separation) continue;
        ++used;
        const double ratio = (f(x, y) + f(y, x)) / (d * d);
        if (ratio > sup_ratio) {
          sup_ratio = ratio;
          witness = {x, y};
        }
      }
      if (used == 0) throw Error(ErrorCode::kEmptyInput, "all sampled pairs were degenerate");
      Worst w;
      if (property == PropertyKind::kUndermonotone) {
        const double theta = std::max(0.0, sup_ratio);
        w.offer(theta - config.declared, std::move(witness));
        return finish(property, used, std::move(w), theta);
      }
      const double alpha = -sup_ratio;
      w.offer(config.declared - alpha, std::move(witness));
      return finish(property, used, std::move(w), alpha);
    }
    case PropertyKind::kStronglyPseudo: {
      // inf over pairs with f(x,y) >= 0 of -f(y,x) / d^2(x,y)
      double beta = std::numeric_limits<double>::infinity();
      std::vector<Point> witness;
      int used = 0;
      auto consider = [&](const Point& a, const Point& b, double fab, double fba, double d) {
        if (fab < 0.0) return;
        ++used;
        const double ratio = -fba / (d * d);
        if (ratio < beta) {
          beta = ratio;
          witness = {a, b};
        }
      };
      for (int i = 0; i < n; ++i) {
        const Point x = sampler.point_in(set);
        const Point y = sampler.point_in(set);
        const double d = space.distance(x, y);
        if (d < config.min_separation) continue;
        const double fxy = f(x, y);
        const double fyx = f(y, x);
        consider(x, y, fxy, fyx, d);
        consider(y, x, fyx, fxy, d);
      }
      if (used == 0) throw Error(ErrorCode::kEmptyInput, "no sampled pair satisfied f(x,y) >= 0");
      Worst w;
      w.offer(config.declared - beta, std::move(witness));
      return finish(property, used, std::move(w), beta);
    }
    case PropertyKind::kCyclicMonotone: {
      const int max_len = std::max(2, config.max_cycle_length);
      for (int i = 0; i < n; ++i) {
        const int len = sampler.uniform_int(2, max_len);
        std::vector<Point> cycle;
        cycle.reserve(static_cast<std::size_t>(len));
        for (int j = 0; j < len; ++j) cycle.push_back(sampler.point_in(set));
        double sum = 0.0;
        for (int j = 0; j < len; ++j) sum += f(cycle[j], cycle[(j + 1) % len]);
        worst.offer(sum, std::move(cycle));
      }
      return finish(property, n, std::move(worst));
    }
    case PropertyKind::kProperlyQuasiMonotone: {
      // Finite surrogate for conv(A): a few rounds of the iterated-segment
      // construction C_{n+1}(A) = union of geodesics between points of C_n(A).
      const int sets = std::max(1, n / 10);
      int tested = 0;
      for (int i = 0; i < sets; ++i) {
        const int size = sampler.uniform_int(1, std::max(1, config.max_hull_set));
        std::vector<Point> a;
        for (int j = 0; j < size; ++j) a.push_back(sampler.point_in(set));
        std::vector<Point> hull = a;
        for (int round = 0; round < config.hull_rounds; ++round) {
          const std::size_t current = hull.size();
          for (int j = 0; j < size + 2; ++j) {
            const auto p = static_cast<std::size_t>(sampler.uniform_int(0, static_cast<int>(current) - 1));
            const auto q = static_cast<std::size_t>(sampler.uniform_int(0, static_cast<int>(current) - 1));
            hull.push_back(space.geodesic_point(hull[p], hull[q], sampler.uniform()));
          }
        }
        for (std::size_t k = a.size(); k < hull.size(); ++k) {
          double smallest = std::numeric_limits<double>::infinity();
          for (const Point& x : a) smallest = std::min(smallest, f(x, hull[k]));
          std::vector<Point> w = a;
          w.push_back(hull[k]);
          worst.offer(smallest, std::move(w));
          ++tested;
        }
      }
      return finish(property, tested, std::move(worst));
    }
    case PropertyKind::kConvexInSecond: {
      for (int i = 0; i < n; ++i) {
        const Point x = sampler.point_in(set);
        const Point y = sampler.point_in(set);
        const Point z = sampler.point_in(set);
        const Point m = space.geodesic_point(y, z, 0.5);
        worst.offer(f(x, m) - 0.5 * f(x, y) - 0.5 * f(x, z), {x, y, z});
      }
      return finish(property, n, std::move(worst));
    }
    case PropertyKind::kFirmlyNonexpansive:
    case PropertyKind::kNonexpansive:
      break;
  }
  throw Error(ErrorCode::kUnsupported,
              std::string("property ") + to_string(property) + " is checked on resolvents, not bifunctions");
}

}  // namespace hadeq
