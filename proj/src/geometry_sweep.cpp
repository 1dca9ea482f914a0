#include "hadeq/geometry_sweep.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "hadeq/sampling.hpp"

namespace hadeq {

bool GeometrySweepReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const SweepCheck& c) { return c.passed(); });
}

namespace {

class Recorder {
 public:
  explicit Recorder(double tolerance) : tolerance_(tolerance) {}

  void record(const std::string& name, double margin, std::vector<Point> witness, double t = 0.0) {
    auto [it, inserted] = index_.try_emplace(name, checks_.size());
    if (inserted) {
      SweepCheck c;
      c.name = name;
      c.tolerance = tolerance_;
      c.worst = std::numeric_limits<double>::infinity();
      checks_.push_back(std::move(c));
    }
    SweepCheck& c = checks_[it->second];
    ++c.samples;
    if (margin < c.worst || std::isnan(margin)) {
      c.worst = std::isnan(margin) ? -std::numeric_limits<double>::infinity() : margin;
      c.witness = std::move(witness);
      c.witness_t = t;
    }
  }

  std::vector<SweepCheck> take() && { return std::move(checks_); }

 private:
  double tolerance_;
  std::map<std::string, std::size_t> index_;
  std::vector<SweepCheck> checks_;
};

}  // namespace

GeometrySweepReport sweep_geometry(const Space& space, const GeometrySweepConfig& config) {
  Sampler sampler(space, config.seed, config.radius);
  Recorder rec(config.tolerance);
  const bool flat = space.kind() == SpaceKind::kEuclidean;

  for (int i = 0; i < config.samples; ++i) {
    const Point x = sampler.point();
    const Point y = sampler.point();
    const Point z = sampler.point();
    const Point u = sampler.point();
    const double t = sampler.uniform();
    const double s = sampler.uniform();

    const double dxy = space.distance(x, y);
    const double dyx = space.distance(y, x);
    const double dyz = space.distance(y, z);
    const double dxz = space.distance(x, z);

    rec.record("metric_symmetry", -std::abs(dxy - dyx), {x, y});
    rec.record("metric_identity", -space.distance(x, x), {x});
    rec.record("triangle_inequality", dxy + dyz - dxz, {x, y, z});

    const Point gt = space.geodesic_point(x, y, t);
    const Point gs = space.geodesic_point(x, y, s);
    rec.record("geodesic_endpoints",
               -std::abs(space.distance(x, gt) - t * dxy) - std::abs(space.distance(y, gt) - (1.0 - t) * dxy),
               {x, y}, t);
    rec.record("convex_distance", (1.0 - t) * dxz + t * dyz - space.distance(gt, z), {x, y, z}, t);
    rec.record("geodesic_isometry", -std::abs(space.distance(gt, gs) - std::abs(t - s) * dxy), {x, y}, t);
    rec.record("geodesic_contraction",
               t * dxy - space.distance(space.geodesic_point(z, x, t), space.geodesic_point(z, y, t)),
               {x, y, z}, t);
    const double cat0 = check_cat0_inequality(space, x, y, z, t);
    rec.record("cat0_inequality", cat0, {x, y, z}, t);

    const double q = space.quasilinearization(x, y, z, u);
    rec.record("quasilinear_symmetry", -std::abs(q - space.quasilinearization(z, u, x, y)), {x, y, z, u});
    rec.record("quasilinear_antisymmetry", -std::abs(q + space.quasilinearization(y, x, z, u)), {x, y, z, u});
    const Point w = sampler.point();
    rec.record("quasilinear_additivity",
               -std::abs(space.quasilinearization(x, w, z, u) + space.quasilinearization(w, y, z, u) - q),
               {x, y, z, u, w});
    rec.record("cauchy_schwarz", check_cauchy_schwarz(space, x, y, z, u), {x, y, z, u});

    if (flat) {
      rec.record("flat_cat0_equality", -std::abs(cat0), {x, y, z}, t);
      // <xy, x(t z (+) (1-t) u)> = t <xy,xz> + (1-t) <xy,xu>
      const Point m = space.geodesic_point(u, z, t);
      const double lhs = space.quasilinearization(x, y, x, m);
      const double rhs =
          t * space.quasilinearization(x, y, x, z) + (1.0 - t) * space.quasilinearization(x, y, x, u);
      rec.record("flat_affine_identity", -std::abs(lhs - rhs), {x, y, z, u}, t);
    }
  }
  return GeometrySweepReport{space.kind(), std::move(rec).take()};
}

}  // namespace hadeq
