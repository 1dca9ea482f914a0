#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "hadeq/error.hpp"
#include "hadeq/geometry_sweep.hpp"
#include "hadeq/sampling.hpp"
#include "hadeq/space.hpp"
#include "support/oracles.hpp"
#include "support/points.hpp"

using namespace hadeq;
using testing_support::E;
using testing_support::H;
using testing_support::T;

namespace {

std::vector<Space> all_spaces() { return {Space::euclidean(3), Space::hyperboloid(2), Space::star_tree(5)}; }

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kParse;
}

}  // namespace

TEST(Distance, EuclideanPythagoras) {
  EXPECT_DOUBLE_EQ(Space::euclidean(2).distance(E({0, 0}), E({3, 4})), 5.0);
}

TEST(Distance, StarTreePathsThroughOrigin) {
  const Space s = Space::star_tree(3);
  EXPECT_DOUBLE_EQ(s.distance(T(0, 1), T(1, 2)), 3.0);
  EXPECT_DOUBLE_EQ(s.distance(T(0, 1), T(0, 2.5)), 1.5);
}

TEST(Distance, HyperboloidUnitGeodesic) {
  const Space s = Space::hyperboloid(2);
  const Point p = Point::hyperboloid(oracle::vec({1, 0, 0}));
  const Point q = Point::hyperboloid(oracle::vec({std::cosh(1.0), std::sinh(1.0), 0}));
  EXPECT_NEAR(s.distance(p, q), 1.0, 1e-14);
  EXPECT_NEAR(oracle::hyp_arclength(p.coords(), q.coords()), 1.0, 1e-8);
}

TEST(Distance, HyperboloidMatchesArccoshFormula) {
  const Space s = Space::hyperboloid(3);
  Sampler sampler(s, 7, 3.0);
  for (int i = 0; i < 500; ++i) {
    const Point p = sampler.point();
    const Point q = sampler.point();
    EXPECT_NEAR(s.distance(p, q), oracle::hyp_dist(p.coords(), q.coords()), 1e-9);
  }
}

TEST(Distance, CoincidentHyperboloidPointsStayAccurate) {
  const Space s = Space::hyperboloid(2);
  const Point p = H({0.3, -0.2});
  const Point q = H({0.3 + 1e-9, -0.2});
  const double d = s.distance(p, q);
  EXPECT_GT(d, 0.0);
  // Metric in spatial coordinates: I - x x^T / (1 + |x|^2).
  EXPECT_NEAR(d, 1e-9 * std::sqrt(1.0 - 0.09 / 1.13), 1e-14);
  EXPECT_EQ(s.distance(p, p), 0.0);
}

TEST(Distance, KindMismatchIsAContractViolation) {
  const Space s = Space::euclidean(2);
  EXPECT_EQ(code_of([&] { s.distance(E({0, 0}), T(0, 1)); }), ErrorCode::kContractViolation);
  EXPECT_EQ(code_of([&] { s.distance(E({0, 0}), E({1, 2, 3})); }), ErrorCode::kContractViolation);
  EXPECT_EQ(code_of([&] { Space::star_tree(3).distance(T(0, 1), T(3, 1)); }), ErrorCode::kContractViolation);
}

TEST(SpaceConstruction, RejectsDegenerateParameters) {
  EXPECT_EQ(code_of([] { Space::euclidean(0); }), ErrorCode::kContractViolation);
  EXPECT_EQ(code_of([] { Space::hyperboloid(0); }), ErrorCode::kContractViolation);
  EXPECT_EQ(code_of([] { Space::star_tree(1); }), ErrorCode::kContractViolation);
}

TEST(Points, StarTreeOriginIsCanonical) {
  const Point o = T(2, 0.0);
  EXPECT_EQ(o.ray(), 0);
  EXPECT_EQ(o, T(0, 0.0));
  EXPECT_EQ(code_of([] { T(1, -0.5); }), ErrorCode::kContractViolation);
}

TEST(Points, HyperboloidConstructionNormalizes) {
  const Point p = Point::hyperboloid(oracle::vec({2.0, 1.0, 1.0}) * 1.0000001);
  EXPECT_NEAR(minkowski(p.coords(), p.coords()), -1.0, 1e-12);
  EXPECT_EQ(code_of([] { Point::hyperboloid(oracle::vec({-1.0, 0.0, 0.0})); }), ErrorCode::kContractViolation);
}

TEST(Geodesic, EndpointsAreExact) {
  for (const Space& s : all_spaces()) {
    Sampler sampler(s, 3);
    const Point p = sampler.point();
    const Point q = sampler.point();
    EXPECT_EQ(s.geodesic_point(p, q, 0.0), p) << to_string(s.kind());
    EXPECT_EQ(s.geodesic_point(p, q, 1.0), q) << to_string(s.kind());
  }
}

TEST(Geodesic, RejectsParameterOutsideUnitInterval) {
  const Space s = Space::euclidean(1);
  EXPECT_EQ(code_of([&] { s.geodesic_point(E({0}), E({1}), 1.5); }), ErrorCode::kContractViolation);
  EXPECT_EQ(code_of([&] { s.geodesic_point(E({0}), E({1}), -0.1); }), ErrorCode::kContractViolation);
}

TEST(Geodesic, EuclideanIsStraightLine) {
  const Space s = Space::euclidean(2);
  const Point g = s.geodesic_point(E({1, 2}), E({3, -2}), 0.25);
  EXPECT_NEAR(g.coords()[0], 1.5, 1e-15);
  EXPECT_NEAR(g.coords()[1], 1.0, 1e-15);
}

TEST(Geodesic, StarTreeMidpointCrossesOrigin) {
  const Point m = Space::star_tree(3).geodesic_point(T(0, 2), T(1, 1), 0.5);
  EXPECT_EQ(m.ray(), 0);
  EXPECT_DOUBLE_EQ(m.radius(), 0.5);
}

TEST(Geodesic, StarTreeMatchesPathWalk) {
  const Space s = Space::star_tree(4);
  Sampler sampler(s, 11, 3.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const Point p = sampler.point();
    const Point q = sampler.point();
    const double t = unit(rng);
    const Point g = s.geodesic_point(p, q, t);
    const auto o = oracle::tree_geodesic(testing_support::tree_pt(p), testing_support::tree_pt(q), t);
    EXPECT_NEAR(s.distance(g, Point::star_tree(o.ray, o.r)), 0.0, 1e-12);
  }
}

TEST(Geodesic, HyperboloidMatchesSinhInterpolation) {
  const Space s = Space::hyperboloid(2);
  Sampler sampler(s, 12, 2.5);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const Point p = sampler.point();
    const Point q = sampler.point();
    const double t = unit(rng);
    const Point g = s.geodesic_point(p, q, t);
    const oracle::Vec o = oracle::hyp_geodesic(p.coords(), q.coords(), t);
    EXPECT_LT((g.coords() - o).norm(), 1e-9);
    EXPECT_NEAR(minkowski(g.coords(), g.coords()), -1.0, 1e-9);
  }
}

TEST(Geodesic, SplitsDistanceProportionally) {
  for (const Space& s : all_spaces()) {
    Sampler sampler(s, 21);
    for (int i = 0; i < 500; ++i) {
      const Point p = sampler.point();
      const Point q = sampler.point();
      const double t = sampler.uniform();
      const Point g = s.geodesic_point(p, q, t);
      const double d = s.distance(p, q);
      EXPECT_NEAR(s.distance(p, g), t * d, 1e-9);
      EXPECT_NEAR(s.distance(g, q), (1 - t) * d, 1e-9);
    }
  }
}

TEST(Quasilinearization, SelfPairingIsSquaredDistance) {
  for (const Space& s : all_spaces()) {
    Sampler sampler(s, 31);
    for (int i = 0; i < 200; ++i) {
      const Point a = sampler.point();
      const Point b = sampler.point();
      EXPECT_NEAR(s.quasilinearization(a, b, a, b), s.squared_distance(a, b), 1e-9);
    }
  }
}

TEST(Quasilinearization, EuclideanIsDotProduct) {
  const Space s = Space::euclidean(2);
  EXPECT_NEAR(s.quasilinearization(E({0, 0}), E({1, 0}), E({0, 0}), E({0, 1})), 0.0, 1e-15);
  EXPECT_NEAR(s.quasilinearization(E({1, 1}), E({3, 2}), E({0, 0}), E({-1, 4})), 2 * -1 + 1 * 4, 1e-12);
}

TEST(Quasilinearization, AntisymmetricInFirstPair) {
  for (const Space& s : all_spaces()) {
    Sampler sampler(s, 41);
    for (int i = 0; i < 500; ++i) {
      const Point a = sampler.point(), b = sampler.point(), c = sampler.point(), d = sampler.point();
      EXPECT_NEAR(s.quasilinearization(a, b, c, d), -s.quasilinearization(b, a, c, d), 1e-9);
    }
  }
}

TEST(Cat0Inequality, EuclideanHoldsWithEquality) {
  const Space s = Space::euclidean(3);
  Sampler sampler(s, 51);
  for (int i = 0; i < 1000; ++i) {
    const double defect = check_cat0_inequality(s, sampler.point(), sampler.point(), sampler.point(), sampler.uniform());
    EXPECT_LE(std::abs(defect), 1e-9);
  }
}

TEST(Cat0Inequality, StarTreeTripodDefect) {
  // Midpoint of x and y is the origin, one unit from z: defect 2 + 2 - 1 - 1.
  const double defect = check_cat0_inequality(Space::star_tree(3), T(0, 1), T(1, 1), T(2, 1), 0.5);
  EXPECT_DOUBLE_EQ(defect, 2.0);
}

TEST(Cat0Inequality, HyperboloidNeverNegative) {
  const Space s = Space::hyperboloid(2);
  Sampler sampler(s, 52, 3.0);
  double worst = 1.0;
  for (int i = 0; i < 10000; ++i) {
    worst = std::min(worst, check_cat0_inequality(s, sampler.point(), sampler.point(), sampler.point(), sampler.uniform()));
  }
  EXPECT_GE(worst, -1e-9);
}

TEST(CauchySchwarz, DegenerateAndAlignedCasesAreTight) {
  const Space e = Space::euclidean(2);
  EXPECT_DOUBLE_EQ(check_cauchy_schwarz(e, E({1, 1}), E({1, 1}), E({0, 0}), E({2, 5})), 0.0);
  EXPECT_NEAR(check_cauchy_schwarz(e, E({0, 0}), E({1, 1}), E({2, 2}), E({4, 4})), 0.0, 1e-12);
}

TEST(CauchySchwarz, NeverNegativeOnRandomQuadruples) {
  for (const Space& s : all_spaces()) {
    Sampler sampler(s, 61);
    double worst = 1.0;
    for (int i = 0; i < 10000; ++i) {
      worst = std::min(worst, check_cauchy_schwarz(s, sampler.point(), sampler.point(), sampler.point(), sampler.point()));
    }
    EXPECT_GE(worst, -1e-9) << to_string(s.kind());
  }
}

TEST(LogExp, LogOfBaseIsZero) {
  const Space h = Space::hyperboloid(2);
  const Point p = H({0.4, 1.2});
  EXPECT_LT(h.log_map(p, p).norm(), 1e-15);
}

TEST(LogExp, EuclideanLogIsDifference) {
  const Space e = Space::euclidean(3);
  const Eigen::VectorXd v = e.log_map(E({1, 2, 3}), E({0, 5, -1}));
  EXPECT_LT((v - oracle::vec({-1, 3, -4})).norm(), 1e-15);
}

TEST(LogExp, HyperboloidRoundTrip) {
  const Space s = Space::hyperboloid(2);
  Sampler sampler(s, 71, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const Point b = sampler.point();
    const Point q = sampler.point();
    const Eigen::VectorXd v = s.log_map(b, q);
    EXPECT_NEAR(s.tangent_norm(b, v), s.distance(b, q), 1e-8);
    EXPECT_LT(s.distance(s.exp_map(b, v), q), 1e-8);
    EXPECT_LT((v - oracle::hyp_log(b.coords(), q.coords())).norm(), 1e-8);
  }
}

TEST(LogExp, StarTreeIsUnsupported) {
  const Space s = Space::star_tree(3);
  EXPECT_EQ(code_of([&] { s.log_map(T(0, 1), T(1, 1)); }), ErrorCode::kUnsupported);
  EXPECT_EQ(code_of([&] { s.exp_map(T(0, 1), oracle::vec({1})); }), ErrorCode::kUnsupported);
}

TEST(AsymptoticCenter, ConstantTailPicksThePoint) {
  const Space s = Space::euclidean(2);
  const std::vector<Point> tail{E({1, 2}), E({1, 2}), E({1, 2})};
  const std::vector<Point> candidates{E({0, 0}), E({1, 2}), E({3, 3})};
  EXPECT_EQ(estimate_asymptotic_center(s, tail, candidates), E({1, 2}));
}

TEST(AsymptoticCenter, GridCandidatesFindTheMidpoint) {
  const Space s = Space::euclidean(2);
  const std::vector<Point> tail{E({-1, 0}), E({1, 0})};
  std::vector<Point> grid;
  const double h = 0.01;
  for (int i = -100; i <= 100; ++i) {
    for (int j = -100; j <= 100; ++j) grid.push_back(E({i * h + 0.003, j * h - 0.004}));
  }
  const Point c = estimate_asymptotic_center(s, tail, grid);
  EXPECT_LE(s.distance(c, E({0, 0})), h);
}

TEST(AsymptoticCenter, SingletonAndEmptyInputs) {
  const Space s = Space::star_tree(3);
  const std::vector<Point> tail{T(0, 1), T(1, 4)};
  const std::vector<Point> one{T(2, 7)};
  EXPECT_EQ(estimate_asymptotic_center(s, tail, one), T(2, 7));
  EXPECT_EQ(code_of([&] { estimate_asymptotic_center(s, {}, one); }), ErrorCode::kEmptyInput);
  EXPECT_EQ(code_of([&] { estimate_asymptotic_center(s, tail, {}); }), ErrorCode::kEmptyInput);
}

class SweepTest : public ::testing::TestWithParam<int> {};

TEST_P(SweepTest, GenuineSpacesPassEveryCheck) {
  const Space s = all_spaces()[GetParam()];
  GeometrySweepConfig config;
  config.samples = 2000;
  config.seed = 99;
  const GeometrySweepReport report = sweep_geometry(s, config);
  for (const auto& c : report.checks) EXPECT_TRUE(c.passed()) << c.name << " worst " << c.worst;
  EXPECT_TRUE(report.passed());
}

INSTANTIATE_TEST_SUITE_P(AllSpaces, SweepTest, ::testing::Values(0, 1, 2));

TEST(Sweep, EuclideanRunsTheFlatChecks) {
  GeometrySweepConfig config;
  config.samples = 200;
  const GeometrySweepReport report = sweep_geometry(Space::euclidean(2), config);
  std::vector<std::string> names;
  for (const auto& c : report.checks) names.push_back(c.name);
  EXPECT_NE(std::find(names.begin(), names.end(), "flat_cat0_equality"), names.end());
  EXPECT_NE(std::find(names.begin(), names.end(), "flat_affine_identity"), names.end());
  const GeometrySweepReport h = sweep_geometry(Space::hyperboloid(2), config);
  for (const auto& c : h.checks) EXPECT_NE(c.name.rfind("flat_", 0), 0u) << c.name;
}

TEST(Sweep, CorruptedMetricFailsWithWitness) {
  for (const Space& s : all_spaces()) {
    const Space bad = s.with_metric_corruption(MetricCorruption{1.5, 1.0});
    GeometrySweepConfig config;
    config.samples = 500;
    const GeometrySweepReport report = sweep_geometry(bad, config);
    EXPECT_FALSE(report.passed()) << to_string(s.kind());
    bool witnessed = false;
    for (const auto& c : report.checks) witnessed = witnessed || (!c.passed() && !c.witness.empty());
    EXPECT_TRUE(witnessed);
  }
}
