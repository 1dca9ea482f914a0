#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "hadeq/error.hpp"
#include "hadeq/resolvent.hpp"
#include "hadeq/sampling.hpp"
#include "support/oracles.hpp"
#include "support/points.hpp"

using namespace hadeq;
using testing_support::E;
using testing_support::H;
using testing_support::T;

namespace {

std::vector<Space> all_spaces() { return {Space::euclidean(2), Space::hyperboloid(2), Space::star_tree(3)}; }

Point anchor_for(const Space& s) {
  switch (s.kind()) {
    case SpaceKind::kEuclidean: return E({0.8, -0.4});
    case SpaceKind::kHyperboloid: return H({0.8, -0.4});
    case SpaceKind::kStarTree: return T(1, 0.9);
  }
  return s.origin();
}

Point start_for(const Space& s) {
  switch (s.kind()) {
    case SpaceKind::kEuclidean: return E({-0.5, 0.6});
    case SpaceKind::kHyperboloid: return H({-0.5, 0.6});
    case SpaceKind::kStarTree: return T(2, 0.6);
  }
  return s.origin();
}

ResolventOptions with(std::optional<ResolventStrategy> strategy) {
  ResolventOptions o;
  o.strategy = strategy;
  return o;
}

ResolventResult solve(const Bifunction& f, const Space& s, const ConvexSet& K, const Point& anchor, double lambda,
                      ResolventOptions options = {}) {
  return solve_resolvent(ResolventRequest{f, s, K, anchor, lambda, options, std::nullopt, std::nullopt});
}

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

TEST(Resolvent, HalfSquaredDistanceGivesTheMidpointAtLambdaOne) {
  for (const Space& s : all_spaces()) {
    const Point a = anchor_for(s);
    const Point x = start_for(s);
    const Bifunction f = make_minimization_bifunction(s, half_squared_distance(s, a));
    const Point grid = testing_support::grid_resolvent_half_squared(x, a, 1.0);
    for (auto strategy : {ResolventStrategy::kAnalytic, ResolventStrategy::kProxDescent}) {
      const ResolventResult r = solve(f, s, ConvexSet::whole_space(), x, 1.0, with(strategy));
      EXPECT_EQ(r.strategy_used, strategy);
      EXPECT_LE(s.distance(r.point, s.geodesic_point(x, a, 0.5)), 1e-6) << to_string(s.kind());
      EXPECT_LE(s.distance(r.point, grid), 1e-6) << to_string(s.kind());
      EXPECT_GE(r.residual, -1e-8);
    }
  }
}

TEST(Resolvent, AnalyticAndProxDescentAgreeAcrossLambdas) {
  for (const Space& s : all_spaces()) {
    const Point a = anchor_for(s);
    const Bifunction f = make_minimization_bifunction(s, half_squared_distance(s, a));
    Sampler sampler(s, 17, 2.0);
    for (int i = 0; i < 20; ++i) {
      const Point x = sampler.point();
      for (double lambda : {0.25, 1.0, 4.0}) {
        const Point p = solve(f, s, ConvexSet::whole_space(), x, lambda, with(ResolventStrategy::kAnalytic)).point;
        const Point q = solve(f, s, ConvexSet::whole_space(), x, lambda, with(ResolventStrategy::kProxDescent)).point;
        EXPECT_LE(s.distance(p, q), 1e-5) << to_string(s.kind()) << " lambda " << lambda;
      }
    }
  }
}

TEST(Resolvent, DefaultStrategyPrefersClosedForms) {
  const Space s = Space::euclidean(2);
  EXPECT_EQ(default_strategy(make_minimization_bifunction(s, half_squared_distance(s, E({0, 0}))), s),
            ResolventStrategy::kAnalytic);
  EXPECT_EQ(default_strategy(make_vi_bifunction(s, identity_map()), s), ResolventStrategy::kFixedPoint);
  EXPECT_EQ(default_strategy(make_minimization_bifunction(s, set_distance_objective(s, ConvexSet::ball(E({0, 0}), 1))), s),
            ResolventStrategy::kProxDescent);
  const Bifunction bare([](const Point&, const Point&) { return 0.0; }, {}, "bare");
  EXPECT_EQ(code_of([&] { default_strategy(bare, s); }), ErrorCode::kNoStrategy);
}

TEST(Resolvent, ConstrainedClosedFormFallsThroughToDescent) {
  const Space s = Space::hyperboloid(2);
  const ConvexSet K = ConvexSet::ball(H({0, 0}), 0.3);
  const Bifunction f = make_minimization_bifunction(s, half_squared_distance(s, H({2, 0})));
  const ResolventResult r = solve(f, s, K, H({0, 1}), 1.0);
  EXPECT_NE(r.strategy_used, ResolventStrategy::kAnalytic);
  EXPECT_TRUE(K.contains(s, r.point));
  EXPECT_GE(r.residual, -1e-8);
}

TEST(Resolvent, IdentityMapReturnsTheAnchor) {
  for (const Space& s : all_spaces()) {
    const Bifunction f = make_vi_bifunction(s, identity_map());
    for (double lambda : {0.1, 1.0, 10.0}) {
      const ResolventResult r = solve(f, s, ConvexSet::whole_space(), start_for(s), lambda);
      EXPECT_LE(s.distance(r.point, start_for(s)), 1e-12);
    }
  }
}

TEST(Resolvent, ReflectionFixedPointIsOneThird) {
  // z = (-z + 1)/2  =>  z = 1/3
  const Space s = Space::euclidean(1);
  const Bifunction f = make_vi_bifunction(s, dilation_map(s, -1.0));
  const ResolventResult r = solve(f, s, ConvexSet::whole_space(), E({1}), 1.0, with(ResolventStrategy::kFixedPoint));
  EXPECT_NEAR(r.point.coords()[0], 1.0 / 3.0, 1e-10);
  EXPECT_GT(r.inner_iterations, 1);
}

TEST(Resolvent, FixedPointContractsGeometrically) {
  const Space s = Space::hyperboloid(2);
  const ConvexSet seg = ConvexSet::segment(H({-1, 0.2}), H({1, -0.3}));
  const Bifunction f = make_vi_bifunction(s, projection_map(s, seg));
  for (double lambda : {0.5, 1.0, 3.0}) {
    ResolventRequest req{f, s, ConvexSet::whole_space(), H({0.4, 1.5}), lambda, with(ResolventStrategy::kFixedPoint),
                         H({-2, -2}), std::nullopt};
    const ResolventResult r = solve_resolvent(req);
    ASSERT_GT(r.steps.size(), 3u);
    for (std::size_t i = 1; i < r.steps.size(); ++i) {
      if (r.steps[i - 1] < 1e-13) break;
      EXPECT_LE(r.steps[i] / r.steps[i - 1], 1.0 / (1.0 + lambda) + 1e-9) << "lambda " << lambda << " step " << i;
    }
  }
}

TEST(Resolvent, FixedPointIsIndependentOfTheStart) {
  for (const Space& s : {Space::euclidean(2), Space::hyperboloid(2)}) {
    const Point a = anchor_for(s);
    const Bifunction f = make_vi_bifunction(s, projection_map(s, ConvexSet::segment(a, start_for(s))));
    const Point x = s.kind() == SpaceKind::kHyperboloid ? H({1.5, 1.5}) : E({1.5, 1.5});
    auto from = [&](Point init) {
      ResolventRequest req{f, s, ConvexSet::whole_space(), x, 0.7, with(ResolventStrategy::kFixedPoint), init, std::nullopt};
      return solve_resolvent(req).point;
    };
    EXPECT_LE(s.distance(from(s.origin()), from(s.geodesic_point(a, x, 0.9))), 1e-10);
  }
}

TEST(Resolvent, ZeroBifunctionIsTheProjection) {
  for (const Space& s : all_spaces()) {
    const ConvexSet K = ConvexSet::ball(anchor_for(s), 0.4);
    Sampler sampler(s, 3);
    for (int i = 0; i < 50; ++i) {
      const Point x = sampler.point();
      const ResolventResult r = solve(make_zero_bifunction(s), s, K, x, 2.0);
      EXPECT_LE(s.distance(r.point, project(s, K, x)), 1e-12);
      EXPECT_GE(r.residual, -1e-9);
    }
  }
}

TEST(Resolvent, TreeProxMatchesGridAcrossRays) {
  const Space s = Space::star_tree(3);
  Sampler sampler(s, 5, 2.0);
  for (int i = 0; i < 50; ++i) {
    const Point a = sampler.point();
    const Point x = sampler.point();
    const Bifunction f = make_minimization_bifunction(s, half_squared_distance(s, a));
    for (double lambda : {0.25, 4.0}) {
      const Point r = solve(f, s, ConvexSet::whole_space(), x, lambda, with(ResolventStrategy::kProxDescent)).point;
      EXPECT_LE(s.distance(r, testing_support::grid_resolvent_half_squared(x, a, lambda)), 1e-5);
    }
  }
}

TEST(Resolvent, SubtreeConstraintOnTheTree) {
  // Anchor and target both on ray 2, feasible set is rays {0, 1}: the best
  // feasible point is the origin.
  const Space s = Space::star_tree(3);
  const Bifunction f = make_minimization_bifunction(s, half_squared_distance(s, T(2, 1.0)));
  const ResolventResult r = solve(f, s, ConvexSet::subtree({0, 1}), T(2, 0.5), 1.0);
  EXPECT_LE(s.distance(r.point, s.origin()), 1e-7);
  EXPECT_GE(r.residual, -1e-8);
}

TEST(Resolvent, Errors) {
  const Space s = Space::euclidean(2);
  const Bifunction f = make_minimization_bifunction(s, half_squared_distance(s, E({0, 0})));
  EXPECT_EQ(code_of([&] { solve(f, s, ConvexSet::whole_space(), E({1, 1}), 0.0); }), ErrorCode::kContractViolation);
  EXPECT_EQ(code_of([&] { solve(f, s, ConvexSet::whole_space(), E({1, 1}), -1.0); }), ErrorCode::kContractViolation);

  BifunctionHints hints;
  hints.theta = 2.0;
  hints.map_T = identity_map();
  const Bifunction under([](const Point&, const Point&) { return 0.0; }, hints, "under");
  EXPECT_EQ(code_of([&] { solve(under, s, ConvexSet::whole_space(), E({1, 1}), 2.0); }), ErrorCode::kLambdaTooSmall);

  const Bifunction bare([](const Point&, const Point&) { return 0.0; }, {}, "bare");
  EXPECT_EQ(code_of([&] { solve(bare, s, ConvexSet::whole_space(), E({1, 1}), 1.0); }), ErrorCode::kNoStrategy);
  EXPECT_EQ(code_of([&] { solve(bare, s, ConvexSet::whole_space(), E({1, 1}), 1.0, with(ResolventStrategy::kAnalytic)); }),
            ErrorCode::kNoStrategy);

  const Bifunction reflect = make_vi_bifunction(s, dilation_map(s, -1.0));
  ResolventOptions tight = with(ResolventStrategy::kFixedPoint);
  tight.max_inner = 3;
  EXPECT_EQ(code_of([&] { solve(reflect, s, ConvexSet::whole_space(), E({1, 1}), 1.0, tight); }),
            ErrorCode::kInnerDiverged);
}

TEST(Residual, AcceptsTheResolventAndRejectsTheAnchor) {
  for (const Space& s : all_spaces()) {
    const Point a = anchor_for(s);
    const Point x = start_for(s);
    const Bifunction f = make_minimization_bifunction(s, half_squared_distance(s, a));
    const Point z = s.geodesic_point(x, a, 0.5);
    EXPECT_GE(residual(f, s, ConvexSet::whole_space(), z, x, 1.0), -1e-8);
    // At z = anchor the regularizer vanishes and y = a gives -1/2 d^2(x, a).
    const std::vector<Point> extra{a};
    const double r = residual(f, s, ConvexSet::whole_space(), x, x, 1.0, 200, 0, extra);
    EXPECT_LE(r, -0.5 * s.squared_distance(x, a) + 1e-12) << to_string(s.kind());
  }
}

TEST(Residual, ZeroBifunctionAtTheAnchorIsZero) {
  for (const Space& s : all_spaces()) {
    const Point x = start_for(s);
    const double r = residual(make_zero_bifunction(s), s, ConvexSet::whole_space(), x, x, 1.0);
    EXPECT_EQ(r, 0.0);
  }
}

TEST(Firmness, ClosedFormAffineMap) {
  // J x = (x + a)/2 on the line: both inequalities hold with room to spare.
  const Space s = Space::euclidean(2);
  const Point a = E({0.3, 0.3});
  const Bifunction f = make_minimization_bifunction(s, half_squared_distance(s, a));
  Sampler sampler(s, 8, 3.0);
  std::vector<std::pair<Point, Point>> pairs;
  for (int i = 0; i < 1000; ++i) {
    Point x = sampler.point();
    pairs.emplace_back(x, sampler.point());
  }
  pairs.emplace_back(a, a);
  const FirmnessReport r = check_firmly_nonexpansive(f, s, ConvexSet::whole_space(), 1.0, pairs, {});
  EXPECT_LE(r.firm.worst_violation, 1e-12);
  EXPECT_LE(r.nonexpansive.worst_violation, 1e-12);
  EXPECT_EQ(r.firm.samples, 1001);
  // d^2(Jx, Jz) - <xz, JxJz> = 1/4 d^2 - 1/2 d^2 = -1/4 d^2
  for (std::size_t i = 0; i < 5; ++i) {
    const auto& [x, z] = pairs[i];
    const Point jx = s.geodesic_point(x, a, 0.5), jz = s.geodesic_point(z, a, 0.5);
    EXPECT_NEAR(s.squared_distance(jx, jz) - s.quasilinearization(x, z, jx, jz), -0.25 * s.squared_distance(x, z), 1e-12);
  }
}

TEST(Firmness, SegmentProjectionViOnTheHyperboloid) {
  const Space s = Space::hyperboloid(2);
  const Bifunction f = make_vi_bifunction(s, projection_map(s, ConvexSet::segment(H({-1, 0}), H({1, 0.5}))));
  Sampler sampler(s, 9, 2.0);
  std::vector<std::pair<Point, Point>> pairs;
  for (int i = 0; i < 1000; ++i) {
    Point x = sampler.point();
    pairs.emplace_back(x, sampler.point());
  }
  const FirmnessReport r = check_firmly_nonexpansive(f, s, ConvexSet::whole_space(), 1.0, pairs, {});
  EXPECT_LE(r.firm.worst_violation, 1e-6);
  EXPECT_LE(r.nonexpansive.worst_violation, 1e-6);
}

TEST(Resolvent, QuasiFirmTowardSolutions) {
  // S = {a} for phi = 1/2 d^2(., a): <xp, Jx p> >= d^2(Jx, p).
  for (const Space& s : all_spaces()) {
    const Point p = anchor_for(s);
    const Bifunction f = make_minimization_bifunction(s, half_squared_distance(s, p));
    Sampler sampler(s, 10, 2.5);
    for (int i = 0; i < 300; ++i) {
      const Point x = sampler.point();
      const Point j = solve(f, s, ConvexSet::whole_space(), x, 0.6, with(ResolventStrategy::kProxDescent)).point;
      EXPECT_GE(s.quasilinearization(x, p, j, p), s.squared_distance(j, p) - 1e-6);
    }
  }
}

TEST(Resolvent, SolutionsAreFixedPoints) {
  for (const Space& s : all_spaces()) {
    const Point p = anchor_for(s);
    const Bifunction f = make_minimization_bifunction(s, half_squared_distance(s, p));
    for (auto strategy : {ResolventStrategy::kAnalytic, ResolventStrategy::kProxDescent}) {
      const ResolventResult r = solve(f, s, ConvexSet::whole_space(), p, 1.5, with(strategy));
      EXPECT_LE(s.distance(r.point, p), 1e-6);
      EXPECT_GE(r.residual, -1e-8);
    }
  }
}

TEST(ResolventPath, ZeroBifunctionIsConstantProjection) {
  const Space s = Space::euclidean(2);
  const ConvexSet K = ConvexSet::segment(E({0, 0}), E({2, 0}));
  const std::vector<double> lambdas{1.0, 0.5, 0.25, 0.125};
  const auto path = resolvent_path(make_zero_bifunction(s), s, K, E({1, 3}), lambdas, {});
  ASSERT_EQ(path.size(), lambdas.size());
  for (const auto& p : path) EXPECT_LE(s.distance(p, E({1, 0})), 1e-12);
}

TEST(ResolventPath, HalfSquaredDistanceApproachesTheMinimizer) {
  for (const Space& s : all_spaces()) {
    const Point a = anchor_for(s);
    const Point x = start_for(s);
    std::vector<double> lambdas;
    for (int j = 0; j <= 12; ++j) lambdas.push_back(std::ldexp(1.0, -j));
    const auto path = resolvent_path(make_minimization_bifunction(s, half_squared_distance(s, a)), s,
                                     ConvexSet::whole_space(), x, lambdas, {});
    for (std::size_t j = 0; j < path.size(); ++j) {
      EXPECT_LE(s.distance(path[j], s.geodesic_point(x, a, 1.0 / (1.0 + lambdas[j]))), 1e-9);
    }
    EXPECT_LE(s.distance(path.back(), a), 1e-3 * s.distance(x, a));
  }
}

TEST(ResolventPath, SetDistanceConvergesToTheProjection) {
  const Space s = Space::euclidean(2);
  const auto a = oracle::vec({-1, 0}), b = oracle::vec({1, 1});
  const ConvexSet S = ConvexSet::segment(Point::euclidean(a), Point::euclidean(b));
  const Bifunction f = make_minimization_bifunction(s, set_distance_objective(s, S));
  const Point x = E({0.5, -1.5});
  const Point px = Point::euclidean(oracle::segment_projection(a, b, x.coords()));
  std::vector<double> lambdas;
  for (int j = 0; j <= 12; ++j) lambdas.push_back(std::ldexp(1.0, -j));
  const auto path = resolvent_path(f, s, ConvexSet::whole_space(), x, lambdas, {});
  double prev = s.distance(x, px);
  for (const auto& p : path) {
    const double d = s.distance(p, px);
    EXPECT_LE(d, prev + 1e-8);
    prev = d;
  }
  EXPECT_LE(prev, 1e-3);
}

TEST(ResolventPath, RejectsBadSchedules) {
  const Space s = Space::euclidean(1);
  const Bifunction f = make_zero_bifunction(s);
  const std::vector<double> increasing{0.5, 1.0};
  const std::vector<double> none;
  EXPECT_EQ(code_of([&] { resolvent_path(f, s, ConvexSet::whole_space(), E({0}), increasing, {}); }),
            ErrorCode::kContractViolation);
  EXPECT_EQ(code_of([&] { resolvent_path(f, s, ConvexSet::whole_space(), E({0}), none, {}); }), ErrorCode::kEmptyInput);
}

TEST(StrategyNames, RoundTrip) {
  for (auto st : {ResolventStrategy::kAnalytic, ResolventStrategy::kFixedPoint, ResolventStrategy::kProxDescent}) {
    EXPECT_EQ(strategy_from_string(to_string(st)), st);
  }
  EXPECT_FALSE(strategy_from_string("newton").has_value());
}
