#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "qhelly/lp.hpp"
#include "qhelly/solvers.hpp"
#include "test_support.hpp"

using namespace qhelly;
using namespace qhelly::testing;
using std::numbers::pi;

namespace {

// Frozen output of oracle::max_area_ellipse on the unit right triangle
// (see test_oracles.cpp).
constexpr double kTriangleOracleArea = 0.3022998940;

}  // namespace

TEST(SolverSettings, ValidateRejectsBadValues) {
  SolverSettings s;
  EXPECT_NO_THROW(s.validate());
  s.barrier_decrease = 1.0;
  EXPECT_THROW(s.validate(), Error);
  s = {};
  s.kkt_tol = 0.0;
  EXPECT_THROW(s.validate(), Error);
  s = {};
  s.max_iterations = 0;
  EXPECT_THROW(s.validate(), Error);
}

TEST(Mvie, CubesGiveUnitBall) {
  for (std::size_t d = 2; d <= 6; ++d) {
    const SolveOutcome o = mvie(HPolytope::cube(d, 1.0));
    EXPECT_LT(shape_center_distance(o.ellipsoid, Ellipsoid::ball(d)), 1e-6) << "d=" << d;
    EXPECT_LE(o.kkt_residual, SolverSettings{}.kkt_tol);
    EXPECT_EQ(o.active_constraints.size(), 2 * d);
    EXPECT_TRUE(ellipsoid_in_polytope(o.ellipsoid, HPolytope::cube(d, 1.0), 1e-9));
  }
}

TEST(Mvie, TriangleIsSteinerInellipse) {
  const SolveOutcome o = mvie(triangle());
  EXPECT_NEAR(o.objective, kTriangleOracleArea, 1e-5);
  EXPECT_NEAR(o.objective, pi / (6 * std::sqrt(3.0)), 1e-7);
  EXPECT_NEAR(o.ellipsoid.center()(0), 1.0 / 3, 1e-6);
  EXPECT_NEAR(o.ellipsoid.center()(1), 1.0 / 3, 1e-6);
  EXPECT_EQ(o.active_constraints.size(), 3u);
}

TEST(Mvie, RedundantConstraintIsInactive) {
  const HPolytope p = HPolytope::cube(2, 1.0).with(HalfSpace(vec({1, 0}), 2));
  const SolveOutcome o = mvie(p);
  EXPECT_LT(shape_center_distance(o.ellipsoid, Ellipsoid::ball(2)), 1e-6);
  EXPECT_EQ(o.active_constraints, (std::vector<std::size_t>{0, 1, 2, 3}));
}

TEST(Mvie, Errors) {
  try {
    mvie(HPolytope(2, {HalfSpace(vec({1, 0}), 5)}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Unbounded);
  }
  try {
    mvie(HPolytope(2, {HalfSpace(vec({1, 0}), 0), HalfSpace(vec({-1, 0}), -1), HalfSpace(vec({0, 1}), 1),
                       HalfSpace(vec({0, -1}), 1)}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyInterior);
  }
  SolverSettings tight;
  tight.max_iterations = 1;
  try {
    mvie(triangle(), tight);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MaxIterations);
  }
}

TEST(LowestEllipsoid, BoxFixture) {
  const SolveOutcome o = lowest_ellipsoid(HPolytope::cube(2, 2.0), pi);
  EXPECT_LT(shape_center_distance(o.ellipsoid, Ellipsoid(diag({2, 0.5}), vec({0, -1.5}))), 1e-5);
  EXPECT_NEAR(o.objective, -1.0, 1e-5);
  ASSERT_TRUE(o.crosscheck_distance.has_value());
  EXPECT_LE(*o.crosscheck_distance, 1e-5);
}

TEST(LowestEllipsoid, SquareAtItsOwnMvieVolume) {
  const SolveOutcome o = lowest_ellipsoid(HPolytope::cube(2, 1.0), pi);
  EXPECT_LT(shape_center_distance(o.ellipsoid, Ellipsoid::ball(2)), 1e-5);
  EXPECT_NEAR(o.objective, 1.0, 1e-5);
}

TEST(LowestEllipsoid, TallBox) {
  const SolveOutcome o = lowest_ellipsoid(HPolytope::box(vec({-1, -3}), vec({1, 1})), pi);
  EXPECT_LT(shape_center_distance(o.ellipsoid, Ellipsoid(diag({1, 1}), vec({0, -2}))), 1e-5);
  EXPECT_NEAR(o.objective, -1.0, 1e-5);
}

TEST(LowestEllipsoid, VolumeInfeasible) {
  try {
    lowest_ellipsoid(HPolytope::cube(2, 1.0), 4.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::VolumeInfeasible);
  }
}

TEST(LowestEllipsoid, MinimalityAgainstLowerCap) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t d = 2 + trial % 2;
    const HPolytope p = random_polytope(rng, d, 3 * d);
    const double v = 0.5 * mvie(p).objective;
    const SolveOutcome o = lowest_ellipsoid(p, v);
    const HPolytope lower = p.with(height_cap(d, o.objective - 1e-3));
    EXPECT_LT(mvie(lower).objective, v);
  }
}

TEST(LowestEllipsoid, HeightMonotoneInVolume) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 5; ++trial) {
    const HPolytope p = random_polytope(rng, 2, 7);
    const double top = mvie(p).objective;
    double previous = -INFINITY;
    for (double f : {0.2, 0.4, 0.6, 0.8, 0.95}) {
      const double h = lowest_ellipsoid(p, f * top).objective;
      EXPECT_GE(h, previous - 1e-7);
      previous = h;
    }
  }
}

TEST(PolytopeVolume2d, Examples) {
  EXPECT_NEAR(polytope_volume_2d(HPolytope::cube(2, 1.0)), 4.0, 1e-12);
  EXPECT_NEAR(polytope_volume_2d(triangle()), 0.5, 1e-12);
  EXPECT_NEAR(polytope_volume_2d(HPolytope::cube(2, 2.0)), 16.0, 1e-12);
  EXPECT_THROW(polytope_volume_2d(HPolytope::cube(3, 1.0)), Error);
  EXPECT_THROW(polytope_volume_2d(HPolytope(2, {HalfSpace(vec({1, 0}), 5)})), Error);
}

TEST(PolytopeVolume2d, JohnSandwich) {
  // mvie volume <= area <= d^d mvie volume in the plane.
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const HPolytope p = random_polytope(rng, 2, 6);
    const double area = polytope_volume_2d(p);
    const double inner = mvie(p).objective;
    EXPECT_LE(inner, area + 1e-9);
    EXPECT_LE(area, 4.0 * inner + 1e-9);
  }
}

TEST(SolverProperties, AffineEquivariance) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 2 + trial % 3;
    const HPolytope p = random_polytope(rng, d, 3 * d);
    const AffineMap t = random_affine(rng, d);
    const Ellipsoid mapped = transform_ellipsoid(t, mvie(p).ellipsoid);
    const Ellipsoid direct = mvie(transform_polytope(t, p)).ellipsoid;
    EXPECT_LT(shape_center_distance(mapped, direct), 1e-5);
  }
}

TEST(SolverProperties, AddingHalfspacesNeverGrowsMvie) {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 2 + trial % 2;
    const HPolytope p = random_polytope(rng, d, 3 * d);
    const double before = mvie(p).objective;
    const Vector a = random_unit(rng, d);
    const double after = mvie(p.with(HalfSpace(a, 0.3 + 0.5 * std::abs(a(0))))).objective;
    EXPECT_LE(after, before * (1 + 1e-8));
  }
}

TEST(SolverProperties, RejectionSamplesNeverBeatMvie) {
  std::mt19937_64 rng(57);
  std::uniform_real_distribution<double> u(-1, 1);
  const HPolytope p = triangle();
  const double best = mvie(p).objective;
  for (int s = 0; s < 100000; ++s) {
    Matrix b(2, 2);
    b << 0.5 * std::abs(u(rng)), 0.3 * u(rng), 0, 0.5 * std::abs(u(rng));
    b(1, 0) = b(0, 1);
    if (b.determinant() <= 1e-9 || b.llt().info() != Eigen::Success) continue;
    const Ellipsoid e(b, vec({0.5 + 0.5 * u(rng), 0.5 + 0.5 * u(rng)}));
    if (ellipsoid_in_polytope(e, p, 0.0)) {
      EXPECT_LE(ellipsoid_volume(e), best * (1 + 1e-9));
    }
  }
}

TEST(ActiveSet, SquareHasFourActive) {
  EXPECT_EQ(active_set(Ellipsoid::ball(2), HPolytope::cube(2, 1.0)).size(), 4u);
  EXPECT_TRUE(active_set(Ellipsoid::ball(2, 0.5), HPolytope::cube(2, 1.0)).empty());
}
