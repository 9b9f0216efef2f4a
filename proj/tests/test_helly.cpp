#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "qhelly/helly.hpp"
#include "qhelly/instance.hpp"
#include "qhelly/lp.hpp"
#include "test_support.hpp"

using namespace qhelly;
using namespace qhelly::testing;
using std::numbers::pi;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InputError;  // sentinel: nothing thrown
}

ColorClasses repeated(const HPolytope& body, std::size_t classes) {
  return ColorClasses(body.dim(), std::vector<std::vector<HPolytope>>(classes, {body}));
}

HPolytope box2(double x0, double x1, double y0, double y1) { return HPolytope::box(vec({x0, y0}), vec({x1, y1})); }

ColorClasses generated(GeneratorKind kind, std::uint64_t seed, std::size_t classes, std::size_t members,
                       double target) {
  GeneratorSpec spec;
  spec.kind = kind;
  spec.seed = seed;
  spec.class_count = classes;
  spec.members_per_class = members;
  spec.target_volume = target;
  return generate(spec).color_classes();
}

}  // namespace

TEST(MinkowskiDifference, BoxMinusUnitDisk) {
  const HPolytope diff = minkowski_difference(HPolytope::cube(2, 2.0), Ellipsoid::ball(2));
  ASSERT_EQ(diff.size(), 4u);
  for (const auto& h : diff.halfspaces()) EXPECT_NEAR(h.offset(), 1.0, 1e-15);
}

TEST(MinkowskiDifference, MinusOriginIsIdentity) {
  const HPolytope point = HPolytope::cube(2, 0.0);
  const HPolytope p = triangle();
  const HPolytope diff = minkowski_difference(p, point);
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(diff[i].offset(), p[i].offset(), 1e-12);
}

TEST(MinkowskiDifference, TooLargeBodyIsEmpty) {
  EXPECT_FALSE(lp_feasible(minkowski_difference(HPolytope::cube(2, 1.0), Ellipsoid::ball(2, 2.0))).has_value());
  EXPECT_FALSE(contains_translate(HPolytope::cube(2, 1.0), Ellipsoid::ball(2, 2.0)).has_value());
}

TEST(MinkowskiDifference, UnboundedSubtrahendThrows) {
  EXPECT_EQ(kind_of([] { minkowski_difference(HPolytope::cube(2, 1.0), HPolytope(2, {HalfSpace(vec({1, 0}), 0)})); }),
            ErrorKind::Unbounded);
}

TEST(MinkowskiDifference, PolytopeSubtrahend) {
  const HPolytope diff = minkowski_difference(HPolytope::cube(2, 2.0), HPolytope::cube(2, 0.5));
  for (const auto& h : diff.halfspaces()) EXPECT_NEAR(h.offset(), 1.5, 1e-12);
}

TEST(MinkowskiDifference, ProvenanceKept) {
  const HPolytope diff = minkowski_difference(HPolytope::cube(2, 2.0).tagged({4, 1}), Ellipsoid::ball(2));
  for (const auto& h : diff.halfspaces()) EXPECT_EQ(h.provenance(), (Provenance{4, 1}));
}

TEST(ContainsTranslate, Examples) {
  const auto t = contains_translate(HPolytope::cube(2, 2.0), Ellipsoid::ball(2));
  ASSERT_TRUE(t.has_value());
  EXPECT_TRUE(ellipsoid_in_polytope(Ellipsoid(Matrix::Identity(2, 2), *t), HPolytope::cube(2, 2.0), 1e-9));
}

TEST(ContainsTranslate, AgreesWithSampledContainment) {
  std::mt19937_64 rng(91);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 2;
    const HPolytope p = random_polytope(rng, d, 6, 1.0);
    const Ellipsoid l = random_ellipsoid(rng, d, 0.2, 1.0 + u(rng));
    const auto t = contains_translate(p, l);
    if (t) {
      EXPECT_TRUE(ellipsoid_in_polytope(Ellipsoid(l.shape(), l.center() + *t), p, 1e-9));
    } else {
      // No translate: the widest inscribed translate would need a margin.
      EXPECT_LT(chebyshev_center(minkowski_difference(p, l)).radius, 1e-9);
    }
  }
}

TEST(HigherThan, HeightThenCenterThenShape) {
  const Ellipsoid a(diag({1, 1}), vec({0, 0}));
  EXPECT_TRUE(higher_than(Ellipsoid(diag({1, 1}), vec({0, 0.1})), a));
  EXPECT_TRUE(higher_than(Ellipsoid(diag({1, 1}), vec({0.1, 0})), a));
  EXPECT_TRUE(higher_than(Ellipsoid(diag({2, 1}), vec({0, 0})), a));
  EXPECT_FALSE(higher_than(a, a));
}

TEST(VerifyHypothesis, CommonBallPasses) {
  const ColorClasses c = generated(GeneratorKind::CommonBall, 7, 5, 2, pi);
  for (std::size_t k = 1; k <= 5; ++k) {
    const HypothesisReport h = verify_colorful_hypothesis(c, k, pi);
    EXPECT_TRUE(h.passed) << "k=" << k;
    EXPECT_EQ(h.selections_checked, colorful_selection_count(c.sizes(), k));
    EXPECT_GE(h.min_volume, pi * (1 - 1e-6));
  }
}

TEST(VerifyHypothesis, DisjointMemberIdentified) {
  const HPolytope core = HPolytope::cube(2, 2.0);
  const HPolytope far = box2(10, 12, 10, 12);
  const ColorClasses c(2, {{core}, {core, far}, {core}});
  const HypothesisReport h = verify_colorful_hypothesis(c, 2, pi);
  EXPECT_FALSE(h.passed);
  ASSERT_TRUE(h.first_failure.has_value());
  EXPECT_EQ(h.first_failure->picks, (std::vector<Pick>{{0, 0}, {1, 1}}));
  EXPECT_EQ(h.first_failure_volume, 0.0);
  EXPECT_EQ(h.min_volume, 0.0);
  // Direct check of the identified selection.
  EXPECT_FALSE(has_interior(h.first_failure->intersection(c)));
}

TEST(VerifyHypothesis, SingletonsReduceToPerBodyCheck) {
  const ColorClasses c(2, {{HPolytope::cube(2, 1.0)}, {HPolytope::cube(2, 2.0)}, {box2(0, 1, 0, 1)}});
  const HypothesisReport h = verify_colorful_hypothesis(c, 1, 1.0);
  EXPECT_FALSE(h.passed);
  EXPECT_EQ(h.first_failure->picks, (std::vector<Pick>{{2, 0}}));
  EXPECT_NEAR(h.min_volume, pi / 4, 1e-7);
  EXPECT_TRUE(verify_colorful_hypothesis(c, 1, 0.5).passed);
}

TEST(ColorfulHellyWitness, AllClassesContainTheBox) {
  const TranslateWitness w = colorful_helly_witness(repeated(HPolytope::cube(2, 2.0), 3), Ellipsoid::ball(2));
  EXPECT_EQ(w.class_index, 0u);
  EXPECT_TRUE(ellipsoid_in_polytope(Ellipsoid(Matrix::Identity(2, 2), w.translate), HPolytope::cube(2, 2.0), 1e-9));
}

TEST(ColorfulHellyWitness, OnlyThirdClassWorks) {
  // Classes 0 and 1 each squeeze a unit disk in one axis; every colorful
  // selection still has room.
  const ColorClasses c(2, {{box2(-3, 0.5, -3, 3), box2(-0.5, 3, -3, 3)},
                           {box2(-3, 3, -3, 0.5), box2(-3, 3, -0.5, 3)},
                           {HPolytope::cube(2, 2.0)}});
  const TranslateWitness w = colorful_helly_witness(c, Ellipsoid::ball(2), true);
  EXPECT_EQ(w.class_index, 2u);
  // Direct Minkowski-difference check for the two rejected classes.
  for (std::size_t j = 0; j < 2; ++j) {
    const HPolytope both = intersect(c.member(j, 0), c.member(j, 1));
    EXPECT_FALSE(contains_translate(both, Ellipsoid::ball(2)).has_value());
  }
}

TEST(ColorfulHellyWitness, ViolatedHypothesisHasNoWitness) {
  const ColorClasses c(2, {{box2(-10, -7, -1.5, 1.5), box2(7, 10, -1.5, 1.5)},
                           {box2(-1.5, 1.5, -10, -7), box2(-1.5, 1.5, 7, 10)},
                           {box2(-10, -7, -10, -7), box2(7, 10, 7, 10)}});
  for (std::size_t j = 0; j < 3; ++j) {
    const HPolytope both = intersect(c.member(j, 0), c.member(j, 1));
    EXPECT_FALSE(contains_translate(both, Ellipsoid::ball(2)).has_value());
  }
  EXPECT_EQ(kind_of([&] { colorful_helly_witness(c, Ellipsoid::ball(2)); }), ErrorKind::NoWitness);
  EXPECT_EQ(kind_of([&] { colorful_helly_witness(c, Ellipsoid::ball(2), true); }), ErrorKind::HypothesisViolated);
}

TEST(ColorfulHellyWitness, NeedsDPlusOneClasses) {
  EXPECT_EQ(kind_of([] { colorful_helly_witness(repeated(HPolytope::cube(2, 2.0), 2), Ellipsoid::ball(2)); }),
            ErrorKind::InvalidArgument);
}

TEST(ColellPipeline, FiveEqualBoxes) {
  const PipelineReport r = colell_pipeline(repeated(HPolytope::cube(2, 2.0), 5), pi);
  ASSERT_TRUE(r.witness_ellipsoid.has_value());
  EXPECT_LT(shape_center_distance(*r.witness_ellipsoid, Ellipsoid(diag({2, 0.5}), vec({0, -1.5}))), 1e-5);
  EXPECT_EQ(r.selection_heights.size(), 1u);
  EXPECT_EQ(r.step3_class, 0u);
  for (const auto& g : r.step3_gaps) EXPECT_LE(g.gap, 1e-5);
  EXPECT_TRUE(ellipsoid_in_polytope(*r.witness_ellipsoid, HPolytope::cube(2, 2.0), 1e-6));
}

TEST(ColellPipeline, NestedBoxesWitnessContainsEmax) {
  // Dropping any box but the smallest keeps the lowest ellipsoid, so the
  // first such class (class 0) is returned; the smallest box's class is the
  // only one whose removal changes it.
  std::vector<std::vector<HPolytope>> boxes;
  for (int i = 0; i < 5; ++i) boxes.push_back({HPolytope::cube(2, 2.0 - 0.2 * i)});
  const ColorClasses c(2, boxes);
  const PipelineReport r = colell_pipeline(c, pi);
  EXPECT_EQ(r.witness_class, 0u);
  ASSERT_EQ(r.step3_gaps.size(), 5u);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_LE(r.step3_gaps[j].gap, 1e-5);
  EXPECT_GT(r.step3_gaps[4].gap, 1e-3);
  // E_max is the lowest ellipsoid of the smallest box and lies in every box.
  EXPECT_LT(ellipsoid_distance(*r.witness_ellipsoid, lowest_ellipsoid(HPolytope::cube(2, 1.2), pi).ellipsoid), 1e-5);
  for (std::size_t j = 0; j < 5; ++j) EXPECT_TRUE(ellipsoid_in_polytope(*r.witness_ellipsoid, c.member(j, 0), 1e-6));
}

TEST(ColellPipeline, HypothesisCheckedFirst) {
  const HPolytope core = HPolytope::cube(2, 2.0);
  const ColorClasses c(2, {{core}, {core, box2(1.9, 5, -2, 2)}, {core}, {core}, {core}});
  EXPECT_EQ(kind_of([&] { colell_pipeline(c, pi); }), ErrorKind::HypothesisViolated);
}

TEST(ColellPipeline, WrongClassCount) {
  EXPECT_EQ(kind_of([] { colell_pipeline(repeated(HPolytope::cube(2, 2.0), 4), pi); }), ErrorKind::InvalidArgument);
}

TEST(ColellPipeline, SoundAndExtremalOnCommonBall) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ColorClasses c = generated(GeneratorKind::CommonBall, seed, 5, 2, 1.0);
    const PipelineReport r = colell_pipeline(c, 1.0);
    EXPECT_GE(ellipsoid_volume(*r.witness_ellipsoid), 1.0 - 1e-6);
    for (const auto& body : c.members(*r.witness_class)) {
      EXPECT_TRUE(ellipsoid_in_polytope(*r.witness_ellipsoid, body, 1e-6));
    }
    for (const auto& s : r.selection_heights) EXPECT_LE(s.value, r.extremal_height + 1e-7);
  }
}

TEST(ColellPipeline, ThreadCountDoesNotChangeTheResult) {
  const ColorClasses c = generated(GeneratorKind::CommonBall, 3, 5, 3, 1.0);
  PipelineOptions serial;
  serial.exec.serial_reference = true;
  PipelineOptions parallel;
  parallel.exec.threads = 8;
  const PipelineReport a = colell_pipeline(c, 1.0, serial);
  const PipelineReport b = colell_pipeline(c, 1.0, parallel);
  EXPECT_EQ(a.witness_class, b.witness_class);
  EXPECT_EQ(a.extremal_selection, b.extremal_selection);
  EXPECT_EQ(a.witness_ellipsoid->shape(), b.witness_ellipsoid->shape());
  EXPECT_EQ(a.witness_ellipsoid->center(), b.witness_ellipsoid->center());
  ASSERT_EQ(a.selection_heights.size(), b.selection_heights.size());
  for (std::size_t i = 0; i < a.selection_heights.size(); ++i)
    EXPECT_EQ(a.selection_heights[i].value, b.selection_heights[i].value);
}

TEST(Step3Property, SomeDroppedBodyKeepsTheLowestEllipsoid) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ColorClasses c = generated(GeneratorKind::CommonBall, 50 + seed, 5, 1, pi);
    const ColorfulSelection all = colorful_selections(c, 5).front();
    const Ellipsoid full = lowest_ellipsoid(all.intersection(c), pi).ellipsoid;
    bool found = false;
    for (std::size_t j = 0; j < 5 && !found; ++j)
      found = ellipsoid_distance(lowest_ellipsoid(all.without(j).intersection(c), pi).ellipsoid, full) <= 1e-5;
    EXPECT_TRUE(found) << "seed " << seed;
  }
}

TEST(Theorem1Pipeline, SixEqualBoxes) {
  const PipelineReport r = theorem1_pipeline(repeated(HPolytope::cube(2, 2.0), 6), pi);
  ASSERT_TRUE(r.extremal_ellipsoid.has_value());
  EXPECT_LT(shape_center_distance(*r.extremal_ellipsoid, Ellipsoid(diag({2, 0.5}), vec({0, -1.5}))), 1e-5);
  EXPECT_LE(*r.normalization_gap, 1e-5);
  EXPECT_GT(*r.radius, 0.0);
  EXPECT_TRUE(ellipsoid_in_polytope(*r.witness_ellipsoid, HPolytope::cube(2, 2.0), 1e-6));
  EXPECT_EQ(r.class_order, (std::vector<std::size_t>{0, 1, 2, 3, 4, 5}));
  EXPECT_EQ(r.witness_class, 3u);
}

TEST(Theorem1Pipeline, SixEqualSquares) {
  const PipelineReport r = theorem1_pipeline(repeated(HPolytope::cube(2, 1.0), 6), pi);
  EXPECT_LT(shape_center_distance(*r.extremal_ellipsoid, Ellipsoid::ball(2)), 1e-5);
  EXPECT_LT((r.normalization->linear() - Matrix::Identity(2, 2)).norm(), 1e-5);
  EXPECT_NEAR(*r.radius, 1.0, 1e-5);
  EXPECT_LT(shape_center_distance(*r.witness_ellipsoid, Ellipsoid::ball(2)), 1e-5);
  EXPECT_NEAR(r.witness_volume, pi, 1e-4);
}

TEST(Theorem1Pipeline, HypothesisViolated) {
  const HPolytope core = HPolytope::cube(2, 2.0);
  std::vector<std::vector<HPolytope>> classes(6, {core});
  classes[4].push_back(box2(1.5, 5, -2, 2));
  const ColorClasses c(2, classes);
  try {
    theorem1_pipeline(c, pi);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::HypothesisViolated);
    EXPECT_NE(std::string(e.what()).find("4:1"), std::string::npos);
  }
}

TEST(Theorem1Pipeline, SoundOnCommonBall) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const ColorClasses c = generated(GeneratorKind::CommonBall, seed, 6, 2, 1.0);
    const PipelineReport r = theorem1_pipeline(c, 1.0);
    EXPECT_GT(*r.radius, 0.0);
    EXPECT_LE(*r.normalization_gap, 1e-5);
    for (const auto& body : c.members(*r.witness_class)) {
      EXPECT_TRUE(ellipsoid_in_polytope(*r.witness_ellipsoid, body, 1e-6));
    }
    const AffineMap back = r.normalization->inverse();
    EXPECT_NEAR(r.witness_volume, std::pow(*r.radius, 2) * std::abs(back.determinant()) * pi, 1e-8 * r.witness_volume);
    // The normalized witness is the ball r B^2 around the translate.
    const Ellipsoid image = transform_ellipsoid(*r.normalization, *r.witness_ellipsoid);
    EXPECT_LT(shape_center_distance(image, Ellipsoid::ball(*r.translate, *r.radius)), 1e-8);
  }
}

TEST(SaxusoScenario, CommonBallPasses) {
  const ColorClasses c = generated(GeneratorKind::CommonBall, 11, 5, 2, 1.0);
  const PipelineReport r = saxuso_scenario(c, 1.0);
  ASSERT_TRUE(r.hypothesis.has_value());
  EXPECT_EQ(r.hypothesis->k, 4u);
  EXPECT_TRUE(r.witness_class.has_value());
  EXPECT_GE(r.target_volume, 1.0 - 1e-6);
}

TEST(SaxusoScenario, SingleMembersUseTheIntersectionVolume) {
  std::vector<std::vector<HPolytope>> boxes;
  for (int i = 0; i < 5; ++i) boxes.push_back({HPolytope::cube(2, 2.0 - 0.2 * i)});
  const PipelineReport r = saxuso_scenario(ColorClasses(2, boxes), 1.0);
  const double direct = mvie(HPolytope::cube(2, 1.2)).objective;
  EXPECT_NEAR(r.target_volume, direct, 1e-8 * direct);
}

TEST(SaxusoScenario, ViolatedHypothesis) {
  const HPolytope core = HPolytope::cube(2, 2.0);
  const ColorClasses c(2, {{core}, {core, box2(1.9, 5, -2, 2)}, {core}, {core}, {core}});
  EXPECT_EQ(kind_of([&] { saxuso_scenario(c, pi); }), ErrorKind::HypothesisViolated);
}

TEST(EllPipeline, MembersMapBackToClasses) {
  const ColorClasses c(2, {{box2(-1, 5, -5, 5)}, {box2(-5, 1, -5, 5), HPolytope::cube(2, 3.0)}, {box2(-5, 5, -1, 1)}});
  const PipelineReport r = ell_pipeline(c);
  EXPECT_EQ(r.critical_members, (std::vector<Pick>{{0, 0}, {1, 0}, {2, 0}}));
  EXPECT_LT(shape_center_distance(*r.witness_ellipsoid, Ellipsoid::ball(2)), 1e-6);
}
