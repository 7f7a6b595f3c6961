#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "barron/error.hpp"
#include "barron/measure.hpp"
#include "helpers.hpp"

using namespace barron;
using barron::testing_util::random_measure;
using barron::testing_util::random_points;

TEST(Measure, RejectsWrongDimension) {
  DiscreteMeasure m(2);
  EXPECT_THROW(m.add({1.0}, 0.0, 1.0), Error);
  EXPECT_THROW(m.add({1.0, NAN}, 0.0, 1.0), Error);
  EXPECT_THROW(m.add({1.0, 2.0}, INFINITY, 1.0), Error);
  m.add({1.0, 2.0}, 0.5, -1.0);
  EXPECT_EQ(m.size(), 1u);
}

TEST(Measure, EmptyEvaluatesToZero) {
  ShallowNet net(Activation::tanh(), DiscreteMeasure(3));
  const std::vector<double> x{0.1, -0.4, 0.9};
  EXPECT_EQ(evaluate(net, x), 0.0);
}

TEST(Measure, ReluIdentityOnPositiveRay) {
  DiscreteMeasure m(1);
  m.add({1.0}, 0.0, 1.0);
  ShallowNet net(Activation::relu(), m);
  const std::vector<double> x{0.5};
  EXPECT_EQ(evaluate(net, x), 0.5);
}

TEST(Measure, RepuSquareIdentity) {
  // max(0,-0.7)^2 + max(0,0.7)^2
  DiscreteMeasure m(1);
  m.add({1.0}, 0.0, 1.0);
  m.add({-1.0}, 0.0, 1.0);
  ShallowNet net(Activation::repu(2), m);
  const std::vector<double> x{-0.7};
  EXPECT_NEAR(evaluate(net, x), 0.49, 1e-15);
}

TEST(Measure, EvaluateDimensionMismatch) {
  ShallowNet net(Activation::relu(), random_measure(2, 3, 1));
  const std::vector<double> x{0.1};
  try {
    evaluate(net, x);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDimensionMismatch);
  }
}

TEST(Measure, NormExamples) {
  DiscreteMeasure relu_m(1);
  relu_m.add({1.0}, 0.0, 2.0);
  auto r = representation_norm(ShallowNet(Activation::relu(), relu_m));
  EXPECT_EQ(r.kind, NormKind::kRepu);
  EXPECT_EQ(r.s, 1);
  EXPECT_DOUBLE_EQ(r.value, 2.0);

  DiscreteMeasure tanh_m(1);
  tanh_m.add({3.0}, 1.0, -1.0);
  r = representation_norm(ShallowNet(Activation::tanh(), tanh_m));
  EXPECT_EQ(r.kind, NormKind::kLipschitz);
  EXPECT_DOUBLE_EQ(r.value, 5.0);
  EXPECT_DOUBLE_EQ(r.theta_max, 4.0);

  DiscreteMeasure rp(1);
  rp.add({1.0}, 1.0, 1.0);
  rp.add({2.0}, 0.0, 0.5);
  r = representation_norm(ShallowNet(Activation::repu(2), rp));
  EXPECT_EQ(r.s, 2);
  EXPECT_DOUBLE_EQ(r.value, 6.0);
  EXPECT_DOUBLE_EQ(r.total_variation, 1.5);
}

TEST(Measure, TotalMass) {
  DiscreteMeasure a(1);
  a.add({0.0}, 0.0, 1.0);
  a.add({1.0}, 0.0, -1.0);
  EXPECT_EQ(total_mass(a), 0.0);
  DiscreteMeasure b(1);
  b.add({0.0}, 0.0, 0.25);
  b.add({1.0}, 0.0, 0.75);
  EXPECT_EQ(total_mass(b), 1.0);

  const auto m = random_measure(2, 50, 7);
  double reverse = 0.0;
  for (std::size_t i = m.size(); i-- > 0;) reverse += m[i].mass;
  EXPECT_NEAR(total_mass(m), reverse, 1e-12);
}

TEST(Measure, PruneMergesAndDrops) {
  DiscreteMeasure m(1);
  m.add({1.0}, 0.5, 1.0);
  m.add({2.0}, 0.0, 0.3);
  m.add({1.0}, 0.5, -1.0);
  const auto r = prune(m, 0.0);
  ASSERT_EQ(r.measure.size(), 1u);
  EXPECT_EQ(r.measure[0].w[0], 2.0);
  EXPECT_EQ(r.merged, 1u);
  EXPECT_EQ(r.dropped, 1u);
  EXPECT_THROW(prune(m, -1.0), Error);
}

TEST(Measure, PruneZeroTolKeepsEvaluation) {
  const auto m = random_measure(3, 40, 11);
  const ShallowNet a(Activation::tanh(), m);
  const ShallowNet b(Activation::tanh(), prune(m, 0.0).measure);
  for (const auto& x : random_points(3, 100, 12)) {
    EXPECT_NEAR(evaluate(a, x), evaluate(b, x), 1e-12);
  }
}

TEST(Measure, PruneToleranceBoundHolds) {
  auto m = random_measure(2, 60, 3);
  DiscreteMeasure tiny(2);
  // shifted bias so they are dropped, not merged
  for (const auto& a : m.atoms()) tiny.add(a.w, a.b + 0.5, a.mass * 1e-10);
  const auto mixed = concat(m, tiny);
  const auto r = prune(mixed, 1e-9);
  EXPECT_EQ(r.measure.size(), m.size());
  const auto act = Activation::tanh();
  const double bound = r.evaluation_change_bound(act);
  double worst = 0.0;
  const ShallowNet before(act, mixed);
  const ShallowNet after(act, r.measure);
  for (const auto& x : random_points(2, 500, 4)) {
    worst = std::max(worst, std::abs(evaluate(before, x) - evaluate(after, x)));
  }
  EXPECT_GT(bound, 0.0);
  EXPECT_LE(worst, bound);
}

TEST(Measure, DegenerateRepuAtom) {
  DiscreteMeasure m(2);
  m.add({0.0, 0.0}, 0.0, 5.0);
  ShallowNet net(Activation::repu(3), m);
  const std::vector<double> x{0.3, -0.2};
  EXPECT_EQ(evaluate(net, x), 0.0);
  EXPECT_EQ(representation_norm(net).value, 0.0);
}

TEST(Measure, CompensatedSummationAgrees) {
  const auto m = random_measure(2, 200, 21, 3.0);
  const ShallowNet net(Activation::softplus(), m);
  for (const auto& x : random_points(2, 20, 22)) {
    EXPECT_NEAR(evaluate(net, x), evaluate(net, x, {true}), 1e-12);
  }
}

TEST(Measure, BatchMatchesPointwiseBitExact) {
  const auto pts = random_points(3, 700, 31);
  for (const auto& act : {Activation::relu(), Activation::repu(3), Activation::tanh(),
                          Activation::elu()}) {
    const ShallowNet net(act, random_measure(3, 90, 30, 2.0));
    const auto batch = evaluate_batch(net, pts);
    for (std::size_t i = 0; i < pts.size(); ++i) ASSERT_EQ(batch[i], evaluate(net, pts[i])) << act.name();
  }
  const ShallowNet net(Activation::relu(), random_measure(2, 3, 1));
  EXPECT_THROW(evaluate_batch(net, {{0.1}}), Error);
}
