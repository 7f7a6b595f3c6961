#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "barron/activation.hpp"
#include "barron/error.hpp"
#include "helpers.hpp"

using namespace barron;

namespace {

std::vector<Activation> smooth_builtins() {
  return {Activation::tanh(), Activation::arctan(), Activation::logistic(),
          Activation::softplus(), Activation::sine()};
}

}  // namespace

TEST(Activation, FirstDerivativesAtZero) {
  EXPECT_DOUBLE_EQ(Activation::tanh().derivative(1, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(Activation::softplus().derivative(1, 0.0), 0.5);
  EXPECT_DOUBLE_EQ(Activation::logistic().derivative(1, 0.0), 0.25);
  EXPECT_DOUBLE_EQ(Activation::arctan().derivative(1, 0.0), 1.0);
}

TEST(Activation, TanhSecondDerivativeFiniteDifference) {
  const auto t = Activation::tanh();
  const double h = 1e-5;
  const double fd = (t.derivative(1, 0.5 + h) - t.derivative(1, 0.5 - h)) / (2 * h);
  EXPECT_NEAR(t.derivative(2, 0.5), fd, 1e-6);
}

// Every builtin: D^k against central differences of D^{k-1}, k <= 4, 100
// points on [-5, 5].
TEST(Activation, DerivativesMatchFiniteDifferences) {
  const auto zs = testing_util::linspace(-5.0, 5.0, 100);
  for (const auto& act : smooth_builtins()) {
    for (int k = 1; k <= 4; ++k) {
      for (double z : zs) {
        const double h = 1e-4 * std::max(1.0, std::abs(z));
        const double fd =
            (act.derivative(k - 1, z + h) - act.derivative(k - 1, z - h)) / (2 * h);
        const double exact = act.derivative(k, z);
        EXPECT_NEAR(exact, fd, 1e-6 * std::max(1.0, std::abs(exact)))
            << act.name() << " k=" << k << " z=" << z;
      }
    }
  }
}

TEST(Activation, PiecewiseBranchesAwayFromKink) {
  const auto elu = Activation::elu();
  for (double z : {-3.0, -0.5, 0.5, 2.0}) {
    for (int k = 1; k <= 4; ++k) {
      const double h = 1e-5;
      const double fd = (elu.derivative(k - 1, z + h) - elu.derivative(k - 1, z - h)) / (2 * h);
      EXPECT_NEAR(elu.derivative(k, z), fd, 1e-6);
    }
  }
}

TEST(Activation, AmbiguousAtKink) {
  const auto elu = Activation::elu();
  EXPECT_EQ(elu.derivative(1, 0.0), 1.0);  // both branches agree
  try {
    elu.derivative(2, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAmbiguousAtKink);
  }
  EXPECT_EQ(elu.derivative(2, 0.0, Branch::kPlus), 0.0);
  EXPECT_EQ(elu.derivative(2, 0.0, Branch::kMinus), 1.0);
  EXPECT_THROW(Activation::relu().derivative(1, 0.0), Error);
  EXPECT_EQ(Activation::relu().derivative(1, 0.0, Branch::kPlus), 1.0);
  EXPECT_EQ(Activation::repu(3).derivative(2, 0.0), 0.0);
}

TEST(Activation, OrderExceeded) {
  try {
    Activation::tanh().derivative(6, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOrderExceeded);
  }
}

TEST(Activation, AnalyticL1) {
  EXPECT_DOUBLE_EQ(Activation::tanh().deriv_l1(2).value, 2.0);
  EXPECT_DOUBLE_EQ(Activation::logistic().deriv_l1(2).value, 0.5);
  EXPECT_DOUBLE_EQ(Activation::softplus().deriv_l1(2).value, 1.0);
  EXPECT_TRUE(Activation::tanh().deriv_l1(2).analytic);
}

TEST(Activation, NumericL1AgreesWithAnalytic) {
  // tanh''' integral numerically vs its own numeric path for a custom copy.
  const auto t = Activation::tanh();
  auto custom = Activation::custom(
      "tanh-copy", [t](int k, double z) { return t.derivative(k, z); }, 5);
  const auto v = custom.deriv_l1(2);
  EXPECT_FALSE(v.analytic);
  EXPECT_FALSE(v.trusted);  // no tail bound supplied
  EXPECT_NEAR(v.value, 2.0, 1e-9);
  EXPECT_NEAR(t.local_l1(2, -1.0, 1.0), 2.0 * std::pow(std::tanh(1.0), 2), 1e-10);
}

TEST(Activation, NotIntegrable) {
  try {
    Activation::relu().deriv_l1(1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotIntegrable);
  }
  EXPECT_THROW(Activation::sine().deriv_l1(3), Error);
}

TEST(Activation, RepuValuesExact) {
  for (int s = 1; s <= 5; ++s) {
    const auto r = Activation::repu(s);
    for (double z : testing_util::linspace(-2.0, 2.0, 101)) {
      EXPECT_EQ(r(z), z >= 0 ? std::pow(z, s) : 0.0);
    }
  }
  EXPECT_THROW(Activation::repu(0), Error);
}

TEST(Activation, PiecewiseContinuity) {
  for (const auto& act : {Activation::elu(), Activation::leaky_relu(0.01),
                          Activation::piecewise_relu()}) {
    EXPECT_EQ(act.derivative(0, 0.0, Branch::kPlus), act.derivative(0, 0.0, Branch::kMinus));
  }
}

TEST(Activation, BranchIntegrals) {
  const auto elu = Activation::elu();
  EXPECT_DOUBLE_EQ(elu.branch_l1(2, Branch::kPlus).value, 0.0);
  EXPECT_DOUBLE_EQ(elu.branch_l1(2, Branch::kMinus).value, 1.0);
  EXPECT_THROW(Activation::tanh().branch_l1(2, Branch::kPlus), Error);
}

TEST(Activation, SecondDerivativeSupremum) {
  const auto zs = testing_util::linspace(-8.0, 8.0, 4001);
  for (const auto& act : smooth_builtins()) {
    const auto sup = act.second_deriv_sup();
    ASSERT_TRUE(sup.has_value()) << act.name();
    double seen = 0.0;
    for (double z : zs) seen = std::max(seen, std::abs(act.derivative(2, z)));
    EXPECT_LE(seen, *sup * (1 + 1e-12)) << act.name();
    EXPECT_GE(seen, *sup * (1 - 1e-4)) << act.name();
  }
}

TEST(Activation, FromName) {
  EXPECT_TRUE(Activation::from_name("relu").is_relu());
  EXPECT_EQ(Activation::from_name("repu", 3).repu_order(), 3);
  EXPECT_EQ(Activation::from_name("lrelu", 0, {{"alpha", 0.2}})(-1.0), -0.2);
  EXPECT_EQ(Activation::from_name("relu6")(7.0), 6.0);
  try {
    Activation::from_name("swish");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownActivation);
  }
  EXPECT_THROW(Activation::from_name("custom"), Error);
}

TEST(Activation, SupAbs) {
  EXPECT_DOUBLE_EQ(Activation::tanh().sup_abs(2.0), std::tanh(2.0));
  EXPECT_DOUBLE_EQ(Activation::sine().sup_abs(10.0), 1.0);
  EXPECT_DOUBLE_EQ(Activation::logistic().sup_abs(1.0), 1.0 / (1.0 + std::exp(-1.0)));
}
