#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "barron/error.hpp"
#include "barron/pushforward.hpp"
#include "barron/verify.hpp"
#include "helpers.hpp"

using namespace barron;

namespace {

ShallowNet single(const Activation& act, double w, double b, double m) {
  DiscreteMeasure mu(1);
  mu.add({w}, b, m);
  return ShallowNet(act, mu);
}

double sup_vs(const ShallowNet& net, const std::function<double(double)>& f, int n = 1000) {
  return sup_error(net, [&](std::span<const double> x) { return f(x[0]); }, Sampler::grid(n));
}

}  // namespace

TEST(RepuLower, UnitAtomMatchesIntegralOracle) {
  const auto src = single(Activation::repu(2), 1.0, 0.3, 1.0);
  const auto c = repu_lower(src, {QuadRule::kGaussLegendre, 128});
  EXPECT_TRUE(c.net.activation.is_relu());
  // Reference: 2 int_0^theta relu(z - u) du via adaptive oracle, z = x + 0.3.
  const double z = 0.8;
  const std::vector<double> kink{z};
  const double oracle =
      oracle_integral([z](double u) { return 2.0 * std::max(0.0, z - u); }, 0.0, 1.3, kink);
  EXPECT_NEAR(oracle, 0.64, 1e-12);
  const std::vector<double> x{0.5};
  EXPECT_NEAR(evaluate(c.net, x), oracle, 1e-3);
  EXPECT_DOUBLE_EQ(c.certificate.constant, 3.0);
  EXPECT_LE(c.certificate.target_norm.value, 3.0 * c.certificate.source_norm.value * 1.05);
}

TEST(RepuLower, ZeroReachAtomDropped) {
  DiscreteMeasure mu(1);
  mu.add({0.0}, 0.0, 5.0);
  mu.add({1.0}, 0.0, 1.0);
  const auto c = repu_lower(ShallowNet(Activation::repu(2), mu), {QuadRule::kGaussLegendre, 16});
  EXPECT_EQ(c.net.measure.size(), 16u);
  const auto only = repu_lower(single(Activation::repu(2), 1.0, 0.0, 1.0),
                               {QuadRule::kGaussLegendre, 16});
  EXPECT_EQ(sup_error(c.net, only.net, Sampler::grid(200)), 0.0);
}

TEST(RepuLower, WrongActivation) {
  try {
    repu_lower(single(Activation::relu(), 1.0, 0.0, 1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kWrongActivation);
  }
}

TEST(RepuLower, ChainConstantsMultiply) {
  const auto src = single(Activation::repu(3), 0.6, 0.2, 1.0);
  const auto c = repu_lower_to(src, 1, {QuadRule::kGaussLegendre, 64});
  EXPECT_TRUE(c.net.activation.is_relu());
  EXPECT_DOUBLE_EQ(c.certificate.constant, 7.0 * 3.0);
  EXPECT_LE(c.certificate.target_norm.value, c.certificate.constant * c.certificate.source_norm.value);
  EXPECT_LT(sup_vs(c.net, [](double x) { return std::pow(std::max(0.0, 0.6 * x + 0.2), 3); }),
            1e-3);
}

TEST(TaylorToRelu, TanhConverges) {
  const auto src = single(Activation::tanh(), 1.0, 0.0, 1.0);
  const auto c = taylor_to_relu(src, 0.0, {QuadRule::kGaussLegendre, 1024});
  EXPECT_LE(sup_vs(c.net, [](double x) { return std::tanh(x); }), 1e-3);
  EXPECT_DOUBLE_EQ(c.certificate.constant, 6.0);
}

TEST(TaylorToRelu, ShiftedExpansionPointStillExact) {
  const auto src = single(Activation::logistic(), 1.5, -0.2, 0.7);
  for (double y : {-2.0, 0.7, 3.0}) {
    const auto c = taylor_to_relu(src, y, {QuadRule::kGaussLegendre, 1024});
    EXPECT_LE(sup_vs(c.net, [](double x) { return 0.7 / (1 + std::exp(-(1.5 * x - 0.2))); }),
              1e-6)
        << "y=" << y;
    EXPECT_DOUBLE_EQ(c.certificate.constant, gamma_constant(Activation::logistic(), y));
  }
}

TEST(TaylorToRelu, AffineIsExact) {
  const auto src = single(Activation::affine(2.0, 0.5), 0.8, 0.1, 1.0);
  const auto c = taylor_to_relu(src, 0.0, {QuadRule::kGaussLegendre, 32});
  EXPECT_EQ(c.net.measure.size(), 3u);  // nu_1, nu_2, nu_3; remainder masses are zero
  EXPECT_LE(sup_vs(c.net, [](double x) { return 2.0 * (0.8 * x + 0.1) + 0.5; }), 1e-12);
}

TEST(ExpansionPoint, Selection) {
  EXPECT_EQ(select_expansion_point(Activation::tanh()), 0.0);
  const double y = select_expansion_point(Activation::logistic());
  EXPECT_LE(gamma_constant(Activation::logistic(), y), 2.0);
  EXPECT_DOUBLE_EQ(gamma_constant(Activation::logistic(), 0.0), 2.0);
  EXPECT_EQ(select_expansion_point(Activation::affine(3.0, -1.0)), 0.0);
  EXPECT_EQ(grid_points({}).size(), 101u);
}

TEST(TaylorToRepuS, SOneMatchesTaylorToRelu) {
  const auto src = single(Activation::tanh(), 0.9, -0.3, 1.2);
  const QuadratureSpec q{QuadRule::kGaussLegendre, 256};
  const auto a = taylor_to_repu_s(src, 1, 1.5, q);
  const auto b = taylor_to_relu(src, 0.0, q);
  for (const auto& x : testing_util::random_points(1, 100, 8)) {
    EXPECT_NEAR(evaluate(a.net, x), evaluate(b.net, x), 1e-10);
  }
}

TEST(TaylorToRepuS, SineOrderTwo) {
  const auto src = single(Activation::sine(), 0.7, 0.1, 1.0);
  const auto c = taylor_to_repu_s(src, 2, 1.0, {QuadRule::kGaussLegendre, 512});
  EXPECT_EQ(c.net.activation.repu_order(), 2);
  EXPECT_LE(sup_vs(c.net, [](double x) { return std::sin(0.7 * x + 0.1); }), 1e-3);
  EXPECT_TRUE(check_certificate(c.certificate, 0.05).pass);
}

TEST(TaylorToRepuS, HigherOrders) {
  const auto src = single(Activation::tanh(), 0.5, 0.2, -1.0);
  for (int s = 2; s <= 4; ++s) {
    const auto c = taylor_to_repu_s(src, s, 1.0, {QuadRule::kGaussLegendre, 256});
    EXPECT_LE(sup_vs(c.net, [](double x) { return -std::tanh(0.5 * x + 0.2); }), 1e-8)
        << "s=" << s;
    EXPECT_TRUE(check_certificate(c.certificate, 0.05).pass) << "s=" << s;
  }
}

TEST(TaylorToRepuS, OutsideRadius) {
  const auto src = single(Activation::tanh(), 2.0, 0.5, 1.0);
  try {
    taylor_to_repu_s(src, 2, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOutsideRadius);
  }
}

TEST(Substitute, LeakyReluToRelu) {
  DiscreteMeasure gamma(1);
  gamma.add({1.0}, 0.0, 1.0);
  gamma.add({-1.0}, 0.0, -0.01);
  const ShallowNet src(Activation::leaky_relu(0.01), testing_util::random_measure(1, 20, 5, 2.0));
  SubstituteOptions opts;
  opts.check = true;
  const auto c = substitute(src, gamma, Activation::relu(), opts);
  EXPECT_LE(sup_error(src, c.net, Sampler::grid(10000)), 1e-12);
  EXPECT_NEAR(c.certificate.constant, 2.02, 1e-15);
  EXPECT_FALSE(c.certificate.quadrature.has_value());
  EXPECT_LE(c.certificate.slack, 1e-9);
}

TEST(Substitute, Relu6ToRelu) {
  DiscreteMeasure gamma(1);
  gamma.add({1.0}, 0.0, 1.0);
  gamma.add({1.0}, -6.0, -1.0);
  DiscreteMeasure mu(1);
  mu.add({5.0}, 2.0, 1.0);  // reach 7 crosses the upper kink
  const ShallowNet src(Activation::relu6(), mu);
  SubstituteOptions opts;
  opts.check = true;
  const auto c = substitute(src, gamma, Activation::relu(), opts);
  EXPECT_LE(sup_error(src, c.net, Sampler::grid(1000)), 1e-12);
  EXPECT_DOUBLE_EQ(c.certificate.constant, 10.0);
}

TEST(Substitute, IdentityIsBitExact) {
  DiscreteMeasure gamma(1);
  gamma.add({1.0}, 0.0, 1.0);
  const ShallowNet src(Activation::tanh(), testing_util::random_measure(3, 25, 6));
  const auto c = substitute(src, gamma, Activation::tanh());
  EXPECT_EQ(c.net.measure, src.measure);
  EXPECT_DOUBLE_EQ(c.certificate.constant, 2.0);
}

TEST(Substitute, BadGammaRejected) {
  DiscreteMeasure gamma(1);
  gamma.add({1.0}, 0.0, 1.0);
  SubstituteOptions opts;
  opts.check = true;
  const ShallowNet src(Activation::leaky_relu(0.01), testing_util::random_measure(1, 4, 2));
  EXPECT_THROW(substitute(src, gamma, Activation::relu(), opts), Error);
  EXPECT_THROW(substitute(src, DiscreteMeasure(2), Activation::relu()), Error);
}

TEST(KernelDiscretize, NarrowGaussianIsNearIdentity) {
  const double sigma = 1e-3;
  Kernel k;
  k.density = [sigma](double z) {
    return std::exp(-0.5 * z * z / (sigma * sigma)) / (sigma * std::sqrt(2 * std::numbers::pi));
  };
  k.tail_bound = [](int) { return 0.0; };
  const auto gamma = kernel_discretize(k, 0.02, {QuadRule::kGaussLegendre, 64});
  const ShallowNet src(Activation::tanh(), testing_util::random_measure(1, 5, 9));
  const auto c = substitute(src, gamma, Activation::tanh());
  EXPECT_LE(sup_error(src, c.net, Sampler::grid(1000)), 1e-4);
}

TEST(KernelDiscretize, UniformKernelReproducesRepuLowering) {
  // psi * 1_[0,1] with psi = relu equals (repu_2(z) - repu_2(z - 1)) / 2.
  Kernel k;
  k.density = [](double z) { return (z >= 0.0 && z <= 1.0) ? 1.0 : 0.0; };
  k.tail_bound = [](int) { return 0.0; };
  const auto gamma = kernel_discretize(k, 1.0, {QuadRule::kGaussLegendre, 128});
  auto conv = Activation::custom(
      "relu*box",
      [](int kk, double z) {
        auto r2 = [](double t) { return t > 0 ? t * t : 0.0; };
        if (kk != 0) return 0.0;
        return 0.5 * (r2(z) - r2(z - 1.0));
      },
      0);
  const ShallowNet src(conv, testing_util::random_measure(1, 3, 14));
  const auto c = substitute(src, gamma, Activation::relu());
  EXPECT_LE(sup_error(src, c.net, Sampler::grid(1000)), 1e-3);
  EXPECT_THROW(kernel_discretize(k, 0.0), Error);
  Kernel no_tail;
  no_tail.density = k.density;
  EXPECT_THROW(kernel_discretize(no_tail, 1.0), Error);
}

TEST(SeriesSubstitute, Constants) {
  const ShallowNet src(Activation::tanh(), testing_util::random_measure(1, 3, 1));
  const auto id = series_substitute(
      src, [](int k) { return k == 1 ? 1.0 : 0.0; }, [](int) { return 1.0; }, 1,
      Activation::tanh());
  EXPECT_EQ(id.net.measure, src.measure);
  double prev = 0.0;
  for (int K = 1; K <= 64; K *= 2) {
    const auto c = series_substitute(
        src, [](int k) { return std::ldexp(1.0, -k); }, [](int) { return 1.0; }, K,
        Activation::tanh());
    EXPECT_GE(c.certificate.constant, prev);
    EXPECT_LE(c.certificate.constant, 2.0);
    prev = c.certificate.constant;
  }
  EXPECT_THROW(series_substitute(src, [](int) { return 1.0; }, [](int) { return 1.0; }, 0,
                                 Activation::tanh()),
               Error);
}

TEST(DerivativeShift, LogisticToSoftplus) {
  const auto src = single(Activation::logistic(), 1.0, 0.0, 1.0);
  const double h = 1e-3;
  const auto r = derivative_shift(src, Activation::softplus(), h);
  const double err = sup_error(src, r.net, Sampler::grid(1001));
  EXPECT_DOUBLE_EQ(r.error_bound, 0.5 * h * 0.25);
  EXPECT_LE(err, r.error_bound);
  const auto half = derivative_shift(src, Activation::softplus(), h / 2);
  const double ratio = err / sup_error(src, half.net, Sampler::grid(1001));
  EXPECT_NEAR(ratio, 2.0, 0.2);
}

TEST(DerivativeShift, ZeroMassAndBadStep) {
  const auto src = single(Activation::logistic(), 1.0, 0.0, 0.0);
  const auto r = derivative_shift(src, Activation::softplus(), 1e-2);
  const std::vector<double> x{0.3};
  EXPECT_EQ(evaluate(r.net, x), 0.0);
  EXPECT_THROW(derivative_shift(src, Activation::softplus(), 0.0), Error);
  EXPECT_THROW(derivative_shift(src, Activation::relu(), 1e-2), Error);
}

TEST(PiecewiseToRelu, EluConverges) {
  const auto src = single(Activation::elu(), 1.0, 0.0, 1.0);
  const auto c = piecewise_to_relu(src, {QuadRule::kGaussLegendre, 512});
  EXPECT_LE(sup_vs(c.net, [](double x) { return x >= 0 ? x : std::expm1(x); }), 1e-3);
  EXPECT_DOUBLE_EQ(c.certificate.constant, 4.0);
  EXPECT_DOUBLE_EQ(piecewise_gamma(Activation::elu()), 4.0);
}

TEST(PiecewiseToRelu, ReluIsReturnedExactly) {
  const ShallowNet src(Activation::piecewise_relu(), testing_util::random_measure(2, 10, 31));
  const auto c = piecewise_to_relu(src, {QuadRule::kGaussLegendre, 64});
  EXPECT_EQ(c.net.measure, src.measure);
  EXPECT_LE(sup_error(src, c.net, Sampler::random(1000, 1)), 1e-12);
  EXPECT_THROW(piecewise_to_relu(single(Activation::tanh(), 1, 0, 1)), Error);
}

TEST(Certificates, ExactSlackAndMargin) {
  DiscreteMeasure gamma(1);
  gamma.add({1.0}, 0.0, 1.0);
  const ShallowNet src(Activation::tanh(), testing_util::random_measure(2, 5, 4));
  const auto c = substitute(src, gamma, Activation::tanh());
  EXPECT_EQ(c.certificate.slack, 0.0);
  EXPECT_NEAR(c.certificate.margin, c.certificate.source_norm.value, 1e-12);
}
