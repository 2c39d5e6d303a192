#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "oscseg/error.hpp"
#include "oscseg/models.hpp"

namespace {

using namespace oscseg;

NeuralParams fig1_neural() {
  NeuralParams p;
  p.epsilon = 0.1;
  p.gamma = 4.0;
  return p;
}

TEST(NeuralDerivative, SubstitutionAtOrigin) {
  NeuralParams p;
  const auto d = neural_derivative({0.0, 0.0}, p, 2.0, 0.0);
  EXPECT_DOUBLE_EQ(d.x, 4.02);
}

TEST(NeuralDerivative, SlowVariableExamples) {
  const NeuralParams p = fig1_neural();
  EXPECT_DOUBLE_EQ(neural_derivative({0.0, 4.0}, p, 0.0, 0.0).y, 0.0);
  EXPECT_DOUBLE_EQ(neural_derivative({0.0, 0.0}, p, 0.0, 0.0).y, 0.4);
}

TEST(NeuralDerivative, CouplingAndOffsetEnterAdditively) {
  NeuralParams p;
  const NeuralState s{0.3, 1.2};
  const auto base = neural_derivative(s, p, 2.5, 0.0);
  EXPECT_DOUBLE_EQ(neural_derivative(s, p, 2.5, 0.7).x - base.x, 0.7);
  EXPECT_NEAR(neural_derivative(s, p, 2.5, 0.0, 0.5).x - base.x, 0.48, 1e-14);
}

TEST(BzSigmoid, Examples) {
  EXPECT_DOUBLE_EQ(bz_sigmoid(0.0, 5.0), 0.5);
  EXPECT_DOUBLE_EQ(bz_sigmoid(1e3, 1.0), 1.0);
  EXPECT_NEAR(bz_sigmoid(-0.5, 10.0), (1.0 + std::tanh(-5.0)) / 2.0, 1e-18);
  EXPECT_NEAR(bz_sigmoid(-0.5, 10.0), 4.54e-5, 0.01e-5);
}

// Sampled where beta * x stays inside the range tanh resolves from +-1 in
// double precision.
TEST(BzSigmoid, BoundedAndMonotoneProperty) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> bx(-15.0, 15.0), bs(0.1, 20.0), step(1e-6, 2.0);
  for (int i = 0; i < 2000; ++i) {
    const double b = bs(gen);
    const double x = bx(gen) / b;
    const double f = bz_sigmoid(x, b);
    EXPECT_GT(f, 0.0);
    EXPECT_LT(f, 1.0);
    const double dx = step(gen) / b;
    if (b * (x + dx) <= 15.0) {
      EXPECT_GT(bz_sigmoid(x + dx, b), f);
    }
    EXPECT_GE(bz_sigmoid(x + 100.0, b), f);
  }
}

TEST(BzDerivative, Examples) {
  BzParams p;
  const auto d = bz_derivative({0.0, 0.0}, p, 0.06, 0.0);
  EXPECT_NEAR(d.x1, 0.5 / 0.06, 1e-12);
  EXPECT_NEAR(d.x1, 8.3333, 1e-4);
  EXPECT_NEAR(d.x2, 4.54e-5, 0.01e-5);
}

TEST(BzDerivative, InhibitorNullcline) {
  BzParams p;
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-0.5, 1.5);
  for (int i = 0; i < 100; ++i) {
    const double x1 = u(gen);
    const double x2 = (1.0 + std::tanh(p.beta2 * (x1 - p.theta))) / 2.0;
    EXPECT_NEAR(bz_derivative({x1, x2}, p, 0.05, 0.0).x2, 0.0, 1e-15);
  }
}

TEST(BzDerivative, CouplingSitsOutsideTimeConstant) {
  BzParams p;
  const BzState s{0.2, 0.4};
  const double base = bz_derivative(s, p, 0.02, 0.0).x1;
  EXPECT_NEAR(bz_derivative(s, p, 0.02, 0.3).x1 - base, 0.3, 1e-12);
}

TEST(MemsDerivative, Examples) {
  MemsParams p;
  const auto zero = mems_derivative({0.0, 0.0}, p, 2.0 * std::numbers::pi, {});
  EXPECT_EQ(zero.z_re, 0.0);
  EXPECT_EQ(zero.z_im, 0.0);
  const auto one = mems_derivative({1.0, 0.0}, p, 2.0 * std::numbers::pi, {});
  EXPECT_DOUBLE_EQ(one.z_re, 0.0);
  EXPECT_DOUBLE_EQ(one.z_im, 2.0 * std::numbers::pi);
}

TEST(MemsDerivative, UnitCircleIsInvariant) {
  MemsParams p;
  for (int k = 0; k < 64; ++k) {
    const double a = 2.0 * std::numbers::pi * k / 64.0;
    const MemsState s{std::cos(a), std::sin(a)};
    const auto d = mems_derivative(s, p, 6.5, {});
    EXPECT_NEAR(2.0 * (s.z_re * d.z_re + s.z_im * d.z_im), 0.0, 1e-14);
  }
}

TEST(MemsDerivative, RadialSignProperty) {
  MemsParams p;
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> r(0.01, 3.0), a(0.0, 2.0 * std::numbers::pi),
      w(2.0 * std::numbers::pi, 2.2 * std::numbers::pi);
  for (int i = 0; i < 1000; ++i) {
    const double rad = r(gen);
    if (std::abs(rad - 1.0) < 1e-9) continue;
    const double ang = a(gen);
    const MemsState s{rad * std::cos(ang), rad * std::sin(ang)};
    const auto d = mems_derivative(s, p, w(gen), {});
    const double radial = 2.0 * (s.z_re * d.z_re + s.z_im * d.z_im);
    EXPECT_EQ(radial > 0.0, rad < 1.0) << "r=" << rad;
  }
}

TEST(MemsDerivative, ComplexCouplingAddsComponentwise) {
  MemsParams p;
  const MemsState s{0.3, -0.2};
  const auto base = mems_derivative(s, p, 6.4, {});
  const auto coupled = mems_derivative(s, p, 6.4, {0.25, -0.5});
  EXPECT_NEAR(coupled.z_re - base.z_re, 0.25, 1e-15);
  EXPECT_NEAR(coupled.z_im - base.z_im, -0.5, 1e-15);
}

// Hand-expanded forms of the right-hand sides, written without the library's
// helpers, compared at random points.
TEST(Derivatives, AgreeWithHandExpansion) {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> u(-2.0, 2.0), pos(0.05, 12.0);
  for (int i = 0; i < 100; ++i) {
    NeuralParams np;
    np.rho = u(gen) * 0.1;
    np.epsilon = pos(gen) / 10.0;
    np.gamma = pos(gen);
    np.beta = pos(gen) / 10.0;
    const double x = u(gen), y = 5.0 * u(gen), I = 2.0 + u(gen), S = u(gen);
    const double ex = 3.0 * x - x * x * x - y + 2.0 + np.rho + I + S;
    const double ey = np.epsilon * (np.gamma * (1.0 + std::tanh(x / np.beta)) - y);
    const auto nd = neural_derivative({x, y}, np, I, S);
    EXPECT_NEAR(nd.x, ex, 1e-12 * std::max(1.0, std::abs(ex)));
    EXPECT_NEAR(nd.y, ey, 1e-12 * std::max(1.0, std::abs(ey)));

    BzParams bp;
    bp.beta1 = pos(gen);
    bp.beta2 = pos(gen);
    bp.theta = std::abs(u(gen)) / 2.0;
    const double x1 = u(gen), x2 = u(gen), tau = pos(gen) / 10.0, Sb = u(gen);
    const double f1 = (1.0 + std::tanh(bp.beta1 * (x1 - x2))) / 2.0;
    const double f2 = (1.0 + std::tanh(bp.beta2 * (x1 - bp.theta))) / 2.0;
    const double e1 = (-x1 + f1) / tau + Sb;
    const double e2 = -x2 + f2;
    const auto bd = bz_derivative({x1, x2}, bp, tau, Sb);
    EXPECT_NEAR(bd.x1, e1, 1e-12 * std::max(1.0, std::abs(e1)));
    EXPECT_NEAR(bd.x2, e2, 1e-12 * std::max(1.0, std::abs(e2)));

    MemsParams mp;
    const std::complex<double> z{u(gen), u(gen)}, Sm{u(gen), u(gen)};
    const double w = pos(gen);
    const std::complex<double> ez = std::complex<double>(mp.damping_c, w) * z +
                                    mp.nonlinear_d * z * std::norm(z) + Sm;
    const auto md = mems_derivative({z.real(), z.imag()}, mp, w, Sm);
    EXPECT_NEAR(md.z_re, ez.real(), 1e-12 * std::max(1.0, std::abs(ez)));
    EXPECT_NEAR(md.z_im, ez.imag(), 1e-12 * std::max(1.0, std::abs(ez)));
  }
}

TEST(Derivatives, PureBitwiseRepeatable) {
  NeuralParams np;
  BzParams bp;
  MemsParams mp;
  for (int i = 0; i < 3; ++i) {
    const auto a = neural_derivative({0.123, 4.56}, np, 3.3, 0.01);
    const auto b = neural_derivative({0.123, 4.56}, np, 3.3, 0.01);
    EXPECT_EQ(a.x, b.x);
    EXPECT_EQ(a.y, b.y);
    const auto c = bz_derivative({0.7, 0.2}, bp, 0.03, 0.1);
    const auto d = bz_derivative({0.7, 0.2}, bp, 0.03, 0.1);
    EXPECT_EQ(c.x1, d.x1);
    EXPECT_EQ(c.x2, d.x2);
    const auto e = mems_derivative({0.7, 0.2}, mp, 6.5, {0.1, 0.2});
    const auto f = mems_derivative({0.7, 0.2}, mp, 6.5, {0.1, 0.2});
    EXPECT_EQ(e.z_re, f.z_re);
    EXPECT_EQ(e.z_im, f.z_im);
  }
}

TEST(FixedPoint, NeuralInactiveAndActiveModes) {
  const NeuralParams p = fig1_neural();
  EXPECT_TRUE(converges_to_fixed_point(p, -1.0));
  EXPECT_FALSE(converges_to_fixed_point(p, 1.0));
  EXPECT_TRUE(converges_to_fixed_point(p, -10.0));
}

TEST(FixedPoint, BzModeSelectedByTheta) {
  BzParams osc;
  osc.theta = 0.5;
  BzParams exc;
  exc.theta = 0.1;
  EXPECT_FALSE(converges_to_fixed_point(osc, 0.06));
  EXPECT_TRUE(converges_to_fixed_point(exc, 0.06));
}

TEST(Params, Validation) {
  NeuralParams n;
  EXPECT_NO_THROW(validate(n));
  n.epsilon = 0.0;
  EXPECT_THROW(validate(n), Error);
  n = {};
  n.stimulus_hi = n.stimulus_lo;
  EXPECT_THROW(validate(n), Error);

  BzParams b;
  EXPECT_NO_THROW(validate(b));
  b.tau_lo = 0.0;
  EXPECT_THROW(validate(b), Error);

  MemsParams m;
  EXPECT_NO_THROW(validate(m));
  m.nonlinear_d = 0.5;
  EXPECT_THROW(validate(m), Error);
  m = {};
  m.omega_hi = m.omega_lo;
  EXPECT_THROW(validate(m), Error);
}

TEST(Params, KindNamesRoundTrip) {
  for (auto k : {ModelKind::neural, ModelKind::bz, ModelKind::mems}) {
    EXPECT_EQ(parse_model_kind(to_string(k)), k);
    EXPECT_EQ(kind_of(default_model(k)), k);
  }
  try {
    parse_model_kind("kuramoto");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::invalid_config);
  }
}

TEST(Params, ControlRangesMatchPipelineDefaults) {
  const auto n = control_range(default_model(ModelKind::neural));
  EXPECT_EQ(n.lo, 2.0);
  EXPECT_EQ(n.hi, 4.0);
  const auto b = control_range(default_model(ModelKind::bz));
  EXPECT_EQ(b.lo, 0.01);
  EXPECT_EQ(b.hi, 0.11);
  const auto m = control_range(default_model(ModelKind::mems));
  EXPECT_DOUBLE_EQ(m.lo, 2.0 * std::numbers::pi);
  EXPECT_DOUBLE_EQ(m.hi, 2.2 * std::numbers::pi);
  EXPECT_EQ(event_level(default_model(ModelKind::bz)), 0.5);
  EXPECT_EQ(event_level(default_model(ModelKind::neural)), 0.0);
  EXPECT_EQ(event_level(default_model(ModelKind::mems)), 0.0);
}

}  // namespace
