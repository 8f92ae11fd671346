#include "telewig/conditional_teleport.hpp"
#include "telewig/gain_optimizer.hpp"
#include "telewig/gaussian_channel.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace telewig;

namespace {

double r_db(double db) { return SqueezeSpec::from_db(db).r(); }

double objective(double r, double g) { return origin_symmetric(r, g, 1.0); }

}  // namespace

TEST(CubicCoefficients, Values) {
  const auto cc = cubic_coefficients(1.0);
  ASSERT_TRUE(cc.has_value());
  EXPECT_NEAR(cc->a, -3.939105856, 1e-9);
  EXPECT_NEAR(cc->c, -1.0 / std::tanh(2.0), 1e-14);
  const auto big = cubic_coefficients(7.5);
  ASSERT_TRUE(big.has_value());
  EXPECT_NEAR(big->a, -3.0, 1e-5);
  EXPECT_NEAR(big->b, 3.0, 1e-5);
  EXPECT_NEAR(big->c, -1.0, 1e-5);
  const auto small = cubic_coefficients(0.01);
  ASSERT_TRUE(small.has_value());
  EXPECT_NEAR(small->a, -300.0, 0.1);
  EXPECT_TRUE(std::isfinite(small->b));
  EXPECT_FALSE(cubic_coefficients(kCubicMinSqueeze).has_value());
  EXPECT_FALSE(cubic_coefficients(0.0).has_value());
}

TEST(CubicRoots, VietaAndResiduals) {
  for (double r = 0.01; r <= 6.0; r += 0.07) {
    const auto cc = *cubic_coefficients(r);
    const auto roots = cubic_roots(cc);
    EXPECT_NEAR(roots[0] + roots[1] + roots[2], -cc.a, 1e-9 * std::abs(cc.a)) << r;
    for (double g : roots) {
      const double scale = std::abs(g * g * g) + std::abs(cc.a * g * g) + std::abs(cc.b * g) + std::abs(cc.c);
      const double res = g * g * g + cc.a * g * g + cc.b * g + cc.c;
      EXPECT_LT(std::abs(res), 1e-9 * scale) << r;
    }
  }
}

TEST(CubicRoots, ConvergeToOneAtLargeSqueezing) {
  const auto roots = cubic_roots(*cubic_coefficients(6.0));
  for (double g : roots) EXPECT_NEAR(g, 1.0, 0.02);
  EXPECT_NEAR(optimal_gain(12.0), 1.0, 1e-6);
  EXPECT_EQ(optimal_gain_detail(12.0).method, GainChoice::Method::numeric);
}

TEST(CubicRoots, MiddleRootAtCrossover) {
  const auto roots = cubic_roots(*cubic_coefficients(r_db(-5.52)));
  EXPECT_NEAR(roots[1], 1.0, 0.01);
}

TEST(CubicRoots, RejectsNonNegativeP) {
  EXPECT_THROW(cubic_roots(CubicCoeffs{0.0, 1.0, 0.0}), std::domain_error);
}

TEST(OptimalGain, QuotedOrigins) {
  EXPECT_NEAR(objective(r_db(-3.0), optimal_gain(r_db(-3.0))), -0.0091, 5e-4);
  EXPECT_NEAR(objective(r_db(-5.0), optimal_gain(r_db(-5.0))), -0.0442, 5e-4);
  EXPECT_NEAR(objective(r_db(-7.0), optimal_gain(r_db(-7.0))), -0.0993, 5e-4);
  EXPECT_NEAR(objective(r_db(-10.0), optimal_gain(r_db(-10.0))), -0.1826, 5e-4);
}

TEST(OptimalGain, FrozenGains) {
  EXPECT_NEAR(optimal_gain(r_db(-3.0)), 1.33122, 1e-5);
  EXPECT_NEAR(optimal_gain(r_db(-5.0)), 1.02870, 1e-5);
  EXPECT_NEAR(optimal_gain(r_db(-7.0)), 0.96051, 1e-5);
  EXPECT_NEAR(optimal_gain(r_db(-10.0)), 0.95688, 1e-5);
}

TEST(OptimalGain, AmplifierBelowCrossover) {
  for (double db = -5.4; db <= -0.5; db += 0.1) EXPECT_GT(optimal_gain(r_db(db)), 1.0) << db;
  for (double db = -15.0; db <= -5.6; db += 0.1) EXPECT_LT(optimal_gain(r_db(db)), 1.0) << db;
  const double rc = gain_crossover_r();
  EXPECT_NEAR(SqueezeSpec::from_r(rc).db(), -5.52, 0.02);
  EXPECT_NEAR(SqueezeSpec::from_r(rc).db(), -5.51639, 1e-4);
}

TEST(OptimalGain, Stationarity) {
  const double h = 1e-6;
  for (double r = 0.05; r <= 3.0; r += 0.05) {
    const double g = optimal_gain(r);
    const double d = (objective(r, g + h) - objective(r, g - h)) / (2.0 * h);
    EXPECT_LT(std::abs(d), 1e-6) << r;
  }
}

TEST(OptimalGain, SelectsMiddleBranch) {
  for (double r = 0.05; r <= 5.0; r += 0.025) {
    const auto c = optimal_gain_detail(r);
    EXPECT_EQ(c.method, GainChoice::Method::cubic) << r;
    EXPECT_TRUE(c.matches_g2) << r;
    EXPECT_EQ(c.root_index, 1) << r;
  }
}

TEST(OptimalGain, BeatsNumericScan) {
  for (double r : {0.02, 0.1, 0.5, 1.3, 2.2}) {
    const double best = optimal_gain_detail(r).origin;
    const double hi = 2.0 / std::tanh(r);
    for (int i = 1; i <= 2000; ++i) EXPECT_GE(objective(r, hi * i / 2000.0), best - 1e-15);
  }
}

TEST(OptimalGain, NumericAgreesWithAnalyticAtHalf) {
  const auto num = minimize_numeric([](double g) { return objective(0.5, g); }, 0.0, 2.0 / std::tanh(0.5), 1e-12);
  EXPECT_NEAR(num.x, optimal_gain(0.5), 1e-6);
}

TEST(OptimalGain, ContinuousAcrossSeam) {
  const double lo = optimal_gain(kCubicMinSqueeze * (1.0 - 1e-12));
  const double hi = optimal_gain(kCubicMinSqueeze * (1.0 + 1e-12));
  EXPECT_EQ(optimal_gain_detail(kCubicMinSqueeze).method, GainChoice::Method::numeric);
  EXPECT_EQ(optimal_gain_detail(kCubicMinSqueeze * (1.0 + 1e-9)).method, GainChoice::Method::cubic);
  EXPECT_LT(std::abs(lo - hi), 1e-5);
  EXPECT_LT(objective(1e-4, optimal_gain(1e-4)), 0.0);
}

TEST(OptimalGain, RejectsZeroSqueezing) {
  EXPECT_THROW(optimal_gain(0.0), std::invalid_argument);
}

TEST(Minimizers, GoldenSectionQuadratic) {
  const auto res = golden_section([](double x) { return (x - 0.3) * (x - 0.3) + 2.0; }, -1.0, 2.0, 1e-10);
  EXPECT_NEAR(res.x, 0.3, 1e-7);
  EXPECT_NEAR(res.value, 2.0, 1e-15);
}

TEST(Minimizers, BoundaryHandling) {
  auto lin = [](double x) { return x; };
  EXPECT_THROW(minimize_numeric(lin, 0.0, 1.0), std::domain_error);
  EXPECT_DOUBLE_EQ(minimize_bounded(lin, 0.0, 1.0).x, 0.0);
  EXPECT_DOUBLE_EQ(minimize_bounded([](double x) { return -x; }, 0.0, 1.0).x, 1.0);
  EXPECT_THROW(minimize_numeric(lin, 1.0, 1.0), std::invalid_argument);
}

TEST(AttenuatedGain, Crossover) {
  const double rc = gain_crossover_r(0.6304);
  EXPECT_NEAR(SqueezeSpec::from_r(rc).db(), -10.84, 0.05);
  EXPECT_NEAR(SqueezeSpec::from_r(rc).db(), -10.8404, 1e-3);
}

TEST(AttenuatedGain, ConditionalGainTracksUnconditional) {
  const double eta = 0.6304;
  for (double db : {-9.0, -10.0, -12.0, -15.0}) {
    const double r = r_db(db);
    const auto unc = optimal_gain_attenuated(r, eta);
    const auto cond = optimize_disk(std::tanh(r), DiskRegion(0.3), eta);
    EXPECT_NEAR(cond.gain, unc.x, 1e-3) << db;
  }
}

TEST(ThreeVariable, SymmetricOptimum) {
  for (double r : {0.35, 0.8}) {
    const auto rep = three_variable_check(r);
    EXPECT_NEAR(rep.transmissivity, 0.5, 1e-3) << r;
    EXPECT_NEAR(rep.gain_x / rep.gain_p, 1.0, 1e-3) << r;
    EXPECT_NEAR(rep.value, rep.symmetric_value, 1e-10) << r;
    EXPECT_NEAR(rep.gain_x, std::sqrt(2.0) * optimal_gain(r), 1e-3) << r;
  }
}

TEST(ThreeVariable, SymmetricPointEqualsClosedForm) {
  const double r = 0.6;
  const double g = optimal_gain(r);
  const auto m = build_map(TeleportParams::symmetric(SqueezeSpec::from_r(r), g));
  EXPECT_NEAR(origin_fock1(m), objective(r, g), 1e-14);
}

TEST(RalphGain, Properties) {
  EXPECT_NEAR(ralph_gain(15.0), 1.0, 1e-12);
  for (double r = 0.05; r <= 5.0; r += 0.05) EXPECT_GT(ralph_gain(r), 1.0);
  const double r = r_db(-5.52);
  EXPECT_GT(std::abs(ralph_gain(r) - optimal_gain(r)), 0.1);
  EXPECT_THROW(ralph_gain(0.0), std::domain_error);
}
