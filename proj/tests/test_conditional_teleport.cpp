#include "telewig/conditional_teleport.hpp"
#include "telewig/gain_optimizer.hpp"
#include "telewig/gaussian_channel.hpp"
#include "telewig/phase_space.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace telewig;

namespace {

const double kInvPi = 1.0 / kPi;

double lambda_db(double db) { return SqueezeSpec::from_db(db).lambda(); }

}  // namespace

TEST(SuccessProbability, QuotedValue) {
  EXPECT_NEAR(success_prob_disk(1.0 / 3.0, DiskRegion(0.3)), 0.0112, 5e-5);
  EXPECT_NEAR(success_prob_disk(lambda_db(-3.0), DiskRegion(0.3)), 0.0111986, 1e-7);
}

TEST(SuccessProbability, LargeDiskAcceptsEverything) {
  EXPECT_NEAR(success_prob_disk(0.5, DiskRegion(50.0)), 1.0, 1e-14);
  EXPECT_NEAR(success_prob_disk_attenuated(0.5, DiskRegion(50.0), 0.3), 1.0, 1e-14);
}

TEST(SuccessProbability, AttenuatedLimits) {
  const DiskRegion k(0.3);
  for (double l : {0.1, 0.5, 0.9}) {
    EXPECT_DOUBLE_EQ(success_prob_disk_attenuated(l, k, 1.0), success_prob_disk(l, k));
    EXPECT_NEAR(success_prob_disk_attenuated(l, k, 0.0), -std::expm1(-(1.0 - l * l) * 0.09), 1e-16);
  }
  EXPECT_NEAR(success_prob_disk_attenuated(9.0 / 11.0, k, 0.6304), 0.0233, 5e-5);
}

TEST(SuccessProbability, SmallDiskIsAccurate) {
  // leading behaviour (1 - l^2)^2 K^2 (1 - ...) without cancellation
  const double l = 0.4;
  const double d = 1.0 - l * l;
  const double k = 1e-5;
  const double x = d * k * k;
  const double expected = x * x / 2.0 + (1.0 - d) * x;
  EXPECT_NEAR(success_prob_disk(l, DiskRegion(k)) / expected, 1.0, 1e-9);
}

TEST(SuccessProbability, MonotoneInRadius) {
  for (double eta : {0.3, 0.6304, 1.0}) {
    double prev = 0.0;
    for (double k = 0.05; k <= 4.0; k += 0.05) {
      const double p = success_prob_disk_attenuated(0.6, DiskRegion(k), eta);
      EXPECT_GT(p, prev);
      EXPECT_LE(p, 1.0);
      prev = p;
    }
  }
}

TEST(DiskOrigin, QuotedOptimizedValues) {
  const DiskRegion k(0.3);
  EXPECT_NEAR(optimize_disk(lambda_db(-5.0), k).origin, -0.284, 1e-3);
  EXPECT_NEAR(optimize_disk(lambda_db(-10.0), k).origin, -0.3152, 5e-4);
  const auto at3 = optimize_disk(lambda_db(-3.0), k);
  EXPECT_NEAR(at3.origin, -0.217413, 1e-6);
  EXPECT_NEAR(at3.gain, 1.238, 1e-3);
  EXPECT_NEAR(optimize_disk(lambda_db(-7.0), k).origin, -0.305635, 1e-6);
}

TEST(DiskOrigin, SmallDiskRecoversPhoton) {
  for (double l : {0.1, 0.3, 0.6}) {
    EXPECT_NEAR(origin_disk_fock1(l, l, DiskRegion(1e-3)), -kInvPi, 1e-4) << l;
  }
}

TEST(DiskOrigin, AttenuatedReducesToFock) {
  for (double l : {0.2, 0.7}) {
    for (double g : {0.5, 1.0, 1.3}) {
      EXPECT_NEAR(origin_disk_attenuated(l, g, DiskRegion(0.4), 1.0), origin_disk_fock1(l, g, DiskRegion(0.4)),
                  1e-15);
    }
  }
}

TEST(DiskOrigin, AttenuatedQuotedValue) {
  const auto opt = optimize_disk(9.0 / 11.0, DiskRegion(0.3), 0.6304);
  EXPECT_NEAR(opt.origin, -0.0209, 5e-4);
  EXPECT_NEAR(opt.success, 0.0233, 5e-5);
  EXPECT_NEAR(opt.origin, -0.0209179, 1e-6);
  EXPECT_NEAR(opt.gain, 1.00840, 1e-4);
}

TEST(DiskOrigin, ConditionalBeatsUnconditional) {
  for (double db = -10.0; db <= -3.0; db += 0.5) {
    const double r = SqueezeSpec::from_db(db).r();
    const double unc = origin_symmetric(r, optimal_gain(r));
    EXPECT_LT(optimize_disk(std::tanh(r), DiskRegion(0.3)).origin, unc) << db;
  }
}

TEST(PointLimit, Values) {
  for (double l : {0.1, 0.5, 0.95}) EXPECT_NEAR(origin_pointlimit_attenuated(l, 1.0), -kInvPi, 1e-15);
  const double eta = 0.6304;
  const double lth = std::sqrt((1.0 - eta) / eta);
  EXPECT_NEAR(origin_pointlimit_attenuated(lth, eta), 0.0, 1e-15);
  EXPECT_NEAR(std::atanh(lth), threshold_unconditional(eta).r_optimal_gain, 1e-14);
  const double w = origin_pointlimit_attenuated(9.0 / 11.0, eta);
  EXPECT_NEAR(w, -0.0210717795, 1e-9);
  EXPECT_LT(w, optimize_disk(9.0 / 11.0, DiskRegion(0.3), eta).origin);
}

TEST(PointLimit, DiskConverges) {
  for (double eta : {0.55, 0.6304, 0.9}) {
    for (double l : {0.3, 0.8}) {
      for (double g : {0.6, 1.0}) {
        EXPECT_NEAR(origin_disk_attenuated(l, g, DiskRegion(1e-3), eta), origin_pointlimit_attenuated(l, eta), 1e-4);
      }
    }
  }
}

TEST(PointLimit, ExpansionNearPerfectCorrelation) {
  for (double eta : {0.6304, 0.7, 0.8, 0.9, 1.0}) {
    for (double l = 0.95; l < 1.0; l += 0.001) {
      const double exact = origin_pointlimit_attenuated(l, eta);
      EXPECT_LT(std::abs(exact - pointlimit_expansion(l, eta)), 0.01 * std::abs(exact)) << eta << " " << l;
    }
  }
}

TEST(Threshold, SameAsUnconditional) {
  for (double k : {0.1, 0.3}) {
    const double r = threshold_disk_r(0.6304, DiskRegion(k));
    EXPECT_NEAR(SqueezeSpec::from_r(r).db(), -8.77, 0.01) << k;
    EXPECT_NEAR(r, threshold_unconditional(0.6304).r_optimal_gain, 1e-6) << k;
  }
}

TEST(Validation, Rejects) {
  EXPECT_THROW(DiskRegion(0.0), std::invalid_argument);
  EXPECT_THROW(success_prob_disk(1.0, DiskRegion(0.3)), std::invalid_argument);
  EXPECT_THROW(origin_disk_fock1(0.5, -0.1, DiskRegion(0.3)), std::invalid_argument);
  EXPECT_THROW(origin_disk_attenuated(0.5, 1.0, DiskRegion(0.3), 1.2), std::invalid_argument);
}
