#include "telewig/conditional_teleport.hpp"

#include "telewig/gain_optimizer.hpp"
#include "telewig/phase_space.hpp"

#include <cmath>
#include <stdexcept>

namespace telewig {
namespace {

void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0)) throw std::invalid_argument("lambda must lie in [0, 1)");
}

void check_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1]");
}

// 1 - e^{-x}
double one_minus_exp(double x) { return -std::expm1(-x); }

// 1 - (1 + x) e^{-x}, series for small x to avoid cancellation.
double one_minus_one_plus_x_exp(double x) {
  if (x < 0.1) {
    double term = x * x / 2.0;  // x^k / k! at k = 2
    double sum = 0.0;
    for (int k = 2; k < 30; ++k) {
      const double contrib = term * (k - 1) * ((k % 2 == 0) ? 1.0 : -1.0);
      sum += contrib;
      if (std::abs(contrib) < 1e-18 * std::abs(sum)) break;
      term *= x / (k + 1);
    }
    return sum;
  }
  return 1.0 - (1.0 + x) * std::exp(-x);
}

// 1 - [1 + w (1 - l^2)^2 K^2] e^{-(1 - l^2) K^2} rewritten as
// [1 - (1 + x) e^{-x}] + (1 - w (1 - l^2)) x e^{-x}, x = (1 - l^2) K^2.
double disk_probability(double lambda, double k, double weight) {
  const double d = 1.0 - lambda * lambda;
  const double x = d * k * k;
  return one_minus_one_plus_x_exp(x) + (1.0 - weight * d) * x * std::exp(-x);
}

}  // namespace

DiskRegion::DiskRegion(double k) : radius(k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("disk radius K must be > 0");
}

double cond_exponent(double lambda, double gain) {
  return (1.0 - lambda * lambda) + 2.0 * (gain - lambda) * (gain - lambda);
}

double success_prob_disk(double lambda, const DiskRegion& disk) {
  check_lambda(lambda);
  return disk_probability(lambda, disk.radius, 1.0);
}

double success_prob_disk_attenuated(double lambda, const DiskRegion& disk, double eta) {
  check_lambda(lambda);
  check_eta(eta);
  return disk_probability(lambda, disk.radius, eta);
}

namespace {

// Unnormalized parity integrals (1/pi) \int_disk <psi|(-1)^n|psi> d^2 beta / pi
// for the Fock (fock1) and vacuum (vac) inputs.
struct ParityIntegrals {
  double fock1;
  double vac;
};

ParityIntegrals parity_integrals(double lambda, double gain, double k) {
  const double d = 1.0 - lambda * lambda;
  const double a = cond_exponent(lambda, gain);
  const double x = a * k * k;
  const double l2 = lambda * lambda;
  const double m = l2 - 2.0 * gain * lambda + 1.0;
  const double fock1 = d / kPi * (-l2 / a * one_minus_exp(x) + m * m / (a * a) * one_minus_one_plus_x_exp(x));
  const double vac = d / (kPi * a) * one_minus_exp(x);
  return {fock1, vac};
}

}  // namespace

double origin_disk_fock1(double lambda, double gain, const DiskRegion& disk) {
  check_lambda(lambda);
  if (!(gain >= 0.0)) throw std::invalid_argument("gain must be >= 0");
  return parity_integrals(lambda, gain, disk.radius).fock1 / success_prob_disk(lambda, disk);
}

double origin_disk_attenuated(double lambda, double gain, const DiskRegion& disk, double eta) {
  check_lambda(lambda);
  check_eta(eta);
  if (!(gain >= 0.0)) throw std::invalid_argument("gain must be >= 0");
  const auto pi = parity_integrals(lambda, gain, disk.radius);
  const double p_eta = success_prob_disk_attenuated(lambda, disk, eta);
  // eta (P/P_eta) W_fock1 + (1 - eta) W_vac, with W_fock1 = fock1 / P.
  return (eta * pi.fock1 + (1.0 - eta) * pi.vac) / p_eta;
}

double origin_pointlimit_attenuated(double lambda, double eta) {
  check_lambda(lambda);
  check_eta(eta);
  const double l2 = lambda * lambda;
  return (1.0 - eta - eta * l2) / (kPi * (1.0 - eta + eta * l2));
}

double pointlimit_expansion(double lambda, double eta) {
  return (1.0 - 2.0 * eta + 4.0 * eta * (1.0 - eta) * (1.0 - lambda)) / kPi;
}

ConditionalOptimum optimize_disk(double lambda, const DiskRegion& disk, double eta) {
  check_lambda(lambda);
  check_eta(eta);
  const auto res = minimize_bounded([&](double g) { return origin_disk_attenuated(lambda, g, disk, eta); },
                                    0.0, 2.0, 1e-12);
  return {res.x, res.value, success_prob_disk_attenuated(lambda, disk, eta)};
}

double threshold_disk_r(double eta, const DiskRegion& disk) {
  check_eta(eta);
  auto f = [&](double r) { return optimize_disk(std::tanh(r), disk, eta).origin; };
  double lo = 1e-3;
  double hi = 5.0;
  if (!(f(lo) > 0.0 && f(hi) < 0.0)) {
    throw std::domain_error("threshold_disk_r: no sign change of the optimized origin");
  }
  while (hi - lo > 1e-11) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace telewig
