#include "telewig/noisy_epr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace telewig {
namespace {

void check_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1]");
}

void check_photons(double n) {
  if (!(n >= 0.0) || !std::isfinite(n)) throw std::invalid_argument("mean photon number must be >= 0");
}

}  // namespace

SquareRegion::SquareRegion(double a_half) : half_side(a_half) {
  if (!(a_half > 0.0) || !std::isfinite(a_half)) {
    throw std::invalid_argument("square half-side must be > 0");
  }
}

SquareAux SquareAux::compute(const NoisyEprSpec& spec, double gain, const SquareRegion& square) {
  const double v = spec.total_variance();
  const double c = spec.correlation();
  const double f = spec.uncertainty_product();
  const double g2 = gain * gain;
  return {(v * (1.0 + g2) - 2.0 * c * gain + g2) / (v + f), (v + f) / f, (c * gain - v) / f,
          square.half_side / std::sqrt(2.0 * (1.0 + spec.mean_photons()))};
}

double density_fock1(std::complex<double> beta, double mean_photons) {
  check_photons(mean_photons);
  const double b2 = std::norm(beta);
  const double n1 = 1.0 + mean_photons;
  // n/(1+n)^2 [1 + |b|^2 / (n (1+n))] written without the 1/n.
  return (mean_photons / (n1 * n1) + b2 / (n1 * n1 * n1)) * std::exp(-b2 / n1);
}

double density_vac(std::complex<double> beta, double mean_photons) {
  check_photons(mean_photons);
  const double n1 = 1.0 + mean_photons;
  return std::exp(-std::norm(beta) / n1) / n1;
}

double density_attenuated(std::complex<double> beta, double mean_photons, double eta) {
  check_eta(eta);
  return eta * density_fock1(beta, mean_photons) + (1.0 - eta) * density_vac(beta, mean_photons);
}

double origin_point_fock1(const NoisyEprSpec& spec) {
  const double v = spec.total_variance();
  const double f = spec.uncertainty_product();
  if (std::abs(v - 1.0) < 1e-14) {
    throw std::domain_error("origin_point_fock1: V = 1 leaves no photon to post-select on");
  }
  const double ratio = (v + 1.0) / (v + f);
  return -(v - f) / (kPi * (v - 1.0)) * ratio * ratio;
}

double origin_point_attenuated(const NoisyEprSpec& spec, double eta) {
  check_eta(eta);
  const double v = spec.total_variance();
  const double f = spec.uncertainty_product();
  const double den = v + 1.0 - 2.0 * eta;
  if (std::abs(den) < 1e-14) {
    throw std::domain_error("origin_point_attenuated: zero outcome density at beta = 0");
  }
  const double ratio = (v + 1.0) / (v + f);
  return (f + v * (1.0 - 2.0 * eta)) / (kPi * den) * ratio * ratio;
}

VarianceThreshold threshold_point(double eta, double noise) {
  if (!(eta > 0.5 && eta <= 1.0)) throw std::domain_error("threshold_point: need 1/2 < eta <= 1");
  if (!(noise >= 0.5 * (1.0 - 1e-12))) throw std::invalid_argument("threshold_point: need N >= 1/2");
  const double e = 2.0 * eta - 1.0;
  const double disc = 4.0 * noise * noise - 2.0 * noise * e * e;
  if (disc < 0.0) throw std::domain_error("threshold_point: negative discriminant");
  // (2N - sqrt(disc)) / (2e), rationalized to avoid cancellation at large N.
  const double vth = (2.0 * noise * e * e) / (2.0 * e * (2.0 * noise + std::sqrt(disc)));
  return {vth};
}

VarianceThreshold threshold_point_asymptote(double eta) {
  if (!(eta > 0.5 && eta <= 1.0)) throw std::domain_error("threshold_point_asymptote: need 1/2 < eta <= 1");
  return {(2.0 * eta - 1.0) / 4.0};
}

double success_prob_square(const SquareRegion& square, double mean_photons) {
  check_photons(mean_photons);
  const double n1 = 1.0 + mean_photons;
  const double b = square.half_side / std::sqrt(2.0 * n1);
  const double e = std::erf(b);
  return e * (e - 2.0 * b * std::exp(-b * b) / (std::sqrt(kPi) * n1));
}

double origin_square_fock1(const NoisyEprSpec& spec, double gain, const SquareRegion& square) {
  if (!(gain >= 0.0)) throw std::invalid_argument("gain must be >= 0");
  const auto aux = SquareAux::compute(spec, gain, square);
  const double a = square.half_side;
  const double p = success_prob_square(square, spec.mean_photons());
  const double sq = std::sqrt(aux.q);
  const double e = std::erf(a * sq);
  const double d2 = aux.delta * aux.delta;
  const double al2 = aux.alpha * aux.alpha;
  const double bracket = (2.0 / aux.alpha + 2.0 * d2 / (al2 * aux.q) - 1.0) * e -
                         4.0 * d2 * a / (al2 * std::sqrt(kPi * aux.q)) * std::exp(-aux.q * a * a);
  return e / (4.0 * kPi * p * spec.vsq() * spec.van() * aux.alpha * aux.q) * bracket;
}

VarianceThreshold threshold_square(double noise, double gain, const SquareRegion& square) {
  if (!(noise >= 0.5 * (1.0 - 1e-12))) throw std::invalid_argument("threshold_square: need N >= 1/2");
  auto f = [&](double vsq) {
    return origin_square_fock1(NoisyEprSpec::from_variances(vsq, std::max(noise, 0.5) / (2.0 * vsq)), gain,
                               square);
  };
  double lo = 1e-4;
  double hi = 0.5;
  const double flo = f(lo);
  const double fhi = f(hi);
  if (!(flo < 0.0 && fhi > 0.0)) throw std::domain_error("threshold_square: no sign change in (1e-4, 1/2)");
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi)};
}

}  // namespace telewig
