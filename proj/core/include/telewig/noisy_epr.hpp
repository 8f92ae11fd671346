#pragma once

// Conditional teleportation with an impure EPR resource (noise excess in the
// antisqueezed quadratures). Two acceptance rules are supported: the single
// outcome beta = 0 and a square |x_u|, |p_v| <= a_half in the plane of the
// measured quadratures.

#include "telewig/phase_space.hpp"

#include <complex>

namespace telewig {

struct SquareRegion {
  double half_side;

  explicit SquareRegion(double a_half);
};

/// Auxiliary quantities of the square-region formulas.
struct SquareAux {
  double q;
  double alpha;
  double delta;
  double b_erf;

  static SquareAux compute(const NoisyEprSpec& spec, double gain, const SquareRegion& square);
};

/// Outcome density for a Fock input (overlap of |1> with the displaced
/// thermal reduced state). Measure d^2 beta / pi.
double density_fock1(std::complex<double> beta, double mean_photons);
double density_vac(std::complex<double> beta, double mean_photons);
double density_attenuated(std::complex<double> beta, double mean_photons, double eta);

/// Origin of the output accepted at beta = 0.
double origin_point_fock1(const NoisyEprSpec& spec);
double origin_point_attenuated(const NoisyEprSpec& spec, double eta);

struct VarianceThreshold {
  double vsq;

  double db() const { return squeeze_db(vsq); }
};

/// Squeezed variance at which origin_point_attenuated changes sign, for a
/// noise excess N = 2 V_sq V_an. Needs 1/2 < eta <= 1 and N >= 1/2.
VarianceThreshold threshold_point(double eta, double noise);
/// N -> infinity limit, (2 eta - 1) / 4.
VarianceThreshold threshold_point_asymptote(double eta);

double success_prob_square(const SquareRegion& square, double mean_photons);
double origin_square_fock1(const NoisyEprSpec& spec, double gain, const SquareRegion& square);

/// Root in V_sq of origin_square_fock1 by bisection on (1e-4, 1/2).
VarianceThreshold threshold_square(double noise, double gain, const SquareRegion& square);

}  // namespace telewig
