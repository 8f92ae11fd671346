#pragma once

#include "telewig/phase_space.hpp"

namespace telewig {

/// Settings of the standard teleportation protocol: EPR squeezing, intensity
/// transmissivity T of Alice's beam splitter (R = 1 - T) and the electronic
/// gains applied by Bob to the x and p outcomes.
struct TeleportParams {
  SqueezeSpec squeeze;
  double transmissivity = 0.5;
  double gain_x = 0.0;
  double gain_p = 0.0;

  /// Balanced splitter, g_x = g_p = sqrt(2) G.
  static TeleportParams symmetric(const SqueezeSpec& squeeze, double normalized_gain);
  static TeleportParams unity(const SqueezeSpec& squeeze) { return symmetric(squeeze, 1.0); }

  void validate() const;
};

/// Trace-preserving single-mode Gaussian channel acting on Wigner functions as
///   W_out(r) = 2 pi \int W_chi(r_in, r) W_in(Lambda r_in) dr_in,
/// with kernel exp(-(r - S Lambda r_in)^T Q^{-1} (...)) / (2 pi^2 sqrt(det Q)).
class GaussianMap {
 public:
  GaussianMap(const Mat2& s, const Mat2& q);

  const Mat2& s() const { return s_; }
  const Mat2& q() const { return q_; }

  static Mat2 lambda() { return Mat2{{1.0, 0.0}, {0.0, -1.0}}; }
  static Mat2 symplectic_form() { return Mat2{{0.0, 1.0}, {-1.0, 0.0}}; }

 private:
  Mat2 s_;
  Mat2 q_;
};

GaussianMap build_map(const TeleportParams& params);

/// Q + iJ - i S J S^T >= 0, checked on the eigenvalues of the Hermitian matrix.
bool is_completely_positive(const GaussianMap& map, double tol = 1e-12);

/// Image of a polynomial-Gaussian Wigner function. Mixtures map term by term.
PolyGaussWigner apply_map(const GaussianMap& map, const PolyGaussWigner& w);
WignerMixture apply_map(const GaussianMap& map, const WignerMixture& w);

/// Output origin for a Fock |1> input:
///   (det Q - det(S)^2) / (pi det(S S^T + Q)^{3/2}).
double origin_fock1(const GaussianMap& map);

/// Output origin for S(t)|1>: same numerator, denominator uses S gamma S^T + Q.
double origin_squeezed_fock1(const GaussianMap& map, double t);

/// alpha(G) = cosh 2r (1 + G^2) - 2 G sinh 2r; the added-noise variance of the
/// symmetric protocol with normalized gain G.
double added_noise(double r, double gain);
/// alpha(G) - G^2, the numerator of the Fock-state origin.
double added_noise_excess(double r, double gain);

/// Origin for the symmetric protocol, input eta|1><1| + (1 - eta)|0><0|
/// (eta = 1 is the Fock state).
double origin_symmetric(double r, double gain, double eta = 1.0);

/// Unity gain (G = 1) origin for the Fock state.
double origin_unity(double r);

struct UnconditionalThreshold {
  double r_optimal_gain;
  double r_unity_gain;

  double vsq_optimal_gain() const;
  double vsq_unity_gain() const;
  double db_optimal_gain() const;
  double db_unity_gain() const;
};

/// Squeezing above which the attenuated Fock state keeps a negative origin,
/// with optimized and with unity gain. Requires 1/2 < eta <= 1.
UnconditionalThreshold threshold_unconditional(double eta);

/// Gains and transmissivity that undo the squeezing of S(t)|1> and leave an
/// overall normalized gain G: T/R = e^{-2t}, g_x = e^t G / sqrt(R),
/// g_p = e^{-t} G / sqrt(T).
TeleportParams compensating_params(const SqueezeSpec& squeeze, double t, double gain);

}  // namespace telewig
