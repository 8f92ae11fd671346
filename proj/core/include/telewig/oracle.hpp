#pragma once

// Brute-force verifiers, kept independent of the closed forms they check:
//   * adaptive 2-D quadrature of the Gaussian-channel integral and of the
//     noisy-resource overlap integral;
//   * a truncated Fock-space simulation of post-selected teleportation with
//     parity readout of the Wigner origin;
//   * seeded Monte Carlo over disk and square acceptance regions.

#include "telewig/conditional_teleport.hpp"
#include "telewig/gaussian_channel.hpp"
#include "telewig/noisy_epr.hpp"
#include "telewig/phase_space.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace telewig {

using cplx = std::complex<double>;

struct QuadratureOptions {
  /// Integration box half-width in units of the input envelope width.
  double half_width = 8.0;
  /// Relative tolerance requested from each nested Gauss-Kronrod pass.
  double tolerance = 1e-13;
  unsigned max_depth = 18;
  /// Estimated absolute error above which the result is rejected.
  double max_error = 1e-9;
};

struct QuadratureResult {
  double value;
  double error;
};

struct Box {
  double x_lo;
  double x_hi;
  double y_lo;
  double y_hi;
};

/// Nested adaptive Gauss-Kronrod (31-point) integral over a box. Throws
/// std::runtime_error when the estimated error exceeds opts.max_error.
QuadratureResult integrate_2d(const std::function<double(double, double)>& f, const Box& box,
                              const QuadratureOptions& opts = {});

/// Phase-space integral of a Wigner function over a box matched to its envelope.
QuadratureResult integrate_wigner(const PolyGaussWigner& w, const QuadratureOptions& opts = {});

/// Direct evaluation of 2 pi \int W_chi(r_in, r_out) W_in(Lambda r_in) dr_in.
double wigner_via_quadrature(const GaussianMap& map, const PolyGaussWigner& w_in, const PhasePoint& r_out,
                             const QuadratureOptions& opts = {});
double wigner_via_quadrature(const GaussianMap& map, const WignerMixture& w_in, const PhasePoint& r_out,
                             const QuadratureOptions& opts = {});
double origin_via_quadrature(const GaussianMap& map, const PolyGaussWigner& w_in,
                             const QuadratureOptions& opts = {});
double origin_via_quadrature(const GaussianMap& map, const WignerMixture& w_in,
                             const QuadratureOptions& opts = {});

/// Truncated Fock-basis amplitudes c_0..c_N (not necessarily normalized).
class FockVector {
 public:
  explicit FockVector(std::vector<cplx> amplitudes);
  static FockVector number_state(std::size_t n, std::size_t truncation);

  std::size_t truncation() const { return amps_.size() - 1; }
  const std::vector<cplx>& amplitudes() const { return amps_; }
  cplx operator[](std::size_t n) const { return amps_[n]; }
  double norm2() const;
  /// |c_N|^2 / sum |c_k|^2.
  double tail_mass() const;
  /// <psi|(-1)^n|psi>, unnormalized.
  double parity_expectation() const;

 private:
  std::vector<cplx> amps_;
};

/// <n|D(alpha)|m> for 0 <= n, m < dim, by the column recurrence
/// D|m> = (a^dag - alpha^*) D|m-1> / sqrt(m) started from coherent amplitudes.
Eigen::MatrixXcd displacement_matrix(cplx alpha, std::size_t dim);

/// Smallest N with e^{-|a|^2} |a|^{2N} / N! < 1e-14, plus two levels for the
/// input photon.
std::size_t default_truncation(double max_displacement);

/// Unnormalized Bob state for outcome beta with a pure EPR resource:
///   sqrt(1 - lambda^2) D(G beta) lambda^n D(-beta) |input>.
/// truncation == 0 selects default_truncation((1 + G)|beta|).
FockVector conditional_state(double lambda, double gain, cplx beta, const FockVector& input,
                             std::size_t truncation = 0);
/// conditional_state with input |1>.
FockVector conditional_state_fock(double lambda, double gain, cplx beta, std::size_t truncation = 0);

/// W(0) = Tr[rho (-1)^n] / pi for the normalized state.
double origin_via_parity(const FockVector& state);

struct WeightedFock {
  double weight;
  FockVector state;
};
/// Mixture sum_i w_i |v_i><v_i| of unnormalized vectors, normalized by its trace.
double origin_via_parity(std::span<const WeightedFock> mixture);

struct McEstimate {
  double success;
  double success_err;
  double origin;
  double origin_err;
  std::size_t samples;
};

/// Uniform sampling of beta over the disk; per-sample norm and parity of the
/// Fock-space conditional states for eta|1><1| + (1-eta)|0><0|.
/// Bit-identical for equal seeds regardless of thread count.
McEstimate disk_average_mc(double lambda, double gain, const DiskRegion& disk, double eta,
                           std::size_t samples, std::uint64_t seed);
/// Same with the square |x_u|, |p_v| <= a_half, beta = (x_u + i p_v)/sqrt(2).
McEstimate square_average_mc(double lambda, double gain, const SquareRegion& square, double eta,
                             std::size_t samples, std::uint64_t seed);

struct OutcomeIntegrals {
  /// Outcome density P(beta) (measure d^2 beta / pi).
  double density;
  /// Unnormalized output Wigner origin at this outcome.
  double wigner_origin;
};

/// Overlap integrals over mode A for the noisy resource at measured
/// quadratures (x_u, p_v), input eta|1><1| + (1-eta)|0><0|.
OutcomeIntegrals noisy_outcome_via_quadrature(const NoisyEprSpec& spec, double gain, double x_u, double p_v,
                                              double eta = 1.0, const QuadratureOptions& opts = {});

/// Normalized output origin accepted at beta = 0.
double noisy_point_via_quadrature(const NoisyEprSpec& spec, double eta = 1.0,
                                  const QuadratureOptions& opts = {});

struct SquareConditioned {
  double success;
  double origin;
};

/// Square-region success probability and origin: Gauss-Legendre over the
/// outcome square, overlap quadrature inside.
SquareConditioned noisy_square_via_quadrature(const NoisyEprSpec& spec, double gain, const SquareRegion& square,
                                              const QuadratureOptions& opts = {});

}  // namespace telewig
