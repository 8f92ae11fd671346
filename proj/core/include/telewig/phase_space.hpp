#pragma once

// Phase-space conventions used throughout telewig:
//   * quadratures satisfy [x, p] = i, so the vacuum has quadrature variance 1/2
//     and Wigner function exp(-x^2 - p^2) / pi;
//   * two-mode covariance matrices are scaled so that the vacuum is the identity
//     (entries are twice the quadrature covariances).

#include <Eigen/Dense>

#include <numbers>
#include <vector>

namespace telewig {

using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;
using Mat4 = Eigen::Matrix4d;

inline constexpr double kPi = std::numbers::pi;

struct PhasePoint {
  double x = 0.0;
  double p = 0.0;

  Vec2 vec() const { return Vec2(x, p); }
};

/// Squeezing of one of the two single-mode squeezed states that build the
/// shared EPR pair. Stored as the squeezing parameter r >= 0.
class SqueezeSpec {
 public:
  static SqueezeSpec from_r(double r);
  /// Squeezed quadrature variance, 0 < vsq <= 1/2.
  static SqueezeSpec from_vsq(double vsq);
  /// 10 log10(2 vsq); must be <= 0.
  static SqueezeSpec from_db(double db);

  double r() const { return r_; }
  /// tanh r, the EPR correlation coefficient.
  double lambda() const;
  double vsq() const;
  double db() const;

 private:
  explicit SqueezeSpec(double r) : r_(r) {}
  double r_;
};

// dB helpers. Squeezing in dB is 10 log10(2 V_sq); noise excess in dB is
// 10 log10(2 N) with N = 2 V_sq V_an (N = 1/2 for a pure state).
double squeeze_db(double vsq);
double vsq_from_db(double db);
double noise_excess_db(double noise);
double noise_from_db(double db);
double r_from_vsq(double vsq);

/// Single-mode Wigner function of the form
///   W(r) = (2 r^T M r + c) exp(-r^T Gamma^{-1} r) / (pi sqrt(det Gamma)).
/// Covers the Fock state |1>, its squeezed version, the vacuum and every
/// Gaussian-channel image of those.
class PolyGaussWigner {
 public:
  PolyGaussWigner(const Mat2& poly, double offset, const Mat2& gamma);

  const Mat2& poly() const { return poly_; }
  double offset() const { return offset_; }
  const Mat2& gamma() const { return gamma_; }

  double operator()(const PhasePoint& r) const;
  double origin() const;
  /// Closed-form phase-space integral, tr(M Gamma) + c.
  double total_weight() const;

 private:
  Mat2 poly_;
  double offset_;
  Mat2 gamma_;
  Mat2 gamma_inv_;
  double norm_;
};

class WignerMixture {
 public:
  struct Term {
    double weight;
    PolyGaussWigner wigner;
  };

  explicit WignerMixture(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  double operator()(const PhasePoint& r) const;
  double origin() const;

 private:
  std::vector<Term> terms_;
};

PolyGaussWigner make_fock1();
PolyGaussWigner make_vacuum();
/// S(t)|1>, Gamma = diag(e^{-2t}, e^{2t}).
PolyGaussWigner make_squeezed_fock1(double t);
/// eta |1><1| + (1 - eta) |0><0|.
WignerMixture make_attenuated(double eta);

/// Squeezing parameter t of the photon-subtracted state: tanh t = tau tanh s.
double subtraction_squeeze(double tau, double s);

/// Impure EPR resource made from two squeezed states with squeezed variance
/// V_sq and antisqueezed variance V_an.
class NoisyEprSpec {
 public:
  static NoisyEprSpec from_variances(double vsq, double van);
  /// van = noise / (2 vsq).
  static NoisyEprSpec from_noise(double vsq, double noise);
  static NoisyEprSpec from_db(double vsq_db, double noise_db);
  static NoisyEprSpec pure(const SqueezeSpec& squeeze);

  double vsq() const { return vsq_; }
  double van() const { return van_; }
  /// V = V_an + V_sq.
  double total_variance() const { return van_ + vsq_; }
  /// C = V_an - V_sq.
  double correlation() const { return van_ - vsq_; }
  /// Thermal occupation of either reduced mode, (V - 1)/2.
  double mean_photons() const { return (total_variance() - 1.0) / 2.0; }
  /// N = 2 V_sq V_an.
  double noise() const { return 2.0 * vsq_ * van_; }
  double noise_db() const { return noise_excess_db(noise()); }
  /// 4 V_sq V_an; equals 1 for a pure resource.
  double uncertainty_product() const { return 4.0 * vsq_ * van_; }

 private:
  NoisyEprSpec(double vsq, double van) : vsq_(vsq), van_(van) {}
  double vsq_;
  double van_;
};

/// Two-mode covariance matrix with vacuum = identity.
class TwoModeCM {
 public:
  explicit TwoModeCM(const Mat4& gamma);
  /// [[V I, C sz], [C sz, V I]] with sz = diag(1, -1).
  static TwoModeCM symmetric(double v, double c);
  static TwoModeCM from_epr(const NoisyEprSpec& spec);

  const Mat4& matrix() const { return gamma_; }
  Mat2 block_a() const { return gamma_.topLeftCorner<2, 2>(); }
  Mat2 block_b() const { return gamma_.bottomRightCorner<2, 2>(); }
  Mat2 block_d() const { return gamma_.topRightCorner<2, 2>(); }

 private:
  Mat4 gamma_;
};

bool cm_is_physical(const TwoModeCM& cm, double tol = 1e-12);

}  // namespace telewig
