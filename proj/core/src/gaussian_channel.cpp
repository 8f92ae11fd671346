#include "telewig/gaussian_channel.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace telewig {
namespace {

// cosh 2r (1 + k^2) - 2 k sinh 2r, summed without cancellation.
double quadrature_noise(double r, double k) {
  const double e = std::exp(2.0 * r);
  return 0.5 * (e * (1.0 - k) * (1.0 - k) + (1.0 + k) * (1.0 + k) / e);
}

}  // namespace

void TeleportParams::validate() const {
  if (!(transmissivity > 0.0 && transmissivity < 1.0)) {
    throw std::invalid_argument("transmissivity T must lie in (0, 1)");
  }
  if (!(gain_x >= 0.0) || !(gain_p >= 0.0) || !std::isfinite(gain_x) || !std::isfinite(gain_p)) {
    throw std::invalid_argument("electronic gains must be finite and >= 0");
  }
}

TeleportParams TeleportParams::symmetric(const SqueezeSpec& squeeze, double normalized_gain) {
  TeleportParams p{squeeze, 0.5, std::sqrt(2.0) * normalized_gain, std::sqrt(2.0) * normalized_gain};
  p.validate();
  return p;
}

GaussianMap::GaussianMap(const Mat2& s, const Mat2& q) : s_(s), q_(q) {
  if (std::abs(q_(0, 1) - q_(1, 0)) > 1e-12 * (1.0 + q_.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("GaussianMap: Q must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat2> es(q_);
  if (es.eigenvalues().minCoeff() < -1e-12 * (1.0 + q_.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("GaussianMap: Q must be positive semidefinite");
  }
}

GaussianMap build_map(const TeleportParams& params) {
  params.validate();
  const double r = params.squeeze.r();
  const double t = params.transmissivity;
  const double rr = 1.0 - t;
  const double gx = params.gain_x;
  const double gp = params.gain_p;

  const Mat2 s{{gx * std::sqrt(rr), 0.0}, {0.0, gp * std::sqrt(t)}};
  const double qx = quadrature_noise(r, gx * std::sqrt(t));
  const double qp = quadrature_noise(r, gp * std::sqrt(rr));
  return GaussianMap(s, Mat2{{qx, 0.0}, {0.0, qp}});
}

bool is_completely_positive(const GaussianMap& map, double tol) {
  using Mat2c = Eigen::Matrix2cd;
  const std::complex<double> i(0.0, 1.0);
  const Mat2 j = GaussianMap::symplectic_form();
  const Mat2 sjs = map.s() * j * map.s().transpose();
  const Mat2c h = map.q().cast<std::complex<double>>() + i * j.cast<std::complex<double>>() -
                  i * sjs.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Mat2c> es(h);
  const double scale = 1.0 + h.cwiseAbs().maxCoeff();
  return es.eigenvalues().minCoeff() >= -tol * scale;
}

// The channel acts as r_out = S s + noise, s ~ W_in, noise covariance Q / 2.
// Conditioning the jointly Gaussian envelope on r_out gives
//   E[s | r] = K r,  K = Gamma S^T Gt^{-1},
//   Cov[s | r] = (Gamma - Gamma S^T Gt^{-1} S Gamma) / 2,  Gt = S Gamma S^T + Q,
// so the polynomial factor maps to M' = K^T M K, c' = c + tr(M (Gamma - Gamma S^T Gt^{-1} S Gamma)).
PolyGaussWigner apply_map(const GaussianMap& map, const PolyGaussWigner& w) {
  const Mat2& s = map.s();
  const Mat2& gamma = w.gamma();
  const Mat2 gt = s * gamma * s.transpose() + map.q();
  const double det = gt.determinant();
  if (!(det > 0.0) || !std::isfinite(det)) {
    throw std::domain_error("apply_map: output covariance is singular");
  }
  const Mat2 gt_inv = gt.inverse();
  const Mat2 k = gamma * s.transpose() * gt_inv;
  Mat2 poly = k.transpose() * w.poly() * k;
  poly = 0.5 * (poly + poly.transpose()).eval();
  Mat2 gt_sym = 0.5 * (gt + gt.transpose());
  const Mat2 cond = gamma - gamma * s.transpose() * gt_inv * s * gamma;
  const double offset = w.offset() + (w.poly() * cond).trace();
  return PolyGaussWigner(poly, offset, gt_sym);
}

WignerMixture apply_map(const GaussianMap& map, const WignerMixture& w) {
  std::vector<WignerMixture::Term> out;
  out.reserve(w.terms().size());
  for (const auto& t : w.terms()) out.push_back({t.weight, apply_map(map, t.wigner)});
  return WignerMixture(std::move(out));
}

double origin_fock1(const GaussianMap& map) {
  const Mat2& s = map.s();
  const double ds = s.determinant();
  const double den = (s * s.transpose() + map.q()).determinant();
  return (map.q().determinant() - ds * ds) / (kPi * std::pow(den, 1.5));
}

double origin_squeezed_fock1(const GaussianMap& map, double t) {
  const Mat2& s = map.s();
  const Mat2 gamma{{std::exp(-2.0 * t), 0.0}, {0.0, std::exp(2.0 * t)}};
  const double ds = s.determinant();
  const double den = (s * gamma * s.transpose() + map.q()).determinant();
  return (map.q().determinant() - ds * ds) / (kPi * std::pow(den, 1.5));
}

double added_noise(double r, double gain) { return quadrature_noise(r, gain); }

double added_noise_excess(double r, double gain) {
  // alpha - G^2 = 2 (cosh r - G sinh r)^2 - 1
  double c = 0.0;
  if (r < 0.5) {
    c = std::cosh(r) - gain * std::sinh(r);
  } else {
    c = 0.5 * ((1.0 - gain) * std::exp(r) + (1.0 + gain) * std::exp(-r));
  }
  return 2.0 * c * c - 1.0;
}

double origin_symmetric(double r, double gain, double eta) {
  if (!(r >= 0.0)) throw std::invalid_argument("r must be >= 0");
  if (!(gain >= 0.0)) throw std::invalid_argument("gain must be >= 0");
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1]");
  const double sum = added_noise(r, gain) + gain * gain;
  return (eta * added_noise_excess(r, gain) / (sum * sum) + (1.0 - eta) / sum) / kPi;
}

double origin_unity(double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("r must be >= 0");
  const double e = 2.0 * std::exp(-2.0 * r);
  return (e - 1.0) / (kPi * (e + 1.0) * (e + 1.0));
}

double UnconditionalThreshold::vsq_optimal_gain() const { return std::exp(-2.0 * r_optimal_gain) / 2.0; }
double UnconditionalThreshold::vsq_unity_gain() const { return std::exp(-2.0 * r_unity_gain) / 2.0; }
double UnconditionalThreshold::db_optimal_gain() const { return squeeze_db(vsq_optimal_gain()); }
double UnconditionalThreshold::db_unity_gain() const { return squeeze_db(vsq_unity_gain()); }

UnconditionalThreshold threshold_unconditional(double eta) {
  if (!(eta > 0.5 && eta <= 1.0)) {
    throw std::domain_error("no finite squeezing threshold unless 1/2 < eta <= 1");
  }
  return {std::atanh(std::sqrt((1.0 - eta) / eta)), 0.5 * std::log(2.0 / (2.0 * eta - 1.0))};
}

TeleportParams compensating_params(const SqueezeSpec& squeeze, double t, double gain) {
  if (!std::isfinite(t)) throw std::invalid_argument("t must be finite");
  if (!(gain >= 0.0)) throw std::invalid_argument("gain must be >= 0");
  const double ratio = std::exp(-2.0 * t);  // T / R
  const double tr = ratio / (1.0 + ratio);
  const double rr = 1.0 - tr;
  TeleportParams p{squeeze, tr, std::exp(t) * gain / std::sqrt(rr), std::exp(-t) * gain / std::sqrt(tr)};
  p.validate();
  return p;
}

}  // namespace telewig
