#include "telewig/phase_space.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace telewig {
namespace {

bool is_symmetric(const Mat2& m) {
  return std::abs(m(0, 1) - m(1, 0)) <= 1e-12 * (1.0 + m.cwiseAbs().maxCoeff());
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

SqueezeSpec SqueezeSpec::from_r(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument("squeezing parameter r must be finite and >= 0");
  }
  return SqueezeSpec(r);
}

SqueezeSpec SqueezeSpec::from_vsq(double vsq) { return from_r(r_from_vsq(vsq)); }

SqueezeSpec SqueezeSpec::from_db(double db) {
  if (db > 0.0) {
    throw std::invalid_argument("squeezing in dB must be <= 0");
  }
  return from_vsq(vsq_from_db(db));
}

double SqueezeSpec::lambda() const { return std::tanh(r_); }
double SqueezeSpec::vsq() const { return std::exp(-2.0 * r_) / 2.0; }
double SqueezeSpec::db() const { return squeeze_db(vsq()); }

double squeeze_db(double vsq) {
  require_positive(vsq, "squeezed variance");
  return 10.0 * std::log10(2.0 * vsq);
}

double vsq_from_db(double db) {
  if (!std::isfinite(db)) throw std::invalid_argument("dB value must be finite");
  return std::pow(10.0, db / 10.0) / 2.0;
}

double noise_excess_db(double noise) {
  require_positive(noise, "noise excess N");
  return 10.0 * std::log10(2.0 * noise);
}

double noise_from_db(double db) {
  if (!std::isfinite(db)) throw std::invalid_argument("dB value must be finite");
  return std::pow(10.0, db / 10.0) / 2.0;
}

double r_from_vsq(double vsq) {
  require_positive(vsq, "squeezed variance");
  if (vsq > 0.5) throw std::invalid_argument("squeezed variance must be <= 1/2");
  return -0.5 * std::log(2.0 * vsq);
}

PolyGaussWigner::PolyGaussWigner(const Mat2& poly, double offset, const Mat2& gamma)
    : poly_(poly), offset_(offset), gamma_(gamma) {
  if (!is_symmetric(poly) || !is_symmetric(gamma)) {
    throw std::invalid_argument("PolyGaussWigner: M and Gamma must be symmetric");
  }
  Eigen::LLT<Mat2> llt(gamma_);
  if (llt.info() != Eigen::Success || !(gamma_.determinant() > 0.0)) {
    throw std::invalid_argument("PolyGaussWigner: Gamma must be positive definite");
  }
  gamma_inv_ = gamma_.inverse();
  norm_ = 1.0 / (kPi * std::sqrt(gamma_.determinant()));
}

double PolyGaussWigner::operator()(const PhasePoint& r) const {
  const Vec2 v = r.vec();
  const double poly = 2.0 * v.dot(poly_ * v) + offset_;
  return poly * std::exp(-v.dot(gamma_inv_ * v)) * norm_;
}

double PolyGaussWigner::origin() const { return offset_ * norm_; }

double PolyGaussWigner::total_weight() const { return (poly_ * gamma_).trace() + offset_; }

WignerMixture::WignerMixture(std::vector<Term> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw std::invalid_argument("WignerMixture: no terms");
  double total = 0.0;
  for (const auto& t : terms_) {
    if (!(t.weight >= 0.0 && t.weight <= 1.0)) {
      throw std::invalid_argument("WignerMixture: weights must lie in [0, 1]");
    }
    total += t.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("WignerMixture: weights must sum to 1");
  }
}

double WignerMixture::operator()(const PhasePoint& r) const {
  double v = 0.0;
  for (const auto& t : terms_) v += t.weight * t.wigner(r);
  return v;
}

double WignerMixture::origin() const {
  double v = 0.0;
  for (const auto& t : terms_) v += t.weight * t.wigner.origin();
  return v;
}

PolyGaussWigner make_fock1() { return {Mat2::Identity(), -1.0, Mat2::Identity()}; }

PolyGaussWigner make_vacuum() { return {Mat2::Zero(), 1.0, Mat2::Identity()}; }

PolyGaussWigner make_squeezed_fock1(double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("squeeze parameter must be finite");
  Mat2 gamma = Mat2::Zero();
  gamma(0, 0) = std::exp(-2.0 * t);
  gamma(1, 1) = std::exp(2.0 * t);
  Mat2 poly = Mat2::Zero();
  poly(0, 0) = std::exp(2.0 * t);
  poly(1, 1) = std::exp(-2.0 * t);
  return {poly, -1.0, gamma};
}

WignerMixture make_attenuated(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("transmission probability eta must lie in [0, 1]");
  }
  return WignerMixture({{eta, make_fock1()}, {1.0 - eta, make_vacuum()}});
}

double subtraction_squeeze(double tau, double s) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("tau must lie in [0, 1]");
  if (!(s >= 0.0)) throw std::invalid_argument("source squeezing must be >= 0");
  return std::atanh(tau * std::tanh(s));
}

NoisyEprSpec NoisyEprSpec::from_variances(double vsq, double van) {
  require_positive(vsq, "V_sq");
  require_positive(van, "V_an");
  if (vsq * van < 0.25 * (1.0 - 1e-12)) {
    throw std::invalid_argument("V_sq * V_an must be >= 1/4");
  }
  return NoisyEprSpec(vsq, van);
}

NoisyEprSpec NoisyEprSpec::from_noise(double vsq, double noise) {
  require_positive(vsq, "V_sq");
  require_positive(noise, "noise excess N");
  return from_variances(vsq, noise / (2.0 * vsq));
}

NoisyEprSpec NoisyEprSpec::from_db(double vsq_db, double noise_db) {
  return from_noise(vsq_from_db(vsq_db), noise_from_db(noise_db));
}

NoisyEprSpec NoisyEprSpec::pure(const SqueezeSpec& squeeze) {
  const double vsq = squeeze.vsq();
  return NoisyEprSpec(vsq, 0.25 / vsq);
}

TwoModeCM::TwoModeCM(const Mat4& gamma) : gamma_(gamma) {
  if ((gamma_ - gamma_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + gamma_.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("TwoModeCM must be symmetric");
  }
}

TwoModeCM TwoModeCM::symmetric(double v, double c) {
  Mat4 g = Mat4::Zero();
  g(0, 0) = g(1, 1) = g(2, 2) = g(3, 3) = v;
  g(0, 2) = g(2, 0) = c;
  g(1, 3) = g(3, 1) = -c;
  return TwoModeCM(g);
}

TwoModeCM TwoModeCM::from_epr(const NoisyEprSpec& spec) {
  return symmetric(spec.total_variance(), spec.correlation());
}

bool cm_is_physical(const TwoModeCM& cm, double tol) {
  const Mat2 a = cm.block_a();
  const Mat2 b = cm.block_b();
  const Mat2 d = cm.block_d();
  Eigen::SelfAdjointEigenSolver<Mat2> ea(a);
  Eigen::SelfAdjointEigenSolver<Mat2> eb(b);
  if (!(ea.eigenvalues().minCoeff() > 0.0) || !(eb.eigenvalues().minCoeff() > 0.0)) return false;

  const double det_a = a.determinant();
  const double det_b = b.determinant();
  const double det_d = d.determinant();
  const double det_g = cm.matrix().determinant();

  const double lhs1 = det_a + det_b + 2.0 * det_d;
  const double rhs1 = 1.0 + det_g;
  const double lhs2 = 2.0 * std::sqrt(det_a * det_b) + det_d * det_d;
  const double rhs2 = det_g + det_a * det_b;
  const double scale1 = 1.0 + std::abs(lhs1) + std::abs(rhs1);
  const double scale2 = 1.0 + std::abs(lhs2) + std::abs(rhs2);
  return lhs1 <= rhs1 + tol * scale1 && lhs2 <= rhs2 + tol * scale2;
}

}  // namespace telewig
