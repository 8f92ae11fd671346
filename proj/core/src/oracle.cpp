#include "telewig/oracle.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <limits>
#include <thread>

namespace telewig {
namespace {

using boost::math::quadrature::gauss;
using boost::math::quadrature::gauss_kronrod;

double envelope_width(const Mat2& gamma) {
  Eigen::SelfAdjointEigenSolver<Mat2> es(gamma);
  return std::sqrt(es.eigenvalues().maxCoeff());
}

Box symmetric_box(double half) { return {-half, half, -half, half}; }

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

QuadratureResult integrate_2d(const std::function<double(double, double)>& f, const Box& box,
                              const QuadratureOptions& opts) {
  double inner_err = 0.0;
  auto row = [&](double x) {
    double err = 0.0;
    const double v = gauss_kronrod<double, 31>::integrate([&](double y) { return f(x, y); }, box.y_lo, box.y_hi,
                                                          opts.max_depth, opts.tolerance, &err);
    inner_err = std::max(inner_err, err);
    return v;
  };
  double err = 0.0;
  const double value =
      gauss_kronrod<double, 31>::integrate(row, box.x_lo, box.x_hi, opts.max_depth, opts.tolerance, &err);
  const double total_err = err + (box.x_hi - box.x_lo) * inner_err;
  if (!std::isfinite(value) || total_err > opts.max_error) {
    throw std::runtime_error("integrate_2d: quadrature did not converge to the requested error");
  }
  return {value, total_err};
}

QuadratureResult integrate_wigner(const PolyGaussWigner& w, const QuadratureOptions& opts) {
  const double half = opts.half_width * envelope_width(w.gamma());
  return integrate_2d([&](double x, double p) { return w(PhasePoint{x, p}); }, symmetric_box(half), opts);
}

namespace {

template <class Input>
double channel_integral(const GaussianMap& map, const Input& w_in, const PhasePoint& r_out, double width,
                        const QuadratureOptions& opts) {
  const double det_q = map.q().determinant();
  if (!(det_q > 0.0)) throw std::domain_error("wigner_via_quadrature: kernel needs Q > 0");
  const Mat2 q_inv = map.q().inverse();
  const Mat2 s_lambda = map.s() * GaussianMap::lambda();
  const Vec2 out = r_out.vec();
  const double kernel_norm = 1.0 / (2.0 * kPi * kPi * std::sqrt(det_q));
  auto integrand = [&](double x, double p) {
    const Vec2 r_in(x, p);
    const Vec2 delta = out - s_lambda * r_in;
    const double kernel = kernel_norm * std::exp(-delta.dot(q_inv * delta));
    const Vec2 flipped = GaussianMap::lambda() * r_in;
    return 2.0 * kPi * kernel * w_in(PhasePoint{flipped.x(), flipped.y()});
  };
  return integrate_2d(integrand, symmetric_box(opts.half_width * width), opts).value;
}

}  // namespace

double wigner_via_quadrature(const GaussianMap& map, const PolyGaussWigner& w_in, const PhasePoint& r_out,
                             const QuadratureOptions& opts) {
  return channel_integral(map, w_in, r_out, envelope_width(w_in.gamma()), opts);
}

double wigner_via_quadrature(const GaussianMap& map, const WignerMixture& w_in, const PhasePoint& r_out,
                             const QuadratureOptions& opts) {
  double width = 0.0;
  for (const auto& t : w_in.terms()) width = std::max(width, envelope_width(t.wigner.gamma()));
  return channel_integral(map, w_in, r_out, width, opts);
}

double origin_via_quadrature(const GaussianMap& map, const PolyGaussWigner& w_in, const QuadratureOptions& opts) {
  return wigner_via_quadrature(map, w_in, PhasePoint{}, opts);
}

double origin_via_quadrature(const GaussianMap& map, const WignerMixture& w_in, const QuadratureOptions& opts) {
  return wigner_via_quadrature(map, w_in, PhasePoint{}, opts);
}

// ---------------------------------------------------------------------------
// Fock-space simulation

FockVector::FockVector(std::vector<cplx> amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.empty()) throw std::invalid_argument("FockVector: empty amplitude list");
}

FockVector FockVector::number_state(std::size_t n, std::size_t truncation) {
  if (n > truncation) throw std::invalid_argument("FockVector: number state beyond truncation");
  std::vector<cplx> amps(truncation + 1, cplx(0.0));
  amps[n] = 1.0;
  return FockVector(std::move(amps));
}

double FockVector::norm2() const {
  double s = 0.0;
  for (const auto& c : amps_) s += std::norm(c);
  return s;
}

double FockVector::tail_mass() const {
  const double n = norm2();
  return n > 0.0 ? std::norm(amps_.back()) / n : 0.0;
}

double FockVector::parity_expectation() const {
  double s = 0.0;
  for (std::size_t k = 0; k < amps_.size(); ++k) s += (k % 2 == 0 ? 1.0 : -1.0) * std::norm(amps_[k]);
  return s;
}

Eigen::MatrixXcd displacement_matrix(cplx alpha, std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXcd d(n, n);
  d(0, 0) = std::exp(-std::norm(alpha) / 2.0);
  for (Eigen::Index k = 1; k < n; ++k) d(k, 0) = d(k - 1, 0) * alpha / std::sqrt(static_cast<double>(k));
  const cplx alpha_c = std::conj(alpha);
  for (Eigen::Index m = 1; m < n; ++m) {
    const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m));
    d(0, m) = -alpha_c * d(0, m - 1) * inv_sqrt_m;
    for (Eigen::Index k = 1; k < n; ++k) {
      d(k, m) = (std::sqrt(static_cast<double>(k)) * d(k - 1, m - 1) - alpha_c * d(k, m - 1)) * inv_sqrt_m;
    }
  }
  return d;
}

std::size_t default_truncation(double max_displacement) {
  const double a2 = max_displacement * max_displacement;
  const double log_bound = std::log(1e-14);
  std::size_t n = 1;
  // log of the Poisson weight e^{-a2} a2^n / n!, checked past its peak.
  for (;; ++n) {
    const double log_term =
        -a2 + (a2 > 0.0 ? n * std::log(a2) : -std::numeric_limits<double>::infinity()) - std::lgamma(n + 1.0);
    if (static_cast<double>(n) >= a2 && log_term < log_bound) break;
  }
  return std::max<std::size_t>(n + 2, 4);
}

namespace {

void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0)) throw std::invalid_argument("lambda must lie in [0, 1)");
}

// Conditional state evolution with preallocated work matrices.
class ConditionalSimulator {
 public:
  ConditionalSimulator(double lambda, double gain, std::size_t truncation)
      : gain_(gain), dim_(truncation + 1), filter_(static_cast<Eigen::Index>(dim_)) {
    const double pref = std::sqrt(1.0 - lambda * lambda);
    double lk = 1.0;
    for (Eigen::Index k = 0; k < filter_.size(); ++k) {
      filter_(k) = pref * lk;
      lk *= lambda;
    }
  }

  // Returns the output states for the given input columns (Fock indices).
  void run(cplx beta, const Eigen::MatrixXcd& inputs, Eigen::MatrixXcd& outputs) {
    const Eigen::MatrixXcd d_in = displacement_matrix(-beta, dim_);
    const Eigen::MatrixXcd d_out = displacement_matrix(gain_ * beta, dim_);
    Eigen::MatrixXcd mid = d_in * inputs;
    mid = filter_.asDiagonal() * mid;
    outputs.noalias() = d_out * mid;
  }

  std::size_t dim() const { return dim_; }

 private:
  double gain_;
  std::size_t dim_;
  Eigen::VectorXd filter_;
};

Eigen::MatrixXcd pad_inputs(const std::vector<const FockVector*>& inputs, std::size_t dim) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(inputs.size()));
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    const auto& amps = inputs[j]->amplitudes();
    for (std::size_t k = 0; k < std::min(dim, amps.size()); ++k) {
      m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = amps[k];
    }
  }
  return m;
}

}  // namespace

FockVector conditional_state(double lambda, double gain, cplx beta, const FockVector& input, std::size_t truncation) {
  check_lambda(lambda);
  if (!(gain >= 0.0)) throw std::invalid_argument("gain must be >= 0");
  std::size_t n = truncation;
  if (n == 0) n = default_truncation((1.0 + gain) * std::abs(beta)) + input.truncation();
  ConditionalSimulator sim(lambda, gain, n);
  const Eigen::MatrixXcd in = pad_inputs({&input}, sim.dim());
  Eigen::MatrixXcd out;
  sim.run(beta, in, out);
  std::vector<cplx> amps(out.rows());
  for (Eigen::Index k = 0; k < out.rows(); ++k) amps[static_cast<std::size_t>(k)] = out(k, 0);
  return FockVector(std::move(amps));
}

FockVector conditional_state_fock(double lambda, double gain, cplx beta, std::size_t truncation) {
  return conditional_state(lambda, gain, beta, FockVector::number_state(1, 1), truncation);
}

double origin_via_parity(const FockVector& state) {
  const double n = state.norm2();
  if (!(n > 0.0)) throw std::domain_error("origin_via_parity: zero vector");
  return state.parity_expectation() / (kPi * n);
}

double origin_via_parity(std::span<const WeightedFock> mixture) {
  double trace = 0.0;
  double parity = 0.0;
  for (const auto& m : mixture) {
    trace += m.weight * m.state.norm2();
    parity += m.weight * m.state.parity_expectation();
  }
  if (!(trace > 0.0)) throw std::domain_error("origin_via_parity: zero-trace mixture");
  return parity / (kPi * trace);
}

// ---------------------------------------------------------------------------
// Monte Carlo over acceptance regions

namespace {

struct ChunkSums {
  CompensatedSum f, g, ff, gg, fg;
  std::size_t n = 0;
};

constexpr std::size_t kChunk = 1u << 14;

// sampler(rng) -> beta; area_factor converts E[.] to (1/pi) \int_region d^2 beta.
template <class Sampler>
McEstimate region_mc(double lambda, double gain, double eta, std::size_t samples, std::uint64_t seed,
                     double area_factor, double beta_max, Sampler sampler) {
  check_lambda(lambda);
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1]");
  if (samples < 2) throw std::invalid_argument("Monte Carlo needs at least two samples");

  const std::size_t truncation = default_truncation((1.0 + gain) * beta_max) + 1;
  const std::size_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<ChunkSums> sums(chunks);

  auto work = [&](std::size_t first, std::size_t stride) {
    ConditionalSimulator sim(lambda, gain, truncation);
    const FockVector one = FockVector::number_state(1, 1);
    const FockVector zero = FockVector::number_state(0, 1);
    const Eigen::MatrixXcd inputs = pad_inputs({&one, &zero}, sim.dim());
    Eigen::MatrixXcd out(inputs.rows(), inputs.cols());
    for (std::size_t c = first; c < chunks; c += stride) {
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
      std::mt19937_64 rng(seq);
      const std::size_t begin = c * kChunk;
      const std::size_t end = std::min(samples, begin + kChunk);
      ChunkSums& s = sums[c];
      for (std::size_t i = begin; i < end; ++i) {
        const cplx beta = sampler(rng);
        sim.run(beta, inputs, out);
        double n1 = 0.0, p1 = 0.0, n0 = 0.0, p0 = 0.0;
        for (Eigen::Index k = 0; k < out.rows(); ++k) {
          const double sign = (k % 2 == 0) ? 1.0 : -1.0;
          const double a1 = std::norm(out(k, 0));
          const double a0 = std::norm(out(k, 1));
          n1 += a1;
          p1 += sign * a1;
          n0 += a0;
          p0 += sign * a0;
        }
        const double f = eta * n1 + (1.0 - eta) * n0;
        const double g = eta * p1 + (1.0 - eta) * p0;
        s.f.add(f);
        s.g.add(g);
        s.ff.add(f * f);
        s.gg.add(g * g);
        s.fg.add(f * g);
        ++s.n;
      }
    }
  };

  const std::size_t threads =
      std::max<std::size_t>(1, std::min<std::size_t>(chunks, std::thread::hardware_concurrency()));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
  }

  CompensatedSum f, g, ff, gg, fg;
  for (const auto& s : sums) {
    f.add(s.f.value());
    g.add(s.g.value());
    ff.add(s.ff.value());
    gg.add(s.gg.value());
    fg.add(s.fg.value());
  }
  const double m = static_cast<double>(samples);
  const double mf = f.value() / m;
  const double mg = g.value() / m;
  const double var_f = std::max(0.0, (ff.value() / m - mf * mf) * m / (m - 1.0));
  const double var_g = std::max(0.0, (gg.value() / m - mg * mg) * m / (m - 1.0));
  const double cov_fg = (fg.value() / m - mf * mg) * m / (m - 1.0);
  const double ratio = mg / mf;
  const double var_ratio = std::max(0.0, var_g - 2.0 * ratio * cov_fg + ratio * ratio * var_f) / (mf * mf * m);

  McEstimate est{};
  est.success = area_factor * mf;
  est.success_err = area_factor * std::sqrt(var_f / m);
  est.origin = ratio / kPi;
  est.origin_err = std::sqrt(var_ratio) / kPi;
  est.samples = samples;
  return est;
}

}  // namespace

McEstimate disk_average_mc(double lambda, double gain, const DiskRegion& disk, double eta, std::size_t samples,
                           std::uint64_t seed) {
  const double k = disk.radius;
  auto sampler = [k](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double rad = k * std::sqrt(u(rng));
    const double ang = 2.0 * kPi * u(rng);
    return std::polar(rad, ang);
  };
  return region_mc(lambda, gain, eta, samples, seed, k * k, k, sampler);
}

McEstimate square_average_mc(double lambda, double gain, const SquareRegion& square, double eta,
                             std::size_t samples, std::uint64_t seed) {
  const double a = square.half_side;
  auto sampler = [a](std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-a, a);
    const double x = u(rng);
    const double p = u(rng);
    return cplx(x, p) / std::sqrt(2.0);
  };
  // beta-plane area of the square is 2 a^2.
  return region_mc(lambda, gain, eta, samples, seed, 2.0 * a * a / kPi, a, sampler);
}

// ---------------------------------------------------------------------------
// Noisy-resource overlap integrals

namespace {

struct NoisyKernel {
  Mat4 gamma_inv;
  double norm_ab;
  Mat2 a_inv;
  double norm_a;

  explicit NoisyKernel(const NoisyEprSpec& spec) {
    const TwoModeCM cm = TwoModeCM::from_epr(spec);
    gamma_inv = cm.matrix().inverse();
    norm_ab = 1.0 / (kPi * kPi * std::sqrt(cm.matrix().determinant()));
    const Mat2 a = cm.block_a();
    a_inv = a.inverse();
    norm_a = 1.0 / (kPi * std::sqrt(a.determinant()));
  }
};

}  // namespace

OutcomeIntegrals noisy_outcome_via_quadrature(const NoisyEprSpec& spec, double gain, double x_u, double p_v,
                                              double eta, const QuadratureOptions& opts) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in [0, 1]");
  const NoisyKernel kern(spec);
  const PolyGaussWigner fock = make_fock1();
  const PolyGaussWigner vac = make_vacuum();
  auto w_in = [&](double x, double p) {
    const PhasePoint r{x, p};
    return eta * fock(r) + (1.0 - eta) * vac(r);
  };
  const Vec2 shift_a(x_u, -p_v);
  const Vec2 shift_b = gain * Vec2(x_u, p_v);

  auto wigner_integrand = [&](double x, double p) {
    Eigen::Vector4d xi;
    xi << x - shift_a.x(), p - shift_a.y(), -shift_b.x(), -shift_b.y();
    return 2.0 * kPi * kern.norm_ab * std::exp(-xi.dot(kern.gamma_inv * xi)) * w_in(x, p);
  };
  auto density_integrand = [&](double x, double p) {
    const Vec2 d = Vec2(x, p) - shift_a;
    return 2.0 * kPi * kern.norm_a * std::exp(-d.dot(kern.a_inv * d)) * w_in(x, p);
  };
  const Box box = symmetric_box(opts.half_width);
  return {integrate_2d(density_integrand, box, opts).value, integrate_2d(wigner_integrand, box, opts).value};
}

double noisy_point_via_quadrature(const NoisyEprSpec& spec, double eta, const QuadratureOptions& opts) {
  const auto r = noisy_outcome_via_quadrature(spec, 0.0, 0.0, 0.0, eta, opts);
  return r.wigner_origin / r.density;
}

SquareConditioned noisy_square_via_quadrature(const NoisyEprSpec& spec, double gain, const SquareRegion& square,
                                              const QuadratureOptions& opts) {
  const double a = square.half_side;
  using rule = gauss<double, 20>;
  std::vector<double> nodes;
  std::vector<double> weights;
  const auto& abscissa = rule::abscissa();
  const auto& w = rule::weights();
  for (std::size_t i = 0; i < abscissa.size(); ++i) {
    nodes.push_back(abscissa[i]);
    weights.push_back(w[i]);
    if (abscissa[i] != 0.0) {
      nodes.push_back(-abscissa[i]);
      weights.push_back(w[i]);
    }
  }
  CompensatedSum dsum;
  CompensatedSum wsum;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const auto r = noisy_outcome_via_quadrature(spec, gain, a * nodes[i], a * nodes[j], 1.0, opts);
      const double wt = weights[i] * weights[j] * a * a;
      dsum.add(wt * r.density);
      wsum.add(wt * r.wigner_origin);
    }
  }
  // d^2 beta = dx_u dp_v / 2.
  const double success = dsum.value() / (2.0 * kPi);
  return {success, wsum.value() / (2.0 * kPi) / success};
}

}  // namespace telewig
