#include "telewig/gain_optimizer.hpp"

#include "telewig/gaussian_channel.hpp"

#include <algorithm>
#include <limits>

namespace telewig {
namespace {

double coth(double x) { return 1.0 / std::tanh(x); }

double fock1_symmetric(double r, double g) { return origin_symmetric(r, g, 1.0); }

// Sign of d/dG of the Fock-state origin, (N' D - 2 N D') with N = alpha - G^2,
// D = alpha + G^2.
double fock1_slope(double r, double g) {
  const double c = r < 0.5 ? std::cosh(r) - g * std::sinh(r)
                           : 0.5 * ((1.0 - g) * std::exp(r) + (1.0 + g) * std::exp(-r));
  const double n = 2.0 * c * c - 1.0;
  const double dn = -4.0 * c * std::sinh(r);
  const double d = added_noise(r, g) + g * g;
  const double dalpha = -std::exp(2.0 * r) * (1.0 - g) + std::exp(-2.0 * r) * (1.0 + g);
  return dn * d - 2.0 * n * (dalpha + 2.0 * g);
}

// Bisection on the slope sign; needs slope(lo) < 0 < slope(hi).
double slope_root(double r, double lo, double hi) {
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (fock1_slope(r, mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Golden-section locates the minimum to about sqrt(eps); the slope root then
// resolves it to rounding level.
GainChoice numeric_gain(double r) {
  const double hi_bound = 2.0 * coth(r);
  const auto res = minimize_numeric([r](double g) { return fock1_symmetric(r, g); }, 0.0, hi_bound, 1e-12);
  const double step = 1e-6 * (1.0 + res.x);
  double g = res.x;
  for (double width = step; width < 1e-2 * (1.0 + res.x); width *= 2.0) {
    const double lo = std::max(0.0, res.x - width);
    const double hi = std::min(hi_bound, res.x + width);
    if (fock1_slope(r, lo) < 0.0 && fock1_slope(r, hi) > 0.0) {
      g = slope_root(r, lo, hi);
      break;
    }
  }
  return {g, fock1_symmetric(r, g), GainChoice::Method::numeric};
}

// At large r the minimum is a well of half-width ~2.4 e^{-r} about G = 1,
// flanked by two maxima.
GainChoice large_squeeze_gain(double r) {
  if (r > 300.0) return {1.0, fock1_symmetric(r, 1.0), GainChoice::Method::numeric};
  const double w = std::exp(-r);
  const double g = slope_root(r, 1.0 - w, 1.0 + w);
  return {g, fock1_symmetric(r, g), GainChoice::Method::numeric};
}

// Sign-change bisection on [lo, hi] for a function with f(lo) > 0 > f(hi).
template <class F>
double bisect_decreasing(F&& f, double lo, double hi, double tol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (!(flo > 0.0 && fhi < 0.0)) throw std::domain_error("bisection: no sign change in bracket");
  for (int i = 0; i < 200 && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double CubicCoeffs::cos_phi() const {
  const double p = depressed_p();
  const double q = depressed_q();
  return -(q / 2.0) * std::sqrt(-27.0 / (p * p * p));
}

std::optional<CubicCoeffs> cubic_coefficients(double r) {
  if (!(r > kCubicMinSqueeze) || !std::isfinite(r)) return std::nullopt;
  const double c2 = coth(2.0 * r);
  const double s2 = std::sinh(2.0 * r);
  return CubicCoeffs{-3.0 * coth(r), 2.0 + c2 * c2 + 3.0 * std::cosh(2.0 * r) / (s2 * s2), -c2};
}

std::array<double, 3> cubic_roots(const CubicCoeffs& cc) {
  const double p = cc.depressed_p();
  if (!(p < 0.0)) throw std::domain_error("cubic_roots: depressed coefficient p must be negative");
  double cphi = cc.cos_phi();
  if (!std::isfinite(cphi) || std::abs(cphi) > 1.0 + 1e-12) {
    throw std::domain_error("cubic_roots: discriminant outside the three-real-root regime");
  }
  cphi = std::clamp(cphi, -1.0, 1.0);
  const double phi = std::acos(cphi);
  const double m = 2.0 * std::sqrt(-p / 3.0);
  const double shift = -cc.a / 3.0;
  return {m * std::cos(phi / 3.0) + shift, -m * std::cos((phi + kPi) / 3.0) + shift,
          -m * std::cos((phi - kPi) / 3.0) + shift};
}

GainChoice optimal_gain_detail(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("optimal_gain: r must be > 0");
  if (r > kCubicMaxSqueeze) return large_squeeze_gain(r);
  const auto cc = cubic_coefficients(r);
  if (!cc) return numeric_gain(r);

  std::array<double, 3> roots{};
  try {
    roots = cubic_roots(*cc);
  } catch (const std::domain_error&) {
    return numeric_gain(r);
  }

  int best = -1;
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    if (!(roots[i] >= 0.0)) continue;
    const double v = fock1_symmetric(r, roots[i]);
    if (v < best_value || (v == best_value && roots[i] < roots[best])) {
      best_value = v;
      best = i;
    }
  }
  if (best < 0) return numeric_gain(r);
  GainChoice choice{roots[best], best_value, GainChoice::Method::cubic, best, best == 1};
  return choice;
}

double optimal_gain(double r) { return optimal_gain_detail(r).gain; }

ScalarMinimum optimal_gain_attenuated(double r, double eta) {
  if (!(r > 0.0)) throw std::invalid_argument("optimal_gain_attenuated: r must be > 0");
  return minimize_bounded([&](double g) { return origin_symmetric(r, g, eta); }, 0.0, 2.0 * coth(r),
                          1e-12);
}

double gain_crossover_r(double eta) {
  if (!(eta > 0.5 && eta <= 1.0)) throw std::domain_error("gain_crossover_r: need 1/2 < eta <= 1");
  if (eta == 1.0) {
    return bisect_decreasing([](double r) { return optimal_gain(r) - 1.0; }, 0.05, 4.0, 1e-12);
  }
  const double lo = threshold_unconditional(eta).r_optimal_gain + 0.05;
  return bisect_decreasing([eta](double r) { return optimal_gain_attenuated(r, eta).x - 1.0; }, lo,
                           4.0, 1e-12);
}

SymmetryReport three_variable_check(double r) {
  if (!(r > 0.0)) throw std::invalid_argument("three_variable_check: r must be > 0");
  const double ch = std::cosh(2.0 * r);
  const double sh = std::sinh(2.0 * r);
  // Origin value for a Fock input through the general (g_x, g_p, T) protocol.
  auto objective = [&](double gx, double gp, double t) {
    const double rr = 1.0 - t;
    const double sx = gx * std::sqrt(rr);
    const double sp = gp * std::sqrt(t);
    const double qx = ch + gx * gx * t * ch - 2.0 * gx * std::sqrt(t) * sh;
    const double qp = ch + gp * gp * rr * ch - 2.0 * gp * std::sqrt(rr) * sh;
    const double ds = sx * sp;
    const double den = (sx * sx + qx) * (sp * sp + qp);
    return (qx * qp - ds * ds) / (kPi * std::pow(den, 1.5));
  };

  std::array<double, 3> x{1.0, 1.0, 0.5};
  double best = std::numeric_limits<double>::infinity();
  for (int it = 1; it < 20; ++it) {
    const double t = 0.05 * it;
    for (int ix = 1; ix <= 60; ++ix) {
      for (int ip = 1; ip <= 60; ++ip) {
        const double v = objective(0.1 * ix, 0.1 * ip, t);
        if (v < best) {
          best = v;
          x = {0.1 * ix, 0.1 * ip, t};
        }
      }
    }
  }

  const std::array<double, 2> lower{0.0, 1e-9};
  const std::array<double, 2> upper{std::numeric_limits<double>::infinity(), 1.0 - 1e-9};
  std::array<double, 3> width{0.2, 0.2, 0.1};
  for (int sweep = 0; sweep < 2000; ++sweep) {
    double moved = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double lo = std::max(x[k] - width[k], k == 2 ? lower[1] : lower[0]);
      const double hi = std::min(x[k] + width[k], k == 2 ? upper[1] : upper[0]);
      auto line = [&](double v) {
        auto y = x;
        y[k] = v;
        return objective(y[0], y[1], y[2]);
      };
      const auto res = golden_section(line, lo, hi, 1e-13);
      const double step = std::abs(res.x - x[k]);
      if (res.value <= line(x[k])) x[k] = res.x;
      width[k] = std::max(4.0 * step, 1e-8);
      moved = std::max(moved, step);
    }
    if (moved < 1e-11) break;
  }

  return {x[2], x[0], x[1], objective(x[0], x[1], x[2]), optimal_gain_detail(r).origin};
}

double ralph_gain(double r) {
  if (!(r > 0.0)) throw std::domain_error("ralph_gain: diverges at r = 0");
  return coth(2.0 * r);
}

}  // namespace telewig
