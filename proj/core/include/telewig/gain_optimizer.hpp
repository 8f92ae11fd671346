#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace telewig {

// The analytic gain is used for r in (kCubicMinSqueeze, kCubicMaxSqueeze].
// Below, coth r makes the cubic ill-conditioned; above, its three roots merge
// at G = 1 and the trigonometric form loses all precision.
inline constexpr double kCubicMinSqueeze = 1e-3;
inline constexpr double kCubicMaxSqueeze = 8.0;

/// Stationarity cubic G^3 + a G^2 + b G + c = 0 of the symmetric-protocol
/// origin value, with its depressed form y^3 + p y + q = 0, G = y - a/3.
struct CubicCoeffs {
  double a;
  double b;
  double c;

  double depressed_p() const { return b - a * a / 3.0; }
  double depressed_q() const { return c - a * b / 3.0 + 2.0 * a * a * a / 27.0; }
  double cos_phi() const;
};

/// Empty for r <= kCubicMinSqueeze (caller falls back to numeric search).
std::optional<CubicCoeffs> cubic_coefficients(double r);

/// Roots (G1, G2, G3) in trigonometric form: y1 = 2 sqrt(-p/3) cos(phi/3),
/// y2,3 = -2 sqrt(-p/3) cos((phi +- pi)/3), G = y - a/3.
/// Throws std::domain_error when p >= 0 or |cos phi| > 1 + 1e-12.
std::array<double, 3> cubic_roots(const CubicCoeffs& cc);

struct ScalarMinimum {
  double x;
  double value;
  int evaluations;
};

/// Plain golden-section search on [lo, hi]; stops when the interval is
/// shorter than tol.
template <class F>
ScalarMinimum golden_section(F&& f, double lo, double hi, double tol = 1e-10, int max_iter = 500) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int evals = 2;
  for (int i = 0; i < max_iter && (b - a) > tol; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++evals;
  }
  const double x = 0.5 * (a + b);
  return {x, f(x), evals + 1};
}

namespace detail {

template <class F>
int scan_argmin(F& f, double lo, double hi, int points, double& best_value) {
  int best = 0;
  best_value = f(lo);
  for (int i = 1; i <= points; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / points;
    const double v = f(x);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  return best;
}

}  // namespace detail

/// Scan + golden-section minimization. The scan locates a three-point
/// bracket; if the smallest sampled value sits on an end of [lo, hi] there is
/// no interior minimum and std::domain_error is thrown.
template <class F>
ScalarMinimum minimize_numeric(F&& f, double lo, double hi, double tol = 1e-10, int scan_points = 64) {
  if (!(hi > lo)) throw std::invalid_argument("minimize_numeric: empty bracket");
  double best_value = 0.0;
  const int best = detail::scan_argmin(f, lo, hi, scan_points, best_value);
  if (best == 0 || best == scan_points) {
    throw std::domain_error("minimize_numeric: no bracket found (minimum on the boundary)");
  }
  const double step = (hi - lo) / scan_points;
  auto res = golden_section(f, lo + (best - 1) * step, lo + (best + 1) * step, tol);
  res.evaluations += scan_points + 1;
  return res;
}

/// Like minimize_numeric, but a boundary minimum is returned instead of
/// rejected.
template <class F>
ScalarMinimum minimize_bounded(F&& f, double lo, double hi, double tol = 1e-10, int scan_points = 64) {
  double best_value = 0.0;
  const int best = detail::scan_argmin(f, lo, hi, scan_points, best_value);
  if (best == 0) return {lo, best_value, scan_points + 1};
  if (best == scan_points) return {hi, best_value, scan_points + 1};
  return minimize_numeric(f, lo, hi, tol, scan_points);
}

struct GainChoice {
  enum class Method { cubic, numeric };

  double gain;
  double origin;
  Method method;
  /// 0-based index of the root that minimized the origin (cubic method only).
  int root_index = -1;
  /// True when the evaluated minimizer is the G2 branch; a false value is a
  /// flag, not an error.
  bool matches_g2 = true;
};

/// Gain minimizing the symmetric-protocol origin for the Fock state.
GainChoice optimal_gain_detail(double r);
double optimal_gain(double r);

/// Numeric optimum for eta |1><1| + (1-eta)|0><0|. Searches (0, 2 coth r];
/// a boundary minimum (no negativity reachable) is returned as such.
ScalarMinimum optimal_gain_attenuated(double r, double eta);

/// Squeezing (as r) where the optimal gain crosses 1, i.e. where the optimal
/// protocol switches from amplifier (G > 1) to attenuator.
double gain_crossover_r(double eta = 1.0);

struct SymmetryReport {
  double transmissivity;
  double gain_x;
  double gain_p;
  double value;
  /// Symmetric-protocol value at the analytic optimum.
  double symmetric_value;
};

/// Unconstrained minimization of the general origin formula over
/// (g_x, g_p, T): coarse grid, then cyclic golden-section refinement.
SymmetryReport three_variable_check(double r);

/// coth(2r), the gain adding least noise for given measurement noise.
double ralph_gain(double r);

}  // namespace telewig
