#pragma once

// Threshold quantities derived from the probability series: the least Theta
// reaching a target probability, and the critical error parameters beyond
// which no Theta does.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "grover/kernels.hpp"
#include "grover/parallel.hpp"
#include "grover/perturbation.hpp"

namespace grover {

enum class RootStatus { converged, no_solution, not_converged };

inline const char* to_string(RootStatus s) {
  switch (s) {
    case RootStatus::converged: return "converged";
    case RootStatus::no_solution: return "no_solution";
    case RootStatus::not_converged: return "not_converged";
  }
  return "unknown";
}

struct SolverOptions {
  int newton_iterations = 50;
  int bisection_iterations = 200;
  double min_slope = 1e-12;
  double residual = 1e-9;
  /// Bracketing grid on [0, pi/2].
  int grid_points = 256;
};

struct RootResult {
  double theta = std::numeric_limits<double>::quiet_NaN();
  RootStatus status = RootStatus::no_solution;
  int iterations = 0;
  double residual = std::numeric_limits<double>::quiet_NaN();
  bool reliable = true;
};

/// Objective P(Theta) with its Theta-derivative.
using ThetaObjective = std::function<ValueSlope(double)>;

struct Maximum {
  double theta = 0.0;
  double value = 0.0;
  int iterations = 0;
};

inline constexpr double kHalfPi = std::numbers::pi / 2.0;

/// Golden-section search for the maximum of f on [lo, hi].
inline Maximum golden_maximum(const std::function<double(double)>& f, double lo, double hi,
                              double tol = 1e-10) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int it = 0;
  while (b - a > tol && it < 200) {
    if (fc > fd) {
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
    ++it;
  }
  const double t = 0.5 * (a + b);
  return {t, f(t), it};
}

/// Least Theta in (0, pi/2) with objective(Theta) = target.  The first
/// upward crossing on a grid gives the bracket; inside it Newton steps are
/// used while they stay in the bracket, bisection otherwise.
inline RootResult least_root(const ThetaObjective& objective, double target, double start,
                             const SolverOptions& opt = {}) {
  auto g = [&](double t) { return objective(t).value - target; };

  double lo = 0.0;
  double hi = 0.0;
  bool bracketed = false;
  double prev_t = 0.0;
  double prev_g = g(0.0);
  if (prev_g >= 0.0) return {0.0, RootStatus::converged, 0, prev_g, true};
  for (int j = 1; j <= opt.grid_points; ++j) {
    const double t = kHalfPi * j / opt.grid_points;
    const double gt = g(t);
    if (gt >= 0.0) {
      lo = prev_t;
      hi = t;
      bracketed = true;
      break;
    }
    prev_t = t;
    prev_g = gt;
  }

  int iterations = 0;
  if (!bracketed) {
    // A tangential root can hide between grid points; look at the peak.
    const auto peak = golden_maximum([&](double t) { return objective(t).value; }, 0.0, kHalfPi);
    iterations += peak.iterations;
    if (peak.value - target >= 0.0) {
      if (peak.value - target < opt.residual) {
        return {peak.theta, RootStatus::converged, iterations, peak.value - target, true};
      }
      // Crossing lies between the grid point left of the peak and the peak.
      const double step = kHalfPi / opt.grid_points;
      lo = std::max(0.0, std::floor(peak.theta / step) * step);
      if (g(lo) >= 0.0) lo = 0.0;
      hi = peak.theta;
      bracketed = true;
    }
  }
  if (!bracketed) return {std::numeric_limits<double>::quiet_NaN(), RootStatus::no_solution, iterations,
                          std::numeric_limits<double>::quiet_NaN(), true};

  double t = std::clamp(start, lo, hi);
  if (t <= lo || t >= hi) t = 0.5 * (lo + hi);
  bool newton = true;
  for (int it = 0; it < opt.newton_iterations + opt.bisection_iterations; ++it) {
    ++iterations;
    const auto v = objective(t);
    const double gt = v.value - target;
    if (std::abs(gt) < opt.residual) return {t, RootStatus::converged, iterations, gt, true};
    if (gt < 0.0) lo = t; else hi = t;
    if (it >= opt.newton_iterations || std::abs(v.slope) < opt.min_slope) newton = false;
    double next = newton ? t - gt / v.slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo < 1e-15) break;
    t = next;
  }
  return {t, RootStatus::not_converged, iterations, g(t), true};
}

// ---------------------------------------------------------------------------
// x-parameterized thresholds (n -> infinity at fixed x)

inline void require_threshold(double P_th, const char* who) {
  if (!(P_th > 0.0 && P_th <= 1.0)) {
    throw std::invalid_argument(std::string(who) + ": P_th must be in (0, 1]");
  }
}

/// Starting guess: the noiseless answer (1/2) arcsin sqrt(P_th).
inline double noiseless_theta(double P_th) { return 0.5 * std::asin(std::sqrt(P_th)); }

inline RootResult theta_th_tilde(double x, double P_th, int order = kDefaultOrder,
                                 bool force_even = false, const SolverOptions& opt = {}) {
  require_threshold(P_th, "theta_th_tilde");
  detail::require_series_args(x, order, force_even, "theta_th_tilde");
  auto objective = [&](double t) {
    const auto s = prob_series_with_slope(t, x, order, force_even);
    return ValueSlope{s.value, s.d_theta};
  };
  auto r = least_root(objective, P_th, noiseless_theta(P_th), opt);
  r.reliable = x <= kReliableX;
  return r;
}

struct CriticalPoint {
  double value = 0.0;  // x_c or p_c
  double theta = 0.0;  // maximizing Theta at the critical value
  RootStatus status = RootStatus::converged;
  int iterations = 0;
  bool reliable = true;
};

namespace detail {

/// Supremum of the first feasible interval of a scalar parameter.  Scans
/// upward in steps of `step` up to `limit`, then bisects the last step.
inline CriticalPoint critical_search(const std::function<Maximum(double)>& peak, double P_th,
                                     double step, double limit, double tol) {
  CriticalPoint c{};
  auto at0 = peak(0.0);
  c.iterations += at0.iterations;
  if (at0.value < P_th - 1e-12) {
    c.status = RootStatus::no_solution;
    c.value = std::numeric_limits<double>::quiet_NaN();
    return c;
  }
  double lo = 0.0;
  double hi = -1.0;
  Maximum best = at0;
  for (double v = step; v <= limit; v += step) {
    const auto m = peak(v);
    c.iterations += m.iterations;
    if (m.value < P_th) {
      hi = v;
      break;
    }
    lo = v;
    best = m;
  }
  if (hi < 0.0) {
    c.status = RootStatus::not_converged;
    c.value = lo;
    c.theta = best.theta;
    return c;
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const auto m = peak(mid);
    c.iterations += m.iterations;
    if (m.value >= P_th) {
      lo = mid;
      best = m;
    } else {
      hi = mid;
    }
  }
  c.value = lo;
  c.theta = best.theta;
  return c;
}

}  // namespace detail

/// Largest x for which max_Theta P_rob(Theta, x) still reaches P_th.
inline CriticalPoint x_critical(double P_th, int order = kDefaultOrder, double tol = 1e-4,
                                bool force_even = false) {
  require_threshold(P_th, "x_critical");
  detail::require_series_args(0.0, order, force_even, "x_critical");
  if (P_th == 1.0) return {0.0, std::numbers::pi / 4.0, RootStatus::converged, 0, true};
  auto peak = [&](double x) {
    return golden_maximum([&](double t) { return prob_series(t, x, order, force_even); }, 0.0,
                          kHalfPi);
  };
  auto c = detail::critical_search(peak, P_th, 0.05, 50.0, tol);
  c.reliable = c.value <= kReliableX;
  return c;
}

// ---------------------------------------------------------------------------
// p-parameterized thresholds (finite n through x = 2 n sqrt(2^n) Theta p)

inline double x_from_p(double theta, double p, int n) {
  return 2.0 * n * std::sqrt(std::ldexp(1.0, n)) * theta * p;
}

inline void require_p(double p, int n, const char* who) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(who) + ": p must be in [0, 1]");
  if (n < 2) throw std::invalid_argument(std::string(who) + ": n must be >= 2");
}

inline RootResult theta_th(double p, double P_th, int n, int order = kDefaultOrder,
                           bool force_even = false, const SolverOptions& opt = {}) {
  require_threshold(P_th, "theta_th");
  require_p(p, n, "theta_th");
  detail::require_series_args(0.0, order, force_even, "theta_th");
  const double k = x_from_p(1.0, p, n);
  auto objective = [&](double t) {
    const auto s = prob_series_with_slope(t, k * t, order, force_even);
    return ValueSlope{s.value, s.d_theta + k * s.d_x};
  };
  auto r = least_root(objective, P_th, noiseless_theta(P_th), opt);
  r.reliable = std::isnan(r.theta) || k * r.theta <= kReliableX;
  return r;
}

inline CriticalPoint p_critical(double P_th, int n, int order = kDefaultOrder, double tol = 1e-7,
                                bool force_even = false) {
  require_threshold(P_th, "p_critical");
  require_p(0.0, n, "p_critical");
  detail::require_series_args(0.0, order, force_even, "p_critical");
  if (P_th == 1.0) return {0.0, std::numbers::pi / 4.0, RootStatus::converged, 0, true};
  auto peak = [&](double p) {
    const double k = x_from_p(1.0, p, n);
    return golden_maximum([&](double t) { return prob_series(t, k * t, order, force_even); }, 0.0,
                          kHalfPi);
  };
  const double step = 0.05 / x_from_p(1.0, 1.0, n);
  auto c = detail::critical_search(peak, P_th, step, 1.0, tol);
  c.reliable = x_from_p(c.theta, c.value, n) <= kReliableX;
  return c;
}

// ---------------------------------------------------------------------------
// Tangent law near P_th = 1

struct TangentCoefficient {
  double analytic = 0.0;           // -1 / C_1(pi/4)
  double finite_difference = 0.0;  // slope of x_c between P_th = 0.995 and 0.999
};

inline TangentCoefficient tangent_coefficient(int order = kDefaultOrder, bool force_even = false) {
  TangentCoefficient t{};
  t.analytic = -1.0 / c_coeff(1, std::numbers::pi / 4.0);
  const double a = x_critical(0.995, order, 1e-11, force_even).value;
  const double b = x_critical(0.999, order, 1e-11, force_even).value;
  t.finite_difference = (a - b) / (0.999 - 0.995);
  return t;
}

/// Error probability of one dephasing event, p = sin^2(coupling angle).
inline double dephasing_p_from_coupling(double angle) {
  const double s = std::sin(angle);
  return s * s;
}

// ---------------------------------------------------------------------------
// Sweeps

struct SweepRecord {
  double input = 0.0;
  double theta = std::numeric_limits<double>::quiet_NaN();
  double critical = std::numeric_limits<double>::quiet_NaN();
  double probability = std::numeric_limits<double>::quiet_NaN();
  RootStatus status = RootStatus::no_solution;
  int iterations = 0;
  bool reliable = true;
};

/// x_c over a grid of thresholds; theta is the maximizing Theta.
inline std::vector<SweepRecord> sweep_x_critical(const std::vector<double>& thresholds,
                                                 int order = kDefaultOrder, double tol = 1e-4,
                                                 bool force_even = false) {
  for (double P : thresholds) require_threshold(P, "sweep_x_critical");
  std::vector<SweepRecord> out(thresholds.size());
  parallel_for(thresholds.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const auto c = x_critical(thresholds[i], order, tol, force_even);
      out[i] = {thresholds[i], c.theta, c.value, thresholds[i], c.status, c.iterations, c.reliable};
    }
  });
  return out;
}

/// Least root Theta~_th(x) over a grid of x at fixed P_th.
inline std::vector<SweepRecord> sweep_theta_th_x(const std::vector<double>& xs, double P_th,
                                                 int order = kDefaultOrder,
                                                 bool force_even = false) {
  require_threshold(P_th, "sweep_theta_th_x");
  for (double x : xs) detail::require_series_args(x, order, force_even, "sweep_theta_th_x");
  std::vector<SweepRecord> out(xs.size());
  parallel_for(xs.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const auto r = theta_th_tilde(xs[i], P_th, order, force_even);
      out[i] = {xs[i], r.theta, std::numeric_limits<double>::quiet_NaN(), P_th + r.residual,
                r.status, r.iterations, r.reliable};
    }
  });
  return out;
}

/// Least root Theta_th(p) at finite n over a grid of p at fixed P_th.
inline std::vector<SweepRecord> sweep_theta_th_p(const std::vector<double>& ps, double P_th, int n,
                                                 int order = kDefaultOrder,
                                                 bool force_even = false) {
  require_threshold(P_th, "sweep_theta_th_p");
  for (double p : ps) require_p(p, n, "sweep_theta_th_p");
  detail::require_series_args(0.0, order, force_even, "sweep_theta_th_p");
  std::vector<SweepRecord> out(ps.size());
  parallel_for(ps.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const auto r = theta_th(ps[i], P_th, n, order, force_even);
      out[i] = {ps[i], r.theta, std::numeric_limits<double>::quiet_NaN(), P_th + r.residual,
                r.status, r.iterations, r.reliable};
    }
  });
  return out;
}

/// Last converged row of a sweep, or nullptr.
inline const SweepRecord* last_converged(const std::vector<SweepRecord>& rows) {
  const SweepRecord* last = nullptr;
  for (const auto& r : rows) {
    if (r.status == RootStatus::converged) last = &r;
  }
  return last;
}

}  // namespace grover
