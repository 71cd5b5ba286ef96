#pragma once

// Perturbative expansion of the success probability in the expected error
// count x = 2 M n p.  Finite-n matrix elements <0|T_h|0> for h <= 2, the
// large-n functions F_h(Theta) = lim <0|T_h|0>/(Mn)^h in closed form for
// h <= 6, the series coefficients C_h and the truncated probability series.

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "grover/kernels.hpp"

namespace grover {

/// Upper end of the x range in which the order-6 term stays below 1e-3.
inline constexpr double kReliableX = 1.35;
/// Highest order with a closed-form F_h.
inline constexpr int kMaxClosedOrder = 6;
/// Default truncation order of the probability series.
inline constexpr int kDefaultOrder = 5;
/// Below this Theta the closed forms lose digits to cancellation and the
/// power series is used instead.
inline constexpr double kSmallThetaSwitch = 1e-2;

// ---------------------------------------------------------------------------
// Finite-n matrix elements

/// <0|T_0^(M)|0> = sin^2((2M+1) theta)
inline double t0_element(int n, long long M) {
  if (M < 0) throw std::invalid_argument("t0_element: M must be >= 0");
  const double s = std::sin((2.0 * M + 1.0) * boyer_theta(n).theta);
  return s * s;
}

namespace detail {

/// <0|(WR0)^{2(M-k)} sigma_z (WR0)^{2k} W|0>
inline double t1_even(const BoyerAngle& b, long long M, long long k) {
  const double t = b.theta;
  return parity_sign(M) * (std::cos(2.0 * (M - k) * t) * std::sin((2.0 * k + 1) * t) -
                           b.inv_rest() * std::sin(2.0 * (M - k) * t) * std::cos((2.0 * k + 1) * t));
}

/// <0|(WR0)^{2(M-k)-1} sigma_z (WR0)^{2k+1} W|0>
inline double t1_odd(const BoyerAngle& b, long long M, long long k) {
  const double t = b.theta;
  return parity_sign(M) *
         (std::sin((2.0 * M - 2.0 * k - 1) * t) * std::cos(2.0 * (k + 1) * t) -
          b.inv_rest() * std::cos((2.0 * M - 2.0 * k - 1) * t) * std::sin(2.0 * (k + 1) * t));
}

}  // namespace detail

/// <0|T_1^(M)|0> = n sum_k (|T_even^(k)|^2 + |T_odd^(k)|^2)
inline double t1_element(int n, long long M) {
  if (M < 0) throw std::invalid_argument("t1_element: M must be >= 0");
  const auto b = boyer_theta(n);
  double acc = 0.0;
  for (long long k = 0; k < M; ++k) {
    const double e = detail::t1_even(b, M, k);
    const double o = detail::t1_odd(b, M, k);
    acc += e * e + o * o;
  }
  return n * acc;
}

/// Two-error kernels.  The first error hits after 2k (even) or 2k+1 (odd)
/// half-steps, the second after a further 2l (even) or 2l+1 (odd); `same`
/// selects whether both errors act on the same qubit.
enum class PairKind { even_even, odd_even, even_odd, odd_odd };

inline double t2_kernel(PairKind kind, const BoyerAngle& b, long long M, long long k, long long l,
                        bool same) {
  const int n = b.n;
  const double t = b.theta;
  const double e = b.inv_rest();
  const double c2 = b.cos() * b.cos();
  const double d = same ? 1.0 : 0.0;
  const double flip = same ? -1.0 : 1.0;
  const double root = std::sqrt(std::ldexp(1.0, n));
  const double sM = parity_sign(M);
  const double K = static_cast<double>(k);
  const double L = static_cast<double>(l);

  switch (kind) {
    case PairKind::even_even: {
      const double a = static_cast<double>(M - k - l);
      const double bracket =
          (std::cos(2 * a * t) * std::sin(2 * L * t) - e * std::sin(2 * a * t) * std::cos(2 * L * t)) +
          parity_sign(l) * (e - d) * std::sin(2 * a * t);
      return g1_steps(2 * (k + l), 2 * (M - k - l), n) -
             sM * std::cos((2 * K + 1) * t) / c2 * bracket;
    }
    case PairKind::odd_even: {
      const double a = static_cast<double>(2 * (M - k - l) - 1);
      const double bracket =
          (std::sin(a * t) * std::sin(2 * L * t) + e * std::cos(a * t) * std::cos(2 * L * t)) +
          parity_sign(l - 1) * (e - d) * std::cos(a * t);
      return g1_steps(2 * (k + l) + 1, 2 * (M - k - l) - 1, n) +
             sM * std::sin(2 * (K + 1) * t) / c2 * bracket;
    }
    case PairKind::even_odd: {
      const double a = static_cast<double>(2 * (M - k - l) - 1);
      const double bracket =
          (std::sin(a * t) * std::cos((2 * L + 1) * t) - e * std::cos(a * t) * std::sin((2 * L + 1) * t)) +
          parity_sign(l) / root * (e + flip) * std::cos(a * t);
      return g1_steps(2 * (k + l) + 1, 2 * (M - k - l) - 1, n) -
             sM * std::cos((2 * K + 1) * t) / c2 * bracket;
    }
    case PairKind::odd_odd: {
      const double a = static_cast<double>(M - k - l - 1);
      const double bracket =
          -(std::cos(2 * a * t) * std::cos((2 * L + 1) * t) + e * std::sin(2 * a * t) * std::sin((2 * L + 1) * t)) +
          parity_sign(l) / root * (e + flip) * std::sin(2 * a * t);
      // Both errors sit at odd positions, so the surviving mode has run
      // 2(k+l+1) half-steps when the second error hits.
      return g1_steps(2 * (k + l + 1), 2 * (M - k - l - 1), n) +
             sM * std::sin(2 * (K + 1) * t) / c2 * bracket;
    }
  }
  throw std::invalid_argument("t2_kernel: unknown kind");
}

/// <0|T_2^(M)|0>
inline double t2_element(int n, long long M) {
  if (M < 0) throw std::invalid_argument("t2_element: M must be >= 0");
  const auto b = boyer_theta(n);
  const double distinct = static_cast<double>(n) * (n - 1);
  auto weighted = [&](PairKind kind, long long k, long long l) {
    const double x = t2_kernel(kind, b, M, k, l, false);
    const double y = t2_kernel(kind, b, M, k, l, true);
    return distinct * x * x + n * y * y;
  };

  double acc = 0.5 * (n - 1) * t1_element(n, M);
  for (long long k = 0; k < M; ++k) {
    for (long long l = 1; l <= M - k - 1; ++l) {
      acc += weighted(PairKind::even_even, k, l) + weighted(PairKind::odd_even, k, l);
    }
    for (long long l = 0; l <= M - k - 1; ++l) acc += weighted(PairKind::even_odd, k, l);
    for (long long l = 0; l <= M - k - 2; ++l) acc += weighted(PairKind::odd_odd, k, l);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Large-n closed forms
//
// Each F_h has the shape
//     F_h(T) = a + sum_k c_k T^{-k} cos 4T + sum_k s_k T^{-k} sin 4T,
// stored as coefficient tables so that values and T-derivatives share one
// source.

struct ClosedForm {
  double constant = 0.0;
  std::array<double, 6> cos_coeff{};  // index k multiplies T^{-k} cos 4T
  std::array<double, 6> sin_coeff{};  // index k multiplies T^{-k} sin 4T
};

using ClosedFormTable = std::array<ClosedForm, kMaxClosedOrder + 1>;

inline const ClosedFormTable& reference_closed_forms() {
  static const ClosedFormTable table = [] {
    ClosedFormTable t{};
    t[0] = {0.5, {-0.5}, {}};
    t[1] = {0.5, {-0.25}, {0.0, -1.0 / 16.0}};
    t[2] = {0.25, {-1.0 / 16.0}, {0.0, -3.0 / 64.0}};
    t[3] = {1.0 / 12.0,
            {-16.0 / 1536.0, 0.0, 3.0 / 1536.0},
            {0.0, -32.0 / 2048.0, 0.0, -1.0 / 2048.0}};
    t[4] = {1.0 / 48.0,
            {-16.0 / 12288.0, 0.0, 15.0 / 12288.0},
            {0.0, -5.0 * 32.0 / 49152.0, 0.0, -5.0 * 3.0 / 49152.0}};
    t[5] = {1.0 / 240.0,
            {-256.0 / 1966080.0, 0.0, 720.0 / 1966080.0, 0.0, 45.0 / 1966080.0},
            {0.0, -256.0 / 524288.0, 0.0, -32.0 / 524288.0, 0.0, -3.0 / 524288.0}};
    t[6] = {1.0 / 1440.0,
            {-256.0 / 23592960.0, 0.0, 1680.0 / 23592960.0, 0.0, 315.0 / 23592960.0},
            {0.0, -7.0 * 256.0 / 31457280.0, 0.0, 0.0, 0.0, -7.0 * 15.0 / 31457280.0}};
    return t;
  }();
  return table;
}

/// Value and Theta-derivative.
struct ValueSlope {
  double value = 0.0;
  double slope = 0.0;
};

namespace detail {

inline void require_order(int h, const char* who) {
  if (h < 0 || h > kMaxClosedOrder) {
    throw std::invalid_argument(std::string(who) + ": closed forms exist for 0 <= h <= 6, got " +
                                std::to_string(h) + " (use f_numeric)");
  }
}

inline void require_theta(double theta, const char* who) {
  if (!(theta >= 0.0) || !std::isfinite(theta)) {
    throw std::invalid_argument(std::string(who) + ": Theta must be finite and >= 0");
  }
}

/// Direct evaluation of the closed form; loses accuracy as Theta -> 0.
inline ValueSlope closed_form_direct(const ClosedForm& f, double theta) {
  const double c = std::cos(4.0 * theta);
  const double s = std::sin(4.0 * theta);
  const double inv = 1.0 / theta;
  ValueSlope r{f.constant, 0.0};
  double pk = 1.0;  // T^{-k}
  for (std::size_t k = 0; k < f.cos_coeff.size(); ++k) {
    const double ck = f.cos_coeff[k];
    const double sk = f.sin_coeff[k];
    r.value += (ck * c + sk * s) * pk;
    r.slope += (-static_cast<double>(k) * inv * (ck * c + sk * s) + 4.0 * (sk * c - ck * s)) * pk;
    pk *= inv;
  }
  return r;
}

/// Power series F_h(T) = 1/2 sum_{j>=1} (-1)^{j+1} C(h+j, j) 16^j T^{2j} / (h+2j)!
/// whose leading term is 8(h+1)/(h+2)! T^2.
inline ValueSlope closed_form_series(int h, double theta) {
  const double t2 = theta * theta;
  // term_j = C(h+j,j) 16^j T^{2j} / (h+2j)!, built up from term_1.
  double term = 0.5 * (h + 1.0) * 16.0 * t2;
  for (int q = 1; q <= h + 2; ++q) term /= q;
  ValueSlope r{};
  for (int j = 1; j <= 40; ++j) {
    const double sign = (j % 2 == 1) ? 1.0 : -1.0;
    r.value += sign * term;
    r.slope += sign * term * 2.0 * j / theta;
    const double next = term * (h + j + 1.0) / (j + 1.0) * 16.0 * t2 /
                        ((h + 2.0 * j + 1.0) * (h + 2.0 * j + 2.0));
    if (std::abs(next) < 1e-19 * std::abs(r.value)) break;
    term = next;
  }
  return r;
}

}  // namespace detail

/// F_h(Theta) and dF_h/dTheta from the closed forms (h <= 6).
inline ValueSlope f_closed_with_slope(int h, double theta,
                                      const ClosedFormTable& table = reference_closed_forms()) {
  detail::require_order(h, "f_closed");
  detail::require_theta(theta, "f_closed");
  if (theta == 0.0) return {0.0, 0.0};
  if (theta < kSmallThetaSwitch) return detail::closed_form_series(h, theta);
  return detail::closed_form_direct(table[static_cast<std::size_t>(h)], theta);
}

inline double f_closed(int h, double theta, const ClosedFormTable& table = reference_closed_forms()) {
  return f_closed_with_slope(h, theta, table).value;
}

/// Coefficient of Theta^2 in F_h as Theta -> 0: {4, 8/3, 1, 4/15, 1/18, 1/105, 1/720}.
inline double small_theta_coefficient(int h) {
  double c = 8.0 * (h + 1.0);
  for (int q = 1; q <= h + 2; ++q) c /= q;
  return c;
}

// ---------------------------------------------------------------------------
// Series coefficients and the probability series

inline double falling_factorial(int h, int j) {
  double r = 1.0;
  for (int q = 0; q < j; ++q) r *= (h - q);
  return r;
}

/// C_h = (-1)^h sum_{j<=h} (-1/2)^j h!/(h-j)! F_j, from F_0..F_h.
inline double c_from_f(int h, std::span<const double> f) {
  if (h < 0 || static_cast<std::size_t>(h) >= f.size()) {
    throw std::invalid_argument("c_from_f: need F_0..F_h");
  }
  double acc = 0.0;
  double half_pow = 1.0;
  for (int j = 0; j <= h; ++j) {
    acc += half_pow * falling_factorial(h, j) * f[static_cast<std::size_t>(j)];
    half_pow *= -0.5;
  }
  return (h % 2 == 0) ? acc : -acc;
}

inline double c_coeff(int h, double theta, const ClosedFormTable& table = reference_closed_forms()) {
  detail::require_order(h, "c_coeff");
  std::array<double, kMaxClosedOrder + 1> f{};
  for (int j = 0; j <= h; ++j) f[static_cast<std::size_t>(j)] = f_closed(j, theta, table);
  return c_from_f(h, std::span<const double>(f.data(), static_cast<std::size_t>(h) + 1));
}

struct SeriesTable {
  double theta = 0.0;
  int order = 0;
  std::vector<double> F;
  std::vector<double> C;
};

inline SeriesTable series_table(double theta, int order,
                                const ClosedFormTable& table = reference_closed_forms()) {
  detail::require_order(order, "series_table");
  SeriesTable t{theta, order, {}, {}};
  for (int h = 0; h <= order; ++h) t.F.push_back(f_closed(h, theta, table));
  for (int h = 0; h <= order; ++h) t.C.push_back(c_from_f(h, t.F));
  return t;
}

struct SeriesValue {
  double value = 0.0;
  double d_theta = 0.0;  // partial derivative in Theta at fixed x
  double d_x = 0.0;      // partial derivative in x at fixed Theta
  bool reliable = true;  // x <= 1.35
};

namespace detail {
inline void require_series_args(double x, int order, bool force_even, const char* who) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw std::invalid_argument(std::string(who) + ": x must be finite and >= 0");
  }
  require_order(order, who);
  if (order % 2 == 0 && !force_even) {
    throw std::invalid_argument(std::string(who) + ": truncation order " + std::to_string(order) +
                                " is even; odd orders keep the series monotone in x "
                                "(force to override)");
  }
}
}  // namespace detail

/// P_rob(Theta, x) truncated at `order` with its first partial derivatives.
inline SeriesValue prob_series_with_slope(double theta, double x, int order = kDefaultOrder,
                                          bool force_even = false,
                                          const ClosedFormTable& table = reference_closed_forms()) {
  detail::require_series_args(x, order, force_even, "prob_series");
  detail::require_theta(theta, "prob_series");
  std::array<double, kMaxClosedOrder + 1> f{};
  std::array<double, kMaxClosedOrder + 1> df{};
  for (int j = 0; j <= order; ++j) {
    const auto vs = f_closed_with_slope(j, theta, table);
    f[static_cast<std::size_t>(j)] = vs.value;
    df[static_cast<std::size_t>(j)] = vs.slope;
  }
  SeriesValue r{};
  double x_pow = 1.0;   // x^h / h!
  double dx_pow = 0.0;  // d/dx of x^h / h!
  for (int h = 0; h <= order; ++h) {
    const auto count = static_cast<std::size_t>(h) + 1;
    const double c = c_from_f(h, std::span<const double>(f.data(), count));
    const double dc = c_from_f(h, std::span<const double>(df.data(), count));
    r.value += c * x_pow;
    r.d_theta += dc * x_pow;
    r.d_x += c * dx_pow;
    dx_pow = x_pow;
    x_pow *= x / (h + 1.0);
  }
  r.reliable = x <= kReliableX;
  return r;
}

inline double prob_series(double theta, double x, int order = kDefaultOrder,
                          bool force_even = false) {
  return prob_series_with_slope(theta, x, order, force_even).value;
}

// ---------------------------------------------------------------------------
// Asymptotic h-error amplitude

/// lim_{n->inf} <0|(WR0)^{l_h} sz ... (WR0)^{l_1} sz (WR0)^{l_0} W|0> with
/// all errors on distinct qubits, evaluated at finite theta.
inline double asymptotic_g(std::span<const long long> lengths, double theta) {
  if (lengths.size() < 2) {
    throw std::invalid_argument("asymptotic_g: need l_0 and at least one error interval");
  }
  if (lengths[0] < 0) throw std::invalid_argument("asymptotic_g: l_0 must be >= 0");
  long long sign_exponent = lengths[0] / 2;
  const bool alpha0 = lengths[0] % 2 == 1;
  const double arg0 = (static_cast<double>(lengths[0]) + 1.0) * theta;
  double value = alpha0 ? std::cos(arg0) : std::sin(arg0);
  for (std::size_t s = 1; s < lengths.size(); ++s) {
    const long long l = lengths[s];
    if (l < 1) throw std::invalid_argument("asymptotic_g: l_s must be >= 1 for s >= 1");
    const bool alpha = l % 2 == 1;
    sign_exponent += l / 2 + (alpha ? 1 : 0);
    value *= alpha ? std::sin(static_cast<double>(l) * theta) : std::cos(static_cast<double>(l) * theta);
  }
  return (sign_exponent % 2 == 0) ? value : -value;
}

}  // namespace grover
