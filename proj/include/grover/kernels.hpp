#pragma once

// Closed-form scalar building blocks for Grover search on |0...0> with
// W = H^{(x)n} and the selective phase flip R0.  Every state reachable from
// W|0> by (WR0)^k or (R0W)^k has the two-component form
//     a0 |0> + a1 sum_{x != 0} |x>
// and all amplitudes below are expressed through the Boyer angle theta with
// sin(theta) = 2^{-n/2}.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace grover {

enum class Parity { even, odd };

constexpr int parity_sign(long long k) noexcept { return (k % 2 == 0) ? 1 : -1; }

/// Boyer angle of an n-qubit register.
struct BoyerAngle {
  int n = 2;
  double theta = std::numbers::pi / 6.0;

  double sin() const { return std::sin(theta); }
  double cos() const { return std::cos(theta); }
  /// 1 / (2^n - 1), the weight of the non-marked block.
  double inv_rest() const { return 1.0 / (std::ldexp(1.0, n) - 1.0); }
  /// 1 / sqrt(2^n - 1)
  double inv_sqrt_rest() const { return std::sqrt(inv_rest()); }
};

inline BoyerAngle boyer_theta(int n) {
  if (n < 2) {
    throw std::invalid_argument("boyer_theta: qubit count must be >= 2, got " + std::to_string(n));
  }
  return BoyerAngle{n, std::asin(std::sqrt(std::ldexp(1.0, -n)))};
}

/// a0|0> + a1 sum_{x!=0}|x> on n qubits.
struct TwoComponentState {
  double a0 = 0.0;
  double a1 = 0.0;
  int n = 2;

  double norm_squared() const { return a0 * a0 + (std::ldexp(1.0, n) - 1.0) * a1 * a1; }
};

namespace detail {
inline void require_step(long long k, const char* who) {
  if (k < 0) {
    throw std::invalid_argument(std::string(who) + ": step index must be >= 0");
  }
}
}  // namespace detail

/// (WR0)^{2k} W|0>
inline TwoComponentState state_after_even(long long k, int n) {
  detail::require_step(k, "state_after_even");
  const auto b = boyer_theta(n);
  const double s = parity_sign(k);
  const double phi = (2.0 * k + 1.0) * b.theta;
  return {s * std::sin(phi), s * std::cos(phi) * b.inv_sqrt_rest(), n};
}

/// (WR0)^{2k+1} W|0>
inline TwoComponentState state_after_odd(long long k, int n) {
  detail::require_step(k, "state_after_odd");
  const auto b = boyer_theta(n);
  const double s = parity_sign(k);
  const double phi = 2.0 * (k + 1.0) * b.theta;
  return {s * std::cos(phi), -s * std::sin(phi) * b.inv_sqrt_rest(), n};
}

/// (R0W)^{2k} |0>
inline TwoComponentState state_r0w_even(long long k, int n) {
  detail::require_step(k, "state_r0w_even");
  const auto b = boyer_theta(n);
  const double s = parity_sign(k);
  const double phi = 2.0 * k * b.theta;
  return {s * std::cos(phi), s * std::sin(phi) * b.inv_sqrt_rest(), n};
}

/// (R0W)^{2k+1} |0>
inline TwoComponentState state_r0w_odd(long long k, int n) {
  detail::require_step(k, "state_r0w_odd");
  const auto b = boyer_theta(n);
  const double s = parity_sign(k);
  const double phi = (2.0 * k + 1.0) * b.theta;
  return {-s * std::sin(phi), s * std::cos(phi) * b.inv_sqrt_rest(), n};
}

/// (WR0)^{steps} W|0> for any step count.
inline TwoComponentState grover_state(long long steps, int n) {
  detail::require_step(steps, "grover_state");
  return (steps % 2 == 0) ? state_after_even(steps / 2, n) : state_after_odd(steps / 2, n);
}

// ---------------------------------------------------------------------------
// Alternating trigonometric sums  sum_{l=0}^{N} (-1)^l f(l)

enum class TrigSumKind {
  sin_odd,       // sin((2l+1) theta)
  sin_even_next, // sin(2(l+1) theta)
  cos_odd,       // cos((2l+1) theta)
  cos_even_next, // cos(2(l+1) theta)
};

inline double trig_sum(TrigSumKind kind, long long n_upper, double theta) {
  if (n_upper < 0) {
    throw std::invalid_argument("trig_sum: upper limit must be >= 0");
  }
  const double c = std::cos(theta);
  if (std::abs(c) < 1e-14) {
    throw std::domain_error("trig_sum: cos(theta) = 0 is a pole of the closed form");
  }
  const double s = parity_sign(n_upper);
  const double N = static_cast<double>(n_upper);
  switch (kind) {
    case TrigSumKind::sin_odd:
      return 0.5 * s * std::sin(2.0 * (N + 1.0) * theta) / c;
    case TrigSumKind::sin_even_next:
      return std::sin(theta) / (2.0 * c) + s * std::sin((2.0 * N + 3.0) * theta) / (2.0 * c);
    case TrigSumKind::cos_odd:
      return (1.0 + s * std::cos(2.0 * (N + 1.0) * theta)) / (2.0 * c);
    case TrigSumKind::cos_even_next:
      return 0.5 + s * std::cos((2.0 * N + 3.0) * theta) / (2.0 * c);
  }
  throw std::invalid_argument("trig_sum: unknown kind");
}

// ---------------------------------------------------------------------------
// Single-error kernel  G1 = <0|(WR0)^{l'} sigma_z^(i) (WR0)^{k'} W|0>
// with k' = 2k + parity_k earlier steps and l' = 2l + parity_l later steps.
// Independent of the error qubit i.

inline double g1_kernel(long long k, long long l, Parity parity_k, Parity parity_l, int n) {
  if (k < 0 || l < 0) {
    throw std::invalid_argument("g1_kernel: k and l must be >= 0");
  }
  if (parity_l == Parity::even && l < 1) {
    throw std::invalid_argument("g1_kernel: an even number of later steps must be >= 2 (l >= 1)");
  }
  const auto b = boyer_theta(n);
  const double t = b.theta;
  const double e = b.inv_rest();
  const double s = parity_sign(k + l);
  const double K = static_cast<double>(k);
  const double L = static_cast<double>(l);

  if (parity_k == Parity::even && parity_l == Parity::even) {
    return s * (std::cos(2 * L * t) * std::sin((2 * K + 1) * t) -
                e * std::sin(2 * L * t) * std::cos((2 * K + 1) * t));
  }
  if (parity_k == Parity::even && parity_l == Parity::odd) {
    return s * (-std::sin((2 * L + 1) * t) * std::sin((2 * K + 1) * t) -
                e * std::cos((2 * L + 1) * t) * std::cos((2 * K + 1) * t));
  }
  if (parity_k == Parity::odd && parity_l == Parity::even) {
    return s * (std::cos(2 * L * t) * std::cos(2 * (K + 1) * t) +
                e * std::sin(2 * L * t) * std::sin(2 * (K + 1) * t));
  }
  return s * (-std::sin((2 * L + 1) * t) * std::cos(2 * (K + 1) * t) +
              e * std::cos((2 * L + 1) * t) * std::sin(2 * (K + 1) * t));
}

/// G1 addressed by raw step counts (earlier, later).
inline double g1_steps(long long earlier, long long later, int n) {
  return g1_kernel(earlier / 2, later / 2, earlier % 2 == 0 ? Parity::even : Parity::odd,
                   later % 2 == 0 ? Parity::even : Parity::odd, n);
}

// ---------------------------------------------------------------------------
// Overlaps with the error modes |eta_j> and (|0> - |j-bar>)/sqrt(2):
//   eta:                 <0|(WR0)^{s} sigma_z^(i) |eta_j>
//   zero_minus_overline: (1/sqrt2) <0|(WR0)^{s} sigma_z^(i) (|0> - |j-bar>)
// where s = 2*step + parity and same_qubit = (i == j).

enum class EtaKind { eta, zero_minus_overline };

inline double eta_overlap(EtaKind kind, long long step, Parity parity, bool same_qubit, int n) {
  detail::require_step(step, "eta_overlap");
  const auto b = boyer_theta(n);
  const double t = b.theta;
  const double s = parity_sign(step);
  const double K = static_cast<double>(step);
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  const double flip = same_qubit ? -1.0 : 1.0;  // (-1)^{delta_ij}

  if (kind == EtaKind::eta) {
    if (!same_qubit) {
      return 0.0;
    }
    const double arg = parity == Parity::even ? std::sin(2 * K * t) : std::cos((2 * K + 1) * t);
    return -s * inv_sqrt2 * arg / b.cos();
  }
  if (parity == Parity::even) {
    return s * inv_sqrt2 * (std::cos(2 * K * t) - flip * std::sin(2 * K * t) * b.inv_sqrt_rest());
  }
  return -s * inv_sqrt2 *
         (std::sin((2 * K + 1) * t) + flip * std::cos((2 * K + 1) * t) * b.inv_sqrt_rest());
}

}  // namespace grover
