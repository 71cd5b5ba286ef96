#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace grover {

using complex_t = std::complex<double>;

/// Largest register the density-operator and Monte Carlo runs accept.
inline constexpr int kMaxQubits = 12;
/// Largest register a single state vector accepts (used by large-n probes).
inline constexpr int kMaxStateQubits = 22;

namespace detail {
inline void require_qubits(int n, const char* who, int max_qubits = kMaxStateQubits) {
  if (n < 2 || n > max_qubits) {
    throw std::invalid_argument(std::string(who) + ": qubit count must be in [2, " +
                                std::to_string(max_qubits) + "], got " + std::to_string(n));
  }
}

/// Bit mask of qubit i (1-based, qubit 1 is the most significant bit).
inline std::size_t qubit_mask(int n, int qubit) {
  if (qubit < 1 || qubit > n) {
    throw std::out_of_range("qubit index " + std::to_string(qubit) + " outside 1.." +
                            std::to_string(n));
  }
  return std::size_t{1} << (n - qubit);
}

/// In-place normalised Walsh-Hadamard transform with the given element stride.
template <typename T>
void walsh_hadamard(T* data, std::size_t size, std::size_t stride = 1) {
  for (std::size_t half = 1; half < size; half <<= 1) {
    for (std::size_t block = 0; block < size; block += 2 * half) {
      for (std::size_t j = block; j < block + half; ++j) {
        T& a = data[j * stride];
        T& b = data[(j + half) * stride];
        const T u = a;
        a = u + b;
        b = u - b;
      }
    }
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(size));
  for (std::size_t j = 0; j < size; ++j) {
    data[j * stride] *= scale;
  }
}
}  // namespace detail

/// Pure n-qubit state, amplitudes indexed by the computational basis.
class StateVector {
 public:
  explicit StateVector(int n) : n_(n) {
    detail::require_qubits(n, "StateVector");
    amps_.assign(std::size_t{1} << n, complex_t{0.0, 0.0});
    amps_[0] = 1.0;
  }

  StateVector(int n, std::vector<complex_t> amps) : n_(n), amps_(std::move(amps)) {
    detail::require_qubits(n, "StateVector");
    if (amps_.size() != (std::size_t{1} << n)) {
      throw std::invalid_argument("StateVector: amplitude count must be 2^n");
    }
  }

  int qubits() const { return n_; }
  std::size_t dimension() const { return amps_.size(); }
  std::span<const complex_t> amplitudes() const { return amps_; }
  const complex_t& operator[](std::size_t x) const { return amps_[x]; }
  complex_t& operator[](std::size_t x) { return amps_[x]; }

  double norm_squared() const {
    double acc = 0.0;
    for (const auto& a : amps_) acc += std::norm(a);
    return acc;
  }

  double probability_of_zero() const { return std::norm(amps_[0]); }

  StateVector& apply_w() {
    detail::walsh_hadamard(amps_.data(), amps_.size());
    return *this;
  }

  StateVector& apply_r0() {
    amps_[0] = -amps_[0];
    return *this;
  }

  StateVector& apply_sigma_z(int qubit) {
    const std::size_t mask = detail::qubit_mask(n_, qubit);
    for (std::size_t x = 0; x < amps_.size(); ++x) {
      if (x & mask) amps_[x] = -amps_[x];
    }
    return *this;
  }

  /// One noiseless half-step WR0.
  StateVector& apply_wr0() { return apply_r0().apply_w(); }

  complex_t inner(const StateVector& other) const {
    complex_t acc{0.0, 0.0};
    for (std::size_t x = 0; x < amps_.size(); ++x) acc += std::conj(amps_[x]) * other.amps_[x];
    return acc;
  }

 private:
  int n_;
  std::vector<complex_t> amps_;
};

inline StateVector apply_w(StateVector s) { return std::move(s.apply_w()); }
inline StateVector apply_r0(StateVector s) { return std::move(s.apply_r0()); }
inline StateVector apply_sigma_z(StateVector s, int qubit) {
  return std::move(s.apply_sigma_z(qubit));
}

inline StateVector basis_state(int n, std::size_t index) {
  StateVector s(n);
  s[0] = 0.0;
  if (index >= s.dimension()) throw std::out_of_range("basis_state: index out of range");
  s[index] = 1.0;
  return s;
}

/// W|0>
inline StateVector uniform_state(int n) { return StateVector(n).apply_w(); }

/// (WR0)^steps W|0>
inline StateVector grover_trajectory(int n, long long steps) {
  StateVector s = uniform_state(n);
  for (long long k = 0; k < steps; ++k) s.apply_wr0();
  return s;
}

/// |eta_i> = 2^{-(n-1)/2} sum_{x : x_i = 1} |x>
inline StateVector construct_eta(int n, int qubit) {
  detail::require_qubits(n, "construct_eta");
  const std::size_t mask = detail::qubit_mask(n, qubit);
  StateVector s(n);
  s[0] = 0.0;
  const double amp = 1.0 / std::sqrt(static_cast<double>(std::size_t{1} << (n - 1)));
  for (std::size_t x = 0; x < s.dimension(); ++x) {
    if (x & mask) s[x] = amp;
  }
  return s;
}

/// Basis state with 1 exactly at the listed qubit positions (|i-bar> for one index).
inline StateVector construct_overline(int n, std::span<const int> qubits) {
  detail::require_qubits(n, "construct_overline");
  std::size_t index = 0;
  for (int q : qubits) {
    const std::size_t mask = detail::qubit_mask(n, q);
    if (index & mask) throw std::invalid_argument("construct_overline: repeated qubit index");
    index |= mask;
  }
  return basis_state(n, index);
}

}  // namespace grover
