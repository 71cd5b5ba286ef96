#pragma once

// Ground-truth simulators for Grover search under independent per-qubit
// sigma_z dephasing.  One half-step is
//     dephasing on every qubit -> R0 -> W
// and a Grover iteration is two half-steps.  The prepared state W|0> itself
// receives no errors.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "grover/parallel.hpp"
#include "grover/rng.hpp"
#include "grover/state_vector.hpp"

namespace grover {

struct SimConfig {
  int n = 8;
  int M = 12;
  double p = 0.0;
  std::uint64_t trials = 20000;
  std::uint64_t seed = 20011112;

  void validate() const {
    if (n < 2 || n > kMaxQubits) {
      throw std::invalid_argument("SimConfig: n must be in [2, " + std::to_string(kMaxQubits) +
                                  "], got " + std::to_string(n));
    }
    if (M < 0) throw std::invalid_argument("SimConfig: M must be >= 0");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("SimConfig: p must be in [0, 1]");
    if (trials < 1) throw std::invalid_argument("SimConfig: trials must be >= 1");
  }

  int half_steps() const { return 2 * M; }
  /// Expected error count over the run, x = 2 M n p.
  double x() const { return 2.0 * M * n * p; }
};

// ---------------------------------------------------------------------------
// Density operator

class DensityOperator {
 public:
  /// |psi><psi|
  explicit DensityOperator(const StateVector& psi) : n_(psi.qubits()), dim_(psi.dimension()) {
    detail::require_qubits(n_, "DensityOperator", kMaxQubits);
    rho_.resize(dim_ * dim_);
    for (std::size_t x = 0; x < dim_; ++x) {
      for (std::size_t y = 0; y < dim_; ++y) rho_[x * dim_ + y] = psi[x] * std::conj(psi[y]);
    }
  }

  DensityOperator(int n, std::vector<complex_t> elements)
      : n_(n), dim_(std::size_t{1} << n), rho_(std::move(elements)) {
    detail::require_qubits(n_, "DensityOperator", kMaxQubits);
    if (rho_.size() != dim_ * dim_) {
      throw std::invalid_argument("DensityOperator: element count must be 4^n");
    }
  }

  int qubits() const { return n_; }
  std::size_t dimension() const { return dim_; }
  const complex_t& operator()(std::size_t x, std::size_t y) const { return rho_[x * dim_ + y]; }
  complex_t& operator()(std::size_t x, std::size_t y) { return rho_[x * dim_ + y]; }

  double probability_of_zero() const { return rho_[0].real(); }

  complex_t trace() const {
    complex_t t{0.0, 0.0};
    for (std::size_t x = 0; x < dim_; ++x) t += rho_[x * dim_ + x];
    return t;
  }

  /// max |rho - rho^dagger|
  double hermiticity_error() const {
    double worst = 0.0;
    for (std::size_t x = 0; x < dim_; ++x) {
      for (std::size_t y = x; y < dim_; ++y) {
        worst = std::max(worst, std::abs(rho_[x * dim_ + y] - std::conj(rho_[y * dim_ + x])));
      }
    }
    return worst;
  }

  /// rho -> (1-p) rho + p sigma_z^(i) rho sigma_z^(i)
  DensityOperator& dephase(int qubit, double p) {
    const std::size_t mask = detail::qubit_mask(n_, qubit);
    const double flipped = 1.0 - 2.0 * p;
    for (std::size_t x = 0; x < dim_; ++x) {
      for (std::size_t y = 0; y < dim_; ++y) {
        if (((x ^ y) & mask) != 0) rho_[x * dim_ + y] *= flipped;
      }
    }
    return *this;
  }

  DensityOperator& dephase_all(double p) {
    for (int q = 1; q <= n_; ++q) dephase(q, p);
    return *this;
  }

  /// rho -> sigma_z^(i) rho sigma_z^(i)
  DensityOperator& conjugate_sigma_z(int qubit) {
    const std::size_t mask = detail::qubit_mask(n_, qubit);
    for (std::size_t x = 0; x < dim_; ++x) {
      for (std::size_t y = 0; y < dim_; ++y) {
        if (((x ^ y) & mask) != 0) rho_[x * dim_ + y] = -rho_[x * dim_ + y];
      }
    }
    return *this;
  }

  /// rho -> R0 rho R0
  DensityOperator& conjugate_r0() {
    for (std::size_t y = 1; y < dim_; ++y) {
      rho_[y] = -rho_[y];
      rho_[y * dim_] = -rho_[y * dim_];
    }
    return *this;
  }

  /// rho -> W rho W
  DensityOperator& conjugate_w() {
    for (std::size_t x = 0; x < dim_; ++x) detail::walsh_hadamard(&rho_[x * dim_], dim_, 1);
    for (std::size_t y = 0; y < dim_; ++y) detail::walsh_hadamard(&rho_[y], dim_, dim_);
    return *this;
  }

  /// One noisy half-step: dephasing on all qubits, then R0, then W.
  DensityOperator& half_step(double p) { return dephase_all(p).conjugate_r0().conjugate_w(); }

 private:
  int n_;
  std::size_t dim_;
  std::vector<complex_t> rho_;
};

/// <0|rho|0> after each Grover iteration 0..M of the exact dephasing channel.
inline std::vector<double> evolve_density(const SimConfig& config) {
  config.validate();
  DensityOperator rho(uniform_state(config.n));
  std::vector<double> probabilities;
  probabilities.reserve(static_cast<std::size_t>(config.M) + 1);
  probabilities.push_back(rho.probability_of_zero());
  for (int iteration = 0; iteration < config.M; ++iteration) {
    rho.half_step(config.p).half_step(config.p);
    probabilities.push_back(rho.probability_of_zero());
  }
  return probabilities;
}

// ---------------------------------------------------------------------------
// Monte Carlo trajectories

struct StepEstimate {
  int step = 0;
  double mean = 0.0;
  double std_error = 0.0;
};

namespace detail {
/// Mean and standard error with the data shifted by its first element, so
/// that identical samples give mean == sample and std_error == 0 exactly.
inline StepEstimate summarize(int step, const double* samples, std::size_t count,
                              std::size_t stride) {
  const double origin = samples[0];
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t t = 0; t < count; ++t) {
    const double d = samples[t * stride] - origin;
    sum += d;
    sum_sq += d * d;
  }
  const double c = static_cast<double>(count);
  StepEstimate e{step, origin + sum / c, 0.0};
  if (count > 1) {
    const double var = std::max(0.0, (sum_sq - sum * sum / c) / (c - 1.0));
    e.std_error = std::sqrt(var / c);
  } else {
    e.std_error = std::numeric_limits<double>::quiet_NaN();
  }
  return e;
}
}  // namespace detail

/// Per-iteration sample mean and standard error of |<0|psi>|^2 over
/// independent trajectories.  Before every R0 each qubit receives sigma_z
/// with probability p.  Trial t draws only from CounterRng(seed, t).
inline std::vector<StepEstimate> monte_carlo_trace(const SimConfig& config,
                                                   unsigned workers = thread_count()) {
  config.validate();
  const std::size_t trials = config.trials;
  const std::size_t stride = static_cast<std::size_t>(config.M) + 1;
  std::vector<double> samples(trials * stride);

  parallel_for(
      trials,
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
          CounterRng rng(config.seed, t);
          StateVector psi = uniform_state(config.n);
          double* out = &samples[t * stride];
          out[0] = psi.probability_of_zero();
          for (int iteration = 0; iteration < config.M; ++iteration) {
            for (int half = 0; half < 2; ++half) {
              for (int q = 1; q <= config.n; ++q) {
                if (rng.bernoulli(config.p)) psi.apply_sigma_z(q);
              }
              psi.apply_wr0();
            }
            out[iteration + 1] = psi.probability_of_zero();
          }
        }
      },
      workers);

  std::vector<StepEstimate> trace;
  trace.reserve(stride);
  for (std::size_t m = 0; m < stride; ++m) {
    trace.push_back(detail::summarize(static_cast<int>(m), &samples[m], trials, stride));
  }
  return trace;
}

/// Mean and standard error at iteration M.
inline StepEstimate monte_carlo(const SimConfig& config, unsigned workers = thread_count()) {
  return monte_carlo_trace(config, workers).back();
}

// ---------------------------------------------------------------------------
// Error-pattern enumeration

/// Default work cap for brute_force_T, in amplitude-update operations.
inline constexpr double kBruteForceBudget = 2e9;

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

/// <0|T_h^(M)|0>: the sum over every placement of h sigma_z errors into
/// distinct (half-step, qubit) slots of |<0| ... |0>|^2.
inline double brute_force_T(int n, int M, int h, double budget = kBruteForceBudget) {
  detail::require_qubits(n, "brute_force_T", kMaxQubits);
  if (M < 0 || h < 0) throw std::invalid_argument("brute_force_T: M and h must be >= 0");
  const int slots = 2 * M * n;
  if (h > slots) return 0.0;
  const double cost = binomial(slots, h) * (2.0 * M + 1.0) * std::ldexp(1.0, n) * n;
  if (cost > budget) {
    throw std::length_error("brute_force_T: " + std::to_string(binomial(slots, h)) +
                            " patterns exceed the enumeration budget");
  }

  // slot s -> (half-step s / n, qubit 1 + s % n)
  std::vector<int> pick(static_cast<std::size_t>(h));
  for (int j = 0; j < h; ++j) pick[j] = j;
  double total = 0.0;
  while (true) {
    StateVector psi = uniform_state(n);
    std::size_t next = 0;
    for (int half = 0; half < 2 * M; ++half) {
      while (next < pick.size() && pick[next] / n == half) {
        psi.apply_sigma_z(1 + pick[next] % n);
        ++next;
      }
      psi.apply_wr0();
    }
    total += psi.probability_of_zero();

    int j = h - 1;
    while (j >= 0 && pick[j] == slots - h + j) --j;
    if (j < 0) break;
    ++pick[j];
    for (int r = j + 1; r < h; ++r) pick[r] = pick[r - 1] + 1;
  }
  return total;
}

}  // namespace grover
