#pragma once

// Independent evaluation of F_h(Theta) as a simplex integral.
//
//   F_h(T) = T^{-h} \int_{phi_1 + ... + phi_h <= T} sum_alpha |T_alpha|^2
//
// with phi_{h+1} = T - sum phi_s.  For each binary string alpha the term is
// the squared product of {sin,cos}_{alpha_1}(2 phi_1), {cos,sin}_{alpha_s}(2 phi_s)
// for s = 2..h and {cos,sin}_{xor alpha}(2 phi_{h+1}).

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/random/sobol.hpp>

#include "grover/parallel.hpp"
#include "grover/rng.hpp"

namespace grover {

inline constexpr int kMaxSimplexOrder = 12;

enum class SimplexScheme { automatic, gauss_legendre, quasi_monte_carlo };

struct SimplexOptions {
  SimplexScheme scheme = SimplexScheme::automatic;
  /// Sampling budget: total integrand evaluations across all replicas.
  std::uint64_t budget = std::uint64_t{1} << 20;
  /// Independent random shifts; the spread of replica means gives the error.
  unsigned replicas = 16;
  std::uint64_t seed = 20011112;
  /// Largest acceptable error estimate for the quadrature rule.
  double tolerance = 1e-6;
  /// Largest acceptable standard error for the sampling scheme.
  double sampling_tolerance = 1e-5;
  unsigned workers = thread_count();
};

struct SimplexResult {
  double value = 0.0;
  double error = 0.0;  // quadrature: |rule32 - rule20|; sampling: standard error
  bool converged = false;
  SimplexScheme scheme = SimplexScheme::automatic;
  std::uint64_t evaluations = 0;
};

namespace detail {

/// sum_alpha |T_alpha|^2 at the point phi[0..h-1], enumerating all 2^h strings.
inline double simplex_integrand(int h, const double* phi, double theta) {
  std::array<double, kMaxSimplexOrder + 1> s2{};
  std::array<double, kMaxSimplexOrder + 1> c2{};
  double rest = theta;
  for (int s = 0; s <= h; ++s) {
    const double angle = (s < h) ? phi[s] : rest;
    if (s < h) rest -= phi[s];
    const double sn = std::sin(2.0 * angle);
    s2[static_cast<std::size_t>(s)] = sn * sn;
    c2[static_cast<std::size_t>(s)] = 1.0 - sn * sn;
  }
  double total = 0.0;
  const std::uint32_t patterns = std::uint32_t{1} << h;
  for (std::uint32_t alpha = 0; alpha < patterns; ++alpha) {
    // digit s-1 of alpha is alpha_s
    double term = (alpha & 1u) ? c2[0] : s2[0];
    unsigned parity = alpha & 1u;
    for (int s = 1; s < h; ++s) {
      const unsigned bit = (alpha >> s) & 1u;
      parity ^= bit;
      term *= bit ? s2[static_cast<std::size_t>(s)] : c2[static_cast<std::size_t>(s)];
    }
    term *= parity ? s2[static_cast<std::size_t>(h)] : c2[static_cast<std::size_t>(h)];
    total += term;
  }
  return total;
}

/// Maps u in [0,1]^h onto the ordered simplex; returns the Jacobian.
inline double simplex_map(int h, const double* u, double theta, double* phi) {
  double remaining = theta;
  double jacobian = 1.0;
  for (int s = 0; s < h; ++s) {
    jacobian *= remaining;
    phi[s] = remaining * u[s];
    remaining -= phi[s];
  }
  return jacobian;
}

/// Gauss-Legendre nodes and weights on [0, 1].
template <std::size_t N>
void unit_gauss_rule(std::vector<double>& nodes, std::vector<double>& weights) {
  using rule = boost::math::quadrature::gauss<double, N>;
  const auto& a = rule::abscissa();
  const auto& w = rule::weights();
  nodes.clear();
  weights.clear();
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j] == 0.0) {
      nodes.push_back(0.5);
      weights.push_back(0.5 * w[j]);
      continue;
    }
    nodes.push_back(0.5 * (1.0 - a[j]));
    weights.push_back(0.5 * w[j]);
    nodes.push_back(0.5 * (1.0 + a[j]));
    weights.push_back(0.5 * w[j]);
  }
}

inline double tensor_gauss(int h, double theta, const std::vector<double>& nodes,
                           const std::vector<double>& weights, std::uint64_t& evaluations) {
  const std::size_t m = nodes.size();
  std::vector<std::size_t> index(static_cast<std::size_t>(h), 0);
  std::vector<double> u(static_cast<std::size_t>(h));
  std::vector<double> phi(static_cast<std::size_t>(h));
  double total = 0.0;
  while (true) {
    double w = 1.0;
    for (int s = 0; s < h; ++s) {
      u[static_cast<std::size_t>(s)] = nodes[index[static_cast<std::size_t>(s)]];
      w *= weights[index[static_cast<std::size_t>(s)]];
    }
    const double jac = simplex_map(h, u.data(), theta, phi.data());
    total += w * jac * simplex_integrand(h, phi.data(), theta);
    ++evaluations;
    int s = h - 1;
    while (s >= 0 && ++index[static_cast<std::size_t>(s)] == m) {
      index[static_cast<std::size_t>(s)] = 0;
      --s;
    }
    if (s < 0) break;
  }
  return total;
}

inline SimplexResult simplex_gauss(int h, double theta, const SimplexOptions& opt) {
  std::vector<double> nodes;
  std::vector<double> weights;
  SimplexResult r{};
  r.scheme = SimplexScheme::gauss_legendre;
  unit_gauss_rule<32>(nodes, weights);
  const double fine = tensor_gauss(h, theta, nodes, weights, r.evaluations);
  unit_gauss_rule<20>(nodes, weights);
  const double coarse = tensor_gauss(h, theta, nodes, weights, r.evaluations);
  const double scale = std::pow(theta, h);
  r.value = fine / scale;
  r.error = std::abs(fine - coarse) / scale;
  r.converged = r.error <= opt.tolerance;
  return r;
}

/// Randomly shifted Sobol points folded by the tent map, one shift per replica.
inline SimplexResult simplex_qmc(int h, double theta, const SimplexOptions& opt) {
  if (opt.replicas < 2) throw std::invalid_argument("f_numeric: need at least 2 replicas");
  const std::uint64_t per_replica = opt.budget / opt.replicas;
  if (per_replica < 1) throw std::invalid_argument("f_numeric: budget smaller than replica count");
  std::vector<double> means(opt.replicas, 0.0);

  parallel_for(
      opt.replicas,
      [&](std::size_t begin, std::size_t end) {
        std::vector<double> shift(static_cast<std::size_t>(h));
        std::vector<double> u(static_cast<std::size_t>(h));
        std::vector<double> phi(static_cast<std::size_t>(h));
        for (std::size_t r = begin; r < end; ++r) {
          CounterRng rng(opt.seed, r);
          for (auto& v : shift) v = rng.uniform();
          boost::random::sobol sequence(static_cast<std::size_t>(h));
          const double unit = 1.0 / (static_cast<double>(sequence.max()) + 1.0);
          double acc = 0.0;
          for (std::uint64_t i = 0; i < per_replica; ++i) {
            for (int s = 0; s < h; ++s) {
              double v = static_cast<double>(sequence()) * unit + shift[static_cast<std::size_t>(s)];
              v -= std::floor(v);
              u[static_cast<std::size_t>(s)] = 1.0 - std::abs(2.0 * v - 1.0);
            }
            const double jac = simplex_map(h, u.data(), theta, phi.data());
            acc += jac * simplex_integrand(h, phi.data(), theta);
          }
          means[r] = acc / static_cast<double>(per_replica);
        }
      },
      opt.workers);

  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= opt.replicas;
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= (opt.replicas - 1.0);

  const double scale = std::pow(theta, h);
  SimplexResult r{};
  r.scheme = SimplexScheme::quasi_monte_carlo;
  r.evaluations = per_replica * opt.replicas;
  r.value = mean / scale;
  r.error = std::sqrt(var / opt.replicas) / scale;
  r.converged = r.error <= opt.sampling_tolerance;
  return r;
}

}  // namespace detail

/// F_h(Theta) by direct integration of the general rule.  Tensor Gauss-Legendre
/// for h <= 3, randomized quasi-Monte Carlo beyond.
inline SimplexResult f_numeric(int h, double theta, const SimplexOptions& options = {}) {
  if (h < 1 || h > kMaxSimplexOrder) {
    throw std::invalid_argument("f_numeric: h must be in [1, " + std::to_string(kMaxSimplexOrder) +
                                "], got " + std::to_string(h));
  }
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw std::invalid_argument("f_numeric: Theta must be finite and > 0");
  }
  SimplexScheme scheme = options.scheme;
  if (scheme == SimplexScheme::automatic) {
    scheme = (h <= 3) ? SimplexScheme::gauss_legendre : SimplexScheme::quasi_monte_carlo;
  }
  return scheme == SimplexScheme::gauss_legendre ? detail::simplex_gauss(h, theta, options)
                                                 : detail::simplex_qmc(h, theta, options);
}

}  // namespace grover
