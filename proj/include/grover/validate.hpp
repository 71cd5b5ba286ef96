#pragma once

// Self-check suites run by `grover_lab validate`.  Each suite compares two
// independent routes to the same number and reports the worst deviation.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "grover/analysis.hpp"
#include "grover/exact_sim.hpp"
#include "grover/kernels.hpp"
#include "grover/perturbation.hpp"
#include "grover/rng.hpp"
#include "grover/simplex.hpp"
#include "grover/state_vector.hpp"

namespace grover {

enum class ValidateLevel { quick, full };

struct ValidateOptions {
  ValidateLevel level = ValidateLevel::quick;
  /// Closed forms under test; replaced by the fault-injection harness.
  ClosedFormTable closed_forms = reference_closed_forms();
  std::uint64_t seed = 20011112;
};

struct SuiteResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;      // largest deviation seen
  double tolerance = 0.0;  // limit the deviation was held to
  double seconds = 0.0;
  std::string detail;
};

/// Copy of the closed-form table with a named entry corrupted.  Known names:
/// "f3" scales the constant term of F_3 by 1.01.
inline ClosedFormTable inject_fault(ClosedFormTable table, const std::string& name) {
  if (name == "f3") {
    table[3].constant *= 1.01;
  } else {
    throw std::invalid_argument("unknown fault '" + name + "' (known: f3)");
  }
  return table;
}

namespace detail {

struct Tracker {
  double worst = 0.0;
  std::string where;
  void see(double deviation, const std::string& label) {
    if (!(deviation <= worst)) {
      worst = deviation;
      where = label;
    }
  }
};

inline SuiteResult run_suite(const std::string& name, double tolerance,
                             const std::function<void(Tracker&)>& body) {
  const auto start = std::chrono::steady_clock::now();
  Tracker t;
  SuiteResult r{name, false, 0.0, tolerance, 0.0, ""};
  try {
    body(t);
    r.worst = t.worst;
    r.passed = t.worst <= tolerance;
    r.detail = t.where;
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline std::string label(std::initializer_list<std::pair<const char*, double>> items) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, v] : items) {
    os << (first ? "" : " ") << k << '=' << v;
    first = false;
  }
  return os.str();
}

}  // namespace detail

inline SuiteResult suite_state_formulas() {
  return detail::run_suite("state-formulas", 1e-12, [](detail::Tracker& t) {
    for (int n = 2; n <= 8; ++n) {
      StateVector psi = uniform_state(n);
      for (int step = 0; step <= 16; ++step) {
        const auto f = grover_state(step, n);
        t.see(std::abs(psi[0] - f.a0), detail::label({{"n", n}, {"step", step}}));
        t.see(std::abs(psi[psi.dimension() - 1] - f.a1), detail::label({{"n", n}, {"step", step}}));
        psi.apply_wr0();
      }
    }
  });
}

inline SuiteResult suite_trig_sums(std::uint64_t seed) {
  return detail::run_suite("trig-sums", 1e-12, [seed](detail::Tracker& t) {
    CounterRng rng(seed, 0);
    const TrigSumKind kinds[] = {TrigSumKind::sin_odd, TrigSumKind::sin_even_next,
                                 TrigSumKind::cos_odd, TrigSumKind::cos_even_next};
    for (int trial = 0; trial < 200; ++trial) {
      const double theta = -1.4 + 2.8 * rng.uniform();
      const long long N = static_cast<long long>(rng.uniform() * 40);
      for (auto kind : kinds) {
        double direct = 0.0;
        for (long long l = 0; l <= N; ++l) {
          const double a = (kind == TrigSumKind::sin_odd || kind == TrigSumKind::cos_odd)
                               ? (2.0 * l + 1.0) * theta
                               : 2.0 * (l + 1.0) * theta;
          const bool is_sin = kind == TrigSumKind::sin_odd || kind == TrigSumKind::sin_even_next;
          direct += parity_sign(l) * (is_sin ? std::sin(a) : std::cos(a));
        }
        t.see(std::abs(direct - trig_sum(kind, N, theta)),
              detail::label({{"theta", theta}, {"N", static_cast<double>(N)}}));
      }
    }
  });
}

inline SuiteResult suite_single_error_kernels() {
  return detail::run_suite("single-error-kernels", 1e-12, [](detail::Tracker& t) {
    for (int n = 2; n <= 4; ++n) {
      for (int earlier = 0; earlier <= 7; ++earlier) {
        for (int later = 1; later <= 7; ++later) {
          for (int q = 1; q <= n; ++q) {
            StateVector psi = grover_trajectory(n, earlier);
            psi.apply_sigma_z(q);
            for (int j = 0; j < later; ++j) psi.apply_wr0();
            t.see(std::abs(psi[0].real() - g1_steps(earlier, later, n)) + std::abs(psi[0].imag()),
                  detail::label({{"n", n}, {"earlier", earlier}, {"later", later}, {"qubit", q}}));
          }
        }
      }
    }
  });
}

inline SuiteResult suite_matrix_elements() {
  return detail::run_suite("matrix-elements-vs-enumeration", 1e-12, [](detail::Tracker& t) {
    for (int n = 2; n <= 3; ++n) {
      for (int M = 1; M <= 3; ++M) {
        t.see(std::abs(t0_element(n, M) - brute_force_T(n, M, 0)), detail::label({{"h", 0}, {"n", n}, {"M", M}}));
        t.see(std::abs(t1_element(n, M) - brute_force_T(n, M, 1)), detail::label({{"h", 1}, {"n", n}, {"M", M}}));
        t.see(std::abs(t2_element(n, M) - brute_force_T(n, M, 2)), detail::label({{"h", 2}, {"n", n}, {"M", M}}));
      }
    }
  });
}

/// Exact channel against the pattern expansion sum_h (1-p)^{S-h} p^h <0|T_h|0>.
inline SuiteResult suite_channel_expansion() {
  return detail::run_suite("channel-expansion", 1e-10, [](detail::Tracker& t) {
    const int n = 2;
    const int M = 1;
    const int slots = 2 * M * n;
    for (double p : {0.1, 0.3}) {
      double expansion = 0.0;
      for (int h = 0; h <= slots; ++h) {
        expansion += std::pow(1.0 - p, slots - h) * std::pow(p, h) * brute_force_T(n, M, h);
      }
      const double exact = evolve_density({n, M, p, 1, 0}).back();
      t.see(std::abs(expansion - exact), detail::label({{"p", p}}));
    }
  });
}

inline SuiteResult suite_closed_forms_quadrature(const ClosedFormTable& table) {
  return detail::run_suite("closed-forms-vs-quadrature", 1e-6, [&table](detail::Tracker& t) {
    for (int h = 1; h <= 3; ++h) {
      for (double theta : {0.1, 0.3, 0.5, std::numbers::pi / 4.0}) {
        const auto numeric = f_numeric(h, theta);
        t.see(std::abs(f_closed(h, theta, table) - numeric.value),
              detail::label({{"h", h}, {"Theta", theta}}));
      }
    }
  });
}

inline SuiteResult suite_series_identities(const ClosedFormTable& table) {
  return detail::run_suite("series-identities", 1e-12, [&table](detail::Tracker& t) {
    for (double theta : {0.05, 0.2, 0.5, std::numbers::pi / 4.0, 1.2}) {
      const double s = std::sin(2.0 * theta);
      t.see(std::abs(f_closed(0, theta, table) - s * s), detail::label({{"F0 Theta", theta}}));
      const double expected_c1 = -f_closed(0, theta, table) + 0.5 * f_closed(1, theta, table);
      t.see(std::abs(c_coeff(1, theta, table) - expected_c1), detail::label({{"C1 Theta", theta}}));
    }
    t.see(std::abs(c_coeff(1, std::numbers::pi / 4.0, table) + 0.625), "C1(pi/4)");
  });
}

/// Closed forms against their own small-Theta expansion just above the
/// switch point, where the closed forms are evaluated directly.
inline SuiteResult suite_small_theta(const ClosedFormTable& table) {
  return detail::run_suite("small-theta-continuity", 1e-6, [&table](detail::Tracker& t) {
    const double theta = 2.0 * kSmallThetaSwitch;
    for (int h = 0; h <= kMaxClosedOrder; ++h) {
      const double direct = detail::closed_form_direct(table[static_cast<std::size_t>(h)], theta).value;
      const double series = detail::closed_form_series(h, theta).value;
      t.see(std::abs(direct - series) / std::abs(series), detail::label({{"h", h}}));
    }
  });
}

inline SuiteResult suite_critical_point() {
  return detail::run_suite("critical-point", 0.01, [](detail::Tracker& t) {
    t.see(std::abs(x_critical(0.5).value - 1.12), "x_c(1/2)");
    t.see(std::abs(tangent_coefficient().analytic - 1.6), "c");
  });
}

// ---- full level ---------------------------------------------------------

inline SuiteResult suite_closed_forms_sampling(const ClosedFormTable& table, std::uint64_t seed) {
  // Measured in units of the sampling standard error.
  return detail::run_suite("closed-forms-vs-sampling", 5.0, [&table, seed](detail::Tracker& t) {
    SimplexOptions opt;
    opt.seed = seed;
    for (int h = 4; h <= 6; ++h) {
      for (double theta : {0.1, 0.3, 0.5, std::numbers::pi / 4.0}) {
        const auto numeric = f_numeric(h, theta, opt);
        t.see(std::abs(f_closed(h, theta, table) - numeric.value) / numeric.error,
              detail::label({{"h", h}, {"Theta", theta}}));
      }
    }
  });
}

inline SuiteResult suite_monte_carlo(std::uint64_t seed) {
  return detail::run_suite("monte-carlo-vs-channel", 3.0, [seed](detail::Tracker& t) {
    for (double p : {0.001, 0.002, 0.004}) {
      SimConfig cfg{8, 12, p, 20000, seed};
      const double exact = evolve_density(cfg).back();
      const auto mc = monte_carlo(cfg);
      t.see(std::abs(mc.mean - exact) / mc.std_error, detail::label({{"p", p}}));
    }
  });
}

inline SuiteResult suite_asymptotic_rule() {
  return detail::run_suite("asymptotic-product-rule", 1.0, [](detail::Tracker& t) {
    const int n = 16;
    const double theta = boyer_theta(n).theta;
    const double bound = 5.0 * std::ldexp(1.0, -n / 2);
    for (int l0 = 0; l0 <= 4; ++l0) {
      for (int l1 = 1; l1 <= 4; ++l1) {
        StateVector psi = grover_trajectory(n, l0);
        psi.apply_sigma_z(1);
        for (int j = 0; j < l1; ++j) psi.apply_wr0();
        const long long one[] = {l0, l1};
        t.see(std::abs(psi[0].real() - asymptotic_g(one, theta)) / bound,
              detail::label({{"l0", l0}, {"l1", l1}}));
        for (int l2 = 1; l2 <= 4; ++l2) {
          StateVector chi = psi;
          chi.apply_sigma_z(2);
          for (int j = 0; j < l2; ++j) chi.apply_wr0();
          const long long two[] = {l0, l1, l2};
          t.see(std::abs(chi[0].real() - asymptotic_g(two, theta)) / (2.0 * bound),
                detail::label({{"l0", l0}, {"l1", l1}, {"l2", l2}}));
        }
      }
    }
  });
}

inline std::vector<SuiteResult> run_validation(const ValidateOptions& opt = {}) {
  std::vector<SuiteResult> out;
  out.push_back(suite_state_formulas());
  out.push_back(suite_trig_sums(opt.seed));
  out.push_back(suite_single_error_kernels());
  out.push_back(suite_matrix_elements());
  out.push_back(suite_channel_expansion());
  out.push_back(suite_closed_forms_quadrature(opt.closed_forms));
  out.push_back(suite_series_identities(opt.closed_forms));
  out.push_back(suite_small_theta(opt.closed_forms));
  out.push_back(suite_critical_point());
  if (opt.level == ValidateLevel::full) {
    out.push_back(suite_closed_forms_sampling(opt.closed_forms, opt.seed));
    out.push_back(suite_monte_carlo(opt.seed));
    out.push_back(suite_asymptotic_rule());
  }
  return out;
}

}  // namespace grover
