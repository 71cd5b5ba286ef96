#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "grover/exact_sim.hpp"
#include "grover/perturbation.hpp"
#include "grover/simplex.hpp"
#include "grover/state_vector.hpp"

using namespace grover;

constexpr double kQuarterPi = std::numbers::pi / 4.0;

TEST(T0Element, Values) {
  for (int n = 2; n <= 10; ++n) EXPECT_NEAR(t0_element(n, 0), std::ldexp(1.0, -n), 1e-15);
  EXPECT_NEAR(t0_element(2, 1), 1.0, 1e-15);
  EXPECT_NEAR(t0_element(8, 12), evolve_density({8, 12, 0.0, 1, 0}).back(), 1e-12);
}

TEST(T1Element, EmptyAndVanishingCases) {
  EXPECT_EQ(t1_element(5, 0), 0.0);
  EXPECT_NEAR(t1_element(2, 1), 0.0, 1e-15);
  EXPECT_NEAR(t1_element(3, 2), brute_force_T(3, 2, 1), 1e-12);
}

TEST(MatrixElements, EqualEnumeration) {
  for (int n = 2; n <= 3; ++n) {
    for (int M = 1; M <= 3; ++M) {
      EXPECT_NEAR(t1_element(n, M), brute_force_T(n, M, 1), 1e-12) << "n=" << n << " M=" << M;
      EXPECT_NEAR(t2_element(n, M), brute_force_T(n, M, 2), 1e-12) << "n=" << n << " M=" << M;
    }
  }
}

TEST(MatrixElements, FourQubitsToo) {
  EXPECT_NEAR(t1_element(4, 2), brute_force_T(4, 2, 1), 1e-12);
  EXPECT_NEAR(t2_element(4, 2), brute_force_T(4, 2, 2), 1e-12);
}

TEST(MatrixElements, RejectNegativeM) {
  EXPECT_THROW(t0_element(3, -1), std::invalid_argument);
  EXPECT_THROW(t1_element(3, -1), std::invalid_argument);
  EXPECT_THROW(t2_element(3, -1), std::invalid_argument);
}

TEST(MatrixElements, KernelSymmetryOfSingleErrors) {
  // |T_even^(k)|^2 = |T_odd^(M-k-1)|^2
  const auto b = boyer_theta(6);
  for (int M = 1; M <= 8; ++M) {
    for (int k = 0; k < M; ++k) {
      const double e = detail::t1_even(b, M, k);
      const double o = detail::t1_odd(b, M, M - k - 1);
      EXPECT_NEAR(e * e, o * o, 1e-13);
    }
  }
}

/// M with M theta closest to Theta.
int matched_iterations(int n, double Theta) {
  return static_cast<int>(std::lround(Theta / boyer_theta(n).theta));
}

TEST(MatrixElements, SingleErrorApproachesLargeNLimit) {
  const double Theta = 0.5;
  double prev = 1e9;
  for (int n : {6, 8, 10, 12}) {
    const int M = matched_iterations(n, Theta);
    const double Th = M * boyer_theta(n).theta;
    const double d = std::abs(t1_element(n, M) / (static_cast<double>(M) * n) - f_closed(1, Th));
    EXPECT_LT(d, prev) << "n=" << n;
    prev = d;
  }
}

TEST(MatrixElements, TwoErrorApproachesLargeNLimit) {
  // The gap changes sign near n = 10, peaks near n = 16, then decays like 1/n.
  const double Theta = 0.5;
  double prev = 1e9;
  for (int n : {6, 8, 10, 12, 16, 20, 24}) {
    const int M = matched_iterations(n, Theta);
    const double Th = M * boyer_theta(n).theta;
    const double scale = static_cast<double>(M) * n;
    const double d = std::abs(t2_element(n, M) / (scale * scale) - f_closed(2, Th));
    EXPECT_LT(d, 0.15) << "n=" << n;
    if (n >= 20) {
      EXPECT_LT(d, prev) << "n=" << n;
      EXPECT_LT(n * d, 0.2) << "n=" << n;
    }
    prev = d;
  }
}

// ---------------------------------------------------------------------------

TEST(FClosed, SpotValuesAtQuarterPi) {
  EXPECT_NEAR(f_closed(0, kQuarterPi), 1.0, 1e-15);
  EXPECT_NEAR(f_closed(1, kQuarterPi), 0.75, 1e-15);
  EXPECT_NEAR(f_closed(2, kQuarterPi), 0.3125, 1e-15);
}

TEST(FClosed, ZeroIsSinSquared) {
  for (double t = 0.0; t < 1.6; t += 0.01) {
    EXPECT_NEAR(f_closed(0, t), std::pow(std::sin(2 * t), 2), 1e-14);
  }
}

TEST(FClosed, SmallThetaCoefficients) {
  const double want[] = {4.0, 8.0 / 3.0, 1.0, 4.0 / 15.0, 1.0 / 18.0, 1.0 / 105.0, 1.0 / 720.0};
  for (int h = 0; h <= 6; ++h) {
    EXPECT_NEAR(small_theta_coefficient(h), want[h], 1e-15 * want[h]);
    // least-squares fit of F_h = a T^2 + b T^4 on [1e-3, 1e-2]
    double s44 = 0, s46 = 0, s66 = 0, s4f = 0, s6f = 0;
    for (int j = 0; j <= 100; ++j) {
      const double t = 1e-3 + j * 9e-5;
      const double f = f_closed(h, t);
      const double t2 = t * t;
      const double t4 = t2 * t2;
      s44 += t4;
      s46 += t4 * t2;
      s66 += t4 * t4;
      s4f += t2 * f;
      s6f += t4 * f;
    }
    const double a = (s4f * s66 - s6f * s46) / (s44 * s66 - s46 * s46);
    EXPECT_LT(std::abs(a - want[h]) / want[h], 1e-3) << "h=" << h;
  }
}

TEST(FClosed, ContinuousAcrossSeriesSwitch) {
  for (int h = 0; h <= 6; ++h) {
    const double below = f_closed(h, kSmallThetaSwitch * (1 - 1e-9));
    const double above = f_closed(h, kSmallThetaSwitch * (1 + 1e-9));
    // the direct form loses ~6 digits to cancellation at the switch for h = 6
    EXPECT_NEAR(below / above, 1.0, 2e-6) << "h=" << h;
    const double direct = detail::closed_form_direct(reference_closed_forms()[h], 0.05).value;
    const double series = detail::closed_form_series(h, 0.05).value;
    EXPECT_NEAR(direct / series, 1.0, 1e-9) << "h=" << h;
  }
}

TEST(FClosed, DerivativeMatchesFiniteDifference) {
  for (int h = 0; h <= 6; ++h) {
    for (double t : {0.004, 0.2, 0.7, 1.3}) {
      const double eps = 1e-6 * std::max(t, 0.01);
      const double fd = (f_closed(h, t + eps) - f_closed(h, t - eps)) / (2 * eps);
      const double an = f_closed_with_slope(h, t).slope;
      EXPECT_NEAR(an, fd, 1e-6 * std::max(1.0, std::abs(fd)) + 1e-9) << "h=" << h << " t=" << t;
    }
  }
}

TEST(FClosed, BoundedOnFirstQuadrant) {
  for (int h = 0; h <= 6; ++h) {
    for (int j = 0; j <= 400; ++j) {
      const double t = std::numbers::pi / 2.0 * j / 400.0;
      const double f = f_closed(h, t);
      EXPECT_GE(f, -1e-15);
      EXPECT_LE(f, 1.0 + 1e-15);
    }
  }
}

TEST(FClosed, ApproximatelySymmetricAboutQuarterPi) {
  // measured worst asymmetry for 0 <= d <= 0.1
  const double bound[] = {1e-15, 0.064, 0.048, 0.019, 0.005, 0.001, 0.0003};
  for (int h = 0; h <= 6; ++h) {
    for (double d = 0.0; d <= 0.1 + 1e-12; d += 0.01) {
      EXPECT_NEAR(f_closed(h, kQuarterPi + d), f_closed(h, kQuarterPi - d), bound[h]) << "h=" << h;
    }
  }
}

TEST(FClosed, Errors) {
  EXPECT_THROW(f_closed(7, 0.3), std::invalid_argument);
  EXPECT_THROW(f_closed(-1, 0.3), std::invalid_argument);
  EXPECT_THROW(f_closed(2, -0.1), std::invalid_argument);
  EXPECT_EQ(f_closed(3, 0.0), 0.0);
}

// ---------------------------------------------------------------------------

TEST(Coefficients, LowOrders) {
  for (double t : {0.1, 0.4, kQuarterPi, 1.1}) {
    EXPECT_DOUBLE_EQ(c_coeff(0, t), f_closed(0, t));
    EXPECT_NEAR(c_coeff(1, t), -f_closed(0, t) + 0.5 * f_closed(1, t), 1e-15);
  }
  EXPECT_NEAR(c_coeff(1, kQuarterPi), -0.625, 1e-15);
}

TEST(Coefficients, SixthOrderBound) {
  double lo = 1.0;
  double hi = -1.0;
  for (int j = 0; j < 1000; ++j) {
    const double t = kQuarterPi * j / 999.0;
    const double v = c_coeff(6, t) / 720.0;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  EXPECT_GE(lo, -1e-15);
  EXPECT_LE(hi, 1.62e-4);
  EXPECT_GT(hi, 1.6e-4);
}

TEST(Coefficients, TableMatchesPointwise) {
  const auto table = series_table(0.6, 6);
  ASSERT_EQ(table.F.size(), 7u);
  ASSERT_EQ(table.C.size(), 7u);
  for (int h = 0; h <= 6; ++h) {
    EXPECT_DOUBLE_EQ(table.F[h], f_closed(h, 0.6));
    EXPECT_NEAR(table.C[h], c_coeff(h, 0.6), 1e-15);
  }
}

TEST(ProbSeries, ZeroErrorsIsIdeal) {
  for (double t : {0.1, 0.5, kQuarterPi}) EXPECT_DOUBLE_EQ(prob_series(t, 0.0), f_closed(0, t));
}

TEST(ProbSeries, TangentAtQuarterPi) {
  const double x = 1e-5;
  EXPECT_NEAR((prob_series(kQuarterPi, x) - 1.0) / x, -0.625, 1e-4);
}

TEST(ProbSeries, ReliabilityFlagAndOrderRules) {
  EXPECT_TRUE(prob_series_with_slope(kQuarterPi, 1.35).reliable);
  EXPECT_FALSE(prob_series_with_slope(kQuarterPi, 1.4).reliable);
  EXPECT_THROW(prob_series(kQuarterPi, 0.5, 4), std::invalid_argument);
  EXPECT_NO_THROW(prob_series(kQuarterPi, 0.5, 4, true));
  EXPECT_THROW(prob_series(kQuarterPi, -0.1), std::invalid_argument);
  EXPECT_THROW(prob_series(kQuarterPi, 0.5, 7), std::invalid_argument);
}

TEST(ProbSeries, SixthOrderTermIsSmallInReliableRegion) {
  for (int j = 0; j <= 200; ++j) {
    const double t = kQuarterPi * j / 200.0;
    EXPECT_LE(c_coeff(6, t) / 720.0 * std::pow(1.35, 6), 1e-3);
  }
}

TEST(ProbSeries, PartialDerivatives) {
  for (double t : {0.3, 0.7, 1.0}) {
    for (double x : {0.2, 0.9}) {
      const auto v = prob_series_with_slope(t, x);
      const double e = 1e-6;
      EXPECT_NEAR(v.d_theta, (prob_series(t + e, x) - prob_series(t - e, x)) / (2 * e), 1e-7);
      EXPECT_NEAR(v.d_x, (prob_series(t, x + e) - prob_series(t, x - e)) / (2 * e), 1e-7);
    }
  }
}

TEST(ProbSeries, TracksExactChannelAtEightQubits) {
  // at n = 8, M = 12 (Theta ~ pi/4) the series stays close to the exact channel
  for (int j = 1; j <= 11; ++j) {
    const double p = 5e-4 * j;
    const double x = 2.0 * 12 * 8 * p;
    if (x > 1.06) break;
    EXPECT_NEAR(prob_series(kQuarterPi, x), evolve_density({8, 12, p, 1, 0}).back(), 0.02) << "p=" << p;
  }
}

// ---------------------------------------------------------------------------

TEST(AsymptoticG, SingleErrorSpotValue) {
  const long long l[] = {0, 2};
  EXPECT_NEAR(asymptotic_g(l, 0.3), -std::sin(0.3) * std::cos(0.6), 1e-15);
}

TEST(AsymptoticG, TwoErrorSpotValue) {
  const long long l[] = {0, 2, 2};
  const double t = 0.3;
  EXPECT_NEAR(asymptotic_g(l, t), std::sin(t) * std::cos(2 * t) * std::cos(2 * t), 1e-15);
}

TEST(AsymptoticG, AllEvenStructure) {
  const long long l[] = {4, 2, 6};
  const double t = 0.21;
  const double want = std::pow(-1.0, 2 + 1 + 3) * std::sin(5 * t) * std::cos(2 * t) * std::cos(6 * t);
  EXPECT_NEAR(asymptotic_g(l, t), want, 1e-15);
}

TEST(AsymptoticG, AgreesWithSingleErrorKernelAtLargeN) {
  const int n = 20;
  const double t = boyer_theta(n).theta;
  for (long long e = 0; e <= 5; ++e) {
    for (long long l = 1; l <= 5; ++l) {
      const long long ls[] = {e, l};
      EXPECT_NEAR(asymptotic_g(ls, t), g1_steps(e, l, n), 4.0 * std::ldexp(1.0, -n / 2));
    }
  }
}

TEST(AsymptoticG, AgreesWithStateVectorAtSixteenQubits) {
  const int n = 16;
  const double t = boyer_theta(n).theta;
  const double bound = 5.0 * std::ldexp(1.0, -n / 2);
  for (int l0 = 0; l0 <= 4; ++l0) {
    for (int l1 = 1; l1 <= 4; ++l1) {
      StateVector psi = grover_trajectory(n, l0);
      psi.apply_sigma_z(3);
      for (int j = 0; j < l1; ++j) psi.apply_wr0();
      const long long one[] = {l0, l1};
      EXPECT_NEAR(psi[0].real(), asymptotic_g(one, t), bound);
      for (int l2 = 1; l2 <= 4; ++l2) {
        StateVector chi = psi;
        chi.apply_sigma_z(9);
        for (int j = 0; j < l2; ++j) chi.apply_wr0();
        const long long two[] = {l0, l1, l2};
        EXPECT_NEAR(chi[0].real(), asymptotic_g(two, t), 2.0 * bound) << l0 << l1 << l2;
      }
    }
  }
}

TEST(AsymptoticG, Errors) {
  EXPECT_THROW(asymptotic_g(std::span<const long long>{}, 0.3), std::invalid_argument);
  const long long only[] = {3};
  EXPECT_THROW(asymptotic_g(only, 0.3), std::invalid_argument);
  const long long zero_gap[] = {1, 0};
  EXPECT_THROW(asymptotic_g(zero_gap, 0.3), std::invalid_argument);
}
