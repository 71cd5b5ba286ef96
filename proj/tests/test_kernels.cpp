#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "grover/kernels.hpp"
#include "grover/state_vector.hpp"

using namespace grover;

namespace {

/// Amplitude on |0> and the common amplitude on x != 0 of a state vector.
struct Components {
  double a0;
  double a1;
};

Components components(const StateVector& s) {
  return {s[0].real(), s[s.dimension() - 1].real()};
}

/// (R0 W)^k |0>
StateVector r0w_power(int n, int k) {
  StateVector s(n);
  for (int j = 0; j < k; ++j) s.apply_w().apply_r0();
  return s;
}

}  // namespace

TEST(BoyerAngle, SmallestRegisterIsPiOverSix) {
  EXPECT_NEAR(boyer_theta(2).theta, std::numbers::pi / 6.0, 1e-15);
}

TEST(BoyerAngle, EightQubits) {
  // arcsin(1/16) to 30 digits, computed with an arbitrary-precision evaluator
  EXPECT_NEAR(boyer_theta(8).theta, 0.0625407617964913908, 1e-16);
  EXPECT_NEAR(boyer_theta(8).theta, std::atan2(1.0, std::sqrt(255.0)), 1e-16);
}

TEST(BoyerAngle, InvariantsAndMonotoneDecrease) {
  double prev = std::numbers::pi / 2.0;
  for (int n = 2; n <= 40; ++n) {
    const auto b = boyer_theta(n);
    EXPECT_NEAR(std::sin(b.theta), std::sqrt(std::ldexp(1.0, -n)), 1e-15);
    EXPECT_GT(b.theta, 0.0);
    EXPECT_LT(b.theta, prev);
    prev = b.theta;
  }
  EXPECT_LT(boyer_theta(60).theta, 1e-8);
}

TEST(BoyerAngle, RejectsSingleQubit) {
  EXPECT_THROW(boyer_theta(1), std::invalid_argument);
  EXPECT_THROW(boyer_theta(0), std::invalid_argument);
}

TEST(StateFormulas, EvenZeroIsUniformSuperposition) {
  for (int n = 2; n <= 10; ++n) {
    const auto b = boyer_theta(n);
    const auto s = state_after_even(0, n);
    EXPECT_NEAR(s.a0, std::sin(b.theta), 1e-15);
    EXPECT_NEAR(s.a1, std::cos(b.theta) / std::sqrt(std::ldexp(1.0, n) - 1.0), 1e-15);
  }
}

TEST(StateFormulas, TwoQubitsFindMarkedItemInOneIteration) {
  const auto s = state_after_even(1, 2);
  EXPECT_NEAR(s.a0, -1.0, 1e-15);
  EXPECT_NEAR(s.a1, 0.0, 1e-15);
  const auto v = components(grover_trajectory(2, 2));
  EXPECT_NEAR(v.a0, -1.0, 1e-15);
}

TEST(StateFormulas, OddZeroAtTwoQubits) {
  const auto s = state_after_odd(0, 2);
  EXPECT_NEAR(s.a0, 0.5, 1e-15);
  EXPECT_NEAR(s.a1, -0.5, 1e-15);
  const auto v = components(grover_trajectory(2, 1));
  EXPECT_NEAR(v.a0, 0.5, 1e-15);
  EXPECT_NEAR(v.a1, -0.5, 1e-15);
}

TEST(StateFormulas, EightQubitSpotChecks) {
  auto even = components(grover_trajectory(8, 12));
  EXPECT_NEAR(state_after_even(6, 8).a0, even.a0, 1e-12);
  EXPECT_NEAR(state_after_even(6, 8).a1, even.a1, 1e-12);
  auto odd = components(grover_trajectory(8, 11));
  EXPECT_NEAR(state_after_odd(5, 8).a0, odd.a0, 1e-12);
  EXPECT_NEAR(state_after_odd(5, 8).a1, odd.a1, 1e-12);
}

TEST(StateFormulas, AgreeWithStateVectorEverywhere) {
  for (int n = 2; n <= 10; ++n) {
    StateVector psi = uniform_state(n);
    for (int step = 0; step <= 41; ++step) {
      const auto f = step % 2 == 0 ? state_after_even(step / 2, n) : state_after_odd(step / 2, n);
      // every x != 0 carries the same amplitude
      for (std::size_t x = 0; x < psi.dimension(); ++x) {
        const double want = x == 0 ? f.a0 : f.a1;
        ASSERT_NEAR(psi[x].real(), want, 1e-12) << "n=" << n << " step=" << step << " x=" << x;
        ASSERT_NEAR(psi[x].imag(), 0.0, 1e-15);
      }
      EXPECT_NEAR(f.norm_squared(), 1.0, 1e-12);
      psi.apply_wr0();
    }
  }
}

TEST(StateFormulas, OneMoreHalfStepTurnsEvenIntoOdd) {
  for (int n : {3, 5, 8}) {
    for (int k = 0; k < 6; ++k) {
      const auto e = state_after_even(k, n);
      const double D = std::ldexp(1.0, n);
      // WR0 on a0|0> + a1 sum|x>: flip a0, then Hadamard on the two-mode subspace
      const double b0 = -e.a0;
      const double s = b0 + (D - 1.0) * e.a1;
      const double a0 = s / std::sqrt(D);
      const double a1 = (b0 - e.a1) / std::sqrt(D);
      const auto o = state_after_odd(k, n);
      EXPECT_NEAR(o.a0, a0, 1e-13);
      EXPECT_NEAR(o.a1, a1, 1e-13);
    }
  }
}

TEST(StateFormulas, R0WPowers) {
  const auto id = state_r0w_even(0, 5);
  EXPECT_DOUBLE_EQ(id.a0, 1.0);
  EXPECT_DOUBLE_EQ(id.a1, 0.0);

  const auto odd2 = state_r0w_odd(0, 2);
  EXPECT_NEAR(odd2.a0, -0.5, 1e-15);
  EXPECT_NEAR(odd2.a1, 0.5, 1e-15);

  for (int n : {2, 3, 8}) {
    for (int k = 0; k <= 5; ++k) {
      const auto ve = components(r0w_power(n, 2 * k));
      const auto vo = components(r0w_power(n, 2 * k + 1));
      EXPECT_NEAR(state_r0w_even(k, n).a0, ve.a0, 1e-12);
      EXPECT_NEAR(state_r0w_even(k, n).a1, ve.a1, 1e-12);
      EXPECT_NEAR(state_r0w_odd(k, n).a0, vo.a0, 1e-12);
      EXPECT_NEAR(state_r0w_odd(k, n).a1, vo.a1, 1e-12);
    }
  }
}

TEST(StateFormulas, T0FromStateFormula) {
  for (int n = 2; n <= 10; ++n) {
    for (int M = 0; M <= 20; ++M) {
      const double a0 = state_after_even(M, n).a0;
      const double want = std::sin((2.0 * M + 1.0) * boyer_theta(n).theta);
      EXPECT_NEAR(a0 * a0, want * want, 1e-14);
    }
  }
}

TEST(StateFormulas, RejectNegativeStep) {
  EXPECT_THROW(state_after_even(-1, 3), std::invalid_argument);
  EXPECT_THROW(state_after_odd(-1, 3), std::invalid_argument);
}

// ---------------------------------------------------------------------------

double direct_trig_sum(TrigSumKind kind, long long N, double theta) {
  double acc = 0.0;
  for (long long l = 0; l <= N; ++l) {
    const double sign = (l % 2 == 0) ? 1.0 : -1.0;
    switch (kind) {
      case TrigSumKind::sin_odd: acc += sign * std::sin((2.0 * l + 1.0) * theta); break;
      case TrigSumKind::sin_even_next: acc += sign * std::sin(2.0 * (l + 1.0) * theta); break;
      case TrigSumKind::cos_odd: acc += sign * std::cos((2.0 * l + 1.0) * theta); break;
      case TrigSumKind::cos_even_next: acc += sign * std::cos(2.0 * (l + 1.0) * theta); break;
    }
  }
  return acc;
}

TEST(TrigSums, SingleTerm) {
  EXPECT_NEAR(trig_sum(TrigSumKind::sin_odd, 0, 0.7), std::sin(0.7), 1e-15);
  EXPECT_NEAR(trig_sum(TrigSumKind::cos_odd, 0, 0.7), std::cos(0.7), 1e-15);
  EXPECT_NEAR(trig_sum(TrigSumKind::cos_odd, 0, 0.7), (1.0 + std::cos(1.4)) / (2.0 * std::cos(0.7)), 1e-15);
}

TEST(TrigSums, SpotValue) {
  EXPECT_NEAR(trig_sum(TrigSumKind::sin_even_next, 7, 0.3),
              direct_trig_sum(TrigSumKind::sin_even_next, 7, 0.3), 1e-13);
}

TEST(TrigSums, RandomPairsAgreeWithDirectSummation) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> angle(-1.4, 1.4);
  std::uniform_int_distribution<int> upper(0, 60);
  const TrigSumKind kinds[] = {TrigSumKind::sin_odd, TrigSumKind::sin_even_next,
                               TrigSumKind::cos_odd, TrigSumKind::cos_even_next};
  for (int trial = 0; trial < 1000; ++trial) {
    const double theta = angle(gen);
    const int N = upper(gen);
    for (auto kind : kinds) {
      ASSERT_NEAR(trig_sum(kind, N, theta), direct_trig_sum(kind, N, theta), 1e-12)
          << "theta=" << theta << " N=" << N;
    }
  }
}

TEST(TrigSums, RejectPole) {
  EXPECT_THROW(trig_sum(TrigSumKind::sin_odd, 3, std::numbers::pi / 2.0), std::domain_error);
  EXPECT_THROW(trig_sum(TrigSumKind::sin_odd, -1, 0.3), std::invalid_argument);
}

// ---------------------------------------------------------------------------

double g1_by_simulation(int n, int earlier, int later, int qubit) {
  StateVector psi = grover_trajectory(n, earlier);
  psi.apply_sigma_z(qubit);
  for (int j = 0; j < later; ++j) psi.apply_wr0();
  return psi[0].real();
}

TEST(G1Kernel, TwoQubitSpotValue) {
  const double t = std::numbers::pi / 6.0;
  const double want = -(std::cos(2 * t) * std::sin(t) - std::sin(2 * t) * std::cos(t) / 3.0);
  EXPECT_NEAR(want, 0.0, 1e-15);
  EXPECT_NEAR(g1_kernel(0, 1, Parity::even, Parity::even, 2), 0.0, 1e-15);
  EXPECT_NEAR(g1_by_simulation(2, 0, 2, 1), 0.0, 1e-15);
}

TEST(G1Kernel, AllParitiesAgainstSimulation) {
  const int n = 3;
  for (int k = 0; k <= 3; ++k) {
    for (int l = 0; l <= 3; ++l) {
      for (int pk = 0; pk < 2; ++pk) {
        for (int pl = 0; pl < 2; ++pl) {
          if (pl == 0 && l == 0) continue;
          const int earlier = 2 * k + pk;
          const int later = 2 * l + pl;
          const double g = g1_kernel(k, l, pk ? Parity::odd : Parity::even,
                                     pl ? Parity::odd : Parity::even, n);
          for (int q = 1; q <= n; ++q) {
            EXPECT_NEAR(g, g1_by_simulation(n, earlier, later, q), 1e-12)
                << "k'=" << earlier << " l'=" << later << " qubit=" << q;
          }
        }
      }
    }
  }
}

TEST(G1Kernel, DiffersFromErrorFreeOverlap) {
  // with sigma_z replaced by identity the overlap is <0|(WR0)^{k+l}W|0>
  int differing = 0;
  for (int earlier = 0; earlier <= 6; ++earlier) {
    for (int later = 1; later <= 6; ++later) {
      const double free = grover_state(earlier + later, 5).a0;
      if (std::abs(g1_steps(earlier, later, 5) - free) > 1e-6) ++differing;
    }
  }
  EXPECT_GT(differing, 30);
}

TEST(G1Kernel, RejectsOutOfRange) {
  EXPECT_THROW(g1_kernel(0, 0, Parity::even, Parity::even, 3), std::invalid_argument);
  EXPECT_THROW(g1_kernel(-1, 1, Parity::even, Parity::odd, 3), std::invalid_argument);
  EXPECT_NO_THROW(g1_kernel(0, 0, Parity::even, Parity::odd, 3));
}

// ---------------------------------------------------------------------------

double eta_by_simulation(EtaKind kind, int n, int steps, int qi, int qj) {
  StateVector v(n);
  if (kind == EtaKind::eta) {
    v = construct_eta(n, qj);
  } else {
    const int idx[] = {qj};
    const StateVector bar = construct_overline(n, idx);
    for (std::size_t x = 0; x < v.dimension(); ++x) v[x] = (v[x] - bar[x]) / std::numbers::sqrt2;
  }
  v.apply_sigma_z(qi);
  for (int j = 0; j < steps; ++j) v.apply_wr0();
  return v[0].real();
}

TEST(EtaOverlap, ZeroAtStepZero) {
  EXPECT_NEAR(eta_overlap(EtaKind::eta, 0, Parity::even, true, 5), 0.0, 1e-16);
}

TEST(EtaOverlap, DistinctQubitsVanish) {
  for (int step = 0; step < 5; ++step) {
    EXPECT_EQ(eta_overlap(EtaKind::eta, step, Parity::even, false, 4), 0.0);
    EXPECT_EQ(eta_overlap(EtaKind::eta, step, Parity::odd, false, 4), 0.0);
  }
}

TEST(EtaOverlap, ThreeQubitSpotValue) {
  const auto b = boyer_theta(3);
  const double want = -(b.sin() + b.cos() / std::sqrt(7.0)) / std::numbers::sqrt2;
  EXPECT_NEAR(eta_overlap(EtaKind::zero_minus_overline, 0, Parity::odd, false, 3), want, 1e-14);
  EXPECT_NEAR(eta_by_simulation(EtaKind::zero_minus_overline, 3, 1, 1, 2), want, 1e-12);
}

TEST(EtaOverlap, AllCasesAgainstSimulation) {
  for (int n : {3, 4}) {
    for (int k = 0; k <= 4; ++k) {
      for (int parity = 0; parity < 2; ++parity) {
        const int steps = 2 * k + parity;
        const Parity p = parity ? Parity::odd : Parity::even;
        for (int qi = 1; qi <= n; ++qi) {
          for (int qj = 1; qj <= n; ++qj) {
            for (EtaKind kind : {EtaKind::eta, EtaKind::zero_minus_overline}) {
              EXPECT_NEAR(eta_overlap(kind, k, p, qi == qj, n),
                          eta_by_simulation(kind, n, steps, qi, qj), 1e-12)
                  << "n=" << n << " steps=" << steps << " i=" << qi << " j=" << qj;
            }
          }
        }
      }
    }
  }
}
