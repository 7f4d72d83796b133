#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "circlephase/smoothstep.hpp"
#include "oracles.hpp"

using namespace circlephase;

namespace {
const SmoothStep& S() { return SmoothStep::standard(); }
}  // namespace

TEST(Tau, FlatTails) {
  EXPECT_EQ(tau(S(), -2.0), 0.0);
  EXPECT_EQ(tau(S(), -1.0), 0.0);
  EXPECT_EQ(tau(S(), 1.0), 1.0);
  EXPECT_EQ(tau(S(), 7.0), 1.0);
}

TEST(Tau, HalfMassAtZero) { EXPECT_DOUBLE_EQ(tau(S(), 0.0), 0.5); }

TEST(Tau, MatchesSimpsonOracle) {
  EXPECT_NEAR(tau(S(), 0.5), oracle::tau(0.5), 1e-10);
  for (double x : {-0.97, -0.6, -0.31, 0.05, 0.42, 0.88, 0.995}) {
    EXPECT_NEAR(tau(S(), x), oracle::tau(x, 200000), 1e-10) << x;
  }
}

TEST(TauPrime, Examples) {
  EXPECT_EQ(tau_prime(S(), 1.5), 0.0);
  EXPECT_EQ(tau_prime(S(), -1.0), 0.0);
  const double norm = oracle::simpson(oracle::bump, -1.0, 1.0, 1000000);
  EXPECT_NEAR(tau_prime(S(), 0.0), std::exp(-1.0) / norm, 1e-12);
  EXPECT_NEAR(S().normalization(), norm, 1e-12);
}

TEST(TauProperties, Monotone) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.3, 1.3);
  for (int i = 0; i < 10000; ++i) {
    double a = u(rng);
    double b = u(rng);
    if (a > b) std::swap(a, b);
    EXPECT_LE(tau(S(), a), tau(S(), b));
  }
}

TEST(TauProperties, Symmetric) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(-1.3, 1.3);
  for (int i = 0; i < 10000; ++i) {
    const double x = u(rng);
    EXPECT_LE(std::abs(tau(S(), x) + tau(S(), -x) - 1.0), 1e-12);
  }
}

TEST(TauProperties, DerivativeConsistent) {
  const double h = 1e-6;
  for (int i = 0; i <= 2000; ++i) {
    const double x = -1.0 + i * 1e-3;
    const double fd = (tau(S(), x + h) - tau(S(), x - h)) / (2 * h);
    EXPECT_NEAR(fd, tau_prime(S(), x), 1e-6) << x;
  }
}

TEST(TauProperties, ValuesInUnitInterval) {
  for (int i = 0; i <= 4000; ++i) {
    const double x = -1.5 + i * 7.5e-4;
    const double v = tau(S(), x);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    EXPECT_GE(tau_prime(S(), x), 0.0);
  }
}
