#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "circlephase/construct.hpp"
#include "circlephase/errors.hpp"
#include "circlephase/zerofind.hpp"
#include "oracles.hpp"

using namespace circlephase;
using std::numbers::pi;

namespace {

std::vector<double> grid(int n) {
  std::vector<double> s(n);
  for (int i = 0; i < n; ++i) s[i] = (i + 0.5) / n;
  return s;
}

SpherePoint positive(SpherePoint x) { return is_positive(x) ? x : -x; }

}  // namespace

TEST(Alpha, StandardBase) {
  const EquivariantMap map(3);
  EXPECT_EQ(alpha(map, SpherePoint({1.0})).as_const()->value, 0.0);
  EXPECT_EQ(alpha(map, SpherePoint({-1.0})).as_const()->value, pi);
}

TEST(Alpha, StandardCircleTop) {
  const EquivariantMap map(1);
  const PhaseTree g = alpha(map, SpherePoint({0.0, 1.0}));
  const BlendNode* b = g.as_blend();
  ASSERT_NE(b, nullptr);
  EXPECT_EQ(b->lo.as_const()->value, 0.0);
  EXPECT_EQ(b->hi.as_const()->value, pi);
  EXPECT_DOUBLE_EQ(b->t, 0.5);
  EXPECT_DOUBLE_EQ(b->w, 0.5);
  EXPECT_EQ(g(0.0), 0.0);
  EXPECT_EQ(g(1.0), pi);
}

TEST(Alpha, ImprovedBase) {
  const EquivariantMap map(2, {ConstructionMode::Improved, 0.1});
  const PhaseTree g = alpha(map, SpherePoint({std::cos(pi / 2), std::sin(pi / 2)}));
  ASSERT_NE(g.as_const(), nullptr);
  EXPECT_NEAR(g.as_const()->value, pi / 2, 1e-15);
  const PhaseTree h = alpha(map, SpherePoint({std::cos(4.0), std::sin(4.0)}));
  EXPECT_NEAR(h.as_const()->value, 4.0, 1e-15);
}

TEST(Alpha, Preconditions) {
  EXPECT_THROW(EquivariantMap(2, {ConstructionMode::Standard, 0.0}), PreconditionError);
  EXPECT_THROW(EquivariantMap(0, {ConstructionMode::Improved, 0.5}), PreconditionError);
  const EquivariantMap map(2);
  EXPECT_THROW(alpha(map, SpherePoint({0.0, 0.0, 0.0, 1.0})), PreconditionError);
  EXPECT_THROW(beta_eval(map, SpherePoint({0.0, 1.0}), std::vector<double>{1.5}), PreconditionError);
}

TEST(BetaEval, Examples) {
  const EquivariantMap map(2);
  const auto ones = beta_eval(map, SpherePoint({1.0}), grid(16));
  for (const auto& v : ones) EXPECT_EQ(v, Complex(1.0));
  const EquivariantMap hr(3, {ConstructionMode::HobbyRice, 1.0});
  std::mt19937_64 rng(51);
  for (int i = 0; i < 100; ++i) {
    for (const auto& v : beta_eval(hr, random_sphere_point(3, rng), grid(64))) {
      EXPECT_TRUE(v == Complex(1.0) || v == Complex(-1.0));
    }
  }
}

class ModeDim : public ::testing::TestWithParam<std::tuple<ConstructionMode, int>> {};

TEST_P(ModeDim, BetaIsOdd) {
  const auto [mode, n] = GetParam();
  const EquivariantMap map(n, {mode, mode == ConstructionMode::Improved ? 0.05 : 1.0});
  std::mt19937_64 rng(52 + n);
  const auto samples = grid(64);
  for (int trial = 0; trial < 1000; ++trial) {
    const SpherePoint x = random_sphere_point(n, rng);
    const auto a = beta_eval(map, x, samples);
    const auto b = beta_eval(map, -x, samples);
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_LE(std::abs(a[i] + b[i]), 1e-10) << trial;
  }
}

TEST_P(ModeDim, RangeOfPositivePoints) {
  const auto [mode, n] = GetParam();
  if (mode == ConstructionMode::Improved) GTEST_SKIP() << "base angle spans [0, 2pi)";
  const EquivariantMap map(n, {mode, 1.0});
  const double top = mode == ConstructionMode::HobbyRice ? n : pi * n;
  std::mt19937_64 rng(53 + n);
  for (int trial = 0; trial < 1000; ++trial) {
    const PhaseTree g = alpha(map, positive(random_sphere_point(n, rng)));
    const RangeBound r = range_bound(map, positive(random_sphere_point(n, rng)));
    EXPECT_GE(r.gMin, -1e-9);
    EXPECT_LE(r.gMax, top + 1e-9);
    EXPECT_GE(g(0.0), -1e-9);
    EXPECT_LE(g(1.0), top + 1e-9);
    for (double s : grid(32)) EXPECT_LE(g(s), g(std::min(1.0, s + 1.0 / 32)) + 1e-12);
  }
}

TEST_P(ModeDim, MirrorOrdering) {
  const auto [mode, n] = GetParam();
  const EquivariantMap map(n, {mode, mode == ConstructionMode::Improved ? 0.05 : 1.0});
  std::mt19937_64 rng(54 + n);
  for (int trial = 0; trial < 1000; ++trial) {
    SpherePoint x = positive(random_sphere_point(n, rng));
    if (std::abs(x[n]) < 1e-9) continue;
    EXPECT_TRUE(leq(alpha(map, x), alpha(map, mirror(x)))) << trial;
  }
}

TEST_P(ModeDim, ExtensionSandwich) {
  const auto [mode, n] = GetParam();
  if (n < 2) GTEST_SKIP();
  const EquivariantMap map(n, {mode, mode == ConstructionMode::Improved ? 0.05 : 1.0});
  std::mt19937_64 rng(55 + n);
  std::uniform_real_distribution<double> radius(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    // Ball point of B^n extending α_{n−1}.
    const SpherePoint dir = random_sphere_point(n - 1, rng);
    const double r = std::pow(radius(rng), 1.0 / n);
    std::vector<double> b(dir.coords().begin(), dir.coords().end());
    for (double& c : b) c *= r;
    const auto params = hemi_params(BallPoint(b));
    if (!params) continue;
    const PhaseTree ext = alpha_tilde(map, BallPoint(b));
    EXPECT_TRUE(leq(alpha(map, params->u), ext));
    EXPECT_TRUE(leq(ext, alpha(map, params->l)));
  }
}

TEST_P(ModeDim, ContinuousAcrossEquator) {
  const auto [mode, n] = GetParam();
  if (mode == ConstructionMode::HobbyRice) GTEST_SKIP() << "checked through integrals below";
  const EquivariantMap map(n, {mode, mode == ConstructionMode::Improved ? 0.05 : 1.0});
  std::mt19937_64 rng(56 + n);
  const auto samples = grid(2000);
  for (int trial = 0; trial < 1000; ++trial) {
    // Point on a random coordinate equator, nudged to both sides.
    const int axis = static_cast<int>(rng() % static_cast<unsigned>(n + 1));
    const SpherePoint base = random_sphere_point(n, rng);
    std::vector<double> c(base.coords().begin(), base.coords().end());
    c[axis] = 0.0;
    if (norm2(c) < 1e-3) continue;
    const double len = norm2(c);
    for (double& v : c) v /= len;
    std::vector<double> up = c;
    std::vector<double> down = c;
    up[axis] = 4e-5;
    down[axis] = -4e-5;
    const SpherePoint a = SpherePoint::normalized(up);
    const SpherePoint b = SpherePoint::normalized(down);
    ASSERT_LE(geodesic_distance(a, b), 1e-4);
    const auto ha = beta_eval(map, a, samples);
    const auto hb = beta_eval(map, b, samples);
    double dist = 0.0;
    for (std::size_t i = 0; i < ha.size(); ++i) dist += std::abs(ha[i] - hb[i]) / samples.size();
    EXPECT_LE(dist, 1e-2) << trial << " axis " << axis;
  }
}

INSTANTIATE_TEST_SUITE_P(All, ModeDim,
                         ::testing::Combine(::testing::Values(ConstructionMode::Standard, ConstructionMode::HobbyRice,
                                                              ConstructionMode::Improved),
                                            ::testing::Values(1, 2, 3, 4, 5, 6)));

TEST(Improved, RealPartEqualsFirstCoordinateOffWindows) {
  for (int n : {1, 2, 3}) {
    const double cap = 0.01;
    const EquivariantMap map(2 * n, {ConstructionMode::Improved, cap});
    std::mt19937_64 rng(57 + n);
    const int N = 20000;
    for (int trial = 0; trial < 1000; ++trial) {
      const SpherePoint x = random_sphere_point(2 * n, rng);
      const PhaseTree g = alpha(map, x);
      int off = 0;
      for (int i = 0; i < N; ++i) {
        const double s = (i + 0.5) / N;
        if (std::abs(eval_h(g, s).real() - x[0]) > 1e-9) ++off;
      }
      const double measure = static_cast<double>(off) / N;
      EXPECT_LE(measure, 2.0 * g.internal_count() * cap + 2.0 / N) << n << " " << trial;
      EXPECT_LE(g.internal_count(), (1 << (2 * n - 1)) - 1);
    }
  }
}

TEST(Improved, RangeAtZeroFirstCoordinate) {
  for (int n : {1, 2}) {
    const EquivariantMap map(2 * n, {ConstructionMode::Improved, 0.05});
    std::mt19937_64 rng(58 + n);
    for (int trial = 0; trial < 200; ++trial) {
      const SpherePoint base = random_sphere_point(2 * n, rng);
      std::vector<double> c(base.coords().begin(), base.coords().end());
      c[0] = 0.0;
      const SpherePoint x = positive(SpherePoint::normalized(c));
      const RangeBound r = range_bound(map, x);
      EXPECT_GE(r.gMin, pi / 2 - 1e-9);
      EXPECT_LE(r.gMax, pi / 2 + pi * (2 * n - 1) + 1e-9);
    }
  }
}

TEST(Pinkus, Examples) {
  const PhaseTree plus = pinkus_partition(SpherePoint({1.0, 0.0, 0.0}));
  EXPECT_EQ(sign_changes(plus), 0);
  EXPECT_EQ(eval_h(plus, 0.5), Complex(1.0));

  const double r = 1.0 / std::sqrt(2.0);
  const PhaseTree pm = pinkus_partition(SpherePoint({r, -r}));
  EXPECT_EQ(eval_h(pm, 0.25), Complex(1.0));
  EXPECT_EQ(eval_h(pm, 0.75), Complex(-1.0));
  const PhaseTree mp = pinkus_partition(SpherePoint({-r, r}));
  EXPECT_EQ(eval_h(mp, 0.25), Complex(-1.0));
  EXPECT_EQ(eval_h(mp, 0.75), Complex(1.0));
}

TEST(Pinkus, CellsMatchSquaredCoordinates) {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + trial % 5;
    const SpherePoint x = random_sphere_point(n, rng);
    const PhaseTree g = pinkus_partition(x);
    EXPECT_LE(sign_changes(g), n);
    double start = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double mid = start + 0.5 * x[i] * x[i];
      start += x[i] * x[i];
      if (x[i] * x[i] < 1e-9) continue;
      EXPECT_EQ(eval_h(g, mid).real(), x[i] > 0 ? 1.0 : -1.0);
    }
    const auto a = pinkus_partition(-x);
    for (double s : grid(50)) EXPECT_EQ(eval_h(a, s), -eval_h(g, s));
  }
}

TEST(RangeBound, ConstantBase) {
  const EquivariantMap map(2);
  const RangeBound r = range_bound(map, SpherePoint({-1.0}));
  EXPECT_EQ(r.gMin, r.gMax);
}
