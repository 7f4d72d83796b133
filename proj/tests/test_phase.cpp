#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "circlephase/errors.hpp"
#include "circlephase/phase.hpp"
#include "oracles.hpp"

using namespace circlephase;
using std::numbers::pi;

namespace {

PhaseTree C(double c) { return PhaseTree::constant(c); }
PhaseTree I(std::int64_t k) { return PhaseTree::integer(k); }

double l1_phi_distance(const PhaseTree& a, const PhaseTree& b, long cells) {
  return oracle::midpoint([&](double x) { return std::abs(eval_h(a, x) - eval_h(b, x)); }, 0.0, 1.0, cells);
}

double l1_g_distance(const PhaseTree& a, const PhaseTree& b, long cells) {
  return oracle::midpoint([&](double x) { return std::abs(eval_g(a, x) - eval_g(b, x)); }, 0.0, 1.0, cells);
}

}  // namespace

TEST(EvalG, Examples) {
  EXPECT_EQ(eval_g(C(0.0), 0.37), 0.0);
  const PhaseTree mid = blend(C(0.0), C(pi), 0.5, 0.25);
  EXPECT_NEAR(eval_g(mid, blend_center(0.5, 0.25)), pi / 2, 1e-15);
  EXPECT_EQ(eval_g(blend(C(0.0), C(pi), 0.0, 0.25), 1.0), 0.0);
}

TEST(EvalG, MatchesDirectRecursion) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const PhaseTree tree = oracle::random_tree(rng, 0.0, 3 * pi, 3);
    for (int k = 0; k < 5; ++k) {
      const double x = u(rng);
      EXPECT_NEAR(eval_g(tree, x), oracle::direct_g(tree, x), 1e-8) << trial << " " << x;
    }
  }
}

TEST(EvalH, Examples) {
  EXPECT_NEAR(std::abs(eval_h(C(pi), 0.2) - Complex(-1.0)), 0.0, 1e-15);
  EXPECT_EQ(eval_h(I(2), 0.2), Complex(1.0));
  EXPECT_EQ(eval_h(I(3), 0.2), Complex(-1.0));
  EXPECT_NEAR(std::abs(eval_h(C(pi / 2), 0.9) - Complex(0.0, 1.0)), 0.0, 1e-15);
}

TEST(Blend, EqualEndsIsIdentity) {
  std::mt19937_64 rng(32);
  const PhaseTree g = oracle::random_tree(rng, 0.0, pi, 2);
  const PhaseTree b = blend(g, g, 0.4, 0.3);
  for (int i = 0; i <= 1000; ++i) EXPECT_NEAR(eval_g(b, i / 1000.0), eval_g(g, i / 1000.0), 1e-14);
}

TEST(Blend, PathEndpointsAreExact) {
  for (double w : {0.01, 0.25, 1.0}) {
    const PhaseTree at0 = blend(C(0.0), C(pi), 0.0, w);
    const PhaseTree at1 = blend(C(0.0), C(pi), 1.0, w);
    for (int i = 0; i <= 10000; ++i) {
      EXPECT_EQ(eval_g(at0, i / 10000.0), 0.0);
      EXPECT_EQ(eval_g(at1, i / 10000.0), pi);
    }
  }
}

TEST(Blend, RejectsBadArguments) {
  EXPECT_THROW(blend(C(pi), C(0.0), 0.5, 0.5), PreconditionError);
  EXPECT_THROW(blend(C(0.0), C(pi), 1.5, 0.5), PreconditionError);
  EXPECT_THROW(blend(C(0.0), C(pi), 0.5, 0.0), PreconditionError);
  EXPECT_THROW(blend(C(0.0), C(pi), 0.5, 1.5), PreconditionError);
  EXPECT_THROW(blend(I(0), I(1), 0.5, 0.5), PreconditionError);
  EXPECT_THROW(hard_switch(I(1), I(0), 0.5), PreconditionError);
}

TEST(Shift, Examples) {
  EXPECT_EQ(eval_g(shift(C(0.0), 1), 0.3), pi);
  EXPECT_EQ(shift(I(0), 3).as_int()->value, 3);
  const PhaseTree b = blend(C(0.0), C(pi), 0.3, 0.2);
  const PhaseTree s = shift(b, 1);
  for (int i = 0; i <= 1000; ++i) EXPECT_NEAR(eval_g(s, i / 1000.0), eval_g(b, i / 1000.0) + pi, 1e-14);
}

TEST(Leq, Examples) {
  EXPECT_TRUE(leq(C(0.0), C(pi)));
  EXPECT_FALSE(leq(C(pi), C(0.0)));
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const PhaseTree g = oracle::random_tree(rng, 0.0, pi, 2);
    EXPECT_TRUE(leq(g, blend(g, shift(g, 1), 0.37, 0.2)));
  }
}

TEST(W11, Examples) {
  EXPECT_EQ(w11_norm(C(1.3)), 1.0);
  const PhaseTree full = blend(C(0.0), C(2 * pi), 0.5, 0.2);
  EXPECT_NEAR(w11_norm(full), 1.0 + 2.0 * pi, 1e-15);
  EXPECT_NEAR(w11_norm(blend(C(0.0), C(pi), 0.5, 0.1)), 1.0 + pi, 1e-15);
  EXPECT_THROW(w11_norm(I(0)), UnsupportedKindError);
}

TEST(W11, EqualsTotalVariationOracle) {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 20; ++trial) {
    const PhaseTree g = oracle::random_tree(rng, 0.0, 2 * pi, 3);
    // ∫|h| + ∫|h'| = 1 + Σ |Δg| for a fine partition of a monotone g.
    double tv = 0.0;
    double prev = eval_g(g, 0.0);
    for (int i = 1; i <= 100000; ++i) {
      const double cur = eval_g(g, i / 100000.0);
      tv += std::abs(cur - prev);
      prev = cur;
    }
    EXPECT_NEAR(w11_norm(g), 1.0 + tv, 1e-12);
  }
}

TEST(Windows, Examples) {
  EXPECT_TRUE(transition_windows(C(1.0)).empty());
  const auto one = transition_windows(blend(C(0.0), C(pi), 0.5, 0.25));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].halfWidth, 0.25);
  const PhaseTree nested =
      blend(blend(C(0.0), C(1.0), 0.3, 0.2), blend(C(1.0), C(2.0), 0.6, 0.1), 0.5, 0.15);
  EXPECT_LE(transition_windows(nested).size(), 3u);
}

TEST(Windows, GLocallyConstantOutside) {
  std::mt19937_64 rng(35);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const PhaseTree g = oracle::random_tree(rng, 0.0, 4 * pi, 3);
    const auto windows = transition_windows(g);
    for (std::size_t i = 1; i < windows.size(); ++i) EXPECT_LE(windows[i - 1].center, windows[i].center);
    for (int k = 0; k < 50; ++k) {
      const double x = u(rng);
      const double y = std::min(1.0, x + 1e-7);
      bool covered = false;
      for (const auto& w : windows) {
        covered = covered || std::abs(x - w.center) <= w.halfWidth || std::abs(y - w.center) <= w.halfWidth;
      }
      if (covered) continue;
      EXPECT_EQ(eval_g(g, x), eval_g(g, y)) << "outside windows at " << x;
    }
  }
}

TEST(SignChanges, Examples) {
  EXPECT_EQ(sign_changes(I(5)), 0);
  EXPECT_EQ(sign_changes(hard_switch(I(0), I(1), 0.5)), 1);
  EXPECT_EQ(sign_changes(hard_switch(I(0), I(2), 0.5)), 0);
  EXPECT_THROW(sign_changes(C(0.0)), UnsupportedKindError);
}

TEST(Switch, EvaluatesAsStep) {
  const PhaseTree s = hard_switch(I(0), I(1), 0.25);
  EXPECT_EQ(eval_g(s, 0.7), 0.0);
  EXPECT_EQ(eval_g(s, 0.75), 1.0);
  EXPECT_EQ(eval_h(s, 0.9), Complex(-1.0));
}

TEST(PhaseProperties, Monotone) {
  std::mt19937_64 rng(36);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const PhaseTree g = oracle::random_tree(rng, 0.0, 5 * pi, 4, 0.001);
    for (int k = 0; k < 100; ++k) {
      double a = u(rng);
      double b = u(rng);
      if (a > b) std::swap(a, b);
      EXPECT_LE(eval_g(g, a), eval_g(g, b) + 1e-12);
    }
  }
}

TEST(PhaseProperties, BlendSandwich) {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const PhaseTree lo = oracle::random_tree(rng, 0.0, pi, 2);
    const PhaseTree hi = trial % 2 ? shift(lo, 1) : oracle::random_tree(rng, pi, 2 * pi, 2);
    const PhaseTree b = blend(lo, hi, u(rng), 0.01 + 0.99 * u(rng));
    for (int k = 0; k < 10; ++k) {
      const double x = u(rng);
      EXPECT_LE(eval_g(lo, x), eval_g(b, x) + 1e-12);
      EXPECT_LE(eval_g(b, x), eval_g(hi, x) + 1e-12);
    }
  }
}

TEST(PhaseProperties, PhiIsOneLipschitz) {
  EXPECT_NEAR(l1_phi_distance(C(0.1), C(0.0), 10), 2 * std::sin(0.05), 1e-15);
  std::mt19937_64 rng(38);
  for (int trial = 0; trial < 1000; ++trial) {
    const PhaseTree a = oracle::random_tree(rng, 0.0, 3 * pi, 2);
    const PhaseTree b = oracle::random_tree(rng, 0.0, 3 * pi, 2);
    EXPECT_LE(l1_phi_distance(a, b, 2000), l1_g_distance(a, b, 2000) + 1e-12);
  }
}

TEST(PhaseProperties, FourWContinuity) {
  std::mt19937_64 rng(39);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const long cells = 4000;
  for (int trial = 0; trial < 1000; ++trial) {
    const PhaseTree g = oracle::random_tree(rng, 0.0, 2 * pi, 2);
    const PhaseTree g0 = oracle::random_tree(rng, 0.0, pi, 2);
    const PhaseTree g1 = oracle::random_tree(rng, pi, 2 * pi, 2);
    const double w = 0.001 + 0.3 * u(rng);
    const PhaseTree b = blend(g0, g1, u(rng), w);
    const double lhs = l1_phi_distance(b, g, cells);
    const double rhs = l1_phi_distance(g0, g, cells) + l1_phi_distance(g1, g, cells) + 4 * w;
    // One midpoint cell per window edge may be misattributed.
    EXPECT_LE(lhs, rhs + 4.0 / cells) << trial;
  }
}

TEST(TreeJson, RoundTrip) {
  std::mt19937_64 rng(40);
  for (int trial = 0; trial < 100; ++trial) {
    const PhaseTree g = oracle::random_tree(rng, 0.0, 4 * pi, 3);
    const PhaseTree back = tree_from_json(nlohmann::json::parse(tree_to_json(g).dump()));
    EXPECT_EQ(tree_to_json(back).dump(), tree_to_json(g).dump());
    for (int i = 0; i <= 100; ++i) EXPECT_EQ(eval_g(back, i / 100.0), eval_g(g, i / 100.0));
  }
  const PhaseTree s = hard_switch(I(0), hard_switch(I(1), I(2), 0.3), 0.6);
  EXPECT_EQ(tree_to_json(tree_from_json(tree_to_json(s))).dump(), tree_to_json(s).dump());
}

TEST(TreeJson, RejectsMalformed) {
  using nlohmann::json;
  EXPECT_THROW(tree_from_json(json::parse(R"({"blend":{"lo":{"const":3},"hi":{"const":0},"t":0.5,"w":0.5}})")),
               InputError);
  EXPECT_THROW(tree_from_json(json::parse(R"({"nope":1})")), InputError);
  EXPECT_THROW(tree_from_json(json::parse(R"({"switch":{"lo":{"int":0},"hi":{"const":1},"t":0.5}})")), InputError);
}
