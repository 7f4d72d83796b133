#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "circlephase/sphere.hpp"

namespace circlephase {

/// A map F: S^m → ℝ^m that the caller promises is continuous and odd,
/// F(−x) = −F(x). The evaluator must be safe to call repeatedly and must
/// not depend on call order.
struct OddMap {
  int dimension = 0;
  std::function<std::vector<double>(const SpherePoint&)> eval;
};

struct ZeroFindConfig {
  double absTol = 1e-8;
  int maxRefineLevel = 8;
  long localBudget = 20000;  // evaluations per local refinement
  std::uint64_t seed = 0;
  /// Candidates refined per triangulation level, best-scored first.
  int maxCandidatesPerLevel = 24;
  std::size_t simplexBudget = std::size_t{1} << 20;
  /// Initial pattern-search step of local_refine (radians, roughly).
  double initialStep = 0.1;
  /// Evaluations spent on labeled candidates before switching to continuation.
  long labelingBudget = 20000;
  /// Evaluations allowed for the continuation stage.
  long continuationBudget = 200000;
};

struct ZeroResult {
  SpherePoint point;  // positive representative
  std::vector<double> residual;
  double residualNorm;
  long evaluations;
  bool converged;
};

/// Tucker-style labels ±(1 + argmax_i |F_i(v)|), lowest index on ties;
/// returns normalized barycenters of simplices carrying some pair {+i, −i},
/// positive representatives only.
std::vector<SpherePoint> coarse_candidates(const OddMap& map, const SymmetricTriangulation& tri);

/// Derivative-free local search for a zero of F near `start`: safeguarded
/// finite-difference Newton steps in the tangent space, falling back to a
/// compass poll with shrinking step; every move is renormalized onto the
/// sphere. Stops at absTol or when the budget runs out.
ZeroResult local_refine(const OddMap& map, const SpherePoint& start, const ZeroFindConfig& cfg);

/// Samples F at 100 seeded random points; throws ContractError when
/// ‖F(−x) + F(x)‖ > 1e−9 · max(1, ‖F(x)‖).
void check_oddness(const OddMap& map, std::uint64_t seed);

/// Follows the zero curve of H(x, s) = (1 − s)·A·x + s·F(x) on S^m × [0, 1]
/// from the kernel of a seeded random linear map A. H is odd in x, so the
/// curve leaving (x₀, 0) cannot come back to (−x₀, 0) and has to reach s = 1.
/// Pseudo-arclength predictor–corrector with finite-difference Jacobians,
/// finished by Newton steps at s = 1.
ZeroResult continuation_zero(const OddMap& map, const ZeroFindConfig& cfg);

/// Refines triangulations level by level, polishing labeled candidates until
/// one converges or the labeling budget runs out, then falls back to
/// continuation_zero. Deterministic for a given seed. Returns the best
/// non-converged result when both stages fail.
ZeroResult find_zero(const OddMap& map, const ZeroFindConfig& cfg);

/// Uniformly distributed point of S^m from a seeded generator.
SpherePoint random_sphere_point(int m, std::mt19937_64& rng);

}  // namespace circlephase
