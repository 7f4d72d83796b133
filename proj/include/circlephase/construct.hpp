#pragma once

#include <complex>
#include <span>
#include <vector>

#include "circlephase/phase.hpp"
#include "circlephase/sphere.hpp"

namespace circlephase {

enum class ConstructionMode {
  Standard,   // smooth blends, base α₀(±1) = {0, π}
  HobbyRice,  // integer step functions with hard switches
  Improved,   // smooth blends, base α₁(e^{iθ}) = θ, capped widths
};

struct ConstructionConfig {
  ConstructionMode mode = ConstructionMode::Standard;
  /// Upper bound on every blend width; 1 leaves widths uncapped.
  double widthCap = 1.0;
};

/// The odd map β_n = φ ∘ α_n : S^n → circle-valued functions, built by the
/// hemisphere recursion. Positive points map to trees with range inside
/// [0, nπ] (resp. [0, n] for integer trees); α(−x) = shift(α(x), 1).
class EquivariantMap {
 public:
  /// Throws PreconditionError for widthCap ∉ (0, 1] or a dimension below the
  /// mode's base case.
  EquivariantMap(int dimension, ConstructionConfig config = {});

  int dimension() const { return dimension_; }
  const ConstructionConfig& config() const { return config_; }

 private:
  int dimension_;
  ConstructionConfig config_;
};

/// α_k(x) for x ∈ S^k, k ≤ map.dimension().
PhaseTree alpha(const EquivariantMap& map, const SpherePoint& x);

/// Extension ᾶ_k of α_k to the ball B^{k+1}.
PhaseTree alpha_tilde(const EquivariantMap& map, const BallPoint& x);

/// eval_h(alpha(map, x), s) for every sample s.
std::vector<std::complex<double>> beta_eval(const EquivariantMap& map, const SpherePoint& x,
                                            std::span<const double> samples);

/// Classical parameterization of ±1 step functions by S^n: cell i has width
/// x_i² and sign sgn(x_i). Returned as an integer tree.
PhaseTree pinkus_partition(const SpherePoint& x);

struct RangeBound {
  double gMin;
  double gMax;
};

/// g(0) and g(1) of alpha(map, x); the range endpoints since g is monotone.
RangeBound range_bound(const EquivariantMap& map, const SpherePoint& x);

}  // namespace circlephase
