#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "circlephase/funcspace.hpp"
#include "circlephase/phase.hpp"

namespace circlephase {

struct QuadConfig {
  double relTol = 1e-10;  // in (0, 1e-4]
  int maxDepth = 40;
  int panelOrder = 15;  // Kronrod points per panel; 15, 21, 31, 41, 51 or 61

  /// Throws PreconditionError on out-of-range settings.
  void validate() const;
};

enum class PsiMode { Complex, RealPart };

/// weight · (Re ∫ base·h)^exponent, exponent odd.
struct OddTerm {
  PiecewiseFn base;
  int exponent;
  double weight;
};

/// ψ(h) = ((Re, Im) or Re of ∫ f_j h)_j followed by the odd terms.
struct FunctionalSpec {
  std::vector<PiecewiseFn> linear;
  PsiMode mode = PsiMode::Complex;
  std::vector<OddTerm> oddTerms;

  int output_dim() const;
  /// Throws InputError on even exponents or an empty functional.
  void validate() const;
  /// 1 + Σ ‖·‖₁ over every function the spec mentions.
  double scale() const;
};

FunctionalSpec complex_spec(const Problem& problem);
FunctionalSpec real_part_spec(const Problem& problem);

/// ∫ over [0,1] of a complex integrand, with the interval first split at
/// every entry of `breaks`, then adaptively bisected until each panel's
/// Kronrod−Gauss difference is ≤ absTol · (panel length).
/// Throws AccuracyError when maxDepth is exhausted.
Complex integrate_adaptive(const std::function<Complex(double)>& integrand, std::vector<double> breaks,
                           double absTol, const QuadConfig& cfg);

/// ∫₀¹ f(x)·h(x) dx for h = eval_h(tree, ·).
Complex integrate(const PiecewiseFn& f, const PhaseTree& tree, const QuadConfig& cfg = {});

std::vector<double> psi_eval(const FunctionalSpec& spec, const PhaseTree& tree, const QuadConfig& cfg = {});

struct LipschitzSides {
  std::vector<double> lhs;  // |ψ_j(h₂) − ψ_j(h₁)|
  std::vector<double> rhs;  // ∫ |f_j| |h₂ − h₁| dλ
  bool holds;
};

/// Per linear component, compares |ψ_j(h_b) − ψ_j(h_a)| with
/// ∫|f_j||h_b − h_a|dλ (tolerance 1e−9). Requires a spec without odd terms.
LipschitzSides lipschitz_sides(const FunctionalSpec& spec, const PhaseTree& treeA, const PhaseTree& treeB,
                               const QuadConfig& cfg = {});
bool lipschitz_check(const FunctionalSpec& spec, const PhaseTree& treeA, const PhaseTree& treeB,
                     const QuadConfig& cfg = {});

nlohmann::json spec_to_json(const FunctionalSpec& spec);
FunctionalSpec spec_from_json(const nlohmann::json& j);
FunctionalSpec parse_functional_spec(std::string_view text);
std::string serialize_functional_spec(const FunctionalSpec& spec);

}  // namespace circlephase
