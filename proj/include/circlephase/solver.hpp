#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "circlephase/funcspace.hpp"
#include "circlephase/phase.hpp"
#include "circlephase/quadrature.hpp"
#include "circlephase/zerofind.hpp"

namespace circlephase {

enum class SolveMode { Complex, RealPart, HobbyRice, Improved, Generic, Pinkus };

std::string_view mode_name(SolveMode mode);
/// Throws InputError for unknown names.
SolveMode parse_mode(std::string_view name);

struct SolveConfig {
  QuadConfig quad;
  ZeroFindConfig zero;
  /// Residual acceptance; defaults to 1e−8 · (1 + Σ‖f_j‖₁).
  std::optional<double> absTol;
  double epsilon = 0.1;  // improved mode only, in (0, 1]
  int maxRetries = 10;   // improved mode δ halvings
};

struct SolveReport {
  SolveMode mode = SolveMode::Complex;
  std::vector<double> spherePoint;  // empty for the constant shortcut
  PhaseTree tree = PhaseTree::constant(0.0);
  std::vector<double> residuals;
  double residualNorm = 0.0;
  double tolerance = 0.0;
  std::optional<double> w11;  // absent for integer trees
  double bound = 0.0;         // W¹,¹ bound, or the sign-change bound for step functions
  bool boundSatisfied = false;
  std::optional<int> signChanges;
  long evaluations = 0;
  double wallTimeMs = 0.0;
  bool converged = false;
  bool constantShortcut = false;
  int rounds = 0;
  double widthCap = 1.0;
};

SolveReport solve_complex(const Problem& problem, const SolveConfig& cfg = {});
/// Zero of ψ = (Re ∫ f_j h)_j on S^n.
SolveReport solve_real_part(const Problem& problem, const SolveConfig& cfg = {});
/// Standard-mode β over S^m with m = spec.output_dim().
SolveReport solve_generic(const FunctionalSpec& spec, const SolveConfig& cfg = {});

/// Caller-supplied functional; must be odd under h ↦ −h and continuous in L¹.
using OddFunctional = std::function<std::vector<double>(const PhaseTree&)>;
/// `scale` feeds the default tolerance 1e−8 · scale.
SolveReport solve_generic(const OddFunctional& psi, int m, double scale, const SolveConfig& cfg = {});

SolveReport solve_hobby_rice(const Problem& problem, const SolveConfig& cfg = {});
/// Same problem solved through the cell-width parameterization of ±1 steps.
SolveReport solve_pinkus(const Problem& problem, const SolveConfig& cfg = {});
SolveReport solve_improved_real(const Problem& problem, const SolveConfig& cfg = {});

/// Dispatches on mode; Generic treats the problem as a complex linear spec.
SolveReport solve(SolveMode mode, const Problem& problem, const SolveConfig& cfg = {});

/// The functional whose zero a report of this mode certifies.
FunctionalSpec spec_for_mode(SolveMode mode, const Problem& problem);

struct Verification {
  std::vector<double> residuals;
  double residualNorm;
  std::optional<double> w11;
  std::optional<int> signChanges;
};

/// Re-evaluates ψ on the tree with a quadrature tolerance ten times tighter.
Verification verify(const PhaseTree& tree, const FunctionalSpec& spec, const QuadConfig& cfg = {});

/// Report document; wall time is left out unless requested so that reports
/// of identical runs compare byte for byte.
nlohmann::json report_to_json(const SolveReport& report, bool includeTiming = false);
SolveReport report_from_json(const nlohmann::json& j);
std::string serialize_report(const SolveReport& report, bool includeTiming = false);
SolveReport parse_report(std::string_view text);

}  // namespace circlephase
