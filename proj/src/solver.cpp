#include "circlephase/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "circlephase/construct.hpp"
#include "circlephase/errors.hpp"

namespace circlephase {

using nlohmann::json;

namespace {

using Evaluator = std::function<std::vector<double>(const PhaseTree&)>;

constexpr double kShortcutRatio = 1e-12;
constexpr double kBoundSlack = 1e-9;

double default_tol(const SolveConfig& cfg, double scale) { return cfg.absTol.value_or(1e-8 * scale); }

QuadConfig tighter(const QuadConfig& q) {
  QuadConfig t = q;
  t.relTol = q.relTol / 10.0;
  t.maxDepth = std::min(60, q.maxDepth + 10);
  return t;
}

bool integrals_vanish(const Problem& problem) {
  for (const PiecewiseFn& f : problem.functions) {
    if (std::abs(f.integral(0.0, 1.0)) > kShortcutRatio * l1_norm(f)) return false;
  }
  return true;
}

void require_real(const Problem& problem, std::string_view what) {
  for (const PiecewiseFn& f : problem.functions) {
    if (!f.is_real()) throw InputError(std::string(what) + " needs real-valued functions");
  }
}

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

double norm_of(const std::vector<double>& v) { return norm2(v); }

/// Fills residuals, w11, sign changes and the bound verdict from the final tree.
void finalize(SolveReport& r, const Evaluator& check) {
  r.residuals = check(r.tree);
  r.residualNorm = norm_of(r.residuals);
  if (r.tree.is_smooth()) {
    r.w11 = w11_norm(r.tree);
    r.boundSatisfied = *r.w11 <= r.bound + kBoundSlack;
  } else {
    r.signChanges = sign_changes(r.tree);
    r.boundSatisfied = *r.signChanges <= static_cast<int>(std::lround(r.bound));
  }
}

SolveReport shortcut_report(SolveMode mode, PhaseTree tree, double bound, double tol, const Evaluator& check) {
  SolveReport r;
  r.mode = mode;
  r.tree = std::move(tree);
  r.bound = bound;
  r.tolerance = tol;
  r.constantShortcut = true;
  finalize(r, check);
  r.converged = r.residualNorm <= tol;
  return r;
}

/// Zero search for x ↦ ψ(treeOf(x)) on S^m, followed by an independent check.
SolveReport run_zero_search(SolveMode mode, int m, const std::function<PhaseTree(const SpherePoint&)>& treeOf,
                            const Evaluator& psi, const Evaluator& check, double bound, double tol,
                            const SolveConfig& cfg) {
  OddMap map{m, [&](const SpherePoint& x) { return psi(treeOf(x)); }};
  ZeroFindConfig zcfg = cfg.zero;
  zcfg.absTol = tol;
  const ZeroResult zero = find_zero(map, zcfg);

  SolveReport r;
  r.mode = mode;
  r.spherePoint.assign(zero.point.coords().begin(), zero.point.coords().end());
  r.tree = treeOf(zero.point);
  r.bound = bound;
  r.tolerance = tol;
  r.evaluations = zero.evaluations;
  r.rounds = 1;
  finalize(r, check);
  r.converged = zero.converged && r.residualNorm <= tol;
  return r;
}

Evaluator spec_psi(const FunctionalSpec& spec, const QuadConfig& quad) {
  return [spec, quad](const PhaseTree& tree) { return psi_eval(spec, tree, quad); };
}

Evaluator spec_check(const FunctionalSpec& spec, const QuadConfig& quad) {
  return [spec, quad](const PhaseTree& tree) { return verify(tree, spec, quad).residuals; };
}

SolveReport solve_standard(SolveMode mode, const FunctionalSpec& spec, bool shortcutAllowed, const SolveConfig& cfg) {
  cfg.quad.validate();
  spec.validate();
  const int m = spec.output_dim();
  const double bound = 1.0 + std::numbers::pi * m;
  const double tol = default_tol(cfg, spec.scale());
  const Evaluator check = spec_check(spec, cfg.quad);
  if (shortcutAllowed) return shortcut_report(mode, PhaseTree::constant(0.0), bound, tol, check);

  const EquivariantMap beta(m, {ConstructionMode::Standard, 1.0});
  return run_zero_search(
      mode, m, [&](const SpherePoint& x) { return alpha(beta, x); }, spec_psi(spec, cfg.quad), check, bound, tol,
      cfg);
}

}  // namespace

std::string_view mode_name(SolveMode mode) {
  switch (mode) {
    case SolveMode::Complex: return "complex";
    case SolveMode::RealPart: return "real-part";
    case SolveMode::HobbyRice: return "hobby-rice";
    case SolveMode::Improved: return "improved";
    case SolveMode::Generic: return "generic";
    case SolveMode::Pinkus: return "pinkus";
  }
  return "complex";
}

SolveMode parse_mode(std::string_view name) {
  for (SolveMode m : {SolveMode::Complex, SolveMode::RealPart, SolveMode::HobbyRice, SolveMode::Improved,
                      SolveMode::Generic, SolveMode::Pinkus}) {
    if (mode_name(m) == name) return m;
  }
  throw InputError("unknown solve mode '" + std::string(name) + "'");
}

FunctionalSpec spec_for_mode(SolveMode mode, const Problem& problem) {
  switch (mode) {
    case SolveMode::RealPart:
    case SolveMode::HobbyRice:
    case SolveMode::Pinkus:
      return real_part_spec(problem);
    case SolveMode::Complex:
    case SolveMode::Improved:
    case SolveMode::Generic:
      return complex_spec(problem);
  }
  return complex_spec(problem);
}

SolveReport solve_complex(const Problem& problem, const SolveConfig& cfg) {
  const Stopwatch clock;
  problem.validate();
  SolveReport r = solve_standard(SolveMode::Complex, complex_spec(problem), integrals_vanish(problem), cfg);
  r.wallTimeMs = clock.elapsed_ms();
  return r;
}

SolveReport solve_real_part(const Problem& problem, const SolveConfig& cfg) {
  const Stopwatch clock;
  problem.validate();
  SolveReport r = solve_standard(SolveMode::RealPart, real_part_spec(problem), integrals_vanish(problem), cfg);
  r.wallTimeMs = clock.elapsed_ms();
  return r;
}

SolveReport solve_generic(const FunctionalSpec& spec, const SolveConfig& cfg) {
  const Stopwatch clock;
  spec.validate();
  cfg.quad.validate();
  // h ≡ 1 already annihilates ψ when every component vanishes there.
  const std::vector<double> atOne = psi_eval(spec, PhaseTree::constant(0.0), tighter(cfg.quad));
  bool vanish = true;
  for (double v : atOne) vanish = vanish && std::abs(v) <= kShortcutRatio * spec.scale();
  SolveReport r = solve_standard(SolveMode::Generic, spec, vanish, cfg);
  r.wallTimeMs = clock.elapsed_ms();
  return r;
}

SolveReport solve_generic(const OddFunctional& psi, int m, double scale, const SolveConfig& cfg) {
  const Stopwatch clock;
  if (m < 1) throw PreconditionError("functional dimension m must be at least 1");
  if (!(scale > 0.0)) throw PreconditionError("tolerance scale must be positive");
  const EquivariantMap beta(m, {ConstructionMode::Standard, 1.0});
  SolveReport r = run_zero_search(
      SolveMode::Generic, m, [&](const SpherePoint& x) { return alpha(beta, x); }, psi, psi,
      1.0 + std::numbers::pi * m, default_tol(cfg, scale), cfg);
  r.wallTimeMs = clock.elapsed_ms();
  return r;
}

SolveReport solve_hobby_rice(const Problem& problem, const SolveConfig& cfg) {
  const Stopwatch clock;
  problem.validate();
  require_real(problem, "hobby-rice mode");
  cfg.quad.validate();
  const FunctionalSpec spec = real_part_spec(problem);
  const int n = static_cast<int>(problem.size());
  const double tol = default_tol(cfg, spec.scale());
  const Evaluator check = spec_check(spec, cfg.quad);
  SolveReport r;
  if (integrals_vanish(problem)) {
    r = shortcut_report(SolveMode::HobbyRice, PhaseTree::integer(0), n, tol, check);
  } else {
    const EquivariantMap beta(n, {ConstructionMode::HobbyRice, 1.0});
    r = run_zero_search(
        SolveMode::HobbyRice, n, [&](const SpherePoint& x) { return alpha(beta, x); }, spec_psi(spec, cfg.quad),
        check, n, tol, cfg);
  }
  r.wallTimeMs = clock.elapsed_ms();
  return r;
}

SolveReport solve_pinkus(const Problem& problem, const SolveConfig& cfg) {
  const Stopwatch clock;
  problem.validate();
  require_real(problem, "pinkus mode");
  cfg.quad.validate();
  const FunctionalSpec spec = real_part_spec(problem);
  const int n = static_cast<int>(problem.size());
  SolveReport r = run_zero_search(
      SolveMode::Pinkus, n, [](const SpherePoint& x) { return pinkus_partition(x); }, spec_psi(spec, cfg.quad),
      spec_check(spec, cfg.quad), n, default_tol(cfg, spec.scale()), cfg);
  r.wallTimeMs = clock.elapsed_ms();
  return r;
}

SolveReport solve_improved_real(const Problem& problem, const SolveConfig& cfg) {
  const Stopwatch clock;
  problem.validate();
  require_real(problem, "improved mode");
  cfg.quad.validate();
  if (!(cfg.epsilon > 0.0 && cfg.epsilon <= 1.0)) throw PreconditionError("epsilon must lie in (0, 1]");
  if (cfg.maxRetries < 1) throw PreconditionError("maxRetries must be at least 1");

  const FunctionalSpec spec = complex_spec(problem);
  const int n = static_cast<int>(problem.size());
  const double bound = 1.0 + std::numbers::pi * (2 * n - 1) + cfg.epsilon;
  const double tol = default_tol(cfg, spec.scale());
  const Evaluator check = spec_check(spec, cfg.quad);
  if (integrals_vanish(problem)) {
    SolveReport r = shortcut_report(SolveMode::Improved, PhaseTree::constant(0.0), bound, tol, check);
    r.wallTimeMs = clock.elapsed_ms();
    return r;
  }

  double maxIntegral = 0.0;
  double supSum = 0.0;
  for (const PiecewiseFn& f : problem.functions) {
    maxIntegral = std::max(maxIntegral, std::abs(f.integral(0.0, 1.0)));
    supSum += f.sup_norm();
  }
  // Every blend node of α_{2n} may contribute one window of width ≤ 2·cap.
  const double blendNodes = std::ldexp(1.0, 2 * n - 1) - 1.0;
  double delta = 0.5 * cfg.epsilon * maxIntegral / 4.0;

  SolveReport best;
  long evaluations = 0;
  for (int round = 1; round <= cfg.maxRetries; ++round, delta *= 0.5) {
    const double cap = std::min(1.0, delta / (2.0 * supSum * blendNodes));
    const EquivariantMap beta(2 * n, {ConstructionMode::Improved, cap});
    SolveReport r = run_zero_search(
        SolveMode::Improved, 2 * n, [&](const SpherePoint& x) { return alpha(beta, x); },
        spec_psi(spec, cfg.quad), check, bound, tol, cfg);
    evaluations += r.evaluations;
    r.evaluations = evaluations;
    r.rounds = round;
    r.widthCap = cap;
    best = std::move(r);
    if (best.converged && best.boundSatisfied) break;
  }
  best.wallTimeMs = clock.elapsed_ms();
  return best;
}

SolveReport solve(SolveMode mode, const Problem& problem, const SolveConfig& cfg) {
  switch (mode) {
    case SolveMode::Complex: return solve_complex(problem, cfg);
    case SolveMode::RealPart: return solve_real_part(problem, cfg);
    case SolveMode::HobbyRice: return solve_hobby_rice(problem, cfg);
    case SolveMode::Improved: return solve_improved_real(problem, cfg);
    case SolveMode::Generic: return solve_generic(complex_spec(problem), cfg);
    case SolveMode::Pinkus: return solve_pinkus(problem, cfg);
  }
  throw PreconditionError("unknown solve mode");
}

Verification verify(const PhaseTree& tree, const FunctionalSpec& spec, const QuadConfig& cfg) {
  spec.validate();
  Verification v;
  v.residuals = psi_eval(spec, tree, tighter(cfg));
  v.residualNorm = norm2(v.residuals);
  if (tree.is_smooth()) {
    v.w11 = w11_norm(tree);
  } else {
    v.signChanges = sign_changes(tree);
  }
  return v;
}

json report_to_json(const SolveReport& r, bool includeTiming) {
  json j{{"schema", 1},
         {"mode", std::string(mode_name(r.mode))},
         {"sphere_point", r.spherePoint.empty() ? json(nullptr) : json(r.spherePoint)},
         {"phase_tree", tree_to_json(r.tree)},
         {"residuals", r.residuals},
         {"residual_norm", r.residualNorm},
         {"tolerance", r.tolerance},
         {"w11", r.w11 ? json(*r.w11) : json(nullptr)},
         {"bound", r.bound},
         {"bound_satisfied", r.boundSatisfied},
         {"sign_changes", r.signChanges ? json(*r.signChanges) : json(nullptr)},
         {"evaluations", r.evaluations},
         {"converged", r.converged},
         {"constant_shortcut", r.constantShortcut},
         {"rounds", r.rounds},
         {"width_cap", r.widthCap}};
  if (includeTiming) j["wall_time_ms"] = r.wallTimeMs;
  return j;
}

SolveReport report_from_json(const json& j) {
  check_schema(j);
  try {
    SolveReport r;
    r.mode = parse_mode(j.at("mode").get<std::string>());
    if (!j.at("sphere_point").is_null()) r.spherePoint = j.at("sphere_point").get<std::vector<double>>();
    r.tree = tree_from_json(j.at("phase_tree"));
    r.residuals = j.at("residuals").get<std::vector<double>>();
    r.residualNorm = j.at("residual_norm").get<double>();
    r.tolerance = j.at("tolerance").get<double>();
    if (!j.at("w11").is_null()) r.w11 = j.at("w11").get<double>();
    r.bound = j.at("bound").get<double>();
    r.boundSatisfied = j.at("bound_satisfied").get<bool>();
    if (!j.at("sign_changes").is_null()) r.signChanges = j.at("sign_changes").get<int>();
    r.evaluations = j.value("evaluations", 0L);
    r.converged = j.at("converged").get<bool>();
    r.constantShortcut = j.value("constant_shortcut", false);
    r.rounds = j.value("rounds", 0);
    r.widthCap = j.value("width_cap", 1.0);
    r.wallTimeMs = j.value("wall_time_ms", 0.0);
    return r;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
}

std::string serialize_report(const SolveReport& report, bool includeTiming) {
  return report_to_json(report, includeTiming).dump(2);
}

SolveReport parse_report(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
  if (!j.is_object()) throw InputError("malformed report: expected an object");
  return report_from_json(j);
}

}  // namespace circlephase
