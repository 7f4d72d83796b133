#include "circlephase/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "circlephase/errors.hpp"

namespace circlephase {

using nlohmann::json;

void QuadConfig::validate() const {
  if (!(relTol > 0.0 && relTol <= 1e-4)) throw PreconditionError("quadrature relTol must lie in (0, 1e-4]");
  if (maxDepth < 1 || maxDepth > 60) throw PreconditionError("quadrature maxDepth must lie in [1, 60]");
  switch (panelOrder) {
    case 15: case 21: case 31: case 41: case 51: case 61:
      break;
    default:
      throw PreconditionError("quadrature panelOrder must be one of 15, 21, 31, 41, 51, 61");
  }
}

int FunctionalSpec::output_dim() const {
  const int perFn = mode == PsiMode::Complex ? 2 : 1;
  return perFn * static_cast<int>(linear.size()) + static_cast<int>(oddTerms.size());
}

void FunctionalSpec::validate() const {
  for (const OddTerm& term : oddTerms) {
    if (term.exponent <= 0 || term.exponent % 2 == 0) {
      throw InputError("odd-term exponents must be odd positive integers");
    }
    if (!std::isfinite(term.weight)) throw InputError("odd-term weight must be finite");
  }
  if (output_dim() < 1) throw InputError("functional spec has no components");
}

double FunctionalSpec::scale() const {
  double s = 1.0;
  for (const PiecewiseFn& f : linear) s += l1_norm(f);
  for (const OddTerm& term : oddTerms) s += l1_norm(term.base);
  return s;
}

FunctionalSpec complex_spec(const Problem& problem) {
  return FunctionalSpec{problem.functions, PsiMode::Complex, {}};
}

FunctionalSpec real_part_spec(const Problem& problem) {
  return FunctionalSpec{problem.functions, PsiMode::RealPart, {}};
}

namespace {

struct Panel {
  Complex kronrod;
  double error;
};

template <unsigned N>
Panel kronrod_panel(const std::function<Complex(double)>& f, double a, double b) {
  using GK = boost::math::quadrature::gauss_kronrod<double, N>;
  using G = boost::math::quadrature::gauss<double, (N - 1) / 2>;
  const auto& xk = GK::abscissa();
  const auto& wk = GK::weights();
  const auto& wg = G::weights();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);

  // Same node bookkeeping as Boost's gauss_kronrod: Gauss nodes sit at every
  // other Kronrod abscissa, starting at 0 when the Gauss order is odd.
  const unsigned gaussOrder = (N - 1) / 2;
  Complex k = 0.0;
  Complex g = 0.0;
  unsigned gaussStart = 2;
  unsigned kronrodStart = 1;
  const Complex f0 = f(mid);
  k = f0 * wk[0];
  if (gaussOrder & 1) {
    g = f0 * wg[0];
  } else {
    gaussStart = 1;
    kronrodStart = 2;
  }
  for (unsigned i = gaussStart; i < xk.size(); i += 2) {
    const Complex s = f(mid + half * xk[i]) + f(mid - half * xk[i]);
    k += s * wk[i];
    g += s * wg[i / 2];
  }
  for (unsigned i = kronrodStart; i < xk.size(); i += 2) {
    k += (f(mid + half * xk[i]) + f(mid - half * xk[i])) * wk[i];
  }
  return {k * half, std::abs(k - g) * half};
}

Panel panel(const std::function<Complex(double)>& f, double a, double b, int order) {
  switch (order) {
    case 15: return kronrod_panel<15>(f, a, b);
    case 21: return kronrod_panel<21>(f, a, b);
    case 31: return kronrod_panel<31>(f, a, b);
    case 41: return kronrod_panel<41>(f, a, b);
    case 51: return kronrod_panel<51>(f, a, b);
    default: return kronrod_panel<61>(f, a, b);
  }
}

Complex bisect(const std::function<Complex(double)>& f, double a, double b, double absTol, int depth,
               const QuadConfig& cfg, bool& exhausted) {
  const Panel p = panel(f, a, b, cfg.panelOrder);
  if (p.error <= absTol * (b - a)) return p.kronrod;
  if (depth >= cfg.maxDepth) {
    exhausted = true;
    return p.kronrod;
  }
  const double m = 0.5 * (a + b);
  if (!(m > a && m < b)) return p.kronrod;
  return bisect(f, a, m, absTol, depth + 1, cfg, exhausted) + bisect(f, m, b, absTol, depth + 1, cfg, exhausted);
}

std::vector<double> sorted_breaks(std::vector<double> breaks) {
  breaks.push_back(0.0);
  breaks.push_back(1.0);
  for (double& b : breaks) b = std::clamp(b, 0.0, 1.0);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  return breaks;
}

void add_window_edges(const PhaseTree& tree, std::vector<double>& breaks) {
  for (const TransitionWindow& w : transition_windows(tree)) {
    breaks.push_back(w.center - w.halfWidth);
    if (w.halfWidth > 0.0) breaks.push_back(w.center + w.halfWidth);
  }
}

bool inside_any_window(const std::vector<TransitionWindow>& windows, double x) {
  for (const TransitionWindow& w : windows) {
    if (w.halfWidth > 0.0 && std::abs(x - w.center) < w.halfWidth) return true;
  }
  return false;
}

}  // namespace

Complex integrate_adaptive(const std::function<Complex(double)>& integrand, std::vector<double> breaks,
                           double absTol, const QuadConfig& cfg) {
  const std::vector<double> cells = sorted_breaks(std::move(breaks));
  bool exhausted = false;
  Complex total = 0.0;
  for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
    total += bisect(integrand, cells[i], cells[i + 1], absTol, 0, cfg, exhausted);
  }
  if (exhausted) {
    throw AccuracyError("adaptive quadrature exceeded its maximum depth", total.real(), total.imag());
  }
  return total;
}

Complex integrate(const PiecewiseFn& f, const PhaseTree& tree, const QuadConfig& cfg) {
  cfg.validate();
  const double absTol = cfg.relTol * (1.0 + l1_norm(f));
  const auto windows = transition_windows(tree);
  std::vector<double> breaks(f.breakpoints().begin(), f.breakpoints().end());
  add_window_edges(tree, breaks);
  const std::vector<double> cells = sorted_breaks(std::move(breaks));

  const std::function<Complex(double)> integrand = [&](double x) { return f(x) * eval_h(tree, x); };
  bool exhausted = false;
  Complex total = 0.0;
  for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
    const double a = cells[i];
    const double b = cells[i + 1];
    const double mid = 0.5 * (a + b);
    if (!tree.is_smooth() || !inside_any_window(windows, mid)) {
      // g is constant on the cell, so the integral is exact.
      total += eval_h(tree, mid) * f.integral(a, b);
    } else {
      total += bisect(integrand, a, b, absTol, 0, cfg, exhausted);
    }
  }
  if (exhausted) {
    throw AccuracyError("adaptive quadrature exceeded its maximum depth", total.real(), total.imag());
  }
  return total;
}

std::vector<double> psi_eval(const FunctionalSpec& spec, const PhaseTree& tree, const QuadConfig& cfg) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(spec.output_dim()));
  for (const PiecewiseFn& f : spec.linear) {
    const Complex v = integrate(f, tree, cfg);
    out.push_back(v.real());
    if (spec.mode == PsiMode::Complex) out.push_back(v.imag());
  }
  for (const OddTerm& term : spec.oddTerms) {
    const double re = integrate(term.base, tree, cfg).real();
    out.push_back(term.weight * std::pow(re, term.exponent));
  }
  return out;
}

LipschitzSides lipschitz_sides(const FunctionalSpec& spec, const PhaseTree& treeA, const PhaseTree& treeB,
                               const QuadConfig& cfg) {
  if (!spec.oddTerms.empty()) throw PreconditionError("Lipschitz check applies to linear specs only");
  cfg.validate();
  LipschitzSides sides{{}, {}, true};
  for (const PiecewiseFn& f : spec.linear) {
    const Complex diff = integrate(f, treeB, cfg) - integrate(f, treeA, cfg);
    const double lhs = spec.mode == PsiMode::Complex ? std::abs(diff) : std::abs(diff.real());

    std::vector<double> breaks(f.breakpoints().begin(), f.breakpoints().end());
    add_window_edges(treeA, breaks);
    add_window_edges(treeB, breaks);
    if (f.kind() == FnKind::LinearSamples) {
      // |f| has a kink where a real-valued linear piece crosses zero.
      const auto bps = f.breakpoints();
      const auto vals = f.values();
      for (std::size_t c = 0; c + 1 < bps.size(); ++c) {
        const double v0 = vals[c].real();
        const double v1 = vals[c + 1].real();
        if (vals[c].imag() == 0.0 && vals[c + 1].imag() == 0.0 && v0 * v1 < 0.0) {
          breaks.push_back(bps[c] + (bps[c + 1] - bps[c]) * v0 / (v0 - v1));
        }
      }
    }
    const std::function<Complex(double)> integrand = [&](double x) {
      return Complex(std::abs(f(x)) * std::abs(eval_h(treeB, x) - eval_h(treeA, x)), 0.0);
    };
    const double rhs =
        integrate_adaptive(integrand, std::move(breaks), cfg.relTol * (1.0 + l1_norm(f)), cfg).real();
    sides.lhs.push_back(lhs);
    sides.rhs.push_back(rhs);
    if (lhs > rhs + 1e-9) sides.holds = false;
  }
  return sides;
}

bool lipschitz_check(const FunctionalSpec& spec, const PhaseTree& treeA, const PhaseTree& treeB,
                     const QuadConfig& cfg) {
  return lipschitz_sides(spec, treeA, treeB, cfg).holds;
}

json spec_to_json(const FunctionalSpec& spec) {
  json linear = json::array();
  for (const PiecewiseFn& f : spec.linear) linear.push_back(fn_to_json(f));
  json odd = json::array();
  for (const OddTerm& term : spec.oddTerms) {
    odd.push_back({{"base", fn_to_json(term.base)}, {"exponent", term.exponent}, {"weight", term.weight}});
  }
  return json{{"schema", 1},
              {"linear", std::move(linear)},
              {"mode", spec.mode == PsiMode::Complex ? "complex" : "real-part"},
              {"odd_terms", std::move(odd)}};
}

FunctionalSpec spec_from_json(const json& j) {
  check_schema(j);
  FunctionalSpec spec;
  try {
    if (j.contains("linear")) {
      for (const json& f : j.at("linear")) spec.linear.push_back(fn_from_json(f));
    }
    const std::string mode = j.value("mode", std::string("complex"));
    if (mode == "complex") {
      spec.mode = PsiMode::Complex;
    } else if (mode == "real-part") {
      spec.mode = PsiMode::RealPart;
    } else {
      throw InputError("unknown functional mode '" + mode + "'");
    }
    if (j.contains("odd_terms")) {
      for (const json& t : j.at("odd_terms")) {
        spec.oddTerms.push_back(
            OddTerm{fn_from_json(t.at("base")), t.at("exponent").get<int>(), t.value("weight", 1.0)});
      }
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed functional spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

FunctionalSpec parse_functional_spec(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed functional spec: ") + e.what());
  }
  return spec_from_json(j);
}

std::string serialize_functional_spec(const FunctionalSpec& spec) { return spec_to_json(spec).dump(); }

}  // namespace circlephase
