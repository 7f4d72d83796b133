#include "circlephase/funcspace.hpp"

#include <algorithm>
#include <cmath>

#include "circlephase/errors.hpp"

namespace circlephase {

using nlohmann::json;

PiecewiseFn::PiecewiseFn(FnKind kind, std::vector<double> breakpoints, std::vector<Complex> values)
    : kind_(kind), breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (breakpoints_.size() < 2) {
    throw InputError("piecewise function needs at least two breakpoints");
  }
  if (breakpoints_.front() != 0.0 || breakpoints_.back() != 1.0) {
    throw InputError("breakpoints must start at 0 and end at 1");
  }
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i] > breakpoints_[i - 1])) {
      throw InputError("breakpoints must be strictly increasing (index " + std::to_string(i) + ")");
    }
  }
  const std::size_t expected =
      kind_ == FnKind::ConstantCells ? breakpoints_.size() - 1 : breakpoints_.size();
  if (values_.size() != expected) {
    throw InputError("expected " + std::to_string(expected) + " values, got " +
                     std::to_string(values_.size()));
  }
  for (const Complex& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw InputError("function values must be finite");
    }
  }
}

PiecewiseFn PiecewiseFn::constant(Complex value) {
  return PiecewiseFn(FnKind::ConstantCells, {0.0, 1.0}, {value});
}

PiecewiseFn PiecewiseFn::indicator(double lo, double hi, Complex value) {
  if (!(0.0 <= lo && lo < hi && hi <= 1.0)) {
    throw InputError("indicator interval must satisfy 0 <= lo < hi <= 1");
  }
  std::vector<double> bps{0.0};
  std::vector<Complex> vals;
  if (lo > 0.0) {
    bps.push_back(lo);
    vals.push_back(0.0);
  }
  bps.push_back(hi);
  vals.push_back(value);
  if (hi < 1.0) {
    bps.push_back(1.0);
    vals.push_back(0.0);
  }
  return PiecewiseFn(FnKind::ConstantCells, std::move(bps), std::move(vals));
}

std::size_t PiecewiseFn::cell_of(double x) const {
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  std::size_t idx = static_cast<std::size_t>(it - breakpoints_.begin());
  if (idx == 0) return 0;
  return std::min(idx - 1, cell_count() - 1);
}

Complex PiecewiseFn::cell_value(std::size_t cell, double x) const {
  if (kind_ == FnKind::ConstantCells) return values_[cell];
  const double a = breakpoints_[cell];
  const double b = breakpoints_[cell + 1];
  const double s = (x - a) / (b - a);
  return values_[cell] + (values_[cell + 1] - values_[cell]) * s;
}

Complex PiecewiseFn::operator()(double x) const { return cell_value(cell_of(x), x); }

Complex PiecewiseFn::integral(double a, double b) const {
  Complex total = 0.0;
  for (std::size_t c = 0; c < cell_count(); ++c) {
    const double lo = std::max(a, breakpoints_[c]);
    const double hi = std::min(b, breakpoints_[c + 1]);
    if (hi <= lo) continue;
    if (kind_ == FnKind::ConstantCells) {
      total += values_[c] * (hi - lo);
    } else {
      total += (cell_value(c, lo) + cell_value(c, hi)) * (0.5 * (hi - lo));
    }
  }
  return total;
}

double abs_linear_segment_mean(Complex p, Complex q) {
  const Complex d = q - p;
  const double A = std::norm(d);
  const double C = std::norm(p);
  if (A <= 1e-30 * std::max(C, 1e-300)) return 0.5 * (std::abs(p) + std::abs(q));
  // |p + d s|² = A (s + u0)² + A k
  const double u0 = (std::conj(p) * d).real() / A;
  const double cross = (std::conj(p) * d).imag() / A;
  const double k = cross * cross;
  auto antiderivative = [k](double u) {
    if (k == 0.0) return 0.5 * u * std::abs(u);
    return 0.5 * (u * std::sqrt(u * u + k) + k * std::asinh(u / std::sqrt(k)));
  };
  return std::sqrt(A) * (antiderivative(1.0 + u0) - antiderivative(u0));
}

double PiecewiseFn::abs_integral(double a, double b) const {
  double total = 0.0;
  for (std::size_t c = 0; c < cell_count(); ++c) {
    const double lo = std::max(a, breakpoints_[c]);
    const double hi = std::min(b, breakpoints_[c + 1]);
    if (hi <= lo) continue;
    if (kind_ == FnKind::ConstantCells) {
      total += std::abs(values_[c]) * (hi - lo);
    } else {
      total += (hi - lo) * abs_linear_segment_mean(cell_value(c, lo), cell_value(c, hi));
    }
  }
  return total;
}

double PiecewiseFn::sup_norm() const {
  double m = 0.0;
  for (const Complex& v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool PiecewiseFn::is_real() const {
  return std::all_of(values_.begin(), values_.end(), [](const Complex& v) { return v.imag() == 0.0; });
}

double l1_norm(const PiecewiseFn& f) { return f.abs_integral(0.0, 1.0); }

void Problem::validate() const {
  if (functions.empty()) throw InputError("problem has no functions");
  const bool all_real =
      std::all_of(functions.begin(), functions.end(), [](const PiecewiseFn& f) { return f.is_real(); });
  if (real_valued && !all_real) {
    throw InputError("real_valued is set but some function has a nonzero imaginary part");
  }
}

Problem make_problem(std::vector<PiecewiseFn> functions) {
  Problem p;
  p.real_valued = std::all_of(functions.begin(), functions.end(),
                              [](const PiecewiseFn& f) { return f.is_real(); });
  p.functions = std::move(functions);
  p.validate();
  return p;
}

double mu_f(const Problem& problem, std::span<const Interval> intervals) {
  std::vector<Interval> sorted(intervals.begin(), intervals.end());
  for (const Interval& iv : sorted) {
    if (!(0.0 <= iv.lo && iv.lo <= iv.hi && iv.hi <= 1.0)) {
      throw InputError("intervals must lie within [0, 1]");
    }
  }
  std::sort(sorted.begin(), sorted.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].lo < sorted[i - 1].hi) throw InputError("intervals overlap");
  }
  double total = 0.0;
  for (const PiecewiseFn& f : problem.functions) {
    for (const Interval& iv : sorted) total += f.abs_integral(iv.lo, iv.hi);
  }
  return total;
}

void check_schema(const json& j) {
  if (!j.is_object()) throw InputError("document must be a JSON object");
  if (j.contains("schema")) {
    if (!j["schema"].is_number_integer() || j["schema"].get<int>() != 1) {
      throw InputError("unsupported schema version");
    }
  }
}

json fn_to_json(const PiecewiseFn& f) {
  json values = json::array();
  for (const Complex& v : f.values()) values.push_back({v.real(), v.imag()});
  return json{{"kind", f.kind() == FnKind::ConstantCells ? "constant-cells" : "linear-samples"},
              {"breakpoints", std::vector<double>(f.breakpoints().begin(), f.breakpoints().end())},
              {"values", std::move(values)}};
}

PiecewiseFn fn_from_json(const json& j) {
  try {
    if (!j.is_object()) throw InputError("function entry must be an object");
    const std::string kind = j.at("kind").get<std::string>();
    FnKind k;
    if (kind == "constant-cells") {
      k = FnKind::ConstantCells;
    } else if (kind == "linear-samples") {
      k = FnKind::LinearSamples;
    } else {
      throw InputError("unknown function kind '" + kind + "'");
    }
    auto bps = j.at("breakpoints").get<std::vector<double>>();
    std::vector<Complex> vals;
    for (const json& v : j.at("values")) {
      if (v.is_number()) {
        vals.emplace_back(v.get<double>(), 0.0);
      } else if (v.is_array() && v.size() == 2) {
        vals.emplace_back(v[0].get<double>(), v[1].get<double>());
      } else {
        throw InputError("function value must be a number or a [re, im] pair");
      }
    }
    return PiecewiseFn(k, std::move(bps), std::move(vals));
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed function entry: ") + e.what());
  }
}

json problem_to_json(const Problem& problem) {
  json fns = json::array();
  for (const PiecewiseFn& f : problem.functions) fns.push_back(fn_to_json(f));
  return json{{"schema", 1}, {"functions", std::move(fns)}, {"real_valued", problem.real_valued}};
}

Problem problem_from_json(const json& j) {
  check_schema(j);
  if (!j.contains("functions") || !j["functions"].is_array()) {
    throw InputError("problem document needs a \"functions\" array");
  }
  Problem p;
  for (const json& f : j["functions"]) p.functions.push_back(fn_from_json(f));
  if (p.functions.empty()) throw InputError("problem has no functions");
  const bool all_real = std::all_of(p.functions.begin(), p.functions.end(),
                                    [](const PiecewiseFn& f) { return f.is_real(); });
  if (j.contains("real_valued")) {
    if (!j["real_valued"].is_boolean()) throw InputError("real_valued must be a boolean");
    p.real_valued = j["real_valued"].get<bool>();
  } else {
    p.real_valued = all_real;
  }
  p.validate();
  return p;
}

Problem parse_problem(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed problem document: ") + e.what());
  }
  return problem_from_json(j);
}

std::string serialize_problem(const Problem& problem) { return problem_to_json(problem).dump(); }

}  // namespace circlephase
