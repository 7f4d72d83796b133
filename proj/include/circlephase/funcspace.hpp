#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace circlephase {

using Complex = std::complex<double>;

enum class FnKind { ConstantCells, LinearSamples };

/// A complex-valued function on [0,1], either constant on each cell or
/// continuous piecewise-linear through the breakpoint samples.
class PiecewiseFn {
 public:
  /// Throws InputError unless breakpoints run strictly from 0 to 1 and the
  /// number of values matches the kind.
  PiecewiseFn(FnKind kind, std::vector<double> breakpoints, std::vector<Complex> values);

  static PiecewiseFn constant(Complex value);
  /// Constant `value` on [lo, hi), zero elsewhere.
  static PiecewiseFn indicator(double lo, double hi, Complex value = 1.0);

  FnKind kind() const { return kind_; }
  std::span<const double> breakpoints() const { return breakpoints_; }
  std::span<const Complex> values() const { return values_; }
  std::size_t cell_count() const { return breakpoints_.size() - 1; }

  Complex operator()(double x) const;

  /// Exact integral of f over [a, b] ⊆ [0, 1].
  Complex integral(double a, double b) const;
  /// Exact integral of |f| over [a, b] ⊆ [0, 1].
  double abs_integral(double a, double b) const;

  double sup_norm() const;
  bool is_real() const;

  bool operator==(const PiecewiseFn&) const = default;

 private:
  std::size_t cell_of(double x) const;
  Complex cell_value(std::size_t cell, double x) const;

  FnKind kind_;
  std::vector<double> breakpoints_;
  std::vector<Complex> values_;
};

double l1_norm(const PiecewiseFn& f);

/// ∫₀¹ |p + (q − p)s| ds in closed form.
double abs_linear_segment_mean(Complex p, Complex q);

struct Interval {
  double lo;
  double hi;
};

struct Problem {
  std::vector<PiecewiseFn> functions;
  bool real_valued = false;

  /// Throws InputError on an empty function list or a real_valued flag that
  /// disagrees with the data.
  void validate() const;
  std::size_t size() const { return functions.size(); }
};

Problem make_problem(std::vector<PiecewiseFn> functions);

/// Measure with density Σ_j |f_j| of a union of disjoint intervals.
double mu_f(const Problem& problem, std::span<const Interval> intervals);

nlohmann::json fn_to_json(const PiecewiseFn& f);
PiecewiseFn fn_from_json(const nlohmann::json& j);

nlohmann::json problem_to_json(const Problem& problem);
Problem problem_from_json(const nlohmann::json& j);

Problem parse_problem(std::string_view text);
std::string serialize_problem(const Problem& problem);

/// Checks an optional "schema" field; throws InputError on unknown versions.
void check_schema(const nlohmann::json& j);

}  // namespace circlephase
