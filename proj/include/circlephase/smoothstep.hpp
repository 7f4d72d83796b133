#pragma once

#include <vector>

namespace circlephase {

/// Smooth nondecreasing transition τ: ℝ → [0,1], the normalized cumulative
/// integral of the bump b(s) = exp(−1/(1−s²)) on (−1, 1).
///
/// τ(x) = 0 for x ≤ −1 and τ(x) = 1 for x ≥ 1. Values are served from a
/// cumulative table with cubic Hermite interpolation (exact derivatives,
/// Fritsch–Carlson limited), evaluated on the left half and mirrored so that
/// τ(x) + τ(−x) = 1 holds to rounding.
class SmoothStep {
 public:
  explicit SmoothStep(int tableResolution = 4096);

  /// Process-wide instance at the default resolution.
  static const SmoothStep& standard();

  static double bump(double s);

  double operator()(double x) const;
  double derivative(double x) const;

  double normalization() const { return normalization_; }
  int resolution() const { return resolution_; }

 private:
  double left_half(double x) const;

  int resolution_;
  double step_;
  double normalization_;
  // Nodes x_i = −1 + i·step_ for i = 0..resolution_/2; normalized.
  std::vector<double> cumulative_;
  std::vector<double> slope_;
};

double tau(const SmoothStep& step, double x);
double tau_prime(const SmoothStep& step, double x);

}  // namespace circlephase
