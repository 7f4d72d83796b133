#include "circlephase/smoothstep.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

#include "circlephase/errors.hpp"

namespace circlephase {

SmoothStep::SmoothStep(int tableResolution) : resolution_(tableResolution) {
  if (tableResolution < 8 || tableResolution % 2 != 0) {
    throw PreconditionError("smooth step table resolution must be an even integer >= 8");
  }
  step_ = 2.0 / resolution_;
  const int half = resolution_ / 2;
  cumulative_.assign(half + 1, 0.0);
  slope_.assign(half + 1, 0.0);

  using boost::math::quadrature::gauss;
  double acc = 0.0;
  for (int i = 1; i <= half; ++i) {
    const double a = -1.0 + (i - 1) * step_;
    const double b = -1.0 + i * step_;
    acc += gauss<double, 20>::integrate(bump, a, b);
    cumulative_[i] = acc;
  }
  // Even bump: the full mass is twice the left half, so τ(0) = 1/2 exactly.
  normalization_ = 2.0 * acc;
  for (int i = 0; i <= half; ++i) {
    cumulative_[i] /= normalization_;
    slope_[i] = bump(-1.0 + i * step_) / normalization_;
  }
  for (int i = 0; i < half; ++i) {
    const double secant = (cumulative_[i + 1] - cumulative_[i]) / step_;
    if (secant <= 0.0) {
      slope_[i] = slope_[i + 1] = 0.0;
      continue;
    }
    const double alpha = slope_[i] / secant;
    const double beta = slope_[i + 1] / secant;
    const double r = alpha * alpha + beta * beta;
    if (r > 9.0) {
      const double scale = 3.0 / std::sqrt(r);
      slope_[i] = scale * alpha * secant;
      slope_[i + 1] = scale * beta * secant;
    }
  }
}

const SmoothStep& SmoothStep::standard() {
  static const SmoothStep instance;
  return instance;
}

double SmoothStep::bump(double s) {
  if (s <= -1.0 || s >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - s * s));
}

double SmoothStep::left_half(double x) const {
  // x in [−1, 0]
  const int half = resolution_ / 2;
  int i = static_cast<int>((x + 1.0) / step_);
  if (i >= half) i = half - 1;
  if (i < 0) i = 0;
  const double s = (x - (-1.0 + i * step_)) / step_;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * cumulative_[i] + h10 * step_ * slope_[i] + h01 * cumulative_[i + 1] +
         h11 * step_ * slope_[i + 1];
}

double SmoothStep::operator()(double x) const {
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (x <= 0.0) return left_half(x);
  return 1.0 - left_half(-x);
}

double SmoothStep::derivative(double x) const {
  if (x <= -1.0 || x >= 1.0) return 0.0;
  return bump(x) / normalization_;
}

double tau(const SmoothStep& step, double x) { return step(x); }
double tau_prime(const SmoothStep& step, double x) { return step.derivative(x); }

}  // namespace circlephase
