#include "circlephase/construct.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "circlephase/errors.hpp"

namespace circlephase {

namespace {

int base_dimension(ConstructionMode mode) { return mode == ConstructionMode::Improved ? 1 : 0; }

PhaseTree base_case(const ConstructionConfig& cfg, const SpherePoint& x) {
  switch (cfg.mode) {
    case ConstructionMode::Standard:
      return PhaseTree::constant(x[0] > 0.0 ? 0.0 : std::numbers::pi);
    case ConstructionMode::HobbyRice:
      return PhaseTree::integer(x[0] > 0.0 ? 0 : 1);
    case ConstructionMode::Improved: {
      double theta = std::atan2(x[1], x[0]);
      if (theta < 0.0) theta += 2.0 * std::numbers::pi;
      if (theta >= 2.0 * std::numbers::pi) theta = 0.0;
      return PhaseTree::constant(theta);
    }
  }
  throw PreconditionError("unknown construction mode");
}

PhaseTree alpha_rec(const ConstructionConfig& cfg, const SpherePoint& x);

PhaseTree alpha_tilde_rec(const ConstructionConfig& cfg, const BallPoint& b) {
  const auto params = hemi_params(b);
  if (!params) {
    // On the boundary sphere the extension is α itself.
    return alpha_rec(cfg, SpherePoint::normalized(std::vector<double>(b.coords().begin(), b.coords().end())));
  }
  const BlendWidth bw = blend_width(*params, cfg.widthCap);
  switch (bw.signal) {
    case BlendWidth::Signal::AtUpper:
      return alpha_rec(cfg, params->u);
    case BlendWidth::Signal::AtLower:
      return alpha_rec(cfg, params->l);
    case BlendWidth::Signal::Interior:
      break;
  }
  PhaseTree lo = alpha_rec(cfg, params->u);
  PhaseTree hi = alpha_rec(cfg, params->l);
  if (cfg.mode == ConstructionMode::HobbyRice) {
    return PhaseTree::switch_unchecked(std::move(lo), std::move(hi), params->t);
  }
  return PhaseTree::blend_unchecked(std::move(lo), std::move(hi), params->t, bw.w);
}

PhaseTree alpha_rec(const ConstructionConfig& cfg, const SpherePoint& x) {
  if (x.dim() == base_dimension(cfg.mode)) return base_case(cfg, x);
  const bool positive = is_positive(x);
  const SpherePoint& rep = positive ? x : -x;
  // Projection of the closed upper hemisphere onto the first k coordinates.
  BallPoint projected(std::vector<double>(rep.coords().begin(), rep.coords().end() - 1));
  PhaseTree tree = alpha_tilde_rec(cfg, projected);
  return positive ? tree : shift(tree, 1);
}

}  // namespace

EquivariantMap::EquivariantMap(int dimension, ConstructionConfig config)
    : dimension_(dimension), config_(config) {
  if (!(config_.widthCap > 0.0 && config_.widthCap <= 1.0)) {
    throw PreconditionError("width cap must lie in (0, 1]");
  }
  if (dimension_ < base_dimension(config_.mode)) {
    throw PreconditionError("sphere dimension " + std::to_string(dimension_) + " is below the base case");
  }
}

PhaseTree alpha(const EquivariantMap& map, const SpherePoint& x) {
  if (x.dim() > map.dimension()) throw PreconditionError("sphere point exceeds the map dimension");
  if (x.dim() < base_dimension(map.config().mode)) {
    throw PreconditionError("sphere point is below the base dimension of this mode");
  }
  return alpha_rec(map.config(), x);
}

PhaseTree alpha_tilde(const EquivariantMap& map, const BallPoint& x) {
  const int k = static_cast<int>(x.size()) - 1;
  if (k + 1 > map.dimension()) throw PreconditionError("ball point exceeds the map dimension");
  if (k < base_dimension(map.config().mode)) {
    throw PreconditionError("ball point is below the base dimension of this mode");
  }
  return alpha_tilde_rec(map.config(), x);
}

std::vector<std::complex<double>> beta_eval(const EquivariantMap& map, const SpherePoint& x,
                                            std::span<const double> samples) {
  const PhaseTree tree = alpha(map, x);
  std::vector<std::complex<double>> out;
  out.reserve(samples.size());
  for (double s : samples) {
    if (!(s >= 0.0 && s <= 1.0)) throw PreconditionError("sample points must lie in [0, 1]");
    out.push_back(eval_h(tree, s));
  }
  return out;
}

PhaseTree pinkus_partition(const SpherePoint& x) {
  // Cell boundaries where the sign flips; zero-width cells carry no sign.
  std::int64_t start = -1;
  std::vector<double> flips;
  double position = 0.0;
  int lastSign = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double width = x[i] * x[i];
    if (width == 0.0) continue;
    const int sign = x[i] > 0.0 ? 1 : -1;
    if (lastSign == 0) {
      start = sign > 0 ? 0 : 1;
    } else if (sign != lastSign && position < 1.0) {
      flips.push_back(position);
    }
    lastSign = sign;
    position += width;
  }
  if (start < 0) throw DegeneratePointError("pinkus partition of a zero vector");
  PhaseTree tree = PhaseTree::integer(start);
  for (std::size_t i = 0; i < flips.size(); ++i) {
    tree = PhaseTree::switch_unchecked(tree, PhaseTree::integer(start + static_cast<std::int64_t>(i) + 1),
                                       1.0 - flips[i]);
  }
  return tree;
}

RangeBound range_bound(const EquivariantMap& map, const SpherePoint& x) {
  const PhaseTree tree = alpha(map, x);
  return {tree(0.0), tree(1.0)};
}

}  // namespace circlephase
