#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace circlephase {

/// Coordinates below this magnitude count as zero for positivity.
inline constexpr double kPositivityThreshold = 1e-12;

/// Unit vector in ℝ^{k+1}, a point of S^k.
class SpherePoint {
 public:
  /// Throws PreconditionError unless | ‖coords‖₂ − 1 | ≤ 1e−12.
  explicit SpherePoint(std::vector<double> coords);
  /// Rescales to unit length; throws DegeneratePointError for the zero vector.
  static SpherePoint normalized(std::vector<double> coords);

  int dim() const { return static_cast<int>(coords_.size()) - 1; }
  std::size_t size() const { return coords_.size(); }
  std::span<const double> coords() const { return coords_; }
  double operator[](std::size_t i) const { return coords_[i]; }

  SpherePoint operator-() const;
  bool operator==(const SpherePoint&) const = default;

 private:
  struct Trusted {};
  SpherePoint(std::vector<double> coords, Trusted) : coords_(std::move(coords)) {}

  std::vector<double> coords_;
};

/// Point of the closed ball B^{k+1}.
class BallPoint {
 public:
  /// Throws PreconditionError unless ‖coords‖₂ ≤ 1 + 1e−12.
  explicit BallPoint(std::vector<double> coords);

  std::size_t size() const { return coords_.size(); }
  std::span<const double> coords() const { return coords_; }
  double operator[](std::size_t i) const { return coords_[i]; }

 private:
  std::vector<double> coords_;
};

double norm2(std::span<const double> v);
double geodesic_distance(const SpherePoint& a, const SpherePoint& b);

/// Last coordinate exceeding the threshold in magnitude is positive.
/// Throws DegeneratePointError if there is none.
bool is_positive(const SpherePoint& x);
bool is_positive(std::span<const double> coords);

/// Negates the last coordinate.
SpherePoint mirror(const SpherePoint& x);

/// Hemisphere data of a ball point x ∈ B^{k+1} with respect to S^k.
struct HemiParams {
  SpherePoint u;  // upper-hemisphere point sharing x's first k coordinates
  SpherePoint l;  // lower-hemisphere point, mirror of u
  double t;       // d(u, x) / d(u, l)
  double dE;      // distance from x to the equator {y ∈ S^k : y_{k+1} = 0}
};

/// Returns nullopt when x lies on the boundary sphere (‖x‖ = 1 within
/// 1e−12), where the extension coincides with the map on S^k itself.
std::optional<HemiParams> hemi_params(const BallPoint& x);

struct BlendWidth {
  enum class Signal { Interior, AtUpper, AtLower };
  Signal signal;
  double w;  // meaningful for Interior only
};

/// min(dE, t, 1 − t, cap), or a boundary signal when t ∈ {0, 1} within 1e−12.
BlendWidth blend_width(const HemiParams& params, double cap);

/// Antipodally symmetric triangulation of S^m by iterated edge-midpoint
/// subdivision of the cross-polytope boundary.
struct SymmetricTriangulation {
  int dimension = 0;
  int level = 0;
  std::vector<SpherePoint> vertices;
  std::vector<int> antipode;  // antipode[v] is the vertex at −vertices[v]
  std::vector<int> simplices; // flat, stride dimension + 1

  std::size_t simplex_count() const { return simplices.size() / static_cast<std::size_t>(dimension + 1); }
  std::span<const int> simplex(std::size_t i) const {
    const std::size_t stride = static_cast<std::size_t>(dimension + 1);
    return std::span<const int>(simplices).subspan(i * stride, stride);
  }
};

inline constexpr std::size_t kDefaultSimplexBudget = std::size_t{1} << 22;

/// Throws PreconditionError for m < 1 or level ∉ [0, 12], BudgetError when
/// the simplex count would exceed `maxSimplices`.
SymmetricTriangulation triangulate(int m, int level, std::size_t maxSimplices = kDefaultSimplexBudget);

/// Simplex count triangulate(m, level) would produce, saturating at SIZE_MAX.
std::size_t triangulation_size(int m, int level);

}  // namespace circlephase
