#include "circlephase/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <utility>

#include "circlephase/errors.hpp"

namespace circlephase {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

SpherePoint::SpherePoint(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw PreconditionError("sphere point needs at least one coordinate");
  if (std::abs(norm2(coords_) - 1.0) > 1e-12) throw PreconditionError("sphere point must have unit norm");
}

SpherePoint SpherePoint::normalized(std::vector<double> coords) {
  const double n = norm2(coords);
  if (!(n > 0.0) || !std::isfinite(n)) throw DegeneratePointError("cannot normalize a zero vector");
  for (double& c : coords) c /= n;
  return SpherePoint(std::move(coords), Trusted{});
}

SpherePoint SpherePoint::operator-() const {
  std::vector<double> neg(coords_);
  for (double& c : neg) c = -c;
  return SpherePoint(std::move(neg), Trusted{});
}

BallPoint::BallPoint(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw PreconditionError("ball point needs at least one coordinate");
  if (norm2(coords_) > 1.0 + 1e-12) throw PreconditionError("ball point lies outside the unit ball");
}

double geodesic_distance(const SpherePoint& a, const SpherePoint& b) {
  // atan2 form stays accurate for nearly equal and nearly antipodal points.
  double dot = 0.0;
  double cross2 = 0.0;
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = b[i] - dot * a[i];
  cross2 = norm2(diff);
  return std::atan2(cross2, dot);
}

bool is_positive(std::span<const double> coords) {
  for (std::size_t i = coords.size(); i-- > 0;) {
    if (std::abs(coords[i]) > kPositivityThreshold) return coords[i] > 0.0;
  }
  throw DegeneratePointError("all coordinates vanish within the positivity threshold");
}

bool is_positive(const SpherePoint& x) { return is_positive(x.coords()); }

SpherePoint mirror(const SpherePoint& x) {
  std::vector<double> c(x.coords().begin(), x.coords().end());
  c.back() = -c.back();
  return SpherePoint(std::move(c));
}

std::optional<HemiParams> hemi_params(const BallPoint& x) {
  const std::size_t n = x.size();
  if (norm2(x.coords()) >= 1.0 - 1e-12) return std::nullopt;
  std::vector<double> horiz(x.coords().begin(), x.coords().end() - 1);
  const double hn = norm2(horiz);
  const double z = x.coords()[n - 1];
  const double s = std::sqrt(std::max(0.0, (1.0 - hn) * (1.0 + hn)));

  std::vector<double> up(horiz);
  up.push_back(s);
  std::vector<double> down(horiz);
  down.push_back(-s);

  const double t = (s - z) / (2.0 * s);
  double dE;
  if (n == 1) {
    dE = std::numeric_limits<double>::infinity();  // S^0 has an empty equator
  } else if (hn > 0.0) {
    dE = std::hypot(1.0 - hn, z);
  } else {
    dE = std::sqrt(1.0 + z * z);
  }
  return HemiParams{SpherePoint(std::move(up)), SpherePoint(std::move(down)), t, dE};
}

BlendWidth blend_width(const HemiParams& params, double cap) {
  if (params.t <= 1e-12) return {BlendWidth::Signal::AtUpper, 0.0};
  if (params.t >= 1.0 - 1e-12) return {BlendWidth::Signal::AtLower, 0.0};
  const double w = std::min({params.dE, params.t, 1.0 - params.t, cap});
  return {BlendWidth::Signal::Interior, w};
}

namespace {

/// Children of the edgewise (Freudenthal) subdivision of a d-simplex into
/// 2^d pieces. Each child vertex is a pair (i, j), i ≤ j: vertex i when
/// i == j, otherwise the midpoint of edge (i, j).
std::vector<std::vector<std::pair<int, int>>> subdivision_pattern(int d) {
  // Points y ∈ {0,1,2}^d with 2 ≥ y_1 ≥ … ≥ y_d ≥ 0 form the doubled Kuhn
  // simplex; Kuhn simplices of the unit cubes inside it are the children.
  auto inside = [d](const std::vector<int>& y) {
    if (y[0] > 2) return false;
    for (int k = 1; k < d; ++k)
      if (y[k] > y[k - 1]) return false;
    return y[d - 1] >= 0;
  };
  auto to_pair = [d](const std::vector<int>& y) {
    // Barycentric weights (×2): λ0 = 2 − y1, λk = y_k − y_{k+1}, λd = y_d.
    std::vector<int> lam(d + 1);
    lam[0] = 2 - y[0];
    for (int k = 1; k < d; ++k) lam[k] = y[k - 1] - y[k];
    lam[d] = y[d - 1];
    std::vector<int> idx;
    for (int k = 0; k <= d; ++k) {
      for (int r = 0; r < lam[k]; ++r) idx.push_back(k);
    }
    return std::pair<int, int>(idx[0], idx[1]);
  };

  std::vector<std::vector<std::pair<int, int>>> children;
  std::vector<int> perm(d);
  for (int corner = 0; corner < (1 << d); ++corner) {
    std::iota(perm.begin(), perm.end(), 0);
    do {
      std::vector<int> y(d);
      for (int k = 0; k < d; ++k) y[k] = (corner >> k) & 1;
      bool ok = inside(y);
      std::vector<std::pair<int, int>> child{to_pair(y)};
      for (int r = 0; r < d && ok; ++r) {
        y[perm[r]] += 1;
        ok = inside(y);
        if (ok) child.push_back(to_pair(y));
      }
      if (ok) children.push_back(std::move(child));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return children;
}

}  // namespace

std::size_t triangulation_size(int m, int level) {
  if (m < 1 || level < 0) return 0;
  // 2^{m+1} cross-polytope facets, each split into 2^m children per round.
  const long long log2Count = (m + 1) + static_cast<long long>(m) * level;
  if (log2Count >= 63) return std::numeric_limits<std::size_t>::max();
  return std::size_t{1} << log2Count;
}

SymmetricTriangulation triangulate(int m, int level, std::size_t maxSimplices) {
  if (m < 1) throw PreconditionError("triangulation dimension must be at least 1");
  if (level < 0 || level > 12) throw PreconditionError("triangulation level must lie in [0, 12]");
  if (triangulation_size(m, level) > maxSimplices) {
    throw BudgetError("triangulation of S^" + std::to_string(m) + " at level " + std::to_string(level) +
                      " exceeds the simplex budget");
  }

  SymmetricTriangulation tri;
  tri.dimension = m;
  tri.level = 0;
  const int n = m + 1;
  for (int i = 0; i < n; ++i) {
    for (double sign : {1.0, -1.0}) {
      std::vector<double> c(n, 0.0);
      c[i] = sign;
      tri.vertices.emplace_back(std::move(c));
    }
  }
  tri.antipode.resize(2 * n);
  for (int i = 0; i < n; ++i) {
    tri.antipode[2 * i] = 2 * i + 1;
    tri.antipode[2 * i + 1] = 2 * i;
  }
  // One simplex per sign pattern, vertices ordered by axis; the antipodal
  // simplex has the complementary pattern and the same ordering.
  for (int mask = 0; mask < (1 << n); ++mask) {
    for (int i = 0; i < n; ++i) tri.simplices.push_back(2 * i + ((mask >> i) & 1));
  }

  const auto pattern = subdivision_pattern(m);
  for (int round = 0; round < level; ++round) {
    std::map<std::pair<int, int>, int> midpoint;
    std::vector<int> next;
    next.reserve(tri.simplices.size() * pattern.size());
    auto vertex_for = [&](int a, int b) {
      if (a == b) return a;
      const std::pair<int, int> key(std::min(a, b), std::max(a, b));
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      const auto& va = tri.vertices[key.first];
      const auto& vb = tri.vertices[key.second];
      std::vector<double> c(n);
      for (int k = 0; k < n; ++k) c[k] = va[k] + vb[k];
      tri.vertices.push_back(SpherePoint::normalized(std::move(c)));
      const int id = static_cast<int>(tri.vertices.size()) - 1;
      midpoint.emplace(key, id);
      return id;
    };
    const std::size_t count = tri.simplex_count();
    for (std::size_t s = 0; s < count; ++s) {
      const std::vector<int> verts(tri.simplex(s).begin(), tri.simplex(s).end());
      for (const auto& child : pattern) {
        for (const auto& [i, j] : child) next.push_back(vertex_for(verts[i], verts[j]));
      }
    }
    tri.simplices = std::move(next);
    tri.antipode.resize(tri.vertices.size(), -1);
    for (const auto& [key, id] : midpoint) {
      const int a = tri.antipode[key.first];
      const int b = tri.antipode[key.second];
      tri.antipode[id] = midpoint.at({std::min(a, b), std::max(a, b)});
    }
    tri.level = round + 1;
  }
  return tri;
}

}  // namespace circlephase
