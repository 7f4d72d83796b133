#include "circlephase/zerofind.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>

#include <Eigen/Dense>

#include "circlephase/errors.hpp"

namespace circlephase {

namespace {

double vec_norm(const std::vector<double>& v) { return norm2(v); }

/// Counts evaluations and enforces the returned dimension.
class CountingMap {
 public:
  explicit CountingMap(const OddMap& map) : map_(map) {}

  std::vector<double> operator()(const SpherePoint& x) {
    ++count_;
    std::vector<double> v = map_.eval(x);
    if (static_cast<int>(v.size()) != map_.dimension) {
      throw ContractError("odd map returned a vector of the wrong length");
    }
    return v;
  }

  long count() const { return count_; }

 private:
  const OddMap& map_;
  long count_ = 0;
};

/// F at every vertex; computed on positive vertices and negated for their
/// antipodes.
std::vector<std::vector<double>> vertex_values(CountingMap& f, const SymmetricTriangulation& tri) {
  std::vector<std::vector<double>> values(tri.vertices.size());
  for (std::size_t v = 0; v < tri.vertices.size(); ++v) {
    if (is_positive(tri.vertices[v])) values[v] = f(tri.vertices[v]);
  }
  for (std::size_t v = 0; v < tri.vertices.size(); ++v) {
    if (values[v].empty()) {
      values[v] = values[static_cast<std::size_t>(tri.antipode[v])];
      for (double& c : values[v]) c = -c;
    }
  }
  return values;
}

int label_of(const std::vector<double>& value) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < value.size(); ++i) {
    if (std::abs(value[i]) > std::abs(value[best])) best = i;
  }
  const int label = static_cast<int>(best) + 1;
  return value[best] < 0.0 ? -label : label;
}

struct Candidate {
  SpherePoint point;
  double score;
  std::size_t order;
};

std::vector<Candidate> labeled_candidates(const SymmetricTriangulation& tri,
                                          const std::vector<std::vector<double>>& values) {
  std::vector<int> labels(values.size());
  for (std::size_t v = 0; v < values.size(); ++v) labels[v] = label_of(values[v]);

  std::vector<Candidate> out;
  const int n = tri.dimension + 1;
  for (std::size_t s = 0; s < tri.simplex_count(); ++s) {
    const auto verts = tri.simplex(s);
    bool complementary = false;
    for (int a = 0; a < n && !complementary; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (labels[verts[a]] == -labels[verts[b]]) {
          complementary = true;
          break;
        }
      }
    }
    if (!complementary) continue;
    std::vector<double> bary(n, 0.0);
    double score = 0.0;
    for (int v : verts) {
      for (int k = 0; k < n; ++k) bary[k] += tri.vertices[v][k];
      score = std::max(score, vec_norm(values[v]));
    }
    if (norm2(bary) < 1e-9 || !is_positive(bary)) continue;
    out.push_back({SpherePoint::normalized(std::move(bary)), score, s});
  }
  return out;
}

/// Orthonormal basis of the tangent space at x (columns).
Eigen::MatrixXd tangent_basis(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(x.data(), n);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(v);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  return q.rightCols(n - 1);
}

std::optional<SpherePoint> retract(const std::vector<double>& x, const Eigen::VectorXd& step) {
  std::vector<double> y(x);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += step[static_cast<Eigen::Index>(i)];
  const double n = norm2(y);
  if (!(n > 0.0) || !std::isfinite(n)) return std::nullopt;
  return SpherePoint::normalized(std::move(y));
}

ZeroResult positive_result(const SpherePoint& x, std::vector<double> fx, long evals, double tol) {
  const double r = vec_norm(fx);
  bool positive = true;
  try {
    positive = is_positive(x);
  } catch (const DegeneratePointError&) {
  }
  if (positive) return ZeroResult{x, std::move(fx), r, evals, r <= tol};
  for (double& c : fx) c = -c;
  return ZeroResult{-x, std::move(fx), r, evals, r <= tol};
}

}  // namespace

SpherePoint random_sphere_point(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (;;) {
    std::vector<double> c(static_cast<std::size_t>(m) + 1);
    for (double& v : c) v = normal(rng);
    if (norm2(c) > 1e-6) return SpherePoint::normalized(std::move(c));
  }
}

std::vector<SpherePoint> coarse_candidates(const OddMap& map, const SymmetricTriangulation& tri) {
  if (tri.dimension != map.dimension) throw PreconditionError("triangulation dimension differs from the map");
  CountingMap f(map);
  const auto values = vertex_values(f, tri);
  std::vector<SpherePoint> out;
  for (Candidate& c : labeled_candidates(tri, values)) out.push_back(std::move(c.point));
  return out;
}

ZeroResult local_refine(const OddMap& map, const SpherePoint& start, const ZeroFindConfig& cfg) {
  if (start.dim() != map.dimension) throw PreconditionError("start point dimension differs from the map");
  CountingMap f(map);
  const int m = map.dimension;
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  SpherePoint x = start;
  std::vector<double> fx = f(x);
  double r = vec_norm(fx);
  double step = cfg.initialStep;
  bool tryNewton = true;

  auto evaluate = [&](const SpherePoint& p) {
    std::vector<double> v = f(p);
    return std::pair(v, vec_norm(v));
  };

  while (r > cfg.absTol && f.count() < cfg.localBudget) {
    const std::vector<double> xc(x.coords().begin(), x.coords().end());
    const Eigen::MatrixXd basis = tangent_basis(xc);

    if (tryNewton && f.count() + m + 1 < cfg.localBudget) {
      // Forward-difference Jacobian in the tangent frame.
      const double h = std::clamp(r, 1e-7, 1e-4);
      Eigen::MatrixXd jac(m, m);
      bool ok = true;
      for (int i = 0; i < m && ok; ++i) {
        const auto probe = retract(xc, h * basis.col(i));
        if (!probe) {
          ok = false;
          break;
        }
        const std::vector<double> fp = f(*probe);
        for (int k = 0; k < m; ++k) jac(k, i) = (fp[k] - fx[k]) / h;
      }
      bool accepted = false;
      if (ok) {
        const Eigen::VectorXd rhs = -Eigen::Map<const Eigen::VectorXd>(fx.data(), m);
        Eigen::VectorXd d = jac.colPivHouseholderQr().solve(rhs);
        if (d.allFinite()) {
          const double len = d.norm();
          if (len > 0.5) d *= 0.5 / len;
          double lambda = 1.0;
          for (int ls = 0; ls < 8 && f.count() < cfg.localBudget; ++ls, lambda *= 0.5) {
            const auto cand = retract(xc, basis * (lambda * d));
            if (!cand) break;
            auto [fc, rc] = evaluate(*cand);
            if (rc <= (1.0 - 1e-4 * lambda) * r) {
              x = *cand;
              fx = std::move(fc);
              r = rc;
              accepted = true;
              break;
            }
          }
        }
      }
      if (accepted) continue;
      tryNewton = false;
    }

    // Compass poll in a randomly rotated tangent frame.
    Eigen::MatrixXd gauss(m, m);
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < m; ++k) gauss(i, k) = normal(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss);
    const Eigen::MatrixXd frame = basis * (qr.householderQ() * Eigen::MatrixXd::Identity(m, m));
    bool improved = false;
    for (int i = 0; i < m && !improved; ++i) {
      for (double sign : {1.0, -1.0}) {
        if (f.count() >= cfg.localBudget) break;
        const auto cand = retract(xc, (sign * step) * frame.col(i));
        if (!cand) continue;
        auto [fc, rc] = evaluate(*cand);
        if (rc < r) {
          x = *cand;
          fx = std::move(fc);
          r = rc;
          improved = true;
          break;
        }
      }
    }
    if (improved) {
      step = std::min(2.0 * step, 0.5);
      tryNewton = true;
    } else {
      step *= 0.5;
      if (step < 1e-15) break;
    }
  }
  return positive_result(x, std::move(fx), f.count(), cfg.absTol);
}

ZeroResult continuation_zero(const OddMap& map, const ZeroFindConfig& cfg) {
  if (map.dimension < 1) throw PreconditionError("zero finding needs dimension m >= 1");
  if (!(cfg.absTol > 0.0)) throw PreconditionError("absTol must be positive");
  const int m = map.dimension;
  const int n = m + 1;
  CountingMap f(map);
  auto eval_f = [&](const Eigen::VectorXd& x) {
    const std::vector<double> v = f(SpherePoint::normalized(std::vector<double>(x.data(), x.data() + n)));
    return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(v.data(), m));
  };

  // A random linear odd map of roughly the size of F.
  double sigma2 = 0.0;
  for (int i = 0; i < n; ++i) sigma2 += eval_f(Eigen::VectorXd::Unit(n, i)).squaredNorm();
  const double sigma = sigma2 > 0.0 ? std::sqrt(sigma2 / n) : 1.0;
  std::mt19937_64 rng(cfg.seed ^ 0x5851f42d4c957f2dULL);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd a(m, n);

  // G(x, s) = (H(x, s), (|x|² − 1)/2) on ℝ^{n+1}; z = (x, s).
  auto residual = [&](const Eigen::VectorXd& z, Eigen::VectorXd* fOut) {
    const Eigen::VectorXd x = z.head(n);
    const Eigen::VectorXd fx = eval_f(x);
    Eigen::VectorXd g(n);
    g.head(m) = (1.0 - z(n)) * (a * (x / x.norm())) + z(n) * fx;
    g(m) = 0.5 * (x.squaredNorm() - 1.0);
    if (fOut) *fOut = fx;
    return g;
  };
  auto jacobian = [&](const Eigen::VectorXd& z, const Eigen::VectorXd& fx) {
    const Eigen::VectorXd x = z.head(n);
    const std::vector<double> xc(x.data(), x.data() + n);
    const Eigen::MatrixXd basis = tangent_basis(xc);
    const double h = 1e-6;
    Eigen::MatrixXd d(m, m);
    for (int i = 0; i < m; ++i) d.col(i) = (eval_f(x + h * basis.col(i)) - fx) / h;
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n + 1);
    const Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(n, n) - x * x.transpose();
    j.block(0, 0, m, n) = (1.0 - z(n)) * a * proj + z(n) * d * basis.transpose();
    j.block(0, n, m, 1) = fx - a * x;
    j.block(m, 0, 1, n) = x.transpose();
    return j;
  };
  auto tangent = [&](const Eigen::MatrixXd& j) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(j.transpose());
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n + 1, n + 1);
    return Eigen::VectorXd(q.col(n));
  };
  // Sign of det [J; tᵀ], preserved along the path even across kinks of F.
  auto orientation = [&](const Eigen::MatrixXd& j, const Eigen::VectorXd& v) {
    Eigen::MatrixXd aug(n + 1, n + 1);
    aug.topRows(n) = j;
    aug.row(n) = v.transpose();
    return aug.determinant() > 0.0 ? 1 : -1;
  };

  // A path that stalls (a crease of F it cannot cross) is abandoned for a
  // fresh start map.
  std::optional<SpherePoint> landing;
  Eigen::VectorXd z(n + 1);
  while (!landing && f.count() < cfg.continuationBudget) {
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < n; ++k) a(i, k) = normal(rng);
    a *= sigma / std::sqrt(static_cast<double>(m));

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    Eigen::VectorXd x0 = svd.matrixV().col(n - 1).normalized();
    if (!is_positive(std::span<const double>(x0.data(), n))) x0 = -x0;

    z.head(n) = x0;
    z(n) = 0.0;
    Eigen::VectorXd fz = eval_f(x0);
    Eigen::MatrixXd jz = jacobian(z, fz);
    Eigen::VectorXd t = tangent(jz);
    if (t(n) < 0.0) t = -t;
    const int sense = orientation(jz, t);

    const double hMax = 0.5;
    double h = 0.05;
    while (f.count() < cfg.continuationBudget && h > 1e-8) {
      // Predictor along the tangent, chord corrector with the Jacobian at z.
      // When short steps still fail the path is at a crease of F; it is
      // crossed by pseudo-arclength Newton with the Jacobian refreshed at
      // every iterate.
      Eigen::VectorXd zp = z + h * t;
      bool ok = false;
      bool crossed = false;
      int iterations = 0;
      double prev = std::numeric_limits<double>::infinity();
      {
        const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> chord(jz);
        for (; iterations < 6; ++iterations) {
          const Eigen::VectorXd d = chord.solve(-residual(zp, nullptr));
          if (!d.allFinite()) break;
          zp += d;
          const double dn = d.norm();
          if ((iterations == 0 && dn > 0.5 * h) || dn > 0.5 * prev) break;
          prev = dn;
          if (dn <= 1e-3 * h + 1e-10) {
            ok = true;
            break;
          }
        }
      }
      if (!ok && h < 1e-4) {
        // Directions: the current tangent, then the tangent of the piece
        // just beyond the crease.
        const double hc = 1e-3;
        Eigen::VectorXd zq = z + 1e-5 * t;
        zq.head(n).normalize();
        Eigen::VectorXd fq;
        residual(zq, &fq);
        const Eigen::MatrixXd jq = jacobian(zq, fq);
        Eigen::VectorXd tq = tangent(jq);
        if (orientation(jq, tq) != sense) tq = -tq;
        for (const Eigen::VectorXd& dir : {t, tq}) {
          zp = z + hc * dir;
          for (iterations = 0; iterations < 12; ++iterations) {
            Eigen::VectorXd fx;
            Eigen::VectorXd g(n + 1);
            g.head(n) = residual(zp, &fx);
            g(n) = dir.dot(zp - z) - hc;
            Eigen::VectorXd zu = zp;
            zu.head(n).normalize();
            Eigen::MatrixXd aug(n + 1, n + 1);
            aug.topRows(n) = jacobian(zu, fx);
            aug.row(n) = dir.transpose();
            const Eigen::VectorXd d = aug.colPivHouseholderQr().solve(-g);
            if (!d.allFinite() || d.norm() > hc) break;
            zp += d;
            if (d.norm() <= 1e-6 * hc) {
              ok = crossed = true;
              break;
            }
          }
          if (ok) {
            h = hc;
            break;
          }
        }
      }
      if (!ok || zp(n) < 0.0) {
        h *= 0.5;
        continue;
      }
      zp.head(n).normalize();
      Eigen::VectorXd fp;
      residual(zp, &fp);
      const Eigen::MatrixXd jp = jacobian(zp, fp);
      Eigen::VectorXd tp = tangent(jp);
      if (orientation(jp, tp) != sense) tp = -tp;
      if (tp.dot(t) < 0.9 && !crossed) {
        h *= 0.5;
        continue;
      }
      if (zp(n) >= 1.0) {
        const double lambda = (1.0 - z(n)) / (zp(n) - z(n));
        const Eigen::VectorXd x = ((1.0 - lambda) * z.head(n) + lambda * zp.head(n)).normalized();
        landing = SpherePoint::normalized(std::vector<double>(x.data(), x.data() + n));
        break;
      }
      z = zp;
      jz = jp;
      t = tp;
      if (iterations <= 1) h = std::min(1.5 * h, hMax);
    }
  }

  if (!landing) {
    const Eigen::VectorXd x = z.head(n);
    const SpherePoint last = SpherePoint::normalized(std::vector<double>(x.data(), x.data() + n));
    return positive_result(last, f(last), f.count(), -1.0);
  }
  ZeroFindConfig polish = cfg;
  polish.localBudget = std::max(2L * (m + 1), cfg.continuationBudget - f.count());
  polish.initialStep = std::min(cfg.initialStep, 1e-3);
  ZeroResult res = local_refine(map, *landing, polish);
  res.evaluations += f.count();
  return res;
}

void check_oddness(const OddMap& map, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (int trial = 0; trial < 100; ++trial) {
    const SpherePoint x = random_sphere_point(map.dimension, rng);
    const std::vector<double> a = map.eval(x);
    const std::vector<double> b = map.eval(-x);
    if (a.size() != b.size() || static_cast<int>(a.size()) != map.dimension) {
      throw ContractError("odd map returned a vector of the wrong length");
    }
    std::vector<double> sum(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) sum[i] = a[i] + b[i];
    if (vec_norm(sum) > 1e-9 * std::max(1.0, vec_norm(a))) {
      throw ContractError("map is not odd: F(-x) + F(x) is not zero at a sampled point");
    }
  }
}

ZeroResult find_zero(const OddMap& map, const ZeroFindConfig& cfg) {
  if (map.dimension < 1) throw PreconditionError("zero finding needs dimension m >= 1");
  if (!(cfg.absTol > 0.0)) throw PreconditionError("absTol must be positive");
  check_oddness(map, cfg.seed);

  CountingMap f(map);
  long spent = 0;
  std::optional<ZeroResult> best;
  auto consider = [&](ZeroResult res) {
    if (!best || res.residualNorm < best->residualNorm) best = std::move(res);
  };

  for (int level = 0; level <= cfg.maxRefineLevel; ++level) {
    if (triangulation_size(map.dimension, level) > cfg.simplexBudget) break;
    const SymmetricTriangulation tri = triangulate(map.dimension, level, cfg.simplexBudget);
    const auto values = vertex_values(f, tri);
    for (std::size_t v = 0; v < tri.vertices.size(); ++v) {
      if (is_positive(tri.vertices[v])) {
        consider(ZeroResult{tri.vertices[v], values[v], vec_norm(values[v]), 0, false});
      }
    }
    if (best && best->residualNorm <= cfg.absTol) break;

    std::vector<Candidate> candidates = labeled_candidates(tri, values);
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.score < b.score; });
    if (static_cast<int>(candidates.size()) > cfg.maxCandidatesPerLevel) {
      candidates.erase(candidates.begin() + cfg.maxCandidatesPerLevel, candidates.end());
    }

    ZeroFindConfig local = cfg;
    local.initialStep = std::min(cfg.initialStep, 0.5 * std::ldexp(1.0, -level));
    for (const Candidate& c : candidates) {
      if (spent + f.count() >= cfg.labelingBudget) break;
      ZeroResult res = local_refine(map, c.point, local);
      spent += res.evaluations;
      if (res.converged) {
        // Independent re-evaluation at the positive representative.
        std::vector<double> check = f(res.point);
        const double r = vec_norm(check);
        if (r <= cfg.absTol) {
          return ZeroResult{res.point, std::move(check), r, spent + f.count(), true};
        }
        res.converged = false;
      }
      consider(std::move(res));
    }
    if (spent + f.count() >= cfg.labelingBudget) break;
  }

  if (best && best->residualNorm <= cfg.absTol) {
    best->evaluations = spent + f.count();
    best->converged = true;
    return *best;
  }

  ZeroResult path = continuation_zero(map, cfg);
  spent += path.evaluations;
  if (path.converged) {
    std::vector<double> check = f(path.point);
    const double r = vec_norm(check);
    if (r <= cfg.absTol) return ZeroResult{path.point, std::move(check), r, spent + f.count(), true};
    path.converged = false;
  }
  consider(std::move(path));

  if (!best) {
    const SpherePoint north = SpherePoint::normalized([&] {
      std::vector<double> c(static_cast<std::size_t>(map.dimension) + 1, 0.0);
      c.back() = 1.0;
      return c;
    }());
    std::vector<double> v = f(north);
    const double r = vec_norm(v);
    best = ZeroResult{north, std::move(v), r, 0, false};
  }
  best->evaluations = spent + f.count();
  best->converged = best->residualNorm <= cfg.absTol;
  return *best;
}

}  // namespace circlephase
