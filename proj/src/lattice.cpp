#include "tla/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tla/errors.hpp"

namespace tla {

namespace {

bool is_cyclic(CenterKind k) { return k == CenterKind::Z2 || k == CenterKind::Z; }

// gcd of the cyclic indices of the generators; 0 for the trivial subgroup.
long cyclic_generator_index(const CentralLattice& lat) {
  long g = 0;
  for (const auto& e : lat.generators()) {
    auto k = central_index(e, std::max(lat.tolerance(), 1e-6));
    if (!k) throw Error(ErrorCode::Lattice, "generator lost centrality: " + format_element(e));
    g = std::gcd(g, std::labs(*k));
  }
  if (lat.kind() == CenterKind::Z2) g %= 2;
  return g;
}

struct RealReduction {
  std::vector<Vec> basis;
  bool discrete = true;
  int iterations = 0;
};

RealReduction reduce_real(const std::vector<Vec>& input, double tol, const DiscretenessOptions& opts) {
  const double eps = std::max(opts.epsilon, 100.0 * tol);
  RealReduction out;
  // Ties up to sign collapse before reduction.
  for (const Vec& v : input) {
    if (v.norm() <= tol) continue;
    bool dup = false;
    for (const Vec& w : out.basis) {
      if ((v - w).norm() <= opts.epsilon || (v + w).norm() <= opts.epsilon) {
        dup = true;
        break;
      }
    }
    if (!dup) out.basis.push_back(v);
  }
  for (const Vec& v : out.basis) {
    if (v.norm() < eps) out.discrete = false;
  }
  auto by_norm = [](const Vec& a, const Vec& b) { return a.squaredNorm() < b.squaredNorm(); };
  while (out.discrete && out.iterations < opts.max_iterations) {
    ++out.iterations;
    std::sort(out.basis.begin(), out.basis.end(), by_norm);
    bool changed = false;
    for (std::size_t i = 0; i < out.basis.size(); ++i) {
      double ni = out.basis[i].squaredNorm();
      if (std::sqrt(ni) <= tol) continue;
      for (std::size_t j = i + 1; j < out.basis.size(); ++j) {
        double m = std::round(out.basis[j].dot(out.basis[i]) / ni);
        if (m != 0.0) {
          out.basis[j] -= m * out.basis[i];
          changed = true;
        }
      }
    }
    std::vector<Vec> kept;
    for (const Vec& v : out.basis) {
      double n = v.norm();
      if (n <= tol) continue;
      if (n < eps) out.discrete = false;
      kept.push_back(v);
    }
    out.basis = std::move(kept);
    if (!changed) break;
  }
  std::sort(out.basis.begin(), out.basis.end(), by_norm);
  return out;
}

std::vector<Vec> coords_of(const CentralLattice& lat) {
  std::vector<Vec> v;
  for (const auto& g : lat.generators()) v.push_back(g.coords());
  return v;
}

// Closest lattice point to x spanned by `basis`; coefficients are rounded
// least-squares coordinates refined by a unit-step neighbourhood search.
Vec nearest_point(const std::vector<Vec>& basis, const Vec& x) {
  if (basis.empty()) return Vec::Zero(x.size());
  Mat b(x.size(), static_cast<int>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) b.col(static_cast<int>(i)) = basis[i];
  Vec coef = b.completeOrthogonalDecomposition().solve(x);
  Vec r = coef.array().round().matrix();
  Vec best = b * r;
  double best_d = (x - best).norm();
  const int k = static_cast<int>(basis.size());
  if (k <= 4) {
    int combos = 1;
    for (int i = 0; i < k; ++i) combos *= 3;
    for (int c = 0; c < combos; ++c) {
      Vec d = r;
      int code = c;
      for (int i = 0; i < k; ++i) {
        d[i] += (code % 3) - 1;
        code /= 3;
      }
      Vec p = b * d;
      double dist = (x - p).norm();
      if (dist < best_d) {
        best_d = dist;
        best = p;
      }
    }
  }
  return best;
}

}  // namespace

CentralLattice::CentralLattice(Backend backend, std::vector<GroupElement> generators, double tolerance)
    : backend_(backend), generators_(std::move(generators)), tolerance_(tolerance) {
  if (!(tolerance_ >= 0.0)) throw Error(ErrorCode::InvalidArgument, "lattice tolerance must be >= 0");
  for (const auto& g : generators_) {
    if (g.backend() != backend_) {
      throw Error(ErrorCode::InvalidArgument, "lattice generator from backend " + g.backend().name());
    }
    if (!is_central(g, std::max(tolerance_, 1e-12))) {
      throw Error(ErrorCode::Lattice, "lattice generator is not central: " + format_element(g));
    }
  }
}

Discreteness lattice_discreteness(const CentralLattice& lat, const DiscretenessOptions& opts) {
  Discreteness d;
  const Backend& b = lat.backend();
  if (is_cyclic(lat.kind())) {
    long g = cyclic_generator_index(lat);
    d.iterations = 1;
    if (g == 0) {
      d.min_generator_norm = std::numeric_limits<double>::infinity();
    } else {
      GroupElement z = central_element(b, g);
      d.reduced.push_back(z);
      d.min_generator_norm = dist_to_identity(z);
    }
    return d;
  }
  RealReduction r = reduce_real(coords_of(lat), lat.tolerance(), opts);
  d.discrete = r.discrete;
  d.iterations = r.iterations;
  d.min_generator_norm = std::numeric_limits<double>::infinity();
  for (const Vec& v : r.basis) {
    d.reduced.emplace_back(b, v);
    d.min_generator_norm = std::min(d.min_generator_norm, v.norm());
  }
  return d;
}

bool lattice_membership(const CentralLattice& lat, const GroupElement& g) {
  const double tol = lat.tolerance();
  if (g.backend() != lat.backend()) throw Error(ErrorCode::InvalidArgument, "membership across backends");
  if (is_cyclic(lat.kind())) {
    auto k = central_index(g, tol);
    if (!k) return false;
    long gen = cyclic_generator_index(lat);
    if (gen == 0) return *k == 0;
    return *k % gen == 0;
  }
  const DiscretenessOptions opts;
  RealReduction r = reduce_real(coords_of(lat), tol, opts);
  if (r.discrete) return (g.coords() - nearest_point(r.basis, g.coords())).norm() <= tol;
  // Dense directions: project them out and test the discrete remainder.
  const double eps = std::max(opts.epsilon, 100.0 * tol);
  std::vector<Vec> dense, rest;
  for (const Vec& v : r.basis) (v.norm() < eps ? dense : rest).push_back(v);
  Mat d(g.coords().size(), static_cast<int>(dense.size()));
  for (std::size_t i = 0; i < dense.size(); ++i) d.col(static_cast<int>(i)) = dense[i];
  Eigen::ColPivHouseholderQR<Mat> qr(d);
  Mat q = qr.householderQ() * Mat::Identity(d.rows(), qr.rank());
  auto project = [&](const Vec& v) -> Vec { return v - q * (q.transpose() * v); };
  for (Vec& v : rest) v = project(v);
  Vec x = project(g.coords());
  return (x - nearest_point(rest, x)).norm() <= eps;
}

GroupElement lattice_reduce(const CentralLattice& lat, const GroupElement& g) {
  if (g.backend() != lat.backend()) throw Error(ErrorCode::InvalidArgument, "reduction across backends");
  const Backend& b = lat.backend();
  if (is_cyclic(lat.kind())) {
    long gen = cyclic_generator_index(lat);
    if (gen == 0) return g;
    if (lat.kind() == CenterKind::Z2) {
      GroupElement alt = group_mul(g, central_element(b, 1));
      return dist_to_identity(alt) < dist_to_identity(g) ? alt : g;
    }
    // Central elements of the Z-centers shift the first coordinate by a fixed unit.
    double unit = central_element(b, gen).coords()[0];
    long m0 = std::lround(g.coords()[0] / unit);
    GroupElement best = g;
    double best_d = dist_to_identity(g);
    for (long m = m0 - 1; m <= m0 + 1; ++m) {
      GroupElement cand = group_mul(central_element(b, -m * gen), g);
      double d = dist_to_identity(cand);
      if (d < best_d) {
        best_d = d;
        best = cand;
      }
    }
    return best;
  }
  RealReduction r = reduce_real(coords_of(lat), lat.tolerance(), DiscretenessOptions{});
  return GroupElement(b, g.coords() - nearest_point(r.basis, g.coords()));
}

double quotient_distance(const CentralLattice& lat, const GroupElement& a, const GroupElement& b) {
  return dist_to_identity(lattice_reduce(lat, group_mul(group_inv(a), b)));
}

}  // namespace tla
