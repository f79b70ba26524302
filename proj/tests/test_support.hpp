#pragma once

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "tla/holonomy.hpp"
#include "tla/integrator.hpp"

namespace tla::testing {

// Presentation with its monodromy lattice.
struct Preset {
  std::string name;
  SquarePresentation p;
  std::shared_ptr<const CentralLattice> lattice;
};

inline Preset make_preset(std::string name, SquarePresentation p) {
  auto lat = std::make_shared<const CentralLattice>(monodromy_generators({p}));
  return Preset{std::move(name), std::move(p), std::move(lat)};
}

inline Point random_point(std::mt19937_64& rng, double lo = 0.05, double hi = 0.95) {
  std::uniform_real_distribution<double> d(lo, hi);
  double x = d(rng);
  return Point(x, d(rng));
}

// Polyline a -> random waypoints -> b.
inline SampledPath random_path(std::mt19937_64& rng, const Point& a, const Point& b, int waypoints = 1,
                               int per_edge = 100) {
  std::vector<Point> v{a};
  for (int i = 0; i < waypoints; ++i) v.push_back(random_point(rng));
  v.push_back(b);
  return SampledPath::polyline(v, per_edge);
}

inline Vec random_vec(std::mt19937_64& rng, int n, double scale) {
  std::normal_distribution<double> d(0.0, scale);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = d(rng);
  return v;
}

inline ArrowRep random_arrow(std::mt19937_64& rng, const Preset& pr, const Point& from, const Point& to) {
  const Backend& b = pr.p.group();
  return ArrowRep{random_path(rng, from, to), group_exp(b, random_vec(rng, b.algebra_dim(), 1.0)), pr.lattice};
}

}  // namespace tla::testing
