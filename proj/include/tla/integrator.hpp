#pragma once

#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "tla/holonomy.hpp"

namespace tla {

// Arrow ([gamma], u) of the integrating groupoid; u is a representative in the
// simply connected group, read modulo the lattice.
struct ArrowRep {
  SampledPath path;
  GroupElement u;
  std::shared_ptr<const CentralLattice> lattice;

  const Point& source() const { return path.source(); }
  const Point& target() const { return path.target(); }
};

struct IntegratorOptions {
  double eq_tol = 1e-6;
  double point_tol = 1e-9;
  // Bisection depth of the canonical contraction before it is declared discontinuous.
  int max_bisect = 10;
  double jump_limit = 0.5;
  TransportScheme scheme = TransportScheme::GaussMagnus4;
};

ArrowRep arrow_unit(const SquarePresentation& p, std::shared_ptr<const CentralLattice> lattice, const Point& m);
ArrowRep make_arrow(const SquarePresentation& p, std::shared_ptr<const CentralLattice> lattice, SampledPath path,
                    GroupElement u);

// (g', u') o (g, u) = (g' * g, T(g) u' T(g)^{-1} u).
ArrowRep arrow_mul(const SquarePresentation& p, const ArrowRep& second, const ArrowRep& first,
                   const IntegratorOptions& opts = {});
// (g^{-1}, T(g)^{-1} u^{-1} T(g)).
ArrowRep arrow_inv(const SquarePresentation& p, const ArrowRep& a, const IntegratorOptions& opts = {});

struct EqResult {
  bool equal = false;
  // Quotient distance of u1 from Hol(g1^{-1} * g0) u0; infinite when the endpoints differ.
  double defect = 0.0;
};

// Equal iff the endpoints agree and u1 = Hol(g1^{-1} * g0) u0 modulo the lattice.
EqResult arrow_eq(const SquarePresentation& p, const ArrowRep& a1, const ArrowRep& a0,
                  const IntegratorOptions& opts = {});

// Hol(loop) through the straight-line contraction to the basepoint, with the
// contraction bisected until consecutive holonomies are within jump_limit.
// Throws Numerical if the contraction stays discontinuous.
GroupElement hol_canonical(const SquarePresentation& p, const SampledPath& loop, const CentralLattice& lattice,
                           const IntegratorOptions& opts = {});

struct Rect {
  Point lo;
  Point hi;
  bool contains(const Point& q) const {
    return q.x() > lo.x() && q.x() < hi.x() && q.y() > lo.y() && q.y() < hi.y();
  }
};

// Local trivialization over target_region x source_region by the path family
// sigma(m', m): m -> waypoint -> m' (or the straight segment), sitting at every vertex.
struct LocalChart {
  Rect target_region;
  Rect source_region;
  std::optional<Point> waypoint;
  int samples_per_edge = 100;

  bool contains(const Point& mt, const Point& ms) const {
    return target_region.contains(mt) && source_region.contains(ms);
  }
  SampledPath sigma(const Point& mt, const Point& ms) const;
};

// Largest sample displacement of sigma per unit displacement of (m', m), over the given steps.
double sigma_modulus(const LocalChart& chart, const Point& mt, const Point& ms, double h);

// f(m', m) = Hol(sigma_2^{-1} * sigma_1); the chart coordinates satisfy [sigma_1, u] = [sigma_2, f u].
GroupElement transition_map(const SquarePresentation& p, const CentralLattice& lattice, const LocalChart& c1,
                            const LocalChart& c2, const Point& mt, const Point& ms,
                            const IntegratorOptions& opts = {});

struct CocycleReport {
  double max_defect = 0.0;
  // Largest |f(x + h) - f(x)| / h over sampled neighbouring point pairs.
  double max_slope = 0.0;
  int triples = 0;
  int pairs = 0;
};

// Checks f13 = f23 f12 modulo the lattice on every ordered chart triple covering a sampled point pair.
CocycleReport cocycle_check(const SquarePresentation& p, const CentralLattice& lattice,
                            const std::vector<LocalChart>& charts,
                            const std::vector<std::pair<Point, Point>>& point_pairs, double h = 1e-3,
                            const IntegratorOptions& opts = {});

// Three overlapping charts covering the interior of the square.
std::vector<LocalChart> default_charts();

struct LawReport {
  // Largest arrow_eq defects of the unit, inverse, double inverse and associativity laws.
  double unit = 0.0, inverse = 0.0, double_inverse = 0.0, associativity = 0.0;
  int triples = 0;
};

// Groupoid laws on `triples` random composable triples of arrows between interior points.
LawReport check_laws(const SquarePresentation& p, const std::shared_ptr<const CentralLattice>& lattice, int triples,
                     std::mt19937_64& rng, const IntegratorOptions& opts = {});

struct IsotropySample {
  std::vector<GroupElement> elements;
  // max over i, j of the quotient distance of Hol(l_j * l_i) from Hol(l_j) Hol(l_i).
  double table_defect = 0.0;
};

IsotropySample isotropy_sample(const SquarePresentation& p, const CentralLattice& lattice, const Point& m,
                               const std::vector<SampledPath>& loops, const IntegratorOptions& opts = {});

// For theta = 0 on SU(2), compares arrow_mul on arrows between the given points
// carrying quaternion units with the exact product of Pair(points) x Q8.
// Returns the largest coordinate deviation over all composable pairs.
double flat_degeneration_defect(const std::vector<Point>& points);

}  // namespace tla
