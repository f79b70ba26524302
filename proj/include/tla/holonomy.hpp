#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tla/lattice.hpp"
#include "tla/presentation.hpp"

namespace tla {

using Point = Eigen::Vector2d;

// Piecewise-linear path in the closed unit square, given by its samples.
// Consecutive samples are closer than 0.05.
class SampledPath {
 public:
  explicit SampledPath(std::vector<Point> points);

  // a -> b reparametrized to sit at both ends for a `sit` fraction of the samples.
  static SampledPath segment(const Point& a, const Point& b, int samples = 200, double sit = 0.1);
  // Uniformly parametrized straight segment.
  static SampledPath uniform_segment(const Point& a, const Point& b, int samples);
  // Sitting segments through the given vertices.
  static SampledPath polyline(const std::vector<Point>& vertices, int samples_per_edge = 200);
  static SampledPath constant(const Point& p, int samples = 2);

  const std::vector<Point>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const Point& source() const { return points_.front(); }
  const Point& target() const { return points_.back(); }
  bool is_loop(double tol = 1e-12) const { return (source() - target()).norm() <= tol; }
  SampledPath reversed() const;

 private:
  std::vector<Point> points_;
};

// Traverse `first`, then `second` (written second * first).
SampledPath concat(const SampledPath& second, const SampledPath& first);
// True when the first and last ceil(fraction * N) samples are constant.
bool sits_at_endpoints(const SampledPath& p, double fraction = 0.1);

enum class TransportScheme { GaussMagnus4, Midpoint };

// Right-multiplicative transport g' = g theta(gamma'), integrated chord by chord.
GroupElement transport(const SquarePresentation& p, const SampledPath& path, const GroupElement& g0,
                       TransportScheme scheme = TransportScheme::GaussMagnus4);
std::vector<GroupElement> transport_trace(const SquarePresentation& p, const SampledPath& path,
                                          const GroupElement& g0,
                                          TransportScheme scheme = TransportScheme::GaussMagnus4);

struct HolonomyTrace {
  std::vector<double> taus;
  std::vector<GroupElement> values;
  std::string to_csv() const;
};

struct ClassifyOptions {
  int sweep_steps = 100;
  // Raised to the form's min_loop_samples when that is larger.
  int path_samples = 400;
  double central_tol = 1e-6;
  int max_refine = 4;
  double jump_limit = 0.5;
  TransportScheme scheme = TransportScheme::GaussMagnus4;
};

struct ClassifyResult {
  GroupElement c;
  HolonomyTrace trace;
  double central_defect = 0.0;
};

// Holonomy of the horizontal loops s -> (s, tau), swept from tau = 1 to tau = 0.
// Throws NonCentral if the endpoint misses the center, Numerical if the sweep jumps.
ClassifyResult classify_c(const SquarePresentation& p, const ClassifyOptions& opts = {});

// Lattice generated by the classifying elements of the given presentations.
CentralLattice monodromy_generators(const std::vector<SquarePresentation>& family, const ClassifyOptions& opts = {},
                                    double tolerance = 1e-8);

// Homotopy of loops at a common basepoint; rows[0] is the loop, rows.back() is thin in S^2.
class SampledHomotopy {
 public:
  explicit SampledHomotopy(std::vector<SampledPath> rows);

  // r -> m + (1 - sm(r)) (loop - m), ending at the constant loop.
  static SampledHomotopy straight_line(const SampledPath& loop, int rows = 40);
  // Rectangle loop at its lower-left corner m, expanded to the boundary of I^2
  // through a tail m -> corner and back.
  static SampledHomotopy sweep_to_edge(const Point& lo, const Point& hi, int rows = 40, int per_edge = 100);

  const std::vector<SampledPath>& rows() const { return rows_; }
  const SampledPath& loop() const { return rows_.front(); }

 private:
  std::vector<SampledPath> rows_;
};

// Positively oriented rectangle boundary starting and ending at lo, padded with
// constant tails so it matches row 0 of sweep_to_edge(lo, hi).
SampledPath rectangle_loop(const Point& lo, const Point& hi, int per_edge = 100);

struct HolResult {
  GroupElement reduced;
  GroupElement raw;
  bool leak = false;
  double leak_distance = 0.0;
};

// Hol(loop) = H(0) H(1)^{-1} with H(r) = T(row r)^{-1}, reduced mod the lattice.
HolResult hol_contractible(const SquarePresentation& p, const SampledHomotopy& h, const CentralLattice& lattice,
                           TransportScheme scheme = TransportScheme::GaussMagnus4);

// Distance between Hol(gamma * loop * gamma^{-1}) and T(gamma)^{-1} Hol(loop) T(gamma).
double hol_equivariance_check(const SquarePresentation& p, const SampledPath& loop, const SampledPath& gamma,
                              const CentralLattice& lattice);

// True when the sampled loop collapses to a thin loop in S^2 = I^2 / boundary.
bool is_sphere_thin(const SampledPath& loop, double tol = 1e-9);

struct ScanOptions {
  double threshold = 1e-3;
  int refine_levels = 16;
  ClassifyOptions classify;
  double lattice_tolerance = 1e-8;
  DiscretenessOptions discreteness;
};

struct ScanPoint {
  double lam;
  double gap;
};

struct ScanResult {
  bool pass = true;
  double min_gap = 0.0;
  double witness = 0.0;
  std::vector<ScanPoint> samples;
  std::string to_json() const;
};

// Scans the lattice gap of <c(P(lam))> over the grid, refining towards the minimum.
ScanResult local_uniform_check(const std::function<SquarePresentation(double)>& family,
                               const std::vector<double>& lams, const ScanOptions& opts = {});

}  // namespace tla
