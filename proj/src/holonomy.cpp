#include "tla/holonomy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "tla/errors.hpp"

namespace tla {

namespace {

constexpr double kMaxStep = 0.05;
constexpr double kPointTol = 1e-12;
const double kGaussOffset = std::sqrt(3.0) / 6.0;
const double kGaussCommutator = std::sqrt(3.0) / 12.0;

bool in_square(const Point& p) {
  return p.x() >= -kPointTol && p.x() <= 1.0 + kPointTol && p.y() >= -kPointTol && p.y() <= 1.0 + kPointTol;
}

Vec one_form(const FormValue& v, const Point& d) { return v.ds * d.x() + v.dt * d.y(); }

// Increment Omega with g_{n+1} = g_n exp(Omega) for one chord.
Vec chord_increment(const SquarePresentation& p, const Point& a, const Point& b, TransportScheme scheme) {
  Point d = b - a;
  if (scheme == TransportScheme::Midpoint) {
    Point m = 0.5 * (a + b);
    return one_form(p.theta(m.x(), m.y()), d);
  }
  Point q1 = a + (0.5 - kGaussOffset) * d;
  Point q2 = a + (0.5 + kGaussOffset) * d;
  Vec a1 = one_form(p.theta(q1.x(), q1.y()), d);
  Vec a2 = one_form(p.theta(q2.x(), q2.y()), d);
  return 0.5 * (a1 + a2) + kGaussCommutator * p.algebra().bracket(a1, a2);
}

double sm(double u, double sit) { return smooth_step((u - sit) / (1.0 - 2.0 * sit)); }

GroupElement hol_in_chart(const SquarePresentation& p, const SampledPath& loop) {
  return group_inv(transport(p, loop, group_identity(p.group())));
}

}  // namespace

SampledPath::SampledPath(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw Error(ErrorCode::InvalidArgument, "a sampled path needs at least two samples");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!points_[i].allFinite() || !in_square(points_[i])) {
      throw Error(ErrorCode::InvalidArgument, "path sample " + std::to_string(i) + " lies outside the unit square");
    }
    if (i > 0 && (points_[i] - points_[i - 1]).norm() >= kMaxStep) {
      throw Error(ErrorCode::InvalidArgument, "path samples " + std::to_string(i - 1) + " and " + std::to_string(i) +
                                                  " are 0.05 or more apart");
    }
  }
}

SampledPath SampledPath::segment(const Point& a, const Point& b, int samples, double sit) {
  if (samples < 2) throw Error(ErrorCode::InvalidArgument, "segment needs at least two samples");
  if (!(sit >= 0.0 && sit < 0.5)) throw Error(ErrorCode::InvalidArgument, "sitting fraction must lie in [0, 1/2)");
  std::vector<Point> pts;
  pts.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    double u = double(i) / (samples - 1);
    pts.push_back(a + (b - a) * sm(u, sit));
  }
  pts.back() = b;
  return SampledPath(std::move(pts));
}

SampledPath SampledPath::uniform_segment(const Point& a, const Point& b, int samples) {
  if (samples < 2) throw Error(ErrorCode::InvalidArgument, "segment needs at least two samples");
  std::vector<Point> pts;
  pts.reserve(samples);
  for (int i = 0; i < samples; ++i) pts.push_back(a + (b - a) * (double(i) / (samples - 1)));
  pts.back() = b;
  return SampledPath(std::move(pts));
}

SampledPath SampledPath::polyline(const std::vector<Point>& vertices, int samples_per_edge) {
  if (vertices.size() < 2) throw Error(ErrorCode::InvalidArgument, "polyline needs two vertices");
  SampledPath out = segment(vertices[0], vertices[1], samples_per_edge);
  for (std::size_t i = 2; i < vertices.size(); ++i) {
    out = concat(segment(vertices[i - 1], vertices[i], samples_per_edge), out);
  }
  return out;
}

SampledPath SampledPath::constant(const Point& p, int samples) {
  return SampledPath(std::vector<Point>(std::max(samples, 2), p));
}

SampledPath SampledPath::reversed() const {
  std::vector<Point> pts(points_.rbegin(), points_.rend());
  return SampledPath(std::move(pts));
}

SampledPath concat(const SampledPath& second, const SampledPath& first) {
  if ((first.target() - second.source()).norm() > kPointTol) {
    throw Error(ErrorCode::InvalidArgument, "paths are not composable");
  }
  std::vector<Point> pts = first.points();
  pts.insert(pts.end(), second.points().begin() + 1, second.points().end());
  return SampledPath(std::move(pts));
}

bool sits_at_endpoints(const SampledPath& p, double fraction) {
  const auto& pts = p.points();
  std::size_t k = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(pts.size())));
  k = std::min(k, pts.size());
  for (std::size_t i = 0; i < k; ++i) {
    if ((pts[i] - pts.front()).norm() > kPointTol) return false;
    if ((pts[pts.size() - 1 - i] - pts.back()).norm() > kPointTol) return false;
  }
  return true;
}

GroupElement transport(const SquarePresentation& p, const SampledPath& path, const GroupElement& g0,
                       TransportScheme scheme) {
  GroupElement g = g0;
  const auto& pts = path.points();
  const Backend& b = g0.backend();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i] == pts[i + 1]) continue;
    g = group_mul(g, group_exp(b, chord_increment(p, pts[i], pts[i + 1], scheme)));
  }
  return g;
}

std::vector<GroupElement> transport_trace(const SquarePresentation& p, const SampledPath& path,
                                          const GroupElement& g0, TransportScheme scheme) {
  std::vector<GroupElement> out{g0};
  const auto& pts = path.points();
  const Backend& b = g0.backend();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i] == pts[i + 1]) {
      out.push_back(out.back());
    } else {
      out.push_back(group_mul(out.back(), group_exp(b, chord_increment(p, pts[i], pts[i + 1], scheme))));
    }
  }
  return out;
}

std::string HolonomyTrace::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "tau";
  if (!values.empty()) {
    for (int i = 0; i < values.front().coords().size(); ++i) os << ",g" << i;
  }
  os << "\n";
  for (std::size_t k = 0; k < taus.size(); ++k) {
    os << taus[k];
    for (int i = 0; i < values[k].coords().size(); ++i) os << "," << values[k].coords()[i];
    os << "\n";
  }
  return os.str();
}

ClassifyResult classify_c(const SquarePresentation& p, const ClassifyOptions& opts) {
  if (opts.sweep_steps < 1 || opts.path_samples < 1) {
    throw Error(ErrorCode::InvalidArgument, "sweep and path resolutions must be positive");
  }
  const Backend& b = p.group();
  const GroupElement e = group_identity(b);
  const int samples = std::max(opts.path_samples, p.form().min_loop_samples());
  auto hol = [&](double tau) {
    SampledPath loop = SampledPath::uniform_segment(Point(0.0, tau), Point(1.0, tau), samples + 1);
    return group_inv(transport(p, loop, e, opts.scheme));
  };

  HolonomyTrace trace;
  trace.taus.push_back(1.0);
  trace.values.push_back(hol(1.0));
  // Appends samples in (ta, tb], bisecting while neighbours jump too far.
  std::function<void(double, const GroupElement&, double, const GroupElement&, int)> fill =
      [&](double ta, const GroupElement& ha, double tb, const GroupElement& hb, int depth) {
        if (group_distance(ha, hb) > opts.jump_limit) {
          if (depth >= opts.max_refine) {
            std::ostringstream os;
            os << "holonomy sweep is discontinuous between tau = " << ta << " and " << tb;
            throw Error(ErrorCode::Numerical, os.str());
          }
          double tm = 0.5 * (ta + tb);
          GroupElement hm = hol(tm);
          fill(ta, ha, tm, hm, depth + 1);
          fill(tm, hm, tb, hb, depth + 1);
          return;
        }
        trace.taus.push_back(tb);
        trace.values.push_back(hb);
      };
  for (int k = 1; k <= opts.sweep_steps; ++k) {
    double ta = 1.0 - double(k - 1) / opts.sweep_steps;
    double tb = 1.0 - double(k) / opts.sweep_steps;
    GroupElement ha = trace.values.back();
    fill(ta, ha, tb, hol(tb), 0);
  }
  GroupElement c = trace.values.back();
  double defect = central_defect(c);
  if (defect > opts.central_tol) {
    std::ostringstream os;
    os << "classifying element is not central (defect " << defect << "): " << format_element(c);
    throw Error(ErrorCode::NonCentral, os.str());
  }
  return {c, std::move(trace), defect};
}

CentralLattice monodromy_generators(const std::vector<SquarePresentation>& family, const ClassifyOptions& opts,
                                    double tolerance) {
  if (family.empty()) throw Error(ErrorCode::InvalidArgument, "empty presentation family");
  const Backend& b = family.front().group();
  std::vector<GroupElement> gens;
  for (const auto& p : family) {
    if (p.group() != b) throw Error(ErrorCode::InvalidArgument, "family mixes group backends");
    gens.push_back(classify_c(p, opts).c);
  }
  return CentralLattice(b, std::move(gens), tolerance);
}

SampledHomotopy::SampledHomotopy(std::vector<SampledPath> rows) : rows_(std::move(rows)) {
  if (rows_.size() < 2) throw Error(ErrorCode::InvalidArgument, "homotopy needs at least two rows");
  const Point m = rows_.front().source();
  for (std::size_t k = 0; k < rows_.size(); ++k) {
    const SampledPath& r = rows_[k];
    if (r.size() != rows_.front().size()) throw Error(ErrorCode::InvalidArgument, "homotopy rows differ in length");
    if ((r.source() - m).norm() > kPointTol || (r.target() - m).norm() > kPointTol) {
      throw Error(ErrorCode::InvalidArgument, "homotopy row " + std::to_string(k) + " is not a loop at the basepoint");
    }
  }
  if (!is_sphere_thin(rows_.back())) {
    throw Error(ErrorCode::InvalidArgument, "last homotopy row is not thin in the sphere");
  }
}

SampledHomotopy SampledHomotopy::straight_line(const SampledPath& loop, int rows) {
  if (!loop.is_loop()) throw Error(ErrorCode::InvalidArgument, "straight-line contraction needs a loop");
  if (rows < 2) throw Error(ErrorCode::InvalidArgument, "homotopy needs at least two rows");
  const Point m = loop.source();
  std::vector<SampledPath> out;
  for (int k = 0; k < rows; ++k) {
    double f = 1.0 - double(k) / (rows - 1);
    std::vector<Point> pts;
    pts.reserve(loop.size());
    for (const Point& q : loop.points()) pts.push_back(m + f * (q - m));
    out.emplace_back(std::move(pts));
  }
  return SampledHomotopy(std::move(out));
}

namespace {

SampledPath rect_with_tail(const Point& m, const Point& lo, const Point& hi, int per_edge) {
  SampledPath tail = SampledPath::segment(m, lo, per_edge);
  SampledPath rect = SampledPath::polyline({lo, Point(hi.x(), lo.y()), hi, Point(lo.x(), hi.y()), lo}, per_edge);
  return concat(tail.reversed(), concat(rect, tail));
}

}  // namespace

SampledPath rectangle_loop(const Point& lo, const Point& hi, int per_edge) {
  return rect_with_tail(lo, lo, hi, per_edge);
}

SampledHomotopy SampledHomotopy::sweep_to_edge(const Point& lo, const Point& hi, int rows, int per_edge) {
  if (rows < 2) throw Error(ErrorCode::InvalidArgument, "homotopy needs at least two rows");
  std::vector<SampledPath> out;
  for (int k = 0; k < rows; ++k) {
    double r = double(k) / (rows - 1);
    Point lo_r = (1.0 - r) * lo;
    Point hi_r = (1.0 - r) * hi + r * Point(1.0, 1.0);
    out.push_back(rect_with_tail(lo, lo_r, hi_r, per_edge));
  }
  return SampledHomotopy(std::move(out));
}

bool is_sphere_thin(const SampledPath& loop, double tol) {
  auto on_boundary = [&](const Point& p) {
    return p.x() <= tol || p.x() >= 1.0 - tol || p.y() <= tol || p.y() >= 1.0 - tol;
  };
  // Collapse boundary samples to one pole and drop repeats.
  std::vector<Point> seq;
  std::vector<bool> pole;
  for (const Point& p : loop.points()) {
    bool b = on_boundary(p);
    if (!seq.empty()) {
      if (b && pole.back()) continue;
      if (!b && !pole.back() && (p - seq.back()).norm() <= tol) continue;
    }
    seq.push_back(p);
    pole.push_back(b);
  }
  for (std::size_t i = 0, j = seq.size() - 1; i < j; ++i, --j) {
    if (pole[i] != pole[j]) return false;
    if (!pole[i] && (seq[i] - seq[j]).norm() > tol) return false;
  }
  return true;
}

HolResult hol_contractible(const SquarePresentation& p, const SampledHomotopy& h, const CentralLattice& lattice,
                           TransportScheme scheme) {
  const Backend& b = p.group();
  if (lattice.backend() != b) throw Error(ErrorCode::InvalidArgument, "lattice backend differs from presentation");
  const GroupElement e = group_identity(b);
  std::vector<GroupElement> hs;
  for (std::size_t k = 0; k < h.rows().size(); ++k) {
    hs.push_back(group_inv(transport(p, h.rows()[k], e, scheme)));
    if (k > 0 && group_distance(hs[k - 1], hs[k]) > 0.5) {
      throw Error(ErrorCode::Numerical, "holonomy jumps between homotopy rows " + std::to_string(k - 1) + " and " +
                                            std::to_string(k) + "; refine the homotopy");
    }
  }
  const GroupElement& last = hs.back();
  HolResult r{e, group_mul(hs.front(), group_inv(last))};
  r.reduced = lattice_reduce(lattice, r.raw);
  r.leak = !lattice_membership(lattice, last);
  r.leak_distance = dist_to_identity(lattice_reduce(lattice, last));
  return r;
}

double hol_equivariance_check(const SquarePresentation& p, const SampledPath& loop, const SampledPath& gamma,
                              const CentralLattice& lattice) {
  if (!loop.is_loop()) throw Error(ErrorCode::InvalidArgument, "equivariance check needs a loop");
  if ((gamma.source() - loop.source()).norm() > kPointTol) {
    throw Error(ErrorCode::InvalidArgument, "conjugating path does not start at the loop basepoint");
  }
  SampledPath conj = concat(gamma, concat(loop, gamma.reversed()));
  GroupElement lhs = hol_in_chart(p, conj);
  GroupElement tg = transport(p, gamma, group_identity(p.group()));
  GroupElement rhs = group_mul(group_inv(tg), group_mul(hol_in_chart(p, loop), tg));
  return quotient_distance(lattice, lhs, rhs);
}

std::string ScanResult::to_json() const {
  nlohmann::json j;
  j["verdict"] = pass ? "pass" : "fail";
  j["min_gap"] = std::isfinite(min_gap) ? nlohmann::json(min_gap) : nlohmann::json(nullptr);
  j["witness"] = witness;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : samples) {
    arr.push_back({{"lam", s.lam}, {"gap", std::isfinite(s.gap) ? nlohmann::json(s.gap) : nlohmann::json(nullptr)}});
  }
  j["samples"] = arr;
  return j.dump(2);
}

ScanResult local_uniform_check(const std::function<SquarePresentation(double)>& family,
                               const std::vector<double>& lams, const ScanOptions& opts) {
  if (lams.empty()) throw Error(ErrorCode::InvalidArgument, "empty lam grid");
  std::vector<double> grid = lams;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  ScanResult res;
  auto gap = [&](double lam) {
    SquarePresentation p = family(lam);
    GroupElement c = classify_c(p, opts.classify).c;
    CentralLattice lat(p.group(), {c}, opts.lattice_tolerance);
    double g = lattice_discreteness(lat, opts.discreteness).min_generator_norm;
    res.samples.push_back({lam, g});
    return g;
  };
  std::vector<double> gaps;
  for (double lam : grid) gaps.push_back(gap(lam));

  const double inf = std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t i = 1; i < gaps.size(); ++i) {
    if (gaps[i] < gaps[arg]) arg = i;
  }
  double best_lam = grid[arg], best_gap = gaps[arg];
  if (best_gap < inf) {
    // Bisect towards each grid neighbour, following any decrease of the gap.
    for (int side : {-1, 1}) {
      long nb = static_cast<long>(arg) + side;
      if (nb < 0 || nb >= static_cast<long>(grid.size())) continue;
      double lo = grid[arg], hi = grid[nb];
      for (int level = 0; level < opts.refine_levels && best_gap > opts.threshold; ++level) {
        double mid = 0.5 * (lo + hi);
        double g = gap(mid);
        if (g < best_gap) {
          best_gap = g;
          best_lam = mid;
          lo = mid;
        } else {
          hi = mid;
        }
      }
    }
  }
  std::sort(res.samples.begin(), res.samples.end(), [](const ScanPoint& a, const ScanPoint& b) { return a.lam < b.lam; });
  res.min_gap = best_gap;
  res.witness = best_lam;
  res.pass = best_gap > opts.threshold;
  return res;
}

}  // namespace tla
