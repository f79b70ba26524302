#include "tla/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "tla/errors.hpp"
#include "tla/groupoid.hpp"

namespace tla {

namespace {

void check_backend(const SquarePresentation& p, const GroupElement& u) {
  if (u.backend() != p.group()) throw Error(ErrorCode::InvalidArgument, "arrow backend differs from presentation");
}

SampledPath scaled_loop(const SampledPath& loop, double f) {
  const Point m = loop.source();
  std::vector<Point> pts;
  pts.reserve(loop.size());
  for (const Point& q : loop.points()) pts.push_back(m + f * (q - m));
  return SampledPath(std::move(pts));
}

}  // namespace

ArrowRep make_arrow(const SquarePresentation& p, std::shared_ptr<const CentralLattice> lattice, SampledPath path,
                    GroupElement u) {
  check_backend(p, u);
  if (!lattice) throw Error(ErrorCode::InvalidArgument, "arrow needs a lattice");
  if (lattice->backend() != p.group()) throw Error(ErrorCode::InvalidArgument, "lattice backend differs");
  return ArrowRep{std::move(path), std::move(u), std::move(lattice)};
}

ArrowRep arrow_unit(const SquarePresentation& p, std::shared_ptr<const CentralLattice> lattice, const Point& m) {
  return make_arrow(p, std::move(lattice), SampledPath::constant(m), group_identity(p.group()));
}

ArrowRep arrow_mul(const SquarePresentation& p, const ArrowRep& second, const ArrowRep& first,
                   const IntegratorOptions& opts) {
  check_backend(p, first.u);
  check_backend(p, second.u);
  if ((first.target() - second.source()).norm() > opts.point_tol)
    throw Error(ErrorCode::InvalidArgument, "arrows are not composable");
  GroupElement t = transport(p, first.path, group_identity(p.group()), opts.scheme);
  GroupElement u = group_mul(group_mul(group_mul(t, second.u), group_inv(t)), first.u);
  return ArrowRep{concat(second.path, first.path), u, first.lattice};
}

ArrowRep arrow_inv(const SquarePresentation& p, const ArrowRep& a, const IntegratorOptions& opts) {
  check_backend(p, a.u);
  GroupElement t = transport(p, a.path, group_identity(p.group()), opts.scheme);
  GroupElement u = group_mul(group_mul(group_inv(t), group_inv(a.u)), t);
  return ArrowRep{a.path.reversed(), u, a.lattice};
}

GroupElement hol_canonical(const SquarePresentation& p, const SampledPath& loop, const CentralLattice& lattice,
                           const IntegratorOptions& opts) {
  if (!loop.is_loop(opts.point_tol)) throw Error(ErrorCode::InvalidArgument, "holonomy needs a loop");
  if (lattice.backend() != p.group()) throw Error(ErrorCode::InvalidArgument, "lattice backend differs");
  const GroupElement e = group_identity(p.group());
  auto h_at = [&](double f) { return group_inv(transport(p, scaled_loop(loop, f), e, opts.scheme)); };
  // Holonomies along the contraction at the factors in `rows`; H(0) = e.
  std::map<double, GroupElement> rows;
  rows.emplace(0.0, e);
  for (double f : {0.5, 1.0}) rows.emplace(f, h_at(f));
  for (int depth = 0;; ++depth) {
    std::vector<double> split;
    for (auto it = rows.begin(); std::next(it) != rows.end(); ++it) {
      auto nx = std::next(it);
      if (group_distance(it->second, nx->second) > opts.jump_limit) split.push_back(0.5 * (it->first + nx->first));
    }
    if (split.empty()) break;
    if (depth >= opts.max_bisect)
      throw Error(ErrorCode::Numerical, "canonical contraction is discontinuous near factor " +
                                            std::to_string(split.front()) + "; supply a finer homotopy");
    for (double f : split) rows.emplace(f, h_at(f));
  }
  return lattice_reduce(lattice, rows.at(1.0));
}

EqResult arrow_eq(const SquarePresentation& p, const ArrowRep& a1, const ArrowRep& a0, const IntegratorOptions& opts) {
  check_backend(p, a0.u);
  check_backend(p, a1.u);
  if ((a1.source() - a0.source()).norm() > opts.point_tol || (a1.target() - a0.target()).norm() > opts.point_tol)
    return {false, std::numeric_limits<double>::infinity()};
  const CentralLattice& lat = *a0.lattice;
  SampledPath loop = concat(a1.path.reversed(), a0.path);
  GroupElement h = hol_canonical(p, loop, lat, opts);
  double d = quotient_distance(lat, a1.u, group_mul(h, a0.u));
  return {d <= opts.eq_tol, d};
}

SampledPath LocalChart::sigma(const Point& mt, const Point& ms) const {
  if (waypoint) return SampledPath::polyline({ms, *waypoint, mt}, samples_per_edge);
  return SampledPath::segment(ms, mt, samples_per_edge);
}

double sigma_modulus(const LocalChart& chart, const Point& mt, const Point& ms, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be positive");
  SampledPath base = chart.sigma(mt, ms);
  double worst = 0.0;
  const Point dirs[] = {Point(h, 0.0), Point(0.0, h)};
  for (int which = 0; which < 2; ++which)
    for (const Point& d : dirs) {
      SampledPath moved = which == 0 ? chart.sigma(mt + d, ms) : chart.sigma(mt, ms + d);
      for (std::size_t i = 0; i < base.size(); ++i)
        worst = std::max(worst, (moved.points()[i] - base.points()[i]).norm() / h);
    }
  return worst;
}

GroupElement transition_map(const SquarePresentation& p, const CentralLattice& lattice, const LocalChart& c1,
                            const LocalChart& c2, const Point& mt, const Point& ms, const IntegratorOptions& opts) {
  if (!c1.contains(mt, ms) || !c2.contains(mt, ms))
    throw Error(ErrorCode::InvalidArgument, "point pair lies outside a chart region");
  SampledPath bigon = concat(c2.sigma(mt, ms).reversed(), c1.sigma(mt, ms));
  return hol_canonical(p, bigon, lattice, opts);
}

CocycleReport cocycle_check(const SquarePresentation& p, const CentralLattice& lattice,
                            const std::vector<LocalChart>& charts,
                            const std::vector<std::pair<Point, Point>>& point_pairs, double h,
                            const IntegratorOptions& opts) {
  CocycleReport rep;
  const std::size_t n = charts.size();
  for (const auto& [mt, ms] : point_pairs) {
    std::vector<std::size_t> covering;
    for (std::size_t i = 0; i < n; ++i)
      if (charts[i].contains(mt, ms)) covering.push_back(i);
    if (covering.empty()) continue;
    ++rep.pairs;
    std::map<std::pair<std::size_t, std::size_t>, GroupElement> f;
    for (std::size_t i : covering)
      for (std::size_t j : covering)
        f.emplace(std::make_pair(i, j), transition_map(p, lattice, charts[i], charts[j], mt, ms, opts));
    for (std::size_t i : covering)
      for (std::size_t j : covering)
        for (std::size_t k : covering) {
          const GroupElement& f13 = f.at({i, k});
          GroupElement f23f12 = group_mul(f.at({j, k}), f.at({i, j}));
          rep.max_defect = std::max(rep.max_defect, quotient_distance(lattice, f13, f23f12));
          ++rep.triples;
        }
    for (std::size_t i : covering)
      for (std::size_t j : covering) {
        if (i == j) continue;
        for (const Point& d : {Point(h, 0.0), Point(0.0, h)}) {
          if (!charts[i].contains(mt + d, ms) || !charts[j].contains(mt + d, ms)) continue;
          GroupElement moved = transition_map(p, lattice, charts[i], charts[j], mt + d, ms, opts);
          rep.max_slope = std::max(rep.max_slope, quotient_distance(lattice, moved, f.at({i, j})) / h);
        }
      }
  }
  return rep;
}

IsotropySample isotropy_sample(const SquarePresentation& p, const CentralLattice& lattice, const Point& m,
                               const std::vector<SampledPath>& loops, const IntegratorOptions& opts) {
  IsotropySample out;
  for (const auto& l : loops) {
    if ((l.source() - m).norm() > opts.point_tol || !l.is_loop(opts.point_tol))
      throw Error(ErrorCode::InvalidArgument, "isotropy sample needs loops at the basepoint");
    out.elements.push_back(hol_canonical(p, l, lattice, opts));
  }
  auto lat = std::make_shared<const CentralLattice>(lattice);
  const GroupElement e = group_identity(p.group());
  for (std::size_t i = 0; i < loops.size(); ++i)
    for (std::size_t j = 0; j < loops.size(); ++j) {
      ArrowRep prod = arrow_mul(p, ArrowRep{loops[j], e, lat}, ArrowRep{loops[i], e, lat}, opts);
      GroupElement via_arrow = group_mul(hol_canonical(p, prod.path, lattice, opts), prod.u);
      GroupElement via_table = group_mul(out.elements[j], out.elements[i]);
      out.table_defect = std::max(out.table_defect, quotient_distance(lattice, via_arrow, via_table));
    }
  return out;
}

double flat_degeneration_defect(const std::vector<Point>& points) {
  if (points.empty()) throw Error(ErrorCode::InvalidArgument, "need at least one point");
  const int n = static_cast<int>(points.size());
  const Backend su2 = Backend::su2();
  SquarePresentation p = preset_trivial(su2);
  auto lat = std::make_shared<const CentralLattice>(su2, std::vector<GroupElement>{});
  const FiniteGroup q8 = FiniteGroup::quaternion8();
  const FiniteGroupoid pair = pair_groupoid(n);
  const FiniteGroupoid exact = product_groupoid(pair, q8);
  auto quat = [&](int k) {
    Vec c = Vec::Zero(4);
    c(k / 2) = (k % 2) ? -1.0 : 1.0;
    return GroupElement(su2, c);
  };
  std::vector<ArrowRep> arrows;
  for (int a = 0; a < exact.arrows(); ++a) {
    int base = a / q8.order;
    const Point& from = points[pair.source(base)];
    const Point& to = points[pair.target(base)];
    arrows.push_back(ArrowRep{SampledPath::segment(from, to, 100), quat(a % q8.order), lat});
  }
  double worst = 0.0;
  for (int x = 0; x < exact.arrows(); ++x)
    for (int y = 0; y < exact.arrows(); ++y) {
      int xy = exact.compose(x, y);
      if (xy < 0) continue;
      ArrowRep prod = arrow_mul(p, arrows[x], arrows[y]);
      worst = std::max(worst, (prod.u.coords() - arrows[xy].u.coords()).cwiseAbs().maxCoeff());
      worst = std::max(worst, (prod.source() - arrows[xy].source()).norm());
      worst = std::max(worst, (prod.target() - arrows[xy].target()).norm());
    }
  return worst;
}

namespace {

Point law_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.05, 0.95);
  double x = d(rng);
  return Point(x, d(rng));
}

SampledPath law_path(std::mt19937_64& rng, const Point& a, const Point& b) {
  return SampledPath::polyline({a, law_point(rng), b}, 100);
}

GroupElement law_element(std::mt19937_64& rng, const Backend& b) {
  std::normal_distribution<double> d(0.0, 1.0);
  Vec xi(b.algebra_dim());
  for (Eigen::Index k = 0; k < xi.size(); ++k) xi(k) = d(rng);
  return group_exp(b, xi);
}

}  // namespace

std::vector<LocalChart> default_charts() {
  return {{{Point(0.1, 0.1), Point(0.9, 0.9)}, {Point(0.1, 0.1), Point(0.9, 0.9)}, std::nullopt},
          {{Point(0.2, 0.1), Point(0.9, 0.8)}, {Point(0.1, 0.2), Point(0.8, 0.9)}, Point(0.5, 0.2)},
          {{Point(0.1, 0.2), Point(0.8, 0.9)}, {Point(0.2, 0.1), Point(0.9, 0.8)}, Point(0.3, 0.8)}};
}

LawReport check_laws(const SquarePresentation& p, const std::shared_ptr<const CentralLattice>& lat, int triples,
                     std::mt19937_64& rng, const IntegratorOptions& io) {
  LawReport r;
  const Backend& b = p.group();
  for (int i = 0; i < triples; ++i) {
    Point m0 = law_point(rng), m1 = law_point(rng), m2 = law_point(rng), m3 = law_point(rng);
    ArrowRep a{law_path(rng, m0, m1), law_element(rng, b), lat};
    ArrowRep bb{law_path(rng, m1, m2), law_element(rng, b), lat};
    ArrowRep c{law_path(rng, m2, m3), law_element(rng, b), lat};
    ArrowRep e0 = arrow_unit(p, lat, m0), e1 = arrow_unit(p, lat, m1);
    r.unit = std::max({r.unit, arrow_eq(p, arrow_mul(p, e1, a, io), a, io).defect,
                       arrow_eq(p, arrow_mul(p, a, e0, io), a, io).defect});
    ArrowRep ai = arrow_inv(p, a, io);
    r.inverse = std::max({r.inverse, arrow_eq(p, arrow_mul(p, a, ai, io), e1, io).defect,
                          arrow_eq(p, arrow_mul(p, ai, a, io), e0, io).defect});
    r.double_inverse = std::max(r.double_inverse, arrow_eq(p, arrow_inv(p, ai, io), a, io).defect);
    r.associativity =
        std::max(r.associativity, arrow_eq(p, arrow_mul(p, c, arrow_mul(p, bb, a, io), io),
                                           arrow_mul(p, arrow_mul(p, c, bb, io), a, io), io)
                                      .defect);
    ++r.triples;
  }
  return r;
}

}  // namespace tla
