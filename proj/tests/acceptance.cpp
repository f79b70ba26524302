// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "tla/errors.hpp"
#include "tla/groupoid.hpp"
#include "tla/holonomy.hpp"
#include "tla/integrator.hpp"
#include "tla/lattice.hpp"
#include "tla/presentation.hpp"

using namespace tla;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Point rand_point(std::mt19937_64& rng, double lo = 0.1, double hi = 0.9) {
  std::uniform_real_distribution<double> d(lo, hi);
  double x = d(rng);
  return Point(x, d(rng));
}

Vec rand_vec(std::mt19937_64& rng, int n, double scale) {
  std::normal_distribution<double> d(0.0, scale);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = d(rng);
  return v;
}

struct Named {
  std::string name;
  SquarePresentation p;
};

std::vector<Named> group_presets() {
  return {{"abelian-bump", preset_abelian_bump(1.0)},
          {"su2-clutch", preset_su2_clutch()},
          {"sl2-clutch", preset_sl2_clutch()},
          {"euclid-clutch", preset_euclid_clutch()}};
}

Outcome criterion1() {
  Outcome o;
  double worst = 0.0, slowest = 0.0;
  ClassifyOptions opts;
  opts.path_samples = 400;
  for (double lam : {0.0, 0.5, 1.0, 2.7}) {
    auto t0 = std::chrono::steady_clock::now();
    GroupElement c = classify_c(preset_abelian_bump(lam), opts).c;
    double dt = seconds_since(t0);
    worst = std::max(worst, std::abs(c.coords()(0) - lam));
    slowest = std::max(slowest, dt);
  }
  o.pass = worst <= 1e-6 && slowest < 2.0;
  o.detail = fmt("max |c - lam| = %.3g, slowest run %.3f s", worst, slowest);
  return o;
}

Outcome criterion2() {
  Outcome o;
  SquarePresentation p = preset_su2_clutch();
  GroupElement minus_one(Backend::su2(), -Vec::Unit(4, 0));
  double d1 = group_distance(classify_c(p).c, minus_one);
  double d2 = dist_to_identity(classify_c(connect_sum(p, p)).c);
  o.pass = d1 <= 1e-6 && d2 <= 1e-6;
  o.detail = fmt("dist(c, -1) = %.3g, dist(c(P#P), e) = %.3g", d1, d2);
  return o;
}

Outcome criterion3() {
  Outcome o;
  const Vec z = Vec::Unit(3, 2);
  double period_err = 0.0, closed = 0.0;
  for (double s : {0.1, 1.0, 4.0}) {
    auto per = one_param_period(Backend::douady(s), z);
    period_err = std::max(period_err, per ? std::abs(*per - 4.0 * kPi) : INFINITY);
    closed = std::max(closed, dist_to_identity(group_exp(Backend::douady(s), 4.0 * kPi * z)));
  }
  double open = dist_to_identity(group_exp(Backend::douady(0.0), 4.0 * kPi * z));
  o.pass = period_err <= 1e-8 && open >= 1.0 && closed <= 1e-8;
  o.detail = fmt("period error %.3g, dist exp_0(4 pi z) = %.6g, max dist exp_s(4 pi z) = %.3g", period_err, open,
                 closed);
  return o;
}

std::string rand_mu_expr(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> amp(-1.0, 1.0), freq(0.5, 4.0);
  char buf[256];
  std::snprintf(buf, sizeof buf, "%.6f*bump((s-0.15)/0.7)*bump((t-0.15)/0.7)*cos(%.6f*s - %.6f*t)", amp(rng),
                freq(rng), freq(rng));
  return buf;
}

Outcome criterion4() {
  Outcome o;
  std::mt19937_64 rng(4);
  double worst = 0.0, kernel = 0.0;
  for (const auto& [name, p] : group_presets()) {
    const Backend& b = p.group();
    const int n = b.algebra_dim();
    GroupElement c0 = classify_c(p).c;
    for (int i = 0; i < 10; ++i) {
      Mat psi = adjoint_matrix(group_exp(b, rand_vec(rng, n, 0.8)));
      std::vector<std::string> mu;
      for (int k = 0; k < n; ++k) mu.push_back(rand_mu_expr(rng));
      GroupElement c1 = classify_c(apply_gauge(p, GaugeTransformation::from_exprs(psi, mu))).c;
      worst = std::max(worst, group_distance(c0, c1));
    }
    // f = c^{-1} constant with Psi = Ad_c acts trivially.
    Vec xi = rand_vec(rng, n, 0.8);
    std::vector<std::string> mu;
    for (int k = 0; k < n; ++k) mu.push_back(fmt("%.17g", -xi(k)));
    SquarePresentation q =
        apply_gauge(p, GaugeTransformation::from_exprs(adjoint_matrix(group_exp(b, xi)), mu, 0.1, 0));
    for (int i = 0; i <= 20; ++i) {
      for (int j = 0; j <= 20; ++j) {
        FormValue a = p.theta(i / 20.0, j / 20.0), bq = q.theta(i / 20.0, j / 20.0);
        kernel = std::max({kernel, (a.ds - bq.ds).cwiseAbs().maxCoeff(), (a.dt - bq.dt).cwiseAbs().maxCoeff()});
      }
    }
  }
  o.pass = worst <= 1e-6 && kernel <= 1e-10;
  o.detail = fmt("max |c - c'| = %.3g over 40 gauges, kernel pair defect %.3g", worst, kernel);
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lam(-3.0, 3.0);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    SquarePresentation p1 = preset_abelian_bump(lam(rng)), p2 = preset_abelian_bump(lam(rng));
    GroupElement lhs = classify_c(connect_sum(p1, p2)).c;
    GroupElement rhs = group_mul(classify_c(p1).c, classify_c(p2).c);
    worst = std::max(worst, group_distance(lhs, rhs));
  }
  const Backend su = Backend::su2();
  std::vector<std::pair<SquarePresentation, SquarePresentation>> pairs{
      {preset_su2_clutch(), preset_su2_clutch()},
      {preset_su2_clutch(), preset_exp_clutch(su, 2.0 * kPi * Vec::Unit(3, 0))},
      {preset_exp_clutch(su, 4.0 * kPi * Vec::Unit(3, 1)), preset_su2_clutch()},
      {preset_trivial(su), preset_exp_clutch(su, -2.0 * kPi * Vec::Unit(3, 2))}};
  for (const auto& [p1, p2] : pairs) {
    GroupElement lhs = classify_c(connect_sum(p1, p2)).c;
    GroupElement rhs = group_mul(classify_c(p1).c, classify_c(p2).c);
    worst = std::max(worst, group_distance(lhs, rhs));
  }
  o.pass = worst <= 1e-6;
  o.detail = fmt("max dist(c(P'#P), c(P')c(P)) = %.3g over 14 pairs", worst);
  return o;
}

Outcome criterion6() {
  Outcome o;
  const Backend r = Backend::abelian(1);
  CentralLattice irr(r, {GroupElement(r, Vec::Constant(1, 1.0)), GroupElement(r, Vec::Constant(1, std::sqrt(2.0)))});
  bool non_discrete = !lattice_discreteness(irr).discrete;
  auto family = [](double lam) { return preset_abelian_bump(lam); };
  std::vector<double> wide, narrow;
  for (int i = 0; i <= 20; ++i) wide.push_back(-1.0 + 0.1 * i);
  for (int i = 0; i <= 10; ++i) narrow.push_back(0.5 + 0.05 * i);
  ScanResult a = local_uniform_check(family, wide);
  ScanResult b = local_uniform_check(family, narrow);
  o.pass = non_discrete && !a.pass && std::abs(a.witness) <= 0.05 && b.pass && std::abs(b.min_gap - 0.5) <= 1e-6;
  o.detail = std::string(non_discrete ? "<1, sqrt 2> non-discrete" : "<1, sqrt 2> reported discrete") +
             fmt(", [-1,1]: witness %.3g, [0.5,1]: min_gap %.9f", a.pass ? NAN : a.witness, b.min_gap);
  return o;
}

Outcome criterion7() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  std::vector<FixtureResult> results = fixture_suite();
  double dt = seconds_since(t0);
  int passed = 0;
  bool counterexample_a = false;
  for (const auto& r : results) {
    passed += r.pass ? 1 : 0;
    if (!r.expect_valid && !r.report.ok && r.report.condition == "(a)") counterexample_a = true;
  }
  o.pass = passed == static_cast<int>(results.size()) && counterexample_a && dt < 10.0;
  o.detail = fmt("%.0f/%.0f fixtures, %.3f s", passed, static_cast<double>(results.size()), dt) +
             (counterexample_a ? ", condition (a) counterexample found" : ", no condition (a) counterexample");
  return o;
}

Outcome criterion8() {
  Outcome o;
  SquarePresentation bump = preset_abelian_bump(1.0);
  CentralLattice lat = monodromy_generators({bump});
  const Point lo(0.3, 0.25), hi(0.65, 0.7);
  SampledHomotopy sweep = SampledHomotopy::sweep_to_edge(lo, hi);
  SampledHomotopy straight = SampledHomotopy::straight_line(sweep.loop());
  double h1 = hol_contractible(bump, straight, lat).raw.coords()(0);
  double h2 = hol_contractible(bump, sweep, lat).raw.coords()(0);
  double diff = h1 - h2;
  double off = std::abs(diff - std::round(diff));

  std::mt19937_64 rng(8);
  double equiv = 0.0;
  for (const auto& [name, p] : group_presets()) {
    CentralLattice l = monodromy_generators({p});
    for (int i = 0; i < 20; ++i) {
      Point m = rand_point(rng), q = rand_point(rng);
      SampledPath loop = SampledPath::polyline({m, rand_point(rng), rand_point(rng), m}, 100);
      SampledPath gamma = SampledPath::polyline({m, rand_point(rng), q}, 100);
      equiv = std::max(equiv, hol_equivariance_check(p, loop, gamma, l));
    }
  }
  o.pass = off <= 1e-6 && equiv <= 1e-6;
  o.detail = fmt("contractions differ by %.9f (distance to Z %.3g), equivariance defect %.3g", diff, off, equiv);
  return o;
}

Outcome criterion9() {
  Outcome o;
  SquarePresentation bump = preset_abelian_bump(1.0);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> d(0.05, 0.95);
  double stokes = 0.0;
  for (int i = 0; i < 10; ++i) {
    double a = d(rng), b = d(rng), c = d(rng), e = d(rng);
    Point lo(std::min(a, b), std::min(c, e)), hi(std::max(a, b), std::max(c, e));
    double hol = -transport(bump, rectangle_loop(lo, hi), group_identity(bump.group())).coords()(0);
    double integral = curvature_integral(bump, lo.x(), lo.y(), hi.x(), hi.y())(0);
    stokes = std::max(stokes, std::abs(hol + integral));
  }

  SquarePresentation smooth = preset_su2_clutch();
  const Point a(0.3, 0.2), b(0.7, 0.6);
  GroupElement e = group_identity(smooth.group());
  GroupElement ref = transport(smooth, SampledPath::uniform_segment(a, b, 6401), e);
  auto err = [&](int n, TransportScheme s) {
    return group_distance(transport(smooth, SampledPath::uniform_segment(a, b, n + 1), e, s), ref);
  };
  double m1 = err(40, TransportScheme::Midpoint), m2 = err(80, TransportScheme::Midpoint);
  double g1 = err(40, TransportScheme::GaussMagnus4), g2 = err(80, TransportScheme::GaussMagnus4);
  double ratio = m1 / m2;
  o.pass = stokes <= 1e-6 && ratio >= 3.5 && ratio <= 4.5;
  o.detail = fmt("Stokes defect %.3g, midpoint ratio %.4f", stokes, ratio) +
             fmt(" (Gauss-Magnus ratio %.3g, errors %.3g -> %.3g, info)", g1 / g2, g1, g2);
  return o;
}

Outcome criterion10() {
  Outcome o;
  std::mt19937_64 rng(10);
  double laws = 0.0, cocycle = 0.0;
  int triples = 0;
  std::vector<std::pair<Point, Point>> pts;
  for (int i = 0; i < 6; ++i) pts.emplace_back(rand_point(rng, 0.25, 0.75), rand_point(rng, 0.25, 0.75));
  for (const auto& [name, p] : group_presets()) {
    auto lat = std::make_shared<const CentralLattice>(monodromy_generators({p}));
    LawReport r = check_laws(p, lat, 100, rng);
    laws = std::max({laws, r.unit, r.inverse, r.double_inverse, r.associativity});
    triples += r.triples;
    cocycle = std::max(cocycle, cocycle_check(p, *lat, default_charts(), pts).max_defect);
  }
  double flat = flat_degeneration_defect({Point(0.2, 0.2), Point(0.8, 0.3), Point(0.5, 0.7), Point(0.3, 0.9)});
  o.pass = laws <= 1e-6 && flat == 0.0 && cocycle <= 1e-6;
  o.detail = fmt("law defect %.3g on %.0f triples, flat defect %.3g", laws, triples, flat) +
             fmt(", cocycle defect %.3g", cocycle);
  return o;
}

Outcome criterion11() {
  Outcome o;
  SquarePresentation p = preset_rsu2_twist();
  const LieAlgebra& k = p.algebra();
  double flat = center_flatness_defect(p, 21);
  std::vector<Section> sections{
      [](double s, double t) {
        Vec v(4);
        v << 0.0, std::sin(2 * s + t), std::cos(3 * t), s * t;
        return v;
      },
      [](double s, double t) {
        Vec v(4);
        v << 1.0 + s, 0.5, -t * t, std::exp(-s);
        return v;
      }};
  double worst = 0.0;
  for (int i = 1; i < 20; ++i) {
    for (int j = 1; j < 20; ++j) {
      double s = i / 20.0, t = j / 20.0;
      Vec f = curvature(p, s, t);
      for (const auto& sigma : sections) {
        Vec diff = induced_curvature_on(p, sigma, s, t) - k.bracket(f, sigma(s, t));
        worst = std::max(worst, diff.norm());
      }
    }
  }
  o.pass = flat <= 5e-6 && worst <= 5e-6;
  o.detail = fmt("center flatness %.3g, max |R sigma - [F, sigma]| = %.3g", flat, worst);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"abelian classification", criterion1},
      {"su(2) classification", criterion2},
      {"Douady fiber period", criterion3},
      {"gauge invariance", criterion4},
      {"homomorphism law", criterion5},
      {"obstruction checks", criterion6},
      {"finite groupoid suite", criterion7},
      {"holonomy properties", criterion8},
      {"Stokes and convergence", criterion9},
      {"integrator laws", criterion10},
      {"connection on the center", criterion11}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
      o = criteria[i].second();
    } catch (const Error& e) {
      o.pass = false;
      o.detail = std::string(error_code_name(e.code())) + ": " + e.what();
    }
    double dt = seconds_since(t0);
    failed += o.pass ? 0 : 1;
    std::printf("%s %2zu %-26s %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), dt);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
