#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tla/errors.hpp"
#include "tla/holonomy.hpp"

using namespace tla;

namespace {

const char* kSupport = "bump((s - 0.15)/0.7) * bump((t - 0.15)/0.7)";

double mod_distance(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0) r += period;
  return std::min(r, period - r);
}

Point random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.1, 0.9);
  double x = d(rng);
  return Point(x, d(rng));
}

}  // namespace

TEST_CASE("transport along a constant direction is the exponential") {
  // theta = xi g(t) dt on the line s = 0.5, with g integrating to 1.
  const double xi[3] = {0.7, -1.1, 0.4};
  const std::string window = "step((s - 0.1)/0.1) * (1 - step((s - 0.8)/0.1))";
  const std::string g = "bump((t - 0.15)/0.7)/0.7";
  std::vector<std::string> dt;
  for (double x : xi) dt.push_back(std::to_string(x) + " * " + window + " * " + g);
  SquarePresentation p =
      SquarePresentation::from_exprs(LieAlgebra::su2(), Backend::su2(), {"0", "0", "0"}, dt, 0.0);
  GroupElement e = group_identity(Backend::su2());
  GroupElement got = transport(p, SampledPath::segment(Point(0.5, 0.0), Point(0.5, 1.0), 400), e);
  // e_k acts as q_k / 2: exp(xi) = (cos |xi|/2, sin(|xi|/2) xi/|xi|).
  double n = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
  Vec q(4);
  q << std::cos(n / 2), std::sin(n / 2) * xi[0] / n, std::sin(n / 2) * xi[1] / n, std::sin(n / 2) * xi[2] / n;
  CHECK((got.coords() - q).norm() <= 1e-7);
}

TEST_CASE("transport composes along concatenated paths") {
  SquarePresentation p = preset_su2_clutch();
  GroupElement e = group_identity(Backend::su2());
  SampledPath a = SampledPath::segment(Point(0.2, 0.3), Point(0.6, 0.7));
  SampledPath b = SampledPath::segment(Point(0.6, 0.7), Point(0.8, 0.2));
  GroupElement ta = transport(p, a, e), tb = transport(p, b, e);
  CHECK(group_distance(transport(p, concat(b, a), e), group_mul(ta, tb)) <= 1e-12);
  CHECK(group_distance(transport(p, a.reversed(), e), group_inv(ta)) <= 1e-9);
}

TEST_CASE("abelian-bump classifies to lam against a Simpson oracle") {
  for (double lam : {2.7, -0.6}) {
    double integral =
        oracle::simpson2d([&](double s, double t) { return oracle::abelian_bump_curvature(lam, s, t); }, 0, 1, 0, 1, 200);
    ClassifyResult r = classify_c(preset_abelian_bump(lam));
    CHECK(r.c.coords()(0) == doctest::Approx(-integral).epsilon(1e-6));
    CHECK(std::abs(r.c.coords()(0) - lam) <= 1e-6);
  }
}

TEST_CASE("su2-clutch classifies to -1 and its square to e") {
  SquarePresentation p = preset_su2_clutch();
  ClassifyResult r = classify_c(p);
  CHECK(r.c.coords()(0) == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(r.c.coords().tail(3).norm() <= 1e-6);
  CHECK(r.central_defect <= 1e-6);
  CHECK(dist_to_identity(classify_c(connect_sum(p, p)).c) <= 1e-6);
  CHECK(r.trace.values.size() == r.trace.taus.size());
}

TEST_CASE("non-central sweep endpoints are reported") {
  Vec xi = Vec::Zero(3);
  xi(0) = 1.0;
  try {
    classify_c(preset_exp_clutch(Backend::su2(), xi));
    FAIL("non-central endpoint accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonCentral);
  }
}

TEST_CASE("Hol of a square loop is minus the enclosed curvature mod lam") {
  for (double lam : {1.0, 1.7}) {
    SquarePresentation p = preset_abelian_bump(lam);
    CentralLattice lat = monodromy_generators({p});
    const Point lo(0.3, 0.3), hi(0.7, 0.7);
    double enclosed = oracle::simpson2d([&](double s, double t) { return oracle::abelian_bump_curvature(lam, s, t); },
                                        lo.x(), hi.x(), lo.y(), hi.y(), 200);
    HolResult h = hol_contractible(p, SampledHomotopy::straight_line(rectangle_loop(lo, hi)), lat);
    CHECK_FALSE(h.leak);
    CHECK(mod_distance(h.reduced.coords()(0) + enclosed, lam) <= 1e-6);
  }
}

TEST_CASE("two contractions differ by a lattice element") {
  const double lam = 1.7;
  SquarePresentation p = preset_abelian_bump(lam);
  CentralLattice lat = monodromy_generators({p});
  SampledHomotopy sweep = SampledHomotopy::sweep_to_edge(Point(0.3, 0.3), Point(0.7, 0.7));
  SampledHomotopy radial = SampledHomotopy::straight_line(sweep.loop());
  CHECK(is_sphere_thin(sweep.rows().back()));
  CHECK(is_sphere_thin(radial.rows().back()));
  double a = hol_contractible(p, sweep, lat).raw.coords()(0);
  double b = hol_contractible(p, radial, lat).raw.coords()(0);
  CHECK(std::abs(std::abs(a - b) - lam) <= 1e-6);
  CHECK(mod_distance(a - b, lam) <= 1e-6);
}

TEST_CASE("Hol is equivariant under conjugation by transport") {
  std::mt19937_64 rng(31);
  SquarePresentation bump = preset_abelian_bump(1.0);
  CentralLattice bl = monodromy_generators({bump});
  SquarePresentation su = SquarePresentation::from_exprs(
      LieAlgebra::su2(), Backend::su2(),
      {std::string("(s*t - 0.4) * ") + kSupport, std::string("1.5 * t * ") + kSupport, "0"},
      {"0", std::string("(0.3 + s*s) * ") + kSupport, std::string("-2 * s * t * ") + kSupport}, 0.0);
  CentralLattice sl = monodromy_generators({su});
  for (int i = 0; i < 5; ++i) {
    Point m = random_point(rng), q = random_point(rng);
    SampledPath loop = SampledPath::polyline({m, random_point(rng), random_point(rng), m}, 100);
    SampledPath gamma = SampledPath::polyline({m, q}, 100);
    CHECK(hol_equivariance_check(bump, loop, gamma, bl) <= 1e-8);
    CHECK(hol_equivariance_check(su, loop, gamma, sl) <= 1e-6);
  }
}

TEST_CASE("monodromy lattices of abelian families") {
  CentralLattice irr = monodromy_generators({preset_abelian_bump(1.0), preset_abelian_bump(std::sqrt(2.0))});
  CHECK_FALSE(lattice_discreteness(irr).discrete);
  CentralLattice ok = monodromy_generators({preset_abelian_bump(0.5), preset_abelian_bump(1.5)});
  Discreteness d = lattice_discreteness(ok);
  CHECK(d.discrete);
  CHECK(d.min_generator_norm == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("local uniformity scan over abelian families") {
  auto family = [](double lam) { return preset_abelian_bump(lam); };
  ScanResult pass = local_uniform_check(family, {0.5, 0.6, 0.7, 0.8, 0.9, 1.0});
  CHECK(pass.pass);
  CHECK(std::abs(pass.min_gap - 0.5) <= 1e-6);
  ScanResult fail = local_uniform_check(family, {-1.0, -0.5, 0.0, 0.5, 1.0});
  CHECK_FALSE(fail.pass);
  CHECK(std::abs(fail.witness) <= 0.05);
}

TEST_CASE("thinness detects loops that wrap the sphere") {
  SampledPath there_and_back = SampledPath::polyline({Point(0.3, 0.3), Point(0.6, 0.4), Point(0.3, 0.3)}, 50);
  CHECK(is_sphere_thin(there_and_back));
  CHECK_FALSE(is_sphere_thin(rectangle_loop(Point(0.3, 0.3), Point(0.6, 0.6))));
}

TEST_CASE("abelian transport adds the line integral of theta") {
  SquarePresentation p = preset_abelian_bump(1.3);
  const Point a(0.15, 0.8), b(0.85, 0.25);
  GroupElement g0(Backend::abelian(1), Vec::Constant(1, 0.4));
  GroupElement got = transport(p, SampledPath::uniform_segment(a, b, 401), g0);
  // theta_s only: the pullback along a straight segment is theta_s(gamma(x)) (b - a).x dx.
  const double d = 0.1, w = 0.8;
  auto theta_s = [&](double s, double t) {
    double rise = oracle::simpson(oracle::bump, 0.0, std::clamp((t - d) / w, 0.0, 1.0), 400);
    return -1.3 * (1.0 - rise) * oracle::bump((s - d) / w) / w;
  };
  double integral = oracle::simpson(
      [&](double x) {
        Point q = a + x * (b - a);
        return theta_s(q.x(), q.y()) * (b.x() - a.x());
      },
      0.0, 1.0, 400);
  CHECK(got.coords()(0) == doctest::Approx(0.4 + integral).epsilon(1e-8));
}
