#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "tla/errors.hpp"
#include "tla/holonomy.hpp"
#include "tla/presentation.hpp"

using namespace tla;

namespace {

constexpr double kPi = 3.14159265358979323846;

const char* kSupport = "bump((s - 0.15)/0.7) * bump((t - 0.15)/0.7)";

std::string times_support(const std::string& e) { return "(" + e + ") * " + kSupport; }

}  // namespace

TEST_CASE("abelian-bump curvature matches the analytic density") {
  for (double lam : {1.0, -2.5}) {
    SquarePresentation p = preset_abelian_bump(lam);
    double worst = 0.0;
    for (int i = 1; i < 20; ++i)
      for (int j = 1; j < 20; ++j) {
        double s = i / 20.0, t = j / 20.0;
        worst = std::max(worst, std::abs(curvature(p, s, t)(0) - oracle::abelian_bump_curvature(lam, s, t)));
      }
    CHECK(worst <= 2e-5);
  }
}

TEST_CASE("total curvature of abelian-bump is -lam") {
  SquarePresentation p = preset_abelian_bump(2.7);
  double simpson = oracle::simpson2d([](double s, double t) { return oracle::abelian_bump_curvature(2.7, s, t); }, 0,
                                     1, 0, 1, 200);
  CHECK(simpson == doctest::Approx(-2.7).epsilon(1e-8));
  CHECK(curvature_integral(p, 0, 0, 1, 1)(0) == doctest::Approx(simpson).epsilon(1e-7));
}

TEST_CASE("pure gauge connections are flat") {
  SquarePresentation trivial = preset_trivial(Backend::su2());
  GaugeTransformation g = GaugeTransformation::from_exprs(
      Mat::Identity(3, 3), {times_support("1.2*s*s - 0.7*t + 0.3"), times_support("0.5*s*t + 0.9*t*t"),
                            times_support("-1.1*s + 0.4*t*t*s")});
  SquarePresentation p = apply_gauge(trivial, g);
  double worst = 0.0, size = 0.0;
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 20; ++j) {
      worst = std::max(worst, curvature(p, i / 20.0, j / 20.0).norm());
      size = std::max(size, p.theta(i / 20.0, j / 20.0).ds.norm());
    }
  CHECK(size > 0.1);
  CHECK(worst <= 5e-6);
}

TEST_CASE("abelian gauge transformation subtracts d mu") {
  SquarePresentation p = preset_abelian_bump(1.0);
  const double a = 0.8;
  GaugeTransformation g = GaugeTransformation::from_exprs(Mat::Identity(1, 1), {"0.8 * " + std::string(kSupport)});
  SquarePresentation q = apply_gauge(p, g);
  double worst = 0.0;
  for (int i = 1; i < 20; ++i)
    for (int j = 1; j < 20; ++j) {
      double s = i / 20.0, t = j / 20.0;
      double us = (s - 0.15) / 0.7, ut = (t - 0.15) / 0.7;
      double dmu_s = a * oracle::bump_prime(us) / 0.7 * oracle::bump(ut);
      double dmu_t = a * oracle::bump(us) * oracle::bump_prime(ut) / 0.7;
      FormValue before = p.theta(s, t), after = q.theta(s, t);
      worst = std::max({worst, std::abs(after.ds(0) - (before.ds(0) - dmu_s)),
                        std::abs(after.dt(0) - (before.dt(0) - dmu_t))});
    }
  CHECK(worst <= 2e-5);
}

TEST_CASE("gauge transformations preserve the classifying element") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> d(0.0, 0.7);
  SquarePresentation p = preset_su2_clutch();
  GroupElement c = classify_c(p).c;
  for (int trial = 0; trial < 3; ++trial) {
    Vec xi(3);
    for (int k = 0; k < 3; ++k) xi(k) = d(rng);
    char mu[3][96];
    for (auto& m : mu) std::snprintf(m, sizeof m, "%.5f*s - %.5f*t*t", d(rng), d(rng));
    GaugeTransformation g = GaugeTransformation::from_exprs(
        adjoint_matrix(group_exp(Backend::su2(), xi)), {times_support(mu[0]), times_support(mu[1]), times_support(mu[2])});
    CHECK(group_distance(classify_c(apply_gauge(p, g)).c, c) <= 1e-6);
  }
}

TEST_CASE("gauge composition agrees with successive application") {
  SquarePresentation p = preset_su2_clutch();
  GaugeTransformation g1 = GaugeTransformation::from_exprs(
      adjoint_matrix(group_exp(Backend::su2(), Vec::Constant(3, 0.4))), {times_support("s"), "0", times_support("t")});
  GaugeTransformation g2 =
      GaugeTransformation::from_exprs(Mat::Identity(3, 3), {"0", times_support("0.6*s*t"), times_support("-0.3")});
  SquarePresentation twice = apply_gauge(apply_gauge(p, g1), g2);
  SquarePresentation once = apply_gauge(p, compose_gauge(g2, g1));
  double worst = 0.0;
  for (int i = 0; i <= 10; ++i)
    for (int j = 0; j <= 10; ++j) {
      FormValue a = twice.theta(i / 10.0, j / 10.0), b = once.theta(i / 10.0, j / 10.0);
      worst = std::max({worst, (a.ds - b.ds).norm(), (a.dt - b.dt).norm()});
    }
  CHECK(worst <= 1e-9);
}

TEST_CASE("invalid gauges and framings are rejected") {
  SquarePresentation p = preset_su2_clutch();
  Mat not_auto = Mat::Identity(3, 3);
  not_auto(0, 0) = 2.0;
  CHECK_THROWS_AS(apply_gauge(p, GaugeTransformation::from_exprs(not_auto, {"0", "0", "0"})), Error);
  // f must be e near the collapsed boundary part.
  CHECK_THROWS_AS(apply_gauge(p, GaugeTransformation::from_exprs(Mat::Identity(3, 3), {"s", "0", "0"})), Error);
  try {
    SquarePresentation::from_exprs(LieAlgebra::su2(), Backend::su2(), {"t", "0", "0"}, {"0", "0", "0"}, 0.0);
    FAIL("framing violation accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Presentation);
  }
}

TEST_CASE("clutching presentations classify to their endpoint") {
  ClutchingPresentation ab = sampled_exp_clutch(Backend::abelian(1), Vec::Constant(1, 1.7), 801);
  CHECK(classify_c(clutch_to_square(ab)).c.coords()(0) == doctest::Approx(1.7).epsilon(1e-6));
  Vec xi = Vec::Zero(3);
  xi(2) = 2.0 * kPi;
  ClutchingPresentation su = sampled_exp_clutch(Backend::su2(), xi, 801);
  GroupElement minus_one(Backend::su2(), -Vec::Unit(4, 0));
  CHECK(group_distance(classify_c(clutch_to_square(su)).c, minus_one) <= 1e-6);
}

TEST_CASE("connected sums add abelian classes") {
  for (auto [a, b] : {std::pair{0.4, 1.3}, std::pair{-2.0, 0.75}}) {
    GroupElement c = classify_c(connect_sum(preset_abelian_bump(a), preset_abelian_bump(b))).c;
    CHECK(c.coords()(0) == doctest::Approx(a + b).epsilon(1e-6));
  }
}

TEST_CASE("induced curvature is the bracket with F") {
  SquarePresentation p = SquarePresentation::from_exprs(
      LieAlgebra::su2(), Backend::su2(), {times_support("s*t + 0.5"), times_support("t*t"), "0"},
      {"0", times_support("-0.8*s"), times_support("1 + s*s*t")}, 0.0);
  Section e3 = [](double, double) { return Vec(Vec::Unit(3, 2)); };
  double worst = 0.0, size = 0.0;
  for (int i = 1; i < 10; ++i)
    for (int j = 1; j < 10; ++j) {
      double s = i / 10.0, t = j / 10.0;
      Vec expected = p.algebra().bracket(curvature(p, s, t), Vec::Unit(3, 2));
      worst = std::max(worst, (induced_curvature_on(p, e3, s, t) - expected).norm());
      size = std::max(size, expected.norm());
    }
  CHECK(size > 1e-3);
  CHECK(worst <= 5e-6);
}

TEST_CASE("the center of R + su(2) is flat") {
  SquarePresentation p = preset_rsu2_twist();
  Section r = [](double, double) { return Vec(Vec::Unit(4, 0)); };
  double worst = 0.0;
  for (int i = 1; i < 10; ++i)
    for (int j = 1; j < 10; ++j) worst = std::max(worst, induced_curvature_on(p, r, i / 10.0, j / 10.0).norm());
  CHECK(worst <= 5e-6);
  CHECK(center_flatness_defect(p, 11) <= 5e-6);
  // The fixture is not flat in the su(2) part.
  CHECK(curvature(p, 0.5, 0.5).tail(3).norm() > 1e-3);
}

TEST_CASE("curvature transforms by Ad_f o Psi under gauge") {
  SquarePresentation p = SquarePresentation::from_exprs(
      LieAlgebra::su2(), Backend::su2(), {times_support("s - t*t"), times_support("0.7"), "0"},
      {times_support("s*t"), "0", times_support("1.3*s")}, 0.0);
  const std::vector<std::string> mu{"0.9*s*t", "-0.4 + s", "0.6*t*t"};
  Mat psi = adjoint_matrix(group_exp(Backend::su2(), Vec::Constant(3, -0.5)));
  std::vector<std::string> supported;
  for (const auto& m : mu) supported.push_back(times_support(m));
  SquarePresentation q = apply_gauge(p, GaugeTransformation::from_exprs(psi, supported));
  double worst = 0.0;
  for (int i = 1; i < 10; ++i)
    for (int j = 1; j < 10; ++j) {
      double s = i / 10.0, t = j / 10.0;
      Vec m(3);
      for (int k = 0; k < 3; ++k) m(k) = FieldExpr::parse(supported[k]).eval(s, t, 0.0);
      Vec expected = adjoint_matrix(group_exp(Backend::su2(), m)) * (psi * curvature(p, s, t));
      worst = std::max(worst, (curvature(q, s, t) - expected).norm());
    }
  CHECK(worst <= 5e-6);
}
