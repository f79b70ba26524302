#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "doctest.h"
#include "tla/errors.hpp"
#include "tla/field_expr.hpp"

using namespace tla;

namespace {

// Composite Simpson rule on n (even) panels.
template <class F>
double simpson(F&& f, double a, double b, int n) {
  double h = (b - a) / n, sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return sum * h / 3.0;
}

double raw_bump(double u) { return (u <= 0 || u >= 1) ? 0.0 : std::exp(-1.0 / (u * (1.0 - u))); }

}  // namespace

TEST_CASE("bump normalizer matches an independent quadrature") {
  double z = simpson(raw_bump, 0.0, 1.0, 20000);
  CHECK(bump_normalizer() == doctest::Approx(z).epsilon(1e-12));
  CHECK(bump_normalizer() == doctest::Approx(0.007029858406609657).epsilon(1e-13));
  CHECK(simpson(bump, 0.0, 1.0, 20000) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("bump and step are flat outside (0,1)") {
  for (double u : {-1.0, -1e-9, 0.0, 1.0, 1.0 + 1e-12, 3.0}) CHECK(bump(u) == 0.0);
  CHECK(smooth_step(0.0) == 0.0);
  CHECK(smooth_step(-0.5) == 0.0);
  CHECK(smooth_step(1.0) == 1.0);
  CHECK(smooth_step(2.0) == 1.0);
  CHECK(bump(0.01) < 1e-40);
}

TEST_CASE("step is the running integral of bump") {
  for (double u : {0.05, 0.2, 0.37, 0.5, 0.61, 0.9, 0.999}) {
    double ref = simpson(bump, 0.0, u, 4000);
    CHECK(smooth_step(u) == doctest::Approx(ref).epsilon(1e-11));
    CHECK(smooth_step(u) + smooth_step(1.0 - u) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(richardson_partial(smooth_step, u, 1e-4) == doctest::Approx(bump(u)).epsilon(1e-7));
  }
}

TEST_CASE("precedence and associativity") {
  CHECK(FieldExpr::parse("1 + 2 * 3").eval(0, 0, 0) == 7.0);
  CHECK(FieldExpr::parse("2 ^ 3 ^ 2").eval(0, 0, 0) == 512.0);
  CHECK(FieldExpr::parse("-2 ^ 2").eval(0, 0, 0) == -4.0);
  CHECK(FieldExpr::parse("2 ^ -1").eval(0, 0, 0) == 0.5);
  CHECK(FieldExpr::parse("8 / 4 / 2").eval(0, 0, 0) == 1.0);
  CHECK(FieldExpr::parse("1 - 2 - 3").eval(0, 0, 0) == -4.0);
  CHECK(FieldExpr::parse("s*t + lam").eval(2, 3, 4) == 10.0);
  CHECK(FieldExpr::parse("cos(pi)").eval(0, 0, 0) == -1.0);
  CHECK(FieldExpr::parse("sqrt(16) + exp(0) + sin(0)").eval(0, 0, 0) == 5.0);
  CHECK(FieldExpr::parse("1.5e2 + .5 + 2E-1").eval(0, 0, 0) == doctest::Approx(150.7));
}

TEST_CASE("parse errors carry offset and expected tokens") {
  auto offset_of = [](const char* text) -> long {
    try {
      FieldExpr::parse(text);
    } catch (const ParseError& e) {
      CHECK(!e.expected().empty());
      return static_cast<long>(e.offset());
    }
    return -1;
  };
  CHECK(offset_of("1 +") == 3);
  CHECK(offset_of("sin 2") == 4);
  CHECK(offset_of("foo(s)") == 0);
  CHECK(offset_of("(s + t") == 6);
  CHECK(offset_of("s t") == 2);
  CHECK(offset_of("") == 0);
  CHECK(offset_of("1e999") == 0);
}

TEST_CASE("evaluation errors") {
  CHECK_THROWS_AS(FieldExpr::parse("1 / (s - s)").eval(1, 0, 0), EvalError);
  CHECK_THROWS_AS(FieldExpr::parse("sqrt(s)").eval(-1, 0, 0), EvalError);
  CHECK_THROWS_AS(FieldExpr::parse("exp(1000)").eval(0, 0, 0), EvalError);
  CHECK_THROWS_AS(FieldExpr::parse("(-1) ^ 0.5").eval(0, 0, 0), EvalError);
}

TEST_CASE("to_string round trips values exactly") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const char* samples[] = {
      "-lam*(1-step((t-0.1)/0.8))*bump((s-0.1)/0.8)/0.8",
      "sin(s)^2 + cos(t)*exp(-lam) - 1/3",
      "2^t^2 - -s",
      "sqrt(1 + s*s) * 0.1234567890123",
  };
  for (const char* text : samples) {
    FieldExpr e = FieldExpr::parse(text);
    FieldExpr back = FieldExpr::parse(e.to_string());
    CHECK(back.to_string() == e.to_string());
    for (int i = 0; i < 100; ++i) {
      double s = u(rng), t = u(rng), lam = u(rng);
      CHECK(back.eval(s, t, lam) == e.eval(s, t, lam));
    }
  }
  FieldExpr lc = FieldExpr::linear_combination({-0.25, 3.0, 0.0}, {FieldExpr::parse("s"), FieldExpr::parse("t"),
                                                                  FieldExpr::parse("lam")});
  CHECK(FieldExpr::parse(lc.to_string()).eval(1.0, 2.0, 5.0) == 5.75);
}

TEST_CASE("partial derivatives against analytic values") {
  FieldExpr e = FieldExpr::parse("sin(s) * t^2 + exp(lam * s)");
  double s = 0.3, t = 0.7, lam = 1.1;
  CHECK(partial(e, Var::S, s, t, lam) == doctest::Approx(std::cos(s) * t * t + lam * std::exp(lam * s)).epsilon(1e-10));
  CHECK(partial(e, Var::T, s, t, lam) == doctest::Approx(2 * std::sin(s) * t).epsilon(1e-10));
  CHECK(partial(e, Var::Lam, s, t, lam) == doctest::Approx(s * std::exp(lam * s)).epsilon(1e-10));
}

TEST_CASE("fuzzed inputs either parse or raise ParseError") {
  std::mt19937_64 rng(17);
  const std::string alphabet = "st lam pi()+-*/^.0123456789e sin cos bump step,#";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> len(0, 40);
  int parsed = 0;
  for (int i = 0; i < 5000; ++i) {
    std::string text;
    int n = len(rng);
    for (int k = 0; k < n; ++k) text += alphabet[pick(rng)];
    try {
      FieldExpr e = FieldExpr::parse(text);
      ++parsed;
      try {
        e.eval(0.3, 0.6, 1.0);
      } catch (const EvalError&) {
      }
    } catch (const ParseError&) {
    }
  }
  CHECK(parsed > 0);
  std::string deep(5000, '(');
  CHECK_THROWS_AS(FieldExpr::parse(deep + "1"), ParseError);
  CHECK_THROWS_AS(FieldExpr::parse(std::string(5000, '-') + "1"), ParseError);
}
