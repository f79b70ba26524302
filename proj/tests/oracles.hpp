#pragma once

#include <cmath>
#include <functional>

// Reference formulas computed without the library.
namespace tla::oracle {

inline double raw_bump(double u) { return (u <= 0.0 || u >= 1.0) ? 0.0 : std::exp(-1.0 / (u * (1.0 - u))); }

// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return sum * h / 3.0;
}

inline double simpson2d(const std::function<double(double, double)>& f, double a0, double b0, double a1, double b1,
                        int n = 400) {
  return simpson([&](double x) { return simpson([&](double y) { return f(x, y); }, a1, b1, n); }, a0, b0, n);
}

inline double bump_normalizer() {
  static const double z = simpson(raw_bump, 0.0, 1.0, 4000);
  return z;
}

inline double bump(double u) { return raw_bump(u) / bump_normalizer(); }

// d/du of the normalized bump.
inline double bump_prime(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  double q = u * (1.0 - u);
  return bump(u) * (1.0 - 2.0 * u) / (q * q);
}

// Curvature density of abelian-bump(lam) with flat margin d: the connection is
// -lam (1 - step((t-d)/w)) bump((s-d)/w)/w ds, w = 1 - 2d.
inline double abelian_bump_curvature(double lam, double s, double t, double d = 0.1) {
  const double w = 1.0 - 2.0 * d;
  return -lam * bump((s - d) / w) / w * bump((t - d) / w) / w;
}

}  // namespace tla::oracle
