#include "tla/group.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "tla/errors.hpp"

namespace tla {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_same(const GroupElement& a, const GroupElement& b) {
  if (a.backend() != b.backend()) {
    throw Error(ErrorCode::InvalidArgument,
                "group elements from different backends: " + a.backend().name() + " vs " + b.backend().name());
  }
}

void require_algebra_vec(const Backend& b, const Vec& xi) {
  if (xi.size() != b.algebra_dim()) {
    throw Error(ErrorCode::InvalidArgument, "algebra vector has dimension " + std::to_string(xi.size()) +
                                                ", backend " + b.name() + " expects " +
                                                std::to_string(b.algebra_dim()));
  }
}

// ---- SU(2) as unit quaternions (w, x, y, z) ----

Vec quat_mul(const Vec& p, const Vec& q) {
  Vec r(4);
  r[0] = p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3];
  r[1] = p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2];
  r[2] = p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1];
  r[3] = p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0];
  double n = r.norm();
  if (n != 1.0) r /= n;
  return r;
}

Vec su2_exp(const Vec& xi) {
  double norm = xi.norm();
  double half = 0.5 * norm;
  Vec q(4);
  q[0] = std::cos(half);
  // sin(|xi|/2)/|xi| -> 1/2 as |xi| -> 0.
  double f = norm < 1e-8 ? 0.5 - norm * norm / 48.0 : std::sin(half) / norm;
  q.tail<3>() = f * xi;
  return q;
}

Vec su2_log(const Vec& q) {
  Eigen::Vector3d v = q.tail<3>();
  double vn = v.norm();
  if (vn == 0.0) return Vec::Zero(3);
  double angle = 2.0 * std::atan2(vn, q[0]);
  return (angle / vn) * Vec(v);
}

Vec su2_rotate(const Vec& q, const Vec& xi) {
  Eigen::Quaterniond quat(q[0], q[1], q[2], q[3]);
  Eigen::Vector3d v(xi[0], xi[1], xi[2]);
  Eigen::Vector3d r = quat.toRotationMatrix() * v;
  return Vec(r);
}

// ---- Universal cover of SL(2,R): g = K(theta) A(a) N(n) ----

using M2 = Eigen::Matrix2d;

M2 sl2_matrix(const Vec& c) {
  double th = c[0], a = c[1], n = c[2];
  double co = std::cos(th), si = std::sin(th);
  M2 m;
  m << a * co, a * n * co - si / a, a * si, a * n * si + co / a;
  return m;
}

// Decompose a matrix; theta is lifted to the real line nearest `hint`.
Vec sl2_from_matrix(const M2& m, double hint) {
  double p = m(0, 0), q = m(1, 0);
  double a = std::hypot(p, q);
  double th_principal = std::atan2(q, p);
  double co = p / a, si = q / a;
  double n = (co * m(0, 1) + si * m(1, 1)) / a;
  Vec c(3);
  c[0] = hint + std::remainder(th_principal - hint, kTwoPi);
  c[1] = a;
  c[2] = n;
  return c;
}

M2 sl2_algebra_matrix(const Vec& xi) {
  M2 x;
  x << 0.5 * xi[0], 0.5 * (xi[1] - xi[2]), 0.5 * (xi[1] + xi[2]), -0.5 * xi[0];
  return x;
}

Vec sl2_algebra_vec(const M2& x) {
  Vec xi(3);
  xi[0] = x(0, 0) - x(1, 1);
  xi[1] = x(0, 1) + x(1, 0);
  xi[2] = x(1, 0) - x(0, 1);
  return xi;
}

M2 sl2_matrix_exp(const Vec& xi) {
  M2 x = sl2_algebra_matrix(xi);
  // X^2 = q I for traceless X.
  double q = 0.25 * (xi[0] * xi[0] + xi[1] * xi[1] - xi[2] * xi[2]);
  double c, s;
  if (q > 1e-12) {
    double r = std::sqrt(q);
    c = std::cosh(r);
    s = std::sinh(r) / r;
  } else if (q < -1e-12) {
    double r = std::sqrt(-q);
    c = std::cos(r);
    s = std::sin(r) / r;
  } else {
    c = 1.0 + q / 2.0 + q * q / 24.0;
    s = 1.0 + q / 6.0 + q * q / 120.0;
  }
  return c * M2::Identity() + s * x;
}

Vec sl2_mul(const Vec& a, const Vec& b) {
  M2 m = sl2_matrix(a) * sl2_matrix(b);
  return sl2_from_matrix(m, a[0] + b[0]);
}

Vec sl2_inv(const Vec& a) {
  M2 m = sl2_matrix(a).inverse();
  return sl2_from_matrix(m, -a[0]);
}

Vec sl2_exp(const Vec& xi) {
  // Lift by repeated squaring of a small element, then snap to the closed form.
  double norm = xi.norm();
  int k = 0;
  while (norm / std::ldexp(1.0, k) > 0.25 && k < 200) ++k;
  Vec small = sl2_from_matrix(sl2_matrix_exp(xi / std::ldexp(1.0, k)), 0.0);
  Vec g = small;
  for (int i = 0; i < k; ++i) g = sl2_mul(g, g);
  return sl2_from_matrix(sl2_matrix_exp(xi), g[0]);
}

Vec sl2_log(const Vec& g) {
  M2 m = sl2_matrix(g);
  // Principal matrix logarithm; valid near the identity.
  Eigen::Matrix2d lg = m.log();
  return sl2_algebra_vec(lg);
}

// ---- Universal cover of SE(2): (phi, v) ----

Eigen::Vector2d rot(double phi, const Eigen::Vector2d& v) {
  double c = std::cos(phi), s = std::sin(phi);
  return {c * v[0] - s * v[1], s * v[0] + c * v[1]};
}

// V(c) = (1/c) [[sin c, -(1 - cos c)], [1 - cos c, sin c]].
Eigen::Matrix2d euc_v(double c) {
  double a, b;
  if (std::abs(c) < 1e-5) {
    a = 1.0 - c * c / 6.0;
    b = c / 2.0 - c * c * c / 24.0;
  } else {
    a = std::sin(c) / c;
    b = (1.0 - std::cos(c)) / c;
  }
  Eigen::Matrix2d v;
  v << a, -b, b, a;
  return v;
}

Vec euc_mul(const Vec& a, const Vec& b) {
  Eigen::Vector2d v = a.tail<2>() + rot(a[0], Eigen::Vector2d(b.tail<2>()));
  Vec r(3);
  r << a[0] + b[0], v[0], v[1];
  return r;
}

Vec euc_inv(const Vec& a) {
  Eigen::Vector2d v = -rot(-a[0], Eigen::Vector2d(a.tail<2>()));
  Vec r(3);
  r << -a[0], v[0], v[1];
  return r;
}

Vec euc_exp(const Vec& xi) {
  Eigen::Vector2d v = euc_v(xi[2]) * Eigen::Vector2d(xi[0], xi[1]);
  Vec r(3);
  r << xi[2], v[0], v[1];
  return r;
}

Vec euc_log(const Vec& g) {
  Eigen::Vector2d ab = euc_v(g[0]).inverse() * Eigen::Vector2d(g[1], g[2]);
  Vec r(3);
  r << ab[0], ab[1], g[0];
  return r;
}

Vec euc_adjoint(const Vec& g, const Vec& xi) {
  Eigen::Vector2d u = rot(g[0], Eigen::Vector2d(xi[0], xi[1]));
  // u' = R(phi) u - omega J v, J v = (-v2, v1).
  u[0] += xi[2] * g[2];
  u[1] -= xi[2] * g[1];
  Vec r(3);
  r << u[0], u[1], xi[2];
  return r;
}

Vec to_delegate(const Backend& b, const Vec& xi) {
  double sc = b.douady_scale();
  Vec r = xi;
  r[0] *= sc;
  r[1] *= sc;
  return r;
}

Vec from_delegate(const Backend& b, const Vec& xi) {
  double sc = b.douady_scale();
  Vec r = xi;
  r[0] /= sc;
  r[1] /= sc;
  return r;
}

double unit_of_center(const Backend& b) {
  return b.kind() == BackendKind::SL2Cover ? kPi : kTwoPi;
}

}  // namespace

Backend Backend::abelian(int n) {
  if (n <= 0) throw Error(ErrorCode::InvalidArgument, "abelian backend needs n > 0");
  return Backend(BackendKind::Abelian, n, 0.0);
}
Backend Backend::su2() { return Backend(BackendKind::SU2, 0, 0.0); }
Backend Backend::sl2_cover() { return Backend(BackendKind::SL2Cover, 0, 0.0); }
Backend Backend::euclidean_cover() { return Backend(BackendKind::EuclideanCover, 0, 0.0); }
Backend Backend::douady(double s) {
  if (!std::isfinite(s)) throw Error(ErrorCode::InvalidArgument, "Douady parameter must be finite");
  return Backend(BackendKind::DouadyFiber, 0, s);
}

Backend Backend::parse(const std::string& name) {
  if (name == "su2") return su2();
  if (name == "sl2-cover") return sl2_cover();
  if (name == "euclidean-cover") return euclidean_cover();
  auto colon = name.find(':');
  if (colon != std::string::npos) {
    std::string head = name.substr(0, colon), arg = name.substr(colon + 1);
    try {
      std::size_t used = 0;
      if (head == "abelian") {
        int n = std::stoi(arg, &used);
        if (used == arg.size() && n > 0) return abelian(n);
      } else if (head == "douady") {
        double s = std::stod(arg, &used);
        if (used == arg.size()) return douady(s);
      }
    } catch (const std::logic_error&) {
    }
  }
  throw Error(ErrorCode::Config, "unknown group backend '" + name + "'");
}

int Backend::coord_dim() const {
  switch (kind_) {
    case BackendKind::Abelian: return n_;
    case BackendKind::SU2: return 4;
    case BackendKind::SL2Cover: return 3;
    case BackendKind::EuclideanCover: return 3;
    case BackendKind::DouadyFiber: return delegate().coord_dim();
  }
  return 0;
}

std::string Backend::name() const {
  switch (kind_) {
    case BackendKind::Abelian: return "abelian:" + std::to_string(n_);
    case BackendKind::SU2: return "su2";
    case BackendKind::SL2Cover: return "sl2-cover";
    case BackendKind::EuclideanCover: return "euclidean-cover";
    case BackendKind::DouadyFiber: {
      std::ostringstream os;
      os.precision(17);
      os << "douady:" << s_;
      return os.str();
    }
  }
  return "?";
}

LieAlgebra Backend::algebra() const {
  switch (kind_) {
    case BackendKind::Abelian: return LieAlgebra::abelian(n_);
    case BackendKind::SU2: return LieAlgebra::su2();
    case BackendKind::SL2Cover: return LieAlgebra::sl2();
    case BackendKind::EuclideanCover: return LieAlgebra::euclidean();
    case BackendKind::DouadyFiber: return LieAlgebra::douady(s_);
  }
  throw Error(ErrorCode::InvalidArgument, "bad backend");
}

CenterKind Backend::center_kind() const {
  switch (kind_) {
    case BackendKind::Abelian: return CenterKind::Rn;
    case BackendKind::SU2: return CenterKind::Z2;
    case BackendKind::SL2Cover: return CenterKind::Z;
    case BackendKind::EuclideanCover: return CenterKind::Z;
    case BackendKind::DouadyFiber: return delegate().center_kind();
  }
  return CenterKind::Trivial;
}

Backend Backend::delegate() const {
  if (kind_ != BackendKind::DouadyFiber) return *this;
  if (s_ > 0) return su2();
  if (s_ < 0) return sl2_cover();
  return euclidean_cover();
}

double Backend::douady_scale() const {
  if (kind_ != BackendKind::DouadyFiber || s_ == 0.0) return 1.0;
  return std::sqrt(std::abs(s_));
}

GroupElement::GroupElement(Backend backend, Vec coords) : backend_(backend), coords_(std::move(coords)) {
  if (coords_.size() != backend_.coord_dim()) {
    throw Error(ErrorCode::InvalidArgument, "group element for " + backend_.name() + " needs " +
                                                std::to_string(backend_.coord_dim()) + " coordinates, got " +
                                                std::to_string(coords_.size()));
  }
  for (int i = 0; i < coords_.size(); ++i) {
    if (!std::isfinite(coords_[i])) throw Error(ErrorCode::Numerical, "non-finite group coordinate");
  }
  BackendKind k = backend_.delegate().kind();
  if (k == BackendKind::SU2) {
    double n = coords_.norm();
    if (std::abs(n - 1.0) > 1e-6) throw Error(ErrorCode::InvalidArgument, "SU(2) element must be a unit quaternion");
    if (n != 1.0) coords_ /= n;
  } else if (k == BackendKind::SL2Cover && !(coords_[1] > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "SL(2) cover element needs a > 0");
  }
}

GroupElement group_identity(const Backend& b) {
  switch (b.delegate().kind()) {
    case BackendKind::Abelian: return GroupElement(b, Vec::Zero(b.coord_dim()));
    case BackendKind::SU2: return GroupElement(b, Vec::Unit(4, 0));
    case BackendKind::SL2Cover: {
      Vec c(3);
      c << 0.0, 1.0, 0.0;
      return GroupElement(b, c);
    }
    default: return GroupElement(b, Vec::Zero(3));
  }
}

GroupElement group_exp(const Backend& b, const Vec& xi) {
  require_algebra_vec(b, xi);
  if (b.kind() == BackendKind::DouadyFiber) {
    return GroupElement(b, group_exp(b.delegate(), to_delegate(b, xi)).coords());
  }
  switch (b.kind()) {
    case BackendKind::Abelian: return GroupElement(b, xi);
    case BackendKind::SU2: return GroupElement(b, su2_exp(xi));
    case BackendKind::SL2Cover: return GroupElement(b, sl2_exp(xi));
    case BackendKind::EuclideanCover: return GroupElement(b, euc_exp(xi));
    default: break;
  }
  throw Error(ErrorCode::InvalidArgument, "bad backend");
}

Vec group_log(const GroupElement& g) {
  const Backend& b = g.backend();
  if (b.kind() == BackendKind::DouadyFiber) {
    return from_delegate(b, group_log(GroupElement(b.delegate(), g.coords())));
  }
  switch (b.kind()) {
    case BackendKind::Abelian: return g.coords();
    case BackendKind::SU2: return su2_log(g.coords());
    case BackendKind::SL2Cover: return sl2_log(g.coords());
    case BackendKind::EuclideanCover: return euc_log(g.coords());
    default: break;
  }
  throw Error(ErrorCode::InvalidArgument, "bad backend");
}

GroupElement group_mul(const GroupElement& a, const GroupElement& b) {
  require_same(a, b);
  const Backend& be = a.backend();
  switch (be.delegate().kind()) {
    case BackendKind::Abelian: return GroupElement(be, a.coords() + b.coords());
    case BackendKind::SU2: return GroupElement(be, quat_mul(a.coords(), b.coords()));
    case BackendKind::SL2Cover: return GroupElement(be, sl2_mul(a.coords(), b.coords()));
    case BackendKind::EuclideanCover: return GroupElement(be, euc_mul(a.coords(), b.coords()));
    default: break;
  }
  throw Error(ErrorCode::InvalidArgument, "bad backend");
}

GroupElement group_inv(const GroupElement& g) {
  const Backend& be = g.backend();
  const Vec& c = g.coords();
  switch (be.delegate().kind()) {
    case BackendKind::Abelian: return GroupElement(be, -c);
    case BackendKind::SU2: {
      Vec q = -c;
      q[0] = c[0];
      return GroupElement(be, q);
    }
    case BackendKind::SL2Cover: return GroupElement(be, sl2_inv(c));
    case BackendKind::EuclideanCover: return GroupElement(be, euc_inv(c));
    default: break;
  }
  throw Error(ErrorCode::InvalidArgument, "bad backend");
}

Vec adjoint(const GroupElement& g, const Vec& xi) {
  const Backend& b = g.backend();
  require_algebra_vec(b, xi);
  if (b.kind() == BackendKind::DouadyFiber) {
    return from_delegate(b, adjoint(GroupElement(b.delegate(), g.coords()), to_delegate(b, xi)));
  }
  switch (b.kind()) {
    case BackendKind::Abelian: return xi;
    case BackendKind::SU2: return su2_rotate(g.coords(), xi);
    case BackendKind::SL2Cover: {
      M2 m = sl2_matrix(g.coords());
      return sl2_algebra_vec(m * sl2_algebra_matrix(xi) * m.inverse());
    }
    case BackendKind::EuclideanCover: return euc_adjoint(g.coords(), xi);
    default: break;
  }
  throw Error(ErrorCode::InvalidArgument, "bad backend");
}

Mat adjoint_matrix(const GroupElement& g) {
  int n = g.backend().algebra_dim();
  Mat m(n, n);
  for (int j = 0; j < n; ++j) m.col(j) = adjoint(g, Vec::Unit(n, j));
  return m;
}

double dist_to_identity(const GroupElement& g) {
  const Vec& c = g.coords();
  switch (g.backend().delegate().kind()) {
    case BackendKind::Abelian: return c.norm();
    case BackendKind::SU2: return 2.0 * std::atan2(c.tail<3>().norm(), c[0]);
    case BackendKind::SL2Cover: {
      double la = std::log(c[1]);
      return std::sqrt(c[0] * c[0] + la * la + c[2] * c[2]);
    }
    case BackendKind::EuclideanCover: return c.norm();
    default: break;
  }
  return 0.0;
}

double group_distance(const GroupElement& a, const GroupElement& b) {
  return dist_to_identity(group_mul(group_inv(a), b));
}

double central_defect(const GroupElement& g) {
  const Vec& c = g.coords();
  switch (g.backend().delegate().kind()) {
    case BackendKind::Abelian: return 0.0;
    case BackendKind::SU2: return c.tail<3>().norm();
    case BackendKind::SL2Cover:
      return std::max({std::abs(std::remainder(c[0], kPi)), std::abs(std::log(c[1])), std::abs(c[2])});
    case BackendKind::EuclideanCover:
      return std::max(std::abs(std::remainder(c[0], kTwoPi)), c.tail<2>().norm());
    default: break;
  }
  return 0.0;
}

bool is_central(const GroupElement& g, double tol) { return central_defect(g) <= tol; }

std::optional<long> central_index(const GroupElement& g, double tol) {
  if (!is_central(g, tol)) return std::nullopt;
  const Backend d = g.backend().delegate();
  const Vec& c = g.coords();
  switch (d.kind()) {
    case BackendKind::SU2: return c[0] > 0 ? 0L : 1L;
    case BackendKind::SL2Cover:
    case BackendKind::EuclideanCover: return std::lround(c[0] / unit_of_center(d));
    default: break;
  }
  return std::nullopt;
}

GroupElement central_element(const Backend& b, long index) {
  const Backend d = b.delegate();
  switch (d.kind()) {
    case BackendKind::SU2: {
      Vec q = Vec::Zero(4);
      q[0] = (index % 2 == 0) ? 1.0 : -1.0;
      return GroupElement(b, q);
    }
    case BackendKind::SL2Cover: {
      Vec c(3);
      c << static_cast<double>(index) * kPi, 1.0, 0.0;
      return GroupElement(b, c);
    }
    case BackendKind::EuclideanCover: {
      Vec c = Vec::Zero(3);
      c[0] = static_cast<double>(index) * kTwoPi;
      return GroupElement(b, c);
    }
    default: break;
  }
  throw Error(ErrorCode::InvalidArgument, "backend " + b.name() + " has no cyclic center");
}

std::optional<double> one_param_period(const Backend& b, const Vec& xi) {
  require_algebra_vec(b, xi);
  Vec x = b.kind() == BackendKind::DouadyFiber ? to_delegate(b, xi) : xi;
  if (b.delegate().kind() == BackendKind::SU2) {
    double n = x.norm();
    if (n == 0.0) return std::nullopt;
    return 4.0 * kPi / n;
  }
  // Abelian, SE(2)~ and SL(2)~ are diffeomorphic to R^n through their
  // coordinates and have no compact one-parameter subgroups besides e.
  return std::nullopt;
}

std::string format_element(const GroupElement& g) {
  std::ostringstream os;
  os.precision(12);
  os << g.backend().name() << "(";
  for (int i = 0; i < g.coords().size(); ++i) os << (i ? ", " : "") << g.coords()[i];
  os << ")";
  return os.str();
}

}  // namespace tla
