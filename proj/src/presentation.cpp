#include "tla/presentation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "tla/errors.hpp"

namespace tla {

namespace {

using VecFn = std::function<Vec(double)>;

Vec richardson_vec(const VecFn& f, double x, double h) {
  Vec d1 = (f(x + h) - f(x - h)) / (2.0 * h);
  double h2 = 0.5 * h;
  Vec d2 = (f(x + h2) - f(x - h2)) / (2.0 * h2);
  return (4.0 * d2 - d1) / 3.0;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// chi(t) * bump((s - d) / w) / w with chi(t) = 1 - step((t - d) / w), w = 1 - 2d.
std::string clutch_profile(double margin) {
  std::string d = num(margin), w = num(1.0 - 2.0 * margin);
  return "(1 - step((t - " + d + ") / " + w + ")) * bump((s - " + d + ") / " + w + ") / " + w;
}

void check_margin(double margin) {
  if (!(margin > 0.0 && margin < 0.5)) {
    throw Error(ErrorCode::Presentation, "flat margin must lie in (0, 1/2), got " + num(margin));
  }
}

bool near_parts(double s, double t, double margin, unsigned parts) {
  const double slack = 1e-12;
  if ((parts & GaugeTransformation::Left) && s <= margin + slack) return true;
  if ((parts & GaugeTransformation::Right) && s >= 1.0 - margin - slack) return true;
  if ((parts & GaugeTransformation::Top) && t >= 1.0 - margin - slack) return true;
  if ((parts & GaugeTransformation::Bottom) && t <= margin + slack) return true;
  return false;
}

class GaugedForm : public ConnectionForm {
 public:
  GaugedForm(std::shared_ptr<const ConnectionForm> base, LieAlgebra algebra, GaugeTransformation g)
      : base_(std::move(base)), algebra_(std::move(algebra)), g_(std::move(g)) {}

  int dim() const override { return base_->dim(); }
  double fd_step() const override { return 1e-3; }
  int min_loop_samples() const override { return base_->min_loop_samples(); }

  FormValue evaluate(double s, double t) const override {
    FormValue b = base_->evaluate(s, t);
    const int n = dim();
    Vec ts = g_.psi * b.ds, tt = g_.psi * b.dt;
    Mat ad_f = Mat::Identity(n, n);
    Vec fs = Vec::Zero(n), ft = Vec::Zero(n);
    Vec mu(n), dmu_s(n), dmu_t(n);
    for (const auto& factor : g_.factors) {
      bool zero = true;
      for (int i = 0; i < n; ++i) {
        const FieldExpr& e = factor[i];
        if (e.is_zero_constant()) {
          mu[i] = dmu_s[i] = dmu_t[i] = 0.0;
          continue;
        }
        mu[i] = e.eval(s, t, g_.lam);
        dmu_s[i] = partial(e, Var::S, s, t, g_.lam, kMuStep);
        dmu_t[i] = partial(e, Var::T, s, t, g_.lam, kMuStep);
        if (mu[i] != 0.0 || dmu_s[i] != 0.0 || dmu_t[i] != 0.0) zero = false;
      }
      if (zero) continue;
      Mat e, phi;
      matrix_exp_and_phi(algebra_.ad(mu), e, phi);
      fs += ad_f * (phi * dmu_s);
      ft += ad_f * (phi * dmu_t);
      ad_f = ad_f * e;
    }
    return {ad_f * ts - fs, ad_f * tt - ft};
  }

 private:
  static constexpr double kMuStep = 1e-4;
  std::shared_ptr<const ConnectionForm> base_;
  LieAlgebra algebra_;
  GaugeTransformation g_;
};

class ConnectedSumForm : public ConnectionForm {
 public:
  ConnectedSumForm(std::shared_ptr<const ConnectionForm> right, std::shared_ptr<const ConnectionForm> left)
      : right_(std::move(right)), left_(std::move(left)) {}

  int dim() const override { return right_->dim(); }
  double fd_step() const override { return 0.5 * std::min(right_->fd_step(), left_->fd_step()); }
  int min_loop_samples() const override {
    return 2 * std::max(right_->min_loop_samples(), left_->min_loop_samples());
  }

  FormValue evaluate(double s, double t) const override {
    FormValue v = s < 0.5 ? left_->evaluate(2.0 * s, t) : right_->evaluate(2.0 * s - 1.0, t);
    v.ds *= 2.0;
    return v;
  }

 private:
  std::shared_ptr<const ConnectionForm> right_, left_;
};

// Piecewise-geodesic interpolation of clutch samples:
// k(tau) = exp(phi(x) Omega_i) k_i on segment i, phi(x) = x - sin(2 pi x) / (2 pi).
class ClutchForm : public ConnectionForm {
 public:
  ClutchForm(std::vector<Vec> increments, double margin)
      : increments_(std::move(increments)), margin_(margin) {}

  int dim() const override { return static_cast<int>(increments_.front().size()); }
  // The speed profile oscillates once per segment.
  int min_loop_samples() const override { return 4 * static_cast<int>(increments_.size()); }

  FormValue evaluate(double s, double t) const override {
    const int n = dim();
    FormValue v{Vec::Zero(n), Vec::Zero(n)};
    if (s <= 0.0 || s >= 1.0) return v;
    const int segs = static_cast<int>(increments_.size());
    double pos = s * segs;
    int i = std::min(static_cast<int>(pos), segs - 1);
    double x = pos - i;
    double chi = 1.0 - smooth_step((t - margin_) / (1.0 - 2.0 * margin_));
    double rate = (1.0 - std::cos(2.0 * std::numbers::pi * x)) * segs;
    v.ds = -chi * rate * increments_[i];
    return v;
  }

 private:
  std::vector<Vec> increments_;
  double margin_;
};

}  // namespace

ExprForm::ExprForm(std::vector<FieldExpr> theta_s, std::vector<FieldExpr> theta_t, double lam)
    : theta_s_(std::move(theta_s)), theta_t_(std::move(theta_t)), lam_(lam) {
  if (theta_s_.size() != theta_t_.size() || theta_s_.empty()) {
    throw Error(ErrorCode::Presentation, "theta_s and theta_t must be non-empty arrays of equal length");
  }
}

FormValue ExprForm::evaluate(double s, double t) const {
  const int n = dim();
  FormValue v{Vec(n), Vec(n)};
  for (int i = 0; i < n; ++i) {
    v.ds[i] = theta_s_[i].is_zero_constant() ? 0.0 : theta_s_[i].eval(s, t, lam_);
    v.dt[i] = theta_t_[i].is_zero_constant() ? 0.0 : theta_t_[i].eval(s, t, lam_);
  }
  return v;
}

SquarePresentation::SquarePresentation(LieAlgebra algebra, std::optional<Backend> backend,
                                       std::shared_ptr<const ConnectionForm> form, FramingOptions framing,
                                       std::string label)
    : algebra_(std::move(algebra)),
      backend_(std::move(backend)),
      form_(std::move(form)),
      framing_(framing),
      label_(std::move(label)) {
  check_margin(framing_.flat_margin);
  if (!form_) throw Error(ErrorCode::Presentation, "missing connection form");
  if (form_->dim() != algebra_.dim()) {
    throw Error(ErrorCode::Presentation, "connection form has dimension " + std::to_string(form_->dim()) +
                                             " but the algebra has dimension " + std::to_string(algebra_.dim()));
  }
  if (backend_ && !(backend_->algebra() == algebra_)) {
    throw Error(ErrorCode::Presentation, "backend " + backend_->name() + " does not integrate algebra " +
                                             algebra_.label());
  }
  if (framing_.grid < 2) throw Error(ErrorCode::Presentation, "framing grid needs at least 2 points");
  const double margin = framing_.flat_margin;
  const unsigned parts = GaugeTransformation::Left | GaugeTransformation::Right | GaugeTransformation::Top;
  for (int i = 0; i < framing_.grid; ++i) {
    double s = double(i) / (framing_.grid - 1);
    for (int j = 0; j < framing_.grid; ++j) {
      double t = double(j) / (framing_.grid - 1);
      FormValue v = form_->evaluate(s, t);
      if (!v.ds.allFinite() || !v.dt.allFinite()) {
        throw Error(ErrorCode::Presentation, "connection form is not finite at (" + num(s) + ", " + num(t) + ")");
      }
      if (near_parts(s, t, margin, parts)) {
        double mag = std::max(v.ds.cwiseAbs().maxCoeff(), v.dt.cwiseAbs().maxCoeff());
        if (mag > framing_.vanish_tol) {
          throw Error(ErrorCode::Presentation, "framing violation: |theta| = " + num(mag) + " at (" + num(s) +
                                                   ", " + num(t) + ") within the flat margin");
        }
      }
    }
  }
}

SquarePresentation SquarePresentation::from_exprs(LieAlgebra algebra, std::optional<Backend> backend,
                                                  const std::vector<std::string>& theta_s,
                                                  const std::vector<std::string>& theta_t, double lam,
                                                  FramingOptions framing, std::string label) {
  std::vector<FieldExpr> ts, tt;
  for (const auto& e : theta_s) ts.push_back(FieldExpr::parse(e));
  for (const auto& e : theta_t) tt.push_back(FieldExpr::parse(e));
  auto form = std::make_shared<ExprForm>(std::move(ts), std::move(tt), lam);
  return SquarePresentation(std::move(algebra), std::move(backend), std::move(form), framing, std::move(label));
}

const Backend& SquarePresentation::group() const {
  if (!backend_) throw Error(ErrorCode::InvalidArgument, "presentation over " + algebra_.label() + " has no group backend");
  return *backend_;
}

Vec curvature(const SquarePresentation& p, double s, double t) {
  const double h = p.form().fd_step();
  Vec dtheta_t_ds = richardson_vec([&](double x) { return p.theta(x, t).dt; }, s, h);
  Vec dtheta_s_dt = richardson_vec([&](double x) { return p.theta(s, x).ds; }, t, h);
  FormValue v = p.theta(s, t);
  return dtheta_t_ds - dtheta_s_dt + p.algebra().bracket(v.ds, v.dt);
}

Vec curvature_integral(const SquarePresentation& p, double lo_s, double lo_t, double hi_s, double hi_t,
                       int panels) {
  if (panels < 1) throw Error(ErrorCode::InvalidArgument, "curvature integral needs at least one panel");
  static const double x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                              0.9061798459386640};
  static const double w[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                              0.2369268850561891};
  const double hs = (hi_s - lo_s) / panels, ht = (hi_t - lo_t) / panels;
  Vec total = Vec::Zero(p.algebra().dim());
  for (int i = 0; i < panels; ++i)
    for (int j = 0; j < panels; ++j)
      for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b) {
          double s = lo_s + hs * (i + 0.5 * (1.0 + x[a]));
          double t = lo_t + ht * (j + 0.5 * (1.0 + x[b]));
          total += (0.25 * hs * ht * w[a] * w[b]) * curvature(p, s, t);
        }
  return total;
}

SquarePresentation clutch_to_square(const ClutchingPresentation& c) {
  check_margin(c.flat_margin);
  const auto& k = c.samples;
  if (k.size() < 2) throw Error(ErrorCode::Presentation, "clutch needs at least two samples");
  if (!(c.backend.algebra() == c.algebra)) {
    throw Error(ErrorCode::Presentation, "clutch backend does not integrate the algebra");
  }
  for (const auto& g : k) {
    if (g.backend() != c.backend) throw Error(ErrorCode::Presentation, "clutch sample from another backend");
  }
  const double tol = 1e-9;
  if (dist_to_identity(k.front()) > tol) throw Error(ErrorCode::Presentation, "clutch must start at the identity");
  if (!is_central(k.back(), tol)) throw Error(ErrorCode::Presentation, "clutch must end at a central element");
  const int n = static_cast<int>(k.size());
  std::vector<Vec> inc;
  for (int i = 0; i + 1 < n; ++i) {
    double tau = double(i) / (n - 1);
    if (tau <= c.flat_margin && group_distance(k[i], k.front()) > tol) {
      throw Error(ErrorCode::Presentation, "clutch does not sit at the identity near 0");
    }
    if (tau >= 1.0 - c.flat_margin && group_distance(k[i], k.back()) > tol) {
      throw Error(ErrorCode::Presentation, "clutch does not sit at its endpoint near 1");
    }
    GroupElement step = group_mul(k[i + 1], group_inv(k[i]));
    if (dist_to_identity(step) > 1.0) {
      throw Error(ErrorCode::Presentation, "clutch samples too coarse at index " + std::to_string(i));
    }
    inc.push_back(group_log(step));
  }
  auto form = std::make_shared<ClutchForm>(std::move(inc), c.flat_margin);
  FramingOptions framing;
  framing.flat_margin = c.flat_margin;
  return SquarePresentation(c.algebra, c.backend, std::move(form), framing, "clutch");
}

SquarePresentation preset_trivial(const Backend& backend, double flat_margin) {
  int n = backend.algebra_dim();
  std::vector<std::string> zero(n, "0");
  FramingOptions f;
  f.flat_margin = flat_margin;
  return SquarePresentation::from_exprs(backend.algebra(), backend, zero, zero, 0.0, f, "trivial");
}

SquarePresentation preset_abelian_bump(double lam, double flat_margin) {
  check_margin(flat_margin);
  FramingOptions f;
  f.flat_margin = flat_margin;
  return SquarePresentation::from_exprs(LieAlgebra::abelian(1), Backend::abelian(1),
                                        {"-lam * " + clutch_profile(flat_margin)}, {"0"}, lam, f, "abelian-bump");
}

SquarePresentation preset_rsu2_twist(double flat_margin) {
  check_margin(flat_margin);
  FramingOptions f;
  f.flat_margin = flat_margin;
  const std::string lo = num(flat_margin + 0.05), width = num(0.85 - 2.0 * flat_margin);
  auto b = [&](const std::string& v) { return "bump((" + v + " - " + lo + ")/" + width + ")"; };
  return SquarePresentation::from_exprs(LieAlgebra::preset("r+su2"), std::nullopt,
                                        {"0.3 * " + b("s") + " * " + b("t"), "0.4 * " + b("s") + " * " + b("t"), "0",
                                         "0"},
                                        {"0", "0", "0.5 * " + b("s") + " * " + b("t") + " * sin(3 * s)", "0"}, 0.0,
                                        f, "r+su2-twist");
}

SquarePresentation preset_exp_clutch(const Backend& backend, const Vec& xi, double flat_margin) {
  check_margin(flat_margin);
  if (xi.size() != backend.algebra_dim()) throw Error(ErrorCode::InvalidArgument, "clutch generator has wrong size");
  FieldExpr profile = FieldExpr::parse(clutch_profile(flat_margin));
  std::vector<FieldExpr> ts, tt;
  for (int i = 0; i < xi.size(); ++i) {
    ts.push_back(FieldExpr::linear_combination({-xi[i]}, {profile}));
    tt.push_back(FieldExpr::constant(0.0));
  }
  FramingOptions f;
  f.flat_margin = flat_margin;
  auto form = std::make_shared<ExprForm>(std::move(ts), std::move(tt), 0.0);
  return SquarePresentation(backend.algebra(), backend, std::move(form), f, backend.name() + "-clutch");
}

SquarePresentation preset_su2_clutch(double flat_margin) {
  Vec xi = Vec::Zero(3);
  xi[2] = 2.0 * std::numbers::pi;
  return preset_exp_clutch(Backend::su2(), xi, flat_margin);
}

SquarePresentation preset_sl2_clutch(double flat_margin) {
  Vec xi = Vec::Zero(3);
  xi[2] = 2.0 * std::numbers::pi;
  return preset_exp_clutch(Backend::sl2_cover(), xi, flat_margin);
}

SquarePresentation preset_euclid_clutch(double flat_margin) {
  Vec xi = Vec::Zero(3);
  xi[2] = 2.0 * std::numbers::pi;
  return preset_exp_clutch(Backend::euclidean_cover(), xi, flat_margin);
}

ClutchingPresentation sampled_exp_clutch(const Backend& backend, const Vec& xi, int n, double flat_margin) {
  check_margin(flat_margin);
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "clutch needs at least two samples");
  ClutchingPresentation c{backend.algebra(), backend, {}, flat_margin};
  for (int i = 0; i < n; ++i) {
    double tau = double(i) / (n - 1);
    double sm = smooth_step((tau - flat_margin) / (1.0 - 2.0 * flat_margin));
    c.samples.push_back(group_exp(backend, sm * xi));
  }
  return c;
}

GaugeTransformation GaugeTransformation::from_exprs(const Mat& psi, const std::vector<std::string>& mu,
                                                    double support_margin, unsigned identity_parts) {
  GaugeTransformation g;
  g.psi = psi;
  std::vector<FieldExpr> f;
  for (const auto& e : mu) f.push_back(FieldExpr::parse(e));
  g.factors.push_back(std::move(f));
  g.support_margin = support_margin;
  g.identity_parts = identity_parts;
  return g;
}

GaugeTransformation compose_gauge(const GaugeTransformation& second, const GaugeTransformation& first) {
  if (second.psi.rows() != first.psi.rows()) throw Error(ErrorCode::InvalidArgument, "gauge dimension mismatch");
  if (second.lam != first.lam) throw Error(ErrorCode::InvalidArgument, "gauge transformations use different lam");
  GaugeTransformation out;
  out.psi = second.psi * first.psi;
  out.lam = first.lam;
  out.support_margin = std::min(first.support_margin, second.support_margin);
  out.identity_parts = first.identity_parts & second.identity_parts;
  out.factors = second.factors;
  const int n = static_cast<int>(first.psi.rows());
  for (const auto& factor : first.factors) {
    // Psi~(exp mu) = exp(Psi mu).
    std::vector<FieldExpr> moved;
    for (int i = 0; i < n; ++i) {
      std::vector<double> row(n);
      for (int j = 0; j < n; ++j) row[j] = second.psi(i, j);
      moved.push_back(FieldExpr::linear_combination(row, factor));
    }
    out.factors.push_back(std::move(moved));
  }
  return out;
}

SquarePresentation apply_gauge(const SquarePresentation& p, const GaugeTransformation& g) {
  const LieAlgebra& k = p.algebra();
  const int n = k.dim();
  if (g.psi.rows() != n || g.psi.cols() != n) throw Error(ErrorCode::Presentation, "psi has wrong shape");
  if (std::abs(g.psi.determinant()) < 1e-12 || automorphism_defect(k, g.psi) > 1e-9) {
    throw Error(ErrorCode::Presentation, "psi is not an automorphism of " + k.label());
  }
  for (const auto& f : g.factors) {
    if (static_cast<int>(f.size()) != n) throw Error(ErrorCode::Presentation, "gauge factor has wrong dimension");
  }
  const int grid = p.framing().grid;
  for (int i = 0; i < grid; ++i) {
    double s = double(i) / (grid - 1);
    for (int j = 0; j < grid; ++j) {
      double t = double(j) / (grid - 1);
      if (!near_parts(s, t, g.support_margin, g.identity_parts)) continue;
      for (const auto& f : g.factors) {
        for (const auto& e : f) {
          double v = e.eval(s, t, g.lam);
          if (std::abs(v) > 1e-12) {
            throw Error(ErrorCode::Presentation, "gauge support violation: f != e at (" + num(s) + ", " + num(t) + ")");
          }
        }
      }
    }
  }
  auto form = std::make_shared<GaugedForm>(p.form_ptr(), k, g);
  return SquarePresentation(k, p.backend(), std::move(form), p.framing(), p.label() + "/gauged");
}

SquarePresentation connect_sum(const SquarePresentation& p1, const SquarePresentation& p2) {
  if (!(p1.algebra() == p2.algebra())) throw Error(ErrorCode::Presentation, "connected sum of different algebras");
  if (p1.backend() != p2.backend()) throw Error(ErrorCode::Presentation, "connected sum of different backends");
  double margin = 0.5 * std::min(p1.flat_margin(), p2.flat_margin());
  if (margin < 0.01) throw Error(ErrorCode::Presentation, "connected sum margin below 0.01");
  FramingOptions f = p1.framing();
  f.flat_margin = margin;
  auto form = std::make_shared<ConnectedSumForm>(p1.form_ptr(), p2.form_ptr());
  return SquarePresentation(p1.algebra(), p1.backend(), std::move(form), f, p1.label() + "#" + p2.label());
}

Vec induced_curvature_on(const SquarePresentation& p, const Section& sigma, double s, double t, double h) {
  const LieAlgebra& k = p.algebra();
  // nabla_t sigma and nabla_s sigma as functions of the point.
  auto nabla_t = [&](double a, double b) {
    Vec d = richardson_vec([&](double x) { return sigma(a, x); }, b, h);
    return Vec(d + k.bracket(p.theta(a, b).dt, sigma(a, b)));
  };
  auto nabla_s = [&](double a, double b) {
    Vec d = richardson_vec([&](double x) { return sigma(x, b); }, a, h);
    return Vec(d + k.bracket(p.theta(a, b).ds, sigma(a, b)));
  };
  FormValue th = p.theta(s, t);
  Vec st = richardson_vec([&](double x) { return nabla_t(x, t); }, s, h) + k.bracket(th.ds, nabla_t(s, t));
  Vec ts = richardson_vec([&](double x) { return nabla_s(s, x); }, t, h) + k.bracket(th.dt, nabla_s(s, t));
  return st - ts;
}

double center_flatness_defect(const SquarePresentation& p, int n) {
  Mat z = center_basis(p.algebra());
  double worst = 0.0;
  for (int c = 0; c < z.cols(); ++c) {
    Vec zc = z.col(c);
    Section constant = [zc](double, double) { return zc; };
    Section profiled = [zc](double s, double t) { return Vec(std::sin(3.0 * s + 1.0) * std::cos(2.0 * t) * zc); };
    for (int i = 0; i < n; ++i) {
      double s = 0.05 + 0.9 * i / (n - 1);
      for (int j = 0; j < n; ++j) {
        double t = 0.05 + 0.9 * j / (n - 1);
        worst = std::max(worst, induced_curvature_on(p, constant, s, t).norm());
        worst = std::max(worst, induced_curvature_on(p, profiled, s, t).norm());
      }
    }
  }
  return worst;
}

}  // namespace tla
