#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tla/field_expr.hpp"
#include "tla/group.hpp"

namespace tla {

// Values theta(d/ds) and theta(d/dt) of a k-valued 1-form at a point.
struct FormValue {
  Vec ds;
  Vec dt;
};

// Pointwise k-valued 1-form on the unit square.
class ConnectionForm {
 public:
  virtual ~ConnectionForm() = default;
  virtual int dim() const = 0;
  virtual FormValue evaluate(double s, double t) const = 0;
  // Step for finite differences of this form.
  virtual double fd_step() const { return 1e-5; }
  // Fewest samples of a horizontal loop s -> (s, t) that resolve the form in s.
  virtual int min_loop_samples() const { return 0; }
};

class ExprForm : public ConnectionForm {
 public:
  ExprForm(std::vector<FieldExpr> theta_s, std::vector<FieldExpr> theta_t, double lam);
  int dim() const override { return static_cast<int>(theta_s_.size()); }
  FormValue evaluate(double s, double t) const override;
  const std::vector<FieldExpr>& theta_s() const { return theta_s_; }
  const std::vector<FieldExpr>& theta_t() const { return theta_t_; }
  double lam() const { return lam_; }

 private:
  std::vector<FieldExpr> theta_s_, theta_t_;
  double lam_;
};

struct FramingOptions {
  double flat_margin = 0.1;
  int grid = 101;
  double vanish_tol = 1e-9;
};

// Connection form on I^2 vanishing near the collapsed boundary part
// {s=0} u {t=1} u {s=1}. The square is read as S^2 = I^2 / boundary.
class SquarePresentation {
 public:
  // Validates on a grid; throws Presentation error on a framing violation.
  SquarePresentation(LieAlgebra algebra, std::optional<Backend> backend, std::shared_ptr<const ConnectionForm> form,
                     FramingOptions framing = {}, std::string label = "");

  static SquarePresentation from_exprs(LieAlgebra algebra, std::optional<Backend> backend,
                                       const std::vector<std::string>& theta_s,
                                       const std::vector<std::string>& theta_t, double lam,
                                       FramingOptions framing = {}, std::string label = "");

  const LieAlgebra& algebra() const { return algebra_; }
  const std::optional<Backend>& backend() const { return backend_; }
  // Throws InvalidArgument when no group backend is attached.
  const Backend& group() const;
  double flat_margin() const { return framing_.flat_margin; }
  const FramingOptions& framing() const { return framing_; }
  const std::string& label() const { return label_; }
  const ConnectionForm& form() const { return *form_; }
  std::shared_ptr<const ConnectionForm> form_ptr() const { return form_; }

  FormValue theta(double s, double t) const { return form_->evaluate(s, t); }

 private:
  LieAlgebra algebra_;
  std::optional<Backend> backend_;
  std::shared_ptr<const ConnectionForm> form_;
  FramingOptions framing_;
  std::string label_;
};

// F = d_s theta_t - d_t theta_s + [theta_s, theta_t].
Vec curvature(const SquarePresentation& p, double s, double t);
// Integral of F over the rectangle [lo_s, hi_s] x [lo_t, hi_t], 5-point Gauss-Legendre on panels x panels cells.
Vec curvature_integral(const SquarePresentation& p, double lo_s, double lo_t, double hi_s, double hi_t,
                       int panels = 16);

// Clutching data: samples of k on a uniform grid of [0,1], with k = e near 0
// and k constant central near 1.
struct ClutchingPresentation {
  LieAlgebra algebra;
  Backend backend;
  std::vector<GroupElement> samples;
  double flat_margin = 0.1;
};

// Connection form -chi(t) dk k^{-1} on the square; its classifying element is k(1).
SquarePresentation clutch_to_square(const ClutchingPresentation& c);

// Presets.
SquarePresentation preset_trivial(const Backend& backend, double flat_margin = 0.1);
// Abelian, classifying element lam (total normalized curvature -lam).
SquarePresentation preset_abelian_bump(double lam, double flat_margin = 0.1);
// Clutch along the one-parameter subgroup of xi; classifying element exp(xi).
SquarePresentation preset_exp_clutch(const Backend& backend, const Vec& xi, double flat_margin = 0.1);
// exp(2 pi e3) = -1 in SU(2).
SquarePresentation preset_su2_clutch(double flat_margin = 0.1);
// Generator of the center of the SL(2) cover.
SquarePresentation preset_sl2_clutch(double flat_margin = 0.1);
// Full turn in the Euclidean cover.
SquarePresentation preset_euclid_clutch(double flat_margin = 0.1);
// Algebra-only fixture on R + su(2) with [theta_s, theta_t] != 0 and a nonzero
// abelian component.
SquarePresentation preset_rsu2_twist(double flat_margin = 0.1);
// Clutching samples for t -> exp(smooth_step(...) xi), sampled at n points.
ClutchingPresentation sampled_exp_clutch(const Backend& backend, const Vec& xi, int n, double flat_margin = 0.1);

// Gauge transformation (f, Psi) with f = exp(mu_1) ... exp(mu_r).
// Acts by theta -> Ad_f(Psi theta) - f^* theta^R.
struct GaugeTransformation {
  enum Part : unsigned { Left = 1, Right = 2, Top = 4, Bottom = 8 };

  Mat psi;
  std::vector<std::vector<FieldExpr>> factors;
  double lam = 0.0;
  double support_margin = 0.1;
  // Boundary parts near which f must equal e.
  unsigned identity_parts = Left | Right | Top;

  static GaugeTransformation from_exprs(const Mat& psi, const std::vector<std::string>& mu,
                                        double support_margin = 0.1, unsigned identity_parts = Left | Right | Top);
};

// Applying `first` then `second` equals applying the result.
GaugeTransformation compose_gauge(const GaugeTransformation& second, const GaugeTransformation& first);
// Throws Presentation error if psi is not an automorphism or f != e near the declared parts.
SquarePresentation apply_gauge(const SquarePresentation& p, const GaugeTransformation& g);

// P2 on s in [0, 1/2] followed by P1 on [1/2, 1]; classifies to c(P1) c(P2).
SquarePresentation connect_sum(const SquarePresentation& p1, const SquarePresentation& p2);

// Covariant derivative nabla = d + ad theta on k-valued functions.
using Section = std::function<Vec(double, double)>;
// R^nabla sigma by finite differences of nabla_s nabla_t sigma - nabla_t nabla_s sigma.
Vec induced_curvature_on(const SquarePresentation& p, const Section& sigma, double s, double t, double h = 1e-3);
// max |R^nabla sigma| over an interior n x n grid, sigma running over constant
// central sections and central sections with a varying scalar profile.
double center_flatness_defect(const SquarePresentation& p, int n = 21);

}  // namespace tla
