#pragma once

#include <optional>
#include <string>

#include "tla/lie_algebra.hpp"

namespace tla {

enum class BackendKind { Abelian, SU2, SL2Cover, EuclideanCover, DouadyFiber };

// How the center of the simply connected group sits inside it.
enum class CenterKind { Trivial, Z2, Z, Rn };

// Simply connected group with a given Lie algebra, with closed-form exp,
// product, inverse and adjoint action.
class Backend {
 public:
  static Backend abelian(int n);
  static Backend su2();
  static Backend sl2_cover();
  static Backend euclidean_cover();
  static Backend douady(double s);
  // "abelian:<n>", "su2", "sl2-cover", "euclidean-cover", "douady:<s>".
  static Backend parse(const std::string& name);

  BackendKind kind() const { return kind_; }
  int algebra_dim() const { return kind_ == BackendKind::Abelian ? n_ : 3; }
  // Number of stored coordinates of a group element.
  int coord_dim() const;
  double douady_s() const { return s_; }
  std::string name() const;
  LieAlgebra algebra() const;
  CenterKind center_kind() const;
  // For Douady fibers: the concrete backend the fiber is delegated to.
  Backend delegate() const;
  // Algebra rescaling from Douady coordinates (x, y, z) to delegate coordinates.
  double douady_scale() const;

  bool operator==(const Backend& o) const { return kind_ == o.kind_ && n_ == o.n_ && s_ == o.s_; }
  bool operator!=(const Backend& o) const { return !(*this == o); }

 private:
  Backend(BackendKind k, int n, double s) : kind_(k), n_(n), s_(s) {}
  BackendKind kind_;
  int n_;
  double s_;
};

// Coordinates per backend:
//   Abelian         v in R^n (exp is the identity map).
//   SU2             unit quaternion (w, x, y, z); e_k acts as q_k / 2.
//   SL2Cover        (theta, a, n): g = K(theta) A(a) N(n), theta real-valued lift.
//   EuclideanCover  (phi, v1, v2): rotation angle lift and translation.
//   DouadyFiber     coordinates of the delegate backend.
class GroupElement {
 public:
  GroupElement(Backend backend, Vec coords);

  const Backend& backend() const { return backend_; }
  const Vec& coords() const { return coords_; }

 private:
  Backend backend_;
  Vec coords_;
};

GroupElement group_identity(const Backend& b);
GroupElement group_exp(const Backend& b, const Vec& xi);
// Inverse of group_exp on a neighbourhood of the identity.
Vec group_log(const GroupElement& g);
GroupElement group_mul(const GroupElement& a, const GroupElement& b);
GroupElement group_inv(const GroupElement& g);
Vec adjoint(const GroupElement& g, const Vec& xi);
Mat adjoint_matrix(const GroupElement& g);
// Norm of the canonical coordinates; zero exactly at the identity.
double dist_to_identity(const GroupElement& g);
double group_distance(const GroupElement& a, const GroupElement& b);
// Distance of g from the center in the backend's coordinates; 0 on the center.
double central_defect(const GroupElement& g);
bool is_central(const GroupElement& g, double tol);
// Integer label of a central element when the center is cyclic.
std::optional<long> central_index(const GroupElement& g, double tol);
// Central element with the given cyclic index.
GroupElement central_element(const Backend& b, long index);
// Smallest T > 0 with exp(T xi) = e, if the one-parameter subgroup is periodic.
std::optional<double> one_param_period(const Backend& b, const Vec& xi);

std::string format_element(const GroupElement& g);

}  // namespace tla
