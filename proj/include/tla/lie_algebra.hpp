#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace tla {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Finite-dimensional real Lie algebra given by structure constants
// [e_i, e_j] = sum_k c(k, i, j) e_k.
class LieAlgebra {
 public:
  enum class Check { Full, AntisymmetryOnly };

  // c is indexed [k][i][j] flattened as (k * dim + i) * dim + j.
  LieAlgebra(int dim, std::vector<double> c, std::string label, Check check = Check::Full);

  static LieAlgebra abelian(int n);
  static LieAlgebra su2();
  // Basis (x, y, z) with [x,y] = s z, [y,z] = x, [z,x] = y.
  static LieAlgebra douady(double s);
  static LieAlgebra sl2() { return douady(-1.0); }
  static LieAlgebra euclidean() { return douady(0.0); }
  static LieAlgebra direct_sum(const LieAlgebra& a, const LieAlgebra& b);
  // "su2", "sl2", "euclidean", "abelian:<n>", "douady:<s>", "r+su2".
  static LieAlgebra preset(const std::string& name);

  int dim() const { return dim_; }
  const std::string& label() const { return label_; }
  double c(int k, int i, int j) const { return c_[(k * dim_ + i) * dim_ + j]; }
  const std::vector<double>& constants() const { return c_; }

  Vec bracket(const Vec& x, const Vec& y) const;
  // Matrix of ad_x acting on coordinate vectors.
  Mat ad(const Vec& x) const;

  bool operator==(const LieAlgebra& other) const;

 private:
  int dim_;
  std::vector<double> c_;
  std::string label_;
};

// max |[[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]| over basis triples.
double jacobi_defect(const LieAlgebra& g);

// Orthonormal basis of the center, as columns.
Mat center_basis(const LieAlgebra& g, double tol = 1e-10);

// Residual max |Psi[x,y] - [Psi x, Psi y]| over basis pairs.
double automorphism_defect(const LieAlgebra& g, const Mat& psi);

// exp(A) and (exp(A) - I) / A for a square matrix A.
Mat matrix_exp(const Mat& a);
void matrix_exp_and_phi(const Mat& a, Mat& exp_a, Mat& phi_a);

}  // namespace tla
