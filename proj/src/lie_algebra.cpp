#include "tla/lie_algebra.hpp"

#include <cmath>
#include <sstream>
#include <unsupported/Eigen/MatrixFunctions>

#include "tla/errors.hpp"

namespace tla {

namespace {

constexpr double kAntisymmetryTol = 1e-12;
constexpr double kJacobiTol = 1e-12;

std::size_t idx(int dim, int k, int i, int j) {
  return (static_cast<std::size_t>(k) * dim + i) * dim + j;
}

}  // namespace

LieAlgebra::LieAlgebra(int dim, std::vector<double> constants, std::string label, Check check)
    : dim_(dim), c_(std::move(constants)), label_(std::move(label)) {
  if (dim_ <= 0) throw Error(ErrorCode::InvalidArgument, "Lie algebra dimension must be positive");
  if (c_.size() != static_cast<std::size_t>(dim_) * dim_ * dim_) {
    throw Error(ErrorCode::InvalidArgument, "structure constant array has wrong size");
  }
  for (double v : c_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite structure constant");
  }
  for (int k = 0; k < dim_; ++k) {
    for (int i = 0; i < dim_; ++i) {
      for (int j = 0; j < dim_; ++j) {
        if (std::abs(c(k, i, j) + c(k, j, i)) > kAntisymmetryTol) {
          std::ostringstream os;
          os << "structure constants not antisymmetric at (k,i,j)=(" << k << "," << i << "," << j << ")";
          throw Error(ErrorCode::InvalidArgument, os.str());
        }
      }
    }
  }
  if (check == Check::Full) {
    double defect = jacobi_defect(*this);
    if (defect > kJacobiTol) {
      std::ostringstream os;
      os << "Jacobi identity violated (defect " << defect << ")";
      throw Error(ErrorCode::InvalidArgument, os.str());
    }
  }
}

LieAlgebra LieAlgebra::abelian(int n) {
  return LieAlgebra(n, std::vector<double>(static_cast<std::size_t>(n) * n * n, 0.0),
                    "abelian:" + std::to_string(n));
}

LieAlgebra LieAlgebra::su2() {
  LieAlgebra g = douady(1.0);
  g.label_ = "su2";
  return g;
}

LieAlgebra LieAlgebra::douady(double s) {
  std::vector<double> c(27, 0.0);
  auto set = [&](int i, int j, int k, double v) {
    c[idx(3, k, i, j)] = v;
    c[idx(3, k, j, i)] = -v;
  };
  set(0, 1, 2, s);
  set(1, 2, 0, 1.0);
  set(2, 0, 1, 1.0);
  std::ostringstream os;
  os.precision(17);
  os << "douady:" << s;
  LieAlgebra g(3, std::move(c), os.str());
  if (s == 1.0) g.label_ = "su2";
  if (s == -1.0) g.label_ = "sl2";
  if (s == 0.0) g.label_ = "euclidean";
  return g;
}

LieAlgebra LieAlgebra::direct_sum(const LieAlgebra& a, const LieAlgebra& b) {
  int n = a.dim() + b.dim();
  std::vector<double> c(static_cast<std::size_t>(n) * n * n, 0.0);
  for (int k = 0; k < a.dim(); ++k)
    for (int i = 0; i < a.dim(); ++i)
      for (int j = 0; j < a.dim(); ++j) c[idx(n, k, i, j)] = a.c(k, i, j);
  int o = a.dim();
  for (int k = 0; k < b.dim(); ++k)
    for (int i = 0; i < b.dim(); ++i)
      for (int j = 0; j < b.dim(); ++j) c[idx(n, o + k, o + i, o + j)] = b.c(k, i, j);
  return LieAlgebra(n, std::move(c), a.label() + "+" + b.label());
}

LieAlgebra LieAlgebra::preset(const std::string& name) {
  if (name == "su2") return su2();
  if (name == "sl2") return sl2();
  if (name == "euclidean") return euclidean();
  if (name == "r+su2") {
    LieAlgebra g = direct_sum(abelian(1), su2());
    g.label_ = "r+su2";
    return g;
  }
  auto colon = name.find(':');
  if (colon != std::string::npos) {
    std::string head = name.substr(0, colon);
    std::string arg = name.substr(colon + 1);
    try {
      std::size_t used = 0;
      if (head == "abelian") {
        int n = std::stoi(arg, &used);
        if (used == arg.size() && n > 0) return abelian(n);
      } else if (head == "douady") {
        double s = std::stod(arg, &used);
        if (used == arg.size() && std::isfinite(s)) return douady(s);
      }
    } catch (const std::logic_error&) {
    }
  }
  throw Error(ErrorCode::Config, "unknown Lie algebra preset '" + name + "'");
}

Vec LieAlgebra::bracket(const Vec& x, const Vec& y) const {
  Vec out = Vec::Zero(dim_);
  for (int i = 0; i < dim_; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < dim_; ++j) {
      double xy = x[i] * y[j];
      if (xy == 0.0) continue;
      for (int k = 0; k < dim_; ++k) out[k] += c(k, i, j) * xy;
    }
  }
  return out;
}

Mat LieAlgebra::ad(const Vec& x) const {
  Mat m = Mat::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k) m(k, j) += c(k, i, j) * x[i];
  }
  return m;
}

bool LieAlgebra::operator==(const LieAlgebra& other) const {
  return dim_ == other.dim_ && c_ == other.c_;
}

double jacobi_defect(const LieAlgebra& g) {
  int n = g.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        Vec ei = Vec::Unit(n, i), ej = Vec::Unit(n, j), ek = Vec::Unit(n, k);
        Vec s = g.bracket(g.bracket(ei, ej), ek) + g.bracket(g.bracket(ej, ek), ei) +
                g.bracket(g.bracket(ek, ei), ej);
        worst = std::max(worst, s.cwiseAbs().maxCoeff());
      }
    }
  }
  return worst;
}

Mat center_basis(const LieAlgebra& g, double tol) {
  int n = g.dim();
  // Row block j holds the matrix of x -> [x, e_j].
  Mat stacked(n * n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) stacked(j * n + k, i) = g.c(k, i, j);
  Eigen::JacobiSVD<Mat> svd(stacked, Eigen::ComputeFullV);
  const Vec& sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > tol) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

double automorphism_defect(const LieAlgebra& g, const Mat& psi) {
  int n = g.dim();
  if (psi.rows() != n || psi.cols() != n) {
    throw Error(ErrorCode::InvalidArgument, "automorphism matrix has wrong shape");
  }
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Vec ei = Vec::Unit(n, i), ej = Vec::Unit(n, j);
      Vec lhs = psi * g.bracket(ei, ej);
      Vec rhs = g.bracket(psi * ei, psi * ej);
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

Mat matrix_exp(const Mat& a) { return a.exp(); }

void matrix_exp_and_phi(const Mat& a, Mat& exp_a, Mat& phi_a) {
  // exp [[A, I], [0, 0]] = [[exp A, phi(A)], [0, I]].
  int n = static_cast<int>(a.rows());
  Mat big = Mat::Zero(2 * n, 2 * n);
  big.topLeftCorner(n, n) = a;
  big.topRightCorner(n, n) = Mat::Identity(n, n);
  Mat e = big.exp();
  exp_a = e.topLeftCorner(n, n);
  phi_a = e.topRightCorner(n, n);
}

}  // namespace tla
