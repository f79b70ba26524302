#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace tla {

enum class Var { S, T, Lam };

// Normalized bump: exp(-1/(u(1-u))) / Z on (0, 1), zero elsewhere; integrates to 1.
double bump(double u);
// Integral of bump from 0 to u: 0 for u <= 0, 1 for u >= 1.
double smooth_step(double u);
// Normalizing constant Z of bump.
double bump_normalizer();

// Immutable scalar expression in s, t, lam. Cheap to copy.
class FieldExpr {
 public:
  struct Node;

  // Grammar:
  //   expr    := term (('+' | '-') term)*
  //   term    := unary (('*' | '/') unary)*
  //   unary   := '-' unary | power
  //   power   := primary ('^' unary)?
  //   primary := number | var | func '(' expr ')' | '(' expr ')'
  //   var     := 's' | 't' | 'lam' | 'pi'
  //   func    := 'sin' | 'cos' | 'exp' | 'sqrt' | 'bump' | 'step'
  static FieldExpr parse(std::string_view text);
  static FieldExpr constant(double v);
  // sum_i coeffs[i] * exprs[i]; zero coefficients are dropped.
  static FieldExpr linear_combination(const std::vector<double>& coeffs, const std::vector<FieldExpr>& exprs);

  double eval(double s, double t, double lam) const;
  // Fully parenthesized; parses back to an expression with identical values.
  std::string to_string() const;
  bool is_zero_constant() const;

 private:
  explicit FieldExpr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

// Central difference with one Richardson extrapolation step.
double richardson_partial(const std::function<double(double)>& f, double x, double h = 1e-5);
double partial(const FieldExpr& e, Var v, double s, double t, double lam, double h = 1e-5);

}  // namespace tla
