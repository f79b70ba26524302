#include "tla/field_expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "tla/errors.hpp"

namespace tla {

// ---------------------------------------------------------------------------
// bump / smooth_step

namespace {

constexpr int kPanels = 128;
constexpr int kMaxDepth = 200;

double raw_bump(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return std::exp(-1.0 / (u * (1.0 - u)));
}

// n-point Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
template <int N>
struct GaussLegendre {
  std::array<double, N> x{}, w{};
  GaussLegendre() {
    for (int i = 0; i < N; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (N + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= N; ++k) {
          double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = N * (z * p1 - p0) / (z * z - 1.0);
        double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[i] = z;
      w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }
  template <class F>
  double integrate(F&& f, double a, double b) const {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a), sum = 0.0;
    for (int i = 0; i < N; ++i) sum += w[i] * f(mid + half * x[i]);
    return sum * half;
  }
};

struct StepTable {
  GaussLegendre<16> gl;
  double z = 0.0;
  std::array<double, kPanels + 1> cumulative{};
  StepTable() {
    GaussLegendre<20> fine;
    double acc = 0.0;
    cumulative[0] = 0.0;
    for (int k = 0; k < kPanels; ++k) {
      acc += fine.integrate(raw_bump, double(k) / kPanels, double(k + 1) / kPanels);
      cumulative[k + 1] = acc;
    }
    z = acc;
    for (double& c : cumulative) c /= z;
  }
};

const StepTable& step_table() {
  static const StepTable table;
  return table;
}

}  // namespace

double bump_normalizer() { return step_table().z; }

double bump(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return raw_bump(u) / step_table().z;
}

double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const StepTable& tab = step_table();
  int k = std::min(static_cast<int>(u * kPanels), kPanels - 1);
  double a = double(k) / kPanels;
  // Integrate towards the nearer table node.
  double b = double(k + 1) / kPanels;
  if (u - a <= b - u) {
    return tab.cumulative[k] + tab.gl.integrate(raw_bump, a, u) / tab.z;
  }
  return tab.cumulative[k + 1] - tab.gl.integrate(raw_bump, u, b) / tab.z;
}

// ---------------------------------------------------------------------------
// AST

enum class Kind { Num, VarS, VarT, VarLam, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp, Sqrt, Bump, Step };

struct FieldExpr::Node {
  Kind kind;
  double value = 0.0;
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const FieldExpr::Node>;

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr, double v = 0.0) {
  auto n = std::make_shared<FieldExpr::Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  n->value = v;
  return n;
}

const char* func_name(Kind k) {
  switch (k) {
    case Kind::Sin: return "sin";
    case Kind::Cos: return "cos";
    case Kind::Exp: return "exp";
    case Kind::Sqrt: return "sqrt";
    case Kind::Bump: return "bump";
    case Kind::Step: return "step";
    default: return "";
  }
}

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw EvalError(std::string("non-finite value in ") + what);
  return v;
}

double eval_node(const FieldExpr::Node& n, double s, double t, double lam) {
  switch (n.kind) {
    case Kind::Num: return n.value;
    case Kind::VarS: return s;
    case Kind::VarT: return t;
    case Kind::VarLam: return lam;
    case Kind::Neg: return -eval_node(*n.a, s, t, lam);
    case Kind::Add: return checked(eval_node(*n.a, s, t, lam) + eval_node(*n.b, s, t, lam), "+");
    case Kind::Sub: return checked(eval_node(*n.a, s, t, lam) - eval_node(*n.b, s, t, lam), "-");
    case Kind::Mul: return checked(eval_node(*n.a, s, t, lam) * eval_node(*n.b, s, t, lam), "*");
    case Kind::Div: {
      double num = eval_node(*n.a, s, t, lam);
      double den = eval_node(*n.b, s, t, lam);
      if (den == 0.0) throw EvalError("division by zero");
      return checked(num / den, "/");
    }
    case Kind::Pow:
      return checked(std::pow(eval_node(*n.a, s, t, lam), eval_node(*n.b, s, t, lam)), "^");
    case Kind::Sin: return std::sin(eval_node(*n.a, s, t, lam));
    case Kind::Cos: return std::cos(eval_node(*n.a, s, t, lam));
    case Kind::Exp: return checked(std::exp(eval_node(*n.a, s, t, lam)), "exp");
    case Kind::Sqrt: {
      double x = eval_node(*n.a, s, t, lam);
      if (x < 0.0) throw EvalError("sqrt of negative value");
      return std::sqrt(x);
    }
    case Kind::Bump: return bump(eval_node(*n.a, s, t, lam));
    case Kind::Step: return smooth_step(eval_node(*n.a, s, t, lam));
  }
  return 0.0;
}

std::string number_text(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  if (v < 0.0 || (v == 0.0 && std::signbit(v))) return std::string("(") + buf + ")";
  return buf;
}

void print_node(const FieldExpr::Node& n, std::string& out) {
  auto binary = [&](const char* op) {
    out += '(';
    print_node(*n.a, out);
    out += ' ';
    out += op;
    out += ' ';
    print_node(*n.b, out);
    out += ')';
  };
  switch (n.kind) {
    case Kind::Num: out += number_text(n.value); break;
    case Kind::VarS: out += 's'; break;
    case Kind::VarT: out += 't'; break;
    case Kind::VarLam: out += "lam"; break;
    case Kind::Neg:
      out += "(-";
      print_node(*n.a, out);
      out += ')';
      break;
    case Kind::Add: binary("+"); break;
    case Kind::Sub: binary("-"); break;
    case Kind::Mul: binary("*"); break;
    case Kind::Div: binary("/"); break;
    case Kind::Pow: binary("^"); break;
    default:
      out += func_name(n.kind);
      out += '(';
      print_node(*n.a, out);
      out += ')';
      break;
  }
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail({"operator", "end of input"});
    return e;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int depth_ = 0;

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& parser) : p(parser) {
      if (++p.depth_ > kMaxDepth) {
        throw ParseError(p.pos_, {}, "expression nested too deeply at offset " + std::to_string(p.pos_));
      }
    }
    ~DepthGuard() { --p.depth_; }
  };

  [[noreturn]] void fail(std::vector<std::string> expected) {
    std::string msg = "parse error at offset " + std::to_string(pos_) + ": expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) msg += (i ? " or " : "") + expected[i];
    if (pos_ < text_.size()) {
      msg += ", found '";
      msg += text_[pos_];
      msg += "'";
    } else {
      msg += ", found end of input";
    }
    throw ParseError(pos_, std::move(expected), msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    DepthGuard guard(*this);
    NodePtr left = term();
    for (;;) {
      if (accept('+')) {
        left = make(Kind::Add, left, term());
      } else if (accept('-')) {
        left = make(Kind::Sub, left, term());
      } else {
        return left;
      }
    }
  }

  NodePtr term() {
    NodePtr left = unary();
    for (;;) {
      if (accept('*')) {
        left = make(Kind::Mul, left, unary());
      } else if (accept('/')) {
        left = make(Kind::Div, left, unary());
      } else {
        return left;
      }
    }
  }

  NodePtr unary() {
    DepthGuard guard(*this);
    if (accept('-')) return make(Kind::Neg, unary());
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make(Kind::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail({"number", "variable", "function", "'('"});
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!accept(')')) fail({"')'"});
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail({"number", "variable", "function", "'('"});
  }

  NodePtr number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      } else {
        pos_ = save;
      }
    }
    double v = 0.0;
    auto res = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != text_.data() + pos_ || !std::isfinite(v)) {
      pos_ = start;
      fail({"number"});
    }
    return make(Kind::Num, nullptr, nullptr, v);
  }

  NodePtr identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    std::string_view id = text_.substr(start, pos_ - start);
    if (id == "s") return make(Kind::VarS);
    if (id == "t") return make(Kind::VarT);
    if (id == "lam") return make(Kind::VarLam);
    if (id == "pi") return make(Kind::Num, nullptr, nullptr, std::numbers::pi);
    Kind k;
    if (id == "sin") {
      k = Kind::Sin;
    } else if (id == "cos") {
      k = Kind::Cos;
    } else if (id == "exp") {
      k = Kind::Exp;
    } else if (id == "sqrt") {
      k = Kind::Sqrt;
    } else if (id == "bump") {
      k = Kind::Bump;
    } else if (id == "step") {
      k = Kind::Step;
    } else {
      pos_ = start;
      fail({"s", "t", "lam", "pi", "sin", "cos", "exp", "sqrt", "bump", "step"});
    }
    if (!accept('(')) fail({"'('"});
    NodePtr arg = expr();
    if (!accept(')')) fail({"')'"});
    return make(k, arg);
  }
};

}  // namespace

ParseError::ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& message)
    : Error(ErrorCode::Config, message), offset_(offset), expected_(std::move(expected)) {}

FieldExpr FieldExpr::parse(std::string_view text) { return FieldExpr(Parser(text).parse()); }

FieldExpr FieldExpr::constant(double v) {
  if (!std::isfinite(v)) throw EvalError("non-finite constant");
  return FieldExpr(make(Kind::Num, nullptr, nullptr, v));
}

FieldExpr FieldExpr::linear_combination(const std::vector<double>& coeffs, const std::vector<FieldExpr>& exprs) {
  if (coeffs.size() != exprs.size()) throw Error(ErrorCode::InvalidArgument, "coefficient count mismatch");
  NodePtr sum;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0.0 || exprs[i].is_zero_constant()) continue;
    NodePtr term = coeffs[i] == 1.0 ? exprs[i].root_ : make(Kind::Mul, make(Kind::Num, nullptr, nullptr, coeffs[i]), exprs[i].root_);
    sum = sum ? make(Kind::Add, sum, term) : term;
  }
  if (!sum) return constant(0.0);
  return FieldExpr(sum);
}

double FieldExpr::eval(double s, double t, double lam) const {
  return checked(eval_node(*root_, s, t, lam), "expression");
}

std::string FieldExpr::to_string() const {
  std::string out;
  print_node(*root_, out);
  return out;
}

bool FieldExpr::is_zero_constant() const { return root_->kind == Kind::Num && root_->value == 0.0; }

double richardson_partial(const std::function<double(double)>& f, double x, double h) {
  double d1 = (f(x + h) - f(x - h)) / (2.0 * h);
  double h2 = 0.5 * h;
  double d2 = (f(x + h2) - f(x - h2)) / (2.0 * h2);
  return (4.0 * d2 - d1) / 3.0;
}

double partial(const FieldExpr& e, Var v, double s, double t, double lam, double h) {
  switch (v) {
    case Var::S: return richardson_partial([&](double x) { return e.eval(x, t, lam); }, s, h);
    case Var::T: return richardson_partial([&](double x) { return e.eval(s, x, lam); }, t, h);
    case Var::Lam: return richardson_partial([&](double x) { return e.eval(s, t, x); }, lam, h);
  }
  return 0.0;
}

}  // namespace tla
