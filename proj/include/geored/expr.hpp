#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "geored/errors.hpp"
#include "geored/rational.hpp"

namespace geored {

// Immutable symbolic scalar expression over chart coordinates.
//
// Nodes form a shared DAG behind shared_ptr<const Node>; an Expr is a cheap
// value handle. All algebra goes through the smart constructors (operators
// and the named functions below), which fold the conservative identities:
// exact rational arithmetic, +-0, *1, *0, /1, double negation, pow collapse
// for integer exponents, and the exact special values sin(0), cos(0), exp(0),
// log(1), sqrt of perfect squares. Nothing beyond that — no trig rewriting.
//
// The parser builds nodes through the raw_* factories instead, so a parsed
// tree mirrors the source structurally.
class Expr {
public:
  enum class Kind { Number, Variable, Constant, Unary, Binary };
  enum class UnaryOp { Neg, Sin, Cos, Tan, Exp, Log, Sqrt };
  enum class BinaryOp { Add, Sub, Mul, Div, Pow };
  enum class ConstKind { Pi, E };

  // Default: the literal 0.
  Expr() : node_(zero_node()) {}

  static Expr number(const Rational& r) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Number;
    n->number = r;
    return Expr(std::move(n));
  }
  static Expr integer(std::int64_t v) { return number(Rational(v)); }
  static Expr variable(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Variable;
    n->name = std::move(name);
    return Expr(std::move(n));
  }
  static Expr constant(ConstKind c) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Constant;
    n->cons = c;
    return Expr(std::move(n));
  }
  static Expr pi() { return constant(ConstKind::Pi); }
  static Expr euler() { return constant(ConstKind::E); }

  // Structure-faithful factories (no folding); used by the parser.
  static Expr raw_unary(UnaryOp op, Expr a) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Unary;
    n->uop = op;
    n->a = std::move(a.node_);
    return Expr(std::move(n));
  }
  static Expr raw_binary(BinaryOp op, Expr a, Expr b) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Binary;
    n->bop = op;
    n->a = std::move(a.node_);
    n->b = std::move(b.node_);
    return Expr(std::move(n));
  }

  Kind kind() const { return node_->kind; }
  const Rational& number_value() const { return node_->number; }
  const std::string& var_name() const { return node_->name; }
  ConstKind const_kind() const { return node_->cons; }
  UnaryOp unary_op() const { return node_->uop; }
  BinaryOp binary_op() const { return node_->bop; }
  Expr child_a() const { return Expr(node_->a); }
  Expr child_b() const { return Expr(node_->b); }

  bool is_number() const { return node_->kind == Kind::Number; }
  bool is_literal(std::int64_t v) const {
    return is_number() && node_->number == Rational(v);
  }
  bool is_zero_literal() const { return is_number() && node_->number.is_zero(); }

  // Identity of the underlying node; used as memoization key.
  const void* id() const { return node_.get(); }

  friend bool structurally_equal(const Expr& a, const Expr& b);

private:
  struct Node {
    Kind kind = Kind::Number;
    Rational number{};
    std::string name;
    ConstKind cons = ConstKind::Pi;
    UnaryOp uop = UnaryOp::Neg;
    BinaryOp bop = BinaryOp::Add;
    std::shared_ptr<const Node> a;
    std::shared_ptr<const Node> b;
  };

  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static const std::shared_ptr<const Node>& zero_node() {
    static const std::shared_ptr<const Node> z = [] {
      auto n = std::make_shared<Node>();
      n->kind = Kind::Number;
      n->number = Rational(0);
      return n;
    }();
    return z;
  }

  std::shared_ptr<const Node> node_;

  friend Expr operator+(const Expr&, const Expr&);
  friend Expr operator-(const Expr&, const Expr&);
  friend Expr operator*(const Expr&, const Expr&);
  friend Expr operator/(const Expr&, const Expr&);
  friend Expr operator-(const Expr&);
  friend Expr pow(const Expr&, const Expr&);
  friend Expr make_unary_fn(UnaryOp, const Expr&);
};

// ---------------------------------------------------------------------------
// Smart constructors

inline Expr operator-(const Expr& a) {
  if (a.is_number()) {
    if (auto r = a.number_value().neg()) return Expr::number(*r);
  }
  if (a.kind() == Expr::Kind::Unary && a.unary_op() == Expr::UnaryOp::Neg) return a.child_a();
  return Expr::raw_unary(Expr::UnaryOp::Neg, a);
}

inline Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_number() && b.is_number()) {
    if (auto r = a.number_value().add(b.number_value())) return Expr::number(*r);
  }
  if (a.is_zero_literal()) return b;
  if (b.is_zero_literal()) return a;
  return Expr::raw_binary(Expr::BinaryOp::Add, a, b);
}

inline Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_number() && b.is_number()) {
    if (auto r = a.number_value().sub(b.number_value())) return Expr::number(*r);
  }
  if (b.is_zero_literal()) return a;
  if (a.is_zero_literal()) return -b;
  return Expr::raw_binary(Expr::BinaryOp::Sub, a, b);
}

inline Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_number() && b.is_number()) {
    if (auto r = a.number_value().mul(b.number_value())) return Expr::number(*r);
  }
  if (a.is_zero_literal() || b.is_zero_literal()) return Expr::integer(0);
  if (a.is_literal(1)) return b;
  if (b.is_literal(1)) return a;
  if (a.is_literal(-1)) return -b;
  if (b.is_literal(-1)) return -a;
  return Expr::raw_binary(Expr::BinaryOp::Mul, a, b);
}

inline Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_number() && b.is_number() && !b.is_zero_literal()) {
    if (auto r = a.number_value().div(b.number_value())) return Expr::number(*r);
  }
  if (b.is_literal(1)) return a;
  if (b.is_literal(-1)) return -a;
  if (a.is_zero_literal() && b.is_number() && !b.is_zero_literal()) return Expr::integer(0);
  return Expr::raw_binary(Expr::BinaryOp::Div, a, b);
}

inline Expr pow(const Expr& a, const Expr& b) {
  if (b.is_literal(1)) return a;
  if (b.is_number() && b.number_value().is_zero()) return Expr::integer(1);
  if (a.is_literal(1)) return Expr::integer(1);
  if (a.is_number() && b.is_number() && b.number_value().is_integer()) {
    if (auto r = a.number_value().pow_int(b.number_value().num())) return Expr::number(*r);
  }
  // (x^c1)^c2 -> x^(c1*c2) for integer exponents only.
  if (a.kind() == Expr::Kind::Binary && a.binary_op() == Expr::BinaryOp::Pow && b.is_number() &&
      b.number_value().is_integer() && a.child_b().is_number() &&
      a.child_b().number_value().is_integer()) {
    if (auto prod = a.child_b().number_value().mul(b.number_value()))
      return pow(a.child_a(), Expr::number(*prod));
  }
  return Expr::raw_binary(Expr::BinaryOp::Pow, a, b);
}

inline Expr pow(const Expr& a, std::int64_t e) { return pow(a, Expr::integer(e)); }

inline Expr make_unary_fn(Expr::UnaryOp op, const Expr& a) {
  using U = Expr::UnaryOp;
  if (a.is_number()) {
    const Rational& r = a.number_value();
    switch (op) {
      case U::Sin:
      case U::Tan:
        if (r.is_zero()) return Expr::integer(0);
        break;
      case U::Cos:
        if (r.is_zero()) return Expr::integer(1);
        break;
      case U::Exp:
        if (r.is_zero()) return Expr::integer(1);
        break;
      case U::Log:
        if (r.is_one()) return Expr::integer(0);
        break;
      case U::Sqrt:
        if (auto s = r.sqrt_exact()) return Expr::number(*s);
        break;
      case U::Neg:
        break;
    }
  }
  if (op == U::Neg) return -a;
  return Expr::raw_unary(op, a);
}

inline Expr sin(const Expr& a) { return make_unary_fn(Expr::UnaryOp::Sin, a); }
inline Expr cos(const Expr& a) { return make_unary_fn(Expr::UnaryOp::Cos, a); }
inline Expr tan(const Expr& a) { return make_unary_fn(Expr::UnaryOp::Tan, a); }
inline Expr exp(const Expr& a) { return make_unary_fn(Expr::UnaryOp::Exp, a); }
inline Expr log(const Expr& a) { return make_unary_fn(Expr::UnaryOp::Log, a); }
inline Expr sqrt(const Expr& a) { return make_unary_fn(Expr::UnaryOp::Sqrt, a); }

// ---------------------------------------------------------------------------
// Structural equality

namespace detail {
inline bool struct_eq(const Expr& a, const Expr& b,
                      std::set<std::pair<const void*, const void*>>& seen) {
  if (a.id() == b.id()) return true;
  if (a.kind() != b.kind()) return false;
  if (seen.count({a.id(), b.id()})) return true;
  switch (a.kind()) {
    case Expr::Kind::Number:
      return a.number_value() == b.number_value();
    case Expr::Kind::Variable:
      return a.var_name() == b.var_name();
    case Expr::Kind::Constant:
      return a.const_kind() == b.const_kind();
    case Expr::Kind::Unary:
      if (a.unary_op() != b.unary_op()) return false;
      seen.insert({a.id(), b.id()});
      return struct_eq(a.child_a(), b.child_a(), seen);
    case Expr::Kind::Binary:
      if (a.binary_op() != b.binary_op()) return false;
      seen.insert({a.id(), b.id()});
      return struct_eq(a.child_a(), b.child_a(), seen) &&
             struct_eq(a.child_b(), b.child_b(), seen);
  }
  return false;
}
}  // namespace detail

inline bool structurally_equal(const Expr& a, const Expr& b) {
  std::set<std::pair<const void*, const void*>> seen;
  return detail::struct_eq(a, b, seen);
}

// ---------------------------------------------------------------------------
// Evaluation

using Point = std::unordered_map<std::string, double>;

namespace detail {

struct EvalState {
  const Point* point;
  std::unordered_map<const void*, double> memo;
  double max_abs = 0.0;
};

inline double eval_node(const Expr& e, EvalState& st) {
  if (auto it = st.memo.find(e.id()); it != st.memo.end()) return it->second;
  double v = 0.0;
  using K = Expr::Kind;
  using U = Expr::UnaryOp;
  using B = Expr::BinaryOp;
  switch (e.kind()) {
    case K::Number:
      v = e.number_value().value();
      break;
    case K::Variable: {
      auto it = st.point->find(e.var_name());
      if (it == st.point->end())
        throw DomainError("eval: no value for variable '" + e.var_name() + "'");
      v = it->second;
      break;
    }
    case K::Constant:
      v = e.const_kind() == Expr::ConstKind::Pi ? M_PI : M_E;
      break;
    case K::Unary: {
      const double x = eval_node(e.child_a(), st);
      switch (e.unary_op()) {
        case U::Neg: v = -x; break;
        case U::Sin: v = std::sin(x); break;
        case U::Cos: v = std::cos(x); break;
        case U::Tan: v = std::tan(x); break;
        case U::Exp: v = std::exp(x); break;
        case U::Log:
          if (x <= 0.0) throw DomainError("eval: log of non-positive value");
          v = std::log(x);
          break;
        case U::Sqrt:
          if (x < 0.0) throw DomainError("eval: sqrt of negative value");
          v = std::sqrt(x);
          break;
      }
      break;
    }
    case K::Binary: {
      const double x = eval_node(e.child_a(), st);
      const double y = eval_node(e.child_b(), st);
      switch (e.binary_op()) {
        case B::Add: v = x + y; break;
        case B::Sub: v = x - y; break;
        case B::Mul: v = x * y; break;
        case B::Div:
          if (y == 0.0) throw DomainError("eval: division by zero");
          v = x / y;
          break;
        case B::Pow:
          if (x == 0.0 && y < 0.0) throw DomainError("eval: zero raised to negative power");
          if (x < 0.0 && y != std::floor(y))
            throw DomainError("eval: negative base with non-integer exponent");
          v = std::pow(x, y);
          break;
      }
      break;
    }
  }
  if (!std::isfinite(v)) throw DomainError("eval: non-finite intermediate value");
  const double av = v < 0 ? -v : v;
  if (av > st.max_abs) st.max_abs = av;
  st.memo.emplace(e.id(), v);
  return v;
}

}  // namespace detail

struct EvalResult {
  double value = 0.0;
  // Largest |value| attained by any subexpression; the magnitude against
  // which residuals are judged in zero tests.
  double scale = 0.0;
};

inline EvalResult eval_with_scale(const Expr& e, const Point& point) {
  detail::EvalState st;
  st.point = &point;
  const double v = detail::eval_node(e, st);
  return {v, st.max_abs};
}

inline double eval(const Expr& e, const Point& point) { return eval_with_scale(e, point).value; }

// ---------------------------------------------------------------------------
// Differentiation (total, symbolic)

namespace detail {

inline Expr diff_node(const Expr& e, const std::string& var,
                      std::unordered_map<const void*, Expr>& memo) {
  if (auto it = memo.find(e.id()); it != memo.end()) return it->second;
  using K = Expr::Kind;
  using U = Expr::UnaryOp;
  using B = Expr::BinaryOp;
  Expr d;
  switch (e.kind()) {
    case K::Number:
    case K::Constant:
      d = Expr::integer(0);
      break;
    case K::Variable:
      d = e.var_name() == var ? Expr::integer(1) : Expr::integer(0);
      break;
    case K::Unary: {
      const Expr& f = e.child_a();
      const Expr df = diff_node(f, var, memo);
      switch (e.unary_op()) {
        case U::Neg: d = -df; break;
        case U::Sin: d = cos(f) * df; break;
        case U::Cos: d = -(sin(f) * df); break;
        case U::Tan: d = (Expr::integer(1) + pow(tan(f), 2)) * df; break;
        case U::Exp: d = exp(f) * df; break;
        case U::Log: d = df / f; break;
        case U::Sqrt: d = df / (Expr::integer(2) * sqrt(f)); break;
      }
      break;
    }
    case K::Binary: {
      const Expr& f = e.child_a();
      const Expr& g = e.child_b();
      const Expr df = diff_node(f, var, memo);
      const Expr dg = diff_node(g, var, memo);
      switch (e.binary_op()) {
        case B::Add: d = df + dg; break;
        case B::Sub: d = df - dg; break;
        case B::Mul: d = df * g + f * dg; break;
        case B::Div: d = (df * g - f * dg) / pow(g, 2); break;
        case B::Pow:
          if (g.is_number()) {
            // power rule: c * f^(c-1) * f'
            const Expr c = g;
            d = c * pow(f, g - Expr::integer(1)) * df;
          } else {
            // general: f^g * (g' log f + g f'/f)
            d = pow(f, g) * (dg * log(f) + g * df / f);
          }
          break;
      }
      break;
    }
  }
  memo.emplace(e.id(), d);
  return d;
}

}  // namespace detail

inline Expr differentiate(const Expr& e, const std::string& var) {
  std::unordered_map<const void*, Expr> memo;
  return detail::diff_node(e, var, memo);
}

// ---------------------------------------------------------------------------
// Simplification: rebuild through the smart constructors.

namespace detail {

inline Expr simplify_node(const Expr& e, std::unordered_map<const void*, Expr>& memo) {
  if (auto it = memo.find(e.id()); it != memo.end()) return it->second;
  Expr s;
  switch (e.kind()) {
    case Expr::Kind::Number:
    case Expr::Kind::Variable:
    case Expr::Kind::Constant:
      s = e;
      break;
    case Expr::Kind::Unary:
      s = make_unary_fn(e.unary_op(), simplify_node(e.child_a(), memo));
      break;
    case Expr::Kind::Binary: {
      const Expr a = simplify_node(e.child_a(), memo);
      const Expr b = simplify_node(e.child_b(), memo);
      switch (e.binary_op()) {
        case Expr::BinaryOp::Add: s = a + b; break;
        case Expr::BinaryOp::Sub: s = a - b; break;
        case Expr::BinaryOp::Mul: s = a * b; break;
        case Expr::BinaryOp::Div: s = a / b; break;
        case Expr::BinaryOp::Pow: s = pow(a, b); break;
      }
      break;
    }
  }
  memo.emplace(e.id(), s);
  return s;
}

}  // namespace detail

inline Expr simplify(const Expr& e) {
  std::unordered_map<const void*, Expr> memo;
  return detail::simplify_node(e, memo);
}

// ---------------------------------------------------------------------------
// Free variables

namespace detail {
inline void collect_vars(const Expr& e, std::set<std::string>& out,
                         std::set<const void*>& seen) {
  if (!seen.insert(e.id()).second) return;
  switch (e.kind()) {
    case Expr::Kind::Variable:
      out.insert(e.var_name());
      break;
    case Expr::Kind::Unary:
      collect_vars(e.child_a(), out, seen);
      break;
    case Expr::Kind::Binary:
      collect_vars(e.child_a(), out, seen);
      collect_vars(e.child_b(), out, seen);
      break;
    default:
      break;
  }
}
}  // namespace detail

inline std::set<std::string> free_variables(const Expr& e) {
  std::set<std::string> out;
  std::set<const void*> seen;
  detail::collect_vars(e, out, seen);
  return out;
}

// ---------------------------------------------------------------------------
// Printing. Output reparses to the same structure for any tree the parser
// can produce; rationals that have no exact decimal form print as "p/q".

namespace detail {

// Grammar precedence levels used by the printer:
//   1 add/sub, 2 mul/div, 3 unary minus, 4 pow, 6 atoms and function calls.
inline int print_level(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Number: {
      const Rational& r = e.number_value();
      int lvl = 6;
      if (!r.is_integer()) lvl = 2;  // may print as p/q
      if (r.is_negative()) lvl = lvl < 3 ? lvl : 3;
      return lvl;
    }
    case Expr::Kind::Variable:
    case Expr::Kind::Constant:
      return 6;
    case Expr::Kind::Unary:
      return e.unary_op() == Expr::UnaryOp::Neg ? 3 : 6;
    case Expr::Kind::Binary:
      switch (e.binary_op()) {
        case Expr::BinaryOp::Add:
        case Expr::BinaryOp::Sub: return 1;
        case Expr::BinaryOp::Mul:
        case Expr::BinaryOp::Div: return 2;
        case Expr::BinaryOp::Pow: return 4;
      }
  }
  return 6;
}

inline std::string format_nonneg_rational(const Rational& r) {
  if (r.is_integer()) return std::to_string(r.num());
  // Exact decimal when the denominator is 2^a 5^b.
  std::int64_t den = r.den();
  int twos = 0, fives = 0;
  while (den % 2 == 0) { den /= 2; ++twos; }
  while (den % 5 == 0) { den /= 5; ++fives; }
  if (den == 1) {
    const int k = twos > fives ? twos : fives;
    if (k <= 18) {
      __int128 scaled = r.num();
      for (int i = 0; i < k; ++i) scaled *= 10;
      scaled /= r.den();
      std::string digits;
      __int128 s = scaled;
      if (s == 0) digits = "0";
      while (s > 0) {
        digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(s % 10)));
        s /= 10;
      }
      while (static_cast<int>(digits.size()) <= k) digits.insert(digits.begin(), '0');
      digits.insert(digits.size() - static_cast<std::size_t>(k), ".");
      while (digits.back() == '0') digits.pop_back();
      if (digits.back() == '.') digits.pop_back();
      return digits;
    }
  }
  return std::to_string(r.num()) + "/" + std::to_string(r.den());
}

inline const char* unary_name(Expr::UnaryOp op) {
  switch (op) {
    case Expr::UnaryOp::Neg: return "-";
    case Expr::UnaryOp::Sin: return "sin";
    case Expr::UnaryOp::Cos: return "cos";
    case Expr::UnaryOp::Tan: return "tan";
    case Expr::UnaryOp::Exp: return "exp";
    case Expr::UnaryOp::Log: return "log";
    case Expr::UnaryOp::Sqrt: return "sqrt";
  }
  return "?";
}

inline void print_node(const Expr& e, int min_level, std::string& out) {
  const int lvl = print_level(e);
  const bool parens = lvl < min_level;
  if (parens) out += '(';
  switch (e.kind()) {
    case Expr::Kind::Number: {
      const Rational& r = e.number_value();
      if (r.is_negative()) {
        out += '-';
        if (auto p = r.neg())
          out += format_nonneg_rational(*p);
        else
          out += "inf";  // unreachable for reduced rationals
      } else {
        out += format_nonneg_rational(r);
      }
      break;
    }
    case Expr::Kind::Variable:
      out += e.var_name();
      break;
    case Expr::Kind::Constant:
      out += e.const_kind() == Expr::ConstKind::Pi ? "pi" : "e";
      break;
    case Expr::Kind::Unary:
      if (e.unary_op() == Expr::UnaryOp::Neg) {
        out += '-';
        print_node(e.child_a(), 3, out);
      } else {
        out += unary_name(e.unary_op());
        out += '(';
        print_node(e.child_a(), 0, out);
        out += ')';
      }
      break;
    case Expr::Kind::Binary: {
      const char* op = "";
      int left_min = 0, right_min = 0;
      switch (e.binary_op()) {
        case Expr::BinaryOp::Add: op = " + "; left_min = 1; right_min = 2; break;
        case Expr::BinaryOp::Sub: op = " - "; left_min = 1; right_min = 2; break;
        case Expr::BinaryOp::Mul: op = "*"; left_min = 2; right_min = 3; break;
        case Expr::BinaryOp::Div: op = "/"; left_min = 2; right_min = 3; break;
        case Expr::BinaryOp::Pow: op = "^"; left_min = 5; right_min = 3; break;
      }
      print_node(e.child_a(), left_min, out);
      out += op;
      print_node(e.child_b(), right_min, out);
      break;
    }
  }
  if (parens) out += ')';
}

}  // namespace detail

inline std::string to_string(const Expr& e) {
  std::string out;
  detail::print_node(e, 0, out);
  return out;
}

}  // namespace geored
