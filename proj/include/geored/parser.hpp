#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>

#include "geored/chart.hpp"
#include "geored/expr.hpp"
#include "geored/errors.hpp"

namespace geored {

// Recursive-descent parser for the manifest expression grammar:
//
//   expr    := term (('+' | '-') term)*
//   term    := factor (('*' | '/') factor)*
//   factor  := '-' factor | power
//   power   := atom ('^' factor)?              (right-associative)
//   atom    := NUMBER | 'pi' | 'e' | COORD | FUNC '(' expr ')' | '(' expr ')'
//
// NUMBER is an unsigned decimal literal (digits, optional fraction, optional
// exponent), stored as an exact rational. FUNC is one of sin, cos, tan, exp,
// log, sqrt. Whitespace is insignificant. The returned tree mirrors the
// source; no folding happens here.

namespace detail {

class Parser {
public:
  Parser(std::string_view src, const Chart& chart) : src_(src), chart_(chart) {}

  Expr parse() {
    skip_ws();
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) throw SyntaxError("unexpected trailing input", pos_);
    return e;
  }

private:
  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      skip_ws();
      if (peek() == '+') {
        ++pos_;
        lhs = Expr::raw_binary(Expr::BinaryOp::Add, lhs, parse_term());
      } else if (peek() == '-') {
        ++pos_;
        lhs = Expr::raw_binary(Expr::BinaryOp::Sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_term() {
    Expr lhs = parse_factor();
    for (;;) {
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        lhs = Expr::raw_binary(Expr::BinaryOp::Mul, lhs, parse_factor());
      } else if (peek() == '/') {
        ++pos_;
        lhs = Expr::raw_binary(Expr::BinaryOp::Div, lhs, parse_factor());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_factor() {
    skip_ws();
    if (peek() == '-') {
      ++pos_;
      return Expr::raw_unary(Expr::UnaryOp::Neg, parse_factor());
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    skip_ws();
    if (peek() == '^') {
      ++pos_;
      return Expr::raw_binary(Expr::BinaryOp::Pow, base, parse_factor());
    }
    return base;
  }

  Expr parse_atom() {
    skip_ws();
    const char c = peek();
    if (c == '\0') throw SyntaxError("unexpected end of input", pos_);
    if (c == '(') {
      ++pos_;
      Expr e = parse_expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && std::isdigit(digit_after_dot())))
      return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw SyntaxError(std::string("unexpected character '") + c + "'", pos_);
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    std::int64_t mantissa = 0;
    int frac_digits = 0;
    bool any_digit = false;
    const auto push_digit = [&](char d) {
      if (mantissa > (INT64_MAX - (d - '0')) / 10)
        throw SyntaxError("numeric literal out of range", start);
      mantissa = mantissa * 10 + (d - '0');
      any_digit = true;
    };
    while (std::isdigit(static_cast<unsigned char>(peek()))) push_digit(src_[pos_++]);
    if (peek() == '.') {
      ++pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        push_digit(src_[pos_++]);
        ++frac_digits;
      }
    }
    if (!any_digit) throw SyntaxError("malformed numeric literal", start);
    int exp10 = 0;
    if (peek() == 'e' || peek() == 'E') {
      const std::size_t mark = pos_;
      ++pos_;
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        if (peek() == '-') sign = -1;
        ++pos_;
      }
      if (!std::isdigit(static_cast<unsigned char>(peek()))) {
        pos_ = mark;  // not an exponent; 'e' may be Euler's constant in "2e"? no: reject via trailing
      } else {
        int ev = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
          ev = ev * 10 + (src_[pos_++] - '0');
          if (ev > 1000) throw SyntaxError("numeric literal out of range", start);
        }
        exp10 = sign * ev;
      }
    }
    // value = mantissa * 10^(exp10 - frac_digits), kept exact.
    std::int64_t num = mantissa, den = 1;
    int shift = exp10 - frac_digits;
    while (shift > 0) {
      if (num > INT64_MAX / 10) throw SyntaxError("numeric literal out of range", start);
      num *= 10;
      --shift;
    }
    while (shift < 0) {
      if (den > INT64_MAX / 10) throw SyntaxError("numeric literal out of range", start);
      den *= 10;
      ++shift;
    }
    const auto r = Rational::make(num, den);
    if (!r) throw SyntaxError("numeric literal out of range", start);
    return Expr::number(*r);
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') ++pos_;
    const std::string name(src_.substr(start, pos_ - start));
    skip_ws();
    if (peek() == '(') {
      const Expr::UnaryOp op = function_op(name, start);
      ++pos_;
      Expr arg = parse_expr();
      expect(')');
      return Expr::raw_unary(op, arg);
    }
    if (name == "pi") return Expr::pi();
    if (name == "e") return Expr::euler();
    if (chart_.has_coord(name)) return Expr::variable(name);
    throw UnknownSymbol(name, start);
  }

  Expr::UnaryOp function_op(const std::string& name, std::size_t at) {
    if (name == "sin") return Expr::UnaryOp::Sin;
    if (name == "cos") return Expr::UnaryOp::Cos;
    if (name == "tan") return Expr::UnaryOp::Tan;
    if (name == "exp") return Expr::UnaryOp::Exp;
    if (name == "log") return Expr::UnaryOp::Log;
    if (name == "sqrt") return Expr::UnaryOp::Sqrt;
    throw UnknownSymbol(name, at);
  }

  char digit_after_dot() const {
    return pos_ + 1 < src_.size() ? src_[pos_ + 1] : '\0';
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c)
      throw SyntaxError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  std::string_view src_;
  const Chart& chart_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Expr parse(std::string_view source, const Chart& chart) {
  return detail::Parser(source, chart).parse();
}

}  // namespace geored
