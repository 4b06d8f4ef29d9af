#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>

namespace geored {

// Exact rational over int64, always stored reduced with a positive
// denominator. Arithmetic is checked: any operation that would overflow
// returns nullopt and the caller keeps the expression unfolded instead.
class Rational {
public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)

  static std::optional<Rational> make(std::int64_t num, std::int64_t den) {
    if (den == 0) return std::nullopt;
    if (num == INT64_MIN || den == INT64_MIN) return std::nullopt;  // cannot negate
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    Rational r;
    r.num_ = g ? num / g : 0;
    r.den_ = g ? den / g : 1;
    return r;
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_one() const { return num_ == 1 && den_ == 1; }
  bool is_integer() const { return den_ == 1; }
  bool is_negative() const { return num_ < 0; }

  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  std::optional<Rational> neg() const {
    if (num_ == INT64_MIN) return std::nullopt;
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  std::optional<Rational> add(const Rational& o) const {
    return from_i128(i128(num_) * o.den_ + i128(o.num_) * den_, i128(den_) * o.den_);
  }

  std::optional<Rational> sub(const Rational& o) const {
    return from_i128(i128(num_) * o.den_ - i128(o.num_) * den_, i128(den_) * o.den_);
  }

  std::optional<Rational> mul(const Rational& o) const {
    return from_i128(i128(num_) * o.num_, i128(den_) * o.den_);
  }

  std::optional<Rational> div(const Rational& o) const {
    if (o.num_ == 0) return std::nullopt;
    return from_i128(i128(num_) * o.den_, i128(den_) * o.num_);
  }

  // Integer powers with |exp| capped; exact or nothing.
  std::optional<Rational> pow_int(std::int64_t e) const {
    if (e < -64 || e > 64) return std::nullopt;
    if (e == 0) return Rational(1);
    Rational base = *this;
    bool invert = e < 0;
    if (invert) {
      if (base.num_ == 0) return std::nullopt;
      e = -e;
    }
    std::optional<Rational> acc = Rational(1);
    for (std::int64_t i = 0; i < e; ++i) {
      acc = acc->mul(base);
      if (!acc) return std::nullopt;
    }
    if (invert) return Rational(1).div(*acc);
    return acc;
  }

  // Exact square root, when both numerator and denominator are perfect squares.
  std::optional<Rational> sqrt_exact() const {
    if (num_ < 0) return std::nullopt;
    const auto isqrt = [](std::int64_t v) -> std::optional<std::int64_t> {
      if (v < 0) return std::nullopt;
      auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
      for (std::int64_t c = r > 1 ? r - 1 : 0; c <= r + 1; ++c)
        if (c * c == v) return c;
      return std::nullopt;
    };
    const auto rn = isqrt(num_);
    const auto rd = isqrt(den_);
    if (!rn || !rd) return std::nullopt;
    return make(*rn, *rd);
  }

private:
  using i128 = __int128;

  static std::optional<Rational> from_i128(i128 num, i128 den) {
    if (den == 0) return std::nullopt;
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const i128 g = gcd128(num < 0 ? -num : num, den);
    if (g) {
      num /= g;
      den /= g;
    }
    if (num > INT64_MAX || num < INT64_MIN || den > INT64_MAX) return std::nullopt;
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den == 0 ? 1 : den);
    return r;
  }

  static i128 gcd128(i128 a, i128 b) {
    while (b) {
      const i128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace geored
