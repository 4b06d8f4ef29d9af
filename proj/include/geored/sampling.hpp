#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "geored/chart.hpp"
#include "geored/expr.hpp"

namespace geored {

// Fixed default seed so reports and zero tests are reproducible run to run.
inline constexpr std::uint64_t kDefaultSeed = 0x67656f726564ULL;

struct SampleOptions {
  int samples = 32;
  double tol = 1e-9;
  std::uint64_t seed = kDefaultSeed;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

inline constexpr std::array<std::uint64_t, 32> kHaltonPrimes = {
    2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31,  37,  41,  43,  47,  53,
    59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131};

}  // namespace detail

// Low-discrepancy sampler over a chart's open domain box: a Halton sequence
// with a per-dimension seed-derived rotation. Deterministic for a given seed.
class BoxSampler {
public:
  BoxSampler(const Chart& chart, std::uint64_t seed = kDefaultSeed) : chart_(&chart) {
    const int n = chart.dim();
    if (n > static_cast<int>(detail::kHaltonPrimes.size()))
      throw InvalidArgument("sampler supports at most 32 dimensions");
    rotations_.resize(n);
    for (int k = 0; k < n; ++k) {
      const std::uint64_t h = detail::splitmix64(seed ^ (0xa5a5a5a5ULL + 2 * k));
      rotations_[k] = static_cast<double>(h >> 11) * 0x1.0p-53;
    }
  }

  // i-th sample point, i >= 0. Stays strictly inside the open box.
  Point point(int i) const {
    Point p;
    for (int k = 0; k < chart_->dim(); ++k) {
      double u = detail::radical_inverse(static_cast<std::uint64_t>(i) + 1,
                                         detail::kHaltonPrimes[k]) +
                 rotations_[k];
      u -= static_cast<std::int64_t>(u);  // frac
      constexpr double margin = 1e-9;
      if (u < margin) u = margin;
      if (u > 1.0 - margin) u = 1.0 - margin;
      const Interval& iv = chart_->domain()[k];
      p[chart_->coords()[k]] = iv.lo + u * (iv.hi - iv.lo);
    }
    return p;
  }

private:
  const Chart* chart_;
  std::vector<double> rotations_;
};

struct ZeroCheck {
  bool zero = false;
  double max_abs = 0.0;    // largest |value| seen across sample points
  double max_scale = 0.0;  // largest subexpression magnitude across points
  int samples_used = 0;
};

// Probabilistic vanishing test: simplify, then require
// |e(p_i)| <= tol * (1 + scale(p_i)) at every quasi-random point p_i, where
// scale is the largest magnitude any subexpression reaches at that point.
// A literal constant after simplification is decided exactly. Throws
// DomainError if the box intersects a singular locus of e.
inline ZeroCheck zero_check(const Expr& e, const Chart& chart, const SampleOptions& opts = {}) {
  if (opts.samples < 1) throw InvalidArgument("zero_check: samples must be >= 1");
  if (opts.tol <= 0.0) throw InvalidArgument("zero_check: tol must be positive");
  const Expr s = simplify(e);
  if (s.is_number()) {
    const double v = s.number_value().value();
    return {s.number_value().is_zero(), v < 0 ? -v : v, 0.0, 0};
  }
  BoxSampler sampler(chart, opts.seed);
  ZeroCheck out;
  out.zero = true;
  out.samples_used = opts.samples;
  for (int i = 0; i < opts.samples; ++i) {
    const EvalResult r = eval_with_scale(s, sampler.point(i));
    const double av = r.value < 0 ? -r.value : r.value;
    if (av > out.max_abs) out.max_abs = av;
    if (r.scale > out.max_scale) out.max_scale = r.scale;
    if (av > opts.tol * (1.0 + r.scale)) out.zero = false;
  }
  return out;
}

inline bool is_zero(const Expr& e, const Chart& chart, const SampleOptions& opts = {}) {
  return zero_check(e, chart, opts).zero;
}

inline bool is_zero(const Expr& e, const Chart& chart, int samples, double tol) {
  SampleOptions opts;
  opts.samples = samples;
  opts.tol = tol;
  return is_zero(e, chart, opts);
}

}  // namespace geored
