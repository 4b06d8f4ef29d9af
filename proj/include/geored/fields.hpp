#pragma once

#include <utility>
#include <vector>

#include "geored/chart.hpp"
#include "geored/expr.hpp"
#include "geored/expr_matrix.hpp"
#include "geored/frames.hpp"
#include "geored/sampling.hpp"

namespace geored {

struct Signature {
  int p = 0;
  int q = 0;
  int dim() const { return p + q; }
};

inline std::vector<double> signature_diagonal(const Signature& s) {
  std::vector<double> eta(s.dim(), 1.0);
  for (int i = 0; i < s.p; ++i) eta[i] = -1.0;
  return eta;
}

// Rank-3 array of symbolic entries, used for connection coefficients
// Gamma^a_{mb} (a: output, m: derivative direction, b: input) and for
// torsion / metric-gradient residuals.
class Tensor3 {
public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), v_(n * n * n, Expr::integer(0)) {}

  int dim() const { return n_; }
  Expr& at(int i, int j, int k) { return v_[(i * n_ + j) * n_ + k]; }
  const Expr& at(int i, int j, int k) const { return v_[(i * n_ + j) * n_ + k]; }
  const std::vector<Expr>& flat() const { return v_; }
  std::vector<Expr>& flat() { return v_; }

private:
  int n_ = 0;
  std::vector<Expr> v_;
};

// Rank-4 array, used for the curvature tensor R^r_{smn}.
class Tensor4 {
public:
  Tensor4() = default;
  explicit Tensor4(int n) : n_(n), v_(n * n * n * n, Expr::integer(0)) {}

  int dim() const { return n_; }
  Expr& at(int i, int j, int k, int l) { return v_[((i * n_ + j) * n_ + k) * n_ + l]; }
  const Expr& at(int i, int j, int k, int l) const {
    return v_[((i * n_ + j) * n_ + k) * n_ + l];
  }
  const std::vector<Expr>& flat() const { return v_; }

private:
  int n_ = 0;
  std::vector<Expr> v_;
};

// Symmetric nondegenerate metric field g_{mu nu} over one chart. The
// constructor enforces structural symmetry, nonvanishing determinant on the
// domain box, and the declared constant signature, and caches the symbolic
// determinant and inverse.
class MetricField {
public:
  MetricField(Chart chart, ExprMatrix g, Signature sig, SampleOptions opts = {})
      : chart_(std::move(chart)), g_(std::move(g)), sig_(sig) {
    const int n = chart_.dim();
    if (sig_.dim() != n) throw InvalidArgument("metric: signature does not sum to chart dim");
    if (!is_square(g_, n)) throw InvalidArgument("metric: component matrix must be n x n");
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (!structurally_equal(g_[i][j], g_[j][i]))
          throw InvalidArgument("metric: components must be structurally symmetric");
    det_ = simplify(expr_det(g_));
    if (zero_check(det_, chart_, opts).zero)
      throw SingularMetric("metric: determinant vanishes on the domain box");
    // Signature must be constant over the box and match the declaration.
    BoxSampler sampler(chart_, opts.seed);
    for (int s = 0; s < opts.samples; ++s) {
      const Eigen::MatrixXd gp = eval_matrix(g_, sampler.point(s));
      if (count_negative_eigenvalues(gp) != sig_.p)
        throw InvalidArgument("metric: sampled signature differs from declaration");
    }
    inverse_ = expr_matrix_inverse(g_, det_);
  }

  const Chart& chart() const { return chart_; }
  int dim() const { return chart_.dim(); }
  const ExprMatrix& components() const { return g_; }
  const ExprMatrix& inverse() const { return inverse_; }
  const Expr& det() const { return det_; }
  Signature signature() const { return sig_; }

private:
  Chart chart_;
  ExprMatrix g_;
  Signature sig_;
  Expr det_;
  ExprMatrix inverse_;
};

// Moving frame over one chart: column I of `e` holds the components e_I^mu
// of frame vector e_I in the coordinate basis. The co-frame theta^I_mu is
// maintained as the exact symbolic inverse.
class FrameField {
public:
  FrameField(Chart chart, ExprMatrix e, SampleOptions opts = {})
      : chart_(std::move(chart)), e_(std::move(e)) {
    const int n = chart_.dim();
    if (!is_square(e_, n)) throw InvalidArgument("frame: component matrix must be n x n");
    det_ = simplify(expr_det(e_));
    if (zero_check(det_, chart_, opts).zero)
      throw SingularFrame("frame: determinant vanishes on the domain box");
    theta_ = expr_matrix_inverse(e_, det_);
    // e * theta = identity, as sampled residuals.
    const ExprMatrix prod = expr_matrix_mul(e_, theta_);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Expr residual = prod[i][j] - (i == j ? Expr::integer(1) : Expr::integer(0));
        if (!zero_check(residual, chart_, opts).zero)
          throw SingularFrame("frame: co-frame consistency check failed");
      }
  }

  const Chart& chart() const { return chart_; }
  int dim() const { return chart_.dim(); }
  const ExprMatrix& vectors() const { return e_; }    // e_[mu][I]
  const ExprMatrix& coframe() const { return theta_; }  // theta_[I][mu]
  const Expr& det() const { return det_; }

  const Expr& e(int mu, int I) const { return e_[mu][I]; }
  const Expr& theta(int I, int mu) const { return theta_[I][mu]; }

private:
  Chart chart_;
  ExprMatrix e_;
  ExprMatrix theta_;
  Expr det_;
};

// Linear connection in the coordinate frame, carried by its coefficients
// Gamma^a_{mb}. Entries are spot-checked for finiteness on the box.
class ConnectionField {
public:
  ConnectionField(Chart chart, Tensor3 gamma, SampleOptions opts = {})
      : chart_(std::move(chart)), gamma_(std::move(gamma)) {
    if (gamma_.dim() != chart_.dim())
      throw InvalidArgument("connection: coefficient tensor must be n^3");
    BoxSampler sampler(chart_, opts.seed);
    const int probes = opts.samples < 8 ? opts.samples : 8;
    for (int s = 0; s < probes; ++s) {
      const Point p = sampler.point(s);
      for (const Expr& entry : gamma_.flat()) eval(entry, p);  // DomainError on failure
    }
  }

  const Chart& chart() const { return chart_; }
  int dim() const { return chart_.dim(); }
  const Tensor3& coefficients() const { return gamma_; }
  const Expr& gamma(int a, int m, int b) const { return gamma_.at(a, m, b); }

private:
  Chart chart_;
  Tensor3 gamma_;
};

// One-form A_mu over a chart (a Weyl form candidate).
class CovectorField {
public:
  CovectorField(Chart chart, std::vector<Expr> components)
      : chart_(std::move(chart)), a_(std::move(components)) {
    if (static_cast<int>(a_.size()) != chart_.dim())
      throw InvalidArgument("covector: need one component per coordinate");
  }

  const Chart& chart() const { return chart_; }
  int dim() const { return chart_.dim(); }
  const std::vector<Expr>& components() const { return a_; }
  const Expr& a(int mu) const { return a_[mu]; }

private:
  Chart chart_;
  std::vector<Expr> a_;
};

// Volume form rho dx^1 ^ ... ^ dx^n with positive density on the box.
class VolumeForm {
public:
  VolumeForm(Chart chart, Expr density, SampleOptions opts = {})
      : chart_(std::move(chart)), density_(std::move(density)) {
    if (zero_check(density_, chart_, opts).zero)
      throw InvalidArgument("volume form: density vanishes on the domain box");
    BoxSampler sampler(chart_, opts.seed);
    for (int s = 0; s < opts.samples; ++s) {
      if (eval(density_, sampler.point(s)) <= 0.0)
        throw InvalidArgument("volume form: density must be positive on the domain box");
    }
  }

  const Chart& chart() const { return chart_; }
  const Expr& density() const { return density_; }

private:
  Chart chart_;
  Expr density_;
};

}  // namespace geored
