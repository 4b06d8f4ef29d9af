#pragma once

#include <Eigen/Dense>
#include <vector>

#include "geored/fields.hpp"

namespace geored {

// Field-level chart-local geometry. Index conventions, used throughout:
//   Gamma^a_{mb}: a output, m derivative direction, b input.
//   torsion       T^a_{mn}     = Gamma^a_{mn} - Gamma^a_{nm}
//   curvature     R^r_{smn}    = d_m Gamma^r_{ns} - d_n Gamma^r_{ms}
//                              + Gamma^r_{ml} Gamma^l_{ns} - Gamma^r_{nl} Gamma^l_{ms}
//   metric grad   (Dg)_{mab}   = d_m g_{ab} - Gamma^l_{ma} g_{lb} - Gamma^l_{mb} g_{al}

inline Expr partial(const Expr& e, const Chart& chart, int mu) {
  return differentiate(e, chart.coords()[mu]);
}

// Unique symmetric metric-compatible connection:
// Gamma^a_{mb} = 1/2 g^{al} (d_m g_{lb} + d_b g_{lm} - d_l g_{mb}).
inline ConnectionField levi_civita(const MetricField& g) {
  const Chart& chart = g.chart();
  const int n = g.dim();
  const ExprMatrix& gm = g.components();
  const ExprMatrix& gi = g.inverse();

  // d_m g_{ab}, computed once.
  std::vector<ExprMatrix> dg(n);
  for (int m = 0; m < n; ++m) {
    dg[m] = expr_matrix_zero(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) dg[m][a][b] = partial(gm[a][b], chart, m);
  }

  Tensor3 gamma(n);
  const Expr half = Expr::number(*Rational::make(1, 2));
  for (int a = 0; a < n; ++a)
    for (int m = 0; m < n; ++m)
      for (int b = 0; b < n; ++b) {
        Expr acc = Expr::integer(0);
        for (int l = 0; l < n; ++l)
          acc = acc + gi[a][l] * (dg[m][l][b] + dg[b][l][m] - dg[l][m][b]);
        gamma.at(a, m, b) = simplify(half * acc);
      }
  return ConnectionField(chart, std::move(gamma));
}

// Unique frame-preserving connection of a moving frame:
// Gamma^a_{mb} = e_I^a d_m theta^I_b, so that grad e_I = 0 for every I.
inline ConnectionField weitzenbock(const FrameField& f) {
  const Chart& chart = f.chart();
  const int n = f.dim();
  Tensor3 gamma(n);
  for (int a = 0; a < n; ++a)
    for (int m = 0; m < n; ++m)
      for (int b = 0; b < n; ++b) {
        Expr acc = Expr::integer(0);
        for (int I = 0; I < n; ++I) acc = acc + f.e(a, I) * partial(f.theta(I, b), chart, m);
        gamma.at(a, m, b) = simplify(acc);
      }
  return ConnectionField(chart, std::move(gamma));
}

inline Tensor3 torsion(const ConnectionField& c) {
  const int n = c.dim();
  Tensor3 t(n);
  for (int a = 0; a < n; ++a)
    for (int m = 0; m < n; ++m)
      for (int nu = 0; nu < n; ++nu)
        t.at(a, m, nu) = simplify(c.gamma(a, m, nu) - c.gamma(a, nu, m));
  return t;
}

inline Tensor4 curvature(const ConnectionField& c) {
  const Chart& chart = c.chart();
  const int n = c.dim();
  Tensor4 r(n);
  for (int rho = 0; rho < n; ++rho)
    for (int s = 0; s < n; ++s)
      for (int m = 0; m < n; ++m)
        for (int nu = 0; nu < n; ++nu) {
          Expr acc = partial(c.gamma(rho, nu, s), chart, m) -
                     partial(c.gamma(rho, m, s), chart, nu);
          for (int l = 0; l < n; ++l)
            acc = acc + c.gamma(rho, m, l) * c.gamma(l, nu, s) -
                  c.gamma(rho, nu, l) * c.gamma(l, m, s);
          r.at(rho, s, m, nu) = simplify(acc);
        }
  return r;
}

// Covariant derivative of the metric; identically zero iff the connection is
// metric. Index order: at(m, a, b) = (Dg)_{mab}.
inline Tensor3 metric_gradient(const ConnectionField& c, const MetricField& g) {
  require_same_chart(c.chart(), g.chart(), "metric_gradient");
  const Chart& chart = g.chart();
  const int n = g.dim();
  const ExprMatrix& gm = g.components();
  Tensor3 out(n);
  for (int m = 0; m < n; ++m)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Expr acc = partial(gm[a][b], chart, m);
        for (int l = 0; l < n; ++l)
          acc = acc - c.gamma(l, m, a) * gm[l][b] - c.gamma(l, m, b) * gm[a][l];
        out.at(m, a, b) = simplify(acc);
      }
  return out;
}

// Covariant derivative of each frame vector; identically zero iff the
// connection preserves the frame. Index order: at(a, m, I) = (grad_m e_I)^a.
inline Tensor3 frame_gradient(const ConnectionField& c, const FrameField& f) {
  require_same_chart(c.chart(), f.chart(), "frame_gradient");
  const Chart& chart = f.chart();
  const int n = f.dim();
  Tensor3 out(n);
  for (int a = 0; a < n; ++a)
    for (int m = 0; m < n; ++m)
      for (int I = 0; I < n; ++I) {
        Expr acc = partial(f.e(a, I), chart, m);
        for (int b = 0; b < n; ++b) acc = acc + c.gamma(a, m, b) * f.e(b, I);
        out.at(a, m, I) = simplify(acc);
      }
  return out;
}

// Metric induced by a moving frame, g_{mn} = eta_{IJ} theta^I_m theta^J_n;
// the frame is orthonormal with respect to it by construction.
inline MetricField ap_metric(const FrameField& f, Signature sig, SampleOptions opts = {}) {
  if (sig.dim() != f.dim()) throw InvalidArgument("ap_metric: signature/dim mismatch");
  const int n = f.dim();
  const std::vector<double> eta = signature_diagonal(sig);
  ExprMatrix g = expr_matrix_zero(n, n);
  for (int m = 0; m < n; ++m)
    for (int nu = m; nu < n; ++nu) {
      Expr acc = Expr::integer(0);
      for (int I = 0; I < n; ++I) {
        const Expr term = f.theta(I, m) * f.theta(I, nu);
        acc = eta[I] < 0 ? acc - term : acc + term;
      }
      g[m][nu] = simplify(acc);
      g[nu][m] = g[m][nu];
    }
  return MetricField(f.chart(), std::move(g), sig, opts);
}

// Scalar curvature g^{sn} R^m_{smn}.
inline Expr ricci_scalar(const ConnectionField& c, const MetricField& g) {
  require_same_chart(c.chart(), g.chart(), "ricci_scalar");
  const int n = g.dim();
  const Tensor4 r = curvature(c);
  const ExprMatrix& gi = g.inverse();
  Expr acc = Expr::integer(0);
  for (int s = 0; s < n; ++s)
    for (int nu = 0; nu < n; ++nu) {
      Expr ric = Expr::integer(0);
      for (int m = 0; m < n; ++m) ric = ric + r.at(m, s, m, nu);
      acc = acc + gi[s][nu] * ric;
    }
  return simplify(acc);
}

// Extract the Weyl form A with (Dg)_{mab} = A_m g_{ab}. The candidate is the
// trace A_m = (Dg)_{mab} g^{ab} / n; the full proportionality is then
// re-verified on the box and NotProportional is thrown if it fails.
inline CovectorField weyl_form_extract(const ConnectionField& c, const MetricField& g,
                                       SampleOptions opts = {}) {
  require_same_chart(c.chart(), g.chart(), "weyl_form_extract");
  const Chart& chart = g.chart();
  const int n = g.dim();
  const Tensor3 grad = metric_gradient(c, g);
  const ExprMatrix& gi = g.inverse();
  const ExprMatrix& gm = g.components();

  std::vector<Expr> a(n, Expr::integer(0));
  for (int m = 0; m < n; ++m) {
    Expr acc = Expr::integer(0);
    for (int al = 0; al < n; ++al)
      for (int be = 0; be < n; ++be) acc = acc + grad.at(m, al, be) * gi[al][be];
    a[m] = simplify(acc / Expr::integer(n));
  }

  for (int m = 0; m < n; ++m)
    for (int al = 0; al < n; ++al)
      for (int be = 0; be < n; ++be) {
        const Expr residual = grad.at(m, al, be) - a[m] * gm[al][be];
        if (!zero_check(residual, chart, opts).zero)
          throw NotProportional("metric gradient is not proportional to the metric");
      }
  return CovectorField(chart, std::move(a));
}

// Closedness of a one-form: dA = 0 on the box. Closed forms are locally
// exact on a box, so this reports local integrability.
inline bool is_closed(const CovectorField& a, SampleOptions opts = {}) {
  const Chart& chart = a.chart();
  const int n = a.dim();
  for (int m = 0; m < n; ++m)
    for (int nu = m + 1; nu < n; ++nu) {
      const Expr d = partial(a.a(nu), chart, m) - partial(a.a(m), chart, nu);
      if (!zero_check(d, chart, opts).zero) return false;
    }
  return true;
}

// Conformal representative Omega^2 g. Omega must be nonvanishing on the box.
inline MetricField conformal_rescale(const MetricField& g, const Expr& omega,
                                     SampleOptions opts = {}) {
  const Chart& chart = g.chart();
  if (zero_check(omega, chart, opts).zero)
    throw NonPositiveFactor("conformal_rescale: factor vanishes identically");
  BoxSampler sampler(chart, opts.seed);
  for (int s = 0; s < opts.samples; ++s) {
    const double w = eval(omega, sampler.point(s));
    if (!(w * w > 0.0))
      throw NonPositiveFactor("conformal_rescale: factor vanishes on the domain box");
  }
  const int n = g.dim();
  const Expr factor = pow(omega, 2);
  ExprMatrix scaled = expr_matrix_zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      scaled[i][j] = simplify(factor * g.components()[i][j]);
      scaled[j][i] = scaled[i][j];
    }
  return MetricField(chart, std::move(scaled), g.signature(), opts);
}

// Metric volume form, density sqrt(|det g|). The sign of det g is fixed on
// the box by the constant signature: det g = (-1)^p |det g|.
inline VolumeForm volume_form(const MetricField& g, SampleOptions opts = {}) {
  const double eps = (g.signature().p % 2 == 0) ? 1.0 : -1.0;
  const Expr signed_det =
      eps < 0 ? simplify(-g.det()) : g.det();
  return VolumeForm(g.chart(), simplify(sqrt(signed_det)), opts);
}

// Covariant derivative of a volume form: (D Vol)_m = d_m rho - Gamma^l_{ml} rho.
// Zero iff the connection is volume-preserving (Gamma^l_{ml} = d_m log rho).
inline std::vector<Expr> volume_gradient(const ConnectionField& c, const VolumeForm& vol) {
  require_same_chart(c.chart(), vol.chart(), "volume_gradient");
  const Chart& chart = vol.chart();
  const int n = c.dim();
  std::vector<Expr> out(n, Expr::integer(0));
  for (int m = 0; m < n; ++m) {
    Expr trace = Expr::integer(0);
    for (int l = 0; l < n; ++l) trace = trace + c.gamma(l, m, l);
    out[m] = simplify(partial(vol.density(), chart, m) - trace * vol.density());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pointwise degree-of-freedom audit. The linearized preservation conditions
// on a connection perturbation dGamma at a point are linear in dGamma with
// coefficients given by g at that point; the dimension of their solution
// space is the local freedom of the corresponding connection family.

enum class ConstraintKind {
  MetricPreserving,
  WeylPreserving,
  Symmetric,
  SymmetricMetricPreserving,
};

namespace detail {

inline int rank_with_tol(const Eigen::MatrixXd& m, double tol) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(tol);
  return static_cast<int>(lu.rank());
}

// Rows: d(Dg)_{mab} = 0 for m, a <= b.  Columns: dGamma^l_{m'b'} flattened.
inline Eigen::MatrixXd metric_constraint_matrix(const Eigen::MatrixXd& g) {
  const int n = static_cast<int>(g.rows());
  const int rows = n * n * (n + 1) / 2;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(rows, n * n * n);
  const auto col = [n](int l, int m, int b) { return (l * n + m) * n + b; };
  int row = 0;
  for (int m = 0; m < n; ++m)
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b, ++row)
        for (int l = 0; l < n; ++l) {
          c(row, col(l, m, a)) -= g(l, b);
          c(row, col(l, m, b)) -= g(a, l);
        }
  return c;
}

inline Eigen::MatrixXd symmetry_constraint_matrix(int n) {
  const int rows = n * n * (n - 1) / 2;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(rows, n * n * n);
  const auto col = [n](int l, int m, int b) { return (l * n + m) * n + b; };
  int row = 0;
  for (int a = 0; a < n; ++a)
    for (int m = 0; m < n; ++m)
      for (int b = m + 1; b < n; ++b, ++row) {
        c(row, col(a, m, b)) += 1.0;
        c(row, col(a, b, m)) -= 1.0;
      }
  return c;
}

}  // namespace detail

// Dimension of the solution space of the pointwise constraint system.
// g_at_point must be symmetric and invertible.
inline int connection_nullity(const Eigen::MatrixXd& g_at_point, ConstraintKind kind,
                              double rank_tol = 1e-8) {
  const int n = static_cast<int>(g_at_point.rows());
  if (g_at_point.cols() != n || n == 0)
    throw InvalidArgument("connection_nullity: g must be square");
  const int vars = n * n * n;
  switch (kind) {
    case ConstraintKind::MetricPreserving: {
      const Eigen::MatrixXd c = detail::metric_constraint_matrix(g_at_point);
      return vars - detail::rank_with_tol(c, rank_tol);
    }
    case ConstraintKind::WeylPreserving: {
      // Unknowns (dGamma, dA); residual d(Dg)_{mab} - dA_m g_{ab} = 0. Each
      // admissible dGamma pins a unique dA, so the combined nullity equals
      // the Weyl-preserving freedom in dGamma.
      Eigen::MatrixXd base = detail::metric_constraint_matrix(g_at_point);
      Eigen::MatrixXd c(base.rows(), vars + n);
      c.leftCols(vars) = base;
      c.rightCols(n).setZero();
      int row = 0;
      for (int m = 0; m < n; ++m)
        for (int a = 0; a < n; ++a)
          for (int b = a; b < n; ++b, ++row) c(row, vars + m) = -g_at_point(a, b);
      return vars + n - detail::rank_with_tol(c, rank_tol);
    }
    case ConstraintKind::Symmetric: {
      const Eigen::MatrixXd c = detail::symmetry_constraint_matrix(n);
      return vars - detail::rank_with_tol(c, rank_tol);
    }
    case ConstraintKind::SymmetricMetricPreserving: {
      const Eigen::MatrixXd a = detail::metric_constraint_matrix(g_at_point);
      const Eigen::MatrixXd b = detail::symmetry_constraint_matrix(n);
      Eigen::MatrixXd c(a.rows() + b.rows(), vars);
      c.topRows(a.rows()) = a;
      c.bottomRows(b.rows()) = b;
      return vars - detail::rank_with_tol(c, rank_tol);
    }
  }
  throw InvalidArgument("connection_nullity: unknown constraint kind");
}

}  // namespace geored
