#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geored/geometry.hpp"

namespace geored {

// Subgroups of GL(n) whose frame-bundle reductions the toolkit covers,
// extended with the two derived cases: the two-stage unimodular reduction
// (SL, then SO inside SL) and the time gauge (SO(1,n-1) down to SO(n-1)).
enum class ReductionGroup { O, SO, Weyl, SL, Identity, Unimodular, TimeGauge };

inline const char* reduction_group_name(ReductionGroup g) {
  switch (g) {
    case ReductionGroup::O: return "O";
    case ReductionGroup::SO: return "SO";
    case ReductionGroup::Weyl: return "W";
    case ReductionGroup::SL: return "SL";
    case ReductionGroup::Identity: return "Id";
    case ReductionGroup::Unimodular: return "U";
    case ReductionGroup::TimeGauge: return "TG";
  }
  return "?";
}

struct ReductionSpec {
  ReductionGroup group = ReductionGroup::O;
  int n = 4;
  int p = 0;
  int q = 0;

  ReductionSpec(ReductionGroup g, int dim, int sig_p = -1, int sig_q = -1) : group(g), n(dim) {
    if (n < 2) throw InvalidArgument("reduction spec: dimension must be >= 2");
    if (sig_p >= 0 && sig_q >= 0) {
      if (sig_p + sig_q != n)
        throw InvalidArgument("reduction spec: signature does not sum to dimension");
      p = sig_p;
      q = sig_q;
    } else {
      p = 0;
      q = n;
    }
  }

  std::string label() const {
    std::string s = reduction_group_name(group);
    if (group == ReductionGroup::O || group == ReductionGroup::SO ||
        group == ReductionGroup::Weyl || group == ReductionGroup::Unimodular)
      s += "(" + std::to_string(p) + "," + std::to_string(q) + ")";
    return s;
  }
};

// Fiberwise dimension ledger of one reduction. For GL reductions the ambient
// dimension is n^2; the time gauge reduces inside SO(1,n-1), so its ambient
// dimension is n(n-1)/2. dim_h + quotient_dim = ambient_dim always.
struct DofReport {
  std::string label;
  int n = 0;
  int ambient_dim = 0;
  int dim_h = 0;         // d
  int quotient_dim = 0;  // D - d: parameters of the invariant object
  int connection_space = 0;   // n * ambient_dim
  int preserving_space = 0;   // n * dim_h
  std::vector<int> stage_quotients;  // per-stage quotient dims (unimodular)
  std::string notes;
};

inline DofReport dof_table(const ReductionSpec& spec) {
  const int n = spec.n;
  DofReport r;
  r.label = spec.label();
  r.n = n;
  r.ambient_dim = n * n;
  switch (spec.group) {
    case ReductionGroup::O:
    case ReductionGroup::SO:
      r.dim_h = n * (n - 1) / 2;
      r.notes = "invariant: inner product / metric";
      break;
    case ReductionGroup::Weyl:
      r.dim_h = n * (n - 1) / 2 + 1;
      r.notes = "invariant: conformal class";
      break;
    case ReductionGroup::SL:
      r.dim_h = n * n - 1;
      r.notes = "invariant: determinant class / volume form";
      break;
    case ReductionGroup::Identity:
      r.dim_h = 0;
      r.notes = "invariant: one frame (absolute parallelism)";
      break;
    case ReductionGroup::Unimodular:
      r.dim_h = n * (n - 1) / 2;
      r.stage_quotients = {1, n * (n + 1) / 2 - 1};
      r.notes = "two-stage: SL fixes the volume, then SO fixes a metric with matching volume";
      break;
    case ReductionGroup::TimeGauge:
      r.ambient_dim = n * (n - 1) / 2;
      r.dim_h = (n - 1) * (n - 2) / 2;
      r.notes = "inside SO(1,n-1): invariant is the unit timelike vector field";
      break;
  }
  r.quotient_dim = r.ambient_dim - r.dim_h;
  r.connection_space = n * r.ambient_dim;
  r.preserving_space = n * r.dim_h;
  return r;
}

enum class ConnectionClass { All, Preserving, Symmetric, SymmetricPreserving };

// Local degree-of-freedom count of a connection family.
inline int connection_dof(const ReductionSpec& spec, ConnectionClass kind) {
  const int n = spec.n;
  switch (kind) {
    case ConnectionClass::All:
      return n * n * n;
    case ConnectionClass::Symmetric:
      return n * n * (n + 1) / 2;
    case ConnectionClass::Preserving:
      return dof_table(spec).preserving_space;
    case ConnectionClass::SymmetricPreserving:
      switch (spec.group) {
        case ReductionGroup::O:
        case ReductionGroup::SO:
        case ReductionGroup::Unimodular:
          return 0;  // Levi-Civita is unique
        case ReductionGroup::Weyl:
          return n;  // the Weyl form
        case ReductionGroup::SL:
          // trace condition on the symmetric family
          return n * n * (n + 1) / 2 - n;
        case ReductionGroup::Identity:
        case ReductionGroup::TimeGauge:
          throw UnsupportedSpec(
              "symmetric_preserving is not defined for this reduction (the preserving "
              "connection is an isolated point or not a linear-connection family)");
      }
  }
  throw UnsupportedSpec("connection_dof: unknown class");
}

// ---------------------------------------------------------------------------
// Connection classifier

struct FlagResult {
  bool holds = false;
  double max_residual = 0.0;
};

struct ClassificationContext {
  std::optional<MetricField> metric;
  std::optional<FrameField> frame;
  std::optional<VolumeForm> volume;
};

struct ClassificationReport {
  std::optional<FlagResult> symmetric;
  std::optional<FlagResult> flat;
  std::optional<FlagResult> metric_compatible;
  std::optional<FlagResult> weyl;
  std::optional<FlagResult> frame_preserving;
  std::optional<FlagResult> volume_preserving;
  std::optional<CovectorField> weyl_form;
  std::optional<bool> weyl_form_closed;
  std::vector<std::string> preserves;  // reduced structures this connection preserves

  std::map<std::string, FlagResult> flat_map() const {
    std::map<std::string, FlagResult> out;
    if (symmetric) out["symmetric"] = *symmetric;
    if (flat) out["flat"] = *flat;
    if (metric_compatible) out["metric"] = *metric_compatible;
    if (weyl) out["weyl"] = *weyl;
    if (frame_preserving) out["frame_preserving"] = *frame_preserving;
    if (volume_preserving) out["volume_preserving"] = *volume_preserving;
    return out;
  }
};

namespace detail {

inline FlagResult check_all_zero(const std::vector<Expr>& residuals, const Chart& chart,
                                 const SampleOptions& opts) {
  FlagResult r;
  r.holds = true;
  for (const Expr& e : residuals) {
    const ZeroCheck z = zero_check(e, chart, opts);
    if (!z.zero) r.holds = false;
    if (z.max_abs > r.max_residual) r.max_residual = z.max_abs;
  }
  return r;
}

}  // namespace detail

// Evaluate every residual the supplied context makes applicable. Flags are
// independent diagnostics: a context unrelated to the connection simply
// yields false flags, never an error.
inline ClassificationReport classify_connection(const ConnectionField& c,
                                                const ClassificationContext& ctx,
                                                SampleOptions opts = {}) {
  if (!ctx.metric && !ctx.frame && !ctx.volume)
    throw MissingContext("classify_connection: need a metric, frame, or volume form");
  const Chart& chart = c.chart();
  if (ctx.metric) require_same_chart(chart, ctx.metric->chart(), "classify_connection");
  if (ctx.frame) require_same_chart(chart, ctx.frame->chart(), "classify_connection");
  if (ctx.volume) require_same_chart(chart, ctx.volume->chart(), "classify_connection");

  ClassificationReport rep;
  rep.symmetric = detail::check_all_zero(torsion(c).flat(), chart, opts);
  rep.flat = detail::check_all_zero(curvature(c).flat(), chart, opts);

  if (ctx.metric) {
    const MetricField& g = *ctx.metric;
    const Tensor3 grad = metric_gradient(c, g);
    rep.metric_compatible = detail::check_all_zero(grad.flat(), chart, opts);

    // Weyl flag: trace candidate, then proportionality residual.
    const int n = g.dim();
    std::vector<Expr> a(n, Expr::integer(0));
    for (int m = 0; m < n; ++m) {
      Expr acc = Expr::integer(0);
      for (int al = 0; al < n; ++al)
        for (int be = 0; be < n; ++be) acc = acc + grad.at(m, al, be) * g.inverse()[al][be];
      a[m] = simplify(acc / Expr::integer(n));
    }
    std::vector<Expr> prop;
    prop.reserve(n * n * n);
    for (int m = 0; m < n; ++m)
      for (int al = 0; al < n; ++al)
        for (int be = 0; be < n; ++be)
          prop.push_back(grad.at(m, al, be) - a[m] * g.components()[al][be]);
    rep.weyl = detail::check_all_zero(prop, chart, opts);
    if (rep.weyl->holds) {
      CovectorField form(chart, a);
      rep.weyl_form_closed = is_closed(form, opts);
      rep.weyl_form = std::move(form);
    }
  }

  if (ctx.frame)
    rep.frame_preserving = detail::check_all_zero(frame_gradient(c, *ctx.frame).flat(), chart, opts);
  if (ctx.volume)
    rep.volume_preserving = detail::check_all_zero(volume_gradient(c, *ctx.volume), chart, opts);

  if (rep.metric_compatible && rep.metric_compatible->holds)
    rep.preserves.push_back("orthogonal structure (metric)");
  if (rep.weyl && rep.weyl->holds)
    rep.preserves.push_back("conformal structure (Weyl form)");
  if (rep.frame_preserving && rep.frame_preserving->holds)
    rep.preserves.push_back("teleparallel structure (frame)");
  if (rep.volume_preserving && rep.volume_preserving->holds)
    rep.preserves.push_back("unimodular structure (volume form)");
  return rep;
}

// ---------------------------------------------------------------------------
// Time gauge

struct TimeGaugeResult {
  std::vector<Expr> u;                    // checked unit timelike field, = e_0
  std::vector<std::vector<Expr>> triad;   // triad[i][mu], i = 1..n-1
};

// Split an orthonormal Lorentzian frame class along a unit timelike field u:
// e_0 = u, and a spacelike orthonormal triad spanning u's g-orthogonal
// complement, built by Gram-Schmidt from the frame's spatial legs projected
// orthogonally to u. g is the frame's own AP metric with signature (1,n-1).
inline TimeGaugeResult time_gauge_split(const FrameField& f, const std::vector<Expr>& u,
                                        SampleOptions opts = {}) {
  const Chart& chart = f.chart();
  const int n = f.dim();
  if (n < 2) throw UnsupportedSpec("time gauge needs dimension >= 2");
  if (static_cast<int>(u.size()) != n)
    throw InvalidArgument("time gauge: u needs one component per coordinate");

  const MetricField g = ap_metric(f, Signature{1, n - 1}, opts);
  const auto inner = [&](const std::vector<Expr>& x, const std::vector<Expr>& y) {
    Expr acc = Expr::integer(0);
    for (int m = 0; m < n; ++m)
      for (int nu = 0; nu < n; ++nu) acc = acc + x[m] * g.components()[m][nu] * y[nu];
    return simplify(acc);
  };

  const Expr uu = inner(u, u);
  BoxSampler sampler(chart, opts.seed);
  for (int s = 0; s < opts.samples; ++s) {
    if (eval(uu, sampler.point(s)) >= 0.0)
      throw NotTimelike("time gauge: g(u,u) >= 0 somewhere on the domain box");
  }
  if (!zero_check(uu + Expr::integer(1), chart, opts).zero)
    throw NotUnit("time gauge: u is timelike but not unit (g(u,u) != -1)");

  // Project the spatial legs onto u's orthogonal complement:
  // P(x) = x + g(x,u) u, using g(u,u) = -1.
  std::vector<std::vector<Expr>> projected;
  for (int I = 1; I < n; ++I) {
    std::vector<Expr> leg(n);
    for (int m = 0; m < n; ++m) leg[m] = f.e(m, I);
    const Expr overlap = inner(leg, u);
    for (int m = 0; m < n; ++m) leg[m] = simplify(leg[m] + overlap * u[m]);
    projected.push_back(std::move(leg));
  }

  TimeGaugeResult out;
  out.u = u;
  for (auto& v : projected) {
    std::vector<Expr> w = v;
    for (const auto& t : out.triad) {
      const Expr c = inner(v, t);
      for (int m = 0; m < n; ++m) w[m] = simplify(w[m] - c * t[m]);
    }
    const Expr norm2 = inner(w, w);
    if (zero_check(norm2, chart, opts).zero)
      throw SingularProjection("time gauge: projected frame leg is parallel to u");
    for (int s = 0; s < opts.samples; ++s) {
      if (eval(norm2, sampler.point(s)) <= 0.0)
        throw SingularProjection("time gauge: projected frame leg is not spacelike");
    }
    const Expr norm = sqrt(norm2);
    for (int m = 0; m < n; ++m) w[m] = simplify(w[m] / norm);
    out.triad.push_back(std::move(w));
  }

  // Self-check: triad orthonormal and u-orthogonal as sampled residuals.
  for (std::size_t i = 0; i < out.triad.size(); ++i) {
    for (std::size_t j = i; j < out.triad.size(); ++j) {
      const Expr delta = (i == j) ? Expr::integer(1) : Expr::integer(0);
      if (!zero_check(inner(out.triad[i], out.triad[j]) - delta, chart, opts).zero)
        throw Error("time gauge: triad orthonormality check failed");
    }
    if (!zero_check(inner(out.u, out.triad[i]), chart, opts).zero)
      throw Error("time gauge: triad is not orthogonal to u");
  }
  return out;
}

// Parse extended reduction tags: the frame-level tags plus "U(p,q)" /
// "Unimodular" and "TG" / "TimeGauge".
inline ReductionSpec parse_reduction_spec(const std::string& text, int n) {
  std::string name = text;
  int p = -1, q = -1;
  const auto open = text.find('(');
  if (open != std::string::npos) {
    if (text.back() != ')') throw InvalidArgument("reduction tag: missing ')': " + text);
    name = text.substr(0, open);
    const std::string args = text.substr(open + 1, text.size() - open - 2);
    const auto comma = args.find(',');
    try {
      if (comma == std::string::npos) {
        p = 0;
        q = std::stoi(args);
      } else {
        p = std::stoi(args.substr(0, comma));
        q = std::stoi(args.substr(comma + 1));
      }
    } catch (const std::exception&) {
      throw InvalidArgument("reduction tag: bad signature in " + text);
    }
  }
  ReductionGroup group;
  if (name == "O") group = ReductionGroup::O;
  else if (name == "SO") group = ReductionGroup::SO;
  else if (name == "W" || name == "Weyl") group = ReductionGroup::Weyl;
  else if (name == "SL") group = ReductionGroup::SL;
  else if (name == "Id" || name == "Identity" || name == "I") group = ReductionGroup::Identity;
  else if (name == "U" || name == "Unimodular") group = ReductionGroup::Unimodular;
  else if (name == "TG" || name == "TimeGauge") group = ReductionGroup::TimeGauge;
  else throw UnsupportedSpec("unknown reduction tag '" + name + "'");
  return ReductionSpec(group, n, p, q >= 0 ? q : -1);
}

}  // namespace geored
