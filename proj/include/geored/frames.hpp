#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "geored/errors.hpp"

namespace geored {

using Matrix = Eigen::MatrixXd;

inline constexpr double kSingularTol = 1e-12;

// Signature matrix eta = diag(-1 x p, +1 x q), mostly-plus convention:
// the p minus signs come first.
inline Matrix signature_matrix(int p, int q) {
  if (p < 0 || q < 0 || p + q == 0) throw InvalidArgument("signature: need p, q >= 0, p+q > 0");
  Matrix eta = Matrix::Zero(p + q, p + q);
  for (int i = 0; i < p; ++i) eta(i, i) = -1.0;
  for (int i = p; i < p + q; ++i) eta(i, i) = 1.0;
  return eta;
}

// A single vector basis of R^n: columns are the basis vectors expressed in
// the reference basis.
class Frame {
public:
  explicit Frame(Matrix basis) : basis_(std::move(basis)) {
    if (basis_.rows() != basis_.cols() || basis_.rows() == 0)
      throw InvalidArgument("frame matrix must be square and non-empty");
    det_ = basis_.determinant();
    if (std::abs(det_) <= kSingularTol)
      throw SingularFrame("frame matrix is singular (|det| <= 1e-12)");
  }

  int dim() const { return static_cast<int>(basis_.rows()); }
  const Matrix& matrix() const { return basis_; }
  double det() const { return det_; }

private:
  Matrix basis_;
  double det_ = 0.0;
};

enum class GroupTag { O, SO, Weyl, SL, Identity };

inline const char* group_name(GroupTag t) {
  switch (t) {
    case GroupTag::O: return "O";
    case GroupTag::SO: return "SO";
    case GroupTag::Weyl: return "W";
    case GroupTag::SL: return "SL";
    case GroupTag::Identity: return "Id";
  }
  return "?";
}

// Subgroup of GL(n) that drives orbit tests and invariant construction.
// O/SO/Weyl carry a signature (p,q); SL and Identity need none.
struct SubgroupSpec {
  GroupTag tag = GroupTag::O;
  int p = 0;
  int q = 0;
  double tol = 1e-9;

  bool has_signature() const {
    return tag == GroupTag::O || tag == GroupTag::SO || tag == GroupTag::Weyl;
  }
  int dim() const { return p + q; }

  static SubgroupSpec orthogonal(int p, int q, double tol = 1e-9) {
    return {GroupTag::O, p, q, tol};
  }
  static SubgroupSpec special_orthogonal(int p, int q, double tol = 1e-9) {
    return {GroupTag::SO, p, q, tol};
  }
  static SubgroupSpec weyl(int p, int q, double tol = 1e-9) {
    return {GroupTag::Weyl, p, q, tol};
  }
  static SubgroupSpec special_linear(double tol = 1e-9) { return {GroupTag::SL, 0, 0, tol}; }
  static SubgroupSpec identity(double tol = 1e-9) { return {GroupTag::Identity, 0, 0, tol}; }

  std::string label() const {
    std::string s = group_name(tag);
    if (has_signature()) s += "(" + std::to_string(p) + "," + std::to_string(q) + ")";
    return s;
  }
};

// Change-of-basis element h with b2 = h * b1.
inline Matrix change_of_basis(const Frame& b1, const Frame& b2) {
  if (b1.dim() != b2.dim()) throw InvalidArgument("change_of_basis: dimension mismatch");
  return b2.matrix() * b1.matrix().inverse();
}

namespace detail {
inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }
}  // namespace detail

// Membership of h in the subgroup, up to the spec tolerance.
inline bool in_subgroup(const Matrix& h, const SubgroupSpec& H) {
  if (h.rows() != h.cols() || h.rows() == 0)
    throw InvalidArgument("in_subgroup: matrix must be square");
  const int n = static_cast<int>(h.rows());
  const double det = h.determinant();
  if (std::abs(det) <= kSingularTol) throw SingularMatrix("in_subgroup: singular matrix");
  if (H.has_signature() && H.dim() != n)
    throw InvalidArgument("in_subgroup: signature does not match matrix dimension");

  switch (H.tag) {
    case GroupTag::O:
    case GroupTag::SO: {
      const Matrix eta = signature_matrix(H.p, H.q);
      const double res = detail::max_abs(h.transpose() * eta * h - eta);
      if (res > H.tol) return false;
      if (H.tag == GroupTag::SO && std::abs(det - 1.0) > H.tol) return false;
      return true;
    }
    case GroupTag::Weyl: {
      // h = c * O with c > 0  <=>  h^T eta h = c^2 eta.
      const Matrix eta = signature_matrix(H.p, H.q);
      const Matrix m = h.transpose() * eta * h;
      const double c2 = (eta * m).trace() / n;  // eta^{-1} = eta
      if (c2 <= 0.0) return false;
      return detail::max_abs(m - c2 * eta) <= H.tol * (1.0 + c2);
    }
    case GroupTag::SL:
      return std::abs(det - 1.0) <= H.tol;
    case GroupTag::Identity:
      return detail::max_abs(h - Matrix::Identity(n, n)) <= H.tol;
  }
  return false;
}

inline bool same_orbit(const Frame& b1, const Frame& b2, const SubgroupSpec& H) {
  return in_subgroup(change_of_basis(b1, b2), H);
}

// The inner product P whose Gram matrix on the frame's columns is eta:
// P = B^{-T} eta B^{-1}.
inline Matrix induced_inner_product(const Frame& b, int p, int q) {
  if (p + q != b.dim()) throw InvalidArgument("induced_inner_product: signature/dim mismatch");
  const Matrix binv = b.matrix().inverse();
  const Matrix eta = signature_matrix(p, q);
  Matrix P = binv.transpose() * eta * binv;
  P = 0.5 * (P + P.transpose());  // kill round-off asymmetry
  return P;
}

// Count of negative eigenvalues of a symmetric matrix (its "p" in (p,q)).
inline int count_negative_eigenvalues(const Matrix& sym, double tol = 1e-12) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  int neg = 0;
  for (int i = 0; i < sym.rows(); ++i)
    if (es.eigenvalues()(i) < -tol) ++neg;
  return neg;
}

// The invariant object a reduction to H attaches to a frame's H-orbit.
struct OrbitInvariant {
  enum class Kind { InnerProduct, ConformalClass, DeterminantClass, TheFrameItself };

  Kind kind = Kind::InnerProduct;
  Matrix matrix;        // InnerProduct / ConformalClass representative / frame
  double scalar = 0.0;  // DeterminantClass

  static const char* kind_name(Kind k) {
    switch (k) {
      case Kind::InnerProduct: return "inner_product";
      case Kind::ConformalClass: return "conformal_class";
      case Kind::DeterminantClass: return "determinant_class";
      case Kind::TheFrameItself: return "frame";
    }
    return "?";
  }
};

inline OrbitInvariant orbit_invariant(const Frame& b, const SubgroupSpec& H) {
  OrbitInvariant inv;
  switch (H.tag) {
    case GroupTag::O:
    case GroupTag::SO:
      inv.kind = OrbitInvariant::Kind::InnerProduct;
      inv.matrix = induced_inner_product(b, H.p, H.q);
      break;
    case GroupTag::Weyl: {
      // Canonical conformal-class representative: rescale to |det| = 1,
      // keeping the sign pattern.
      inv.kind = OrbitInvariant::Kind::ConformalClass;
      Matrix P = induced_inner_product(b, H.p, H.q);
      const double d = std::abs(P.determinant());
      if (d <= kSingularTol) throw SingularFrame("conformal class: degenerate inner product");
      inv.matrix = P / std::pow(d, 1.0 / b.dim());
      break;
    }
    case GroupTag::SL:
      inv.kind = OrbitInvariant::Kind::DeterminantClass;
      inv.scalar = b.det();
      break;
    case GroupTag::Identity:
      inv.kind = OrbitInvariant::Kind::TheFrameItself;
      inv.matrix = b.matrix();
      break;
  }
  return inv;
}

inline bool invariants_equal(const OrbitInvariant& a, const OrbitInvariant& b,
                             double tol = 1e-9) {
  if (a.kind != b.kind) return false;
  if (a.kind == OrbitInvariant::Kind::DeterminantClass)
    return std::abs(a.scalar - b.scalar) <= tol * (1.0 + std::abs(a.scalar));
  if (a.matrix.rows() != b.matrix.rows()) return false;
  const double scale = detail::max_abs(a.matrix);
  return detail::max_abs(a.matrix - b.matrix) <= tol * (1.0 + scale);
}

// Free-parameter count of each invariant: the dim(G/H) column of the
// reduction table.
inline int invariant_parameter_count(GroupTag tag, int n) {
  switch (tag) {
    case GroupTag::O:
    case GroupTag::SO: return n * (n + 1) / 2;
    case GroupTag::Weyl: return n * (n + 1) / 2 - 1;
    case GroupTag::SL: return 1;
    case GroupTag::Identity: return n * n;
  }
  return 0;
}

// Consistency of the double (SL then SO) reduction: a frame of determinant A
// induces an inner product with det P = eps / A^2 where eps = (-1)^p (the
// Gram construction forces the inverse square, not A^2).
inline bool unimodular_pair_consistent(double det_frame, const Matrix& inner_product, int p,
                                       double tol = 1e-9) {
  const double eps = (p % 2 == 0) ? 1.0 : -1.0;
  const double expected = eps / (det_frame * det_frame);
  const double got = inner_product.determinant();
  return std::abs(got - expected) <= tol * (1.0 + std::abs(expected));
}

// Parse subgroup tags of the form "O(1,3)", "SO(3)", "W(1,3)", "SL", "Id".
// A single-argument signature "(k)" means (0,k); a missing signature
// defaults to Euclidean (0,n).
inline SubgroupSpec parse_subgroup_spec(const std::string& text, int n, double tol = 1e-9) {
  std::string name = text;
  int p = -1, q = -1;
  const auto open = text.find('(');
  if (open != std::string::npos) {
    if (text.back() != ')') throw InvalidArgument("subgroup tag: missing ')': " + text);
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
      throw InvalidArgument("subgroup tag: bad signature in " + text);
    }
  }
  GroupTag tag;
  if (name == "O") tag = GroupTag::O;
  else if (name == "SO") tag = GroupTag::SO;
  else if (name == "W" || name == "Weyl") tag = GroupTag::Weyl;
  else if (name == "SL") tag = GroupTag::SL;
  else if (name == "Id" || name == "Identity" || name == "I") tag = GroupTag::Identity;
  else throw InvalidArgument("unknown subgroup tag '" + name + "'");

  SubgroupSpec spec{tag, 0, 0, tol};
  if (spec.has_signature()) {
    spec.p = (p < 0) ? 0 : p;
    spec.q = (q < 0) ? n : q;
    if (spec.p + spec.q != n)
      throw InvalidArgument("subgroup tag: signature does not sum to dimension " +
                            std::to_string(n));
  }
  return spec;
}

}  // namespace geored
