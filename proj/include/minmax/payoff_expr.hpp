#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "minmax/affine_map.hpp"
#include "minmax/types.hpp"

namespace minmax {

enum class ExprKind {
  kConst,
  kXVar,
  kYVar,
  kAdd,
  kScale,
  kAffineX,
  kAffineY,
  kQuadX,       // xᵀQx, Q PSD
  kQuadY,       // yᵀQy, Q PSD; enters payoffs through a negative Scale
  kBilinear,    // xᵀQy
  kMaxAffineX,  // max_k a_k·x + b_k
  kMinAffineY,  // min_k a_k·y + b_k
  kAbsAffineX,  // |a·x + b|
  kInnerXY,     // <x, y>
  kDual,        // -child(y, x)
  kNative,      // library-built closure, never parsed
};

struct AffinePiece {
  Vector coeffs;
  double offset = 0.0;

  friend bool operator==(const AffinePiece& a, const AffinePiece& b) {
    return a.coeffs.size() == b.coeffs.size() && a.coeffs == b.coeffs && a.offset == b.offset;
  }
};

/// A payoff computed by code rather than by the grammar. Outer variables are
/// mapped through optional affine pre-maps before reaching the closure.
struct NativePayoff {
  std::function<double(const Vector&, const Vector&)> fn;
  int inner_dim_x = 0;
  int inner_dim_y = 0;
  std::optional<AffineMap> x_map;
  std::optional<AffineMap> y_map;
  std::string label;

  int outer_dim_x() const { return x_map ? x_map->n_in() : inner_dim_x; }
  int outer_dim_y() const { return y_map ? y_map->n_in() : inner_dim_y; }
};

class ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

/// Immutable expression-tree node. Only the fields relevant to `kind` are set.
class ExprNode {
 public:
  ExprKind kind = ExprKind::kConst;
  double value = 0.0;  // Const value, Scale factor
  int index = 0;       // XVar / YVar
  std::vector<ExprPtr> children;
  AffinePiece piece;  // AffineX / AffineY / AbsAffineX
  Matrix q;           // QuadX / QuadY / Bilinear
  std::vector<AffinePiece> pieces;
  std::shared_ptr<const NativePayoff> native;
};

namespace expr {

inline ExprPtr make(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

inline ExprPtr constant(double c) {
  ExprNode n;
  n.kind = ExprKind::kConst;
  n.value = c;
  return make(std::move(n));
}

inline ExprPtr x_var(int i) {
  ExprNode n;
  n.kind = ExprKind::kXVar;
  n.index = i;
  return make(std::move(n));
}

inline ExprPtr y_var(int i) {
  ExprNode n;
  n.kind = ExprKind::kYVar;
  n.index = i;
  return make(std::move(n));
}

inline ExprPtr add(std::vector<ExprPtr> terms) {
  ExprNode n;
  n.kind = ExprKind::kAdd;
  n.children = std::move(terms);
  return make(std::move(n));
}

inline ExprPtr scale(double c, ExprPtr child) {
  ExprNode n;
  n.kind = ExprKind::kScale;
  n.value = c;
  n.children = {std::move(child)};
  return make(std::move(n));
}

inline ExprPtr affine_x(Vector coeffs, double offset) {
  ExprNode n;
  n.kind = ExprKind::kAffineX;
  n.piece = {std::move(coeffs), offset};
  return make(std::move(n));
}

inline ExprPtr affine_y(Vector coeffs, double offset) {
  ExprNode n;
  n.kind = ExprKind::kAffineY;
  n.piece = {std::move(coeffs), offset};
  return make(std::move(n));
}

inline ExprPtr quad_x(Matrix q) {
  ExprNode n;
  n.kind = ExprKind::kQuadX;
  n.q = std::move(q);
  return make(std::move(n));
}

inline ExprPtr quad_y(Matrix q) {
  ExprNode n;
  n.kind = ExprKind::kQuadY;
  n.q = std::move(q);
  return make(std::move(n));
}

inline ExprPtr bilinear(Matrix q) {
  ExprNode n;
  n.kind = ExprKind::kBilinear;
  n.q = std::move(q);
  return make(std::move(n));
}

inline ExprPtr max_affine_x(std::vector<AffinePiece> pieces) {
  ExprNode n;
  n.kind = ExprKind::kMaxAffineX;
  n.pieces = std::move(pieces);
  return make(std::move(n));
}

inline ExprPtr min_affine_y(std::vector<AffinePiece> pieces) {
  ExprNode n;
  n.kind = ExprKind::kMinAffineY;
  n.pieces = std::move(pieces);
  return make(std::move(n));
}

inline ExprPtr abs_affine_x(Vector coeffs, double offset) {
  ExprNode n;
  n.kind = ExprKind::kAbsAffineX;
  n.piece = {std::move(coeffs), offset};
  return make(std::move(n));
}

inline ExprPtr inner_xy() {
  ExprNode n;
  n.kind = ExprKind::kInnerXY;
  return make(std::move(n));
}

inline ExprPtr dual(ExprPtr child) {
  ExprNode n;
  n.kind = ExprKind::kDual;
  n.children = {std::move(child)};
  return make(std::move(n));
}

inline ExprPtr native(std::function<double(const Vector&, const Vector&)> fn, int dim_x, int dim_y,
                      std::string label = "native") {
  auto p = std::make_shared<NativePayoff>();
  p->fn = std::move(fn);
  p->inner_dim_x = dim_x;
  p->inner_dim_y = dim_y;
  p->label = std::move(label);
  ExprNode n;
  n.kind = ExprKind::kNative;
  n.native = std::move(p);
  return make(std::move(n));
}

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) out[i++] = d;
  return out;
}

inline Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = r ? static_cast<Eigen::Index>(rows.begin()->size()) : 0;
  Matrix m(r, c);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    if (static_cast<Eigen::Index>(row.size()) != c) throw DimensionError("mat: ragged rows");
    Eigen::Index j = 0;
    for (double d : row) m(i, j++) = d;
    ++i;
  }
  return m;
}

inline const char* kind_name(ExprKind k) {
  switch (k) {
    case ExprKind::kConst:
      return "const";
    case ExprKind::kXVar:
      return "xvar";
    case ExprKind::kYVar:
      return "yvar";
    case ExprKind::kAdd:
      return "add";
    case ExprKind::kScale:
      return "scale";
    case ExprKind::kAffineX:
      return "affine_x";
    case ExprKind::kAffineY:
      return "affine_y";
    case ExprKind::kQuadX:
      return "quad_x";
    case ExprKind::kQuadY:
      return "quad_y";
    case ExprKind::kBilinear:
      return "bilinear";
    case ExprKind::kMaxAffineX:
      return "max_affine_x";
    case ExprKind::kMinAffineY:
      return "min_affine_y";
    case ExprKind::kAbsAffineX:
      return "abs_affine_x";
    case ExprKind::kInnerXY:
      return "inner_xy";
    case ExprKind::kDual:
      return "dual";
    case ExprKind::kNative:
      return "native";
  }
  return "?";
}

}  // namespace expr

namespace detail {

inline double quad_form(const Matrix& q, const Vector& a, const Vector& b) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    double r = 0.0;
    for (Eigen::Index j = 0; j < q.cols(); ++j) r += q(i, j) * b[j];
    s += a[i] * r;
  }
  return s;
}

inline double eval_node(const ExprNode& n, const Vector& x, const Vector& y) {
  switch (n.kind) {
    case ExprKind::kConst:
      return n.value;
    case ExprKind::kXVar:
      return x[n.index];
    case ExprKind::kYVar:
      return y[n.index];
    case ExprKind::kAdd: {
      double s = 0.0;
      for (const auto& c : n.children) s += eval_node(*c, x, y);
      return s;
    }
    case ExprKind::kScale:
      return n.value * eval_node(*n.children[0], x, y);
    case ExprKind::kAffineX:
      return dot(n.piece.coeffs, x) + n.piece.offset;
    case ExprKind::kAffineY:
      return dot(n.piece.coeffs, y) + n.piece.offset;
    case ExprKind::kQuadX:
      return quad_form(n.q, x, x);
    case ExprKind::kQuadY:
      return quad_form(n.q, y, y);
    case ExprKind::kBilinear:
      return quad_form(n.q, x, y);
    case ExprKind::kMaxAffineX: {
      double best = dot(n.pieces[0].coeffs, x) + n.pieces[0].offset;
      for (std::size_t k = 1; k < n.pieces.size(); ++k) {
        best = std::max(best, dot(n.pieces[k].coeffs, x) + n.pieces[k].offset);
      }
      return best;
    }
    case ExprKind::kMinAffineY: {
      double best = dot(n.pieces[0].coeffs, y) + n.pieces[0].offset;
      for (std::size_t k = 1; k < n.pieces.size(); ++k) {
        best = std::min(best, dot(n.pieces[k].coeffs, y) + n.pieces[k].offset);
      }
      return best;
    }
    case ExprKind::kAbsAffineX:
      return std::abs(dot(n.piece.coeffs, x) + n.piece.offset);
    case ExprKind::kInnerXY:
      return dot(x, y);
    case ExprKind::kDual:
      return -eval_node(*n.children[0], y, x);
    case ExprKind::kNative: {
      const auto& p = *n.native;
      if (!p.x_map && !p.y_map) return p.fn(x, y);
      const Vector xi = p.x_map ? p.x_map->apply(x) : x;
      const Vector yi = p.y_map ? p.y_map->apply(y) : y;
      return p.fn(xi, yi);
    }
  }
  return 0.0;
}

inline void check_psd(const Matrix& q, const char* what) {
  if (q.rows() == 0) return;
  const Matrix sym = 0.5 * (q + q.transpose());
  const double lo = Eigen::SelfAdjointEigenSolver<Matrix>(sym).eigenvalues().minCoeff();
  const double scale = std::max(1.0, sym.cwiseAbs().maxCoeff());
  if (lo < -1e-10 * scale) throw DomainError(std::string(what) + ": matrix is not positive semidefinite");
}

inline void check_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw DomainError(std::string(what) + ": non-finite entry");
}

inline void check_node(const ExprNode& n, int dx, int dy) {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw DimensionError(msg);
  };
  const std::string name = expr::kind_name(n.kind);
  switch (n.kind) {
    case ExprKind::kConst:
      if (!std::isfinite(n.value)) throw DomainError("const: non-finite value");
      return;
    case ExprKind::kXVar:
      need(n.index >= 0 && n.index < dx, "xvar index " + std::to_string(n.index) + " outside dim X = " +
                                             std::to_string(dx));
      return;
    case ExprKind::kYVar:
      need(n.index >= 0 && n.index < dy, "yvar index " + std::to_string(n.index) + " outside dim Y = " +
                                             std::to_string(dy));
      return;
    case ExprKind::kAdd:
      for (const auto& c : n.children) {
        need(c != nullptr, "add: null term");
        check_node(*c, dx, dy);
      }
      return;
    case ExprKind::kScale:
      need(n.children.size() == 1 && n.children[0], "scale: needs one child");
      if (!std::isfinite(n.value)) throw DomainError("scale: non-finite factor");
      check_node(*n.children[0], dx, dy);
      return;
    case ExprKind::kAffineX:
    case ExprKind::kAbsAffineX:
      need(n.piece.coeffs.size() == dx, name + ": coefficient length must equal dim X = " + std::to_string(dx));
      check_finite(n.piece.coeffs, name.c_str());
      return;
    case ExprKind::kAffineY:
      need(n.piece.coeffs.size() == dy, name + ": coefficient length must equal dim Y = " + std::to_string(dy));
      check_finite(n.piece.coeffs, name.c_str());
      return;
    case ExprKind::kQuadX:
      need(n.q.rows() == dx && n.q.cols() == dx, "quad_x: Q must be dim X square");
      check_finite(n.q, "quad_x");
      check_psd(n.q, "quad_x");
      return;
    case ExprKind::kQuadY:
      need(n.q.rows() == dy && n.q.cols() == dy, "quad_y: Q must be dim Y square");
      check_finite(n.q, "quad_y");
      check_psd(n.q, "quad_y");
      return;
    case ExprKind::kBilinear:
      need(n.q.rows() == dx && n.q.cols() == dy, "bilinear: Q must be dim X by dim Y");
      check_finite(n.q, "bilinear");
      return;
    case ExprKind::kMaxAffineX:
    case ExprKind::kMinAffineY: {
      const int d = n.kind == ExprKind::kMaxAffineX ? dx : dy;
      need(!n.pieces.empty(), name + ": needs at least one piece");
      for (const auto& p : n.pieces) {
        need(p.coeffs.size() == d, name + ": piece length must equal " + std::to_string(d));
        check_finite(p.coeffs, name.c_str());
      }
      return;
    }
    case ExprKind::kInnerXY:
      need(dx == dy, "inner_xy: dim X and dim Y differ");
      return;
    case ExprKind::kDual:
      need(n.children.size() == 1 && n.children[0], "dual: needs one child");
      check_node(*n.children[0], dy, dx);
      return;
    case ExprKind::kNative:
      need(n.native != nullptr, "native: missing payload");
      need(n.native->outer_dim_x() == dx && n.native->outer_dim_y() == dy, "native: dimension mismatch");
      return;
  }
}

inline bool nodes_equal(const ExprNode& a, const ExprNode& b) {
  if (&a == &b) return true;
  if (a.kind != b.kind) return false;
  auto mat_eq = [](const Matrix& p, const Matrix& q) {
    return p.rows() == q.rows() && p.cols() == q.cols() && p == q;
  };
  switch (a.kind) {
    case ExprKind::kConst:
    case ExprKind::kScale:
      if (a.value != b.value) return false;
      break;
    case ExprKind::kXVar:
    case ExprKind::kYVar:
      return a.index == b.index;
    case ExprKind::kAffineX:
    case ExprKind::kAffineY:
    case ExprKind::kAbsAffineX:
      return a.piece == b.piece;
    case ExprKind::kQuadX:
    case ExprKind::kQuadY:
    case ExprKind::kBilinear:
      return mat_eq(a.q, b.q);
    case ExprKind::kMaxAffineX:
    case ExprKind::kMinAffineY:
      return a.pieces == b.pieces;
    case ExprKind::kNative:
      return a.native == b.native;
    default:
      break;
  }
  if (a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    if (!nodes_equal(*a.children[i], *b.children[i])) return false;
  }
  return true;
}

}  // namespace detail

/// A payoff L: R^dim_x × R^dim_y → R described by an expression tree.
class PayoffExpr {
 public:
  PayoffExpr() : PayoffExpr(expr::constant(0.0), 0, 0) {}

  PayoffExpr(ExprPtr root, int dim_x, int dim_y) : root_(std::move(root)), dim_x_(dim_x), dim_y_(dim_y) {
    if (!root_) throw DimensionError("PayoffExpr: null root");
    if (dim_x < 0 || dim_y < 0) throw DimensionError("PayoffExpr: negative dimension");
    detail::check_node(*root_, dim_x_, dim_y_);
  }

  const ExprPtr& root() const { return root_; }
  int dim_x() const { return dim_x_; }
  int dim_y() const { return dim_y_; }

  double eval(const Vector& x, const Vector& y) const {
    require_dim(x, dim_x_, "eval_expr x");
    require_dim(y, dim_y_, "eval_expr y");
    return detail::eval_node(*root_, x, y);
  }

  double operator()(const Vector& x, const Vector& y) const { return eval(x, y); }

  /// Skips the dimension checks; for inner loops over already-validated points.
  double eval_unchecked(const Vector& x, const Vector& y) const { return detail::eval_node(*root_, x, y); }

  bool has_native() const { return has_native(*root_); }

  friend bool operator==(const PayoffExpr& a, const PayoffExpr& b) {
    return a.dim_x_ == b.dim_x_ && a.dim_y_ == b.dim_y_ && detail::nodes_equal(*a.root_, *b.root_);
  }

 private:
  static bool has_native(const ExprNode& n) {
    if (n.kind == ExprKind::kNative) return true;
    for (const auto& c : n.children) {
      if (has_native(*c)) return true;
    }
    return false;
  }

  ExprPtr root_;
  int dim_x_;
  int dim_y_;
};

inline double eval_expr(const PayoffExpr& e, const Vector& x, const Vector& y) { return e.eval(x, y); }

namespace detail {

inline bool is_zero(const Vector& v) { return v.size() == 0 || v.isZero(0.0); }

/// Rewrites `n` for new variables x = xmap(x_new), y = ymap(y_new). A null map
/// leaves that slot untouched. The result stays inside the grammar.
inline ExprPtr substitute_node(const ExprPtr& n, const AffineMap* xmap, const AffineMap* ymap) {
  if (!xmap && !ymap) return n;
  switch (n->kind) {
    case ExprKind::kConst:
      return n;
    case ExprKind::kXVar:
      if (!xmap) return n;
      return expr::affine_x(xmap->matrix().row(n->index).transpose(), xmap->offset()[n->index]);
    case ExprKind::kYVar:
      if (!ymap) return n;
      return expr::affine_y(ymap->matrix().row(n->index).transpose(), ymap->offset()[n->index]);
    case ExprKind::kAdd: {
      std::vector<ExprPtr> terms;
      terms.reserve(n->children.size());
      for (const auto& c : n->children) terms.push_back(substitute_node(c, xmap, ymap));
      return expr::add(std::move(terms));
    }
    case ExprKind::kScale:
      return expr::scale(n->value, substitute_node(n->children[0], xmap, ymap));
    case ExprKind::kAffineX:
    case ExprKind::kAffineY:
    case ExprKind::kAbsAffineX: {
      const AffineMap* m = n->kind == ExprKind::kAffineY ? ymap : xmap;
      if (!m) return n;
      Vector a = m->matrix().transpose() * n->piece.coeffs;
      const double b = dot(n->piece.coeffs, m->offset()) + n->piece.offset;
      if (n->kind == ExprKind::kAffineX) return expr::affine_x(std::move(a), b);
      if (n->kind == ExprKind::kAffineY) return expr::affine_y(std::move(a), b);
      return expr::abs_affine_x(std::move(a), b);
    }
    case ExprKind::kQuadX:
    case ExprKind::kQuadY: {
      const bool is_x = n->kind == ExprKind::kQuadX;
      const AffineMap* m = is_x ? xmap : ymap;
      if (!m) return n;
      const Matrix& M = m->matrix();
      const Vector& c = m->offset();
      Matrix q = M.transpose() * n->q * M;
      ExprPtr quad = is_x ? expr::quad_x(std::move(q)) : expr::quad_y(std::move(q));
      if (is_zero(c)) return quad;
      Vector lin = M.transpose() * ((n->q + n->q.transpose()) * c);
      const double k = quad_form(n->q, c, c);
      ExprPtr aff = is_x ? expr::affine_x(std::move(lin), k) : expr::affine_y(std::move(lin), k);
      return expr::add({quad, aff});
    }
    case ExprKind::kBilinear:
    case ExprKind::kInnerXY: {
      const Matrix Q = n->kind == ExprKind::kBilinear
                           ? n->q
                           : Matrix(Matrix::Identity(xmap ? xmap->n_out() : ymap->n_out(),
                                                     xmap ? xmap->n_out() : ymap->n_out()));
      const Matrix M = xmap ? xmap->matrix() : Matrix(Matrix::Identity(Q.rows(), Q.rows()));
      const Vector c = xmap ? xmap->offset() : Vector(Vector::Zero(Q.rows()));
      const Matrix N = ymap ? ymap->matrix() : Matrix(Matrix::Identity(Q.cols(), Q.cols()));
      const Vector d = ymap ? ymap->offset() : Vector(Vector::Zero(Q.cols()));
      std::vector<ExprPtr> terms;
      terms.push_back(expr::bilinear(M.transpose() * Q * N));
      if (!is_zero(d)) terms.push_back(expr::affine_x(M.transpose() * (Q * d), 0.0));
      if (!is_zero(c)) terms.push_back(expr::affine_y(N.transpose() * (Q.transpose() * c), quad_form(Q, c, d)));
      if (terms.size() == 1) return terms.front();
      return expr::add(std::move(terms));
    }
    case ExprKind::kMaxAffineX:
    case ExprKind::kMinAffineY: {
      const AffineMap* m = n->kind == ExprKind::kMaxAffineX ? xmap : ymap;
      if (!m) return n;
      std::vector<AffinePiece> pieces;
      for (const auto& p : n->pieces) {
        pieces.push_back({m->matrix().transpose() * p.coeffs, dot(p.coeffs, m->offset()) + p.offset});
      }
      return n->kind == ExprKind::kMaxAffineX ? expr::max_affine_x(std::move(pieces))
                                              : expr::min_affine_y(std::move(pieces));
    }
    case ExprKind::kDual:
      return expr::dual(substitute_node(n->children[0], ymap, xmap));
    case ExprKind::kNative: {
      auto p = std::make_shared<NativePayoff>(*n->native);
      if (xmap) p->x_map = p->x_map ? p->x_map->compose(*xmap) : *xmap;
      if (ymap) p->y_map = p->y_map ? p->y_map->compose(*ymap) : *ymap;
      ExprNode out;
      out.kind = ExprKind::kNative;
      out.native = std::move(p);
      return expr::make(std::move(out));
    }
  }
  return n;
}

}  // namespace detail

/// Precomposes the payoff with affine maps in either slot (identity maps are skipped).
inline PayoffExpr substitute(const PayoffExpr& e, const std::optional<AffineMap>& xmap,
                             const std::optional<AffineMap>& ymap) {
  const AffineMap* xm = (xmap && !xmap->is_identity()) ? &*xmap : nullptr;
  const AffineMap* ym = (ymap && !ymap->is_identity()) ? &*ymap : nullptr;
  if (xm && xm->n_out() != e.dim_x()) throw DimensionError("substitute: x map output does not match dim X");
  if (ym && ym->n_out() != e.dim_y()) throw DimensionError("substitute: y map output does not match dim Y");
  const int dx = xmap ? xmap->n_in() : e.dim_x();
  const int dy = ymap ? ymap->n_in() : e.dim_y();
  return PayoffExpr(detail::substitute_node(e.root(), xm, ym), dx, dy);
}

/// Role swap with negation: the payoff (y, x) ↦ -L(x, y). Applying it twice
/// returns the original tree.
inline PayoffExpr swap_negate(const PayoffExpr& e) {
  if (e.root()->kind == ExprKind::kDual) return PayoffExpr(e.root()->children[0], e.dim_y(), e.dim_x());
  return PayoffExpr(expr::dual(e.root()), e.dim_y(), e.dim_x());
}

}  // namespace minmax
