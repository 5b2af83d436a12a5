#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "minmax/affine_map.hpp"
#include "minmax/convex_set.hpp"
#include "minmax/payoff_expr.hpp"

namespace minmax {

struct ValidationOptions {
  int samples = 200;
  std::uint64_t seed = 0;
  double rel_tol = 1e-9;
};

namespace detail {

inline std::string fmt_point(const Vector& p) {
  std::ostringstream os;
  os.precision(6);
  os << "(";
  for (Eigen::Index i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ")";
  return os.str();
}

/// Sampled Jensen test of `fn` on `set`. `sign` +1 checks convexity, -1 concavity.
/// Returns an empty string on success, otherwise a description of the witness.
template <class Fn, class Rng>
std::string jensen_witness(const ConvexSet& set, Fn&& fn, int sign, int samples, double rel_tol, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    const Point a = set.sample(rng);
    const Point b = set.sample(rng);
    const double theta = (s % 2 == 0) ? 0.5 : unit(rng);
    const Point m = theta * a + (1.0 - theta) * b;
    const double fa = fn(a), fb = fn(b), fm = fn(m);
    const double chord = theta * fa + (1.0 - theta) * fb;
    const double scale = std::max({1.0, std::abs(fa), std::abs(fb)});
    if (sign * (fm - chord) > rel_tol * scale) {
      std::ostringstream os;
      os << "p1 = " << fmt_point(a) << ", p2 = " << fmt_point(b) << ", theta = " << theta << ": value "
         << fm << " vs chord " << chord;
      return os.str();
    }
  }
  return {};
}

}  // namespace detail

/// A minmax problem (X, Y, L): the minimizer picks x in X, the maximizer y in Y.
class MinmaxProblem {
 public:
  enum class Validation { kChecked, kBypassed };

  /// Validates L by sampled Jensen tests; throws NotConvexConcaveError with a witness.
  MinmaxProblem(ConvexSet x_set, ConvexSet y_set, PayoffExpr payoff, std::string label = {},
                ValidationOptions opts = {})
      : MinmaxProblem(std::move(x_set), std::move(y_set), std::move(payoff), std::move(label),
                      Validation::kChecked, opts, true) {}

  /// Skips the convex/concave check. Such problems can be brute-forced but not solved.
  static MinmaxProblem unchecked(ConvexSet x_set, ConvexSet y_set, PayoffExpr payoff, std::string label = {}) {
    return MinmaxProblem(std::move(x_set), std::move(y_set), std::move(payoff), std::move(label),
                         Validation::kBypassed, {}, false);
  }

  /// For constructions whose validity follows from valid inputs (dual, tensor, substitution).
  static MinmaxProblem derived(ConvexSet x_set, ConvexSet y_set, PayoffExpr payoff, std::string label,
                               Validation v) {
    return MinmaxProblem(std::move(x_set), std::move(y_set), std::move(payoff), std::move(label), v, {}, false);
  }

  /// (point, point, 0), the unit for tensor.
  static MinmaxProblem unit() {
    return derived(ConvexSet::point(Vector()), ConvexSet::point(Vector()), PayoffExpr(expr::constant(0.0), 0, 0),
                   "unit", Validation::kChecked);
  }

  const ConvexSet& x_set() const { return x_; }
  const ConvexSet& y_set() const { return y_; }
  const PayoffExpr& payoff() const { return payoff_; }
  const std::string& label() const { return label_; }
  Validation validation() const { return validation_; }
  bool bypassed() const { return validation_ == Validation::kBypassed; }
  int dim_x() const { return x_.dim(); }
  int dim_y() const { return y_.dim(); }

  /// X-coordinates forced to zero by an unbounded dual variable: the primal
  /// reduction is +inf wherever one of them is nonzero. Dually for zero_y.
  const std::vector<int>& zero_x() const { return zero_x_; }
  const std::vector<int>& zero_y() const { return zero_y_; }

  MinmaxProblem with_zero_constraints(std::vector<int> zx, std::vector<int> zy) const {
    MinmaxProblem p = *this;
    for (int i : zx) {
      if (i < 0 || i >= dim_x()) throw DimensionError("zero constraint index outside X");
    }
    for (int i : zy) {
      if (i < 0 || i >= dim_y()) throw DimensionError("zero constraint index outside Y");
    }
    p.zero_x_ = std::move(zx);
    p.zero_y_ = std::move(zy);
    return p;
  }

  double operator()(const Vector& x, const Vector& y) const { return payoff_.eval(x, y); }

  /// Structural equality; labels are ignored.
  friend bool operator==(const MinmaxProblem& a, const MinmaxProblem& b) {
    return a.x_ == b.x_ && a.y_ == b.y_ && a.payoff_ == b.payoff_ && a.zero_x_ == b.zero_x_ &&
           a.zero_y_ == b.zero_y_;
  }

 private:
  MinmaxProblem(ConvexSet x_set, ConvexSet y_set, PayoffExpr payoff, std::string label, Validation v,
                ValidationOptions opts, bool check)
      : x_(std::move(x_set)), y_(std::move(y_set)), payoff_(std::move(payoff)), label_(std::move(label)),
        validation_(v) {
    if (payoff_.dim_x() != x_.dim() || payoff_.dim_y() != y_.dim()) {
      throw DimensionError("MinmaxProblem: payoff is declared on R^" + std::to_string(payoff_.dim_x()) + " x R^" +
                           std::to_string(payoff_.dim_y()) + " but X, Y live in R^" + std::to_string(x_.dim()) +
                           " x R^" + std::to_string(y_.dim()));
    }
    if (check) validate(opts);
  }

  void validate(const ValidationOptions& opts) const {
    std::mt19937_64 rng(opts.seed);
    for (int s = 0; s < 4; ++s) {
      // A few different slices, each with its own batch of pairs.
      const Point y = s == 0 ? y_.centroid() : y_.sample(rng);
      auto in_x = [&](const Point& x) { return payoff_.eval_unchecked(x, y); };
      std::string w = detail::jensen_witness(x_, in_x, +1, opts.samples / 4, opts.rel_tol, rng);
      if (!w.empty()) {
        throw NotConvexConcaveError("payoff is not convex in x at y = " + detail::fmt_point(y) + ": " + w);
      }
      const Point x = s == 0 ? x_.centroid() : x_.sample(rng);
      auto in_y = [&](const Point& yy) { return payoff_.eval_unchecked(x, yy); };
      w = detail::jensen_witness(y_, in_y, -1, opts.samples / 4, opts.rel_tol, rng);
      if (!w.empty()) {
        throw NotConvexConcaveError("payoff is not concave in y at x = " + detail::fmt_point(x) + ": " + w);
      }
    }
  }

  ConvexSet x_;
  ConvexSet y_;
  PayoffExpr payoff_;
  std::string label_;
  Validation validation_;
  std::vector<int> zero_x_;
  std::vector<int> zero_y_;
};

inline MinmaxProblem::Validation combine(MinmaxProblem::Validation a, MinmaxProblem::Validation b) {
  return (a == MinmaxProblem::Validation::kBypassed || b == MinmaxProblem::Validation::kBypassed)
             ? MinmaxProblem::Validation::kBypassed
             : MinmaxProblem::Validation::kChecked;
}

/// (Y, X, L*) with L*(y, x) = -L(x, y). Applying it twice gives back the same tree.
inline MinmaxProblem dual_problem(const MinmaxProblem& p) {
  std::string label = p.label();
  if (label.rfind("dual(", 0) == 0 && label.back() == ')') {
    label = label.substr(5, label.size() - 6);
  } else {
    label = "dual(" + label + ")";
  }
  return MinmaxProblem::derived(p.y_set(), p.x_set(), swap_negate(p.payoff()), std::move(label), p.validation())
      .with_zero_constraints(p.zero_y(), p.zero_x());
}

/// (X × X', Y × Y', L(x, y) + L'(x', y')).
inline MinmaxProblem tensor(const MinmaxProblem& p, const MinmaxProblem& q) {
  const int dx = p.dim_x() + q.dim_x();
  const int dy = p.dim_y() + q.dim_y();
  const PayoffExpr lp = substitute(p.payoff(), AffineMap::select(dx, 0, p.dim_x()), AffineMap::select(dy, 0, p.dim_y()));
  const PayoffExpr lq = substitute(q.payoff(), AffineMap::select(dx, p.dim_x(), q.dim_x()),
                                   AffineMap::select(dy, p.dim_y(), q.dim_y()));
  PayoffExpr sum(expr::add({lp.root(), lq.root()}), dx, dy);
  std::vector<int> zx = p.zero_x(), zy = p.zero_y();
  for (int i : q.zero_x()) zx.push_back(i + p.dim_x());
  for (int i : q.zero_y()) zy.push_back(i + p.dim_y());
  return MinmaxProblem::derived(ConvexSet::product({p.x_set(), q.x_set()}), ConvexSet::product({p.y_set(), q.y_set()}),
                                std::move(sum), p.label() + " (x) " + q.label(),
                                combine(p.validation(), q.validation()))
      .with_zero_constraints(std::move(zx), std::move(zy));
}

enum class MorphismClass { kForwards, kBackwards, kGeneral };

/// phi_plus: X → X', phi_minus: Y' → Y with L(x, phi_minus(y')) >= L'(phi_plus(x), y').
struct MinmaxMorphism {
  MinmaxProblem source;
  MinmaxProblem target;
  AffineMap phi_plus;
  AffineMap phi_minus;
  MorphismClass cls = MorphismClass::kGeneral;
};

/// Builds a morphism and tags it: forwards when phi_minus is invertible,
/// backwards when phi_plus is, general otherwise. A requested tag that the maps
/// do not support raises InvariantError.
inline MinmaxMorphism make_morphism(MinmaxProblem source, MinmaxProblem target, AffineMap phi_plus,
                                    AffineMap phi_minus, std::optional<MorphismClass> requested = std::nullopt) {
  if (phi_plus.n_in() != source.dim_x() || phi_plus.n_out() != target.dim_x()) {
    throw DimensionError("morphism: phi_plus must map X into X'");
  }
  if (phi_minus.n_in() != target.dim_y() || phi_minus.n_out() != source.dim_y()) {
    throw DimensionError("morphism: phi_minus must map Y' into Y");
  }
  MorphismClass cls = MorphismClass::kGeneral;
  if (phi_minus.is_invertible()) {
    cls = MorphismClass::kForwards;
  } else if (phi_plus.is_invertible()) {
    cls = MorphismClass::kBackwards;
  }
  if (requested) {
    if (*requested == MorphismClass::kForwards && !phi_minus.is_invertible()) {
      throw InvariantError("morphism: forwards requires an invertible phi_minus");
    }
    if (*requested == MorphismClass::kBackwards && !phi_plus.is_invertible()) {
      throw InvariantError("morphism: backwards requires an invertible phi_plus");
    }
    cls = *requested;
  }
  return {std::move(source), std::move(target), std::move(phi_plus), std::move(phi_minus), cls};
}

struct MorphismReport {
  bool holds = true;
  double worst_violation = 0.0;
  std::pair<Point, Point> witness;
  std::size_t pairs_checked = 0;
};

/// Largest value of L'(phi_plus(x), y') - L(x, phi_minus(y')) over a mesh of
/// X × Y' plus `samples` seeded random pairs.
inline MorphismReport check_morphism(const MinmaxMorphism& m, int samples, std::uint64_t seed) {
  const auto& src = m.source;
  const auto& tgt = m.target;
  if (m.phi_plus.n_in() != src.dim_x() || m.phi_plus.n_out() != tgt.dim_x() || m.phi_minus.n_in() != tgt.dim_y() ||
      m.phi_minus.n_out() != src.dim_y()) {
    throw DimensionError("check_morphism: maps do not match the problems");
  }
  MorphismReport rep;
  rep.witness = {src.x_set().centroid(), tgt.y_set().centroid()};
  double worst = 0.0;
  auto visit = [&](const Point& x, const Point& yp) {
    const double v = tgt(m.phi_plus(x), yp) - src(x, m.phi_minus(yp));
    ++rep.pairs_checked;
    if (v > worst) {
      worst = v;
      rep.witness = {x, yp};
    }
  };
  auto coarse = [](const ConvexSet& s) {
    for (int r = 5; r >= 1; --r) {
      if (s.grid_size(r) <= 400.0) return s.grid(r);
    }
    return s.grid(1);
  };
  const auto xs = coarse(src.x_set());
  const auto ys = coarse(tgt.y_set());
  for (const auto& x : xs) {
    for (const auto& y : ys) visit(x, y);
  }
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    const Point x = src.x_set().sample(rng);
    const Point y = tgt.y_set().sample(rng);
    visit(x, y);
  }
  rep.worst_violation = worst;
  rep.holds = worst <= 1e-9;
  return rep;
}

/// True when max over the y'-mesh of L(x, y') <= min over the x'-mesh of L(x', y) + tol.
/// `resolution` sets the mesh density of both sides; (x, y) themselves are always included.
inline bool equilibrium_certificate(const MinmaxProblem& p, const Point& x, const Point& y, int resolution,
                                    double tol) {
  require_dim(x, p.dim_x(), "equilibrium_certificate x");
  require_dim(y, p.dim_y(), "equilibrium_certificate y");
  if (!p.x_set().contains(x)) throw MembershipError("equilibrium_certificate: x is not in X");
  if (!p.y_set().contains(y)) throw MembershipError("equilibrium_certificate: y is not in Y");
  auto mesh = [resolution](const ConvexSet& s) {
    int r = std::max(1, resolution);
    while (r > 1 && s.grid_size(r) > static_cast<double>(kDefaultPointBudget)) r = r / 2 + 1;
    return s.grid(r);
  };
  double best_y = p(x, y);
  for (const auto& yp : mesh(p.y_set())) best_y = std::max(best_y, p(x, yp));
  double best_x = p(x, y);
  for (const auto& xp : mesh(p.x_set())) best_x = std::min(best_x, p(xp, y));
  return best_y <= best_x + tol;
}

struct AffineDecomposition {
  std::vector<Point> xs;
  std::vector<double> f;
  std::vector<Vector> g;
  double reconstruction_error = 0.0;
};

/// Writes L(x, a) = f(x) + <g(x), a> on an x-mesh for payoffs affine in y.
/// With 0 and the basis vectors inside Y this is f(x) = L(x, 0),
/// g_i(x) = L(x, e_i) - L(x, 0). Otherwise the differences are taken at the
/// centroid of Y with the largest step in {1, 1/2, 1/4, ...} that stays in Y.
inline AffineDecomposition decompose_affine(const MinmaxProblem& p, int resolution = 21, int samples = 200,
                                            std::uint64_t seed = 0) {
  const auto& xset = p.x_set();
  const auto& yset = p.y_set();
  const int m = p.dim_y();
  std::mt19937_64 rng(seed);

  // Affinity in y: midpoint second differences must vanish.
  for (int s = 0; s < samples; ++s) {
    const Point x = xset.sample(rng);
    const Point a = yset.sample(rng);
    const Point b = yset.sample(rng);
    const double la = p(x, a), lb = p(x, b), lm = p(x, 0.5 * (a + b));
    const double scale = std::max({1.0, std::abs(la), std::abs(lb)});
    if (std::abs(lm - 0.5 * (la + lb)) > 1e-9 * scale) {
      throw NotAffineError("decompose_affine: payoff is not affine in y; second difference " +
                           std::to_string(lm - 0.5 * (la + lb)) + " at x = " + detail::fmt_point(x) +
                           ", y1 = " + detail::fmt_point(a) + ", y2 = " + detail::fmt_point(b));
    }
  }

  Point anchor = Vector::Zero(m);
  std::vector<double> steps(m, 1.0);
  bool direct = yset.contains(anchor);
  for (int i = 0; i < m && direct; ++i) {
    Point e = Vector::Zero(m);
    e[i] = 1.0;
    direct = yset.contains(e);
  }
  if (!direct) {
    anchor = yset.centroid();
    for (int i = 0; i < m; ++i) {
      double h = 1.0;
      Point q = anchor;
      q[i] += h;
      while (!yset.contains(q) && h > 1e-6) {
        h *= 0.5;
        q = anchor;
        q[i] += h;
      }
      if (!yset.contains(q)) {
        throw DomainError("decompose_affine: Y has no room along axis " + std::to_string(i) +
                          " after normalization");
      }
      steps[i] = h;
    }
  }

  AffineDecomposition out;
  out.xs = xset.grid(resolution);
  for (const auto& x : out.xs) {
    const double base = p(x, anchor);
    Vector g(m);
    double f = base;
    for (int i = 0; i < m; ++i) {
      Point q = anchor;
      q[i] += steps[i];
      g[i] = (p(x, q) - base) / steps[i];
      f -= g[i] * anchor[i];
    }
    out.f.push_back(f);
    out.g.push_back(std::move(g));
  }
  for (std::size_t k = 0; k < out.xs.size(); ++k) {
    for (int s = 0; s < 4; ++s) {
      const Point a = yset.sample(rng);
      const double err = std::abs(p(out.xs[k], a) - (out.f[k] + dot(out.g[k], a)));
      out.reconstruction_error = std::max(out.reconstruction_error, err);
    }
  }
  return out;
}

}  // namespace minmax
