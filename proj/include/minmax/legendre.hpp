#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "minmax/chart_search.hpp"
#include "minmax/extended_real.hpp"
#include "minmax/problem.hpp"
#include "minmax/solver.hpp"

namespace minmax {

/// A function known on a mesh of its domain.
struct SampledFunction {
  ConvexSet domain;
  std::vector<Point> mesh;
  std::vector<ExtendedReal> values;

  void validate() const {
    if (mesh.size() != values.size()) throw DimensionError("SampledFunction: mesh and values differ in length");
    bool any_finite = false;
    for (std::size_t i = 0; i < mesh.size(); ++i) {
      require_dim(mesh[i], domain.dim(), "SampledFunction mesh point");
      if (!domain.contains(mesh[i])) {
        throw MembershipError("SampledFunction: mesh point " + detail::fmt_point(mesh[i]) + " is outside the domain");
      }
      any_finite = any_finite || values[i].is_finite();
    }
    if (!any_finite) throw DomainError("SampledFunction: needs at least one finite value");
  }
};

/// Samples fn on domain.grid(resolution).
inline SampledFunction sample_function(const ConvexSet& domain, const std::function<double(const Point&)>& fn,
                                       int resolution) {
  SampledFunction f{domain, domain.grid(resolution), {}};
  f.values.reserve(f.mesh.size());
  for (const auto& p : f.mesh) f.values.push_back(ExtendedReal::from_double(fn(p)));
  return f;
}

namespace detail {

/// sup over the mesh of <alpha, x_i> - f(x_i). +inf values of f drop out; a -inf value makes it +inf.
inline double conjugate_at(const SampledFunction& f, const Vector& alpha) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < f.mesh.size(); ++i) {
    const ExtendedReal& v = f.values[i];
    if (v.is_pos_inf()) continue;
    if (v.is_neg_inf()) return std::numeric_limits<double>::infinity();
    best = std::max(best, dot(alpha, f.mesh[i]) - v.value());
  }
  return best;
}

inline void check_budget(double a, double b, const char* what) {
  if (a * b > kBruteForceEvalBudget) throw BudgetError(std::string(what) + ": mesh product exceeds the budget");
}

}  // namespace detail

/// f*(alpha) = max over f's mesh of <alpha, x> - f(x), on dual_box.grid(resolution).
inline SampledFunction conjugate(const SampledFunction& f, const ConvexSet& dual_box, int resolution) {
  f.validate();
  if (dual_box.dim() != f.domain.dim()) throw DimensionError("conjugate: dual box dimension differs from domain");
  detail::check_budget(dual_box.grid_size(resolution), static_cast<double>(f.mesh.size()), "conjugate");
  SampledFunction out{dual_box, dual_box.grid(resolution), {}};
  std::vector<double> vals(out.mesh.size());
  parallel_chunks(out.mesh.size(), [&](int, std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) vals[j] = detail::conjugate_at(f, out.mesh[j]);
  });
  out.values.reserve(vals.size());
  for (double v : vals) out.values.push_back(ExtendedReal::from_double(v));
  return out;
}

/// (f*)* on f's own mesh. Each value is the better of the dual-mesh maximum and
/// a golden-section refinement of alpha ↦ <alpha, x> - f*(alpha) (concave) with
/// f* evaluated exactly from f's mesh; refinement runs for dual boxes of chart
/// dimension <= 2.
inline SampledFunction biconjugate(const SampledFunction& f, const ConvexSet& dual_box, int resolution) {
  const SampledFunction fs = conjugate(f, dual_box, resolution);
  detail::check_budget(static_cast<double>(fs.mesh.size()), static_cast<double>(f.mesh.size()), "biconjugate");
  const bool refine = dual_box.chart_dim() <= 2;
  std::vector<double> vals(f.mesh.size());
  parallel_chunks(f.mesh.size(), [&](int, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Point& x = f.mesh[i];
      double best = detail::conjugate_at(fs, x);
      if (refine) {
        auto phi = [&](const Point& alpha) { return dot(alpha, x) - detail::conjugate_at(f, alpha); };
        best = std::max(best, chart_maximize(dual_box, phi, 1e-9).value);
      }
      // f** <= f holds exactly; the sup can overshoot by rounding.
      if (!f.values[i].is_pos_inf()) best = std::min(best, f.values[i].to_double());
      vals[i] = best;
    }
  });
  SampledFunction out{f.domain, f.mesh, {}};
  out.values.reserve(vals.size());
  for (double v : vals) out.values.push_back(ExtendedReal::from_double(v));
  return out;
}

/// L|₀ = (X, Y × [-cap, cap]^n, L(x, y) - <alpha, x>). With cap = +inf the
/// dual box collapses to {0} and the problem instead carries a zero
/// constraint on every x-coordinate: its primal reduction is +inf off x = 0.
inline MinmaxProblem restrict_zero(const MinmaxProblem& p, double dual_cap) {
  if (!(dual_cap > 0.0)) throw DomainError("restrict_zero: dual_cap must be > 0");
  const int n = p.dim_x(), m = p.dim_y();
  const bool unbounded = std::isinf(dual_cap);
  const double c = unbounded ? 0.0 : dual_cap;
  const ConvexSet alpha_box = ConvexSet::box(Vector::Constant(n, -c), Vector::Constant(n, c));
  const PayoffExpr lifted = substitute(p.payoff(), std::nullopt, AffineMap::select(m + n, 0, m));
  Matrix q = Matrix::Zero(n, m + n);
  q.rightCols(n) = -Matrix::Identity(n, n);
  PayoffExpr payoff(expr::add({lifted.root(), expr::bilinear(std::move(q))}), n, m + n);
  std::vector<int> zx = p.zero_x();
  if (unbounded) {
    for (int i = 0; i < n; ++i) {
      if (std::find(zx.begin(), zx.end(), i) == zx.end()) zx.push_back(i);
    }
  }
  std::vector<int> zy = p.zero_y();
  return MinmaxProblem::derived(p.x_set(), ConvexSet::product({p.y_set(), alpha_box}), std::move(payoff),
                                "restrict0(" + p.label() + ")", p.validation())
      .with_zero_constraints(std::move(zx), std::move(zy));
}

/// L|⁰ = dual(restrict_zero(dual(P))) = (X × [-cap, cap]^m, Y, L(x, y) + <beta, y>).
inline MinmaxProblem corestrict_zero(const MinmaxProblem& p, double dual_cap) {
  return dual_problem(restrict_zero(dual_problem(p), dual_cap));
}

struct StrongDualityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  Vector alpha;
};

namespace detail {

/// Sampled midpoint convexity on a mesh: pairs whose midpoint is itself a mesh point.
inline void check_mesh_convexity(const SampledFunction& f, int samples, std::uint64_t seed) {
  const std::size_t n = f.mesh.size();
  if (n < 3) return;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  auto midpoint_index = [&](const Point& mid) -> std::size_t {
    std::size_t best = n;
    double bd = 1e-9;
    for (std::size_t k = 0; k < n; ++k) {
      const double d = (f.mesh[k] - mid).norm();
      if (d <= bd) {
        bd = d;
        best = k;
      }
    }
    return best;
  };
  for (int s = 0; s < samples; ++s) {
    const std::size_t i = pick(rng), j = pick(rng);
    if (!f.values[i].is_finite() || !f.values[j].is_finite()) continue;
    const std::size_t k = midpoint_index(0.5 * (f.mesh[i] + f.mesh[j]));
    if (k == n) continue;
    const double a = f.values[i].value(), b = f.values[j].value();
    const double fm = f.values[k].to_double();
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    if (fm > 0.5 * (a + b) + 1e-9 * scale) {
      throw NotConvexError("function is not convex: midpoint of " + fmt_point(f.mesh[i]) + " and " +
                           fmt_point(f.mesh[j]) + " has value " + std::to_string(fm) + " above the chord " +
                           std::to_string(0.5 * (a + b)));
    }
  }
}

}  // namespace detail

/// Strong duality for f|₀: lhs = f(0), rhs = sup over alpha in [-cap, cap]^n of
/// min over the mesh of f(x) - <alpha, x>. The alpha-mesh maximum at
/// cfg.grid_resolution is refined by golden search (the inner min is concave in alpha).
inline StrongDualityReport check_f0_strong_duality(const SampledFunction& f, double dual_cap,
                                                   const SolverConfig& cfg = {}) {
  f.validate();
  if (!(dual_cap > 0.0) || std::isinf(dual_cap)) throw DomainError("check_f0_strong_duality: dual_cap must be finite and > 0");
  detail::check_mesh_convexity(f, 1000, cfg.seed);
  const int n = f.domain.dim();
  const Point zero = Vector::Zero(n);
  std::size_t zi = f.mesh.size();
  for (std::size_t i = 0; i < f.mesh.size(); ++i) {
    if ((f.mesh[i] - zero).norm() <= 1e-12) {
      zi = i;
      break;
    }
  }
  if (zi == f.mesh.size()) throw DomainError("check_f0_strong_duality: 0 must be a mesh point of f");
  StrongDualityReport rep;
  rep.lhs = f.values[zi].to_double();

  auto phi = [&](const Point& alpha) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < f.mesh.size(); ++i) {
      if (f.values[i].is_pos_inf()) continue;
      m = std::min(m, f.values[i].to_double() - dot(alpha, f.mesh[i]));
    }
    return m;
  };
  const ConvexSet alpha_box = ConvexSet::box(Vector::Constant(n, -dual_cap), Vector::Constant(n, dual_cap));
  detail::check_budget(alpha_box.grid_size(cfg.grid_resolution), static_cast<double>(f.mesh.size()),
                       "check_f0_strong_duality");
  rep.rhs = -std::numeric_limits<double>::infinity();
  for (const auto& a : alpha_box.grid(cfg.grid_resolution)) {
    const double v = phi(a);
    if (v > rep.rhs) {
      rep.rhs = v;
      rep.alpha = a;
    }
  }
  if (alpha_box.chart_dim() <= 3) {
    SetOpt g = chart_maximize(alpha_box, phi, 1e-10);
    if (g.value > rep.rhs) {
      rep.rhs = g.value;
      rep.alpha = g.arg;
    }
  }
  rep.holds = std::abs(rep.lhs - rep.rhs) <= cfg.tol;
  return rep;
}

}  // namespace minmax
