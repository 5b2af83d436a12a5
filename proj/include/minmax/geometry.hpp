#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "minmax/problem.hpp"
#include "minmax/solver.hpp"

namespace minmax {

/// {p : <v, p> + alpha = 0} with unit v. `margin` is the half-width achieved.
struct Hyperplane {
  Vector v;
  double alpha = 0.0;
  double margin = 0.0;

  double side(const Point& p) const { return dot(v, p) + alpha; }
};

/// The minmax problem (X × Y, unit ball, <v, y - x>). Its value is dist(X, Y).
inline MinmaxProblem separation_problem(const ConvexSet& x_set, const ConvexSet& y_set) {
  if (x_set.dim() != y_set.dim()) throw DimensionError("separation: X and Y live in different dimensions");
  const int k = x_set.dim();
  Matrix q(2 * k, k);
  q.topRows(k) = -Matrix::Identity(k, k);
  q.bottomRows(k) = Matrix::Identity(k, k);
  return MinmaxProblem::derived(ConvexSet::product({x_set, y_set}), ConvexSet::ball(Vector::Zero(k), 1.0),
                                PayoffExpr(expr::bilinear(std::move(q)), 2 * k, k), "separation",
                                MinmaxProblem::Validation::kChecked);
}

/// Strictly separating hyperplane for disjoint compact sets: <v, x> + alpha <= -margin
/// on X and >= margin on Y. Solves the separation minmax problem, then polishes
/// its (x*, y*) into a closest pair by alternating projections.
inline Hyperplane separate_compact(const ConvexSet& x_set, const ConvexSet& y_set, const SolverConfig& cfg = {}) {
  const MinmaxProblem p = separation_problem(x_set, y_set);
  const int k = x_set.dim();
  const EquilibriumResult eq = solve_saddle(p, cfg);
  Point x = eq.x_star.head(k), y = eq.x_star.tail(k);
  for (int it = 0; it < cfg.max_iter; ++it) {
    const Point xn = x_set.project(y);
    const Point yn = y_set.project(xn);
    const double moved = (xn - x).norm() + (yn - y).norm();
    x = xn;
    y = yn;
    if (moved <= 1e-15 * (1.0 + x.norm() + y.norm())) break;
  }
  const double delta = (y - x).norm();
  if (!(delta > cfg.tol)) {
    throw NotSeparableError("separate_compact: the sets are within " + std::to_string(delta) +
                            " of each other (tolerance " + std::to_string(cfg.tol) + ")");
  }
  Hyperplane h;
  h.v = (y - x) / delta;
  h.alpha = -dot(h.v, 0.5 * (x + y)) + 0.0;  // no -0 in reports
  h.margin = 0.5 * delta;
  return h;
}

using SetFamily = std::function<ConvexSet(int)>;

/// Non-strict separation of two closed convex sets given by increasing compact
/// truncations i ↦ X_i, Y_i. Uses the direction from the deepest truncation and
/// the midpoint of its feasible offset interval [-min_Y <v, y>, -max_X <v, x>].
inline Hyperplane separate_general(const SetFamily& x_at, const SetFamily& y_at, int k, int max_i,
                                   const SolverConfig& cfg = {}) {
  if (max_i < 1) throw DomainError("separate_general: max_i must be >= 1");
  std::mt19937_64 rng(cfg.seed);
  auto nested = [&](const ConvexSet& inner, const ConvexSet& outer, const char* which, int i) {
    std::vector<Point> probe = inner.grid(inner.grid_size(5) <= 1000.0 ? 5 : 2);
    for (int s = 0; s < 200; ++s) probe.push_back(inner.sample(rng));
    for (const auto& p : probe) {
      if (!outer.contains(p)) {
        throw NestingError(std::string("separate_general: ") + which + "_" + std::to_string(i - 1) +
                           " is not contained in " + which + "_" + std::to_string(i) + " at " +
                           detail::fmt_point(p));
      }
    }
  };
  Hyperplane h;
  ConvexSet prev_x, prev_y;
  ConvexSet xi, yi;
  for (int i = 1; i <= max_i; ++i) {
    xi = x_at(i);
    yi = y_at(i);
    if (xi.dim() != k || yi.dim() != k) throw DimensionError("separate_general: truncations must live in R^k");
    if (i > 1) {
      nested(prev_x, xi, "X", i);
      nested(prev_y, yi, "Y", i);
    }
    h = separate_compact(xi, yi, cfg);
    prev_x = xi;
    prev_y = yi;
  }
  const double lo = yi.support(-h.v).first;   // -min_Y <v, y>
  const double hi = -xi.support(h.v).first;   // -max_X <v, x>
  if (lo > hi + cfg.tol) {
    throw NotSeparableError("separate_general: no offset separates the deepest truncation");
  }
  h.alpha = 0.5 * (lo + hi) + 0.0;
  h.margin = 0.5 * std::max(0.0, hi - lo);
  return h;
}

}  // namespace minmax
