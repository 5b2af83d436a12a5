#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "minmax/chart_search.hpp"
#include "minmax/extended_real.hpp"
#include "minmax/parallel.hpp"
#include "minmax/problem.hpp"

namespace minmax {

enum class Method { kPgda, kGrid };

struct SolverConfig {
  Method method = Method::kPgda;
  int max_iter = 10'000;
  double tol = 1e-6;
  int grid_resolution = 101;
  double fd_step = 1e-6;
  std::uint64_t seed = 0;
  double multiplier_cap = 1e3;

  void validate() const {
    if (max_iter < 1) throw DomainError("SolverConfig: max_iter must be >= 1");
    if (!(tol > 0.0)) throw DomainError("SolverConfig: tol must be > 0");
    if (grid_resolution < 2) throw DomainError("SolverConfig: grid_resolution must be >= 2");
    if (!(fd_step > 0.0)) throw DomainError("SolverConfig: fd_step must be > 0");
    if (!(multiplier_cap > 0.0)) throw DomainError("SolverConfig: multiplier_cap must be > 0");
  }
};

inline const char* method_name(Method m) { return m == Method::kGrid ? "grid" : "pgda"; }

struct EquilibriumResult {
  Point x_star;
  Point y_star;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;
  int iterations = 0;
  bool certified = false;
};

/// Largest number of payoff evaluations brute_force_value will attempt.
inline constexpr double kBruteForceEvalBudget = 2e8;

namespace detail {

inline constexpr int kCrossCheckResolution = 21;

struct InnerOpt {
  double value = -std::numeric_limits<double>::infinity();
  Point arg;
};

template <class F>
Vector fd_gradient(F& fn, const Point& p, double h) {
  Vector g(p.size());
  Point q = p;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double keep = q[i];
    q[i] = keep + h;
    const double up = fn(q);
    q[i] = keep - h;
    const double down = fn(q);
    q[i] = keep;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

/// Projected gradient ascent from `start` with step c/sqrt(t); keeps the best iterate.
template <class F>
void gradient_ascent(const ConvexSet& set, F& fn, const Point& start, const SolverConfig& cfg, InnerOpt& best) {
  Point p = start;
  Vector g = fd_gradient(fn, p, cfg.fd_step);
  const double g0 = g.norm();
  if (!(g0 > 1e-12)) return;
  const double c = 0.5 * std::max(set.diameter_bound(), 1e-12) / g0;
  for (int t = 1; t <= cfg.max_iter; ++t) {
    Point next = set.project(p + (c / std::sqrt(static_cast<double>(t))) * g);
    const double moved = (next - p).norm();
    p = std::move(next);
    const double v = fn(p);
    if (v > best.value) best = {v, p};
    if (moved <= 1e-14 * (1.0 + p.norm())) break;
    g = fd_gradient(fn, p, cfg.fd_step);
  }
}

/// Maximizes a concave function over `set`. Candidates: the centroid, the chart
/// golden search (chart dim <= 3), and when `thorough` also the mesh at
/// cfg.grid_resolution (chart dim <= 2) and projected gradient ascent from the
/// best candidate so far. Gradient ascent also runs whenever the chart search
/// is unavailable.
template <class F>
InnerOpt maximize_concave(const ConvexSet& set, F&& fn, const SolverConfig& cfg, bool thorough) {
  InnerOpt best{fn(set.centroid()), set.centroid()};
  if (set.is_singleton()) return best;
  const int cd = set.chart_dim();
  if (thorough && cd <= 2) {
    int r = cfg.grid_resolution;
    while (r > 2 && set.grid_size(r) > 1e5) r = (r + 1) / 2;
    for (const auto& p : set.grid(r)) {
      const double v = fn(p);
      if (v > best.value) best = {v, p};
    }
  }
  if (cd <= 3) {
    SetOpt g = chart_maximize(set, fn);
    if (g.value > best.value) best = {g.value, std::move(g.arg)};
  }
  if (thorough || cd > 3) {
    const Point start = best.arg;
    gradient_ascent(set, fn, start, cfg, best);
  }
  return best;
}

inline bool violates_zero(const std::vector<int>& idx, const Point& p) {
  for (int i : idx) {
    if (std::abs(p[i]) > 1e-12) return true;
  }
  return false;
}

/// L⁺(x) together with the maximizing y found.
inline InnerOpt primal_reduction_arg(const MinmaxProblem& p, const Point& x, const SolverConfig& cfg,
                                     bool thorough = true) {
  require_dim(x, p.dim_x(), "primal_reduction");
  if (!p.x_set().contains(x)) throw MembershipError("primal_reduction: x is not in X");
  if (violates_zero(p.zero_x(), x)) return {std::numeric_limits<double>::infinity(), p.y_set().centroid()};
  const auto& payoff = p.payoff();
  return maximize_concave(p.y_set(), [&](const Point& y) { return payoff.eval_unchecked(x, y); }, cfg, thorough);
}

/// L⁻(y) = -(L*)⁺(y), evaluated on a precomputed dual problem.
inline InnerOpt dual_reduction_arg(const MinmaxProblem& dual, const Point& y, const SolverConfig& cfg,
                                   bool thorough = true) {
  InnerOpt r = primal_reduction_arg(dual, y, cfg, thorough);
  r.value = -r.value;
  return r;
}

}  // namespace detail

/// L⁺(x) = sup_y L(x, y).
inline ExtendedReal primal_reduction(const MinmaxProblem& p, const Point& x, const SolverConfig& cfg = {}) {
  return ExtendedReal::from_double(detail::primal_reduction_arg(p, x, cfg).value);
}

/// L⁻(y) = inf_x L(x, y), computed as -primal_reduction(dual_problem(p), y).
inline ExtendedReal dual_reduction(const MinmaxProblem& p, const Point& y, const SolverConfig& cfg = {}) {
  return ExtendedReal::from_double(-primal_reduction(dual_problem(p), y, cfg).to_double());
}

struct BruteForceResult {
  double primal = 0.0;
  double dual = 0.0;
  Point argmin_x;
  Point argmax_y;
  std::size_t evaluations = 0;
};

/// min over the x-mesh of max over the y-mesh of L, and max-min the other way.
/// Ties go to the smallest mesh index. Runs on worker_count() threads with
/// results independent of the thread count.
inline BruteForceResult brute_force_value(const MinmaxProblem& p, int resolution) {
  const double nx = p.x_set().grid_size(resolution);
  const double ny = p.y_set().grid_size(resolution);
  if (nx * ny > kBruteForceEvalBudget) {
    throw BudgetError("brute_force_value: " + std::to_string(static_cast<long long>(nx * ny)) +
                      " evaluations exceed the budget");
  }
  const auto xs = p.x_set().grid(resolution);
  const auto ys = p.y_set().grid(resolution);
  const auto& payoff = p.payoff();
  std::vector<double> row_max(xs.size(), -std::numeric_limits<double>::infinity());
  std::vector<std::vector<double>> col_min;
  col_min.resize(static_cast<std::size_t>(std::max(1, worker_count())));
  const int chunks = parallel_chunks(xs.size(), [&](int c, std::size_t begin, std::size_t end) {
    auto& cm = col_min[static_cast<std::size_t>(c)];
    cm.assign(ys.size(), std::numeric_limits<double>::infinity());
    for (std::size_t i = begin; i < end; ++i) {
      double rm = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < ys.size(); ++j) {
        const double v = payoff.eval_unchecked(xs[i], ys[j]);
        if (v > rm) rm = v;
        if (v < cm[j]) cm[j] = v;
      }
      row_max[i] = rm;
    }
  });
  BruteForceResult out;
  out.evaluations = xs.size() * ys.size();
  std::size_t bi = 0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (row_max[i] < row_max[bi]) bi = i;
  }
  std::vector<double> cols = col_min[0];
  for (int c = 1; c < chunks; ++c) {
    for (std::size_t j = 0; j < ys.size(); ++j) cols[j] = std::min(cols[j], col_min[static_cast<std::size_t>(c)][j]);
  }
  std::size_t bj = 0;
  for (std::size_t j = 1; j < ys.size(); ++j) {
    if (cols[j] > cols[bj]) bj = j;
  }
  out.primal = row_max[bi];
  out.dual = cols[bj];
  out.argmin_x = xs[bi];
  out.argmax_y = ys[bj];
  return out;
}

/// Approximate saddle point of a validated problem.
///
/// pgda: simultaneous projected gradient descent in x / ascent in y from the
/// centroids, step c/sqrt(t) with c = diameter / (2 |first gradient|),
/// uniform averaging. grid: the brute-force mesh at cfg.grid_resolution.
/// Small problems add a resolution-21 mesh cross-check (dims <= 2) and nested
/// golden searches on L⁺ and L⁻ (chart dims summing to <= 4). Every candidate
/// is scored by the reductions and the best x and best y are kept.
inline EquilibriumResult solve_saddle(const MinmaxProblem& p, const SolverConfig& cfg = {}) {
  cfg.validate();
  if (p.bypassed()) {
    throw NotConvexConcaveError("solve_saddle: problem '" + p.label() +
                                "' skipped its convex/concave check and cannot be solved");
  }
  const MinmaxProblem dual = dual_problem(p);
  const auto& payoff = p.payoff();
  const ConvexSet& xset = p.x_set();
  const ConvexSet& yset = p.y_set();
  std::vector<Point> xc, yc;
  EquilibriumResult res;

  if (cfg.method == Method::kGrid) {
    const BruteForceResult bf = brute_force_value(p, cfg.grid_resolution);
    xc.push_back(bf.argmin_x);
    yc.push_back(bf.argmax_y);
    res.iterations = 0;
  } else {
    Point x = xset.centroid(), y = yset.centroid();
    auto gx_of = [&](const Point& xx, const Point& yy) {
      auto fx = [&](const Point& q) { return payoff.eval_unchecked(q, yy); };
      return detail::fd_gradient(fx, xx, cfg.fd_step);
    };
    auto gy_of = [&](const Point& xx, const Point& yy) {
      auto fy = [&](const Point& q) { return payoff.eval_unchecked(xx, q); };
      return detail::fd_gradient(fy, yy, cfg.fd_step);
    };
    Vector gx = gx_of(x, y), gy = gy_of(x, y);
    const double cx = 0.5 * std::max(xset.diameter_bound(), 1e-12) / std::max(gx.norm(), 1e-12);
    const double cy = 0.5 * std::max(yset.diameter_bound(), 1e-12) / std::max(gy.norm(), 1e-12);
    Vector xsum = Vector::Zero(x.size()), ysum = Vector::Zero(y.size());
    for (int t = 1; t <= cfg.max_iter; ++t) {
      const double s = 1.0 / std::sqrt(static_cast<double>(t));
      Point xn = xset.project(x - (cx * s) * gx);
      Point yn = yset.project(y + (cy * s) * gy);
      x = std::move(xn);
      y = std::move(yn);
      xsum += x;
      ysum += y;
      gx = gx_of(x, y);
      gy = gy_of(x, y);
    }
    res.iterations = cfg.max_iter;
    const double n = static_cast<double>(cfg.max_iter);
    xc.push_back(xset.project(xsum / n));
    yc.push_back(yset.project(ysum / n));
    xc.push_back(x);
    yc.push_back(y);
  }

  if (cfg.method == Method::kPgda && xset.chart_dim() <= 2 && yset.chart_dim() <= 2) {
    const BruteForceResult bf = brute_force_value(p, detail::kCrossCheckResolution);
    xc.push_back(bf.argmin_x);
    yc.push_back(bf.argmax_y);
  }
  const int cdx = xset.chart_dim(), cdy = yset.chart_dim();
  if (cdx <= 3 && cdy <= 3 && cdx + cdy <= 4) {
    SetOpt xr = chart_minimize(xset, [&](const Point& x) {
      return detail::primal_reduction_arg(p, x, cfg, false).value;
    });
    SetOpt yr = chart_maximize(yset, [&](const Point& y) {
      return detail::dual_reduction_arg(dual, y, cfg, false).value;
    });
    xc.push_back(std::move(xr.arg));
    yc.push_back(std::move(yr.arg));
  }

  // Score candidates; the inner optimizers' arguments join the other side.
  std::vector<detail::InnerOpt> xs, ys;
  for (const auto& x : xc) xs.push_back(detail::primal_reduction_arg(p, x, cfg));
  for (const auto& y : yc) ys.push_back(detail::dual_reduction_arg(dual, y, cfg));
  for (const auto& r : xs) yc.push_back(r.arg);
  for (const auto& r : ys) xc.push_back(r.arg);
  const std::size_t nx0 = xs.size(), ny0 = ys.size();
  for (std::size_t i = nx0; i < xc.size(); ++i) xs.push_back(detail::primal_reduction_arg(p, xc[i], cfg));
  for (std::size_t j = ny0; j < yc.size(); ++j) ys.push_back(detail::dual_reduction_arg(dual, yc[j], cfg));

  std::size_t bi = 0, bj = 0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (xs[i].value < xs[bi].value) bi = i;
  }
  for (std::size_t j = 1; j < ys.size(); ++j) {
    if (ys[j].value > ys[bj].value) bj = j;
  }
  res.x_star = xc[bi];
  res.y_star = yc[bj];
  // L(x*, y*) bounds L⁺(x*) from below and L⁻(y*) from above.
  const double mid = payoff.eval_unchecked(res.x_star, res.y_star);
  res.primal_value = std::max(xs[bi].value, mid);
  res.dual_value = std::min(ys[bj].value, mid);
  res.gap = res.primal_value - res.dual_value;
  res.certified = res.gap <= cfg.tol;
  return res;
}

/// inf sup L - sup inf L. Validated problems go through solve_saddle; problems
/// that bypassed validation are measured on the mesh at cfg.grid_resolution.
inline double duality_gap(const MinmaxProblem& p, const SolverConfig& cfg = {}) {
  cfg.validate();
  if (p.bypassed()) {
    const BruteForceResult bf = brute_force_value(p, cfg.grid_resolution);
    return bf.primal - bf.dual;
  }
  return solve_saddle(p, cfg).gap;
}

struct BeckChevalleyReport {
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// lhs = inf_x sup_a L, rhs = sup_a inf_x L on the mesh; holds iff they agree to cfg.tol.
inline BeckChevalleyReport check_beck_chevalley(const MinmaxProblem& p, const SolverConfig& cfg = {}) {
  const BruteForceResult bf = brute_force_value(p, cfg.grid_resolution);
  return {std::abs(bf.primal - bf.dual) <= cfg.tol, bf.primal, bf.dual};
}

/// Beck–Chevalley for (X × Z, A × C, L(x, a) + M(z, c)).
inline bool check_bc_product_stability(const MinmaxProblem& p, const ConvexSet& z, const ConvexSet& c,
                                       const PayoffExpr& m, const SolverConfig& cfg = {}) {
  const MinmaxProblem side = p.bypassed() ? MinmaxProblem::unchecked(z, c, m, "M") : MinmaxProblem(z, c, m, "M");
  return check_beck_chevalley(tensor(p, side), cfg).holds;
}

/// Precomposes the payoff with phi: X → Y in the minimizer slot.
inline MinmaxProblem pullback(const MinmaxProblem& target, const AffineMap& phi, const ConvexSet& x_set,
                              int samples = 200, std::uint64_t seed = 0) {
  if (!target.zero_x().empty() || !target.zero_y().empty()) {
    throw DomainError("pullback: problems with zero constraints cannot be pulled back");
  }
  if (phi.n_in() != x_set.dim() || phi.n_out() != target.dim_x()) {
    throw DimensionError("pullback: phi must map R^dim(X) into the target's x-space");
  }
  std::mt19937_64 rng(seed);
  std::vector<Point> probe = x_set.grid(x_set.grid_size(5) <= 1000.0 ? 5 : 2);
  for (int s = 0; s < samples; ++s) probe.push_back(x_set.sample(rng));
  for (const auto& x : probe) {
    if (!target.x_set().contains(phi(x))) {
      throw MembershipError("pullback: phi maps " + detail::fmt_point(x) + " outside the target's X");
    }
  }
  return MinmaxProblem::derived(x_set, target.y_set(), substitute(target.payoff(), phi, std::nullopt),
                                "pullback(" + target.label() + ")", target.validation());
}

namespace detail {

/// Precomputed data for inf over a fiber {e in E : F e + c = b}.
struct FiberData {
  MinmaxProblem source;
  AffineMap f;
  ConvexSet base;
  SolverConfig cfg;
  Matrix pinv;
  Matrix null_basis;  // columns span ker F
  bool identity = false;

  FiberData(MinmaxProblem src, AffineMap map, ConvexSet b, SolverConfig c)
      : source(std::move(src)), f(std::move(map)), base(std::move(b)), cfg(c) {
    identity = f.is_identity();
    const Matrix& F = f.matrix();
    Eigen::JacobiSVD<Matrix> svd(F, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vector sv = svd.singularValues();
    const double thresh = 1e-12 * std::max(1.0, sv.size() ? sv[0] : 0.0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv[i] > thresh ? 1 : 0;
    Matrix sinv = Matrix::Zero(F.cols(), F.rows());
    for (int i = 0; i < rank; ++i) sinv(i, i) = 1.0 / sv[i];
    pinv = svd.matrixV() * sinv * svd.matrixU().transpose();
    null_basis = svd.matrixV().rightCols(F.cols() - rank);
  }

  double residual(const Point& e, const Point& b) const { return (f(e) - b).norm(); }

  Point to_slice(const Point& e, const Point& b) const { return e - pinv * (f(e) - b); }

  /// A point of E on the slice, by alternating projections (1e-8, 10,000 rounds).
  Point feasible(const Point& b) const {
    const ConvexSet& E = source.x_set();
    Point e = E.centroid();
    for (int it = 0; it < 10'000; ++it) {
      e = E.project(to_slice(e, b));
      if (residual(e, b) <= 1e-8) return e;
    }
    throw EmptyFiberError("pushforward: empty fiber over b = " + fmt_point(b));
  }

  /// Largest s >= 0 with e + s d in E, by bisection on membership.
  double reach(const Point& e, const Vector& d) const {
    const ConvexSet& E = source.x_set();
    double in = 0.0, out = E.diameter_bound() + 1.0;
    for (int it = 0; it < 80 && out - in > 1e-15 * (1.0 + out); ++it) {
      const double mid = 0.5 * (in + out);
      if (E.contains(e + mid * d, 1e-12)) {
        in = mid;
      } else {
        out = mid;
      }
    }
    return in;
  }

  double eval(const Vector& b_raw, const Vector& a) const {
    const Point b = base.project(b_raw);
    const auto& payoff = source.payoff();
    if (identity) return payoff.eval_unchecked(b, a);
    const ConvexSet& E = source.x_set();
    if (null_basis.cols() == 0) {
      const Point e = pinv * (b - f.offset());
      if (!E.contains(e, 1e-8) || residual(e, b) > 1e-8) {
        throw EmptyFiberError("pushforward: empty fiber over b = " + fmt_point(b));
      }
      return payoff.eval_unchecked(e, a);
    }
    const Point e0 = feasible(b);
    if (null_basis.cols() == 1) {
      const Vector d = null_basis.col(0);
      const double hi = reach(e0, d);
      const double lo = -reach(e0, -d);
      return golden_min([&](double s) { return payoff.eval_unchecked(e0 + s * d, a); }, lo, hi, 1e-10).value;
    }
    return fiber_descent(e0, b, a);
  }

  /// Projection onto E ∩ slice by Dykstra's algorithm.
  Point project_fiber(const Point& p, const Point& b) const {
    const ConvexSet& E = source.x_set();
    Point x = p;
    Vector pe = Vector::Zero(p.size()), ps = Vector::Zero(p.size());
    for (int it = 0; it < 500; ++it) {
      const Point y = E.project(x + pe);
      pe = x + pe - y;
      const Point xn = to_slice(y + ps, b);
      ps = y + ps - xn;
      const double step = (xn - x).norm();
      x = xn;
      if (step <= 1e-12) break;
    }
    return E.project(x);
  }

  double fiber_descent(const Point& e0, const Point& b, const Vector& a) const {
    const auto& payoff = source.payoff();
    auto fn = [&](const Point& e) { return -payoff.eval_unchecked(e, a); };
    double best = -fn(e0);
    Point e = e0;
    Vector g = fd_gradient(fn, e, cfg.fd_step);
    g = null_basis * (null_basis.transpose() * g);
    const double g0 = g.norm();
    if (!(g0 > 1e-12)) return best;
    const double c = 0.5 * source.x_set().diameter_bound() / g0;
    const int iters = std::min(cfg.max_iter, 500);
    for (int t = 1; t <= iters; ++t) {
      e = project_fiber(e + (c / std::sqrt(static_cast<double>(t))) * g, b);
      if (residual(e, b) <= 1e-8) best = std::min(best, payoff.eval_unchecked(e, a));
      g = fd_gradient(fn, e, cfg.fd_step);
      g = null_basis * (null_basis.transpose() * g);
    }
    return best;
  }
};

}  // namespace detail

/// The problem on (B, A) with payoff (b, a) ↦ inf { L(e, a) : e in E, f(e) = b }.
/// Queries outside B are projected onto B first. Fibers of dimension 0 are
/// solved directly, dimension 1 by golden section on the fiber segment, higher
/// dimensions by projected gradient with Dykstra projections.
inline MinmaxProblem pushforward_min(const MinmaxProblem& p, const AffineMap& f, const ConvexSet& base,
                                     const SolverConfig& fiber_cfg = {}) {
  if (f.n_in() != p.dim_x() || f.n_out() != base.dim()) {
    throw DimensionError("pushforward_min: f must map R^dim(E) into R^dim(B)");
  }
  if (!p.zero_x().empty() || !p.zero_y().empty()) {
    throw DomainError("pushforward_min: problems with zero constraints are not supported");
  }
  auto data = std::make_shared<const detail::FiberData>(p, f, base, fiber_cfg);
  // f(E) ⊂ B on a coarse mesh, and every sampled fiber is nonempty.
  const ConvexSet& E = p.x_set();
  for (const auto& e : E.grid(E.grid_size(5) <= 1000.0 ? 5 : 2)) {
    if (!base.contains(f(e), 1e-8)) {
      throw MembershipError("pushforward_min: f maps " + detail::fmt_point(e) + " outside B");
    }
  }
  if (!data->identity && data->null_basis.cols() > 0) {
    std::mt19937_64 rng(fiber_cfg.seed);
    std::vector<Point> probe = base.grid(base.grid_size(3) <= 1000.0 ? 3 : 1);
    for (int s = 0; s < 20; ++s) probe.push_back(base.sample(rng));
    for (const auto& b : probe) data->feasible(b);
  }
  const int db = base.dim(), da = p.dim_y();
  PayoffExpr payoff(expr::native([data](const Vector& b, const Vector& a) { return data->eval(b, a); }, db, da,
                                 "pushforward"),
                    db, da);
  return MinmaxProblem::derived(base, p.y_set(), std::move(payoff), "pushforward(" + p.label() + ")",
                                p.validation());
}

struct FiberSolveResult {
  double value = 0.0;
  double direct = 0.0;
  bool matches_direct = false;
};

/// Solves (E, A) through (B, A): push forward along f, solve the base problem,
/// and compare with the direct mesh value of inf sup on (E, A).
inline FiberSolveResult solve_by_fibers(const MinmaxProblem& p, const AffineMap& f, const ConvexSet& base,
                                        const SolverConfig& cfg = {}) {
  const MinmaxProblem q = pushforward_min(p, f, base, cfg);
  FiberSolveResult out;
  out.value = solve_saddle(q, cfg).primal_value;
  out.direct = brute_force_value(p, cfg.grid_resolution).primal;
  out.matches_direct = std::abs(out.value - out.direct) <= cfg.tol;
  return out;
}

struct ConvexitySuiteReport {
  int passed = 0;
  int total = 0;
  double worst = 0.0;
};

/// Midpoint convexity of the payoff in x: L((b1 + b2)/2, a) <= (L(b1, a) + L(b2, a))/2 + tol.
inline ConvexitySuiteReport midpoint_convexity_suite(const MinmaxProblem& p, int samples, std::uint64_t seed,
                                                     double tol) {
  std::mt19937_64 rng(seed);
  ConvexitySuiteReport rep;
  for (int s = 0; s < samples; ++s) {
    const Point b1 = p.x_set().sample(rng);
    const Point b2 = p.x_set().sample(rng);
    const Point a = p.y_set().sample(rng);
    const double excess = p(0.5 * (b1 + b2), a) - 0.5 * (p(b1, a) + p(b2, a));
    rep.worst = std::max(rep.worst, excess);
    ++rep.total;
    if (excess <= tol) ++rep.passed;
  }
  return rep;
}

}  // namespace minmax
