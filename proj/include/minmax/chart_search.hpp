#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "minmax/convex_set.hpp"

namespace minmax {

struct LineMin {
  double arg = 0.0;
  double value = std::numeric_limits<double>::infinity();
};

/// Golden-section search for the minimum of a convex function on [lo, hi].
/// Both endpoints are evaluated too, so boundary minima are hit exactly.
template <class F>
LineMin golden_min(F&& f, double lo, double hi, double rel_tol = 1e-8) {
  LineMin best{lo, f(lo)};
  if (!(hi > lo)) return best;
  auto consider = [&best](double t, double v) {
    if (v < best.value) best = {t, v};
  };
  consider(hi, f(hi));
  constexpr double kInvPhi = 0.6180339887498949;
  const double stop = rel_tol * (hi - lo);
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > stop) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  consider(c, fc);
  consider(d, fd);
  return best;
}

template <class F>
LineMin golden_max(F&& f, double lo, double hi, double rel_tol = 1e-8) {
  LineMin r = golden_min([&f](double t) { return -f(t); }, lo, hi, rel_tol);
  r.value = -r.value;
  return r;
}

struct SetOpt {
  double value = std::numeric_limits<double>::infinity();
  Point arg;
};

/// Minimizes a convex function over `set` by nested golden-section searches on
/// the set's chart. Partial minima of a convex function over a convex set are
/// convex, so every level searches a convex function of one variable.
/// Costs about (40 evaluations)^chart_dim; callers keep chart_dim small.
template <class F>
SetOpt chart_minimize(const ConvexSet& set, F&& f, double rel_tol = 1e-8) {
  const int cd = set.chart_dim();
  std::vector<double> t(static_cast<std::size_t>(cd), 0.0);
  SetOpt best;
  bool found = false;
  auto leaf = [&]() {
    Point p = set.chart_point(std::span<const double>(t.data(), t.size()));
    const double v = f(p);
    if (!found || v < best.value) {
      best = {v, std::move(p)};
      found = true;
    }
    return v;
  };
  auto level = [&](auto&& self, int k) -> double {
    if (k == cd) return leaf();
    const ChartRange r = set.chart_range(k, std::span<const double>(t.data(), static_cast<std::size_t>(k)));
    auto inner = [&](double tk) {
      t[static_cast<std::size_t>(k)] = tk;
      return self(self, k + 1);
    };
    return golden_min(inner, r.lo, r.hi, rel_tol).value;
  };
  level(level, 0);
  return best;
}

template <class F>
SetOpt chart_maximize(const ConvexSet& set, F&& f, double rel_tol = 1e-8) {
  SetOpt r = chart_minimize(set, [&f](const Point& p) { return -f(p); }, rel_tol);
  r.value = -r.value;
  return r;
}

}  // namespace minmax
