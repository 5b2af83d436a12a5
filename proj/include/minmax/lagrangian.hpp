#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "minmax/extended_real.hpp"
#include "minmax/problem.hpp"
#include "minmax/solver.hpp"

namespace minmax {

/// minimize f0(x) subject to f_i(x) <= 0, g_j(x) = 0, x in a box.
/// All expressions are x-only (dim_y = 0).
struct StandardProblem {
  PayoffExpr objective;
  std::vector<PayoffExpr> ineq;
  std::vector<PayoffExpr> eq;
  ConvexSet box;

  int dim() const { return box.dim(); }

  /// Throws NotConvexError / NotAffineError / DimensionError on bad input.
  void validate(std::uint64_t seed = 0) const {
    if (box.kind() != ConvexSet::Kind::kBox) throw DomainError("StandardProblem: domain must be a box");
    auto check_dims = [&](const PayoffExpr& e, const std::string& what) {
      if (e.dim_x() != dim() || e.dim_y() != 0) {
        throw DimensionError("StandardProblem: " + what + " must be an x-only expression on R^" +
                             std::to_string(dim()));
      }
    };
    check_dims(objective, "objective");
    for (std::size_t i = 0; i < ineq.size(); ++i) check_dims(ineq[i], "ineq[" + std::to_string(i) + "]");
    for (std::size_t j = 0; j < eq.size(); ++j) check_dims(eq[j], "eq[" + std::to_string(j) + "]");

    std::mt19937_64 rng(seed);
    const Vector none;
    auto convex = [&](const PayoffExpr& e, const std::string& what) {
      auto fn = [&](const Point& x) { return e.eval_unchecked(x, none); };
      const std::string w = detail::jensen_witness(box, fn, +1, 200, 1e-9, rng);
      if (!w.empty()) throw NotConvexError("StandardProblem: " + what + " is not convex: " + w);
    };
    convex(objective, "objective");
    for (std::size_t i = 0; i < ineq.size(); ++i) convex(ineq[i], "ineq[" + std::to_string(i) + "]");
    for (std::size_t j = 0; j < eq.size(); ++j) {
      for (int s = 0; s < 200; ++s) {
        const Point a = box.sample(rng), b = box.sample(rng);
        const double ga = eq[j].eval_unchecked(a, none), gb = eq[j].eval_unchecked(b, none);
        const double gm = eq[j].eval_unchecked(0.5 * (a + b), none);
        const double scale = std::max({1.0, std::abs(ga), std::abs(gb)});
        if (std::abs(gm - 0.5 * (ga + gb)) > 1e-9 * scale) {
          throw NotAffineError("StandardProblem: eq[" + std::to_string(j) + "] is not affine between " +
                               detail::fmt_point(a) + " and " + detail::fmt_point(b));
        }
      }
    }
  }
};

namespace detail {

struct LagrangianData {
  StandardProblem sp;

  double eval(const Vector& x, const Vector& y) const {
    const Vector none;
    double v = sp.objective.eval_unchecked(x, none);
    const std::size_t n = sp.ineq.size();
    for (std::size_t i = 0; i < n; ++i) v += y[static_cast<Eigen::Index>(i)] * sp.ineq[i].eval_unchecked(x, none);
    for (std::size_t j = 0; j < sp.eq.size(); ++j) {
      v += y[static_cast<Eigen::Index>(n + j)] * sp.eq[j].eval_unchecked(x, none);
    }
    return v;
  }
};

}  // namespace detail

/// (box, [0, cap]^n × [-cap, cap]^m, f0(x) + Σ λ_i f_i(x) + Σ ν_j g_j(x)).
inline MinmaxProblem build_lagrangian(const StandardProblem& sp, double multiplier_cap) {
  if (!(multiplier_cap > 0.0) || std::isinf(multiplier_cap)) {
    throw DomainError("build_lagrangian: multiplier_cap must be finite and > 0");
  }
  sp.validate();
  const int n = static_cast<int>(sp.ineq.size()), m = static_cast<int>(sp.eq.size());
  Vector lo(n + m), hi(n + m);
  lo.head(n).setZero();
  lo.tail(m).setConstant(-multiplier_cap);
  hi.setConstant(multiplier_cap);
  auto data = std::make_shared<const detail::LagrangianData>(detail::LagrangianData{sp});
  PayoffExpr payoff(expr::native([data](const Vector& x, const Vector& y) { return data->eval(x, y); }, sp.dim(),
                                 n + m, "lagrangian"),
                    sp.dim(), n + m);
  return MinmaxProblem(sp.box, ConvexSet::box(std::move(lo), std::move(hi)), std::move(payoff), "lagrangian");
}

/// sup over λ >= 0, ν of L(x; λ, ν): f0(x) when x is feasible to feas_tol, +inf otherwise.
inline ExtendedReal sup_multipliers(const StandardProblem& sp, const Point& x, double feas_tol = 1e-8) {
  require_dim(x, sp.dim(), "sup_multipliers");
  if (!sp.box.contains(x)) throw MembershipError("sup_multipliers: x is outside the domain box");
  const Vector none;
  for (const auto& f : sp.ineq) {
    if (f.eval_unchecked(x, none) > feas_tol) return ExtendedReal::pos_inf();
  }
  for (const auto& g : sp.eq) {
    if (std::abs(g.eval_unchecked(x, none)) > feas_tol) return ExtendedReal::pos_inf();
  }
  return ExtendedReal(sp.objective.eval_unchecked(x, none));
}

/// inf over the box of L(x; λ, ν).
inline double dual_function(const StandardProblem& sp, const Vector& lambdas, const Vector& nus,
                            const SolverConfig& cfg = {}) {
  require_dim(lambdas, static_cast<Eigen::Index>(sp.ineq.size()), "dual_function lambdas");
  require_dim(nus, static_cast<Eigen::Index>(sp.eq.size()), "dual_function nus");
  for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
    if (lambdas[i] < 0.0) {
      throw NegativeMultiplierError("dual_function: lambda[" + std::to_string(i) + "] = " +
                                    std::to_string(lambdas[i]) + " is negative");
    }
  }
  Vector y(lambdas.size() + nus.size());
  y << lambdas, nus;
  double cap = cfg.multiplier_cap;
  if (y.size() > 0) cap = std::max(cap, y.cwiseAbs().maxCoeff());
  return dual_reduction(build_lagrangian(sp, cap), y, cfg).value();
}

struct LagrangianDual {
  double value = 0.0;    // max over the multiplier mesh of the dual function
  double primal = 0.0;   // min over the x-mesh of the capped sup
  Vector lambdas;
  Vector nus;
  bool boundary_warning = false;
};

/// Dual optimum of the capped Lagrangian by brute force at cfg.grid_resolution.
/// boundary_warning is set when a maximizing multiplier lies within 1% of the cap.
inline LagrangianDual lagrangian_dual(const StandardProblem& sp, const SolverConfig& cfg = {}) {
  const MinmaxProblem p = build_lagrangian(sp, cfg.multiplier_cap);
  const BruteForceResult bf = brute_force_value(p, cfg.grid_resolution);
  const auto n = static_cast<Eigen::Index>(sp.ineq.size());
  LagrangianDual out;
  out.value = bf.dual;
  out.primal = bf.primal;
  out.lambdas = bf.argmax_y.head(n);
  out.nus = bf.argmax_y.tail(bf.argmax_y.size() - n);
  for (Eigen::Index i = 0; i < bf.argmax_y.size(); ++i) {
    if (std::abs(bf.argmax_y[i]) >= 0.99 * cfg.multiplier_cap) out.boundary_warning = true;
  }
  return out;
}

}  // namespace minmax
