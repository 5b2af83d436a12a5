#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "minmax/lagrangian.hpp"

using namespace minmax;
using expr::mat;
using expr::vec;

namespace {

PayoffExpr x_only(ExprPtr e) { return PayoffExpr(std::move(e), 1, 0); }

/// minimize x² on [-3, 3]; with_ineq adds 1 - x <= 0, with_eq adds x - 1 = 0.
StandardProblem square_problem(bool with_ineq, bool with_eq) {
  StandardProblem sp{x_only(expr::quad_x(mat({{1}}))), {}, {}, ConvexSet::interval(-3, 3)};
  if (with_ineq) sp.ineq.push_back(x_only(expr::affine_x(vec({-1}), 1.0)));
  if (with_eq) sp.eq.push_back(x_only(expr::affine_x(vec({1}), -1.0)));
  return sp;
}

SolverConfig dual_cfg() {
  SolverConfig cfg;
  cfg.multiplier_cap = 10.0;
  cfg.grid_resolution = 401;
  return cfg;
}

}  // namespace

TEST(StandardProblem, Validation) {
  EXPECT_NO_THROW(square_problem(true, true).validate());
  StandardProblem bad = square_problem(false, false);
  bad.ineq.push_back(x_only(expr::scale(-1.0, expr::quad_x(mat({{1}})))));
  EXPECT_THROW(bad.validate(), NotConvexError);
  bad = square_problem(false, false);
  bad.eq.push_back(x_only(expr::quad_x(mat({{1}}))));
  EXPECT_THROW(bad.validate(), NotAffineError);
  bad = square_problem(false, false);
  bad.box = ConvexSet::ball(vec({0}), 1.0);
  EXPECT_THROW(bad.validate(), DomainError);
  bad = square_problem(false, false);
  bad.ineq.push_back(PayoffExpr(expr::constant(0), 1, 1));
  EXPECT_THROW(bad.validate(), DimensionError);
}

TEST(BuildLagrangian, Shape) {
  const auto p = build_lagrangian(square_problem(true, true), 10.0);
  EXPECT_EQ(p.dim_x(), 1);
  EXPECT_EQ(p.dim_y(), 2);
  EXPECT_EQ(p.y_set().lo(), vec({0, -10}));
  EXPECT_EQ(p.y_set().hi(), vec({10, 10}));
  EXPECT_DOUBLE_EQ(p(vec({0.5}), vec({2, 3})), 0.25 + 2 * 0.5 + 3 * (-0.5));
  EXPECT_THROW(build_lagrangian(square_problem(true, false), 0.0), DomainError);
  StandardProblem bad = square_problem(false, false);
  bad.ineq.push_back(x_only(expr::scale(-1.0, expr::quad_x(mat({{1}})))));
  EXPECT_THROW(build_lagrangian(bad, 10.0), InvariantError);
}

TEST(LagrangianDual, InequalityExample) {
  const auto d = lagrangian_dual(square_problem(true, false), dual_cfg());
  EXPECT_NEAR(d.value, 1.0, 1e-3);
  ASSERT_EQ(d.lambdas.size(), 1);
  EXPECT_NEAR(d.lambdas[0], 2.0, 0.05);
  EXPECT_EQ(d.nus.size(), 0);
  EXPECT_FALSE(d.boundary_warning);
}

TEST(LagrangianDual, EqualityExample) {
  const auto d = lagrangian_dual(square_problem(false, true), dual_cfg());
  EXPECT_NEAR(d.value, 1.0, 1e-3);
  ASSERT_EQ(d.nus.size(), 1);
  EXPECT_NEAR(d.nus[0], -2.0, 0.05);
  EXPECT_FALSE(d.boundary_warning);
}

TEST(LagrangianDual, NoConstraintsGivesMinimum) {
  StandardProblem sp = square_problem(false, false);
  sp.objective = x_only(expr::add({expr::quad_x(mat({{1}})), expr::affine_x(vec({-1}), 2.0)}));  // x² - x + 2
  const auto d = lagrangian_dual(sp, dual_cfg());
  EXPECT_NEAR(d.value, 1.75, 1e-4);  // 0.5 is not a mesh point
}

TEST(LagrangianDual, BoundaryWarningWhenCapIsTooSmall) {
  SolverConfig cfg = dual_cfg();
  cfg.multiplier_cap = 1.0;
  EXPECT_TRUE(lagrangian_dual(square_problem(true, false), cfg).boundary_warning);
}

TEST(SupMultipliers, Examples) {
  const auto sp = square_problem(true, false);
  EXPECT_EQ(sup_multipliers(sp, vec({2})), ExtendedReal::finite(4.0));
  EXPECT_TRUE(sup_multipliers(sp, vec({0})).is_pos_inf());
  EXPECT_EQ(sup_multipliers(sp, vec({1})), ExtendedReal::finite(1.0));
  EXPECT_THROW(sup_multipliers(sp, vec({5})), MembershipError);
  const auto eq = square_problem(false, true);
  EXPECT_EQ(sup_multipliers(eq, vec({1})), ExtendedReal::finite(1.0));
  EXPECT_TRUE(sup_multipliers(eq, vec({1.1})).is_pos_inf());
}

TEST(SupMultipliers, CappedSupGrowsWithViolation) {
  const auto sp = square_problem(true, false);
  for (double cap : {5.0, 50.0}) {
    const auto p = build_lagrangian(sp, cap);
    for (double x : {-2.0, -0.5, 0.5}) {
      const double numeric = primal_reduction(p, vec({x})).value();
      EXPECT_GE(numeric, x * x + cap * (1.0 - x) - 1e-6);
    }
  }
}

TEST(DualFunction, Examples) {
  const auto sp = square_problem(true, false);
  EXPECT_NEAR(dual_function(sp, vec({2}), Vector()), 1.0, 1e-9);
  EXPECT_NEAR(dual_function(sp, vec({0}), Vector()), 0.0, 1e-9);
  EXPECT_NEAR(dual_function(sp, vec({4}), Vector()), 0.0, 1e-9);
  EXPECT_THROW(dual_function(sp, vec({-1}), Vector()), NegativeMultiplierError);
  EXPECT_THROW(dual_function(sp, vec({1, 2}), Vector()), DimensionError);
}

TEST(DualFunction, WeakDualityAndConcavity) {
  const auto sp = square_problem(true, true);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lam(0.0, 6.0), nu(-6.0, 6.0), xs(-3.0, 3.0);
  // The only feasible point is x = 1.
  for (int k = 0; k < 50; ++k) {
    EXPECT_LE(dual_function(sp, vec({lam(rng)}), vec({nu(rng)})), 1.0 + 1e-6);
  }
  int passed = 0;
  for (int k = 0; k < 100; ++k) {
    const Vector a(vec({lam(rng), nu(rng)})), b(vec({lam(rng), nu(rng)}));
    const Vector m = 0.5 * (a + b);
    const double gm = dual_function(sp, m.head(1), m.tail(1));
    const double ga = dual_function(sp, a.head(1), a.tail(1)), gb = dual_function(sp, b.head(1), b.tail(1));
    if (gm >= 0.5 * (ga + gb) - 1e-6) ++passed;
  }
  EXPECT_EQ(passed, 100);
}
