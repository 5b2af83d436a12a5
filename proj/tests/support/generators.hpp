#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "minmax/problem.hpp"

namespace minmax::gen {

inline Matrix random_matrix(int rows, int cols, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = u(rng);
  }
  return m;
}

inline Vector random_vector(int n, std::mt19937_64& rng, double scale = 1.0) {
  return random_matrix(n, 1, rng, scale).col(0);
}

inline Matrix random_psd(int n, std::mt19937_64& rng) {
  const Matrix a = random_matrix(n, n, rng);
  return a * a.transpose();
}

/// Box, Simplex(1) or Ball, ambient dimension 1 or 2.
inline ConvexSet random_domain(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  switch (pick(rng)) {
    case 0:
      return ConvexSet::interval(-1.0 + 0.5 * u(rng), 1.0 + 0.5 * u(rng));
    case 1: {
      Vector lo(2), hi(2);
      lo << -1.0 + 0.3 * u(rng), -0.5 + 0.3 * u(rng);
      hi << 1.0 + 0.3 * u(rng), 1.5 + 0.3 * u(rng);
      return ConvexSet::box(lo, hi);
    }
    case 2:
      return ConvexSet::simplex(1);
    case 3: {
      Vector c(2);
      c << 0.5 * u(rng), 0.5 * u(rng);
      return ConvexSet::ball(c, 1.0 + 0.25 * u(rng));
    }
    default:
      return ConvexSet::ball(Vector::Constant(1, 0.5 * u(rng)), 1.0);
  }
}

/// A payoff from the convex-concave grammar with a random mix of terms.
inline ExprPtr random_payoff(int dx, int dy, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<ExprPtr> terms;
  terms.push_back(expr::bilinear(random_matrix(dx, dy, rng, 2.0)));
  if (coin(rng)) terms.push_back(expr::quad_x(random_psd(dx, rng)));
  if (coin(rng)) terms.push_back(expr::scale(-1.0, expr::quad_y(random_psd(dy, rng))));
  if (coin(rng)) terms.push_back(expr::affine_x(random_vector(dx, rng), u(rng)));
  if (coin(rng)) terms.push_back(expr::affine_y(random_vector(dy, rng), u(rng)));
  if (coin(rng)) {
    std::vector<AffinePiece> pieces;
    for (int k = 0; k < 3; ++k) pieces.push_back({random_vector(dx, rng), u(rng)});
    terms.push_back(expr::max_affine_x(std::move(pieces)));
  }
  if (coin(rng)) {
    std::vector<AffinePiece> pieces;
    for (int k = 0; k < 3; ++k) pieces.push_back({random_vector(dy, rng), u(rng)});
    terms.push_back(expr::min_affine_y(std::move(pieces)));
  }
  if (coin(rng)) terms.push_back(expr::abs_affine_x(random_vector(dx, rng), u(rng)));
  if (dx == dy && coin(rng)) terms.push_back(expr::scale(u(rng), expr::inner_xy()));
  if (coin(rng)) terms.push_back(expr::constant(u(rng)));
  return expr::add(std::move(terms));
}

/// A validated convex-concave problem on dim <= 2 compact domains.
inline MinmaxProblem random_problem(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ConvexSet x = random_domain(rng);
  ConvexSet y = random_domain(rng);
  const int dx = x.dim(), dy = y.dim();
  return MinmaxProblem(std::move(x), std::move(y), PayoffExpr(random_payoff(dx, dy, rng), dx, dy),
                       "random-" + std::to_string(seed));
}

/// Same grammar, but odd seeds flip the quadratic terms so the problem is
/// typically neither convex in x nor concave in y. Always unchecked.
inline MinmaxProblem random_problem_any(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ConvexSet x = random_domain(rng);
  ConvexSet y = random_domain(rng);
  const int dx = x.dim(), dy = y.dim();
  ExprPtr body = random_payoff(dx, dy, rng);
  if (seed % 2 == 1) {
    body = expr::add({body, expr::scale(-2.0, expr::quad_x(random_psd(dx, rng))),
                      expr::scale(2.0, expr::quad_y(random_psd(dy, rng)))});
  }
  return MinmaxProblem::unchecked(std::move(x), std::move(y), PayoffExpr(body, dx, dy),
                                  "any-" + std::to_string(seed));
}

}  // namespace minmax::gen
