// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "minmax/geometry.hpp"
#include "minmax/lagrangian.hpp"
#include "minmax/legendre.hpp"
#include "minmax/solver.hpp"
#include "support/generators.hpp"
#include "support/problems.hpp"

using namespace minmax;
using expr::mat;
using expr::vec;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& check) {
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("threw: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// ---- criterion 1 ----

Outcome random_strong_duality() {
  const auto start = std::chrono::steady_clock::now();
  double worst_gap = 0.0, worst_bound = 0.0;
  int bad = 0;
  for (std::uint64_t seed = 1000; seed < 1050; ++seed) {
    const MinmaxProblem p = gen::random_problem(seed);
    const EquilibriumResult r = solve_saddle(p);
    worst_gap = std::max(worst_gap, r.gap);
    if (!(r.gap <= 1e-3) || r.gap < -1e-9) ++bad;
    // The reported values must bound L at the returned points on an independent sample.
    std::mt19937_64 rng(seed);
    for (int k = 0; k < 200; ++k) {
      const double over = p(r.x_star, p.y_set().sample(rng)) - r.primal_value;
      const double under = r.dual_value - p(p.x_set().sample(rng), r.y_star);
      worst_bound = std::max({worst_bound, over, under});
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool ok = bad == 0 && worst_bound <= 1e-6 && secs <= 60.0;
  std::ostringstream os;
  os << "50 problems, worst gap " << worst_gap << ", worst sampled bound excess " << worst_bound << ", " << secs
     << " s";
  return {ok, os.str()};
}

// ---- criterion 2 ----

Outcome weak_duality_mesh() {
  int checked = 0, bad = 0;
  auto check = [&](const MinmaxProblem& p) {
    for (int res : {11, 21}) {
      const BruteForceResult bf = brute_force_value(p, res);
      ++checked;
      if (!(bf.primal >= bf.dual)) ++bad;
    }
  };
  for (std::uint64_t seed = 0; seed < 100; ++seed) check(gen::random_problem_any(seed));
  for (std::uint64_t seed = 1000; seed < 1050; ++seed) check(gen::random_problem(seed));
  check(fixtures::square_gap());
  return {bad == 0, std::to_string(checked) + " mesh checks, " + std::to_string(bad) + " violations"};
}

// ---- criterion 3 ----

Outcome gap_witness() {
  const double gap = duality_gap(fixtures::square_gap());
  return {std::abs(gap - 0.25) <= 1e-3, fmt("gap %.6f", gap)};
}

// ---- criterion 4 ----

SampledFunction on_interval(double lo, double hi, int n, double (*fn)(double)) {
  return sample_function(ConvexSet::interval(lo, hi), [fn](const Point& p) { return fn(p[0]); }, n);
}

Outcome biconjugation() {
  double (*const convex[])(double) = {[](double x) { return 0.5 * x * x; }, [](double x) { return std::abs(x); },
                                      [](double x) { return std::max(x, -2 * x + 1); }};
  double worst = 0.0;
  for (auto fn : convex) {
    const SampledFunction f = on_interval(-3, 3, 401, fn);
    const SampledFunction g = biconjugate(f, ConvexSet::interval(-4, 4), 401);
    for (std::size_t i = 1; i + 1 < f.mesh.size(); ++i) {
      worst = std::max(worst, std::abs(g.values[i].to_double() - f.values[i].to_double()));
    }
  }
  const SampledFunction h = on_interval(-1, 1, 401, [](double x) { return -std::abs(x); });
  const SampledFunction hb = biconjugate(h, ConvexSet::interval(-2, 2), 401);
  double off_const = 0.0, above = -INFINITY;
  for (std::size_t i = 0; i < h.mesh.size(); ++i) {
    off_const = std::max(off_const, std::abs(hb.values[i].to_double() + 1.0));
    above = std::max(above, hb.values[i].to_double() - h.values[i].to_double());
  }
  const bool ok = worst <= 1e-2 && off_const <= 1e-2 && above <= 0.0;
  std::ostringstream os;
  os << "convex interior deviation " << worst << "; -|x|: distance from -1 " << off_const << ", max(f** - f) "
     << above;
  return {ok, os.str()};
}

// ---- criterion 5 ----

Outcome f0_strong_duality() {
  double (*const fns[])(double) = {[](double x) { return x * x; }, [](double x) { return std::abs(x); },
                                   [](double x) { return x; }};
  SolverConfig cfg;
  cfg.tol = 1e-4;
  double worst = 0.0;
  for (auto fn : fns) {
    const StrongDualityReport r = check_f0_strong_duality(on_interval(-2, 2, 401, fn), 8.0, cfg);
    worst = std::max(worst, std::abs(r.lhs - r.rhs));
  }
  return {worst <= 1e-4, fmt("worst |lhs - rhs| %.3e", worst)};
}

// ---- criterion 6 ----

PayoffExpr x_only(ExprPtr e) { return PayoffExpr(std::move(e), 1, 0); }

Outcome lagrangian_duality() {
  SolverConfig cfg;
  cfg.grid_resolution = 401;
  cfg.multiplier_cap = 10.0;
  StandardProblem ineq{x_only(expr::quad_x(mat({{1}}))), {}, {}, ConvexSet::interval(-3, 3)};
  ineq.ineq.push_back(x_only(expr::affine_x(vec({-1}), 1.0)));
  StandardProblem eq{x_only(expr::quad_x(mat({{1}}))), {}, {}, ConvexSet::interval(-3, 3)};
  eq.eq.push_back(x_only(expr::affine_x(vec({1}), -1.0)));
  const LagrangianDual a = lagrangian_dual(ineq, cfg);
  const LagrangianDual b = lagrangian_dual(eq, cfg);
  const bool ok = std::abs(a.value - 1.0) <= 1e-3 && a.lambdas.size() == 1 && std::abs(a.lambdas[0] - 2.0) <= 0.05 &&
                  std::abs(b.value - 1.0) <= 1e-3 && b.nus.size() == 1 && std::abs(b.nus[0] + 2.0) <= 0.05;
  std::ostringstream os;
  os << "inequality " << a.value << " at lambda " << (a.lambdas.size() ? a.lambdas[0] : NAN) << "; equality "
     << b.value << " at nu " << (b.nus.size() ? b.nus[0] : NAN);
  return {ok, os.str()};
}

// ---- criterion 7 ----

Outcome separating_hyperplanes() {
  const Hyperplane h = separate_compact(ConvexSet::ball(vec({-2, 0}), 1.0), ConvexSet::ball(vec({2, 0}), 1.0));
  bool ok = std::abs(h.v[0] - 1.0) <= 1e-3 && std::abs(h.v[1]) <= 1e-3 && std::abs(h.alpha) <= 1e-3 &&
            std::abs(h.margin - 1.0) <= 1e-3;
  bool raised = false;
  try {
    separate_compact(ConvexSet::ball(vec({-0.5, 0}), 1.0), ConvexSet::ball(vec({0.5, 0}), 1.0));
  } catch (const NotSeparableError&) {
    raised = true;
  }
  auto lower = [](int i) { return ConvexSet::box(vec({-1.0 * i, -1.0 * i}), vec({1.0 * i, 0.0})); };
  auto upper = [](int i) { return ConvexSet::box(vec({-1.0 * i, 1.0}), vec({1.0 * i, 1.0 * i + 1.0})); };
  const Hyperplane g = separate_general(lower, upper, 2, 5);
  ok = ok && raised && std::abs(g.v[0]) <= 1e-3 && std::abs(g.v[1] - 1.0) <= 1e-3;
  std::ostringstream os;
  os << "balls v (" << h.v[0] << ", " << h.v[1] << ") alpha " << h.alpha << " margin " << h.margin
     << "; overlap " << (raised ? "NotSeparable" : "separated") << "; halfplanes v (" << g.v[0] << ", " << g.v[1]
     << ")";
  return {ok, os.str()};
}

// ---- criterion 8 ----

Outcome structural_laws() {
  std::vector<std::string> broken;

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const MinmaxProblem p = gen::random_problem(seed);
    const MinmaxProblem dd = dual_problem(dual_problem(p));
    if (!(dd == p) || dd.payoff().root() != p.payoff().root()) {
      broken.push_back("dual involution");
      break;
    }
  }

  bool unit_ok = true;
  for (std::uint64_t seed = 0; seed < 10 && unit_ok; ++seed) {
    const MinmaxProblem p = gen::random_problem(seed);
    const MinmaxProblem left = tensor(MinmaxProblem::unit(), p), right = tensor(p, MinmaxProblem::unit());
    std::mt19937_64 rng(seed);
    for (int k = 0; k < 100; ++k) {
      const Point x = p.x_set().sample(rng), y = p.y_set().sample(rng);
      if (left(x, y) != p(x, y) || right(x, y) != p(x, y)) unit_ok = false;
    }
  }
  if (!unit_ok) broken.push_back("tensor unit");

  double additivity = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const MinmaxProblem p = gen::random_problem(2 * seed + 50), q = gen::random_problem(2 * seed + 51);
    const MinmaxProblem t = tensor(p, q);
    std::mt19937_64 rng(seed);
    for (int k = 0; k < 3; ++k) {
      const Point x = p.x_set().sample(rng), xq = q.x_set().sample(rng);
      const Point y = p.y_set().sample(rng), yq = q.y_set().sample(rng);
      Vector xs(x.size() + xq.size()), ys(y.size() + yq.size());
      xs << x, xq;
      ys << y, yq;
      additivity = std::max(additivity, std::abs(primal_reduction(t, xs).value() -
                                                 primal_reduction(p, x).value() - primal_reduction(q, xq).value()));
      additivity = std::max(additivity, std::abs(dual_reduction(t, ys).value() - dual_reduction(p, y).value() -
                                                 dual_reduction(q, yq).value()));
    }
  }
  if (!(additivity <= 1e-6)) broken.push_back("tensor additivity " + fmt("%.2e", additivity));

  bool identity_ok = true;
  for (std::uint64_t seed = 30; seed < 33; ++seed) {
    const MinmaxProblem p = gen::random_problem(seed);
    const MinmaxProblem q = pushforward_min(p, AffineMap::identity(p.dim_x()), p.x_set());
    for (const auto& x : p.x_set().grid(11)) {
      for (const auto& y : p.y_set().grid(5)) identity_ok = identity_ok && q(x, y) == p(x, y);
    }
  }
  if (!identity_ok) broken.push_back("pushforward identity");

  int midpoint_pass = 0, midpoint_total = 0;
  {
    std::mt19937_64 rng(77);
    const MinmaxProblem p(ConvexSet::box(vec({-1, -1}), vec({1, 1})), ConvexSet::interval(0, 1),
                          PayoffExpr(gen::random_payoff(2, 1, rng), 2, 1));
    const MinmaxProblem q = pushforward_min(p, AffineMap(mat({{1, 1}}), vec({0})), ConvexSet::interval(-2, 2));
    const ConvexitySuiteReport rep = midpoint_convexity_suite(q, 100, 77, 1e-6);
    midpoint_pass = rep.passed;
    midpoint_total = rep.total;
  }
  if (midpoint_pass != 100 || midpoint_total != 100) broken.push_back("midpoint convexity");

  SolverConfig bc;
  bc.tol = 1e-3;
  bc.grid_resolution = 21;
  const bool product = check_bc_product_stability(fixtures::bilinear(), ConvexSet::interval(0, 1),
                                                  ConvexSet::interval(0, 1), fixtures::bilinear_payoff(), bc);
  if (!product) broken.push_back("product stability");

  std::ostringstream os;
  os << "additivity " << additivity << ", midpoint " << midpoint_pass << "/" << midpoint_total;
  for (const auto& b : broken) os << "; broken: " << b;
  return {broken.empty(), os.str()};
}

// ---- criterion 9 ----

Outcome fiber_decomposition() {
  // E = [0, 1]², L((e1, e2), a) = e1² + e2 (1 - a), pushed along the first coordinate.
  const MinmaxProblem p(ConvexSet::box(vec({0, 0}), vec({1, 1})), ConvexSet::interval(0, 1),
                        PayoffExpr(expr::add({expr::quad_x(mat({{1, 0}, {0, 0}})), expr::affine_x(vec({0, 1}), 0.0),
                                              expr::bilinear(mat({{0}, {-1}}))}),
                                   2, 1));
  SolverConfig cfg;
  cfg.tol = 1e-3;
  const FiberSolveResult r = solve_by_fibers(p, AffineMap(mat({{1, 0}}), vec({0})), ConvexSet::interval(0, 1), cfg);
  const double diff = std::abs(r.value - r.direct);
  std::ostringstream os;
  os << "fibers " << r.value << ", direct " << r.direct;
  return {diff <= 1e-3 && r.matches_direct, os.str()};
}

// ---- criterion 10 ----

std::string capture(const std::string& cmd, int& status) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    status = -1;
    return out;
  }
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  status = pclose(pipe);
  return out;
}

Outcome cli_determinism() {
  const std::string data = MINMAX_DATA_DIR;
  const std::vector<std::string> jobs = {
      "solve --seed 7 " + data + "/saddle_quadratic.json",
      "solve --seed 7 " + data + "/bilinear.json",
      "gap --allow-invalid --seed 7 " + data + "/nonconcave.json",
      "biconjugate --seed 7 " + data + "/half_square.json",
      "lagrangian --seed 7 " + data + "/lagrangian_ineq.json",
      "separate --seed 7 " + data + "/balls.json",
      "pushforward --seed 7 " + data + "/pushforward.json",
  };
  int runs = 0;
  std::vector<std::string> differing;
  for (const auto& job : jobs) {
    const std::string base = std::string("\"") + MINMAX_CLI_PATH + "\" " + job + " 2>/dev/null";
    int status = 0;
    const std::string first = capture(base, status);
    ++runs;
    bool same = status == 0 && !first.empty();
    for (int k = 1; k < 5; ++k, ++runs) same = same && capture(base, status) == first;
    for (const char* threads : {"1", "4"}) {
      same = same && capture(std::string("MINMAX_THREADS=") + threads + " " + base, status) == first;
      ++runs;
    }
    if (!same) differing.push_back(job.substr(0, job.find(' ')));
  }
  std::ostringstream os;
  os << runs << " runs over " << jobs.size() << " documents";
  for (const auto& d : differing) os << "; differs: " << d;
  return {differing.empty(), os.str()};
}

}  // namespace

int main() {
  report(1, "strong duality on random problems", random_strong_duality);
  report(2, "weak duality on the mesh", weak_duality_mesh);
  report(3, "gap witness (x-y)^2", gap_witness);
  report(4, "biconjugation", biconjugation);
  report(5, "f|0 strong duality", f0_strong_duality);
  report(6, "lagrangian duality", lagrangian_duality);
  report(7, "separating hyperplanes", separating_hyperplanes);
  report(8, "structural laws", structural_laws);
  report(9, "fiber decomposition", fiber_decomposition);
  report(10, "CLI determinism", cli_determinism);
  return failures == 0 ? 0 : 1;
}
