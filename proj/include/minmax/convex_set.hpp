#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numeric>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "minmax/types.hpp"

namespace minmax {

/// Default absolute membership tolerance.
inline constexpr double kMembershipTol = 1e-9;
/// Default cap on the number of points a mesh may contain.
inline constexpr std::size_t kDefaultPointBudget = 1'000'000;

struct ChartRange {
  double lo = 0.0;
  double hi = 0.0;
};

/// A compact convex subset of R^n: box, ball, standard simplex, convex hull of
/// finitely many vertices, or a Cartesian product of those.
///
/// Besides membership and Euclidean projection every set exposes a "chart":
/// coordinates t_0..t_{d-1} such that the admissible range of t_k given
/// t_0..t_{k-1} is an interval and chart_point(t) is affine in t. Nested
/// one-dimensional searches over the chart reach every member.
class ConvexSet {
 public:
  enum class Kind { kBox, kBall, kSimplex, kPolytope, kProduct };

  ConvexSet() : ConvexSet(point(Vector())) {}

  static ConvexSet box(Vector lo, Vector hi) {
    if (lo.size() != hi.size()) throw DimensionError("Box: lo and hi differ in length");
    if (!all_finite(lo) || !all_finite(hi)) throw DomainError("Box: bounds must be finite");
    for (Eigen::Index i = 0; i < lo.size(); ++i) {
      if (lo[i] > hi[i]) throw DomainError("Box: lo > hi on axis " + std::to_string(i));
    }
    auto rep = std::make_shared<Rep>();
    rep->kind = Kind::kBox;
    rep->dim = static_cast<int>(lo.size());
    rep->lo = std::move(lo);
    rep->hi = std::move(hi);
    return ConvexSet(std::move(rep));
  }

  static ConvexSet interval(double lo, double hi) {
    Vector l(1), h(1);
    l << lo;
    h << hi;
    return box(std::move(l), std::move(h));
  }

  /// The singleton {p}, a degenerate box. point(Vector()) is the 0-dimensional one-point set.
  static ConvexSet point(const Vector& p) { return box(p, p); }

  static ConvexSet ball(Vector center, double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("Ball: radius must be positive and finite");
    if (!all_finite(center)) throw DomainError("Ball: center must be finite");
    auto rep = std::make_shared<Rep>();
    rep->kind = Kind::kBall;
    rep->dim = static_cast<int>(center.size());
    rep->center = std::move(center);
    rep->radius = radius;
    return ConvexSet(std::move(rep));
  }

  /// Δ^n = {s in R^{n+1} : s >= 0, Σ s = 1}.
  static ConvexSet simplex(int n) {
    if (n < 0) throw DomainError("Simplex: n must be >= 0");
    auto rep = std::make_shared<Rep>();
    rep->kind = Kind::kSimplex;
    rep->dim = n + 1;
    rep->n = n;
    return ConvexSet(std::move(rep));
  }

  static ConvexSet polytope(std::vector<Point> vertices) {
    if (vertices.empty()) throw DomainError("Polytope: needs at least one vertex");
    const auto d = vertices.front().size();
    for (const auto& v : vertices) {
      if (v.size() != d) throw DimensionError("Polytope: vertices differ in dimension");
      if (!all_finite(v)) throw DomainError("Polytope: vertices must be finite");
    }
    auto rep = std::make_shared<Rep>();
    rep->kind = Kind::kPolytope;
    rep->dim = static_cast<int>(d);
    rep->vertex_matrix = Matrix(d, static_cast<Eigen::Index>(vertices.size()));
    for (std::size_t j = 0; j < vertices.size(); ++j) rep->vertex_matrix.col(static_cast<Eigen::Index>(j)) = vertices[j];
    rep->vertices = std::move(vertices);
    return ConvexSet(std::move(rep));
  }

  static ConvexSet product(std::vector<ConvexSet> factors) {
    auto rep = std::make_shared<Rep>();
    rep->kind = Kind::kProduct;
    int d = 0;
    for (const auto& f : factors) {
      rep->offsets.push_back(d);
      d += f.dim();
    }
    rep->dim = d;
    int cd = 0;
    for (const auto& f : factors) {
      rep->chart_offsets.push_back(cd);
      cd += f.chart_dim();
    }
    rep->factors = std::move(factors);
    return ConvexSet(std::move(rep));
  }

  Kind kind() const { return rep_->kind; }
  int dim() const { return rep_->dim; }

  // Shape accessors; only meaningful for the matching kind.
  const Vector& lo() const { return rep_->lo; }
  const Vector& hi() const { return rep_->hi; }
  const Vector& center() const { return rep_->center; }
  double radius() const { return rep_->radius; }
  int simplex_n() const { return rep_->n; }
  const std::vector<Point>& vertices() const { return rep_->vertices; }
  const std::vector<ConvexSet>& factors() const { return rep_->factors; }

  bool is_singleton() const {
    switch (kind()) {
      case Kind::kBox:
        return rep_->lo == rep_->hi;
      case Kind::kSimplex:
        return rep_->n == 0;
      case Kind::kPolytope:
        return std::all_of(rep_->vertices.begin(), rep_->vertices.end(),
                           [&](const Point& v) { return v == rep_->vertices.front(); });
      case Kind::kProduct:
        return std::all_of(rep_->factors.begin(), rep_->factors.end(),
                           [](const ConvexSet& f) { return f.is_singleton(); });
      case Kind::kBall:
        return false;
    }
    return false;
  }

  /// Euclidean distance from p to the set.
  double distance(const Point& p) const {
    require_dim(p, dim(), "ConvexSet::distance");
    switch (kind()) {
      case Kind::kBox: {
        double s = 0.0;
        for (int i = 0; i < dim(); ++i) {
          const double e = std::max({rep_->lo[i] - p[i], 0.0, p[i] - rep_->hi[i]});
          s += e * e;
        }
        return std::sqrt(s);
      }
      case Kind::kBall:
        return std::max(0.0, (p - rep_->center).norm() - rep_->radius);
      case Kind::kProduct: {
        double s = 0.0;
        for (std::size_t f = 0; f < rep_->factors.size(); ++f) {
          const double d = rep_->factors[f].distance(block(p, f));
          s += d * d;
        }
        return std::sqrt(s);
      }
      case Kind::kSimplex:
      case Kind::kPolytope:
        return (raw_project(p) - p).norm();
    }
    return 0.0;
  }

  bool contains(const Point& p, double tol = kMembershipTol) const { return distance(p) <= tol; }

  /// Euclidean nearest member. Points within 1e-12 of the set come back unchanged.
  Point project(const Point& p) const {
    require_dim(p, dim(), "ConvexSet::project");
    Point q = raw_project(p);
    if ((q - p).norm() <= 1e-12) return p;
    return q;
  }

  /// Number of points grid(resolution) produces (as a double to survive overflow).
  double grid_size(int resolution) const {
    if (resolution < 1) throw DomainError("grid: resolution must be >= 1");
    if (resolution == 1) return 1.0;
    switch (kind()) {
      case Kind::kBox: {
        double n = 1.0;
        for (int i = 0; i < dim(); ++i) n *= (rep_->lo[i] == rep_->hi[i]) ? 1.0 : resolution;
        return n;
      }
      case Kind::kBall:
        return dim() <= 1 ? static_cast<double>(resolution) : std::pow(static_cast<double>(resolution), dim());
      case Kind::kSimplex:
        return binomial(resolution - 1 + rep_->n, rep_->n);
      case Kind::kPolytope: {
        const int m = static_cast<int>(rep_->vertices.size());
        return binomial(resolution - 1 + m - 1, m - 1);
      }
      case Kind::kProduct: {
        double n = 1.0;
        for (const auto& f : rep_->factors) n *= f.grid_size(resolution);
        return n;
      }
    }
    return 0.0;
  }

  /// Deterministic covering mesh. Every point is a member. resolution 1 gives the centroid.
  std::vector<Point> grid(int resolution, std::size_t budget = kDefaultPointBudget) const {
    const double count = grid_size(resolution);
    if (count > static_cast<double>(budget)) {
      throw BudgetError("grid: mesh of " + describe() + " at resolution " + std::to_string(resolution) + " has " +
                        std::to_string(static_cast<long long>(count)) + " points, budget is " +
                        std::to_string(budget));
    }
    if (resolution == 1) return {centroid()};
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(count));
    switch (kind()) {
      case Kind::kBox:
        box_grid(rep_->lo, rep_->hi, resolution, out);
        break;
      case Kind::kBall: {
        const Vector lo = rep_->center.array() - rep_->radius;
        const Vector hi = rep_->center.array() + rep_->radius;
        std::vector<Point> cube;
        box_grid(lo, hi, resolution, cube);
        for (auto& p : cube) {
          if ((p - rep_->center).norm() <= rep_->radius) {
            out.push_back(std::move(p));
          } else {
            // radial projection puts the rejected corner region onto the sphere
            out.push_back(raw_project(p));
          }
        }
        break;
      }
      case Kind::kSimplex: {
        std::vector<int> parts(rep_->n + 1, 0);
        compositions(resolution - 1, 0, parts, [&](const std::vector<int>& c) {
          Point s(rep_->n + 1);
          for (int i = 0; i <= rep_->n; ++i) s[i] = static_cast<double>(c[i]) / (resolution - 1);
          out.push_back(std::move(s));
        });
        break;
      }
      case Kind::kPolytope: {
        const int m = static_cast<int>(rep_->vertices.size());
        std::vector<int> parts(m, 0);
        compositions(resolution - 1, 0, parts, [&](const std::vector<int>& c) {
          Point p = Vector::Zero(dim());
          for (int j = 0; j < m; ++j) {
            if (c[j] != 0) p += (static_cast<double>(c[j]) / (resolution - 1)) * rep_->vertices[j];
          }
          out.push_back(std::move(p));
        });
        break;
      }
      case Kind::kProduct: {
        std::vector<std::vector<Point>> meshes;
        for (const auto& f : rep_->factors) meshes.push_back(f.grid(resolution, budget));
        Point cur(dim());
        product_grid(meshes, 0, cur, out);
        break;
      }
    }
    return out;
  }

  /// A random member (uniform for boxes, balls and simplices; Dirichlet-weighted for polytopes).
  template <class Rng>
  Point sample(Rng& rng) const {
    switch (kind()) {
      case Kind::kBox: {
        Point p(dim());
        for (int i = 0; i < dim(); ++i) {
          std::uniform_real_distribution<double> u(0.0, 1.0);
          p[i] = rep_->lo[i] + (rep_->hi[i] - rep_->lo[i]) * u(rng);
        }
        return p;
      }
      case Kind::kBall: {
        std::normal_distribution<double> g(0.0, 1.0);
        Vector dir(dim());
        for (int i = 0; i < dim(); ++i) dir[i] = g(rng);
        const double nrm = dir.norm();
        if (nrm == 0.0) return rep_->center;
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double r = rep_->radius * std::pow(u(rng), 1.0 / dim());
        return rep_->center + (r / nrm) * dir;
      }
      case Kind::kSimplex:
        return dirichlet(rep_->n + 1, rng);
      case Kind::kPolytope: {
        const Vector w = dirichlet(static_cast<int>(rep_->vertices.size()), rng);
        return rep_->vertex_matrix * w;
      }
      case Kind::kProduct: {
        Point p(dim());
        for (std::size_t f = 0; f < rep_->factors.size(); ++f) {
          p.segment(rep_->offsets[f], rep_->factors[f].dim()) = rep_->factors[f].sample(rng);
        }
        return p;
      }
    }
    return Point();
  }

  Point centroid() const {
    switch (kind()) {
      case Kind::kBox:
        return 0.5 * (rep_->lo + rep_->hi);
      case Kind::kBall:
        return rep_->center;
      case Kind::kSimplex:
        return Vector::Constant(rep_->n + 1, 1.0 / (rep_->n + 1));
      case Kind::kPolytope:
        return rep_->vertex_matrix.rowwise().mean();
      case Kind::kProduct: {
        Point p(dim());
        for (std::size_t f = 0; f < rep_->factors.size(); ++f) {
          p.segment(rep_->offsets[f], rep_->factors[f].dim()) = rep_->factors[f].centroid();
        }
        return p;
      }
    }
    return Point();
  }

  /// Componentwise bounding box.
  std::pair<Vector, Vector> bounds() const {
    switch (kind()) {
      case Kind::kBox:
        return {rep_->lo, rep_->hi};
      case Kind::kBall:
        return {rep_->center.array() - rep_->radius, rep_->center.array() + rep_->radius};
      case Kind::kSimplex:
        return {Vector::Zero(dim()), Vector::Ones(dim())};
      case Kind::kPolytope:
        return {rep_->vertex_matrix.rowwise().minCoeff(), rep_->vertex_matrix.rowwise().maxCoeff()};
      case Kind::kProduct: {
        Vector lo(dim()), hi(dim());
        for (std::size_t f = 0; f < rep_->factors.size(); ++f) {
          auto [l, h] = rep_->factors[f].bounds();
          lo.segment(rep_->offsets[f], l.size()) = l;
          hi.segment(rep_->offsets[f], h.size()) = h;
        }
        return {lo, hi};
      }
    }
    return {};
  }

  double diameter_bound() const {
    auto [lo, hi] = bounds();
    return (hi - lo).norm();
  }

  /// Support function: max over members of <direction, p>, with a maximizer.
  std::pair<double, Point> support(const Vector& direction) const {
    require_dim(direction, dim(), "ConvexSet::support");
    switch (kind()) {
      case Kind::kBox: {
        Point p(dim());
        for (int i = 0; i < dim(); ++i) p[i] = direction[i] >= 0.0 ? rep_->hi[i] : rep_->lo[i];
        return {dot(direction, p), p};
      }
      case Kind::kBall: {
        const double n = direction.norm();
        Point p = n > 0.0 ? Point(rep_->center + (rep_->radius / n) * direction) : rep_->center;
        return {dot(direction, rep_->center) + rep_->radius * n, p};
      }
      case Kind::kSimplex: {
        Eigen::Index best = 0;
        direction.maxCoeff(&best);
        Point p = Vector::Zero(dim());
        p[best] = 1.0;
        return {direction[best], p};
      }
      case Kind::kPolytope: {
        std::size_t best = 0;
        double val = dot(direction, rep_->vertices[0]);
        for (std::size_t j = 1; j < rep_->vertices.size(); ++j) {
          const double v = dot(direction, rep_->vertices[j]);
          if (v > val) {
            val = v;
            best = j;
          }
        }
        return {val, rep_->vertices[best]};
      }
      case Kind::kProduct: {
        double val = 0.0;
        Point p(dim());
        for (std::size_t f = 0; f < rep_->factors.size(); ++f) {
          auto [v, q] = rep_->factors[f].support(block(direction, f));
          val += v;
          p.segment(rep_->offsets[f], q.size()) = q;
        }
        return {val, p};
      }
    }
    return {};
  }

  int chart_dim() const {
    switch (kind()) {
      case Kind::kBox: {
        int d = 0;
        for (int i = 0; i < dim(); ++i) d += rep_->lo[i] < rep_->hi[i] ? 1 : 0;
        return d;
      }
      case Kind::kBall:
        return dim();
      case Kind::kSimplex:
        return rep_->n;
      case Kind::kPolytope:
        return static_cast<int>(rep_->vertices.size()) - 1;
      case Kind::kProduct: {
        int d = 0;
        for (const auto& f : rep_->factors) d += f.chart_dim();
        return d;
      }
    }
    return 0;
  }

  /// Admissible interval for chart coordinate k given the first k coordinates.
  ChartRange chart_range(int k, std::span<const double> prefix) const {
    switch (kind()) {
      case Kind::kBox: {
        const int axis = free_axis(k);
        return {rep_->lo[axis], rep_->hi[axis]};
      }
      case Kind::kBall: {
        double used = 0.0;
        for (int j = 0; j < k; ++j) {
          const double d = prefix[j] - rep_->center[j];
          used += d * d;
        }
        const double half = std::sqrt(std::max(0.0, rep_->radius * rep_->radius - used));
        return {rep_->center[k] - half, rep_->center[k] + half};
      }
      case Kind::kSimplex:
      case Kind::kPolytope: {
        double used = 0.0;
        for (int j = 0; j < k; ++j) used += prefix[j];
        return {0.0, std::max(0.0, 1.0 - used)};
      }
      case Kind::kProduct: {
        const auto f = chart_factor(k);
        const int off = rep_->chart_offsets[f];
        return rep_->factors[f].chart_range(k - off, prefix.subspan(off, k - off));
      }
    }
    return {};
  }

  Point chart_point(std::span<const double> t) const {
    switch (kind()) {
      case Kind::kBox: {
        Point p = rep_->lo;
        int k = 0;
        for (int i = 0; i < dim(); ++i) {
          if (rep_->lo[i] < rep_->hi[i]) p[i] = t[k++];
        }
        return p;
      }
      case Kind::kBall: {
        Point p(dim());
        for (int i = 0; i < dim(); ++i) p[i] = t[i];
        return p;
      }
      case Kind::kSimplex: {
        Point p(dim());
        double used = 0.0;
        for (int i = 0; i < rep_->n; ++i) {
          p[i] = t[i];
          used += t[i];
        }
        p[rep_->n] = std::max(0.0, 1.0 - used);
        return p;
      }
      case Kind::kPolytope: {
        const int m = static_cast<int>(rep_->vertices.size());
        Point p = Vector::Zero(dim());
        double used = 0.0;
        for (int j = 0; j + 1 < m; ++j) {
          p += t[j] * rep_->vertices[j];
          used += t[j];
        }
        p += std::max(0.0, 1.0 - used) * rep_->vertices[m - 1];
        return p;
      }
      case Kind::kProduct: {
        Point p(dim());
        for (std::size_t f = 0; f < rep_->factors.size(); ++f) {
          const auto& fac = rep_->factors[f];
          p.segment(rep_->offsets[f], fac.dim()) =
              fac.chart_point(t.subspan(rep_->chart_offsets[f], fac.chart_dim()));
        }
        return p;
      }
    }
    return Point();
  }

  std::string describe() const {
    std::ostringstream os;
    switch (kind()) {
      case Kind::kBox:
        os << "Box(dim " << dim() << ")";
        break;
      case Kind::kBall:
        os << "Ball(dim " << dim() << ", radius " << rep_->radius << ")";
        break;
      case Kind::kSimplex:
        os << "Simplex(" << rep_->n << ")";
        break;
      case Kind::kPolytope:
        os << "Polytope(" << rep_->vertices.size() << " vertices in dim " << dim() << ")";
        break;
      case Kind::kProduct:
        os << "Product(";
        for (std::size_t f = 0; f < rep_->factors.size(); ++f) os << (f ? ", " : "") << rep_->factors[f].describe();
        os << ")";
        break;
    }
    return os.str();
  }

  friend bool operator==(const ConvexSet& a, const ConvexSet& b) {
    if (a.rep_ == b.rep_) return true;
    if (a.kind() != b.kind() || a.dim() != b.dim()) return false;
    switch (a.kind()) {
      case Kind::kBox:
        return a.rep_->lo == b.rep_->lo && a.rep_->hi == b.rep_->hi;
      case Kind::kBall:
        return a.rep_->center == b.rep_->center && a.rep_->radius == b.rep_->radius;
      case Kind::kSimplex:
        return a.rep_->n == b.rep_->n;
      case Kind::kPolytope:
        return a.rep_->vertex_matrix.cols() == b.rep_->vertex_matrix.cols() &&
               a.rep_->vertex_matrix == b.rep_->vertex_matrix;
      case Kind::kProduct:
        return a.rep_->factors == b.rep_->factors;
    }
    return false;
  }

 private:
  struct Rep {
    Kind kind = Kind::kBox;
    int dim = 0;
    Vector lo, hi;
    Vector center;
    double radius = 0.0;
    int n = 0;
    std::vector<Point> vertices;
    Matrix vertex_matrix;
    std::vector<ConvexSet> factors;
    std::vector<int> offsets;
    std::vector<int> chart_offsets;
  };

  explicit ConvexSet(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}

  Vector block(const Vector& p, std::size_t f) const {
    return p.segment(rep_->offsets[f], rep_->factors[f].dim());
  }

  int free_axis(int k) const {
    for (int i = 0; i < dim(); ++i) {
      if (rep_->lo[i] < rep_->hi[i] && k-- == 0) return i;
    }
    throw DimensionError("chart coordinate out of range");
  }

  std::size_t chart_factor(int k) const {
    for (std::size_t f = rep_->factors.size(); f-- > 0;) {
      if (rep_->chart_offsets[f] <= k && rep_->factors[f].chart_dim() > 0) return f;
    }
    throw DimensionError("chart coordinate out of range");
  }

  Point raw_project(const Point& p) const {
    switch (kind()) {
      case Kind::kBox:
        return p.cwiseMax(rep_->lo).cwiseMin(rep_->hi);
      case Kind::kBall: {
        const Vector d = p - rep_->center;
        const double n = d.norm();
        if (n <= rep_->radius) return p;
        return rep_->center + (rep_->radius / n) * d;
      }
      case Kind::kSimplex:
        return project_simplex(p);
      case Kind::kPolytope:
        return rep_->vertex_matrix * polytope_weights(p);
      case Kind::kProduct: {
        Point q(dim());
        for (std::size_t f = 0; f < rep_->factors.size(); ++f) {
          q.segment(rep_->offsets[f], rep_->factors[f].dim()) = rep_->factors[f].raw_project(block(p, f));
        }
        return q;
      }
    }
    return p;
  }

  /// Sorted-threshold projection onto {s >= 0, Σ s = 1}.
  static Point project_simplex(const Point& p) {
    const Eigen::Index n = p.size();
    std::vector<double> u(p.data(), p.data() + n);
    std::sort(u.begin(), u.end(), std::greater<>());
    double cum = 0.0;
    double tau = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      cum += u[j];
      const double t = (cum - 1.0) / static_cast<double>(j + 1);
      if (u[j] - t > 0.0) tau = t;
    }
    return (p.array() - tau).cwiseMax(0.0);
  }

  /// Convex-combination weights of the hull point nearest p, by Wolfe's
  /// minimum-norm-point active-set method on the vertices shifted by -p.
  Vector polytope_weights(const Point& p) const {
    const Matrix q = rep_->vertex_matrix.colwise() - p;
    const Eigen::Index m = q.cols();
    Vector w = Vector::Zero(m);
    if (m == 1) {
      w[0] = 1.0;
      return w;
    }
    const double scale = std::max(q.colwise().squaredNorm().maxCoeff(), 1e-300);
    Eigen::Index first = 0;
    q.colwise().squaredNorm().minCoeff(&first);
    std::vector<Eigen::Index> active{first};
    std::vector<double> lambda{1.0};
    Vector x = q.col(first);

    // Minimum-norm point of the affine hull of the active columns.
    auto affine_min = [&](std::vector<double>& mu) {
      const auto k = static_cast<Eigen::Index>(active.size());
      Matrix kkt = Matrix::Zero(k + 1, k + 1);
      for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = 0; b < k; ++b) kkt(a, b) = q.col(active[a]).dot(q.col(active[b]));
        kkt(a, k) = kkt(k, a) = 1.0;
      }
      Vector rhs = Vector::Zero(k + 1);
      rhs[k] = 1.0;
      const Vector sol = kkt.completeOrthogonalDecomposition().solve(rhs);
      mu.assign(sol.data(), sol.data() + k);
    };

    for (int major = 0; major < 1000; ++major) {
      Eigen::Index j = 0;
      (q.transpose() * x).minCoeff(&j);
      if (x.dot(q.col(j)) >= x.squaredNorm() - 1e-14 * scale) break;
      if (std::find(active.begin(), active.end(), j) != active.end()) break;
      active.push_back(j);
      lambda.push_back(0.0);
      for (int minor = 0; minor < 1000; ++minor) {
        std::vector<double> mu;
        affine_min(mu);
        if (*std::min_element(mu.begin(), mu.end()) > 1e-14) {
          lambda = mu;
          break;
        }
        double theta = 1.0;
        for (std::size_t a = 0; a < mu.size(); ++a) {
          if (mu[a] <= 1e-14) theta = std::min(theta, lambda[a] / (lambda[a] - mu[a]));
        }
        std::vector<Eigen::Index> keep_idx;
        std::vector<double> keep_w;
        for (std::size_t a = 0; a < mu.size(); ++a) {
          const double v = theta * mu[a] + (1.0 - theta) * lambda[a];
          if (v > 1e-14) {
            keep_idx.push_back(active[a]);
            keep_w.push_back(v);
          }
        }
        active = std::move(keep_idx);
        lambda = std::move(keep_w);
        if (active.size() <= 1) break;
      }
      const double total = std::accumulate(lambda.begin(), lambda.end(), 0.0);
      x.setZero();
      for (std::size_t a = 0; a < active.size(); ++a) {
        lambda[a] /= total;
        x += lambda[a] * q.col(active[a]);
      }
    }
    for (std::size_t a = 0; a < active.size(); ++a) w[active[a]] = lambda[a];
    return w;
  }

  static void box_grid(const Vector& lo, const Vector& hi, int resolution, std::vector<Point>& out) {
    const Eigen::Index d = lo.size();
    std::vector<int> idx(d, 0);
    std::vector<int> counts(d);
    for (Eigen::Index i = 0; i < d; ++i) counts[i] = lo[i] == hi[i] ? 1 : resolution;
    while (true) {
      Point p(d);
      for (Eigen::Index i = 0; i < d; ++i) {
        if (counts[i] == 1) {
          p[i] = lo[i];
        } else if (idx[i] == counts[i] - 1) {
          p[i] = hi[i];
        } else {
          p[i] = lo[i] + (hi[i] - lo[i]) * (static_cast<double>(idx[i]) / (resolution - 1));
        }
      }
      out.push_back(std::move(p));
      Eigen::Index axis = d - 1;
      while (axis >= 0 && ++idx[axis] == counts[axis]) {
        idx[axis] = 0;
        --axis;
      }
      if (axis < 0) break;
    }
  }

  /// Visits the compositions of `total` into parts.size() nonnegative parts,
  /// first part descending.
  template <class F>
  static void compositions(int total, std::size_t i, std::vector<int>& parts, F&& visit) {
    if (i + 1 == parts.size()) {
      parts[i] = total;
      visit(parts);
      return;
    }
    for (int k = total; k >= 0; --k) {
      parts[i] = k;
      compositions(total - k, i + 1, parts, visit);
    }
  }

  void product_grid(const std::vector<std::vector<Point>>& meshes, std::size_t f, Point& cur,
                    std::vector<Point>& out) const {
    if (f == meshes.size()) {
      out.push_back(cur);
      return;
    }
    for (const auto& q : meshes[f]) {
      cur.segment(rep_->offsets[f], q.size()) = q;
      product_grid(meshes, f + 1, cur, out);
    }
  }

  template <class Rng>
  static Vector dirichlet(int k, Rng& rng) {
    std::exponential_distribution<double> e(1.0);
    Vector w(k);
    for (int i = 0; i < k; ++i) w[i] = e(rng);
    const double s = w.sum();
    if (s <= 0.0) return Vector::Constant(k, 1.0 / k);
    return w / s;
  }

  static double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return std::round(r);
  }

  std::shared_ptr<const Rep> rep_;
};

/// Σ w_i p_i for nonnegative weights summing to one over members of `set`.
inline Point mixture(const ConvexSet& set, const std::vector<Point>& points, const std::vector<double>& weights,
                     double tol = kMembershipTol) {
  if (points.empty() || points.size() != weights.size()) {
    throw WeightError("mixture: need one weight per point and at least one point");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw WeightError("mixture: weights must be finite and nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw WeightError("mixture: weights sum to " + std::to_string(total));
  Point out = Vector::Zero(set.dim());
  for (std::size_t i = 0; i < points.size(); ++i) {
    require_dim(points[i], set.dim(), "mixture");
    if (!set.contains(points[i], tol)) {
      throw MembershipError("mixture: point " + std::to_string(i) + " lies outside " + set.describe());
    }
    out += weights[i] * points[i];
  }
  return out;
}

inline bool contains(const ConvexSet& set, const Point& p, double tol = kMembershipTol) {
  return set.contains(p, tol);
}

inline Point project(const ConvexSet& set, const Point& p) { return set.project(p); }

inline std::vector<Point> grid_sample(const ConvexSet& set, int resolution, std::size_t budget = kDefaultPointBudget) {
  return set.grid(resolution, budget);
}

}  // namespace minmax
