#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "minmax/convex_set.hpp"
#include "minmax/extended_real.hpp"
#include "minmax/lagrangian.hpp"
#include "minmax/legendre.hpp"
#include "minmax/payoff_expr.hpp"
#include "minmax/problem.hpp"
#include "minmax/solver.hpp"

namespace minmax::io {

using Json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";

// ---- numbers -------------------------------------------------------------

/// Finite numbers stay numbers; infinities become "+inf" / "-inf".
inline Json number_to_json(double v) {
  if (std::isnan(v)) throw DomainError("cannot serialize NaN");
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return v;
}

inline Json number_to_json(const ExtendedReal& v) { return number_to_json(v.to_double()); }

inline double number_from_json(const Json& j, const std::string& where, bool allow_inf = false) {
  if (j.is_number()) return j.get<double>();
  if (allow_inf && j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "+inf" || s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw SchemaError(where + ": expected a number");
}

inline Json vector_to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number_to_json(v[i]));
  return a;
}

inline Vector vector_from_json(const Json& j, const std::string& where, bool allow_inf = false) {
  if (!j.is_array()) throw SchemaError(where + ": expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = number_from_json(j[i], where + "[" + std::to_string(i) + "]", allow_inf);
  }
  return v;
}

inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vector_to_json(m.row(r).transpose()));
  return rows;
}

inline Matrix matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": expected a row-major array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows ? static_cast<Eigen::Index>(j[0].is_array() ? j[0].size() : 0) : 0;
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Vector row = vector_from_json(j[static_cast<std::size_t>(r)], where + "[" + std::to_string(r) + "]");
    if (row.size() != cols) throw SchemaError(where + ": ragged matrix rows");
    m.row(r) = row.transpose();
  }
  return m;
}

inline const Json& field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw SchemaError(where + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(where + ": missing field '" + key + "'");
  return *it;
}

// ---- sets ------------------------------------------------------------------

inline ConvexSet set_from_json(const Json& j, const std::string& where = "set") {
  const auto type = field(j, "type", where).get<std::string>();
  if (type == "box") {
    return ConvexSet::box(vector_from_json(field(j, "lo", where), where + ".lo"),
                          vector_from_json(field(j, "hi", where), where + ".hi"));
  }
  if (type == "interval") {
    return ConvexSet::interval(number_from_json(field(j, "lo", where), where + ".lo"),
                               number_from_json(field(j, "hi", where), where + ".hi"));
  }
  if (type == "point") return ConvexSet::point(vector_from_json(field(j, "coords", where), where + ".coords"));
  if (type == "ball") {
    return ConvexSet::ball(vector_from_json(field(j, "center", where), where + ".center"),
                           number_from_json(field(j, "radius", where), where + ".radius"));
  }
  if (type == "simplex") return ConvexSet::simplex(field(j, "n", where).get<int>());
  if (type == "polytope") {
    std::vector<Point> verts;
    const Json& vs = field(j, "vertices", where);
    if (!vs.is_array()) throw SchemaError(where + ".vertices: expected an array");
    for (std::size_t i = 0; i < vs.size(); ++i) {
      verts.push_back(vector_from_json(vs[i], where + ".vertices[" + std::to_string(i) + "]"));
    }
    return ConvexSet::polytope(std::move(verts));
  }
  if (type == "product") {
    std::vector<ConvexSet> fs;
    const Json& arr = field(j, "factors", where);
    if (!arr.is_array()) throw SchemaError(where + ".factors: expected an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      fs.push_back(set_from_json(arr[i], where + ".factors[" + std::to_string(i) + "]"));
    }
    return ConvexSet::product(std::move(fs));
  }
  throw SchemaError(where + ": unknown set type '" + type + "'");
}

inline Json set_to_json(const ConvexSet& s) {
  switch (s.kind()) {
    case ConvexSet::Kind::kBox:
      return {{"type", "box"}, {"lo", vector_to_json(s.lo())}, {"hi", vector_to_json(s.hi())}};
    case ConvexSet::Kind::kBall:
      return {{"type", "ball"}, {"center", vector_to_json(s.center())}, {"radius", s.radius()}};
    case ConvexSet::Kind::kSimplex:
      return {{"type", "simplex"}, {"n", s.simplex_n()}};
    case ConvexSet::Kind::kPolytope: {
      Json vs = Json::array();
      for (const auto& v : s.vertices()) vs.push_back(vector_to_json(v));
      return {{"type", "polytope"}, {"vertices", vs}};
    }
    case ConvexSet::Kind::kProduct: {
      Json fs = Json::array();
      for (const auto& f : s.factors()) fs.push_back(set_to_json(f));
      return {{"type", "product"}, {"factors", fs}};
    }
  }
  return {};
}

// ---- expressions -------------------------------------------------------------

inline AffinePiece piece_from_json(const Json& j, const std::string& where) {
  return {vector_from_json(field(j, "coeffs", where), where + ".coeffs"),
          number_from_json(j.contains("offset") ? j["offset"] : Json(0.0), where + ".offset")};
}

inline Json piece_to_json(const AffinePiece& p) {
  return {{"coeffs", vector_to_json(p.coeffs)}, {"offset", p.offset}};
}

inline ExprPtr expr_from_json(const Json& j, const std::string& where = "payoff") {
  const auto op = field(j, "op", where).get<std::string>();
  auto sub = [&](const char* key) { return expr_from_json(field(j, key, where), where + "." + key); };
  if (op == "const") return expr::constant(number_from_json(field(j, "value", where), where + ".value"));
  if (op == "xvar") return expr::x_var(field(j, "index", where).get<int>());
  if (op == "yvar") return expr::y_var(field(j, "index", where).get<int>());
  if (op == "add") {
    const Json& terms = field(j, "terms", where);
    if (!terms.is_array()) throw SchemaError(where + ".terms: expected an array");
    std::vector<ExprPtr> ts;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      ts.push_back(expr_from_json(terms[i], where + ".terms[" + std::to_string(i) + "]"));
    }
    return expr::add(std::move(ts));
  }
  if (op == "scale") return expr::scale(number_from_json(field(j, "factor", where), where + ".factor"), sub("arg"));
  if (op == "affine_x" || op == "affine_y" || op == "abs_affine_x") {
    AffinePiece p = piece_from_json(j, where);
    if (op == "affine_x") return expr::affine_x(std::move(p.coeffs), p.offset);
    if (op == "affine_y") return expr::affine_y(std::move(p.coeffs), p.offset);
    return expr::abs_affine_x(std::move(p.coeffs), p.offset);
  }
  if (op == "quad_x") return expr::quad_x(matrix_from_json(field(j, "Q", where), where + ".Q"));
  if (op == "quad_y") return expr::quad_y(matrix_from_json(field(j, "Q", where), where + ".Q"));
  if (op == "bilinear") return expr::bilinear(matrix_from_json(field(j, "Q", where), where + ".Q"));
  if (op == "max_affine_x" || op == "min_affine_y") {
    const Json& ps = field(j, "pieces", where);
    if (!ps.is_array()) throw SchemaError(where + ".pieces: expected an array");
    std::vector<AffinePiece> pieces;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      pieces.push_back(piece_from_json(ps[i], where + ".pieces[" + std::to_string(i) + "]"));
    }
    return op == "max_affine_x" ? expr::max_affine_x(std::move(pieces)) : expr::min_affine_y(std::move(pieces));
  }
  if (op == "inner_xy") return expr::inner_xy();
  if (op == "dual") return expr::dual(sub("arg"));
  throw SchemaError(where + ": unknown expression op '" + op + "'");
}

inline Json expr_to_json(const ExprNode& n) {
  switch (n.kind) {
    case ExprKind::kConst:
      return {{"op", "const"}, {"value", n.value}};
    case ExprKind::kXVar:
      return {{"op", "xvar"}, {"index", n.index}};
    case ExprKind::kYVar:
      return {{"op", "yvar"}, {"index", n.index}};
    case ExprKind::kAdd: {
      Json ts = Json::array();
      for (const auto& c : n.children) ts.push_back(expr_to_json(*c));
      return {{"op", "add"}, {"terms", ts}};
    }
    case ExprKind::kScale:
      return {{"op", "scale"}, {"factor", n.value}, {"arg", expr_to_json(*n.children[0])}};
    case ExprKind::kAffineX:
    case ExprKind::kAffineY:
    case ExprKind::kAbsAffineX: {
      Json j = piece_to_json(n.piece);
      j["op"] = expr::kind_name(n.kind);
      return j;
    }
    case ExprKind::kQuadX:
    case ExprKind::kQuadY:
    case ExprKind::kBilinear:
      return {{"op", expr::kind_name(n.kind)}, {"Q", matrix_to_json(n.q)}};
    case ExprKind::kMaxAffineX:
    case ExprKind::kMinAffineY: {
      Json ps = Json::array();
      for (const auto& p : n.pieces) ps.push_back(piece_to_json(p));
      return {{"op", expr::kind_name(n.kind)}, {"pieces", ps}};
    }
    case ExprKind::kInnerXY:
      return {{"op", "inner_xy"}};
    case ExprKind::kDual:
      return {{"op", "dual"}, {"arg", expr_to_json(*n.children[0])}};
    case ExprKind::kNative:
      throw SchemaError("payoff '" + n.native->label + "' is library-built and has no JSON form");
  }
  return {};
}

/// Parses an expression tree and checks it against (dim_x, dim_y).
inline PayoffExpr payoff_from_json(const Json& j, int dim_x, int dim_y, const std::string& where = "payoff") {
  ExprPtr root = expr_from_json(j, where);
  try {
    return PayoffExpr(std::move(root), dim_x, dim_y);
  } catch (const DimensionError& e) {
    throw SchemaError(where + ": bad dimensions: " + e.what());
  } catch (const DomainError& e) {
    throw SchemaError(where + ": " + e.what());
  }
}

// ---- documents ---------------------------------------------------------------

/// Optional SolverConfig overrides carried by a document.
struct SolverOverrides {
  std::optional<Method> method;
  std::optional<int> max_iter;
  std::optional<double> tol;
  std::optional<int> resolution;
  std::optional<double> fd_step;
  std::optional<std::uint64_t> seed;
  std::optional<double> cap;

  SolverConfig apply(SolverConfig c) const {
    if (method) c.method = *method;
    if (max_iter) c.max_iter = *max_iter;
    if (tol) c.tol = *tol;
    if (resolution) c.grid_resolution = *resolution;
    if (fd_step) c.fd_step = *fd_step;
    if (seed) c.seed = *seed;
    if (cap) c.multiplier_cap = *cap;
    return c;
  }

  friend bool operator==(const SolverOverrides&, const SolverOverrides&) = default;
};

inline Method method_from_string(const std::string& s) {
  if (s == "pgda") return Method::kPgda;
  if (s == "grid") return Method::kGrid;
  throw SchemaError("unknown solver method '" + s + "' (expected pgda or grid)");
}

struct PushforwardSpec {
  AffineMap map;
  ConvexSet base;
};

struct MinmaxBody {
  MinmaxProblem problem;
  bool allow_invalid = false;
  std::optional<PushforwardSpec> pushforward;
};

struct FunctionBody {
  SampledFunction function;
  std::optional<ConvexSet> dual_box;
};

/// Compact sets, or boxes with infinite bounds truncated to [-i, i]^k.
struct SeparationBody {
  struct Side {
    std::optional<ConvexSet> compact;
    Vector lo, hi;  // used when `compact` is empty

    ConvexSet at(int i) const {
      if (compact) return *compact;
      Vector l = lo.cwiseMax(-static_cast<double>(i));
      Vector h = hi.cwiseMin(static_cast<double>(i));
      return ConvexSet::box(std::move(l), std::move(h));
    }
    int dim() const { return compact ? compact->dim() : static_cast<int>(lo.size()); }
  };
  Side x, y;
  std::optional<int> max_i;

  bool exhaustion() const { return max_i.has_value() || !x.compact || !y.compact; }
};

struct ProblemDocument {
  std::string schema_version = kSchemaVersion;
  std::string kind;
  std::variant<std::monostate, MinmaxBody, StandardProblem, FunctionBody, SeparationBody> body;
  SolverOverrides solver;
};

inline SolverOverrides overrides_from_json(const Json& j) {
  SolverOverrides o;
  if (!j.is_object()) throw SchemaError("solver: expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    const Json& v = it.value();
    if (k == "method") {
      o.method = method_from_string(v.get<std::string>());
    } else if (k == "max_iter") {
      o.max_iter = v.get<int>();
    } else if (k == "tol") {
      o.tol = number_from_json(v, "solver.tol");
    } else if (k == "resolution" || k == "grid_resolution") {
      o.resolution = v.get<int>();
    } else if (k == "fd_step") {
      o.fd_step = number_from_json(v, "solver.fd_step");
    } else if (k == "seed") {
      o.seed = v.get<std::uint64_t>();
    } else if (k == "cap" || k == "multiplier_cap") {
      o.cap = number_from_json(v, "solver.cap");
    } else {
      throw SchemaError("solver: unknown field '" + k + "'");
    }
  }
  return o;
}

inline Json overrides_to_json(const SolverOverrides& o) {
  Json j = Json::object();
  if (o.method) j["method"] = method_name(*o.method);
  if (o.max_iter) j["max_iter"] = *o.max_iter;
  if (o.tol) j["tol"] = *o.tol;
  if (o.resolution) j["resolution"] = *o.resolution;
  if (o.fd_step) j["fd_step"] = *o.fd_step;
  if (o.seed) j["seed"] = *o.seed;
  if (o.cap) j["cap"] = *o.cap;
  return j;
}

namespace detail {

inline std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline SeparationBody::Side side_from_json(const Json& j, const std::string& where) {
  SeparationBody::Side s;
  if (field(j, "type", where).get<std::string>() == "box") {
    s.lo = vector_from_json(field(j, "lo", where), where + ".lo", true);
    s.hi = vector_from_json(field(j, "hi", where), where + ".hi", true);
    if (all_finite(s.lo) && all_finite(s.hi)) {
      s.compact = ConvexSet::box(s.lo, s.hi);
    } else if (s.lo.size() != s.hi.size()) {
      throw SchemaError(where + ": lo and hi differ in length");
    }
    return s;
  }
  s.compact = set_from_json(j, where);
  return s;
}

inline Json side_to_json(const SeparationBody::Side& s) {
  if (s.compact) return set_to_json(*s.compact);
  return {{"type", "box"}, {"lo", vector_to_json(s.lo)}, {"hi", vector_to_json(s.hi)}};
}

inline std::vector<PayoffExpr> x_only_list(const Json& body, const char* key, int dim) {
  std::vector<PayoffExpr> out;
  if (!body.contains(key)) return out;
  const Json& arr = body[key];
  if (!arr.is_array()) throw SchemaError(std::string("body.") + key + ": expected an array");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(payoff_from_json(arr[i], dim, 0, std::string("body.") + key + "[" + std::to_string(i) + "]"));
  }
  return out;
}

}  // namespace detail

/// Parses and validates a problem document. Convexity sampling uses the
/// document's solver seed (default 0). `allow_invalid` skips the minmax
/// convex/concave check.
inline ProblemDocument parse_problem(const std::string& text, bool allow_invalid = false) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = detail::line_column(text, e.byte);
    std::string msg = e.what();
    if (auto pos = msg.find("parse error"); pos != std::string::npos) msg = msg.substr(pos);
    throw ParseError("malformed JSON (" + msg + ")", line, col);
  }
  try {
    ProblemDocument doc;
    doc.schema_version = field(j, "schema_version", "document").get<std::string>();
    if (doc.schema_version != kSchemaVersion) {
      throw SchemaError("document: unsupported schema_version '" + doc.schema_version + "'");
    }
    doc.kind = field(j, "kind", "document").get<std::string>();
    if (j.contains("solver")) doc.solver = overrides_from_json(j["solver"]);
    const std::uint64_t seed = doc.solver.seed.value_or(0);
    const Json& body = field(j, "body", "document");
    if (!body.is_object()) throw SchemaError("body: expected an object");

    if (doc.kind == "minmax") {
      const ConvexSet xs = set_from_json(field(body, "X", "body"), "body.X");
      const ConvexSet ys = set_from_json(field(body, "Y", "body"), "body.Y");
      PayoffExpr payoff = payoff_from_json(field(body, "payoff", "body"), xs.dim(), ys.dim(), "body.payoff");
      const std::string label = body.contains("label") ? body["label"].get<std::string>() : std::string("problem");
      const bool bypass = allow_invalid || body.value("allow_invalid", false);
      ValidationOptions vo;
      vo.seed = seed;
      MinmaxBody mb{bypass ? MinmaxProblem::unchecked(xs, ys, std::move(payoff), label)
                           : MinmaxProblem(xs, ys, std::move(payoff), label, vo),
                    body.value("allow_invalid", false), std::nullopt};
      if (body.contains("pushforward")) {
        const Json& pf = body["pushforward"];
        const Json& map = field(pf, "map", "body.pushforward");
        Matrix m = matrix_from_json(field(map, "matrix", "body.pushforward.map"), "body.pushforward.map.matrix");
        Vector off = map.contains("offset") ? vector_from_json(map["offset"], "body.pushforward.map.offset")
                                            : Vector(Vector::Zero(m.rows()));
        ConvexSet base = set_from_json(field(pf, "base", "body.pushforward"), "body.pushforward.base");
        if (m.cols() != xs.dim() || m.rows() != base.dim()) {
          throw SchemaError("body.pushforward.map: must be dim(B) x dim(X)");
        }
        mb.pushforward = PushforwardSpec{AffineMap(std::move(m), std::move(off)), std::move(base)};
      }
      doc.body = std::move(mb);
    } else if (doc.kind == "standard") {
      ConvexSet box = set_from_json(field(body, "box", "body"), "body.box");
      const int k = box.dim();
      StandardProblem sp{payoff_from_json(field(body, "objective", "body"), k, 0, "body.objective"),
                         detail::x_only_list(body, "ineq", k), detail::x_only_list(body, "eq", k), std::move(box)};
      sp.validate(seed);
      doc.body = std::move(sp);
    } else if (doc.kind == "function") {
      FunctionBody fb;
      ConvexSet domain = set_from_json(field(body, "domain", "body"), "body.domain");
      if (body.contains("expr")) {
        const PayoffExpr e = payoff_from_json(body["expr"], domain.dim(), 0, "body.expr");
        const int res = body.value("resolution", 401);
        const Vector none;
        fb.function = sample_function(domain, [&](const Point& x) { return e.eval(x, none); }, res);
      } else {
        fb.function.domain = domain;
        const Json& mesh = field(body, "mesh", "body");
        const Json& vals = field(body, "values", "body");
        if (!mesh.is_array() || !vals.is_array()) throw SchemaError("body: mesh and values must be arrays");
        for (std::size_t i = 0; i < mesh.size(); ++i) {
          fb.function.mesh.push_back(vector_from_json(mesh[i], "body.mesh[" + std::to_string(i) + "]"));
        }
        for (std::size_t i = 0; i < vals.size(); ++i) {
          fb.function.values.push_back(ExtendedReal::from_double(
              number_from_json(vals[i], "body.values[" + std::to_string(i) + "]", true)));
        }
      }
      fb.function.validate();
      if (body.contains("dual_box")) fb.dual_box = set_from_json(body["dual_box"], "body.dual_box");
      doc.body = std::move(fb);
    } else if (doc.kind == "separation") {
      SeparationBody sb;
      sb.x = detail::side_from_json(field(body, "X", "body"), "body.X");
      sb.y = detail::side_from_json(field(body, "Y", "body"), "body.Y");
      if (sb.x.dim() != sb.y.dim()) throw SchemaError("body: X and Y must have the same dimension");
      if (body.contains("max_i")) sb.max_i = body["max_i"].get<int>();
      doc.body = std::move(sb);
    } else {
      throw SchemaError("document: unknown kind '" + doc.kind + "'");
    }
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("document: ") + e.what());
  }
}

inline Json function_to_json(const SampledFunction& f) {
  Json mesh = Json::array(), vals = Json::array();
  for (const auto& p : f.mesh) mesh.push_back(vector_to_json(p));
  for (const auto& v : f.values) vals.push_back(number_to_json(v));
  return {{"domain", set_to_json(f.domain)}, {"mesh", mesh}, {"values", vals}};
}

inline Json document_to_json(const ProblemDocument& doc) {
  Json body;
  if (const auto* mb = std::get_if<MinmaxBody>(&doc.body)) {
    body = {{"X", set_to_json(mb->problem.x_set())},
            {"Y", set_to_json(mb->problem.y_set())},
            {"payoff", expr_to_json(*mb->problem.payoff().root())},
            {"label", mb->problem.label()}};
    if (mb->allow_invalid) body["allow_invalid"] = true;
    if (mb->pushforward) {
      body["pushforward"] = {
          {"map", {{"matrix", matrix_to_json(mb->pushforward->map.matrix())},
                   {"offset", vector_to_json(mb->pushforward->map.offset())}}},
          {"base", set_to_json(mb->pushforward->base)}};
    }
  } else if (const auto* sp = std::get_if<StandardProblem>(&doc.body)) {
    Json ineq = Json::array(), eq = Json::array();
    for (const auto& f : sp->ineq) ineq.push_back(expr_to_json(*f.root()));
    for (const auto& g : sp->eq) eq.push_back(expr_to_json(*g.root()));
    body = {{"objective", expr_to_json(*sp->objective.root())}, {"ineq", ineq}, {"eq", eq},
            {"box", set_to_json(sp->box)}};
  } else if (const auto* fb = std::get_if<FunctionBody>(&doc.body)) {
    body = function_to_json(fb->function);
    if (fb->dual_box) body["dual_box"] = set_to_json(*fb->dual_box);
  } else if (const auto* sb = std::get_if<SeparationBody>(&doc.body)) {
    body = {{"X", detail::side_to_json(sb->x)}, {"Y", detail::side_to_json(sb->y)}};
    if (sb->max_i) body["max_i"] = *sb->max_i;
  }
  Json j = {{"schema_version", doc.schema_version}, {"kind", doc.kind}, {"body", body}};
  const Json solver = overrides_to_json(doc.solver);
  if (!solver.empty()) j["solver"] = solver;
  return j;
}

inline std::string serialize_problem(const ProblemDocument& doc) { return document_to_json(doc).dump(2); }

namespace detail {

inline bool same_side(const SeparationBody::Side& a, const SeparationBody::Side& b) {
  if (a.compact.has_value() != b.compact.has_value()) return false;
  if (a.compact) return *a.compact == *b.compact;
  return a.lo.size() == b.lo.size() && a.lo == b.lo && a.hi == b.hi;
}

inline bool same_list(const std::vector<PayoffExpr>& a, const std::vector<PayoffExpr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] == b[i])) return false;
  }
  return true;
}

}  // namespace detail

/// Structural equality of documents (labels included).
inline bool structurally_equal(const ProblemDocument& a, const ProblemDocument& b) {
  if (a.schema_version != b.schema_version || a.kind != b.kind || !(a.solver == b.solver)) return false;
  if (a.body.index() != b.body.index()) return false;
  if (const auto* ma = std::get_if<MinmaxBody>(&a.body)) {
    const auto& mb = std::get<MinmaxBody>(b.body);
    if (!(ma->problem == mb.problem) || ma->problem.label() != mb.problem.label()) return false;
    if (ma->allow_invalid != mb.allow_invalid || ma->pushforward.has_value() != mb.pushforward.has_value()) {
      return false;
    }
    return !ma->pushforward ||
           (ma->pushforward->map == mb.pushforward->map && ma->pushforward->base == mb.pushforward->base);
  }
  if (const auto* sa = std::get_if<StandardProblem>(&a.body)) {
    const auto& sb = std::get<StandardProblem>(b.body);
    return sa->objective == sb.objective && detail::same_list(sa->ineq, sb.ineq) &&
           detail::same_list(sa->eq, sb.eq) && sa->box == sb.box;
  }
  if (const auto* fa = std::get_if<FunctionBody>(&a.body)) {
    const auto& fb = std::get<FunctionBody>(b.body);
    if (!(fa->function.domain == fb.function.domain) || fa->function.values != fb.function.values) return false;
    if (fa->function.mesh.size() != fb.function.mesh.size()) return false;
    for (std::size_t i = 0; i < fa->function.mesh.size(); ++i) {
      if (fa->function.mesh[i] != fb.function.mesh[i]) return false;
    }
    return fa->dual_box.has_value() == fb.dual_box.has_value() && (!fa->dual_box || *fa->dual_box == *fb.dual_box);
  }
  const auto& sa = std::get<SeparationBody>(a.body);
  const auto& sb = std::get<SeparationBody>(b.body);
  return detail::same_side(sa.x, sb.x) && detail::same_side(sa.y, sb.y) && sa.max_i == sb.max_i;
}

// ---- results -----------------------------------------------------------------

struct ResultDocument {
  std::string input_digest;
  std::string command;
  Json values = Json::object();
  bool certified = false;
  std::vector<std::string> diagnostics;

  Json to_json() const {
    return {{"input_digest", input_digest},
            {"command", command},
            {"values", values},
            {"certified", certified},
            {"diagnostics", diagnostics}};
  }

  std::string dump() const { return to_json().dump(2); }
};

/// 64-bit FNV-1a of the input bytes, as 16 hex digits.
inline std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace minmax::io
