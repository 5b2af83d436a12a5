// Command-line front end: reads a problem document, runs one operation and
// prints a single JSON result document on stdout.

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "minmax/geometry.hpp"
#include "minmax/io.hpp"
#include "minmax/lagrangian.hpp"
#include "minmax/legendre.hpp"
#include "minmax/solver.hpp"

namespace {

using minmax::io::Json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNotCertified = 3;
constexpr int kExitUsage = 64;

struct Options {
  std::string command;
  std::string document;
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::optional<int> resolution;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> method;
  std::optional<double> cap;
  bool allow_invalid = false;
  bool strict = false;
};

Json points_json(const std::vector<minmax::Point>& pts) {
  Json a = Json::array();
  for (const auto& p : pts) a.push_back(minmax::io::vector_to_json(p));
  return a;
}

Json values_json(const std::vector<minmax::ExtendedReal>& vals) {
  Json a = Json::array();
  for (const auto& v : vals) a.push_back(minmax::io::number_to_json(v));
  return a;
}

template <class T>
const T& body_as(const minmax::io::ProblemDocument& doc, const std::string& command, const char* kind) {
  const T* b = std::get_if<T>(&doc.body);
  if (!b) {
    throw minmax::SchemaError("command '" + command + "' needs a '" + kind + "' document, got '" + doc.kind + "'");
  }
  return *b;
}

minmax::ConvexSet dual_box_for(const minmax::io::FunctionBody& fb, const minmax::SolverConfig& cfg) {
  if (fb.dual_box) return *fb.dual_box;
  const int n = fb.function.domain.dim();
  return minmax::ConvexSet::box(minmax::Vector::Constant(n, -cfg.multiplier_cap),
                                minmax::Vector::Constant(n, cfg.multiplier_cap));
}

void run(const Options& opt, const minmax::io::ProblemDocument& doc, const minmax::SolverConfig& cfg,
         minmax::io::ResultDocument& out) {
  using namespace minmax;
  const std::string& cmd = opt.command;
  Json& v = out.values;

  if (cmd == "check") {
    v["kind"] = doc.kind;
    v["valid"] = true;
    if (const auto* mb = std::get_if<io::MinmaxBody>(&doc.body)) {
      v["dim_x"] = mb->problem.dim_x();
      v["dim_y"] = mb->problem.dim_y();
      v["validation"] = mb->problem.bypassed() ? "bypassed" : "checked";
    }
    out.certified = true;
    return;
  }

  if (cmd == "solve") {
    const auto& mb = body_as<io::MinmaxBody>(doc, cmd, "minmax");
    const EquilibriumResult r = solve_saddle(mb.problem, cfg);
    v["x_star"] = io::vector_to_json(r.x_star);
    v["y_star"] = io::vector_to_json(r.y_star);
    v["primal"] = io::number_to_json(r.primal_value);
    v["dual"] = io::number_to_json(r.dual_value);
    v["gap"] = io::number_to_json(r.gap);
    v["iterations"] = r.iterations;
    v["method"] = method_name(cfg.method);
    out.certified = r.certified;
    if (!r.certified) out.diagnostics.push_back("gap exceeds tol " + std::to_string(cfg.tol));
    return;
  }

  if (cmd == "gap") {
    const auto& mb = body_as<io::MinmaxBody>(doc, cmd, "minmax");
    double primal = 0.0, dual = 0.0;
    if (mb.problem.bypassed()) {
      const BruteForceResult bf = brute_force_value(mb.problem, cfg.grid_resolution);
      primal = bf.primal;
      dual = bf.dual;
      out.diagnostics.push_back("convex/concave check bypassed; values are mesh values at resolution " +
                                std::to_string(cfg.grid_resolution));
    } else {
      const EquilibriumResult r = solve_saddle(mb.problem, cfg);
      primal = r.primal_value;
      dual = r.dual_value;
    }
    v["primal"] = io::number_to_json(primal);
    v["dual"] = io::number_to_json(dual);
    v["gap"] = io::number_to_json(primal - dual);
    out.certified = primal - dual <= cfg.tol;
    return;
  }

  if (cmd == "conjugate" || cmd == "biconjugate") {
    const auto& fb = body_as<io::FunctionBody>(doc, cmd, "function");
    const ConvexSet box = dual_box_for(fb, cfg);
    if (cmd == "conjugate") {
      const SampledFunction fs = conjugate(fb.function, box, cfg.grid_resolution);
      v["mesh"] = points_json(fs.mesh);
      v["values"] = values_json(fs.values);
      out.certified = true;
      return;
    }
    const SampledFunction bc = biconjugate(fb.function, box, cfg.grid_resolution);
    double interior = 0.0, above = 0.0;
    for (std::size_t i = 0; i < bc.mesh.size(); ++i) {
      if (!fb.function.values[i].is_finite()) continue;
      const double d = bc.values[i].to_double() - fb.function.values[i].value();
      above = std::max(above, d);
      auto [lo, hi] = fb.function.domain.bounds();
      bool inner = true;
      for (Eigen::Index k = 0; k < lo.size(); ++k) {
        inner = inner && bc.mesh[i][k] > lo[k] && bc.mesh[i][k] < hi[k];
      }
      if (inner) interior = std::max(interior, std::abs(d));
    }
    v["mesh"] = points_json(bc.mesh);
    v["values"] = values_json(bc.values);
    v["max_interior_deviation"] = interior;
    v["max_excess_over_f"] = above;
    out.certified = interior <= cfg.tol;
    if (!out.certified) out.diagnostics.push_back("biconjugate differs from f in the interior; f is not convex there");
    return;
  }

  if (cmd == "lagrangian") {
    const auto& sp = body_as<StandardProblem>(doc, cmd, "standard");
    const LagrangianDual d = lagrangian_dual(sp, cfg);
    v["dual_value"] = io::number_to_json(d.value);
    v["primal_value"] = io::number_to_json(d.primal);
    v["lambdas"] = io::vector_to_json(d.lambdas);
    v["nus"] = io::vector_to_json(d.nus);
    v["boundary_warning"] = d.boundary_warning;
    out.certified = !d.boundary_warning;
    if (d.boundary_warning) {
      out.diagnostics.push_back("maximizing multiplier lies within 1% of the cap " +
                                std::to_string(cfg.multiplier_cap) + "; the true dual may be larger");
    }
    return;
  }

  if (cmd == "separate") {
    const auto& sb = body_as<io::SeparationBody>(doc, cmd, "separation");
    Hyperplane h;
    if (sb.exhaustion()) {
      h = separate_general([&](int i) { return sb.x.at(i); }, [&](int i) { return sb.y.at(i); }, sb.x.dim(),
                           sb.max_i.value_or(8), cfg);
    } else {
      h = separate_compact(*sb.x.compact, *sb.y.compact, cfg);
    }
    v["v"] = io::vector_to_json(h.v);
    v["alpha"] = io::number_to_json(h.alpha);
    v["margin"] = io::number_to_json(h.margin);
    out.certified = true;
    return;
  }

  if (cmd == "pushforward") {
    const auto& mb = body_as<io::MinmaxBody>(doc, cmd, "minmax");
    if (!mb.pushforward) throw SchemaError("command 'pushforward' needs body.pushforward {map, base}");
    const FiberSolveResult r = solve_by_fibers(mb.problem, mb.pushforward->map, mb.pushforward->base, cfg);
    v["value"] = io::number_to_json(r.value);
    v["direct"] = io::number_to_json(r.direct);
    v["matches_direct"] = r.matches_direct;
    out.certified = r.matches_direct;
    return;
  }

  throw SchemaError("unknown command '" + cmd + "'");
}

const char* error_kind(const std::exception& e) {
  using namespace minmax;
  if (dynamic_cast<const NotConvexConcaveError*>(&e)) return "NotConvexConcaveError";
  if (dynamic_cast<const NotConvexError*>(&e)) return "NotConvexError";
  if (dynamic_cast<const NotAffineError*>(&e)) return "NotAffineError";
  if (dynamic_cast<const NestingError*>(&e)) return "NestingError";
  if (dynamic_cast<const InvariantError*>(&e)) return "InvariantError";
  if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
  if (dynamic_cast<const SchemaError*>(&e)) return "SchemaError";
  if (dynamic_cast<const DimensionError*>(&e)) return "DimensionError";
  if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
  if (dynamic_cast<const MembershipError*>(&e)) return "MembershipError";
  if (dynamic_cast<const WeightError*>(&e)) return "WeightError";
  if (dynamic_cast<const NegativeMultiplierError*>(&e)) return "NegativeMultiplierError";
  if (dynamic_cast<const NotSeparableError*>(&e)) return "NotSeparableError";
  if (dynamic_cast<const BudgetError*>(&e)) return "BudgetError";
  if (dynamic_cast<const EmptyFiberError*>(&e)) return "EmptyFiberError";
  return "Error";
}

int exit_code_for(const std::exception& e) {
  using namespace minmax;
  if (dynamic_cast<const NotSeparableError*>(&e)) return kExitNotCertified;
  if (dynamic_cast<const BudgetError*>(&e) || dynamic_cast<const EmptyFiberError*>(&e)) return kExitFailure;
  if (dynamic_cast<const Error*>(&e)) return kExitValidation;
  return kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"Convex minmax problems: solve, dualize, conjugate and separate."};
  app.require_subcommand(1, 1);
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"solve", "approximate saddle point and duality gap"},
      {"gap", "inf sup minus sup inf"},
      {"conjugate", "convex conjugate of a sampled function"},
      {"biconjugate", "biconjugate of a sampled function"},
      {"lagrangian", "Lagrangian dual of a standard-form problem"},
      {"separate", "separating hyperplane of two convex sets"},
      {"check", "parse and validate a document"},
      {"pushforward", "solve through a pushforward along an affine map"},
  };
  for (const auto& [name, desc] : commands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("document", opt.document, "problem document path, or - for stdin")->required();
    sub->add_option("--tol", opt.tol, "tolerance");
    sub->add_option("--max-iter", opt.max_iter, "iteration cap");
    sub->add_option("--resolution", opt.resolution, "grid resolution");
    sub->add_option("--seed", opt.seed, "random seed");
    sub->add_option("--method", opt.method, "pgda or grid")->check(CLI::IsMember({"pgda", "grid"}));
    sub->add_option("--cap", opt.cap, "dual box / multiplier cap");
    sub->add_flag("--allow-invalid", opt.allow_invalid, "skip the convex/concave check");
    sub->add_flag("--strict", opt.strict, "exit 3 when the result is not certified");
    sub->callback([&opt, name = name] { opt.command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  std::string text;
  if (opt.document == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    std::ifstream in(opt.document, std::ios::binary);
    if (!in) {
      std::cerr << "cannot read " << opt.document << "\n";
      return kExitUsage;
    }
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }

  minmax::io::ResultDocument out;
  out.command = opt.command;
  out.input_digest = minmax::io::fnv1a_hex(text);
  int code = kExitOk;
  try {
    const auto doc = minmax::io::parse_problem(text, opt.allow_invalid);
    minmax::SolverConfig cfg = doc.solver.apply(minmax::SolverConfig{});
    if (opt.tol) cfg.tol = *opt.tol;
    if (opt.max_iter) cfg.max_iter = *opt.max_iter;
    if (opt.resolution) cfg.grid_resolution = *opt.resolution;
    if (opt.seed) cfg.seed = *opt.seed;
    if (opt.method) cfg.method = minmax::io::method_from_string(*opt.method);
    if (opt.cap) cfg.multiplier_cap = *opt.cap;
    cfg.validate();
    run(opt, doc, cfg, out);
    if (opt.strict && !out.certified) code = kExitNotCertified;
  } catch (const std::exception& e) {
    out.values = Json::object();
    out.certified = false;
    out.diagnostics.push_back(std::string(error_kind(e)) + ": " + e.what());
    std::cerr << out.diagnostics.back() << "\n";
    code = exit_code_for(e);
  }
  std::cout << out.dump() << "\n";
  return code;
}
