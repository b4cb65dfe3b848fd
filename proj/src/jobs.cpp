#include "sympdiv/jobs.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "sympdiv/checks.hpp"
#include "sympdiv/conjugate.hpp"
#include "sympdiv/divergence.hpp"
#include "sympdiv/errors.hpp"
#include "sympdiv/parallel.hpp"
#include "sympdiv/sben.hpp"

namespace sympdiv {

namespace {

void check_keys(const json& spec, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : spec.items()) {
    (void)value;
    if (!allowed.contains(key)) {
      throw SchemaError("unknown field '" + key + "' for job kind '" + spec.at("kind").get<std::string>() + "'");
    }
  }
}

const json& require(const json& spec, const char* key) {
  if (!spec.contains(key)) throw SchemaError(std::string("missing required field '") + key + "'");
  return spec.at(key);
}

std::string string_field(const json& spec, const char* key, const std::string& fallback) {
  if (!spec.contains(key)) return fallback;
  if (!spec.at(key).is_string()) throw SchemaError(std::string("field '") + key + "' must be a string");
  return spec.at(key).get<std::string>();
}

std::string output_format(const json& spec, const std::string& fallback,
                          const std::set<std::string>& allowed) {
  const std::string f = string_field(spec, "format", fallback);
  if (!allowed.contains(f)) throw SchemaError("unsupported format '" + f + "'");
  return f;
}

SolverParams solver_of(const json& spec) {
  return spec.contains("solver") ? parse_solver(spec.at("solver")) : SolverParams{};
}

SymplecticForm form_of(const json& spec, std::size_t dim) {
  if (!spec.contains("form")) {
    if (dim == 0 || dim % 2 != 0) throw DimensionError("a symplectic job needs an even-dimensional potential");
    return SymplecticForm::canonical(dim / 2);
  }
  SymplecticForm form = parse_form(spec.at("form"));
  if (dim != 0 && form.dim() != dim) {
    throw DimensionError("form dimension " + std::to_string(form.dim()) + " does not match potential dimension " +
                         std::to_string(dim));
  }
  return form;
}

Vector point_of(const json& j, std::size_t dim, const char* what) {
  Vector v = parse_point(j);
  if (v.size() != dim) {
    throw DimensionError(std::string(what) + " has dimension " + std::to_string(v.size()) + ", expected " +
                         std::to_string(dim));
  }
  return v;
}

std::vector<std::pair<Vector, Vector>> pairs_of(const json& j, std::size_t dim1, std::size_t dim2) {
  if (!j.is_array() || j.empty()) throw SchemaError("'pairs' must be a non-empty array of [z1, z2]");
  std::vector<std::pair<Vector, Vector>> out;
  for (const json& p : j) {
    if (!p.is_array() || p.size() != 2) throw SchemaError("each pair must be [z1, z2]");
    out.emplace_back(point_of(p[0], dim1, "z1"), point_of(p[1], dim2, "z2"));
  }
  return out;
}

std::string value_text(const ExtendedReal& v) { return v.is_finite() ? format_number(v.value()) : "inf"; }

json value_json(const ExtendedReal& v) {
  if (v.is_finite()) return v.value();
  return "inf";
}

// ---------------------------------------------------------------- form-eval

JobOutput form_eval_job(const json& spec) {
  check_keys(spec, {"kind", "form", "pairs", "grid", "format", "output"});
  const SymplecticForm form = parse_form(require(spec, "form"));
  const std::string format = output_format(spec, "csv", {"csv", "json"});
  if (spec.contains("pairs") == spec.contains("grid")) throw SchemaError("form-eval needs exactly one of 'pairs' or 'grid'");

  std::vector<std::pair<Vector, Vector>> pairs;
  if (spec.contains("pairs")) {
    pairs = pairs_of(spec.at("pairs"), form.dim(), form.dim());
  } else {
    const json& g = spec.at("grid");
    if (form.dim() != 2) throw DimensionError("an integer grid needs a 2-dimensional form");
    if (!g.is_object() || !g.contains("lo") || !g.contains("hi") || !g.at("lo").is_number_integer() ||
        !g.at("hi").is_number_integer()) {
      throw SchemaError("'grid' must be {\"lo\": int, \"hi\": int}");
    }
    const int lo = g.at("lo").get<int>(), hi = g.at("hi").get<int>();
    if (lo > hi || hi - lo > 100) throw SchemaError("'grid' needs lo <= hi and at most 101 values per axis");
    std::vector<Vector> points;
    for (int a = lo; a <= hi; ++a) {
      for (int b = lo; b <= hi; ++b) points.push_back({double(a), double(b)});
    }
    for (const Vector& z1 : points) {
      for (const Vector& z2 : points) pairs.emplace_back(z1, z2);
    }
  }

  JobOutput out;
  out.format = format;
  if (format == "csv") {
    CsvTable t{{"z1", "z2", "omega"}, {}};
    for (const auto& [z1, z2] : pairs) {
      t.rows.push_back({format_vector(z1), format_vector(z2), format_number(form.evaluate(z1, z2))});
    }
    out.text = t.to_string();
  } else {
    json rows = json::array();
    for (const auto& [z1, z2] : pairs) rows.push_back({{"z1", z1}, {"z2", z2}, {"omega", form.evaluate(z1, z2)}});
    out.text = json{{"kind", "form-eval"}, {"rows", rows}}.dump(2) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------- conjugate

JobOutput conjugate_job(const json& spec) {
  check_keys(spec, {"kind", "potential", "form", "points", "method", "solver", "format", "output"});
  const Potential f = parse_potential(require(spec, "potential"));
  const std::optional<SymplecticForm> form =
      spec.contains("form") ? std::optional<SymplecticForm>(form_of(spec, f.dim())) : std::nullopt;
  const std::string method = string_field(spec, "method", "auto");
  if (method != "auto" && method != "solver") throw SchemaError("'method' must be \"auto\" or \"solver\"");
  const SolverParams params = solver_of(spec);
  const std::string format = output_format(spec, "csv", {"csv", "json"});
  const json& pts = require(spec, "points");
  if (!pts.is_array() || pts.empty()) throw SchemaError("'points' must be a non-empty array");
  std::vector<Vector> points;
  for (const json& p : pts) points.push_back(point_of(p, f.dim(), "point"));

  std::vector<ConjugateEvaluation> results(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    // For a form, evaluate F*(Ω^T z') so that both routes share one target.
    const Vector target = form ? form->functional(points[i]) : points[i];
    if (method == "auto") {
      results[i] = conjugate(f, target, params);
      return;
    }
    const ConjugateResult r = fenchel_conjugate(f, target, params);
    results[i] = ConjugateEvaluation{r.value, r.argmax, ConjugateMethod::Solver, r.gradient_norm};
  });

  JobOutput out;
  out.format = format;
  if (format == "csv") {
    CsvTable t{{"point", "value", "argmax", "method", "residual"}, {}};
    for (std::size_t i = 0; i < points.size(); ++i) {
      const ConjugateEvaluation& r = results[i];
      t.rows.push_back({format_vector(points[i]), value_text(r.value), r.argmax ? format_vector(*r.argmax) : "",
                        to_string(r.method), format_number(r.residual)});
    }
    out.text = t.to_string();
  } else {
    json rows = json::array();
    for (std::size_t i = 0; i < points.size(); ++i) {
      const ConjugateEvaluation& r = results[i];
      rows.push_back({{"point", points[i]},
                      {"value", value_json(r.value)},
                      {"argmax", r.argmax ? json(*r.argmax) : json(nullptr)},
                      {"method", to_string(r.method)},
                      {"residual", r.residual}});
    }
    out.text = json{{"kind", "conjugate"}, {"symplectic", form.has_value()}, {"rows", rows}}.dump(2) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------- divergence

struct DivergenceRow {
  Vector z1;
  Vector z2;
  ExtendedReal value;
  std::string method;
  double residual = 0.0;
  bool clamped = false;
};

using Evaluator = std::function<DivergenceReport(const Vector&, const Vector&)>;

// Returns the evaluator and the dimensions of its two arguments.
std::tuple<Evaluator, std::size_t, std::size_t> divergence_evaluator(const json& spec, const Potential& f,
                                                                     const std::string& type) {
  const SolverParams params = solver_of(spec);
  const Matrix q = spec.contains("inner_product") ? parse_matrix(spec.at("inner_product")) : Matrix{};
  const std::size_t d = f.dim();
  if (spec.contains("inner_product") && type != "bregman" && type != "bregman_composite") {
    throw SchemaError("'inner_product' applies only to bregman and bregman_composite");
  }
  if (spec.contains("form") && type != "symplectic_bregman" && type != "symplectic_fenchel_young") {
    throw SchemaError("'form' applies only to the symplectic divergences");
  }
  if (type == "bregman") {
    return {[f, q](const Vector& a, const Vector& b) { return bregman(f, a, b, q); }, d, d};
  }
  if (type == "dual_bregman") {
    return {[f, params](const Vector& a, const Vector& b) { return dual_bregman(f, a, b, params); }, d, d};
  }
  if (type == "fenchel_young") {
    return {[f, params](const Vector& a, const Vector& b) { return fenchel_young_flat(f, a, b, params); }, d, d};
  }
  if (type == "bregman_composite") {
    if (d % 2 != 0) throw DimensionError("bregman_composite needs an even-dimensional potential");
    if (!q.empty() && q.rows() * 2 != d) throw DimensionError("'inner_product' must be n x n for a 2n-dimensional potential");
    return {[f, q](const Vector& a, const Vector& b) { return bregman_composite(f, PhasePoint(a), PhasePoint(b), q); },
            d, d};
  }
  const SymplecticForm form = form_of(spec, d);
  if (type == "symplectic_bregman") {
    return {[f, form](const Vector& a, const Vector& b) {
              return symplectic_bregman(f, form, PhasePoint(a), PhasePoint(b));
            },
            d, d};
  }
  if (type == "symplectic_fenchel_young") {
    return {[f, form, params](const Vector& a, const Vector& b) {
              return symplectic_fenchel_young(f, form, PhasePoint(a), PhasePoint(b), params);
            },
            d, d};
  }
  throw SchemaError("unknown divergence type '" + type + "'");
}

std::vector<std::pair<Vector, Vector>> scan_pairs(const json& scan, const Potential& f, const SymplecticForm& form) {
  if (!scan.is_object()) throw SchemaError("'scan' must be an object");
  for (const auto& [key, value] : scan.items()) {
    (void)value;
    if (key != "z" && key != "center" && key != "half_width" && key != "resolution") {
      throw SchemaError("unknown field '" + key + "' in 'scan'");
    }
  }
  if (f.dim() != 2) throw DimensionError("a scan needs a 2-dimensional potential");
  const Vector z = point_of(require(scan, "z"), 2, "scan z");
  const Vector center = scan.contains("center") ? point_of(scan.at("center"), 2, "scan center")
                                                : symplectic_gradient(f, form, PhasePoint(z)).vector();
  const json& hw = require(scan, "half_width");
  if (!hw.is_number() || !(hw.get<double>() > 0.0)) throw SchemaError("'half_width' must be a positive number");
  const double h = hw.get<double>();
  std::size_t n = 51;
  if (scan.contains("resolution")) {
    if (!scan.at("resolution").is_number_integer() || scan.at("resolution").get<long long>() < 2 ||
        scan.at("resolution").get<long long>() > 1001) {
      throw SchemaError("'resolution' must be an integer in [2, 1001]");
    }
    n = scan.at("resolution").get<std::size_t>();
  }
  std::vector<std::pair<Vector, Vector>> pairs;
  pairs.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double u = -h + 2.0 * h * static_cast<double>(i) / static_cast<double>(n - 1);
      const double v = -h + 2.0 * h * static_cast<double>(j) / static_cast<double>(n - 1);
      pairs.emplace_back(z, Vector{center[0] + u, center[1] + v});
    }
  }
  return pairs;
}

JobOutput divergence_job(const json& spec) {
  check_keys(spec, {"kind", "potential", "form", "divergence", "pairs", "scan", "inner_product", "solver",
                    "format", "output"});
  const Potential f = parse_potential(require(spec, "potential"));
  const json& type_json = require(spec, "divergence");
  if (!type_json.is_string()) throw SchemaError("'divergence' must be a string");
  const std::string type = type_json.get<std::string>();
  const std::string format = output_format(spec, "csv", {"csv", "json"});
  const auto [eval, d1, d2] = divergence_evaluator(spec, f, type);
  if (spec.contains("pairs") == spec.contains("scan")) throw SchemaError("divergence needs exactly one of 'pairs' or 'scan'");

  const bool scanning = spec.contains("scan");
  std::vector<std::pair<Vector, Vector>> pairs;
  if (scanning) {
    if (type != "symplectic_fenchel_young") throw SchemaError("'scan' is only defined for symplectic_fenchel_young");
    pairs = scan_pairs(spec.at("scan"), f, form_of(spec, f.dim()));
  } else {
    pairs = pairs_of(spec.at("pairs"), d1, d2);
  }

  std::vector<DivergenceRow> rows(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) {
    DivergenceRow& row = rows[i];
    row.z1 = pairs[i].first;
    row.z2 = pairs[i].second;
    try {
      const DivergenceReport r = eval(row.z1, row.z2);
      row.value = r.value;
      row.method = to_string(r.method);
      row.residual = r.residual;
      row.clamped = r.clamped;
    } catch (const DivergenceError&) {
      // A scan sweeps z' across the whole plane; outside dom F^{*ω} the
      // divergence is +∞ rather than an error.
      if (!scanning) throw;
      row.value = ExtendedReal::infinity();
      row.method = "none";
    }
  });

  JobOutput out;
  out.format = format;
  if (format == "csv") {
    CsvTable t{{"z1", "z2", "divergence", "method", "residual"}, {}};
    for (const DivergenceRow& r : rows) {
      t.rows.push_back({format_vector(r.z1), format_vector(r.z2), value_text(r.value), r.method,
                        format_number(r.residual)});
    }
    out.text = t.to_string();
  } else {
    json arr = json::array();
    for (const DivergenceRow& r : rows) {
      arr.push_back({{"z1", r.z1},
                     {"z2", r.z2},
                     {"divergence", value_json(r.value)},
                     {"method", r.method},
                     {"residual", r.residual},
                     {"clamped", r.clamped}});
    }
    out.text = json{{"kind", "divergence"}, {"divergence", type}, {"rows", arr}}.dump(2) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------- sben

JobOutput sben_job(const json& spec, const JobContext& ctx) {
  check_keys(spec, {"kind", "potential", "form", "trajectory", "irr", "solver", "format", "output"});
  const Potential phi = parse_potential(require(spec, "potential"));
  const SymplecticForm form = form_of(spec, phi.dim());
  const SolverParams params = solver_of(spec);
  const std::string irr_mode = string_field(spec, "irr", "decompose");
  if (irr_mode != "decompose" && irr_mode != "file" && irr_mode != "minimize") {
    throw SchemaError("'irr' must be \"decompose\", \"file\" or \"minimize\"");
  }
  const std::string format = output_format(spec, "json", {"csv", "json"});
  const json& tj = require(spec, "trajectory");
  if (!tj.is_string()) throw SchemaError("'trajectory' must be a path to a CSV file");
  std::filesystem::path tpath = tj.get<std::string>();
  if (tpath.is_relative()) tpath = ctx.base_dir / tpath;

  const Trajectory tr = parse_trajectory(read_csv(tpath));
  if (!tr.points.empty() && tr.points.front().dim() != phi.dim()) {
    throw DimensionError("trajectory dimension does not match the potential");
  }
  if (irr_mode == "file" && tr.irr_rates.empty()) throw SchemaError("'irr': \"file\" needs irr_ columns in the trajectory");

  std::optional<bool> converged;
  DiscretePath path = [&] {
    if (irr_mode == "file") return DiscretePath(tr.times, tr.points, tr.irr_rates);
    if (irr_mode == "decompose") return natural_path(tr.times, tr.points, phi, form, params);
    IrrMinimization m = minimize_irr(tr.times, tr.points, phi, form, params);
    converged = m.converged;
    return m.path;
  }();

  JobOutput out;
  out.format = format;
  if (format == "csv") {
    out.text = trajectory_table(path.times(), path.points(), path.irr_rates()).to_string();
    return out;
  }
  const std::vector<double> y = node_divergences(path, phi, form, params);
  json report{{"kind", "sben"},
              {"nodes", path.size()},
              {"irr", irr_mode},
              {"action", path_action(path, phi, form, params)},
              {"max_node_divergence", *std::max_element(y.begin(), y.end())},
              {"horizon", path.times().back() - path.times().front()}};
  if (converged) report["converged"] = *converged;
  out.text = report.dump(2) + "\n";
  return out;
}

// ---------------------------------------------------------------- check

JobOutput check_job(const json& spec, const JobContext& ctx) {
  check_keys(spec, {"kind", "seed", "format", "output"});
  const std::string format = output_format(spec, "text", {"text", "json"});
  std::uint64_t seed = 0;
  if (spec.contains("seed")) {
    if (!spec.at("seed").is_number_unsigned()) throw SchemaError("'seed' must be a non-negative integer");
    seed = spec.at("seed").get<std::uint64_t>();
  }
  if (ctx.seed) seed = *ctx.seed;

  const std::vector<CheckResult> results = run_check_suite(seed);
  JobOutput out;
  out.format = format;
  out.success = std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
  if (format == "text") {
    out.text = format_check_table(results);
  } else {
    json arr = json::array();
    for (const CheckResult& r : results) {
      arr.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}, {"seconds", r.seconds}});
    }
    out.text = json{{"kind", "check"}, {"seed", seed}, {"passed", out.success}, {"results", arr}}.dump(2) + "\n";
  }
  return out;
}

}  // namespace

JobOutput run_job(const json& spec, const JobContext& ctx) {
  if (!spec.is_object()) throw SchemaError("a job spec must be a JSON object");
  const json& kind_json = require(spec, "kind");
  if (!kind_json.is_string()) throw SchemaError("'kind' must be a string");
  const std::string kind = kind_json.get<std::string>();

  JobOutput out;
  if (kind == "form-eval") {
    out = form_eval_job(spec);
  } else if (kind == "conjugate") {
    out = conjugate_job(spec);
  } else if (kind == "divergence") {
    out = divergence_job(spec);
  } else if (kind == "sben") {
    out = sben_job(spec, ctx);
  } else if (kind == "check") {
    out = check_job(spec, ctx);
  } else {
    throw SchemaError("unknown job kind '" + kind + "'");
  }
  if (spec.contains("output")) {
    if (!spec.at("output").is_string()) throw SchemaError("'output' must be a path");
    std::filesystem::path p = spec.at("output").get<std::string>();
    out.output = p.is_relative() ? ctx.base_dir / p : p;
  }
  return out;
}

JobOutput run_job_file(const std::filesystem::path& path, std::optional<std::uint64_t> seed) {
  const std::string text = read_text(path);
  json spec;
  try {
    spec = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
  return run_job(spec, JobContext{path.parent_path(), seed});
}

namespace {

const char* error_type(const std::exception& e) {
  if (dynamic_cast<const SchemaError*>(&e)) return "schema";
  if (dynamic_cast<const DimensionError*>(&e)) return "dimension";
  if (dynamic_cast<const DomainError*>(&e)) return "domain";
  if (dynamic_cast<const FactorizationError*>(&e)) return "factorization";
  if (dynamic_cast<const DegeneracyError*>(&e)) return "degeneracy";
  if (dynamic_cast<const GroupMembershipError*>(&e)) return "group_membership";
  if (dynamic_cast<const OracleScaleError*>(&e)) return "oracle_scale";
  if (dynamic_cast<const GridError*>(&e)) return "grid";
  if (dynamic_cast<const DivergenceError*>(&e)) return "divergence";
  if (dynamic_cast<const ConvexityViolation*>(&e)) return "convexity_violation";
  if (dynamic_cast<const IoError*>(&e)) return "io";
  if (dynamic_cast<const json::exception*>(&e)) return "schema";
  return "internal";
}

}  // namespace

int exit_status(const std::exception& e) {
  if (dynamic_cast<const DivergenceError*>(&e) || dynamic_cast<const ConvexityViolation*>(&e)) return 3;
  if (dynamic_cast<const IoError*>(&e)) return 4;
  if (dynamic_cast<const Error*>(&e) || dynamic_cast<const json::exception*>(&e)) return 2;
  return 1;
}

json error_report(const std::exception& e) {
  return json{{"error", {{"type", error_type(e)}, {"message", e.what()}, {"exit_code", exit_status(e)}}}};
}

}  // namespace sympdiv
