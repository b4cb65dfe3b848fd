#include "sympdiv/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "sympdiv/errors.hpp"

namespace sympdiv {

std::string format_number(double v) {
  if (!std::isfinite(v)) throw IoError("cannot serialize a non-finite number");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  if (res.ec != std::errc()) throw IoError("number formatting failed");
  return std::string(buf, res.ptr);
}

double parse_number(std::string_view text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw SchemaError("malformed number '" + std::string(text) + "'");
  }
  return v;
}

std::string format_vector(std::span<const double> v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ';';
    s += format_number(v[i]);
  }
  return s;
}

Vector parse_vector(std::string_view cell) {
  Vector v;
  std::size_t start = 0;
  while (start <= cell.size()) {
    const std::size_t end = std::min(cell.find(';', start), cell.size());
    v.push_back(parse_number(cell.substr(start, end - start)));
    start = end + 1;
  }
  return v;
}

// ---------------------------------------------------------------- JSON

namespace {

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw SchemaError(std::string("missing required field '") + key + "'");
  }
  return j.at(key);
}

std::size_t require_count(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw SchemaError(std::string("field '") + key + "' must be a positive integer");
  }
  return v.get<std::size_t>();
}

double number_or(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw SchemaError(std::string("field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

}  // namespace

Vector parse_point(const json& j) {
  if (!j.is_array()) throw SchemaError("a point must be an array of numbers");
  Vector v;
  for (const json& x : j) {
    if (!x.is_number()) throw SchemaError("a point must be an array of numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

json matrix_to_json(const Matrix& m) {
  return json{{"rows", m.rows()}, {"cols", m.cols()},
              {"data", std::vector<double>(m.data().begin(), m.data().end())}};
}

Matrix matrix_from_json(const json& j) {
  const std::size_t r = require_count(j, "rows");
  const std::size_t c = require_count(j, "cols");
  return Matrix(r, c, parse_point(require(j, "data")));
}

Matrix parse_matrix(const json& j) {
  if (j.is_object()) return matrix_from_json(j);
  if (!j.is_array()) throw SchemaError("a matrix must be a list of rows or {rows, cols, data}");
  std::vector<std::vector<double>> rows;
  for (const json& row : j) rows.push_back(parse_point(row));
  try {
    return Matrix::from_rows(rows);
  } catch (const DimensionError& e) {
    throw SchemaError(e.what());
  }
}

SymplecticForm parse_form(const json& j) {
  const std::string kind = require(j, "kind").get<std::string>();
  if (kind == "canonical") return SymplecticForm::canonical(require_count(j, "n"));
  const Matrix m = parse_matrix(require(j, "matrix"));
  if (j.contains("n") && require_count(j, "n") != m.rows()) {
    throw SchemaError("form field 'n' does not match the matrix size");
  }
  if (kind == "pairing") return form_from_pairing(DualSystem(m));
  if (kind == "inner_product") return form_from_inner_product(m);
  throw SchemaError("unknown form kind '" + kind + "'");
}

ScalarGenerator parse_generator(const json& j) {
  const std::string kind = require(j, "kind").get<std::string>();
  if (kind == "square") return ScalarGenerator::square(number_or(j, "scale", 1.0));
  if (kind == "xlogx") return ScalarGenerator::xlogx();
  if (kind == "entropy") return ScalarGenerator::entropy();
  if (kind == "exp") return ScalarGenerator::exp();
  throw SchemaError("unknown generator kind '" + kind + "'");
}

Potential parse_potential(const json& j) {
  const std::string kind = require(j, "kind").get<std::string>();
  if (kind == "quadratic") {
    if (!j.contains("matrix")) return half_squared_norm(require_count(j, "dim"), number_or(j, "scale", 1.0));
    Vector b = j.contains("linear") ? parse_point(j.at("linear")) : Vector{};
    return quadratic_potential(parse_matrix(j.at("matrix")), std::move(b), number_or(j, "constant", 0.0));
  }
  if (kind == "separable") {
    const json& gens = require(j, "generators");
    if (!gens.is_array() || gens.empty()) throw SchemaError("'generators' must be a non-empty array");
    std::vector<ScalarGenerator> g;
    for (const json& e : gens) g.push_back(parse_generator(e));
    return separable_potential(g);
  }
  if (kind == "entropy") return entropy_potential(require_count(j, "dim"));
  if (kind == "perspective") return perspective_potential(parse_generator(require(j, "generator")));
  if (kind == "logsumexp") return log_sum_exp_potential(require_count(j, "dim"));
  throw SchemaError("unknown potential kind '" + kind + "'");
}

SolverParams parse_solver(const json& j) {
  SolverParams p;
  if (j.is_null()) return p;
  if (!j.is_object()) throw SchemaError("solver parameters must be an object");
  if (j.contains("max_iter")) p.max_iter = require_count(j, "max_iter");
  p.tol = number_or(j, "tol", p.tol);
  p.step0 = number_or(j, "step0", p.step0);
  if (!(p.tol > 0.0) || !(p.step0 > 0.0)) throw SchemaError("solver tol and step0 must be positive");
  return p;
}

// ---------------------------------------------------------------- CSV

std::string CsvTable::to_string() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

CsvTable parse_csv(std::string_view text) {
  CsvTable t;
  bool first = true;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t s = 0;
    while (true) {
      const std::size_t c = line.find(',', s);
      cells.emplace_back(line.substr(s, c == std::string_view::npos ? std::string_view::npos : c - s));
      if (c == std::string_view::npos) break;
      s = c + 1;
    }
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else {
      if (cells.size() != t.header.size()) throw SchemaError("CSV row width differs from header");
      t.rows.push_back(std::move(cells));
    }
  }
  if (first) throw SchemaError("CSV has no header");
  return t;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

CsvTable read_csv(const std::filesystem::path& path) { return parse_csv(read_text(path)); }

void emit_plot_data(const std::filesystem::path& path, const CsvTable& table) {
  if (table.rows.empty()) throw IoError("refusing to write an empty series to '" + path.string() + "'");
  write_text(path, table.to_string());
}

Trajectory parse_trajectory(const CsvTable& table) {
  const auto& h = table.header;
  if (h.empty() || h[0] != "t") throw SchemaError("trajectory CSV must start with a 't' column");
  std::size_t zcols = 0;
  while (1 + zcols < h.size() && h[1 + zcols].rfind("irr_", 0) != 0) ++zcols;
  const std::size_t irr_cols = h.size() - 1 - zcols;
  if (zcols == 0 || zcols % 2 != 0 || (irr_cols != 0 && irr_cols != zcols)) {
    throw SchemaError("trajectory CSV needs 2n state columns and optionally 2n irr_ columns");
  }
  Trajectory tr;
  for (const auto& row : table.rows) {
    tr.times.push_back(parse_number(row[0]));
    Vector z, irr;
    for (std::size_t i = 0; i < zcols; ++i) z.push_back(parse_number(row[1 + i]));
    for (std::size_t i = 0; i < irr_cols; ++i) irr.push_back(parse_number(row[1 + zcols + i]));
    tr.points.emplace_back(std::move(z));
    if (irr_cols) tr.irr_rates.emplace_back(std::move(irr));
  }
  return tr;
}

CsvTable trajectory_table(const std::vector<double>& times, const std::vector<PhasePoint>& points,
                          const std::vector<PhasePoint>& irr_rates) {
  if (points.size() != times.size() || (!irr_rates.empty() && irr_rates.size() != times.size())) {
    throw DimensionError("trajectory columns do not align");
  }
  CsvTable t;
  t.header.push_back("t");
  const std::size_t n = points.empty() ? 0 : points.front().half_dim();
  for (const char* prefix : {"", "irr_"}) {
    if (*prefix && irr_rates.empty()) break;
    for (std::size_t i = 1; i <= n; ++i) t.header.push_back(std::string(prefix) + "x" + std::to_string(i));
    for (std::size_t i = 1; i <= n; ++i) t.header.push_back(std::string(prefix) + "y" + std::to_string(i));
  }
  for (std::size_t k = 0; k < times.size(); ++k) {
    std::vector<std::string> row{format_number(times[k])};
    for (double v : points[k].coords()) row.push_back(format_number(v));
    if (!irr_rates.empty()) {
      for (double v : irr_rates[k].coords()) row.push_back(format_number(v));
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace sympdiv
