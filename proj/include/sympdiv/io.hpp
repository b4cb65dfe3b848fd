#pragma once

// JSON job inputs and CSV artifacts.
//
// Numbers are written as the shortest decimal that round-trips to the same
// double, so files are byte-stable across runs and platforms.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sympdiv/conjugate.hpp"
#include "sympdiv/linalg.hpp"
#include "sympdiv/potential.hpp"
#include "sympdiv/space.hpp"

namespace sympdiv {

using json = nlohmann::json;

std::string format_number(double v);
// Inverse of format_number; throws SchemaError on malformed text.
double parse_number(std::string_view text);

// Vectors inside a CSV cell: components joined by ';'.
std::string format_vector(std::span<const double> v);
Vector parse_vector(std::string_view cell);

// {"rows": r, "cols": c, "data": [row-major]}
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);
// Accepts either the object form above or a list of rows.
Matrix parse_matrix(const json& j);

// {"kind": "canonical"|"pairing"|"inner_product", "n": int, "matrix": [[...]]}
SymplecticForm parse_form(const json& j);

// {"kind": "quadratic"|"separable"|"perspective"|"entropy"|"logsumexp", ...}
Potential parse_potential(const json& j);
ScalarGenerator parse_generator(const json& j);

// {"max_iter", "tol", "step0"}; missing keys keep the defaults.
SolverParams parse_solver(const json& j);

Vector parse_point(const json& j);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_string() const;
};

CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);

// Writes a headered CSV. An empty series throws IoError without touching the
// file system.
void emit_plot_data(const std::filesystem::path& path, const CsvTable& table);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

// Trajectory CSV: t, x1..xn, y1..yn[, irr_x1..irr_xn, irr_y1..irr_yn].
struct Trajectory {
  std::vector<double> times;
  std::vector<PhasePoint> points;
  std::vector<PhasePoint> irr_rates;  // empty when the file has no irr columns
};

Trajectory parse_trajectory(const CsvTable& table);
CsvTable trajectory_table(const std::vector<double>& times, const std::vector<PhasePoint>& points,
                          const std::vector<PhasePoint>& irr_rates);

}  // namespace sympdiv
