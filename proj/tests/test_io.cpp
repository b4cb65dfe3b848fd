#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>

#include <doctest.h>

#include "support.hpp"
#include "sympdiv/errors.hpp"
#include "sympdiv/io.hpp"
#include "sympdiv/parallel.hpp"

using namespace sympdiv;
using testing::for_all;
using testing::Gen;

namespace {

std::filesystem::path scratch(const char* name) {
  return std::filesystem::temp_directory_path() / (std::string("sympdiv_test_") + name);
}

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("numbers round-trip through their shortest decimal") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(-2.0) == "-2");
  CHECK(format_number(1e-300) == "1e-300");
  for_all(2000, 61, [](Gen& g) {
    const double v = g.real(-1, 1) * std::pow(10.0, g.real(-30, 30));
    CHECK(bit_equal(parse_number(format_number(v)), v));
  });
  CHECK_THROWS_AS(parse_number("1.5x"), SchemaError);
  CHECK_THROWS_AS(parse_number(""), SchemaError);
}

TEST_CASE("vector cells") {
  CHECK(format_vector(Vector{1, -0.25}) == "1;-0.25");
  CHECK(parse_vector("1;-0.25") == Vector{1, -0.25});
}

TEST_CASE("matrix json") {
  const Matrix m = Matrix::from_rows({{1, 2, 3}, {4, 5, 6}});
  const json j = matrix_to_json(m);
  CHECK(j.at("rows") == 2);
  CHECK(j.at("cols") == 3);
  CHECK(matrix_from_json(j) == m);
  CHECK(parse_matrix(json::parse("[[1,2,3],[4,5,6]]")) == m);
  CHECK_THROWS_AS(matrix_from_json(json::parse(R"({"rows":2,"cols":2,"data":[1,2,3]})")), DimensionError);
  CHECK_THROWS_AS(parse_matrix(json::parse("[[1,2],[3]]")), SchemaError);
}

TEST_CASE("form, potential and solver specs") {
  CHECK(parse_form(json::parse(R"({"kind":"canonical","n":2})")).matrix() == omega0(2));
  CHECK(parse_form(json::parse(R"({"kind":"pairing","matrix":[[2]]})")).matrix()(0, 1) == 2);
  CHECK_THROWS_AS(parse_form(json::parse(R"({"kind":"pairing","n":2,"matrix":[[2]]})")), SchemaError);
  CHECK_THROWS_AS(parse_form(json::parse(R"({"kind":"weird"})")), SchemaError);
  CHECK_THROWS_AS(parse_form(json::parse(R"({"kind":"inner_product","matrix":[[-1]]})")), FactorizationError);

  CHECK(parse_potential(json::parse(R"({"kind":"quadratic","dim":2})")).eval_finite(Vector{3, 4}) == 12.5);
  const Potential sep = parse_potential(json::parse(R"({"kind":"separable","generators":[{"kind":"exp"},{"kind":"square","scale":2}]})"));
  CHECK(sep.eval_finite(Vector{0, 3}) == doctest::Approx(10.0));
  CHECK(parse_potential(json::parse(R"({"kind":"perspective","generator":{"kind":"square","scale":2}})")).eval_finite(Vector{1, 2}) == doctest::Approx(4.0));
  CHECK_THROWS_AS(parse_potential(json::parse(R"({"kind":"entropy"})")), SchemaError);

  const SolverParams p = parse_solver(json::parse(R"({"max_iter":5})"));
  CHECK(p.max_iter == 5);
  CHECK(p.tol == 1e-10);
  CHECK_THROWS_AS(parse_solver(json::parse(R"({"tol":-1})")), SchemaError);
}

TEST_CASE("csv round trip is bit exact") {
  Gen g(62);
  CsvTable t{{"a", "v"}, {}};
  std::vector<std::pair<double, Vector>> values;
  for (int i = 0; i < 200; ++i) {
    values.emplace_back(g.real(-1e6, 1e6), g.vec(3, -1e-6, 1e-6));
    t.rows.push_back({format_number(values.back().first), format_vector(values.back().second)});
  }
  const auto path = scratch("roundtrip.csv");
  emit_plot_data(path, t);
  const CsvTable back = read_csv(path);
  REQUIRE(back.rows.size() == values.size());
  CHECK(back.header == t.header);
  for (std::size_t i = 0; i < values.size(); ++i) {
    CHECK(bit_equal(parse_number(back.rows[i][0]), values[i].first));
    const Vector v = parse_vector(back.rows[i][1]);
    for (std::size_t k = 0; k < 3; ++k) CHECK(bit_equal(v[k], values[i].second[k]));
  }
  std::filesystem::remove(path);
}

TEST_CASE("empty series is an error and writes nothing") {
  const auto path = scratch("empty.csv");
  std::filesystem::remove(path);
  CHECK_THROWS_AS(emit_plot_data(path, CsvTable{{"a"}, {}}), IoError);
  CHECK_FALSE(std::filesystem::exists(path));
}

TEST_CASE("io failures") {
  CHECK_THROWS_AS(read_text("/nonexistent/dir/file.json"), IoError);
  CHECK_THROWS_AS(write_text("/nonexistent/dir/file.csv", "x"), IoError);
  CHECK_THROWS_AS(parse_csv("a,b\n1\n"), SchemaError);
}

TEST_CASE("trajectory csv") {
  const std::vector<double> t{0, 0.5};
  const std::vector<PhasePoint> z{PhasePoint(Vector{1, 2}), PhasePoint(Vector{3, 4})};
  const std::vector<PhasePoint> irr{PhasePoint(Vector{0.1, 0.2}), PhasePoint(Vector{0.3, 0.4})};
  const CsvTable table = trajectory_table(t, z, irr);
  CHECK(table.header == std::vector<std::string>{"t", "x1", "y1", "irr_x1", "irr_y1"});
  const Trajectory back = parse_trajectory(parse_csv(table.to_string()));
  CHECK(back.times == t);
  CHECK(back.points == z);
  CHECK(back.irr_rates == irr);
  const Trajectory bare = parse_trajectory(parse_csv("t,x1,y1\n0,1,2\n1,3,4\n"));
  CHECK(bare.irr_rates.empty());
  CHECK_THROWS_AS(parse_trajectory(parse_csv("time,x1,y1\n0,1,2\n")), SchemaError);
  CHECK_THROWS_AS(parse_trajectory(parse_csv("t,x1\n0,1\n")), SchemaError);
}

TEST_CASE("parallel_for covers every index once and rethrows") {
  setenv("SYMPDIV_THREADS", "4", 1);
  CHECK(thread_count() == 4);
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                    if (i == 7) throw DomainError("boom");
                  }),
                  DomainError);
  unsetenv("SYMPDIV_THREADS");
  CHECK(thread_count() == 1);
}
