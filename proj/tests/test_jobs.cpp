#include <cstdlib>
#include <filesystem>

#include <doctest.h>

#include "support.hpp"
#include "sympdiv/conjugate.hpp"
#include "sympdiv/errors.hpp"
#include "sympdiv/jobs.hpp"

using namespace sympdiv;

namespace {

JobOutput run(const char* text) { return run_job(json::parse(text), JobContext{SYMPDIV_JOBS_DIR, std::nullopt}); }

int status_of(const char* text) {
  try {
    run(text);
  } catch (const std::exception& e) {
    return exit_status(e);
  }
  return 0;
}

}  // namespace

TEST_CASE("divergence job emits the documented columns") {
  const JobOutput out = run(R"({"kind":"divergence","divergence":"symplectic_bregman",
      "potential":{"kind":"quadratic","dim":2},"form":{"kind":"canonical","n":1},"pairs":[[[1,0],[0,0]]]})");
  CHECK(out.format == "csv");
  CHECK(out.text == "z1,z2,divergence,method,residual\n1;0,0;0,0.5,closed_form,0\n");
}

TEST_CASE("every divergence type runs through a job") {
  for (const char* type : {"bregman", "dual_bregman", "fenchel_young", "bregman_composite", "symplectic_bregman",
                           "symplectic_fenchel_young"}) {
    CAPTURE(type);
    json spec = json::parse(R"({"kind":"divergence","potential":{"kind":"entropy","dim":2},"pairs":[[[1,2],[0.5,0.5]]]})");
    spec["divergence"] = type;
    spec["format"] = "json";
    const JobOutput out = run_job(spec, {});
    const json j = json::parse(out.text);
    CHECK(j.at("rows").size() == 1);
    CHECK(j.at("rows")[0].at("divergence").get<double>() >= 0.0);
  }
}

TEST_CASE("divergence scan has 2601 rows with its minimum at the symplectic gradient") {
  const JobOutput out = run(R"({"kind":"divergence","divergence":"symplectic_fenchel_young",
      "potential":{"kind":"quadratic","matrix":[[2,0.5],[0.5,1]],"linear":[0.1,-0.3]},
      "scan":{"z":[0.7,-0.4],"half_width":1.0}})");
  const CsvTable t = parse_csv(out.text);
  REQUIRE(t.rows.size() == 2601);
  std::size_t best = 0;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (parse_number(t.rows[i][2]) < parse_number(t.rows[best][2])) best = i;
  }
  const Potential f = quadratic_potential(Matrix::from_rows({{2, 0.5}, {0.5, 1}}), {0.1, -0.3});
  const PhasePoint grad = symplectic_gradient(f, SymplecticForm::canonical(1), PhasePoint(Vector{0.7, -0.4}));
  CHECK(best == 1300);  // grid centre
  CHECK(parse_vector(t.rows[best][1]) == grad.vector());
  CHECK(parse_number(t.rows[best][2]) <= 1e-12);
}

TEST_CASE("scan outside the conjugate domain reports inf") {
  const JobOutput out = run(R"({"kind":"divergence","divergence":"symplectic_fenchel_young",
      "potential":{"kind":"perspective","generator":{"kind":"square","scale":2}},
      "scan":{"z":[1,0.5],"half_width":2.0,"resolution":5}})");
  CHECK(out.text.find(",inf,none,") != std::string::npos);
}

TEST_CASE("form-eval grid reproduces 2x2 determinants") {
  const CsvTable t = parse_csv(run(R"({"kind":"form-eval","form":{"kind":"canonical","n":1},"grid":{"lo":-2,"hi":2}})").text);
  REQUIRE(t.rows.size() == 625);
  for (const auto& row : t.rows) {
    const Vector a = parse_vector(row[0]), b = parse_vector(row[1]);
    const Eigen::Matrix2d m{{a[0], b[0]}, {a[1], b[1]}};
    CHECK(parse_number(row[2]) == m.determinant());
  }
}

TEST_CASE("conjugate job") {
  const CsvTable t = parse_csv(run(R"({"kind":"conjugate","potential":{"kind":"quadratic","dim":2},
      "points":[[1,0],[0,2]]})").text);
  CHECK(t.header == std::vector<std::string>{"point", "value", "argmax", "method", "residual"});
  CHECK(t.rows[0][1] == "0.5");
  CHECK(t.rows[1][1] == "2");
  const CsvTable s = parse_csv(run(R"({"kind":"conjugate","potential":{"kind":"quadratic","dim":2},
      "form":{"kind":"canonical","n":1},"method":"solver","points":[[0,-1]]})").text);
  CHECK(s.rows[0][3] == "solver");
  CHECK(parse_number(s.rows[0][1]) == doctest::Approx(0.5).epsilon(1e-12));
  const CsvTable inf = parse_csv(run(R"({"kind":"conjugate","potential":{"kind":"logsumexp","dim":2},"points":[[0.5,0.6]]})").text);
  CHECK(inf.rows[0][1] == "inf");
}

TEST_CASE("sben job on the bundled trajectory") {
  const json j = json::parse(run_job_file(std::filesystem::path(SYMPDIV_JOBS_DIR) / "sben.json", std::nullopt).text);
  CHECK(j.at("nodes") == 50);
  CHECK(j.at("action").get<double>() <= 1e-6);

  const JobOutput path = run(R"({"kind":"sben","potential":{"kind":"quadratic","dim":2},
      "trajectory":"damped_oscillator.csv","format":"csv"})");
  const Trajectory tr = parse_trajectory(parse_csv(path.text));
  CHECK(tr.irr_rates.size() == 50);

  const json m = json::parse(run(R"({"kind":"sben","potential":{"kind":"quadratic","dim":2},
      "trajectory":"damped_oscillator.csv","irr":"minimize"})").text);
  CHECK(m.at("converged") == true);
  CHECK(m.at("action").get<double>() <= 1e-6);
}

TEST_CASE("job output is identical for any thread count") {
  const char* spec = R"({"kind":"divergence","divergence":"symplectic_fenchel_young",
      "potential":{"kind":"entropy","dim":2},"scan":{"z":[0.7,1.4],"half_width":0.5}})";
  const std::string serial = run(spec).text;
  setenv("SYMPDIV_THREADS", "4", 1);
  const std::string threaded = run(spec).text;
  unsetenv("SYMPDIV_THREADS");
  CHECK(serial == threaded);
}

TEST_CASE("schema and numerical errors map to exit codes") {
  CHECK(status_of(R"({"kind":"nope"})") == 2);
  CHECK(status_of(R"([1,2])") == 2);
  CHECK(status_of(R"({"kind":"divergence","divergence":"bregman","potential":{"kind":"quadratic","dim":2},"pairs":[[[1,0],[0,0]]],"extra":1})") == 2);
  CHECK(status_of(R"({"kind":"divergence","divergence":"bregman","potential":{"kind":"quadratic","dim":2},"pairs":[[[1,0,0],[0,0]]]})") == 2);
  CHECK(status_of(R"({"kind":"divergence","divergence":"bregman","potential":{"kind":"quadratic","dim":"two"},"pairs":[]})") == 2);
  CHECK(status_of(R"({"kind":"divergence","divergence":"symplectic_fenchel_young",
      "potential":{"kind":"perspective","generator":{"kind":"square"}},"pairs":[[[1,0],[5,0]]]})") == 3);
  CHECK(status_of(R"({"kind":"sben","potential":{"kind":"quadratic","dim":2},"trajectory":"missing.csv"})") == 4);
  CHECK(status_of(R"({"kind":"divergence","divergence":"bregman","potential":{"kind":"quadratic","dim":2},"pairs":[[[1,0],[0,0]]]})") == 0);

  const json report = error_report(SchemaError("bad"));
  CHECK(report.at("error").at("type") == "schema");
  CHECK(report.at("error").at("exit_code") == 2);
  CHECK(exit_status(std::runtime_error("x")) == 1);
}

TEST_CASE("check job") {
  const JobOutput out = run(R"({"kind":"check","format":"json","seed":3})");
  const json j = json::parse(out.text);
  CHECK(j.at("seed") == 3);
  CHECK(j.at("results").size() == 11);
  CHECK(out.success == j.at("passed").get<bool>());
  CHECK(status_of(R"({"kind":"check","seed":-1})") == 2);
}
