#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sympdiv/errors.hpp"
#include "sympdiv/io.hpp"
#include "sympdiv/jobs.hpp"

namespace {

int emit(const sympdiv::JobOutput& out, const std::string& out_flag) {
  std::optional<std::filesystem::path> target = out.output;
  if (!out_flag.empty()) target = out_flag;
  if (target) {
    sympdiv::write_text(*target, out.text);
  } else {
    std::cout << out.text << std::flush;
  }
  return out.success ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symplectic Bregman divergences: property checks and declarative jobs"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string out_path;
  std::uint64_t seed = 0;

  CLI::App* check = app.add_subcommand("check", "Run the property suite and print a pass/fail table");
  check->add_option("--spec", spec_path, "Optional check job (kind \"check\")");
  check->add_option("--out", out_path, "Write the table here instead of stdout");
  CLI::Option* check_seed = check->add_option("--seed", seed, "Seed for the random streams (default 0)");

  CLI::App* run = app.add_subcommand("run", "Run a JSON job");
  run->add_option("--spec", spec_path, "Job file")->required();
  run->add_option("--out", out_path, "Output path (overrides the job's \"output\")");
  CLI::Option* run_seed = run->add_option("--seed", seed, "Seed passed to the job");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << sympdiv::json{{"error", {{"type", "usage"}, {"message", e.what()}, {"exit_code", 2}}}}.dump()
              << "\n";
    return 2;
  }

  try {
    const bool checking = check->parsed();
    const CLI::Option* seed_opt = checking ? check_seed : run_seed;
    const std::optional<std::uint64_t> seed_flag =
        seed_opt->count() > 0 ? std::optional<std::uint64_t>(seed) : std::nullopt;

    sympdiv::JobOutput out;
    if (checking && spec_path.empty()) {
      out = sympdiv::run_job(sympdiv::json{{"kind", "check"}}, sympdiv::JobContext{{}, seed_flag});
    } else {
      if (checking) {
        const sympdiv::json spec = sympdiv::json::parse(sympdiv::read_text(spec_path));
        if (!spec.is_object() || spec.value("kind", "") != "check") {
          throw sympdiv::SchemaError("`check` only accepts jobs of kind \"check\"");
        }
      }
      out = sympdiv::run_job_file(spec_path, seed_flag);
    }
    return emit(out, out_path);
  } catch (const std::exception& e) {
    std::cerr << sympdiv::error_report(e).dump() << "\n";
    return sympdiv::exit_status(e);
  }
}
