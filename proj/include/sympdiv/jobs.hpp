#pragma once

// Declarative JSON jobs behind `sympdiv run`. One flat object per job with a
// "kind" discriminator; the full schema is documented in README.md.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>

#include "sympdiv/io.hpp"

namespace sympdiv {

struct JobContext {
  std::filesystem::path base_dir;  // relative paths inside the job resolve here
  std::optional<std::uint64_t> seed;  // overrides the job's "seed"
};

struct JobOutput {
  std::string text;      // the artifact, CSV or JSON
  std::string format;    // "csv", "json" or "text"
  bool success = true;   // false when a check job reports failures
  std::optional<std::filesystem::path> output;  // the job's "output", resolved
};

// Validates the whole job (SchemaError on any problem) before computing.
JobOutput run_job(const json& spec, const JobContext& ctx);

// Reads `path` and runs it with base_dir set to the file's directory.
JobOutput run_job_file(const std::filesystem::path& path, std::optional<std::uint64_t> seed);

// Exit status for an exception escaping a job: 2 schema/input, 3 numerical
// divergence, 4 I/O, 1 otherwise.
int exit_status(const std::exception& e);

// {"error": {"type": ..., "message": ..., "exit_code": ...}}
json error_report(const std::exception& e);

}  // namespace sympdiv
