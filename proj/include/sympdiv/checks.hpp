#pragma once

// Property suite behind `sympdiv check` and the acceptance binary. Every
// check draws its inputs from CounterRng streams keyed by `seed`, so a run
// is reproducible bit for bit.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace sympdiv {

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct CheckCase {
  int id;
  std::string name;
  std::function<CheckResult(std::uint64_t seed)> run;
};

CheckResult check_form_axioms(std::uint64_t seed);
CheckResult check_symplectic_group(std::uint64_t seed);
CheckResult check_fenchel_young_inequality(std::uint64_t seed);
CheckResult check_conjugate_oracles(std::uint64_t seed);
CheckResult check_composite_reduction(std::uint64_t seed);
CheckResult check_separability(std::uint64_t seed);
CheckResult check_gradients(std::uint64_t seed);
CheckResult check_reparameterization(std::uint64_t seed);
CheckResult check_moreau(std::uint64_t seed);
CheckResult check_sben(std::uint64_t seed);
CheckResult check_darboux(std::uint64_t seed);

// Checks 1-11 in order.
const std::vector<CheckCase>& check_suite();

// Runs the suite, timing each check; exceptions become failed results.
std::vector<CheckResult> run_check_suite(std::uint64_t seed);

// Fixed-width pass/fail table.
std::string format_check_table(const std::vector<CheckResult>& results);

}  // namespace sympdiv
