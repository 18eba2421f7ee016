#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lct/serialize.hpp"

namespace lct {

// One verified proposition.  The observed/bound pair carries the numbers the
// verdict was computed from; their direction (at most, at least, equality)
// is stated in the detail line.
struct SuiteCheck {
  std::string name;
  bool pass = false;
  double observed = 0;
  double bound = 0;
  std::string detail;
};

// Result of one named verification suite.  Audit sweeps report without
// asserting: their checks are informational and `asserting` is false, so
// drivers exit zero regardless of the check verdicts.
struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  bool asserting = true;
  bool pass = true;
  std::vector<SuiteCheck> checks;
  Payload extra = Payload::object();
};

// Asserting suites first, in acceptance order, then the reporting-only
// corrupted-strategy audit sweep.
std::vector<std::string> suite_names();

// Runs one suite; unknown names throw DomainError.
SuiteReport run_suite(const std::string& name, std::uint64_t seed);

// Report document with the version string and all checks embedded.
Payload suite_json(const SuiteReport& r);

}  // namespace lct
