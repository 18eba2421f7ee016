// Acceptance gate: runs every verification suite once and prints one
// pass/fail line per criterion.  Exits nonzero when any asserting suite
// fails.  LCT_SEED overrides the default seed.
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>

#include "lct/errors.hpp"
#include "lct/suites.hpp"

int main() {
  std::uint64_t seed = 2026;
  if (const char* env = std::getenv("LCT_SEED")) {
    seed = std::strtoull(env, nullptr, 10);
  }

  const char* criteria[] = {
      "fourier-inversion", "folding",        "conditioning",
      "trace-gap",         "lcs-bias",       "classical-values",
      "perfect-chain",     "completeness",   "soundness",
      "extraction",        "random-answers", "determinism",
  };

  bool all = true;
  int index = 0;
  for (const char* name : criteria) {
    ++index;
    try {
      lct::SuiteReport r = lct::run_suite(name, seed);
      std::printf("%s %2d %s\n", r.pass ? "PASS" : "FAIL", index, name);
      for (const lct::SuiteCheck& c : r.checks) {
        if (!c.pass) {
          std::printf("       %s: observed %.12g vs bound %.12g (%s)\n",
                      c.name.c_str(), c.observed, c.bound, c.detail.c_str());
        }
      }
      all = all && r.pass;
    } catch (const std::exception& e) {
      std::printf("FAIL %2d %s\n       threw: %s\n", index, name, e.what());
      all = false;
    }
  }
  std::printf("%s (seed %llu)\n", all ? "ACCEPTED" : "REJECTED",
              static_cast<unsigned long long>(seed));
  return all ? lct::kExitOk : lct::kExitAssertionFailed;
}
