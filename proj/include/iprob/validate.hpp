#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace iprob::validate {

struct CheckResult {
  std::string id;
  std::string description;
  bool passed = false;
  bool skipped = false;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::string suite;
  std::vector<CheckResult> checks;
  bool pass() const {
    for (auto& c : checks)
      if (!c.skipped && !c.passed) return false;
    return true;
  }
};

// suite in {algebra, tilings, dynamics, observables, asymptotics, polymer, all};
// budget_seconds == 0 means unlimited. progress (optional) gets one line per check.
ValidationReport run_suite(const std::string& suite, std::uint64_t seed, double budget_seconds,
                           int threads, std::ostream* progress = nullptr);

}  // namespace iprob::validate
