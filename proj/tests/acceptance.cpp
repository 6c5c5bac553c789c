// Acceptance suite: one line per criterion, exit nonzero on any failure.
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

#include "iprob/validate.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = 42;
  int threads = 1;
  std::string suite = "all";
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--seed" && i + 1 < argc) seed = std::strtoull(argv[++i], nullptr, 10);
    else if (a == "--threads" && i + 1 < argc) threads = std::atoi(argv[++i]);
    else if (a == "--suite" && i + 1 < argc) suite = argv[++i];
  }
  const auto report = iprob::validate::run_suite(suite, seed, 0.0, threads, nullptr);
  for (const auto& c : report.checks) {
    std::cout << (c.skipped ? "[SKIP] " : c.passed ? "[PASS] " : "[FAIL] ") << c.id << ": "
              << c.description << "  (measured " << c.measured << ", expected " << c.expected
              << ", tol " << c.tolerance << (c.detail.empty() ? "" : "; " + c.detail) << ")\n";
  }
  std::cout << (report.pass() ? "ACCEPTANCE: all criteria passed" : "ACCEPTANCE: FAILURES present")
            << std::endl;
  return report.pass() ? 0 : 1;
}
