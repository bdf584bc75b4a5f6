#pragma once

// Property suites over randomly generated inputs.  Each suite is a named,
// seeded batch of exact checks; samples are independent and may run on a
// thread pool (KOSZULKIT_THREADS caps the width).  Results are collected by
// sample index, so reports do not depend on scheduling.

#include <cstdint>
#include <string>
#include <vector>

#include "koszulkit/report.hpp"

namespace koszulkit {

struct SuiteOptions {
  bool count_given = false;
  std::size_t count = 0;  // effective only when count_given; otherwise per-suite default
  std::uint64_t seed = 0;
  unsigned bound = 16;
  unsigned threads = 0;  // 0 = use thread_budget()
  std::string mutate;    // corruption hook for negative-control testing
};

struct SuiteResult {
  std::string name;
  std::size_t samples = 0;
  std::size_t failures = 0;
  std::size_t inconclusives = 0;
  std::vector<std::string> failure_notes;  // index-ordered, capped
  Outcome outcome() const;
  CheckRecord to_check() const;
};

// Canonical suite names, in reporting order.
const std::vector<std::string>& suite_names();
bool is_suite_name(const std::string& name);

// Default sample count for a suite (used when count_given is false).
std::size_t suite_default_count(const std::string& name);

SuiteResult run_suite(const std::string& name, const SuiteOptions& opt);

// Resolved parallelism: requested if nonzero, else KOSZULKIT_THREADS, else
// hardware concurrency, floored at 1.
unsigned thread_budget(unsigned requested = 0);

}  // namespace koszulkit
