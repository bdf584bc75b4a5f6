#pragma once

// Machine-readable run reports.  A report aggregates named check records into
// one outcome; serialization is deterministic so identical runs produce
// byte-identical reports.  Wall-clock timings are deliberately not part of a
// report (they go to stderr) to keep reruns reproducible.

#include <cstdint>
#include <string>
#include <vector>

namespace koszulkit {

enum class Outcome { pass, fail, inconclusive, error };

const char* outcome_name(Outcome o);
Outcome outcome_from_name(const std::string& s);

// exit codes: pass 0, fail 1, usage/input error 2, inconclusive 3
int outcome_exit_code(Outcome o);

// severity order: error > fail > inconclusive > pass
Outcome combine_outcomes(Outcome a, Outcome b);

struct CheckRecord {
  std::string label;
  Outcome outcome = Outcome::pass;
  std::string detail;  // optional, single line
};

struct Report {
  std::string command;
  std::string digest;   // of the canonical input document, or "-"
  std::uint64_t seed = 0;
  std::vector<CheckRecord> checks;
  std::vector<std::string> payload;  // extra emitted lines (tables, certificates)

  Outcome outcome() const;
  void add(std::string label, Outcome o, std::string detail = "");

  std::string to_text() const;
  std::string to_structured() const;
};

// FNV-1a, used for input digests.
std::uint64_t fnv1a64(const std::string& data);
std::string hex64(std::uint64_t v);

}  // namespace koszulkit
