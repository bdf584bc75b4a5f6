#include "koszulkit/report.hpp"

#include <stdexcept>

namespace koszulkit {

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::pass: return "pass";
    case Outcome::fail: return "fail";
    case Outcome::inconclusive: return "inconclusive";
    case Outcome::error: return "error";
  }
  return "error";
}

Outcome outcome_from_name(const std::string& s) {
  if (s == "pass") return Outcome::pass;
  if (s == "fail") return Outcome::fail;
  if (s == "inconclusive") return Outcome::inconclusive;
  if (s == "error") return Outcome::error;
  throw std::invalid_argument("unknown outcome '" + s + "'");
}

int outcome_exit_code(Outcome o) {
  switch (o) {
    case Outcome::pass: return 0;
    case Outcome::fail: return 1;
    case Outcome::error: return 2;
    case Outcome::inconclusive: return 3;
  }
  return 2;
}

static int severity(Outcome o) {
  switch (o) {
    case Outcome::pass: return 0;
    case Outcome::inconclusive: return 1;
    case Outcome::fail: return 2;
    case Outcome::error: return 3;
  }
  return 3;
}

Outcome combine_outcomes(Outcome a, Outcome b) { return severity(a) >= severity(b) ? a : b; }

Outcome Report::outcome() const {
  Outcome o = Outcome::pass;
  for (const auto& c : checks) o = combine_outcomes(o, c.outcome);
  return o;
}

void Report::add(std::string label, Outcome o, std::string detail) {
  checks.push_back(CheckRecord{std::move(label), o, std::move(detail)});
}

std::string Report::to_text() const {
  std::string out;
  out += "command: " + command + "\n";
  out += "outcome: " + std::string(outcome_name(outcome())) + "\n";
  for (const auto& c : checks) {
    out += "  " + std::string(outcome_name(c.outcome)) + "  " + c.label;
    if (!c.detail.empty()) out += "  (" + c.detail + ")";
    out += "\n";
  }
  for (const auto& l : payload) out += l + "\n";
  return out;
}

std::string Report::to_structured() const {
  std::string out;
  out += "koszulkit-report 1\n";
  out += "command " + command + "\n";
  out += "digest " + (digest.empty() ? std::string("-") : digest) + "\n";
  out += "seed " + std::to_string(seed) + "\n";
  out += "outcome " + std::string(outcome_name(outcome())) + "\n";
  out += "checks " + std::to_string(checks.size()) + "\n";
  for (const auto& c : checks) {
    out += "check " + std::string(outcome_name(c.outcome)) + " " + c.label;
    if (!c.detail.empty()) out += " -- " + c.detail;
    out += "\n";
  }
  out += "payload " + std::to_string(payload.size()) + "\n";
  for (const auto& l : payload) out += l + "\n";
  out += "end\n";
  return out;
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[(std::size_t)i] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

}  // namespace koszulkit
