#include "bunkbed/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace bunkbed {

std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

bool VerificationReport::add(Assertion a) {
  const bool ok = a.passed;
  assertions_.push_back(std::move(a));
  return ok;
}

bool VerificationReport::check_equal(std::string name, const Rational& lhs, const Rational& rhs, std::string note) {
  return add({std::move(name), "==", to_string(lhs), to_string(rhs), lhs == rhs, std::move(note)});
}

bool VerificationReport::check_geq(std::string name, const Rational& lhs, const Rational& rhs, std::string note) {
  return add({std::move(name), ">=", to_string(lhs), to_string(rhs), lhs >= rhs, std::move(note)});
}

bool VerificationReport::check_close(std::string name, double lhs, double rhs, double tolerance, std::string note) {
  const bool ok = std::isfinite(lhs) && std::isfinite(rhs) && std::abs(lhs - rhs) <= tolerance;
  if (note.empty()) note = "tolerance " + format_double(tolerance);
  return add({std::move(name), "~=", format_double(lhs), format_double(rhs), ok, std::move(note)});
}

bool VerificationReport::check_geq(std::string name, double lhs, double rhs, std::string note) {
  return add({std::move(name), ">=", format_double(lhs), format_double(rhs), lhs >= rhs, std::move(note)});
}

bool VerificationReport::check(std::string name, bool ok, std::string note) {
  return add({std::move(name), "holds", ok ? "true" : "false", "true", ok, std::move(note)});
}

void VerificationReport::absorb(const VerificationReport& other, const std::string& prefix) {
  for (auto a : other.assertions_) {
    a.name = prefix + a.name;
    assertions_.push_back(std::move(a));
  }
}

bool VerificationReport::passed() const { return failures() == 0; }

std::size_t VerificationReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(assertions_.begin(), assertions_.end(), [](const Assertion& a) { return !a.passed; }));
}

nlohmann::ordered_json VerificationReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["kind"] = kind_;
  doc["passed"] = passed();
  doc["context"] = context_;
  auto list = nlohmann::ordered_json::array();
  for (const auto& a : assertions_) {
    nlohmann::ordered_json item;
    item["name"] = a.name;
    item["relation"] = a.relation;
    item["lhs"] = a.lhs;
    item["rhs"] = a.rhs;
    item["passed"] = a.passed;
    if (!a.note.empty()) item["note"] = a.note;
    list.push_back(std::move(item));
  }
  doc["assertions"] = std::move(list);
  return doc;
}

std::string VerificationReport::to_text() const {
  std::ostringstream out;
  out << kind_ << ": " << (passed() ? "PASS" : "FAIL") << " (" << assertions_.size() - failures() << "/"
      << assertions_.size() << ")\n";
  for (const auto& a : assertions_) {
    out << (a.passed ? "  ok   " : "  FAIL ") << a.name << ": " << a.lhs << " " << a.relation << " " << a.rhs;
    if (!a.note.empty()) out << "  [" << a.note << "]";
    out << "\n";
  }
  return out.str();
}

}  // namespace bunkbed
