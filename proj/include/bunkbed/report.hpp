#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "bunkbed/rational.hpp"

namespace bunkbed {

struct Assertion {
  std::string name;
  std::string relation;  // "==", ">=", "~=" (within tolerance)
  std::string lhs;
  std::string rhs;
  bool passed = false;
  std::string note;
};

/// A list of checked identities and inequalities with both computed sides.
class VerificationReport {
 public:
  explicit VerificationReport(std::string kind = {}) : kind_(std::move(kind)) {}

  bool check_equal(std::string name, const Rational& lhs, const Rational& rhs, std::string note = {});
  bool check_geq(std::string name, const Rational& lhs, const Rational& rhs, std::string note = {});
  bool check_close(std::string name, double lhs, double rhs, double tolerance, std::string note = {});
  bool check_geq(std::string name, double lhs, double rhs, std::string note = {});
  bool check(std::string name, bool ok, std::string note = {});

  /// Appends `other`'s assertions with their names prefixed.
  void absorb(const VerificationReport& other, const std::string& prefix);

  bool passed() const;
  std::size_t failures() const;
  const std::vector<Assertion>& assertions() const { return assertions_; }
  const std::string& kind() const { return kind_; }

  nlohmann::ordered_json& context() { return context_; }
  const nlohmann::ordered_json& context() const { return context_; }

  nlohmann::ordered_json to_json() const;
  /// One line per assertion.
  std::string to_text() const;

 private:
  bool add(Assertion a);

  std::string kind_;
  nlohmann::ordered_json context_ = nlohmann::ordered_json::object();
  std::vector<Assertion> assertions_;
};

/// Shortest round-trip decimal for a double.
std::string format_double(double x);

}  // namespace bunkbed
