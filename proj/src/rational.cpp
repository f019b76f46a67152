#include "bunkbed/rational.hpp"

#include <cctype>
#include <utility>

#include "bunkbed/errors.hpp"

namespace bunkbed {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Rational q;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
      throw InvalidInput("malformed rational '" + std::string(text) + "'");
    BigInt d(std::string(den), 10);
    if (d == 0) throw InvalidInput("zero denominator in '" + std::string(text) + "'");
    q = Rational(BigInt(std::string(num), 10), d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac)))
      throw InvalidInput("malformed decimal '" + std::string(text) + "'");
    std::string digits = std::string(whole) + std::string(frac);
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    q = Rational(BigInt(digits, 10), den);
  } else {
    if (!all_digits(body)) throw InvalidInput("malformed number '" + std::string(text) + "'");
    q = Rational(BigInt(std::string(body), 10));
  }
  q.canonicalize();
  if (negative) q = -q;
  return q;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_str();
}

double to_double(const Rational& q) { return q.get_d(); }

Probability::Probability(Rational value) : value_(std::move(value)) {
  value_.canonicalize();
  if (sgn(value_) < 0 || value_ > 1)
    throw InvalidInput("probability " + to_string(value_) + " outside [0,1]");
}

Probability::Probability(long num, unsigned long den) {
  if (den == 0) throw InvalidInput("zero denominator");
  value_ = Rational(num, den);
  value_.canonicalize();
  if (sgn(value_) < 0 || value_ > 1)
    throw InvalidInput("probability " + to_string(value_) + " outside [0,1]");
}

Probability Probability::parse(std::string_view text) { return Probability(parse_rational(text)); }

}  // namespace bunkbed
