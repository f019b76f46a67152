#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>
#include <string_view>

namespace bunkbed {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Parses "num/den", an integer, or a plain decimal literal such as "0.125"
/// into an exact, canonicalized rational. Throws InvalidInput on anything else.
Rational parse_rational(std::string_view text);

/// "num/den", or just "num" for integers.
std::string to_string(const Rational& q);

double to_double(const Rational& q);

/// An exact probability in [0,1], kept in lowest terms.
class Probability {
 public:
  Probability() = default;
  explicit Probability(Rational value);
  Probability(long num, unsigned long den);

  static Probability parse(std::string_view text);
  static Probability zero() { return Probability{}; }
  static Probability one() { return Probability{1, 1}; }

  const Rational& value() const noexcept { return value_; }
  Rational complement() const { return 1 - value_; }
  bool is_zero() const { return sgn(value_) == 0; }
  bool is_one() const { return value_ == 1; }
  std::string str() const { return to_string(value_); }

  friend bool operator==(const Probability& a, const Probability& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Probability& a, const Probability& b) {
    int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  Rational value_{0};
};

}  // namespace bunkbed
