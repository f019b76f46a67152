#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "bunkbed/exact.hpp"
#include "bunkbed/graph.hpp"
#include "bunkbed/rational.hpp"

namespace bunkbed {

/// Polynomial in one indeterminate p with exact rational coefficients,
/// coefficient k multiplying p^k. Trailing zeros are trimmed, so the zero
/// polynomial has no coefficients and degree -1.
class RationalPolynomial {
 public:
  RationalPolynomial() = default;
  explicit RationalPolynomial(std::vector<Rational> coefficients);

  static RationalPolynomial constant(Rational c);
  /// c * p^k
  static RationalPolynomial monomial(Rational c, std::size_t k);

  const std::vector<Rational>& coefficients() const noexcept { return coeffs_; }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  const Rational& leading() const { return coeffs_.back(); }
  Rational coefficient(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Rational(0); }
  bool has_integer_coefficients() const;

  Rational operator()(const Rational& x) const;
  RationalPolynomial derivative() const;
  /// q(x) = this(a + s x)
  RationalPolynomial compose_affine(const Rational& a, const Rational& s) const;

  RationalPolynomial& operator+=(const RationalPolynomial& o);
  RationalPolynomial& operator-=(const RationalPolynomial& o);
  friend RationalPolynomial operator+(RationalPolynomial a, const RationalPolynomial& b) { return a += b; }
  friend RationalPolynomial operator-(RationalPolynomial a, const RationalPolynomial& b) { return a -= b; }
  friend RationalPolynomial operator*(const RationalPolynomial& a, const RationalPolynomial& b);
  friend RationalPolynomial operator*(RationalPolynomial a, const Rational& c);
  friend bool operator==(const RationalPolynomial& a, const RationalPolynomial& b) = default;

  /// Quotient and remainder; throws PreconditionError on division by zero.
  static std::pair<RationalPolynomial, RationalPolynomial> divmod(const RationalPolynomial& a,
                                                                  const RationalPolynomial& b);
  /// Monic greatest common divisor (zero if both are zero).
  static RationalPolynomial gcd(RationalPolynomial a, RationalPolynomial b);

  /// e.g. "p - 2*p^2 + p^3"
  std::string str() const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

/// Degree-ascending array of coefficient strings.
nlohmann::ordered_json to_json(const RationalPolynomial& poly);
RationalPolynomial polynomial_from_json(const nlohmann::json& doc);

/// Σ count * p^open (1-p)^closed over tally cells of a single weight class.
RationalPolynomial polynomial_from_cells(std::span<const EventTallies::Cell> cells);

/// Default edge cap for polynomial construction.
inline constexpr std::size_t kPolynomialCap = 24;

/// Event probabilities as polynomials in p. edge_class[e] = 0 makes edge e
/// carry weight p; the enumeration::kForcedOpen / kForcedClosed sentinels fix it.
std::vector<RationalPolynomial> event_polynomials(const PercolationModel& structure,
                                                  std::span<const std::uint32_t> edge_class,
                                                  std::span<const ConnectivityEvent> events,
                                                  const EngineOptions& options = {kPolynomialCap, 0});

/// P_p(a ↔ c) with every horizontal and vertical edge at weight p.
/// Horizontal edges of weight 0 count as absent.
RationalPolynomial connection_polynomial(const BunkbedGraph& b, std::size_t a, std::size_t c,
                                         const EngineOptions& options = {kPolynomialCap, 0});

/// Both connection polynomials of a pair in the constant model. Only the edge
/// set of g matters; edges of weight 0 count as absent.
struct GapPolynomials {
  RationalPolynomial lower_lower;
  RationalPolynomial lower_upper;
  RationalPolynomial gap() const { return lower_lower - lower_upper; }
};

GapPolynomials gap_polynomials(const WeightedGraph& g, std::size_t v, std::size_t w,
                               const EngineOptions& options = {kPolynomialCap, 0});
RationalPolynomial gap_polynomial(const WeightedGraph& g, std::size_t v, std::size_t w,
                                  const EngineOptions& options = {kPolynomialCap, 0});
/// P_{p,H} variant: vertical edges open exactly on the vertices in `h`.
RationalPolynomial gap_polynomial(const WeightedGraph& g, std::size_t v, std::size_t w,
                                  std::span<const std::size_t> h,
                                  const EngineOptions& options = {kPolynomialCap, 0});

struct NonnegVerdict {
  enum class Kind { nonnegative, negative_at, inconclusive };
  Kind kind = Kind::nonnegative;
  /// For negative_at: a rational point in [0,1] where the polynomial is negative.
  std::optional<Rational> witness;
  /// Distinct real roots strictly inside (0,1).
  std::size_t roots_in_interior = 0;

  bool nonnegative() const { return kind == Kind::nonnegative; }
};

/// Decides whether poly >= 0 on [0,1] by exact root isolation.
NonnegVerdict nonneg_on_unit_interval(const RationalPolynomial& poly);
std::string to_string(NonnegVerdict::Kind kind);

}  // namespace bunkbed
