#include "bunkbed/polynomial.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "bunkbed/enumeration.hpp"
#include "bunkbed/errors.hpp"

namespace bunkbed {

RationalPolynomial::RationalPolynomial(std::vector<Rational> coefficients) : coeffs_(std::move(coefficients)) {
  for (auto& c : coeffs_) c.canonicalize();
  trim();
}

RationalPolynomial RationalPolynomial::constant(Rational c) { return RationalPolynomial({std::move(c)}); }

RationalPolynomial RationalPolynomial::monomial(Rational c, std::size_t k) {
  std::vector<Rational> v(k + 1, Rational(0));
  v[k] = std::move(c);
  return RationalPolynomial(std::move(v));
}

void RationalPolynomial::trim() {
  while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
}

bool RationalPolynomial::has_integer_coefficients() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return c.get_den() == 1; });
}

Rational RationalPolynomial::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

RationalPolynomial RationalPolynomial::derivative() const {
  std::vector<Rational> d;
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d.push_back(coeffs_[k] * static_cast<unsigned long>(k));
  return RationalPolynomial(std::move(d));
}

RationalPolynomial RationalPolynomial::compose_affine(const Rational& a, const Rational& s) const {
  // Horner in polynomial arithmetic: acc = acc * (a + s x) + c_k
  RationalPolynomial lin({a, s});
  RationalPolynomial acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * lin + constant(*it);
  return acc;
}

RationalPolynomial& RationalPolynomial::operator+=(const RationalPolynomial& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Rational(0));
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  trim();
  return *this;
}

RationalPolynomial& RationalPolynomial::operator-=(const RationalPolynomial& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Rational(0));
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  trim();
  return *this;
}

RationalPolynomial operator*(const RationalPolynomial& a, const RationalPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> out(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return RationalPolynomial(std::move(out));
}

RationalPolynomial operator*(RationalPolynomial a, const Rational& c) {
  for (auto& x : a.coeffs_) x *= c;
  a.trim();
  return a;
}

std::pair<RationalPolynomial, RationalPolynomial> RationalPolynomial::divmod(const RationalPolynomial& a,
                                                                            const RationalPolynomial& b) {
  if (b.is_zero()) throw PreconditionError("polynomial division by zero");
  std::vector<Rational> rem = a.coeffs_;
  const std::size_t db = b.coeffs_.size() - 1;
  if (rem.size() <= db) return {RationalPolynomial{}, a};
  std::vector<Rational> quot(rem.size() - db, Rational(0));
  for (std::size_t k = rem.size(); k-- > db;) {
    const Rational f = rem[k] / b.coeffs_.back();
    quot[k - db] = f;
    if (sgn(f) == 0) continue;
    for (std::size_t j = 0; j <= db; ++j) rem[k - db + j] -= f * b.coeffs_[j];
  }
  rem.resize(db);
  return {RationalPolynomial(std::move(quot)), RationalPolynomial(std::move(rem))};
}

RationalPolynomial RationalPolynomial::gcd(RationalPolynomial a, RationalPolynomial b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  const Rational lead = a.leading();
  return a * (1 / lead);
}

std::string RationalPolynomial::str() const {
  if (is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    const Rational& c = coeffs_[k];
    if (sgn(c) == 0) continue;
    const Rational mag = abs(c);
    if (first) out << (sgn(c) < 0 ? "-" : "");
    else out << (sgn(c) < 0 ? " - " : " + ");
    first = false;
    if (k == 0) {
      out << to_string(mag);
      continue;
    }
    if (mag != 1) out << to_string(mag) << "*";
    out << "p";
    if (k > 1) out << "^" << k;
  }
  return out.str();
}

nlohmann::ordered_json to_json(const RationalPolynomial& poly) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : poly.coefficients()) arr.push_back(to_string(c));
  return arr;
}

RationalPolynomial polynomial_from_json(const nlohmann::json& doc) {
  if (!doc.is_array()) throw InvalidInput("polynomial: expected an array of coefficient strings");
  std::vector<Rational> c;
  for (const auto& x : doc) {
    if (!x.is_string()) throw InvalidInput("polynomial: coefficients must be strings");
    c.push_back(parse_rational(x.get<std::string>()));
  }
  return RationalPolynomial(std::move(c));
}

RationalPolynomial polynomial_from_cells(std::span<const EventTallies::Cell> cells) {
  std::vector<RationalPolynomial> closed_powers{RationalPolynomial::constant(1)};
  const RationalPolynomial q({Rational(1), Rational(-1)});
  RationalPolynomial total;
  for (const auto& cell : cells) {
    if (cell.open.size() != 1) throw PreconditionError("polynomial tallies need exactly one weight class");
    while (closed_powers.size() <= cell.closed[0]) closed_powers.push_back(closed_powers.back() * q);
    total += RationalPolynomial::monomial(Rational(static_cast<unsigned long>(cell.count)), cell.open[0]) *
             closed_powers[cell.closed[0]];
  }
  return total;
}

std::vector<RationalPolynomial> event_polynomials(const PercolationModel& structure,
                                                  std::span<const std::uint32_t> edge_class,
                                                  std::span<const ConnectivityEvent> events,
                                                  const EngineOptions& options) {
  const auto tallies = tally_events(structure, edge_class, 1, events, options);
  std::vector<RationalPolynomial> out;
  for (std::size_t e = 0; e < events.size(); ++e) out.push_back(polynomial_from_cells(tallies.cells(e)));
  return out;
}

RationalPolynomial connection_polynomial(const BunkbedGraph& b, std::size_t a, std::size_t c,
                                         const EngineOptions& options) {
  const auto model = percolation_model(b);
  std::vector<std::uint32_t> classes(model.edges.size(), 0);
  for (std::size_t e = 0; e < 2 * b.base().edge_count(); ++e)
    if (model.edges[e].p.is_zero()) classes[e] = enumeration::kForcedClosed;
  const auto event = ConnectivityEvent::connect(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(c));
  return event_polynomials(model, classes, std::span(&event, 1), options).front();
}

namespace {

GapPolynomials gap_polynomials_with(const WeightedGraph& g, std::size_t v, std::size_t w,
                                    const std::vector<std::uint32_t>& vertical_class,
                                    const EngineOptions& options) {
  if (v >= g.vertex_count() || w >= g.vertex_count()) throw InvalidInput("vertex out of range");
  const BunkbedGraph b(g);
  const auto model = percolation_model(b);
  std::vector<std::uint32_t> classes(model.edges.size(), 0);
  for (std::size_t e = 0; e < 2 * g.edge_count(); ++e)
    if (model.edges[e].p.is_zero()) classes[e] = enumeration::kForcedClosed;
  for (std::size_t u = 0; u < g.vertex_count(); ++u) classes[b.vertical_edge(u)] = vertical_class[u];
  const auto vm = static_cast<std::uint32_t>(b.lower(v));
  const ConnectivityEvent events[] = {ConnectivityEvent::connect(vm, static_cast<std::uint32_t>(b.lower(w))),
                                      ConnectivityEvent::connect(vm, static_cast<std::uint32_t>(b.upper(w)))};
  auto polys = event_polynomials(model, classes, events, options);
  return {std::move(polys[0]), std::move(polys[1])};
}

}  // namespace

GapPolynomials gap_polynomials(const WeightedGraph& g, std::size_t v, std::size_t w,
                               const EngineOptions& options) {
  return gap_polynomials_with(g, v, w, std::vector<std::uint32_t>(g.vertex_count(), 0), options);
}

RationalPolynomial gap_polynomial(const WeightedGraph& g, std::size_t v, std::size_t w,
                                  const EngineOptions& options) {
  return gap_polynomials(g, v, w, options).gap();
}

RationalPolynomial gap_polynomial(const WeightedGraph& g, std::size_t v, std::size_t w,
                                  std::span<const std::size_t> h, const EngineOptions& options) {
  std::vector<std::uint32_t> vertical(g.vertex_count(), enumeration::kForcedClosed);
  for (auto u : h) vertical.at(u) = enumeration::kForcedOpen;
  return gap_polynomials_with(g, v, w, vertical, options).gap();
}

// Root isolation -------------------------------------------------------------

namespace {

int sign_variations(const RationalPolynomial& r) {
  int variations = 0, last = 0;
  for (const auto& c : r.coefficients()) {
    const int s = sgn(c);
    if (s == 0) continue;
    if (last != 0 && s != last) ++variations;
    last = s;
  }
  return variations;
}

// Upper bound (exact when 0 or 1) on the number of roots of q in (a, b).
int descartes_bound(const RationalPolynomial& q, const Rational& a, const Rational& b) {
  // R(x) = (x + 1)^d local(1 / (x + 1)) has as many positive roots as local has in (0, 1).
  const auto local = q.compose_affine(a, b - a);
  const auto d = static_cast<std::size_t>(q.degree());
  std::vector<Rational> rev(d + 1, Rational(0));
  for (std::size_t k = 0; k < local.coefficients().size(); ++k) rev[d - k] = local.coefficients()[k];
  return sign_variations(RationalPolynomial(std::move(rev)).compose_affine(1, 1));
}

struct Interval {
  Rational lo, hi;
};

// q square-free with q(a), q(b) != 0.
void isolate(const RationalPolynomial& q, const Rational& a, const Rational& b, std::vector<Interval>& out) {
  const int v = descartes_bound(q, a, b);
  if (v == 0) return;
  if (v == 1) {
    out.push_back({a, b});
    return;
  }
  Rational m = (a + b) / 2;
  for (unsigned long j = 2; sgn(q(m)) == 0; ++j) m = a + (b - a) * Rational(j, j + 1);
  isolate(q, a, m, out);
  isolate(q, m, b, out);
}

// A point strictly between `edge` and the single root of q inside (lo, hi),
// where edge is lo (toward_lo) or hi.
Rational point_beside_root(const RationalPolynomial& q, Rational lo, Rational hi, bool toward_lo) {
  const Rational edge = toward_lo ? lo : hi;
  const int edge_sign = sgn(q(edge));
  for (;;) {
    const Rational m = (lo + hi) / 2;
    const int s = sgn(q(m));
    if (s == 0) return (edge + m) / 2;
    if (s == edge_sign) return m;
    (toward_lo ? hi : lo) = m;
  }
}

}  // namespace

NonnegVerdict nonneg_on_unit_interval(const RationalPolynomial& poly) {
  NonnegVerdict verdict;
  if (poly.is_zero()) return verdict;
  if (poly.degree() == 0) {
    if (sgn(poly.leading()) < 0) {
      verdict.kind = NonnegVerdict::Kind::negative_at;
      verdict.witness = Rational(1, 2);
    }
    return verdict;
  }

  // Square-free part, with the roots at 0 and 1 divided out.
  RationalPolynomial q = RationalPolynomial::divmod(poly, RationalPolynomial::gcd(poly, poly.derivative())).first;
  const RationalPolynomial at_zero({Rational(0), Rational(1)});
  const RationalPolynomial at_one({Rational(1), Rational(-1)});
  if (sgn(q(0)) == 0) q = RationalPolynomial::divmod(q, at_zero).first;
  if (sgn(q(1)) == 0) q = RationalPolynomial::divmod(q, at_one).first;

  std::vector<Interval> roots;
  if (q.degree() > 0) isolate(q, 0, 1, roots);
  verdict.roots_in_interior = roots.size();

  // One sample point in each region between consecutive roots.
  std::vector<Rational> samples;
  if (roots.empty()) {
    samples.push_back(Rational(1, 2));
  } else {
    samples.push_back(sgn(roots.front().lo) > 0 ? roots.front().lo
                                                 : point_beside_root(q, roots.front().lo, roots.front().hi, true));
    for (std::size_t i = 0; i + 1 < roots.size(); ++i) samples.push_back(roots[i].hi);
    samples.push_back(roots.back().hi < 1 ? roots.back().hi
                                          : point_beside_root(q, roots.back().lo, roots.back().hi, false));
  }
  for (const auto& s : samples) {
    if (sgn(poly(s)) < 0) {
      verdict.kind = NonnegVerdict::Kind::negative_at;
      verdict.witness = s;
      return verdict;
    }
  }
  return verdict;
}

std::string to_string(NonnegVerdict::Kind kind) {
  switch (kind) {
    case NonnegVerdict::Kind::nonnegative: return "nonnegative";
    case NonnegVerdict::Kind::negative_at: return "negative-at";
    case NonnegVerdict::Kind::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

}  // namespace bunkbed
