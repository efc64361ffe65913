#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pcontest::alg {

using Rat = mpq_class;
using Int = mpz_class;

/// Fixed variable universe. The order is part of the serialization format:
/// exponent vectors and term ordering are always relative to this list.
enum class Var : int { a = 0, b, mu, p, M, delta, w, nu, x1, x2, x3, z };

inline constexpr int kNumVars = 12;

inline constexpr std::array<std::string_view, kNumVars> kVarNames{
    "a", "b", "mu", "p", "M", "delta", "w", "nu", "x1", "x2", "x3", "z"};

std::optional<Var> var_from_name(std::string_view name);

/// Exponent vector over the fixed variable universe. Lexicographic order on
/// the array (Var::a most significant) is the canonical term order.
using Expo = std::array<std::uint8_t, kNumVars>;

class RationalFn;

/// Sparse multivariate polynomial with exact rational coefficients.
/// Invariant: no zero coefficients are stored.
class Poly {
 public:
  Poly() = default;

  static Poly constant(Rat c);
  static Poly constant(long c) { return constant(Rat(c)); }
  static Poly variable(Var v);
  static Poly monomial(Rat c, const Expo& e);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Constant term (zero if absent). Only meaningful together with
  /// is_constant() when the poly is used as a scalar.
  Rat constant_value() const;

  std::size_t num_terms() const { return terms_.size(); }
  int degree(Var v) const;
  int total_degree() const;
  std::vector<Var> vars_used() const;

  const std::map<Expo, Rat>& terms() const { return terms_; }

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  friend Poly operator+(Poly l, const Poly& r) { return l += r; }
  friend Poly operator-(Poly l, const Poly& r) { return l -= r; }
  friend Poly operator*(const Poly& l, const Poly& r);
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  Poly& operator*=(const Rat& c);
  friend Poly operator*(Poly p, const Rat& c) { return p *= c; }
  friend Poly operator*(const Rat& c, Poly p) { return p *= c; }
  friend bool operator==(const Poly& l, const Poly& r) { return l.terms_ == r.terms_; }

  Poly pow(unsigned e) const;

  /// Substitute a polynomial for a variable.
  Poly subst(Var v, const Poly& repl) const;
  /// Substitute a rational function for a variable; clears the introduced
  /// denominator, so the result is exact.
  RationalFn subst(Var v, const RationalFn& repl) const;

  Poly derivative(Var v) const;
  /// Antiderivative in v with zero constant of integration.
  Poly antiderivative(Var v) const;

  /// Coefficients of v^k as polynomials free of v, keyed by k.
  std::map<int, Poly> coeffs_in(Var v) const;

  double eval_double(const std::array<double, kNumVars>& pt) const;
  Rat eval_rat(const std::array<Rat, kNumVars>& pt) const;

  /// Positive rational c such that (*this)/c has coprime integer
  /// coefficients. Zero poly has content 1.
  Rat content() const;
  /// this / content(), optionally forcing the lex-leading coefficient > 0.
  Poly primitive_part(bool positive_leading = false) const;

  /// Exact polynomial division: returns q with *this == q * d, or nullopt
  /// if no such polynomial exists. d must be nonzero.
  std::optional<Poly> divide_exact(const Poly& d) const;

  /// Human-readable rendering ("3*a^2*mu - 1/2*p").
  std::string to_string() const;

 private:
  void add_term(const Expo& e, const Rat& c);

  std::map<Expo, Rat> terms_;
};

/// Quotient of two polynomials. Kept reduced by content only (no polynomial
/// gcd): num and den have coprime integer coefficients and den's lex-leading
/// coefficient is positive. den is never the zero polynomial.
class RationalFn {
 public:
  RationalFn() : num_(), den_(Poly::constant(1)) {}
  RationalFn(Poly num, Poly den);
  /*implicit*/ RationalFn(Poly num) : RationalFn(std::move(num), Poly::constant(1)) {}

  static RationalFn constant(Rat c) { return RationalFn(Poly::constant(std::move(c))); }
  static RationalFn variable(Var v) { return RationalFn(Poly::variable(v)); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_poly() const { return den_.is_constant(); }
  /// num/den as a Poly; throws unless den is constant.
  Poly as_poly() const;

  RationalFn operator-() const;
  friend RationalFn operator+(const RationalFn& l, const RationalFn& r);
  friend RationalFn operator-(const RationalFn& l, const RationalFn& r);
  friend RationalFn operator*(const RationalFn& l, const RationalFn& r);
  friend RationalFn operator/(const RationalFn& l, const RationalFn& r);
  RationalFn& operator+=(const RationalFn& o) { return *this = *this + o; }
  RationalFn& operator-=(const RationalFn& o) { return *this = *this - o; }
  RationalFn& operator*=(const RationalFn& o) { return *this = *this * o; }
  RationalFn& operator/=(const RationalFn& o) { return *this = *this / o; }

  RationalFn pow(unsigned e) const;
  RationalFn subst(Var v, const RationalFn& repl) const;

  /// Exact equality as rational functions (cross-multiplication).
  bool equals(const RationalFn& o) const;

  double eval_double(const std::array<double, kNumVars>& pt) const;
  /// nullopt if the denominator vanishes at pt.
  std::optional<Rat> eval_rat(const std::array<Rat, kNumVars>& pt) const;

  std::string to_string() const;

 private:
  void normalize();

  Poly num_;
  Poly den_;
};

/// Definite integral of f in v between lo and hi; f's denominator must be
/// free of v and f's numerator polynomial in v (the drift increments are
/// quadratic in z, which is all this is used for).
RationalFn definite_integral(const RationalFn& f, Var v, const RationalFn& lo,
                             const RationalFn& hi);

/// Parses "+-*/^()"-expressions over integers and the fixed variable names.
/// Division is only allowed by (sub)expressions that evaluate to a nonzero
/// rational constant. Throws std::invalid_argument on malformed input.
Poly parse_poly(std::string_view text);

/// Exact sign of p at a rational point: -1, 0, +1. Clears denominators once
/// and evaluates in integer arithmetic with per-variable power tables.
int sign_at(const Poly& p, const std::array<Rat, kNumVars>& pt);

/// --- corpus serialization -------------------------------------------------
/// Plain-text polynomial container: per poly a "poly <name>" line, a header
/// naming its variables, then one monomial per line as "num/den e1 ... ek".
/// Round trips bit-exactly.
void write_poly(std::ostream& os, const std::string& name, const Poly& p);
std::string poly_to_text(const std::string& name, const Poly& p);

struct NamedPoly {
  std::string name;
  Poly poly;
};
std::vector<NamedPoly> read_polys(std::istream& is);
std::vector<NamedPoly> parse_polys(std::string_view text);

}  // namespace pcontest::alg
