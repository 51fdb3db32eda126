#pragma once

// Scalar kernel: exact rationals (GMP) and outward-rounded double intervals.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace twofold {

using Integer = mpz_class;
using Rational = mpq_class;

/// Raised when user-facing input violates a documented precondition
/// (parameters outside (0,1/16], malformed rational strings, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a configured computation cap (exponent, depth, work) is hit.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Limits {
  int max_exponent = 4096;    // cap on m+n in p^m q^n
  int max_cover_depth = 12;   // cap on full interval-cover depth
  std::size_t max_pairs = 200000;  // cap on live cylinder pairs in certification
};

// ---------------------------------------------------------------------------
// Rational helpers

/// Parses "a/b", integers, and decimals ("0.05", "-1.5e-3") exactly.
Rational parse_rational(std::string_view text);

/// "a/b" or "a" in lowest terms.
std::string to_string(const Rational& x);

Rational pow(const Rational& base, unsigned exponent);

/// Nearest double (ties to even).
double to_double(const Rational& x);
Integer floor(const Rational& x);

/// Partial quotients of x >= 0, at most max_terms of them.
std::vector<Integer> continued_fraction(const Rational& x, std::size_t max_terms = 64);
std::vector<Rational> convergents(const std::vector<Integer>& partial_quotients);

/// Rational with the smallest numerator and denominator in the open
/// interval (lo, hi), 0 <= lo < hi.
Rational simplest_between(const Rational& lo, const Rational& hi);

/// Closest rational to x with denominator <= max_den (ties toward the
/// smaller denominator).
Rational best_approximation(const Rational& x, const Integer& max_den);

// ---------------------------------------------------------------------------
// Outward-rounded interval of doubles. Every operation widens the
// round-to-nearest result by one ulp on each side, so the exact real result
// of the operation on any points of the operands stays inside.

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  Interval() = default;
  Interval(double lo_, double hi_);
  static Interval point(double x) { return Interval(x, x); }
  static Interval enclose(const Rational& x);

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool contains(const Rational& x) const;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);
Interval pow(const Interval& base, unsigned exponent);
Interval hull(const Interval& a, const Interval& b);

// ---------------------------------------------------------------------------
// Scalar: one number in one of the two modes. Mixed-mode arithmetic promotes
// to RoundedInterval.

class Scalar {
 public:
  enum class Mode { ExactRational, RoundedInterval };

  Scalar() : value_(Rational(0)) {}
  Scalar(long v) : value_(Rational(v)) {}  // NOLINT(google-explicit-constructor)
  explicit Scalar(Rational v) : value_(std::move(v)) { std::get<Rational>(value_).canonicalize(); }
  explicit Scalar(Interval v) : value_(v) {}

  Mode mode() const {
    return std::holds_alternative<Rational>(value_) ? Mode::ExactRational : Mode::RoundedInterval;
  }
  bool is_exact() const { return mode() == Mode::ExactRational; }

  /// Throws std::logic_error in interval mode.
  const Rational& exact() const;
  Interval enclosure() const;
  Scalar to_interval() const { return Scalar(enclosure()); }

  double lower() const;
  double upper() const;
  double approx() const;

  /// Rational string in exact mode, "[lo,hi]" otherwise.
  std::string str() const;

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

 private:
  std::variant<Rational, Interval> value_;
};

Scalar pow(const Scalar& base, unsigned exponent);

/// a < b holds for every pair of points of the operands.
bool certainly_less(const Scalar& a, const Scalar& b);
bool certainly_less_equal(const Scalar& a, const Scalar& b);
/// Only exact scalars can be certainly equal.
bool certainly_equal(const Scalar& a, const Scalar& b);
/// The operands' enclosures intersect.
bool possibly_equal(const Scalar& a, const Scalar& b);

/// Exact min/max in exact mode, interval hull of candidates otherwise.
Scalar min(const Scalar& a, const Scalar& b);
Scalar max(const Scalar& a, const Scalar& b);
Scalar abs(const Scalar& a);

/// Parses a flag value: exact rational unless as_interval is set.
Scalar parse_scalar(std::string_view text, bool as_interval = false);

// ---------------------------------------------------------------------------
// Closed interval with exact rational endpoints.

struct RationalInterval {
  Rational lo;
  Rational hi;

  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  Rational width() const { return hi - lo; }
  Rational mid() const { return (lo + hi) / 2; }
  Interval enclosure() const;
};

// ---------------------------------------------------------------------------

/// A validated parameter pair with 0 < p, q <= 1/16 (the closed end is kept so the boundary examples
/// p = 1/16 stay usable).
class Params {
 public:
  /// Throws ValidationError unless both values certainly lie in (0, 1/16].
  Params(Scalar p, Scalar q);
  static Params exact(const Rational& p, const Rational& q) { return Params(Scalar(p), Scalar(q)); }
  static Params parse(std::string_view p, std::string_view q, bool as_interval = false);

  const Scalar& p() const { return p_; }
  const Scalar& q() const { return q_; }
  bool is_exact() const { return p_.is_exact() && q_.is_exact(); }
  Scalar::Mode mode() const { return is_exact() ? Scalar::Mode::ExactRational : Scalar::Mode::RoundedInterval; }
  /// Larger of p and q (interval hull if undecidable).
  Scalar max_ratio() const { return max(p_, q_); }
  Params to_interval() const { return Params(p_.to_interval(), q_.to_interval()); }

  friend bool operator==(const Params& a, const Params& b);

 private:
  Scalar p_;
  Scalar q_;
};

/// p^m q^n in the mode of the parameters.
Scalar monomial(const Params& params, int m, int n, const Limits& limits = {});

/// Enclosure of log p / log q computed with directed rounding at the given
/// working precision (bits). Width <= 2^(1-precision) * |log p / log q|.
RationalInterval log_ratio(const Params& params, int precision = 53);

}  // namespace twofold
