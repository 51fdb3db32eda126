#include "twofold/numeric.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

#include "mpfr_util.hpp"

namespace twofold {

namespace {

double down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
double up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

Integer parse_integer(std::string_view s, std::string_view whole) {
  bool neg = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw ValidationError("malformed rational: '" + std::string(whole) + "'");
  Integer v(std::string(s), 10);
  return neg ? Integer(-v) : v;
}

Integer pow10(unsigned e) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) throw ValidationError("empty rational");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(trim(s.substr(0, slash)), s);
    Integer den = parse_integer(trim(s.substr(slash + 1)), s);
    if (den == 0) throw ValidationError("zero denominator: '" + std::string(s) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  std::string_view body = s;
  bool neg = false;
  if (body.front() == '+' || body.front() == '-') {
    neg = body.front() == '-';
    body.remove_prefix(1);
  }
  long exp10 = 0;
  if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
    Integer ev = parse_integer(body.substr(e + 1), s);
    if (!ev.fits_slong_p() || abs(ev) > 100000) throw ValidationError("exponent out of range: '" + std::string(s) + "'");
    exp10 = ev.get_si();
    body = body.substr(0, e);
  }
  std::string digits;
  if (auto dot = body.find('.'); dot != std::string_view::npos) {
    std::string_view ip = body.substr(0, dot), fp = body.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
      throw ValidationError("malformed rational: '" + std::string(s) + "'");
    digits = std::string(ip) + std::string(fp);
    exp10 -= static_cast<long>(fp.size());
  } else {
    if (!all_digits(body)) throw ValidationError("malformed rational: '" + std::string(s) + "'");
    digits = std::string(body);
  }
  Rational r{Integer(digits, 10)};
  if (exp10 > 0) r *= pow10(static_cast<unsigned>(exp10));
  if (exp10 < 0) r /= pow10(static_cast<unsigned>(-exp10));
  r.canonicalize();
  return neg ? Rational(-r) : r;
}

std::string to_string(const Rational& x) {
  Rational c(x);
  c.canonicalize();
  return c.get_str();
}

Rational pow(const Rational& base, unsigned exponent) {
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
  // Powers of a canonical fraction are canonical (sign handled by the numerator).
  return r;
}

Integer floor(const Rational& x) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

std::vector<Integer> continued_fraction(const Rational& x, std::size_t max_terms) {
  if (x < 0) throw ValidationError("continued_fraction: negative argument");
  std::vector<Integer> out;
  Integer num = x.get_num(), den = x.get_den();
  while (den != 0 && out.size() < max_terms) {
    Integer a;
    mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    out.push_back(a);
    Integer rem = num - a * den;
    num = den;
    den = rem;
  }
  return out;
}

std::vector<Rational> convergents(const std::vector<Integer>& a) {
  std::vector<Rational> out;
  Integer h_prev = 1, h_prev2 = 0, k_prev = 0, k_prev2 = 1;
  for (const Integer& ai : a) {
    Integer h = ai * h_prev + h_prev2;
    Integer k = ai * k_prev + k_prev2;
    out.emplace_back(h, k);
    out.back().canonicalize();
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
  }
  return out;
}

Rational simplest_between(const Rational& lo, const Rational& hi) {
  if (!(lo < hi) || lo < 0) throw ValidationError("simplest_between: need 0 <= lo < hi");
  const Integer fl = floor(lo);
  if (Rational(fl + 1) < hi) return Rational(fl + 1);
  // Both ends share the integer part fl; recurse on the reciprocal of the
  // fractional parts, which reverses the interval.
  const Rational lo_frac = lo - fl;
  const Rational hi_frac = hi - fl;
  Rational y;
  if (lo_frac == 0) {
    y = Rational(floor(1 / hi_frac) + 1);
  } else {
    y = simplest_between(1 / hi_frac, 1 / lo_frac);
  }
  Rational r = fl + 1 / y;
  r.canonicalize();
  return r;
}

double to_double(const Rational& x) {
  mpfr_t t;
  mpfr_init2(t, 53);
  mpfr_set_q(t, x.get_mpq_t(), MPFR_RNDN);
  const double d = mpfr_get_d(t, MPFR_RNDN);
  mpfr_clear(t);
  return d;
}

Rational best_approximation(const Rational& x, const Integer& max_den) {
  if (max_den < 1) throw ValidationError("best_approximation: max_den must be >= 1");
  if (x.get_den() <= max_den) return x;
  const bool neg = x < 0;
  const Rational ax = neg ? Rational(-x) : x;
  const auto cf = continued_fraction(ax, 4096);
  Integer h1 = 1, h0 = 0, k1 = 0, k0 = 1;  // h1/k1 current, h0/k0 previous
  Rational best(floor(ax));
  for (const Integer& a : cf) {
    Integer h = a * h1 + h0, k = a * k1 + k0;
    if (k > max_den) {
      // Semiconvergent with the largest admissible multiplier.
      Integer t = (max_den - k0) / k1;
      Rational semi(t * h1 + h0, t * k1 + k0);
      semi.canonicalize();
      Rational conv(h1, k1);
      conv.canonicalize();
      best = abs(semi - ax) < abs(conv - ax) ? semi : conv;
      break;
    }
    h0 = h1;
    h1 = h;
    k0 = k1;
    k1 = k;
    best = Rational(h, k);
    best.canonicalize();
  }
  return neg ? Rational(-best) : best;
}

// ---------------------------------------------------------------------------

Interval::Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
  if (!(lo <= hi)) throw std::logic_error("Interval: lo > hi");
}

Interval Interval::enclose(const Rational& x) {
  const double d = x.get_d();
  const int c = cmp(x, Rational(d));
  if (c == 0) return point(d);
  return c < 0 ? Interval(down(d), d) : Interval(d, up(d));
}

bool Interval::contains(const Rational& x) const { return Rational(lo) <= x && x <= Rational(hi); }

Interval operator+(const Interval& a, const Interval& b) { return {down(a.lo + b.lo), up(a.hi + b.hi)}; }
Interval operator-(const Interval& a, const Interval& b) { return {down(a.lo - b.hi), up(a.hi - b.lo)}; }
Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

Interval operator*(const Interval& a, const Interval& b) {
  const double c[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  const auto [mn, mx] = std::minmax_element(std::begin(c), std::end(c));
  return {down(*mn), up(*mx)};
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.lo <= 0.0 && b.hi >= 0.0) throw std::domain_error("Interval division by an interval containing 0");
  const double c[4] = {a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi};
  const auto [mn, mx] = std::minmax_element(std::begin(c), std::end(c));
  return {down(*mn), up(*mx)};
}

Interval pow(const Interval& base, unsigned exponent) {
  Interval r = Interval::point(1.0);
  Interval b = base;
  while (exponent) {
    if (exponent & 1u) r = r * b;
    exponent >>= 1u;
    if (exponent) b = b * b;
  }
  return r;
}

Interval hull(const Interval& a, const Interval& b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

// ---------------------------------------------------------------------------

const Rational& Scalar::exact() const {
  if (const auto* q = std::get_if<Rational>(&value_)) return *q;
  throw std::logic_error("Scalar::exact() on a RoundedInterval value");
}

Interval Scalar::enclosure() const {
  if (const auto* q = std::get_if<Rational>(&value_)) return Interval::enclose(*q);
  return std::get<Interval>(value_);
}

double Scalar::lower() const { return enclosure().lo; }
double Scalar::upper() const { return enclosure().hi; }
double Scalar::approx() const {
  if (const auto* q = std::get_if<Rational>(&value_)) return to_double(*q);
  return std::get<Interval>(value_).mid();
}

std::string Scalar::str() const {
  if (const auto* q = std::get_if<Rational>(&value_)) return to_string(*q);
  const Interval& iv = std::get<Interval>(value_);
  std::ostringstream os;
  os.precision(17);
  os << '[' << iv.lo << ',' << iv.hi << ']';
  return os.str();
}

#define TWOFOLD_SCALAR_BINOP(OP)                                        \
  Scalar operator OP(const Scalar& a, const Scalar& b) {                \
    if (a.is_exact() && b.is_exact()) return Scalar(a.exact() OP b.exact()); \
    return Scalar(a.enclosure() OP b.enclosure());                      \
  }
TWOFOLD_SCALAR_BINOP(+)
TWOFOLD_SCALAR_BINOP(-)
TWOFOLD_SCALAR_BINOP(*)
#undef TWOFOLD_SCALAR_BINOP

Scalar operator/(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) {
    if (b.exact() == 0) throw std::domain_error("Scalar division by zero");
    return Scalar(Rational(a.exact() / b.exact()));
  }
  return Scalar(a.enclosure() / b.enclosure());
}

Scalar operator-(const Scalar& a) {
  if (a.is_exact()) return Scalar(Rational(-a.exact()));
  return Scalar(-a.enclosure());
}

Scalar pow(const Scalar& base, unsigned exponent) {
  if (base.is_exact()) return Scalar(pow(base.exact(), exponent));
  return Scalar(pow(base.enclosure(), exponent));
}

bool certainly_less(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return a.exact() < b.exact();
  return a.upper() < b.lower();
}

bool certainly_less_equal(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return a.exact() <= b.exact();
  return a.upper() <= b.lower();
}

bool certainly_equal(const Scalar& a, const Scalar& b) {
  return a.is_exact() && b.is_exact() && a.exact() == b.exact();
}

bool possibly_equal(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return a.exact() == b.exact();
  return a.lower() <= b.upper() && b.lower() <= a.upper();
}

Scalar min(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return a.exact() <= b.exact() ? a : b;
  const Interval x = a.enclosure(), y = b.enclosure();
  return Scalar(Interval(std::min(x.lo, y.lo), std::min(x.hi, y.hi)));
}

Scalar max(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return a.exact() >= b.exact() ? a : b;
  const Interval x = a.enclosure(), y = b.enclosure();
  return Scalar(Interval(std::max(x.lo, y.lo), std::max(x.hi, y.hi)));
}

Scalar abs(const Scalar& a) {
  if (a.is_exact()) return Scalar(Rational(abs(a.exact())));
  const Interval x = a.enclosure();
  if (x.lo >= 0) return a;
  if (x.hi <= 0) return Scalar(-x);
  return Scalar(Interval(0.0, std::max(-x.lo, x.hi)));
}

Scalar parse_scalar(std::string_view text, bool as_interval) {
  Scalar s(parse_rational(text));
  return as_interval ? s.to_interval() : s;
}

Interval RationalInterval::enclosure() const {
  return {Interval::enclose(lo).lo, Interval::enclose(hi).hi};
}

// ---------------------------------------------------------------------------

Params::Params(Scalar p, Scalar q) : p_(std::move(p)), q_(std::move(q)) {
  const Scalar zero(0L), bound(Rational(1, 16));
  auto check = [&](const Scalar& v, const char* name) {
    if (!certainly_less(zero, v) || !certainly_less_equal(v, bound))
      throw ValidationError(std::string(name) + " = " + v.str() + " is not inside (0, 1/16]");
  };
  check(p_, "p");
  check(q_, "q");
}

Params Params::parse(std::string_view p, std::string_view q, bool as_interval) {
  return Params(parse_scalar(p, as_interval), parse_scalar(q, as_interval));
}

bool operator==(const Params& a, const Params& b) {
  return certainly_equal(a.p_, b.p_) && certainly_equal(a.q_, b.q_);
}

Scalar monomial(const Params& params, int m, int n, const Limits& limits) {
  if (m < 0 || n < 0) throw ValidationError("monomial: exponents must be nonnegative");
  if (static_cast<long>(m) + n > limits.max_exponent)
    throw BudgetError("monomial: exponent sum " + std::to_string(static_cast<long>(m) + n) + " exceeds cap " +
                      std::to_string(limits.max_exponent));
  return pow(params.p(), static_cast<unsigned>(m)) * pow(params.q(), static_cast<unsigned>(n));
}

RationalInterval log_ratio(const Params& params, int precision) {
  if (precision < 53) throw ValidationError("log_ratio: precision must be >= 53 bits");
  const mpfr_prec_t work = precision + 16;
  using detail::BigInterval;
  const BigInterval lp = detail::log_pos(BigInterval::from(params.p(), work));
  const BigInterval lq = detail::log_pos(BigInterval::from(params.q(), work));
  // Both logs are negative: the quotient's smallest value pairs the
  // smallest |log p| with the largest |log q|.
  BigInterval r(work);
  mpfr_div(r.lo.get(), lp.hi.get(), lq.lo.get(), MPFR_RNDD);
  mpfr_div(r.hi.get(), lp.lo.get(), lq.hi.get(), MPFR_RNDU);
  return r.to_rational();
}

}  // namespace twofold
