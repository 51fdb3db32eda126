#pragma once

// Thin RAII wrapper over mpfr_t. Internal to the library.

#include <mpfr.h>

#include <utility>

#include "twofold/numeric.hpp"

namespace twofold::detail {

class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
  BigFloat(const BigFloat& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  BigFloat(BigFloat&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }
  BigFloat& operator=(BigFloat o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  static BigFloat from(const Rational& q, mpfr_prec_t prec, mpfr_rnd_t rnd) {
    BigFloat r(prec);
    mpfr_set_q(r.v_, q.get_mpq_t(), rnd);
    return r;
  }
  static BigFloat from(double d, mpfr_prec_t prec) {
    BigFloat r(prec);
    mpfr_set_d(r.v_, d, MPFR_RNDN);  // exact for prec >= 53
    return r;
  }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

  Rational to_rational() const {
    Rational q;
    mpfr_get_q(q.get_mpq_t(), v_);
    return q;
  }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

 private:
  mpfr_t v_;
};

/// Closed interval with MPFR endpoints; lo rounded down, hi rounded up.
struct BigInterval {
  BigFloat lo;
  BigFloat hi;

  explicit BigInterval(mpfr_prec_t prec) : lo(prec), hi(prec) {}

  static BigInterval from(const Rational& q, mpfr_prec_t prec) {
    BigInterval r(prec);
    mpfr_set_q(r.lo.get(), q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi.get(), q.get_mpq_t(), MPFR_RNDU);
    return r;
  }
  static BigInterval from(const Scalar& s, mpfr_prec_t prec) {
    if (s.is_exact()) return from(s.exact(), prec);
    BigInterval r(prec);
    Interval e = s.enclosure();
    mpfr_set_d(r.lo.get(), e.lo, MPFR_RNDD);
    mpfr_set_d(r.hi.get(), e.hi, MPFR_RNDU);
    return r;
  }
  static BigInterval from(const RationalInterval& s, mpfr_prec_t prec) {
    BigInterval r(prec);
    mpfr_set_q(r.lo.get(), s.lo.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi.get(), s.hi.get_mpq_t(), MPFR_RNDU);
    return r;
  }

  RationalInterval to_rational() const { return {lo.to_rational(), hi.to_rational()}; }
  mpfr_prec_t prec() const { return lo.prec(); }
};

inline BigInterval operator+(const BigInterval& a, const BigInterval& b) {
  BigInterval r(a.prec());
  mpfr_add(r.lo.get(), a.lo.get(), b.lo.get(), MPFR_RNDD);
  mpfr_add(r.hi.get(), a.hi.get(), b.hi.get(), MPFR_RNDU);
  return r;
}

inline BigInterval operator-(const BigInterval& a, const BigInterval& b) {
  BigInterval r(a.prec());
  mpfr_sub(r.lo.get(), a.lo.get(), b.hi.get(), MPFR_RNDD);
  mpfr_sub(r.hi.get(), a.hi.get(), b.lo.get(), MPFR_RNDU);
  return r;
}

/// Product of two intervals with nonnegative endpoints.
inline BigInterval mul_nonneg(const BigInterval& a, const BigInterval& b) {
  BigInterval r(a.prec());
  mpfr_mul(r.lo.get(), a.lo.get(), b.lo.get(), MPFR_RNDD);
  mpfr_mul(r.hi.get(), a.hi.get(), b.hi.get(), MPFR_RNDU);
  return r;
}

/// Quotient of two intervals with positive endpoints.
inline BigInterval div_pos(const BigInterval& a, const BigInterval& b) {
  BigInterval r(a.prec());
  mpfr_div(r.lo.get(), a.lo.get(), b.hi.get(), MPFR_RNDD);
  mpfr_div(r.hi.get(), a.hi.get(), b.lo.get(), MPFR_RNDU);
  return r;
}

/// base^x for base inside (0,1) and x >= 0: decreasing in x, increasing in base.
inline BigInterval pow_unit_base(const BigInterval& base, const BigInterval& x) {
  BigInterval r(base.prec());
  mpfr_pow(r.lo.get(), base.lo.get(), x.hi.get(), MPFR_RNDD);
  mpfr_pow(r.hi.get(), base.hi.get(), x.lo.get(), MPFR_RNDU);
  return r;
}

/// Natural log of an interval of positive reals.
inline BigInterval log_pos(const BigInterval& a) {
  BigInterval r(a.prec());
  mpfr_log(r.lo.get(), a.lo.get(), MPFR_RNDD);
  mpfr_log(r.hi.get(), a.hi.get(), MPFR_RNDU);
  return r;
}

}  // namespace twofold::detail
