#include "twofold/dimension.hpp"

#include <functional>

#include "mpfr_util.hpp"

namespace twofold {

using detail::BigInterval;

namespace {

// F(x) = p^x + q^x - (pq)^x - 1/2
BigInterval closed_form(const BigInterval& p, const BigInterval& q, const BigInterval& x) {
  const mpfr_prec_t prec = p.prec();
  const BigInterval px = detail::pow_unit_base(p, x);
  const BigInterval qx = detail::pow_unit_base(q, x);
  // (pq)^x = p^x q^x, monotone in both factors.
  const BigInterval pqx = detail::mul_nonneg(px, qx);
  return px + qx - pqx - BigInterval::from(Rational(1, 2), prec);
}

// G_n(x) = 2p^x + sum_{k=1..n} q^{kx} - 1
BigInterval truncated_form(const BigInterval& p, const BigInterval& q, const BigInterval& x, int n) {
  const mpfr_prec_t prec = p.prec();
  const BigInterval px = detail::pow_unit_base(p, x);
  const BigInterval qx = detail::pow_unit_base(q, x);
  BigInterval sum = px + px;
  BigInterval term = qx;
  for (int k = 1; k <= n; ++k) {
    sum = sum + term;
    if (k < n) term = detail::mul_nonneg(term, qx);
  }
  return sum - BigInterval::from(Rational(1), prec);
}

struct Bisection {
  RootBracket bracket;
  int iterations = 0;
};

// F is decreasing with F(lo) > 0 > F(hi).
Bisection bisect(const std::function<BigInterval(const BigInterval&)>& f, Rational lo, Rational hi,
                 const DimOptions& opt, mpfr_prec_t prec) {
  const Rational tol = opt.tol > 0 ? Rational(opt.tol) : Rational(0);
  Bisection b;
  while (true) {
    const Rational mid = (lo + hi) / 2;
    const BigInterval v = f(BigInterval::from(mid, prec));
    const bool pos = mpfr_sgn(v.lo.get()) > 0;
    const bool neg = mpfr_sgn(v.hi.get()) < 0;
    if (tol > 0 && hi - lo <= tol) {
      // Also require the residual over the whole bracket to be within tolerance.
      const RationalInterval r = f(BigInterval::from(RationalInterval{lo, hi}, prec)).to_rational();
      if (r.lo >= -tol && r.hi <= tol) break;
    }
    if (!pos && !neg) break;  // sign undecidable at this precision
    ++b.iterations;
    if (pos) lo = mid; else hi = mid;
    if (b.iterations > 4 * static_cast<int>(prec)) break;
  }
  b.bracket = {lo, hi};
  return b;
}

void check_options(const DimOptions& opt) {
  if (opt.tol < 0) throw ValidationError("tolerance must be >= 0");
  if (opt.precision < 53) throw ValidationError("precision must be >= 53 bits");
}

}  // namespace

DimResult solve_dim(const Params& params, DimOptions options) {
  check_options(options);
  const mpfr_prec_t prec = options.precision;
  const BigInterval p = BigInterval::from(params.p(), prec);
  const BigInterval q = BigInterval::from(params.q(), prec);
  auto f = [&](const BigInterval& x) { return closed_form(p, q, x); };
  // F(0) = 1/2 > 0 and F(1) = p + q - pq - 1/2 < 0 for p, q < 1/16.
  const Bisection b = bisect(f, Rational(0), Rational(1), options, prec);

  DimResult r;
  r.bracket = b.bracket;
  r.d = b.bracket.value();
  r.iterations = b.iterations;
  const RationalInterval res = f(BigInterval::from(RationalInterval{b.bracket.lo, b.bracket.hi}, prec)).to_rational();
  r.residual = res.enclosure();
  return r;
}

RootBracket truncated_dim(const Params& params, int n, DimOptions options) {
  check_options(options);
  if (n < 1) throw ValidationError("truncated_dim: n must be >= 1");
  const mpfr_prec_t prec = options.precision;
  const BigInterval p = BigInterval::from(params.p(), prec);
  const BigInterval q = BigInterval::from(params.q(), prec);
  auto g = [&](const BigInterval& x) { return truncated_form(p, q, x, n); };
  // G_n(0) = n + 1 > 0 and G_n(1) < 2p + q/(1-q) - 1 < 0.
  return bisect(g, Rational(0), Rational(1), options, prec).bracket;
}

bool LadderResult::certified_increasing() const {
  for (std::size_t i = 0; i + 1 < truncated.size(); ++i)
    if (!(truncated[i].hi < truncated[i + 1].lo)) return false;
  return truncated.empty() || truncated.back().hi < limit.lo;
}

LadderResult dimension_ladder(const Params& params, int max_n, DimOptions options) {
  if (max_n < 1) throw ValidationError("dimension_ladder: max_n must be >= 1");
  LadderResult r;
  r.truncated.reserve(static_cast<std::size_t>(max_n));
  for (int n = 1; n <= max_n; ++n) r.truncated.push_back(truncated_dim(params, n, options));
  r.limit = solve_dim(params, options).bracket;
  return r;
}

RationalInterval dim_series_residual(const Params& params, const RationalInterval& d, int terms, int precision) {
  if (!(d.lo > 0) || d.hi < d.lo) throw ValidationError("dim_series_residual: need 0 < d.lo <= d.hi");
  if (terms < 0) throw ValidationError("dim_series_residual: terms must be >= 0");
  if (precision < 53) throw ValidationError("precision must be >= 53 bits");
  const mpfr_prec_t prec = precision;
  const BigInterval p = BigInterval::from(params.p(), prec);
  const BigInterval q = BigInterval::from(params.q(), prec);
  const BigInterval x = BigInterval::from(d, prec);

  const BigInterval px = detail::pow_unit_base(p, x);
  const BigInterval qx = detail::pow_unit_base(q, x);
  BigInterval sum = px + px;
  BigInterval term = qx;  // q^{kx}
  for (int k = 1; k <= terms; ++k) {
    sum = sum + term;
    term = detail::mul_nonneg(term, qx);
  }
  // term now encloses q^{(terms+1)x}; geometric tail bound uses the largest values.
  BigInterval one_minus_qx = BigInterval::from(Rational(1), prec) - qx;
  BigInterval tail(prec);
  mpfr_set_zero(tail.lo.get(), 1);
  mpfr_div(tail.hi.get(), term.hi.get(), one_minus_qx.lo.get(), MPFR_RNDU);
  return (sum + tail - BigInterval::from(Rational(1), prec)).to_rational();
}

}  // namespace twofold
