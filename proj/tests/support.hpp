#pragma once

// Deterministic generators shared by the property tests.

#include <random>

#include "twofold/ifs.hpp"
#include "twofold/numeric.hpp"

namespace fixtures {

using twofold::Address;
using twofold::Integer;
using twofold::Params;
using twofold::Rational;
using twofold::Word;

inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(0x7f4a7c15u);
  return engine;
}

inline long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng()); }

/// Rational strictly inside (lo, hi) with denominator <= max_den.
inline Rational rational_in(const Rational& lo, const Rational& hi, long max_den = 1 << 12) {
  while (true) {
    const long den = uniform(1, max_den);
    const Rational a = lo * den, b = hi * den;
    const Integer first = Integer(twofold::floor(a)) + 1;
    Integer last = twofold::floor(b);
    if (Rational(last) == b) last -= 1;
    if (first > last) continue;
    const Integer span = last - first;
    const long k = span.fits_slong_p() ? uniform(0, span.get_si()) : 0;
    Rational r(Integer(first + k), den);
    r.canonicalize();
    return r;
  }
}

inline Rational ratio(long max_den = 1 << 12) { return rational_in(Rational(0), Rational(1, 16), max_den); }

inline Params params(long max_den = 1 << 12) { return Params::exact(ratio(max_den), ratio(max_den)); }

inline Word word(std::size_t len) {
  Word w;
  for (std::size_t i = 0; i < len; ++i) w.push_back(static_cast<int>(uniform(1, 4)));
  return w;
}

/// Eventually periodic address, not the zero address.
inline Address periodic_address(std::size_t max_pre = 6, std::size_t max_per = 4) {
  while (true) {
    Address a{word(static_cast<std::size_t>(uniform(0, static_cast<long>(max_pre)))),
              word(static_cast<std::size_t>(uniform(1, static_cast<long>(max_per))))};
    bool nonzero = false;
    for (auto l : a.preperiod.letters()) nonzero = nonzero || l > 2;
    for (auto l : a.period.letters()) nonzero = nonzero || l > 2;
    if (nonzero) return a;
  }
}

}  // namespace fixtures
