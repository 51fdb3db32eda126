#pragma once

// Root finding for the dimension equation  p^d + q^d - (pq)^d = 1/2  and for
// the truncated equations  2p^x + sum_{k=1..n} q^{kx} = 1.
//
// Every function value is evaluated with directed rounding (MPFR), so a
// bisection step only moves a bracket end when the sign is certain. Returned
// brackets therefore always contain the true root.

#include <vector>

#include "twofold/numeric.hpp"

namespace twofold {

/// Certified enclosure of a root.
struct RootBracket {
  Rational lo;
  Rational hi;

  double value() const { return to_double(mid()); }
  Rational mid() const { return (lo + hi) / 2; }
  Rational width() const { return hi - lo; }
  bool contains(double x) const { return Rational(x) >= lo && Rational(x) <= hi; }
};

struct DimOptions {
  /// Target bracket width and residual bound; 0 bisects until the working
  /// precision can no longer decide the sign.
  double tol = 1e-12;
  int precision = 128;  // MPFR bits
};

struct DimResult {
  double d = 0.0;
  RootBracket bracket;
  /// Enclosure of p^x + q^x - (pq)^x - 1/2 over the whole bracket.
  Interval residual;
  int iterations = 0;
};

DimResult solve_dim(const Params& params, DimOptions options = {});

/// Unique positive root d_n of the equation truncated after n terms.
RootBracket truncated_dim(const Params& params, int n, DimOptions options = {});

struct LadderResult {
  std::vector<RootBracket> truncated;  // d_1 .. d_N
  RootBracket limit;                   // d
  /// d_1 < d_2 < ... < d_N < d, certified by disjoint ordered brackets.
  bool certified_increasing() const;
};

LadderResult dimension_ladder(const Params& params, int max_n, DimOptions options = {});

/// Enclosure of 2p^x + sum_{k=1..terms} q^{kx} + tail - 1 over x in d, where
/// the tail lies in [0, q^{(terms+1)x} / (1 - q^x)].
RationalInterval dim_series_residual(const Params& params, const RationalInterval& d, int terms, int precision = 128);

}  // namespace twofold
