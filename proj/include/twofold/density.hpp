#pragma once

// Density diagnostics: WSP-violation witnesses from continued-fraction
// convergents of log q / log p, and the gap functional
//   Delta_[a,b](X) = d_H(X n [a,b], [a,b])
// evaluated on scaled copies tK of the attractor.

#include <optional>
#include <vector>

#include "twofold/ifs.hpp"
#include "twofold/numeric.hpp"

namespace twofold {

/// log p / log q is rational: q^k = p^h exactly.
class DegenerateRatio : public ValidationError {
 public:
  DegenerateRatio(int h, int k);
  int h;
  int k;
};

struct WspEntry {
  int m = 0;
  int n = 0;
  Scalar ratio;      // p^m / q^n, never equal to 1
  Scalar deviation;  // |ratio - 1|
};

struct WspWitness {
  std::vector<WspEntry> entries;  // strictly decreasing deviation
  int precision_used = 0;
};

struct WspOptions {
  int precision = 53;               // starting precision; doubled when the
                                    // certified expansion runs out
  Rational max_deviation{1, 5};     // emit only maps within this of Id
};

/// Maps S_1^m S_2^{-n} with p^m/q^n -> 1, taken from certified convergents
/// m/n of log q / log p. Throws DegenerateRatio if p^h = q^k exactly.
WspWitness wsp_witnesses(const Params& params, int count, WspOptions options = {}, const Limits& limits = {});

/// Exact search for p^h = q^k with h + k <= max_exponent using the convergents
/// of a certified enclosure of log q / log p.
std::optional<std::pair<int, int>> rational_log_ratio(const Params& params, const Limits& limits = {});

// ---------------------------------------------------------------------------

struct GapValue {
  Rational window_lo;   // unscaled window [window_lo, window_hi]
  Rational window_hi;
  Rational t;           // scale factor
  Rational lower;       // scaled gap bounds: lower from the cylinder cover,
  Rational upper;       // upper from cylinder endpoints (points of K)
  bool unresolved = false;  // some kept cylinder is as long as the window
  std::size_t cylinders = 0;
};

/// Side of an anchor point c from which the window extends.
enum class ProbeSide { Right, Left };

/// Delta over the window of length r/t starting at the anchor (Right: [c, c +
/// r/t]) or ending at it (Left: [c - r/t, c]), multiplied by t. Cylinders
/// meeting the window are refined until shorter than 2^-depth of its length.
GapValue gap_in_window(const SimilaritySystem& sys, const Rational& anchor, ProbeSide side, const Rational& t,
                       const Rational& r, int depth, const Limits& limits = {});

/// Delta_[0,r](tK).
GapValue gap_delta(const SimilaritySystem& sys, const Rational& t, const Rational& r, int depth,
                   const Limits& limits = {});

struct ProbeAnchor {
  Word word;                          // anchor S_w(0) for Right, S_w(1) for Left
  ProbeSide side = ProbeSide::Right;
};

struct ProbePoint {
  int k = 0;
  GapValue gap;
};

/// gap at t = (pq)^{-k} for k = k_from..k_to, ascending in t.
std::vector<ProbePoint> limit_probe(const SimilaritySystem& sys, const Rational& r, int k_from, int k_to, int depth,
                                    const ProbeAnchor& anchor = {}, const Limits& limits = {});

}  // namespace twofold
