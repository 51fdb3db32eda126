#pragma once

// Bounded-depth certification of the twofold condition
//   S_1^m(A) and S_2^n(A) are disjoint for all m, n >= 1,
// with A = S_3(K) u S_4(K).
//
// Disjointness of S_1^{m1} S_2^{n1}(A) and S_1^{m2} S_2^{n2}(A) for distinct
// exponent pairs reduces to this form: after cancelling the common factor
// S_1^{min m} S_2^{min n} (the maps commute and are injective) one is left with
// S_1^k(A) vs S_2^l(A), or with S_1^k(A) vs A itself, which are disjoint because
// A lies in (15/16, 1] and S_1^k(A) in [0, 1/16).

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twofold/ifs.hpp"
#include "twofold/numeric.hpp"

namespace twofold {

enum class WindowResult { OutsideWindow, Candidate };

/// Candidate iff 15/16 <= q^n / p^m <= 16/15 (closed window). Outside the
/// window the hulls of S_1^m(A) and S_2^n(A) are disjoint.
WindowResult window_test(const Params& params, int m, int n, const Limits& limits = {});

/// Approximate q-range of the window for fixed p, intersected with (0,1/16).
/// Membership itself should be decided with window_test.
std::optional<std::pair<double, double>> window_q_range(double p, int m, int n);

enum class PairStatus { Disjoint, Overlap, Unknown };
std::string to_string(PairStatus s);

/// Two addresses whose points coincide exactly: u starts with 1^m, v with 2^n.
struct OverlapWitness {
  Address u;
  Address v;
  Rational point;
};

struct PairVerdict {
  int m = 0;
  int n = 0;
  PairStatus status = PairStatus::Unknown;
  bool via_window = false;        // decided by the hull test alone
  Scalar gap;                     // Disjoint: positive lower bound of the distance
  std::optional<OverlapWitness> witness;  // Overlap
  Scalar residual;                // Unknown: widest remaining cylinder overlap
  bool budget_exhausted = false;  // Unknown because the pair cap was hit
  int depth_u = 0;                // refinement depth reached on the S_1^m side
  int depth_v = 0;                // ... and on the S_2^n side
};

/// Refines cylinder covers of S_1^m(A) and S_2^n(A) pairwise until they
/// separate (Disjoint), an exact common endpoint is found (Overlap, exact
/// mode only), or both sides reach max_depth (Unknown).
PairVerdict certify_pair(const Params& params, int m, int n, int max_depth, const Limits& limits = {});

struct TfSummary {
  enum class Kind { CertifiedUpTo, FailedAt };
  Kind kind = Kind::CertifiedUpTo;
  int m = 0;  // FailedAt only
  int n = 0;
  int unknown = 0;  // Unknown verdicts among the candidates
};

struct TfReport {
  Params params;
  int max_sum = 0;
  int depth = 0;
  std::vector<PairVerdict> verdicts;  // window candidates only, in (m+n, m) order
  TfSummary summary;
};

struct TfOptions {
  /// Stop enumerating at the first Overlap (the report then holds verdicts
  /// up to that pair only).
  bool stop_at_failure = false;
};

/// All pairs m, n >= 1 with m + n <= max_sum, ordered by m + n then m.
TfReport check_tf(const Params& params, int max_sum, int max_depth, const Limits& limits = {},
                  TfOptions options = {});

/// The quantity phi1(q,s) - phi2(q,t) - phi1(q',s) + phi2(q',t) with
/// phi1(q,s) = S_1^m S_i pi_pq(s) and phi2(q,t) = S_2^n S_j pi_pq(t), i,j in
/// {3,4}, where s and t may be truncated (then the result is an enclosure).
Span window_sensitivity(const Scalar& p, const Scalar& q, const Scalar& q2, int m, int n, int i, int j,
                        const Address& s, const Address& t);

}  // namespace twofold
