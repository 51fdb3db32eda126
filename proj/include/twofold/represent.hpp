#pragma once

// Alternating-sum representation of points of K \ {0}:
//
//   x = sum_k (-1)^k p^{m_k} q^{n_k},   (m_k, n_k) < (m_{k+1}, n_{k+1}),
//
// where (m,n) < (m',n') means m <= m', n <= n' and m+n < m'+n'. Exponent pairs
// are cumulative letter counts ({1,3} -> m, {2,4} -> n) over the alternating
// {1,2}- and {3,4}-blocks of an address. Evaluating the same exponent pairs
// with other parameters transports the point to another twofold set.

#include <algorithm>
#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "twofold/ifs.hpp"
#include "twofold/numeric.hpp"

namespace twofold {

struct ExpPair {
  int m = 0;
  int n = 0;

  friend auto operator<=>(const ExpPair&, const ExpPair&) = default;
  ExpPair operator+(const ExpPair& o) const { return {m + o.m, n + o.n}; }
};

/// Strict order of consecutive exponent pairs.
inline bool precedes(const ExpPair& a, const ExpPair& b) {
  return a.m <= b.m && a.n <= b.n && a.m + a.n < b.m + b.n;
}

class NoRepresentation : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Finite list of exponent pairs, or a prefix followed by a cycle that
/// repeats with every pair shifted by `shift` each time round.
class AltSumRep {
 public:
  /// Throws ValidationError if the order invariant fails.
  static AltSumRep finite(std::vector<ExpPair> terms);
  /// Cycle length must be even so that signs repeat with the cycle.
  static AltSumRep periodic(std::vector<ExpPair> prefix, std::vector<ExpPair> cycle, ExpPair shift);

  bool is_finite() const { return cycle_.empty(); }
  const std::vector<ExpPair>& prefix() const { return prefix_; }
  const std::vector<ExpPair>& cycle() const { return cycle_; }
  const ExpPair& shift() const { return shift_; }

  /// k-th exponent pair; k < prefix().size() for finite reps.
  ExpPair term(std::size_t k) const;
  /// Number of terms, or nullopt when infinite.
  std::optional<std::size_t> size() const;

  friend bool operator==(const AltSumRep&, const AltSumRep&) = default;

 private:
  AltSumRep(std::vector<ExpPair> prefix, std::vector<ExpPair> cycle, ExpPair shift);
  void validate() const;

  std::vector<ExpPair> prefix_;
  std::vector<ExpPair> cycle_;
  ExpPair shift_{};
};

/// Exponent pairs of the point pi(a). The address must have a period; the
/// point 0 (all letters in {1,2}) throws NoRepresentation.
AltSumRep addr_to_altsum(const Address& a);

/// Exact value (closed-form geometric sum for periodic reps).
Scalar altsum_to_value(const Params& params, const AltSumRep& rep);

/// Partial sum of the first `terms` terms with the alternating tail bound:
/// the true value lies between the partial sum and the partial sum plus the
/// next term.
Span altsum_to_value(const Params& params, const AltSumRep& rep, std::size_t terms);

/// f(x) = sum (-1)^k p'^{m_k} q'^{n_k} for the target parameters.
Scalar transport(const AltSumRep& rep, const Params& target);

/// Representation of S_i(x) given the representation of x.
AltSumRep apply_map(const AltSumRep& rep, int i);

/// JSON-friendly text form: "[[m,n],...]" or "[[m,n],...]+cycle[[m,n],...]*shift[M,N]".
std::string to_string(const AltSumRep& rep);

// ---------------------------------------------------------------------------

/// p^k q^l < p^m q^n while p'^k q'^l > p'^m q'^n.
struct OrderWitness {
  ExpPair lower;  // (k, l)
  ExpPair upper;  // (m, n)

  int max_exponent() const { return std::max({lower.m, lower.n, upper.m, upper.n}); }
};

/// Exact check of both strict inequalities.
bool verify_order_witness(const Params& params, const Params& target, const OrderWitness& w);

enum class OrderSearchStatus { Found, NotFound, RequiresSupArgument };
std::string to_string(OrderSearchStatus s);

struct OrderSearchResult {
  OrderSearchStatus status = OrderSearchStatus::NotFound;
  std::optional<OrderWitness> witness;
  RationalInterval alpha;  // log p' / log p
  RationalInterval beta;   // log q' / log q
};

/// Looks for a monotonicity reversal between the two parameter pairs with
/// all exponents <= max_exp. With alpha = log p'/log p and beta = log q'/log q
/// distinct, the admissible ratios (k-m)/(n-l) form an open interval
/// between log q/log p and (beta/alpha) log q/log p; the simplest rational in
/// it gives the witness with the smallest exponents. Requires exact params.
OrderSearchResult order_violation_witness(const Params& params, const Params& target, int max_exp);

}  // namespace twofold
