#include "twofold/represent.hpp"

#include <sstream>

namespace twofold {

namespace {

bool is_g(int letter) { return letter == 1 || letter == 2; }

ExpPair letter_count(int letter) { return (letter == 1 || letter == 3) ? ExpPair{1, 0} : ExpPair{0, 1}; }

/// Cumulative exponent pair after each maximal same-type block of `letters`,
/// starting from `acc`. If `lead_g` is set and the word starts with a
/// {3,4}-letter, an empty leading {1,2}-block is emitted first.
std::vector<ExpPair> block_terms(const std::vector<std::uint8_t>& letters, std::size_t from, std::size_t to,
                                 ExpPair acc, bool lead_g) {
  std::vector<ExpPair> out;
  if (from == to) return out;
  if (lead_g && !is_g(letters[from])) out.push_back(acc);
  for (std::size_t i = from; i < to; ++i) {
    acc = acc + letter_count(letters[i]);
    if (i + 1 == to || is_g(letters[i]) != is_g(letters[i + 1])) out.push_back(acc);
  }
  return out;
}

void append_pairs(std::ostringstream& os, const std::vector<ExpPair>& v) {
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << '[' << v[i].m << ',' << v[i].n << ']';
  }
  os << ']';
}

Scalar signed_term(const Params& params, const ExpPair& e, std::size_t k) {
  const Scalar c = monomial(params, e.m, e.n);
  return (k % 2 == 0) ? c : -c;
}

}  // namespace

AltSumRep::AltSumRep(std::vector<ExpPair> prefix, std::vector<ExpPair> cycle, ExpPair shift)
    : prefix_(std::move(prefix)), cycle_(std::move(cycle)), shift_(shift) {
  if (!cycle_.empty() && prefix_.empty()) {
    // Keep at least one cycle unrolled so the first term is always in the prefix.
    prefix_ = cycle_;
    for (auto& e : cycle_) e = e + shift_;
  }
}

AltSumRep AltSumRep::finite(std::vector<ExpPair> terms) {
  if (terms.empty()) throw ValidationError("alternating sum needs at least one term");
  AltSumRep r(std::move(terms), {}, {});
  r.validate();
  return r;
}

AltSumRep AltSumRep::periodic(std::vector<ExpPair> prefix, std::vector<ExpPair> cycle, ExpPair shift) {
  if (cycle.empty()) return finite(std::move(prefix));
  if (cycle.size() % 2 != 0) throw ValidationError("cycle length must be even");
  AltSumRep r(std::move(prefix), std::move(cycle), shift);
  r.validate();
  return r;
}

ExpPair AltSumRep::term(std::size_t k) const {
  if (k < prefix_.size()) return prefix_[k];
  if (cycle_.empty()) throw std::out_of_range("AltSumRep::term past the end of a finite representation");
  const std::size_t j = k - prefix_.size();
  const int rounds = static_cast<int>(j / cycle_.size());
  const ExpPair& base = cycle_[j % cycle_.size()];
  return {base.m + rounds * shift_.m, base.n + rounds * shift_.n};
}

std::optional<std::size_t> AltSumRep::size() const {
  if (cycle_.empty()) return prefix_.size();
  return std::nullopt;
}

void AltSumRep::validate() const {
  const ExpPair& first = prefix_.front();
  if (first.m < 0 || first.n < 0) throw ValidationError("first exponent pair must be >= (0,0)");
  const std::size_t check = prefix_.size() + 2 * cycle_.size();
  for (std::size_t k = 0; k + 1 < check; ++k)
    if (!precedes(term(k), term(k + 1))) throw ValidationError("exponent pairs violate the strict order at term " + std::to_string(k + 1));
}

AltSumRep addr_to_altsum(const Address& a) {
  if (a.truncated()) throw ValidationError("address '" + a.str() + "' has no period");
  const auto& pre = a.preperiod.letters();
  const auto& per = a.period.letters();
  bool per_g = false, per_h = false;
  for (auto l : per) (is_g(l) ? per_g : per_h) = true;
  bool pre_h = false;
  for (auto l : pre) pre_h = pre_h || !is_g(l);
  if (!per_h && !pre_h) throw NoRepresentation("address '" + a.str() + "' denotes 0, which has no alternating-sum representation");

  if (!(per_g && per_h)) {
    // The tail is one infinite block ending in the fixed point 0 (G) or 1 (H);
    // a trailing preperiod block of the same type merges into it.
    std::size_t end = pre.size();
    while (end > 0 && is_g(pre[end - 1]) == per_g) --end;
    std::vector<ExpPair> terms = block_terms(pre, 0, end, {}, true);
    if (terms.empty()) terms.push_back({0, 0});  // x = 1: only the empty G-block
    return AltSumRep::finite(std::move(terms));
  }

  // Mixed period: block boundaries are periodic past the preperiod. Cut at the
  // first boundary strictly inside the periodic part.
  std::vector<std::uint8_t> s(pre);
  for (int rep = 0; rep < 3; ++rep) s.insert(s.end(), per.begin(), per.end());
  std::size_t b = pre.size() + 1;
  while (is_g(s[b - 1]) == is_g(s[b])) ++b;
  std::vector<ExpPair> prefix = block_terms(s, 0, b, {}, true);
  const ExpPair acc = prefix.back();
  std::vector<ExpPair> cycle = block_terms(s, b, b + per.size(), acc, false);
  ExpPair shift{};
  for (auto l : per) shift = shift + letter_count(l);
  return AltSumRep::periodic(std::move(prefix), std::move(cycle), shift);
}

Scalar altsum_to_value(const Params& params, const AltSumRep& rep) {
  Scalar sum(0L);
  const auto& pre = rep.prefix();
  for (std::size_t k = 0; k < pre.size(); ++k) sum += signed_term(params, pre[k], k);
  if (rep.is_finite()) return sum;
  Scalar cyc(0L);
  const auto& c = rep.cycle();
  for (std::size_t j = 0; j < c.size(); ++j) cyc += signed_term(params, c[j], pre.size() + j);
  const Scalar ratio = monomial(params, rep.shift().m, rep.shift().n);
  return sum + cyc / (Scalar(1L) - ratio);
}

Span altsum_to_value(const Params& params, const AltSumRep& rep, std::size_t terms) {
  const auto total = rep.size();
  const std::size_t n = total ? std::min(terms, *total) : terms;
  Scalar sum(0L);
  for (std::size_t k = 0; k < n; ++k) sum += signed_term(params, rep.term(k), k);
  if (total && n == *total) return {sum, sum};
  const Scalar next = sum + signed_term(params, rep.term(n), n);
  return {min(sum, next), max(sum, next)};
}

Scalar transport(const AltSumRep& rep, const Params& target) { return altsum_to_value(target, rep); }

AltSumRep apply_map(const AltSumRep& rep, int i) {
  if (i < 1 || i > 4) throw ValidationError("map index must be in {1,2,3,4}");
  const ExpPair d = letter_count(i);
  auto shifted = [&](std::vector<ExpPair> v) {
    for (auto& e : v) e = e + d;
    return v;
  };
  std::vector<ExpPair> prefix;
  if (is_g(i)) {
    prefix = shifted(rep.prefix());
  } else {
    const bool in_a = rep.prefix().front() == ExpPair{0, 0};
    prefix.push_back({0, 0});
    if (!in_a) prefix.push_back(d);
    for (std::size_t k = in_a ? 1 : 0; k < rep.prefix().size(); ++k) prefix.push_back(rep.prefix()[k] + d);
  }
  if (rep.is_finite()) return AltSumRep::finite(std::move(prefix));
  return AltSumRep::periodic(std::move(prefix), shifted(rep.cycle()), rep.shift());
}

std::string to_string(const AltSumRep& rep) {
  std::ostringstream os;
  append_pairs(os, rep.prefix());
  if (!rep.is_finite()) {
    os << "+cycle";
    append_pairs(os, rep.cycle());
    os << "*shift[" << rep.shift().m << ',' << rep.shift().n << ']';
  }
  return os.str();
}

// ---------------------------------------------------------------------------

bool verify_order_witness(const Params& params, const Params& target, const OrderWitness& w) {
  if (!params.is_exact() || !target.is_exact()) throw ValidationError("order witnesses are verified in exact mode only");
  const Rational a = monomial(params, w.lower.m, w.lower.n).exact();
  const Rational b = monomial(params, w.upper.m, w.upper.n).exact();
  const Rational a2 = monomial(target, w.lower.m, w.lower.n).exact();
  const Rational b2 = monomial(target, w.upper.m, w.upper.n).exact();
  return a < b && a2 > b2;
}

std::string to_string(OrderSearchStatus s) {
  switch (s) {
    case OrderSearchStatus::Found: return "Found";
    case OrderSearchStatus::NotFound: return "NotFound";
    case OrderSearchStatus::RequiresSupArgument: return "RequiresSupArgument";
  }
  return "?";
}

OrderSearchResult order_violation_witness(const Params& params, const Params& target, int max_exp) {
  if (!params.is_exact() || !target.is_exact()) throw ValidationError("order_violation_witness needs exact parameters");
  if (max_exp < 1) throw ValidationError("max_exp must be >= 1");
  OrderSearchResult r;
  if (params == target) {
    r.alpha = r.beta = {Rational(1), Rational(1)};
    return r;
  }
  for (int precision = 128; precision <= 4096; precision *= 2) {
    r.alpha = log_ratio(Params(target.p(), params.p()), precision);
    r.beta = log_ratio(Params(target.q(), params.q()), precision);
    const bool alpha_below = r.alpha.hi < r.beta.lo;
    const bool alpha_above = r.beta.hi < r.alpha.lo;
    if (!alpha_below && !alpha_above) continue;

    const RationalInterval qp = log_ratio(Params(params.q(), params.p()), precision);
    // beta/alpha * log q/log p, all factors positive.
    const RationalInterval scaled{r.beta.lo / r.alpha.hi * qp.lo, r.beta.hi / r.alpha.lo * qp.hi};
    const Rational lo = alpha_below ? qp.hi : scaled.hi;
    const Rational hi = alpha_below ? scaled.lo : qp.lo;
    if (!(lo < hi)) continue;

    const Rational x = simplest_between(lo, hi);
    const Integer& num = x.get_num();
    const Integer& den = x.get_den();
    if (num > max_exp || den > max_exp) return r;  // NotFound within budget
    const int a = static_cast<int>(num.get_si()), b = static_cast<int>(den.get_si());
    OrderWitness w = alpha_below ? OrderWitness{{a, 0}, {0, b}} : OrderWitness{{0, b}, {a, 0}};
    if (!verify_order_witness(params, target, w)) throw std::logic_error("order witness failed exact verification");
    r.status = OrderSearchStatus::Found;
    r.witness = w;
    return r;
  }
  r.status = OrderSearchStatus::RequiresSupArgument;
  return r;
}

}  // namespace twofold
