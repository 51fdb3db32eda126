#include "twofold/tfcert.hpp"

#include <cmath>

namespace twofold {

namespace {

const Rational kWindowLo(15, 16);
const Rational kWindowHi(16, 15);

void check_exponents(int m, int n, const Limits& limits) {
  if (m < 1 || n < 1) throw ValidationError("pair exponents must be >= 1");
  if (static_cast<long>(m) + n > limits.max_exponent) throw BudgetError("pair exponent sum exceeds cap");
}

// Lengths compare by exact value or by upper bound in interval mode.
bool longer_or_equal(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return a.exact() >= b.exact();
  return a.upper() >= b.upper();
}

struct Side {
  std::vector<Cylinder> cyl;
  int depth = 1;
};

std::optional<OverlapWitness> shared_endpoint(const Cylinder& x, const Cylinder& y) {
  const Span hx = x.hull(), hy = y.hull();
  if (!hx.lo.is_exact() || !hy.lo.is_exact()) return std::nullopt;
  // lo = S_w(0) = pi(w(1)), hi = S_w(1) = pi(w(3)).
  const Address x0{x.word, Word{1}}, x1{x.word, Word{3}};
  const Address y0{y.word, Word{1}}, y1{y.word, Word{3}};
  const std::pair<const Scalar*, const Address*> ex[2] = {{&hx.lo, &x0}, {&hx.hi, &x1}};
  const std::pair<const Scalar*, const Address*> ey[2] = {{&hy.lo, &y0}, {&hy.hi, &y1}};
  for (const auto& [vx, ax] : ex)
    for (const auto& [vy, ay] : ey)
      if (vx->exact() == vy->exact()) return OverlapWitness{*ax, *ay, vx->exact()};
  return std::nullopt;
}

Scalar overlap_width(const Span& a, const Span& b) {
  const Scalar w = min(a.hi, b.hi) - max(a.lo, b.lo);
  if (w.is_exact()) return w.exact() < 0 ? Scalar(0L) : w;
  return Scalar(Interval(0.0, std::max(0.0, w.upper())));
}

}  // namespace

WindowResult window_test(const Params& params, int m, int n, const Limits& limits) {
  check_exponents(m, n, limits);
  const Scalar pm = pow(params.p(), static_cast<unsigned>(m));
  const Scalar qn = pow(params.q(), static_cast<unsigned>(n));
  // Outside only when certain; undecidable interval cases stay candidates.
  if (certainly_less(qn, Scalar(kWindowLo) * pm) || certainly_less(Scalar(kWindowHi) * pm, qn))
    return WindowResult::OutsideWindow;
  return WindowResult::Candidate;
}

std::optional<std::pair<double, double>> window_q_range(double p, int m, int n) {
  const double pm_log = m * std::log(p);
  double lo = std::exp((pm_log + std::log(15.0 / 16.0)) / n);
  double hi = std::exp((pm_log + std::log(16.0 / 15.0)) / n);
  hi = std::min(hi, 1.0 / 16.0);
  if (!(lo < hi)) return std::nullopt;
  return std::make_pair(lo, hi);
}

std::string to_string(PairStatus s) {
  switch (s) {
    case PairStatus::Disjoint: return "Disjoint";
    case PairStatus::Overlap: return "Overlap";
    case PairStatus::Unknown: return "Unknown";
  }
  return "?";
}

PairVerdict certify_pair(const Params& params, int m, int n, int max_depth, const Limits& limits) {
  check_exponents(m, n, limits);
  if (max_depth < 1) throw ValidationError("certify_pair: max_depth must be >= 1");
  if (static_cast<long>(m) + n + 2L * max_depth > limits.max_exponent)
    throw BudgetError("certify_pair: exponent budget exceeded");

  const SimilaritySystem sys(params);
  PairVerdict v;
  v.m = m;
  v.n = n;

  if (window_test(params, m, n, limits) == WindowResult::OutsideWindow) {
    // Hulls p^m [1 - rho, 1] and q^n [1 - rho, 1].
    const Scalar lo_factor = Scalar(1L) - sys.rho();
    const Span hu{pow(params.p(), m) * lo_factor, pow(params.p(), m)};
    const Span hv{pow(params.q(), n) * lo_factor, pow(params.q(), n)};
    v.status = PairStatus::Disjoint;
    v.via_window = true;
    v.gap = hu.separation(hv);
    return v;
  }

  Side u, w;
  for (int first : {3, 4}) {
    const Word wu = Word::repeat(1, m) + Word{first};
    const Word wv = Word::repeat(2, n) + Word{first};
    u.cyl.push_back({sys.word_map(wu), wu});
    w.cyl.push_back({sys.word_map(wv), wv});
  }

  std::optional<Scalar> gap;
  auto record_gap = [&](const Scalar& g) {
    if (!gap) {
      gap = g;
    } else if (g.is_exact() && gap->is_exact()) {
      if (g.exact() < gap->exact()) gap = g;
    } else {
      gap = Scalar(Interval::point(std::min(g.lower(), gap->lower())));
    }
  };

  using PairList = std::vector<std::pair<std::uint32_t, std::uint32_t>>;
  PairList live;
  // Returns true when an exact overlap was found.
  auto consider = [&](std::uint32_t a, std::uint32_t b, PairList& out) -> bool {
    const Span ha = u.cyl[a].hull(), hb = w.cyl[b].hull();
    if (ha.certainly_disjoint_from(hb)) {
      record_gap(ha.separation(hb));
      return false;
    }
    if (auto wit = shared_endpoint(u.cyl[a], w.cyl[b])) {
      v.status = PairStatus::Overlap;
      v.witness = std::move(wit);
      return true;
    }
    out.emplace_back(a, b);
    return false;
  };

  for (std::uint32_t a = 0; a < 2; ++a)
    for (std::uint32_t b = 0; b < 2; ++b)
      if (consider(a, b, live)) {
        v.depth_u = u.depth;
        v.depth_v = w.depth;
        return v;
      }

  while (!live.empty()) {
    if (live.size() > limits.max_pairs) {
      v.budget_exhausted = true;
      break;
    }
    Scalar max_u(0L), max_w(0L);
    for (const auto& [a, b] : live) {
      if (longer_or_equal(u.cyl[a].length(), max_u)) max_u = u.cyl[a].length();
      if (longer_or_equal(w.cyl[b].length(), max_w)) max_w = w.cyl[b].length();
    }
    const bool can_u = u.depth < max_depth, can_w = w.depth < max_depth;
    if (!can_u && !can_w) break;
    const bool refine_u = can_u && (!can_w || longer_or_equal(max_u, max_w));

    Side& side = refine_u ? u : w;
    std::vector<std::int64_t> first_child(side.cyl.size(), -1);
    std::vector<Cylinder> next;
    for (const auto& pr : live) {
      const std::uint32_t idx = refine_u ? pr.first : pr.second;
      if (first_child[idx] >= 0) continue;
      first_child[idx] = static_cast<std::int64_t>(next.size());
      for (auto& c : children(sys, side.cyl[idx])) next.push_back(std::move(c));
    }
    side.cyl = std::move(next);
    ++side.depth;

    PairList refined;
    for (const auto& [a, b] : live) {
      const auto base = static_cast<std::uint32_t>(first_child[refine_u ? a : b]);
      for (std::uint32_t k = 0; k < 4; ++k) {
        const bool hit = refine_u ? consider(base + k, b, refined) : consider(a, base + k, refined);
        if (hit) {
          v.depth_u = u.depth;
          v.depth_v = w.depth;
          return v;
        }
      }
    }
    live = std::move(refined);
  }

  v.depth_u = u.depth;
  v.depth_v = w.depth;
  if (live.empty()) {
    v.status = PairStatus::Disjoint;
    v.gap = *gap;
    return v;
  }
  v.status = PairStatus::Unknown;
  Scalar widest(0L);
  for (const auto& [a, b] : live) {
    const Scalar ow = overlap_width(u.cyl[a].hull(), w.cyl[b].hull());
    if (longer_or_equal(ow, widest)) widest = ow;
  }
  v.residual = widest;
  return v;
}

TfReport check_tf(const Params& params, int max_sum, int max_depth, const Limits& limits, TfOptions options) {
  if (max_sum < 0) throw ValidationError("check_tf: max_sum must be >= 0");
  TfReport r{params, max_sum, max_depth, {}, {}};
  bool failed = false;
  for (int s = 2; s <= max_sum; ++s) {
    for (int m = 1; m < s; ++m) {
      const int n = s - m;
      if (window_test(params, m, n, limits) == WindowResult::OutsideWindow) continue;
      PairVerdict v = certify_pair(params, m, n, max_depth, limits);
      if (v.status == PairStatus::Overlap && !failed) {
        failed = true;
        r.summary.kind = TfSummary::Kind::FailedAt;
        r.summary.m = m;
        r.summary.n = n;
      }
      if (v.status == PairStatus::Unknown) ++r.summary.unknown;
      r.verdicts.push_back(std::move(v));
      if (failed && options.stop_at_failure) return r;
    }
  }
  return r;
}

Span window_sensitivity(const Scalar& p, const Scalar& q, const Scalar& q2, int m, int n, int i, int j,
                        const Address& s, const Address& t) {
  if ((i != 3 && i != 4) || (j != 3 && j != 4)) throw ValidationError("window_sensitivity: i, j must be 3 or 4");
  const SimilaritySystem sys1(Params(p, q));
  const SimilaritySystem sys2(Params(p, q2));
  auto phi1 = [&](const SimilaritySystem& sys) {
    const Affine f = sys.word_map(Word::repeat(1, m) + Word{i});
    const Span x = address_point(sys, s);
    return Span{f(x.lo), f(x.hi)};
  };
  auto phi2 = [&](const SimilaritySystem& sys) {
    const Affine f = sys.word_map(Word::repeat(2, n) + Word{j});
    const Span x = address_point(sys, t);
    return Span{f(x.lo), f(x.hi)};
  };
  const Span a = phi1(sys1), b = phi2(sys1), c = phi1(sys2), d = phi2(sys2);
  // Interval sum a - b - c + d.
  return {a.lo - b.hi - c.hi + d.lo, a.hi - b.lo - c.lo + d.hi};
}

}  // namespace twofold
