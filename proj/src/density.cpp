#include "twofold/density.hpp"

#include <algorithm>

namespace twofold {

DegenerateRatio::DegenerateRatio(int h_, int k_)
    : ValidationError("log q / log p = " + std::to_string(h_) + "/" + std::to_string(k_) +
                      " is rational (q^" + std::to_string(k_) + " = p^" + std::to_string(h_) + ")"),
      h(h_),
      k(k_) {}

std::optional<std::pair<int, int>> rational_log_ratio(const Params& params, const Limits& limits) {
  if (!params.is_exact()) return std::nullopt;
  const Rational& p = params.p().exact();
  const Rational& q = params.q().exact();
  const RationalInterval r = log_ratio(Params(params.q(), params.p()), 128);
  for (const Rational* end : {&r.lo, &r.hi}) {
    for (const Rational& c : convergents(continued_fraction(*end, 64))) {
      if (!r.contains(c)) continue;
      const Integer& h = c.get_num();
      const Integer& k = c.get_den();
      if (h + k > limits.max_exponent) break;
      const auto hi = static_cast<unsigned>(h.get_ui()), ki = static_cast<unsigned>(k.get_ui());
      if (pow(p, hi) == pow(q, ki)) return std::make_pair(static_cast<int>(hi), static_cast<int>(ki));
    }
  }
  return std::nullopt;
}

WspWitness wsp_witnesses(const Params& params, int count, WspOptions options, const Limits& limits) {
  if (count < 1) throw ValidationError("wsp_witnesses: count must be >= 1");
  if (options.precision < 53) throw ValidationError("wsp_witnesses: precision must be >= 53 bits");
  if (auto deg = rational_log_ratio(params, limits)) throw DegenerateRatio(deg->first, deg->second);

  const Scalar one(1L);
  const Scalar max_dev(options.max_deviation);
  for (int precision = options.precision;; precision *= 2) {
    const RationalInterval r = log_ratio(Params(params.q(), params.p()), precision);
    const auto cf_lo = continued_fraction(r.lo, 512);
    const auto cf_hi = continued_fraction(r.hi, 512);
    // Every real in [lo, hi] shares the partial quotients both ends agree on,
    // except possibly the final quotient of a terminating expansion.
    std::size_t common = 0;
    while (common + 1 < cf_lo.size() && common + 1 < cf_hi.size() && cf_lo[common] == cf_hi[common]) ++common;
    const auto convs = convergents(std::vector<Integer>(cf_lo.begin(), cf_lo.begin() + static_cast<long>(common)));

    WspWitness w;
    w.precision_used = precision;
    bool capped = false;
    for (const Rational& c : convs) {
      const Integer& h = c.get_num();
      const Integer& k = c.get_den();
      if (h < 1) continue;
      if (h + k > limits.max_exponent) {
        capped = true;
        break;
      }
      const int m = static_cast<int>(h.get_si()), n = static_cast<int>(k.get_si());
      const Scalar ratio = pow(params.p(), static_cast<unsigned>(m)) / pow(params.q(), static_cast<unsigned>(n));
      const Scalar dev = abs(ratio - one);
      if (!certainly_less(Scalar(0L), dev)) continue;
      if (!certainly_less_equal(dev, max_dev)) continue;
      if (!w.entries.empty() && !certainly_less(dev, w.entries.back().deviation)) continue;
      w.entries.push_back({m, n, ratio, dev});
      if (static_cast<int>(w.entries.size()) == count) return w;
    }
    if (capped || precision >= 8192)
      throw BudgetError("wsp_witnesses: only " + std::to_string(w.entries.size()) + " witnesses within the exponent cap");
  }
}

// ---------------------------------------------------------------------------

namespace {

struct Cyl {
  Rational slope;
  Rational offset;
};

Rational half(const Rational& x) { return x / 2; }
const Rational& rmax(const Rational& a, const Rational& b) { return a < b ? b : a; }
const Rational& rmin(const Rational& a, const Rational& b) { return b < a ? b : a; }

}  // namespace

GapValue gap_in_window(const SimilaritySystem& sys, const Rational& anchor, ProbeSide side, const Rational& t,
                       const Rational& r, int depth, const Limits& limits) {
  if (!sys.params().is_exact()) throw ValidationError("gap computations need exact parameters");
  if (!(t > 0) || !(r > 0)) throw ValidationError("gap: t and r must be positive");
  if (depth < 0 || depth > 64) throw ValidationError("gap: depth must be in [0, 64]");

  GapValue g;
  g.t = t;
  const Rational len = r / t;
  g.window_lo = side == ProbeSide::Right ? anchor : Rational(anchor - len);
  g.window_hi = side == ProbeSide::Right ? Rational(anchor + len) : anchor;
  const Rational& lo = g.window_lo;
  const Rational& hi = g.window_hi;
  Rational delta = len;
  mpz_mul_2exp(delta.get_den_mpz_t(), delta.get_den_mpz_t(), static_cast<mp_bitcnt_t>(depth));
  delta.canonicalize();

  Cyl maps[4];
  for (int i = 0; i < 4; ++i) maps[i] = {sys.map(i + 1).slope.exact(), sys.map(i + 1).offset.exact()};

  std::vector<Cyl> frontier{{Rational(1), Rational(0)}}, leaves;
  while (!frontier.empty()) {
    std::vector<Cyl> next;
    for (const Cyl& c : frontier) {
      if (c.offset > hi || c.offset + c.slope < lo) continue;
      if (c.slope > delta) {
        for (const Cyl& s : maps) next.push_back({c.slope * s.slope, c.slope * s.offset + c.offset});
      } else {
        leaves.push_back(c);
      }
    }
    // Words that differ only by commuting letters give identical maps.
    std::sort(next.begin(), next.end(), [](const Cyl& a, const Cyl& b) {
      return a.offset < b.offset || (a.offset == b.offset && a.slope < b.slope);
    });
    next.erase(std::unique(next.begin(), next.end(),
                           [](const Cyl& a, const Cyl& b) { return a.offset == b.offset && a.slope == b.slope; }),
               next.end());
    if (next.size() + leaves.size() > limits.max_pairs)
      throw BudgetError("gap: more than " + std::to_string(limits.max_pairs) + " cylinders meet the window");
    frontier = std::move(next);
  }
  g.cylinders = leaves.size();
  for (const Cyl& c : leaves)
    if (c.slope >= len) g.unresolved = true;

  // Lower bound: gaps of the clipped, merged cover.
  std::vector<std::pair<Rational, Rational>> spans;
  for (const Cyl& c : leaves) spans.emplace_back(rmax(c.offset, lo), rmin(Rational(c.offset + c.slope), hi));
  std::sort(spans.begin(), spans.end());
  std::vector<std::pair<Rational, Rational>> merged;
  for (auto& s : spans) {
    if (!merged.empty() && s.first <= merged.back().second) {
      merged.back().second = rmax(merged.back().second, s.second);
    } else {
      merged.push_back(std::move(s));
    }
  }
  // Upper bound: gaps of the cylinder endpoints, which are points of K.
  std::vector<Rational> pts;
  for (const Cyl& c : leaves) {
    for (const Rational& e : {c.offset, Rational(c.offset + c.slope)})
      if (e >= lo && e <= hi) pts.push_back(e);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  auto gap_of = [&](const std::vector<std::pair<Rational, Rational>>& iv) {
    if (iv.empty()) return len;
    Rational best = rmax(Rational(iv.front().first - lo), Rational(hi - iv.back().second));
    for (std::size_t i = 0; i + 1 < iv.size(); ++i) best = rmax(best, half(iv[i + 1].first - iv[i].second));
    return best;
  };
  std::vector<std::pair<Rational, Rational>> point_spans;
  point_spans.reserve(pts.size());
  for (const auto& x : pts) point_spans.emplace_back(x, x);

  g.lower = gap_of(merged) * t;
  g.upper = gap_of(point_spans) * t;
  return g;
}

GapValue gap_delta(const SimilaritySystem& sys, const Rational& t, const Rational& r, int depth, const Limits& limits) {
  return gap_in_window(sys, Rational(0), ProbeSide::Right, t, r, depth, limits);
}

std::vector<ProbePoint> limit_probe(const SimilaritySystem& sys, const Rational& r, int k_from, int k_to, int depth,
                                    const ProbeAnchor& anchor, const Limits& limits) {
  if (k_from < 0 || k_to < k_from) throw ValidationError("limit_probe: need 0 <= k_from <= k_to");
  if (!sys.params().is_exact()) throw ValidationError("gap computations need exact parameters");
  const Affine f = sys.word_map(anchor.word);
  const Rational c = (anchor.side == ProbeSide::Right ? f(Scalar(0L)) : f(Scalar(1L))).exact();
  const Rational pq = sys.params().p().exact() * sys.params().q().exact();
  std::vector<ProbePoint> out;
  for (int k = k_from; k <= k_to; ++k) {
    const Rational t = 1 / pow(pq, static_cast<unsigned>(k));
    out.push_back({k, gap_in_window(sys, c, anchor.side, t, r, depth, limits)});
  }
  return out;
}

}  // namespace twofold
