#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "twofold/tfcert.hpp"

using namespace twofold;

namespace {

Params exact(long pd, long qd) { return Params::exact(Rational(1, pd), Rational(1, qd)); }

// Random exact (p, q, m, n) with q inside the (m, n) window.
struct WindowSample {
  Params params;
  int m;
  int n;
};

WindowSample window_sample(int max_sum) {
  while (true) {
    const Rational p = fixtures::ratio(1 << 10);
    const int m = static_cast<int>(fixtures::uniform(1, max_sum - 1));
    const int n = static_cast<int>(fixtures::uniform(1, max_sum - m));
    const auto range = window_q_range(p.get_d(), m, n);
    if (!range) continue;
    const double lo = range->first, hi = range->second;
    if (!(hi > lo)) continue;
    const Rational q = best_approximation(Rational(lo + (hi - lo) * (0.05 + 0.9 * fixtures::uniform(0, 1000) / 1000.0)),
                                          Integer(1L << 40));
    if (q <= 0 || q > Rational(1, 16)) continue;
    const Params params = Params::exact(p, q);
    if (window_test(params, m, n) == WindowResult::Candidate) return {params, m, n};
  }
}

IntervalCover image(const Params& params, int letter, int power, int depth) {
  const SimilaritySystem sys(params);
  return transform(cover(sys, SetTag::A, depth), sys.word_map(Word::repeat(letter, power)));
}

}  // namespace

TEST_CASE("window_test examples") {
  CHECK(window_test(exact(20, 100), 2, 1) == WindowResult::OutsideWindow);
  CHECK(window_test(exact(16, 256), 2, 1) == WindowResult::Candidate);
  // Both closed ends of the window count as candidates.
  CHECK(window_test(exact(16, 240), 2, 1) == WindowResult::Candidate);
  CHECK(window_test(Params::exact(Rational(1, 16), Rational(15, 4096)), 2, 1) == WindowResult::Candidate);
  CHECK(window_test(Params::exact(Rational(1, 16), Rational(15, 4096) - Rational(1, 1 << 30)), 2, 1) ==
        WindowResult::OutsideWindow);
  CHECK_THROWS_AS(window_test(exact(20, 50), 0, 1), ValidationError);
}

TEST_CASE("window_q_range brackets the exact window") {
  for (int k = 0; k < 300; ++k) {
    const auto s = window_sample(12);
    const auto r = window_q_range(s.params.p().approx(), s.m, s.n);
    REQUIRE(r);
    const double q = s.params.q().approx();
    CHECK(q >= r->first * (1 - 1e-9));
    CHECK(q <= r->second * (1 + 1e-9));
  }
}

TEST_CASE("certify_pair examples") {
  const PairVerdict same = certify_pair(exact(16, 256), 2, 1, 6);
  CHECK(same.status == PairStatus::Overlap);
  const PairVerdict far = certify_pair(exact(20, 100), 2, 1, 6);
  CHECK(far.status == PairStatus::Disjoint);
  CHECK(far.via_window);
  CHECK(far.gap.exact() > 0);
  for (int m = 1; m <= 4; ++m) {
    const PairVerdict v = certify_pair(exact(20, 20), m, m, 4);
    CHECK(v.status == PairStatus::Overlap);
  }
}

TEST_CASE("check_tf examples") {
  const TfReport sq = check_tf(exact(16, 256), 12, 8);
  CHECK(sq.summary.kind == TfSummary::Kind::FailedAt);
  CHECK(sq.summary.m == 2);
  CHECK(sq.summary.n == 1);
  const TfReport cube = check_tf(exact(16, 4096), 12, 8);
  CHECK(cube.summary.kind == TfSummary::Kind::FailedAt);
  CHECK(cube.summary.m == 3);
  CHECK(cube.summary.n == 1);
  const TfReport vacuous = check_tf(exact(16, 256), 1, 8);
  CHECK(vacuous.summary.kind == TfSummary::Kind::CertifiedUpTo);
  CHECK(vacuous.verdicts.empty());
}

TEST_CASE("verdicts are listed in (m+n, m) order and cover every candidate") {
  for (int k = 0; k < 20; ++k) {
    const auto s = window_sample(10);
    const TfReport r = check_tf(s.params, 10, 4);
    std::vector<std::pair<int, int>> expected;
    for (int sum = 2; sum <= 10; ++sum)
      for (int m = 1; m < sum; ++m)
        if (window_test(s.params, m, sum - m) == WindowResult::Candidate) expected.emplace_back(m, sum - m);
    std::vector<std::pair<int, int>> got;
    for (const auto& v : r.verdicts) got.emplace_back(v.m, v.n);
    if (r.summary.kind == TfSummary::Kind::CertifiedUpTo) {
      CHECK(got == expected);
    } else {
      REQUIRE(got.size() <= expected.size());
      CHECK(std::equal(got.begin(), got.end(), expected.begin()));
    }
  }
}

TEST_CASE("Disjoint verdicts survive finer covers") {
  int checked = 0;
  for (int k = 0; k < 60; ++k) {
    const auto s = window_sample(8);
    const PairVerdict v = certify_pair(s.params, s.m, s.n, 4);
    if (v.status != PairStatus::Disjoint) continue;
    ++checked;
    CHECK(v.gap.exact() > 0);
    const IntervalCover a = image(s.params, 1, s.m, 6), b = image(s.params, 2, s.n, 6);
    CHECK(certainly_disjoint(a, b));
    // The gap never exceeds the distance between the finer covers.
    Rational dist = 1;
    for (const auto& x : a.intervals)
      for (const auto& y : b.intervals) {
        const Rational d = x.hi.exact() < y.lo.exact() ? Rational(y.lo.exact() - x.hi.exact())
                                                        : Rational(x.lo.exact() - y.hi.exact());
        if (d < dist) dist = d;
      }
    CHECK(v.gap.exact() <= dist);
  }
  CHECK(checked > 10);
}

TEST_CASE("Overlap witnesses evaluate to the same rational") {
  for (int k = 0; k < 40; ++k) {
    const Rational p = fixtures::ratio(40);
    const int e = static_cast<int>(fixtures::uniform(2, 3));
    // q = p^e makes S_2 = S_1^e, so (e, 1) overlaps.
    const Params params = Params::exact(p, pow(p, static_cast<unsigned>(e)));
    const PairVerdict v = certify_pair(params, e, 1, 6);
    REQUIRE(v.status == PairStatus::Overlap);
    REQUIRE(v.witness);
    const SimilaritySystem sys(params);
    CHECK(address_value(sys, v.witness->u).exact() == v.witness->point);
    CHECK(address_value(sys, v.witness->v).exact() == v.witness->point);
    const auto& u = v.witness->u.preperiod.letters();
    const auto& w = v.witness->v.preperiod.letters();
    REQUIRE(u.size() >= static_cast<std::size_t>(e));
    for (int i = 0; i < e; ++i) CHECK(u[static_cast<std::size_t>(i)] == 1);
    REQUIRE(!w.empty());
    CHECK(w[0] == 2);
  }
}

TEST_CASE("OutsideWindow pairs have separated hulls") {
  for (int k = 0; k < 500; ++k) {
    const Params params = fixtures::params();
    const int m = static_cast<int>(fixtures::uniform(1, 8));
    const int n = static_cast<int>(fixtures::uniform(1, 8));
    if (window_test(params, m, n) != WindowResult::OutsideWindow) continue;
    CHECK(certainly_disjoint(image(params, 1, m, 1), image(params, 2, n, 1)));
    CHECK(certify_pair(params, m, n, 3).status == PairStatus::Disjoint);
  }
}

TEST_CASE("Unknown count does not grow with depth") {
  for (int k = 0; k < 15; ++k) {
    const auto s = window_sample(10);
    int prev = 1 << 30;
    for (int depth : {1, 3, 5, 7}) {
      const TfReport r = check_tf(s.params, 10, depth);
      if (r.summary.kind == TfSummary::Kind::FailedAt) break;
      CHECK(r.summary.unknown <= prev);
      prev = r.summary.unknown;
    }
  }
}

TEST_CASE("interval parameters never yield Overlap") {
  const Params approx = Params::parse("1/16", "1/256", true);
  const PairVerdict v = certify_pair(approx, 2, 1, 5);
  CHECK(v.status != PairStatus::Overlap);
}

TEST_CASE("window sensitivity exceeds 11 p^m |q' - q|") {
  int samples = 0;
  while (samples < 300) {
    const auto s = window_sample(8);
    const auto r = window_q_range(s.params.p().approx(), s.m, s.n);
    const Rational q2 = best_approximation(Rational(r->first + (r->second - r->first) * fixtures::uniform(50, 950) / 1000.0),
                                           Integer(1L << 40));
    if (q2 == s.params.q().exact() || q2 > Rational(1, 16)) continue;
    if (window_test(Params::exact(s.params.p().exact(), q2), s.m, s.n) != WindowResult::Candidate) continue;
    const Address sigma{fixtures::word(24), Word{}}, tau{fixtures::word(24), Word{}};
    const int i = static_cast<int>(fixtures::uniform(3, 4)), j = static_cast<int>(fixtures::uniform(3, 4));
    const Span d = window_sensitivity(s.params.p(), s.params.q(), Scalar(q2), s.m, s.n, i, j, sigma, tau);
    const Rational bound = 11 * pow(s.params.p().exact(), static_cast<unsigned>(s.m)) * abs(q2 - s.params.q().exact());
    // The quantity is an absolute value; the enclosure must lie beyond the bound on one side.
    CHECK((d.lo.lower() > bound || d.hi.upper() < -bound));
    ++samples;
  }
}
