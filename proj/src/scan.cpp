#include "twofold/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <thread>

namespace twofold {

std::string to_string(CellStatus s) {
  switch (s) {
    case CellStatus::CertifiedTF: return "CertifiedTF";
    case CellStatus::Flagged: return "Flagged";
    case CellStatus::Undecided: return "Undecided";
  }
  return "?";
}

namespace {

// Calls work(k) for k in [0, count) on up to `jobs` threads. The first
// exception is rethrown after all workers finish.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& work) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), count);
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) work(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto loop = [&] {
    for (std::size_t k; !failed && (k = next++) < count;) {
      try {
        work(k);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(loop);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

void record_min(std::optional<Scalar>& acc, const Scalar& v) {
  if (!acc || v.lower() < acc->lower() || (v.is_exact() && acc->is_exact() && v.exact() < acc->exact())) acc = v;
}

void record_max(std::optional<Scalar>& acc, const Scalar& v) {
  if (!acc || v.upper() > acc->upper() || (v.is_exact() && acc->is_exact() && v.exact() > acc->exact())) acc = v;
}

}  // namespace

ScanCell classify(const Rational& p, const Rational& q, int max_sum, int depth, const Limits& limits) {
  ScanCell c;
  c.p = p;
  c.q = q;
  std::optional<TfReport> report;
  try {
    report = check_tf(Params::exact(p, q), max_sum, depth, limits, TfOptions{true});
  } catch (const BudgetError&) {
    c.status = CellStatus::Undecided;
    return c;
  }
  const TfReport& rep = *report;
  if (rep.summary.kind == TfSummary::Kind::FailedAt) {
    c.status = CellStatus::Flagged;
    c.m = rep.summary.m;
    c.n = rep.summary.n;
    c.gap_or_residual = Scalar(0L);
    return c;
  }
  c.status = rep.summary.unknown > 0 ? CellStatus::Undecided : CellStatus::CertifiedTF;
  for (const auto& v : rep.verdicts) {
    if (c.status == CellStatus::CertifiedTF) record_min(c.gap_or_residual, v.gap);
    else if (v.status == PairStatus::Unknown) record_max(c.gap_or_residual, v.residual);
  }
  return c;
}

double ScanGrid::flagged_fraction() const {
  if (cells.empty()) return 0.0;
  const auto k = std::count_if(cells.begin(), cells.end(), [](const ScanCell& c) { return c.status == CellStatus::Flagged; });
  return static_cast<double>(k) / static_cast<double>(cells.size());
}

double ScanGrid::undecided_fraction() const {
  if (cells.empty()) return 0.0;
  const auto k = std::count_if(cells.begin(), cells.end(), [](const ScanCell& c) { return c.status == CellStatus::Undecided; });
  return static_cast<double>(k) / static_cast<double>(cells.size());
}

namespace {
constexpr int kMaxSeedSum = 64;
}  // namespace

ScanGrid scan_square(const ScanDomain& d, const ScanOptions& o) {
  if (o.resolution < 2) throw ValidationError("scan: resolution must be >= 2");
  if (o.max_sum < 0 || o.depth < 1) throw ValidationError("scan: need max_sum >= 0 and depth >= 1");
  if (!(d.p_lo >= 0 && d.p_lo < d.p_hi && d.p_hi <= Rational(1, 16)) ||
      !(d.q_lo >= 0 && d.q_lo < d.q_hi && d.q_hi <= Rational(1, 16)))
    throw ValidationError("scan: domain must be a nonempty rectangle inside [0, 1/16]^2");
  for (const auto& s : o.seed_powers)
    if (!(s > 0)) throw ValidationError("scan: seed powers must be positive");
  if (o.seed_block < 0) throw ValidationError("scan: seed block must be >= 0");

  const int res = o.resolution;
  const Rational dp = (d.p_hi - d.p_lo) / res;
  const Rational dq = (d.q_hi - d.q_lo) / res;

  struct Plan {
    Rational p, q;
    Rational seed{0};
  };
  std::vector<Plan> plan(static_cast<std::size_t>(res) * res);
  std::vector<Rational> pc(res);
  for (int i = 0; i < res; ++i) pc[i] = best_approximation(d.p_lo + dp * (Rational(2 * i + 1, 2)), o.max_den);
  for (int j = 0; j < res; ++j) {
    const Rational qc = best_approximation(d.q_lo + dq * (Rational(2 * j + 1, 2)), o.max_den);
    for (int i = 0; i < res; ++i) plan[static_cast<std::size_t>(j) * res + i] = {pc[i], qc};
  }
  auto place = [&](const Rational& p, const Rational& q, const Rational& s) {
    if (!(p > d.p_lo && p < d.p_hi && q > d.q_lo && q < d.q_hi)) return false;
    const int i = static_cast<int>(floor((p - d.p_lo) / dp).get_si());
    const int j = static_cast<int>(floor((q - d.q_lo) / dq).get_si());
    Plan& cell = plan[static_cast<std::size_t>(j) * res + i];
    if (cell.seed != 0) return false;
    cell = {p, q, s};
    return true;
  };
  // Curve points q = p^(a/b) are exact as (u^b, u^a).
  for (int i = 0; i < res; ++i) {
    for (const auto& s : o.seed_powers) {
      const auto a = static_cast<unsigned>(s.get_num().get_ui()), b = static_cast<unsigned>(s.get_den().get_ui());
      const Rational u = b == 1 ? pc[i] : best_approximation(Rational(std::pow(pc[i].get_d(), 1.0 / b)), Integer(1 << 16));
      place(pow(u, b), pow(u, a), s);
    }
  }
  if (o.seed_block > 0) {
    const int bs = o.seed_block;
    for (int bj = 0; bj * bs < res; ++bj) {
      for (int bi = 0; bi * bs < res; ++bi) {
        const int i1 = std::min(res, (bi + 1) * bs), j1 = std::min(res, (bj + 1) * bs);
        bool has_seed = false;
        for (int j = bj * bs; j < j1 && !has_seed; ++j)
          for (int i = bi * bs; i < i1 && !has_seed; ++i) has_seed = plan[static_cast<std::size_t>(j) * res + i].seed != 0;
        if (has_seed) continue;
        const Rational p0 = d.p_lo + dp * (bi * bs), p1 = d.p_lo + dp * i1;
        const Rational q0 = d.q_lo + dq * (bj * bs), q1 = d.q_lo + dq * j1;
        bool done = false;
        for (int sum = 2; sum <= kMaxSeedSum && !done; ++sum) {
          for (int a = 1; a < sum && !done; ++a) {
            const int b = sum - a;
            // u^b in (p0, p1) and u^a in (q0, q1); the double bounds are only
            // a guide, membership is checked exactly below.
            double lo = std::max(std::pow(p0.get_d(), 1.0 / b), std::pow(q0.get_d(), 1.0 / a));
            double hi = std::min(std::pow(p1.get_d(), 1.0 / b), std::pow(q1.get_d(), 1.0 / a));
            if (!(lo < hi)) continue;
            const double w = hi - lo;
            const Rational u = simplest_between(Rational(lo + w / 4), Rational(hi - w / 4));
            const Rational p = pow(u, static_cast<unsigned>(b)), q = pow(u, static_cast<unsigned>(a));
            Rational s(a, b);
            s.canonicalize();
            if (p > p0 && p < p1 && q > q0 && q < q1) done = place(p, q, s);
          }
        }
      }
    }
  }

  ScanGrid g;
  g.domain = d;
  g.resolution = res;
  g.max_sum = o.max_sum;
  g.depth = o.depth;
  g.cells.resize(plan.size());
  parallel_for(plan.size(), o.jobs, [&](std::size_t k) {
    // A seeded cell is checked at least up to the pair its curve point fails at.
    const Rational& s = plan[k].seed;
    const int budget = s == 0 ? o.max_sum
                              : std::max(o.max_sum, static_cast<int>(s.get_num().get_si() + s.get_den().get_si()));
    ScanCell c = classify(plan[k].p, plan[k].q, budget, o.depth, o.limits);
    c.seeded = plan[k].seed != 0;
    c.seed_power = plan[k].seed;
    g.cells[k] = std::move(c);
  });
  return g;
}

void write_csv(const ScanGrid& g, std::ostream& out) {
  out << "# schema_version 1\n";
  out << "p,q,status,m,n,gap_or_residual\n";
  for (const auto& c : g.cells) {
    out << to_string(c.p) << ',' << to_string(c.q) << ',' << to_string(c.status) << ',';
    if (c.status == CellStatus::Flagged) out << c.m << ',' << c.n;
    else out << ',';
    out << ',';
    if (c.gap_or_residual) out << c.gap_or_residual->str();
    out << '\n';
  }
}

void write_svg(const ScanGrid& g, std::ostream& out, int cell_px) {
  const int size = g.resolution * cell_px;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\" viewBox=\"0 0 "
      << size << ' ' << size << "\">\n";
  for (int j = 0; j < g.resolution; ++j) {
    for (int i = 0; i < g.resolution; ++i) {
      const ScanCell& c = g.cell(i, j);
      const char* color = c.status == CellStatus::CertifiedTF ? "#ffffff"
                          : c.status == CellStatus::Flagged   ? "#c0392b"
                                                              : "#95a5a6";
      // q grows upwards.
      out << "<rect x=\"" << i * cell_px << "\" y=\"" << (g.resolution - 1 - j) * cell_px << "\" width=\"" << cell_px
          << "\" height=\"" << cell_px << "\" fill=\"" << color << "\"/>\n";
    }
  }
  out << "</svg>\n";
}

// ---------------------------------------------------------------------------

std::vector<Rational> SliceScan::exceptional_points() const {
  std::vector<Rational> out;
  for (const auto& c : samples)
    if (c.status != CellStatus::CertifiedTF) out.push_back(c.q);
  return out;
}

SliceScan slice_scan(const Rational& p, int q_samples, int max_sum, int depth, const std::vector<int>& seed_powers,
                     int jobs, const Limits& limits) {
  if (!(p > 0 && p <= Rational(1, 16))) throw ValidationError("slice: p must lie in (0, 1/16]");
  if (q_samples < 1) throw ValidationError("slice: need at least one q sample");
  if (depth < 1 || max_sum < 0) throw ValidationError("slice: need max_sum >= 0 and depth >= 1");
  std::vector<Rational> qs;
  for (int j = 0; j < q_samples; ++j) qs.emplace_back(2 * j + 1, 32 * q_samples);
  for (int s : seed_powers) {
    if (s < 1) throw ValidationError("slice: seed powers must be >= 1");
    qs.push_back(pow(p, static_cast<unsigned>(s)));
  }
  std::sort(qs.begin(), qs.end());
  qs.erase(std::unique(qs.begin(), qs.end()), qs.end());

  SliceScan r;
  r.p = p;
  r.samples.resize(qs.size());
  parallel_for(qs.size(), jobs, [&](std::size_t k) { r.samples[k] = classify(p, qs[k], max_sum, depth, limits); });
  for (auto& c : r.samples) {
    for (int s : seed_powers)
      if (c.q == pow(p, static_cast<unsigned>(s))) {
        c.seeded = true;
        c.seed_power = s;
        break;
      }
    if (c.status == CellStatus::Flagged) r.flagged[{c.m, c.n}].push_back(c.q);
  }
  return r;
}

// ---------------------------------------------------------------------------

BoxDimEstimate box_dim_estimate(const std::vector<double>& points, double lo, double hi, int min_exp, int max_exp) {
  if (!(lo < hi)) throw ValidationError("boxdim: need lo < hi");
  if (min_exp < 0 || max_exp <= min_exp || max_exp > 60) throw ValidationError("boxdim: need 0 <= min_exp < max_exp <= 60");
  if (points.size() < 2) throw ValidationError("boxdim: need at least two points");
  for (double x : points)
    if (!(x >= lo && x <= hi)) throw ValidationError("boxdim: point outside [lo, hi]");

  BoxDimEstimate e;
  std::vector<double> xs, ys;
  for (int k = min_exp; k <= max_exp; ++k) {
    const double size = std::ldexp(hi - lo, -k);
    const std::uint64_t boxes = std::uint64_t{1} << k;
    std::vector<std::uint64_t> idx;
    idx.reserve(points.size());
    for (double x : points) idx.push_back(std::min(static_cast<std::uint64_t>((x - lo) / size), boxes - 1));
    std::sort(idx.begin(), idx.end());
    const auto n = static_cast<std::size_t>(std::unique(idx.begin(), idx.end()) - idx.begin());
    e.scales.push_back(size);
    e.counts.push_back(n);
    if (n >= 2) {
      xs.push_back(-std::log(size));
      ys.push_back(std::log(static_cast<double>(n)));
    }
  }
  const bool constant = std::all_of(ys.begin(), ys.end(), [&](double y) { return y == ys.front(); });
  if (xs.size() < 2 || constant) {
    e.degenerate = true;
    return e;
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
  mx /= n, my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  e.slope = sxy / sxx;
  e.r2 = sxy * sxy / (sxx * syy);
  return e;
}

std::vector<double> middle_thirds_points(int depth) {
  if (depth < 0 || depth > 20) throw ValidationError("middle thirds: depth must be in [0, 20]");
  std::vector<std::pair<double, double>> iv{{0.0, 1.0}};
  for (int d = 0; d < depth; ++d) {
    std::vector<std::pair<double, double>> next;
    next.reserve(iv.size() * 2);
    for (auto [a, b] : iv) {
      const double w = (b - a) / 3;
      next.emplace_back(a, a + w);
      next.emplace_back(b - w, b);
    }
    iv = std::move(next);
  }
  std::vector<double> pts;
  pts.reserve(iv.size() * 2);
  for (auto [a, b] : iv) pts.push_back(a), pts.push_back(b);
  return pts;
}

}  // namespace twofold
