#include "twofold/cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <chrono>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <map>
#include <sstream>

#include "twofold/density.hpp"
#include "twofold/dimension.hpp"
#include "twofold/ifs.hpp"
#include "twofold/represent.hpp"
#include "twofold/scan.hpp"
#include "twofold/tfcert.hpp"

namespace twofold::cli {

using nlohmann::json;

namespace {

json num(const Rational& x) { return {{"rational", to_string(x)}, {"decimal", to_double(x)}}; }

json num(const Scalar& s) {
  if (s.is_exact()) return num(s.exact());
  return {{"interval", {s.lower(), s.upper()}}, {"decimal", s.approx()}};
}

json num(const RationalInterval& r) { return {{"lo", num(r.lo)}, {"hi", num(r.hi)}}; }

std::string dec(const Scalar& s) {
  // Shortest text that reads back as the same double.
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, s.approx());
  return std::string(buf, res.ptr);
}

// Interval values contain a comma and are quoted.
std::string csv_field(const Scalar& s) { return s.is_exact() ? s.str() : '"' + s.str() + '"'; }

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("not an integer list: '" + text + "'");
    }
  }
  return out;
}

std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(parse_rational(item));
  return out;
}

/// Shared flags and the per-command state every handler sees.
struct Context {
  std::ostream& out;
  bool as_float = false;
  bool meta = false;
  int jobs = 1;
  std::string command;
};

void add_common(CLI::App& app, Context& ctx) {
  app.add_flag("--float", ctx.as_float, "Treat decimal parameters as outward-rounded intervals");
  app.add_flag("--meta", ctx.meta, "Report run metadata (timing) on stderr");
  app.add_option("--jobs", ctx.jobs, "Worker threads for scans")->check(CLI::Range(1, 256));
}

void require_exact(const Context& ctx) {
  if (ctx.as_float) throw ValidationError(ctx.command + " needs exact parameters; --float is not supported");
}

json header(const Context& ctx) { return {{"schema_version", kSchemaVersion}, {"command", ctx.command}}; }

void put_params(json& j, const Params& params, const char* p = "p", const char* q = "q") {
  j[p] = num(params.p());
  j[q] = num(params.q());
}

json pair_json(const ExpPair& e) { return json::array({e.m, e.n}); }

// ---------------------------------------------------------------------------

using Handler = std::function<int()>;

struct Command {
  std::string help;
  std::function<Handler(CLI::App&, Context&)> setup;
};

Handler cmd_dim(CLI::App& app, Context& ctx) {
  auto p = std::make_shared<std::string>(), q = std::make_shared<std::string>();
  auto ladder = std::make_shared<int>(0);
  auto opts = std::make_shared<DimOptions>();
  app.add_option("--p", *p, "Ratio p in (0,1/16)")->required();
  app.add_option("--q", *q, "Ratio q in (0,1/16)")->required();
  app.add_option("--ladder", *ladder, "Also solve the truncated equations for n = 1..N")->check(CLI::Range(0, 1000));
  app.add_option("--tol", opts->tol, "Bracket width tolerance (0: bisect to precision)");
  app.add_option("--precision", opts->precision, "MPFR working precision in bits");
  return [=, &ctx] {
    const Params params = Params::parse(*p, *q, ctx.as_float);
    const DimResult r = solve_dim(params, *opts);
    json j = header(ctx);
    put_params(j, params);
    j["d"] = num(r.bracket.mid());
    j["bracket"] = num(RationalInterval{r.bracket.lo, r.bracket.hi});
    j["residual_lo"] = r.residual.lo;
    j["residual_hi"] = r.residual.hi;
    j["iterations"] = r.iterations;
    if (*ladder > 0) {
      const LadderResult lr = dimension_ladder(params, *ladder, *opts);
      json rows = json::array();
      for (std::size_t k = 0; k < lr.truncated.size(); ++k)
        rows.push_back({{"n", k + 1}, {"d", num(lr.truncated[k].mid())},
                        {"bracket", num(RationalInterval{lr.truncated[k].lo, lr.truncated[k].hi})}});
      j["ladder"] = rows;
      j["ladder_certified_increasing"] = lr.certified_increasing();
    }
    ctx.out << j.dump() << '\n';
    return kOk;
  };
}

json verdict_json(const PairVerdict& v) {
  json j = {{"m", v.m}, {"n", v.n}, {"status", to_string(v.status)}, {"via_window", v.via_window},
            {"depth_u", v.depth_u}, {"depth_v", v.depth_v}};
  switch (v.status) {
    case PairStatus::Disjoint: j["gap"] = num(v.gap); break;
    case PairStatus::Overlap:
      j["witness"] = {{"u", v.witness->u.str()}, {"v", v.witness->v.str()}, {"point", num(v.witness->point)}};
      break;
    case PairStatus::Unknown:
      j["residual"] = num(v.residual);
      j["budget_exhausted"] = v.budget_exhausted;
      break;
  }
  return j;
}

Handler cmd_check_tf(CLI::App& app, Context& ctx) {
  auto p = std::make_shared<std::string>(), q = std::make_shared<std::string>();
  auto max_sum = std::make_shared<int>(12), depth = std::make_shared<int>(10);
  auto stop = std::make_shared<bool>(false);
  app.add_option("--p", *p)->required();
  app.add_option("--q", *q)->required();
  app.add_option("--max-sum", *max_sum, "Check pairs with m + n <= max-sum");
  app.add_option("--depth", *depth, "Refinement depth per pair");
  app.add_flag("--stop-at-failure", *stop, "Stop at the first overlapping pair");
  return [=, &ctx] {
    const Params params = Params::parse(*p, *q, ctx.as_float);
    const TfReport r = check_tf(params, *max_sum, *depth, {}, TfOptions{*stop});
    json j = header(ctx);
    put_params(j, params);
    j["max_sum"] = r.max_sum;
    j["depth"] = r.depth;
    json s = {{"kind", r.summary.kind == TfSummary::Kind::FailedAt ? "FailedAt" : "CertifiedUpTo"},
              {"unknown", r.summary.unknown}};
    if (r.summary.kind == TfSummary::Kind::FailedAt) {
      s["m"] = r.summary.m;
      s["n"] = r.summary.n;
    }
    j["summary"] = s;
    json vs = json::array();
    for (const auto& v : r.verdicts) vs.push_back(verdict_json(v));
    j["pairs"] = vs;
    ctx.out << j.dump() << '\n';
    return r.summary.unknown > 0 ? kBudget : kOk;
  };
}

Handler cmd_scan(CLI::App& app, Context& ctx) {
  struct Flags {
    std::string p_lo = "0", p_hi = "1/16", q_lo = "0", q_hi = "1/16", seeds, svg;
    ScanOptions o;
  };
  auto f = std::make_shared<Flags>();
  app.add_option("--p-lo", f->p_lo);
  app.add_option("--p-hi", f->p_hi);
  app.add_option("--q-lo", f->q_lo);
  app.add_option("--q-hi", f->q_hi);
  app.add_option("--resolution", f->o.resolution, "Cells per side");
  app.add_option("--max-sum", f->o.max_sum);
  app.add_option("--depth", f->o.depth);
  app.add_option("--seeds", f->seeds, "Comma-separated powers s (integers or a/b): seed cells on q = p^s");
  app.add_option("--seed-block", f->o.seed_block, "Seed one curve point q^b = p^a in every block of this many cells");
  app.add_option("--svg", f->svg, "Also write an SVG raster to this path");
  return [=, &ctx] {
    require_exact(ctx);
    ScanDomain d{parse_rational(f->p_lo), parse_rational(f->p_hi), parse_rational(f->q_lo), parse_rational(f->q_hi)};
    ScanOptions o = f->o;
    o.seed_powers = parse_rational_list(f->seeds);
    o.jobs = ctx.jobs;
    const ScanGrid g = scan_square(d, o);
    write_csv(g, ctx.out);
    std::ostringstream fr;
    fr.precision(17);
    fr << "# flagged_fraction " << g.flagged_fraction() << " undecided_fraction " << g.undecided_fraction() << '\n';
    ctx.out << fr.str();
    if (!f->svg.empty()) {
      std::ofstream svg(f->svg);
      if (!svg) throw ValidationError("cannot write '" + f->svg + "'");
      write_svg(g, svg);
    }
    return g.undecided_fraction() > 0 ? kBudget : kOk;
  };
}

Handler cmd_slice(CLI::App& app, Context& ctx) {
  struct Flags {
    std::string p, seeds;
    int samples = 256, max_sum = 12, depth = 10;
    bool boxdim = false;
  };
  auto f = std::make_shared<Flags>();
  app.add_option("--p", f->p)->required();
  app.add_option("--samples", f->samples, "Number of evenly spaced q samples");
  app.add_option("--max-sum", f->max_sum);
  app.add_option("--depth", f->depth);
  app.add_option("--seeds", f->seeds, "Comma-separated powers s: add q = p^s");
  app.add_flag("--boxdim", f->boxdim, "Box-counting estimate of the flagged and undecided q-set");
  return [=, &ctx] {
    require_exact(ctx);
    const SliceScan s = slice_scan(parse_rational(f->p), f->samples, f->max_sum, f->depth, parse_int_list(f->seeds), ctx.jobs);
    json j = header(ctx);
    j["p"] = num(s.p);
    json samples = json::array();
    bool undecided = false;
    for (const auto& c : s.samples) {
      json row = {{"q", num(c.q)}, {"status", to_string(c.status)}};
      if (c.status == CellStatus::Flagged) row["pair"] = {c.m, c.n};
      if (c.seeded) row["seed_power"] = to_string(c.seed_power);
      undecided = undecided || c.status == CellStatus::Undecided;
      samples.push_back(row);
    }
    j["samples"] = samples;
    json flagged = json::array();
    for (const auto& [mn, qs] : s.flagged) {
      json list = json::array();
      for (const auto& q : qs) list.push_back(num(q));
      flagged.push_back({{"m", mn.first}, {"n", mn.second}, {"q", list}});
    }
    j["flagged"] = flagged;
    if (f->boxdim) {
      std::vector<double> pts;
      for (const auto& q : s.exceptional_points()) pts.push_back(to_double(q));
      if (pts.size() >= 2) {
        const BoxDimEstimate e = box_dim_estimate(pts, 0.0, 1.0 / 16.0);
        j["boxdim"] = {{"slope", e.slope}, {"r2", e.r2}, {"degenerate", e.degenerate}, {"counts", e.counts}};
      } else {
        j["boxdim"] = nullptr;
      }
    }
    ctx.out << j.dump() << '\n';
    return undecided ? kBudget : kOk;
  };
}

Handler cmd_witness_wsp(CLI::App& app, Context& ctx) {
  auto p = std::make_shared<std::string>(), q = std::make_shared<std::string>();
  auto count = std::make_shared<int>(5);
  auto max_dev = std::make_shared<std::string>("1/5");
  auto precision = std::make_shared<int>(53);
  app.add_option("--p", *p)->required();
  app.add_option("--q", *q)->required();
  app.add_option("--count", *count, "Number of witnesses")->check(CLI::Range(1, 64));
  app.add_option("--max-deviation", *max_dev, "Only report maps with |p^m/q^n - 1| below this");
  app.add_option("--precision", *precision, "Starting precision in bits");
  return [=, &ctx] {
    const Params params = Params::parse(*p, *q, ctx.as_float);
    const WspWitness w = wsp_witnesses(params, *count, WspOptions{*precision, parse_rational(*max_dev)});
    json j = header(ctx);
    put_params(j, params);
    json rows = json::array();
    for (const auto& e : w.entries)
      rows.push_back({{"m", e.m}, {"n", e.n}, {"ratio", num(e.ratio)}, {"deviation", num(e.deviation)}});
    j["witnesses"] = rows;
    j["precision_used"] = w.precision_used;
    ctx.out << j.dump() << '\n';
    return kOk;
  };
}

Handler cmd_witness_order(CLI::App& app, Context& ctx) {
  auto v = std::make_shared<std::array<std::string, 4>>();
  auto max_exp = std::make_shared<int>(200);
  app.add_option("--p", (*v)[0])->required();
  app.add_option("--q", (*v)[1])->required();
  app.add_option("--p2", (*v)[2], "Target p'")->required();
  app.add_option("--q2", (*v)[3], "Target q'")->required();
  app.add_option("--max-exp", *max_exp, "Largest exponent allowed in the witness");
  return [=, &ctx] {
    require_exact(ctx);
    const Params a = Params::parse((*v)[0], (*v)[1]);
    const Params b = Params::parse((*v)[2], (*v)[3]);
    const OrderSearchResult r = order_violation_witness(a, b, *max_exp);
    json j = header(ctx);
    put_params(j, a);
    put_params(j, b, "p2", "q2");
    j["status"] = to_string(r.status);
    j["alpha"] = num(r.alpha);
    j["beta"] = num(r.beta);
    if (r.witness) {
      j["witness"] = {{"lower", pair_json(r.witness->lower)},
                      {"upper", pair_json(r.witness->upper)},
                      {"max_exponent", r.witness->max_exponent()},
                      {"verified", verify_order_witness(a, b, *r.witness)}};
    }
    ctx.out << j.dump() << '\n';
    return r.status == OrderSearchStatus::Found ? kOk : kBudget;
  };
}

Handler cmd_transport(CLI::App& app, Context& ctx) {
  auto v = std::make_shared<std::array<std::string, 5>>();
  app.add_option("--address", (*v)[0], "Eventually periodic address, e.g. 4,1,(2)")->required();
  app.add_option("--p", (*v)[1])->required();
  app.add_option("--q", (*v)[2])->required();
  app.add_option("--p2", (*v)[3])->required();
  app.add_option("--q2", (*v)[4])->required();
  return [=, &ctx] {
    const Params a = Params::parse((*v)[1], (*v)[2], ctx.as_float);
    const Params b = Params::parse((*v)[3], (*v)[4], ctx.as_float);
    const Address addr = Address::parse((*v)[0]);
    const AltSumRep rep = addr_to_altsum(addr);
    json j = header(ctx);
    put_params(j, a);
    put_params(j, b, "p2", "q2");
    j["address"] = addr.str();
    j["representation"] = to_string(rep);
    j["value"] = num(altsum_to_value(a, rep));
    j["image"] = num(transport(rep, b));
    ctx.out << j.dump() << '\n';
    return kOk;
  };
}

Handler cmd_gap(CLI::App& app, Context& ctx) {
  struct Flags {
    std::string p, q, t = "1", r = "1", anchor;
    int depth = 8, probe = 0;
    bool left = false;
  };
  auto f = std::make_shared<Flags>();
  app.add_option("--p", f->p)->required();
  app.add_option("--q", f->q)->required();
  app.add_option("--t", f->t, "Scale factor");
  app.add_option("--r", f->r, "Window length after scaling");
  app.add_option("--depth", f->depth, "Refine cylinders below 2^-depth of the window");
  app.add_option("--probe", f->probe, "Probe t = (pq)^-k for k = 1..K instead of --t");
  app.add_option("--anchor", f->anchor, "Anchor word w; the window starts at S_w(0)");
  app.add_flag("--left", f->left, "Window ends at S_w(1) instead");
  return [=, &ctx] {
    require_exact(ctx);
    const SimilaritySystem sys(Params::parse(f->p, f->q));
    const Rational r = parse_rational(f->r);
    std::vector<std::pair<std::string, GapValue>> rows;
    const ProbeAnchor anchor{f->anchor.empty() ? Word{} : Address::parse(f->anchor).preperiod,
                             f->left ? ProbeSide::Left : ProbeSide::Right};
    if (!f->anchor.empty() && !Address::parse(f->anchor).truncated())
      throw ValidationError("--anchor takes a finite word such as 4,1");
    if (f->probe > 0) {
      for (const auto& pt : limit_probe(sys, r, 1, f->probe, f->depth, anchor)) rows.emplace_back(std::to_string(pt.k), pt.gap);
    } else {
      const Affine w = sys.word_map(anchor.word);
      const Rational c = (anchor.side == ProbeSide::Right ? w(Scalar(0L)) : w(Scalar(1L))).exact();
      rows.emplace_back("", gap_in_window(sys, c, anchor.side, parse_rational(f->t), r, f->depth));
    }
    ctx.out << "# schema_version " << kSchemaVersion << '\n';
    ctx.out << "k,t,gap_lo,gap_hi,gap_lo_decimal,gap_hi_decimal,unresolved\n";
    bool unresolved = false;
    for (const auto& [k, g] : rows) {
      ctx.out << k << ',' << to_string(g.t) << ',' << to_string(g.lower) << ',' << to_string(g.upper) << ','
              << dec(Scalar(g.lower)) << ',' << dec(Scalar(g.upper)) << ',' << (g.unresolved ? 1 : 0) << '\n';
      unresolved = unresolved || g.unresolved;
    }
    return unresolved ? kBudget : kOk;
  };
}

Handler cmd_cover(CLI::App& app, Context& ctx) {
  auto p = std::make_shared<std::string>(), q = std::make_shared<std::string>();
  auto set = std::make_shared<std::string>("K");
  auto depth = std::make_shared<int>(1);
  app.add_option("--p", *p)->required();
  app.add_option("--q", *q)->required();
  app.add_option("--set", *set, "K, A (= S_3 K u S_4 K) or B (= S_1 K u S_2 K)");
  app.add_option("--depth", *depth, "Word length");
  return [=, &ctx] {
    const SimilaritySystem sys(Params::parse(*p, *q, ctx.as_float));
    const IntervalCover c = cover(sys, parse_set_tag(*set), *depth);
    ctx.out << "# schema_version " << kSchemaVersion << '\n';
    ctx.out << "depth,tag,lo,hi,lo_decimal,hi_decimal\n";
    for (const auto& s : c.intervals)
      ctx.out << c.depth << ',' << to_string(c.tag) << ',' << csv_field(s.lo) << ',' << csv_field(s.hi) << ',' << dec(s.lo) << ','
              << dec(s.hi) << '\n';
    return kOk;
  };
}

Handler cmd_boxdim(CLI::App& app, Context& ctx) {
  struct Flags {
    std::string input;
    int cantor = -1, min_exp = 3, max_exp = 12;
    double lo = 0.0, hi = 1.0;
  };
  auto f = std::make_shared<Flags>();
  app.add_option("--input", f->input, "File with one point per line");
  app.add_option("--cantor", f->cantor, "Use the middle-thirds construction at this depth");
  app.add_option("--lo", f->lo);
  app.add_option("--hi", f->hi);
  app.add_option("--min-exp", f->min_exp);
  app.add_option("--max-exp", f->max_exp);
  return [=, &ctx] {
    std::vector<double> pts;
    if (f->cantor >= 0) {
      pts = middle_thirds_points(f->cantor);
    } else if (!f->input.empty()) {
      std::ifstream in(f->input);
      if (!in) throw ValidationError("cannot read '" + f->input + "'");
      for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#') continue;
        pts.push_back(parse_scalar(line, true).approx());
      }
    } else {
      throw ValidationError("boxdim needs --input or --cantor");
    }
    const BoxDimEstimate e = box_dim_estimate(pts, f->lo, f->hi, f->min_exp, f->max_exp);
    json j = header(ctx);
    j["points"] = pts.size();
    j["scales"] = e.scales;
    j["counts"] = e.counts;
    j["slope"] = e.slope;
    j["r2"] = e.r2;
    j["degenerate"] = e.degenerate;
    ctx.out << j.dump() << '\n';
    return kOk;
  };
}

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table = {
      {"dim", {"Hausdorff dimension of K_pq", cmd_dim}},
      {"check-tf", {"Certify the twofold condition up to a pair budget", cmd_check_tf}},
      {"scan", {"Raster the exceptional parameter set (CSV)", cmd_scan}},
      {"slice", {"Exceptional q-values for a fixed p", cmd_slice}},
      {"witness-wsp", {"Maps S_1^m S_2^-n close to the identity", cmd_witness_wsp}},
      {"witness-order", {"Exponent pairs whose order flips between two parameter pairs", cmd_witness_order}},
      {"transport", {"Carry a point of K_pq to K_p'q'", cmd_transport}},
      {"gap", {"Gap functional of scaled copies of K (CSV)", cmd_gap}},
      {"cover", {"Interval cover of K, A or B (CSV)", cmd_cover}},
      {"boxdim", {"Box-counting dimension of a point set", cmd_boxdim}},
  };
  return table;
}

}  // namespace

std::string usage() {
  std::ostringstream os;
  os << "usage: twofold <command> [flags]\n\ncommands:\n";
  for (const auto& [name, c] : commands()) {
    os << "  " << name;
    for (std::size_t k = name.size(); k < 15; ++k) os << ' ';
    os << c.help << '\n';
  }
  os << "\nRun 'twofold <command> --help' for the flags of a command.\n";
  return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty()) {
    err << usage();
    return kUsage;
  }
  if (args[0] == "--help" || args[0] == "-h" || args[0] == "help") {
    out << usage();
    return kOk;
  }
  const auto it = commands().find(args[0]);
  if (it == commands().end()) {
    err << "unknown command '" << args[0] << "'\n" << usage();
    return kUsage;
  }

  Context ctx{out, false, false, 1, it->first};
  CLI::App app(it->second.help, "twofold " + it->first);
  add_common(app, ctx);
  const Handler handler = it->second.setup(app, ctx);
  try {
    std::vector<std::string> rest(args.rbegin(), args.rend() - 1);  // CLI11 takes arguments in reverse
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalid;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    const int status = handler();
    if (ctx.meta) {
      // Kept off stdout so payloads stay byte-identical across runs.
      const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      err << "meta: command " << ctx.command << " elapsed_ms " << ms << " jobs " << ctx.jobs << " exit " << status << '\n';
    }
    return status;
  } catch (const BudgetError& e) {
    err << "budget exhausted: " << e.what() << '\n';
    return kBudget;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace twofold::cli
