#include "twofold/ifs.hpp"

#include <algorithm>
#include <sstream>

namespace twofold {

namespace {

void check_letter(int letter) {
  if (letter < 1 || letter > 4) throw ValidationError("letter " + std::to_string(letter) + " is not in {1,2,3,4}");
}

Word parse_letters(std::string_view s, std::string_view whole) {
  Word w;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto comma = s.find(',', pos);
    std::string_view tok = s.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    if (tok.size() != 1 || tok[0] < '1' || tok[0] > '4')
      throw ValidationError("malformed address: '" + std::string(whole) + "'");
    w.push_back(tok[0] - '0');
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return w;
}

void append_letters(std::ostringstream& os, const Word& w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) os << ',';
    os << w[i];
  }
}

}  // namespace

Word::Word(std::initializer_list<int> letters) {
  for (int l : letters) push_back(l);
}

Word::Word(std::vector<std::uint8_t> letters) : letters_(std::move(letters)) {
  for (auto l : letters_) check_letter(l);
}

void Word::push_back(int letter) {
  check_letter(letter);
  letters_.push_back(static_cast<std::uint8_t>(letter));
}

Word Word::operator+(const Word& other) const {
  Word r = *this;
  r.letters_.insert(r.letters_.end(), other.letters_.begin(), other.letters_.end());
  return r;
}

Word Word::repeat(int letter, int count) {
  check_letter(letter);
  Word r;
  r.letters_.assign(static_cast<std::size_t>(std::max(count, 0)), static_cast<std::uint8_t>(letter));
  return r;
}

Address Address::parse(std::string_view text) {
  Address a;
  std::string_view s = text;
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.empty()) throw ValidationError("empty address");
  std::string_view pre = s, per;
  if (auto open = s.find('('); open != std::string_view::npos) {
    if (s.back() != ')') throw ValidationError("malformed address: '" + std::string(text) + "'");
    per = s.substr(open + 1, s.size() - open - 2);
    pre = s.substr(0, open);
    while (!pre.empty() && (pre.back() == ' ' || pre.back() == ',')) {
      if (pre.back() == ',' && pre.size() == 1) break;
      pre.remove_suffix(1);
    }
    if (per.empty()) throw ValidationError("empty period in address: '" + std::string(text) + "'");
    a.period = parse_letters(per, text);
  }
  if (!pre.empty()) a.preperiod = parse_letters(pre, text);
  return a;
}

std::string Address::str() const {
  std::ostringstream os;
  append_letters(os, preperiod);
  if (!period.empty()) {
    if (!preperiod.empty()) os << ',';
    os << '(';
    append_letters(os, period);
    os << ')';
  }
  return os.str();
}

Scalar Span::separation(const Span& o) const {
  if (certainly_less(hi, o.lo)) return o.lo - hi;
  if (certainly_less(o.hi, lo)) return lo - o.hi;
  return Scalar(0L);
}

SimilaritySystem::SimilaritySystem(Params params) : params_(std::move(params)) {
  const Scalar& p = params_.p();
  const Scalar& q = params_.q();
  const Scalar one(1L);
  maps_ = {Affine{p, Scalar(0L)}, Affine{q, Scalar(0L)}, Affine{p, one - p}, Affine{q, one - q}};
  rho_ = params_.max_ratio();
}

const Affine& SimilaritySystem::map(int i) const {
  check_letter(i);
  return maps_[static_cast<std::size_t>(i - 1)];
}

Affine SimilaritySystem::word_map(const Word& w) const {
  Affine f;
  for (std::size_t i = 0; i < w.size(); ++i) f = f.after(map(w[i]));
  return f;
}

Scalar apply_word(const SimilaritySystem& sys, const Word& w, const Scalar& x) {
  if (!certainly_less_equal(Scalar(0L), x) || !certainly_less_equal(x, Scalar(1L)))
    throw ValidationError("apply_word: x = " + x.str() + " is not inside [0,1]");
  Scalar y = x;
  for (std::size_t i = w.size(); i-- > 0;) y = sys.map(w[i])(y);
  return y;
}

Span address_point(const SimilaritySystem& sys, const Address& a) {
  if (a.preperiod.empty() && a.period.empty()) throw ValidationError("empty address");
  const Affine pre = sys.word_map(a.preperiod);
  if (a.truncated()) return {pre(Scalar(0L)), pre(Scalar(1L))};
  const Affine cyc = sys.word_map(a.period);
  const Scalar fixed = cyc.offset / (Scalar(1L) - cyc.slope);
  const Scalar x = pre(fixed);
  return {x, x};
}

Scalar address_value(const SimilaritySystem& sys, const Address& a) {
  if (a.truncated()) throw ValidationError("address '" + a.str() + "' has no period");
  return address_point(sys, a).lo;
}

Cylinder root_cylinder() { return {Affine{}, Word{}}; }

std::array<Cylinder, 4> children(const SimilaritySystem& sys, const Cylinder& c) {
  std::array<Cylinder, 4> out;
  for (int i = 1; i <= 4; ++i) {
    Word w = c.word;
    w.push_back(i);
    out[static_cast<std::size_t>(i - 1)] = Cylinder{c.map.after(sys.map(i)), std::move(w)};
  }
  return out;
}

std::string to_string(SetTag tag) {
  switch (tag) {
    case SetTag::K: return "K";
    case SetTag::A: return "A";
    case SetTag::B: return "B";
  }
  return "?";
}

SetTag parse_set_tag(std::string_view s) {
  if (s == "K") return SetTag::K;
  if (s == "A") return SetTag::A;
  if (s == "B") return SetTag::B;
  throw ValidationError("set tag must be K, A or B, got '" + std::string(s) + "'");
}

std::vector<Span> merge_spans(std::vector<Span> spans) {
  std::sort(spans.begin(), spans.end(), [](const Span& x, const Span& y) {
    if (x.lo.is_exact() && y.lo.is_exact()) return x.lo.exact() < y.lo.exact();
    return x.lo.lower() < y.lo.lower();
  });
  std::vector<Span> out;
  for (auto& s : spans) {
    // Touching intervals merge too, so only a certain gap keeps them apart.
    if (!out.empty() && !certainly_less(out.back().hi, s.lo)) {
      out.back().hi = max(out.back().hi, s.hi);
    } else {
      out.push_back(std::move(s));
    }
  }
  return out;
}

namespace {

// Union of S_i(spans) over the given letters. Since S_i maps unions to
// unions, applying this level by level to the merged depth-(d-1) cover of K
// gives the union over all words of length d.
std::vector<Span> images(const SimilaritySystem& sys, const std::vector<Span>& spans, std::initializer_list<int> letters) {
  std::vector<Span> out;
  out.reserve(spans.size() * letters.size());
  for (int i : letters) {
    const Affine& f = sys.map(i);
    for (const auto& s : spans) out.push_back({f(s.lo), f(s.hi)});
  }
  return merge_spans(std::move(out));
}

}  // namespace

IntervalCover cover(const SimilaritySystem& sys, SetTag tag, int depth, const Limits& limits) {
  if (depth < 0) throw ValidationError("cover: negative depth");
  if (depth > limits.max_cover_depth)
    throw BudgetError("cover: depth " + std::to_string(depth) + " exceeds cap " + std::to_string(limits.max_cover_depth));
  IntervalCover c{tag, depth, {{Scalar(0L), Scalar(1L)}}};
  if (depth == 0) return c;
  std::vector<Span> k = c.intervals;
  for (int d = 1; d < depth; ++d) k = images(sys, k, {1, 2, 3, 4});
  switch (tag) {
    case SetTag::K: c.intervals = images(sys, k, {1, 2, 3, 4}); break;
    case SetTag::A: c.intervals = images(sys, k, {3, 4}); break;
    case SetTag::B: c.intervals = images(sys, k, {1, 2}); break;
  }
  return c;
}

IntervalCover reflect(const IntervalCover& c) {
  IntervalCover r{c.tag == SetTag::A ? SetTag::B : c.tag == SetTag::B ? SetTag::A : SetTag::K, c.depth, {}};
  const Scalar one(1L);
  r.intervals.reserve(c.intervals.size());
  for (auto it = c.intervals.rbegin(); it != c.intervals.rend(); ++it) r.intervals.push_back({one - it->hi, one - it->lo});
  return r;
}

IntervalCover transform(const IntervalCover& c, const Affine& f) {
  if (!certainly_less(Scalar(0L), f.slope)) throw ValidationError("transform: slope must be positive");
  IntervalCover r{c.tag, c.depth, {}};
  r.intervals.reserve(c.intervals.size());
  for (const auto& s : c.intervals) r.intervals.push_back({f(s.lo), f(s.hi)});
  return r;
}

bool certainly_disjoint(const IntervalCover& a, const IntervalCover& b) {
  std::size_t i = 0, j = 0;
  while (i < a.intervals.size() && j < b.intervals.size()) {
    const Span& x = a.intervals[i];
    const Span& y = b.intervals[j];
    if (!x.certainly_disjoint_from(y)) return false;
    if (certainly_less(x.hi, y.lo)) ++i; else ++j;
  }
  return true;
}

bool nested_in(const IntervalCover& fine, const IntervalCover& coarse) {
  std::size_t j = 0;
  for (const auto& s : fine.intervals) {
    while (j < coarse.intervals.size() && certainly_less(coarse.intervals[j].hi, s.lo)) ++j;
    if (j == coarse.intervals.size() || !coarse.intervals[j].certainly_contains(s)) return false;
  }
  return true;
}

Scalar displacement_bound(const SimilaritySystem& sys, const SimilaritySystem& sys2) {
  const Params& a = sys.params();
  const Params& b = sys2.params();
  // |S'_i(x) - S_i(x)| over [0,1] peaks at |ratio' - ratio| for every map.
  const Scalar delta = max(abs(b.p() - a.p()), abs(b.q() - a.q()));
  const Scalar rho = max(sys.rho(), sys2.rho());
  return delta / (Scalar(1L) - rho);
}

}  // namespace twofold
