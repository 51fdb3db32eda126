#pragma once

// The four-map system S_pq on [0,1], words and addresses over {1,2,3,4},
// the address map, and finite-depth interval covers.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "twofold/numeric.hpp"

namespace twofold {

/// Finite word over the alphabet {1,2,3,4}.
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<int> letters);
  explicit Word(std::vector<std::uint8_t> letters);

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  int operator[](std::size_t i) const { return letters_[i]; }
  const std::vector<std::uint8_t>& letters() const { return letters_; }

  void push_back(int letter);
  Word operator+(const Word& other) const;
  /// Word consisting of `letter` repeated `count` times.
  static Word repeat(int letter, int count);

  friend bool operator==(const Word&, const Word&) = default;

 private:
  std::vector<std::uint8_t> letters_;
};

/// preperiod followed by period repeated forever. An empty period denotes a
/// truncated address, known only up to the cylinder of its preperiod.
struct Address {
  Word preperiod;
  Word period;

  bool truncated() const { return period.empty(); }

  /// Parses "4,1,(2)", "(3)", "1,2,(1,3)" or a truncated "3,4,1".
  static Address parse(std::string_view text);
  std::string str() const;

  friend bool operator==(const Address&, const Address&) = default;
};

/// x -> slope * x + offset.
struct Affine {
  Scalar slope = Scalar(1L);
  Scalar offset = Scalar(0L);

  Scalar operator()(const Scalar& x) const { return slope * x + offset; }
  /// (*this) o inner
  Affine after(const Affine& inner) const { return {slope * inner.slope, slope * inner.offset + offset}; }
  friend bool certainly_equal(const Affine& a, const Affine& b) {
    return certainly_equal(a.slope, b.slope) && certainly_equal(a.offset, b.offset);
  }
};

/// Closed interval [lo, hi]; in interval mode the endpoints themselves are
/// enclosures and the set is contained in [lo.lower(), hi.upper()].
struct Span {
  Scalar lo;
  Scalar hi;

  Scalar length() const { return hi - lo; }
  bool certainly_disjoint_from(const Span& o) const {
    return certainly_less(hi, o.lo) || certainly_less(o.hi, lo);
  }
  /// Lower bound of the distance between the two spans (0 if they may meet).
  Scalar separation(const Span& o) const;
  bool certainly_contains(const Span& inner) const {
    return certainly_less_equal(lo, inner.lo) && certainly_less_equal(inner.hi, hi);
  }
};

class SimilaritySystem {
 public:
  explicit SimilaritySystem(Params params);

  const Params& params() const { return params_; }
  /// S_i for i in {1,2,3,4}.
  const Affine& map(int i) const;
  /// S_{w1} o S_{w2} o ... o S_{wn}.
  Affine word_map(const Word& w) const;
  /// Largest contraction ratio, max(p, q).
  const Scalar& rho() const { return rho_; }

 private:
  Params params_;
  std::array<Affine, 4> maps_;
  Scalar rho_;
};

/// S_w(x), leftmost letter applied last. Requires x in [0,1].
Scalar apply_word(const SimilaritySystem& sys, const Word& w, const Scalar& x);

/// The point pi(a). Periodic addresses give a degenerate span holding the
/// exact value; truncated addresses give the cylinder hull [S_w(0), S_w(1)].
Span address_point(const SimilaritySystem& sys, const Address& a);
/// pi(a) for addresses with a nonempty period.
Scalar address_value(const SimilaritySystem& sys, const Address& a);

/// Image S_w([0,1]) together with the word that produced it.
struct Cylinder {
  Affine map;
  Word word;

  Span hull() const { return {map.offset, map.offset + map.slope}; }
  Scalar length() const { return map.slope; }
};

Cylinder root_cylinder();
/// S_w S_i for i = 1..4.
std::array<Cylinder, 4> children(const SimilaritySystem& sys, const Cylinder& c);

enum class SetTag { K, A, B };
std::string to_string(SetTag tag);
SetTag parse_set_tag(std::string_view s);

struct IntervalCover {
  SetTag tag = SetTag::K;
  int depth = 0;
  std::vector<Span> intervals;  // sorted, pairwise disjoint
};

/// Union of S_w([0,1]) over all words of length `depth` (first letter in
/// {3,4} for A, {1,2} for B), merged where intervals overlap or touch.
/// Depth 0 is the hull [0,1] for every tag.
IntervalCover cover(const SimilaritySystem& sys, SetTag tag, int depth, const Limits& limits = {});

/// Sorts and merges overlapping or touching spans.
std::vector<Span> merge_spans(std::vector<Span> spans);

/// Image under x -> 1 - x; swaps the A and B tags.
IntervalCover reflect(const IntervalCover& c);

/// Image of every interval under an increasing affine map.
IntervalCover transform(const IntervalCover& c, const Affine& f);

/// True when no interval of one cover can meet an interval of the other.
bool certainly_disjoint(const IntervalCover& a, const IntervalCover& b);

/// Every interval of `fine` lies inside some interval of `coarse`.
bool nested_in(const IntervalCover& fine, const IntervalCover& coarse);

/// delta / (1 - rho): delta is the largest displacement of any map over
/// [0,1] between the two systems, rho the largest contraction ratio of both.
Scalar displacement_bound(const SimilaritySystem& sys, const SimilaritySystem& sys2);

}  // namespace twofold
