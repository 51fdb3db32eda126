#pragma once

// Parameter-space rasters of the exceptional set (pairs (p,q) where the
// twofold condition fails), one-parameter slices, and box counting.

#include <map>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "twofold/numeric.hpp"
#include "twofold/tfcert.hpp"

namespace twofold {

enum class CellStatus { CertifiedTF, Flagged, Undecided };
std::string to_string(CellStatus s);

struct ScanCell {
  Rational p;
  Rational q;
  CellStatus status = CellStatus::Undecided;
  int m = 0;  // first failing pair (Flagged)
  int n = 0;
  /// CertifiedTF: smallest candidate gap; Undecided: widest residual;
  /// Flagged: 0. Empty when no pair entered the window.
  std::optional<Scalar> gap_or_residual;
  bool seeded = false;      // evaluated on a curve point q = p^seed_power
  Rational seed_power{0};   // a/b with q^b = p^a exactly
};

struct ScanDomain {
  Rational p_lo{0};
  Rational p_hi{1, 16};
  Rational q_lo{0};
  Rational q_hi{1, 16};
};

struct ScanOptions {
  int resolution = 64;
  int max_sum = 12;
  int depth = 10;
  std::vector<Rational> seed_powers;  // e.g. {1, 2, 3, 1/2}
  /// If > 0, every block of seed_block x seed_block cells that received no
  /// seed gets one curve point q^b = p^a inside it (smallest a + b first,
  /// a + b <= 64). Seeded cells are checked up to max(max_sum, a + b).
  int seed_block = 0;
  int jobs = 1;
  Limits limits{};
  Integer max_den{1 << 20};
};

/// Cells are stored row-major with the row index running over q.
struct ScanGrid {
  ScanDomain domain;
  int resolution = 0;
  int max_sum = 0;
  int depth = 0;
  std::vector<ScanCell> cells;

  const ScanCell& cell(int i, int j) const { return cells[static_cast<std::size_t>(j) * resolution + i]; }
  double flagged_fraction() const;
  double undecided_fraction() const;
};

/// Runs check_tf (stopping at the first failure) at each rationalized cell
/// center. A seed power s = a/b moves one cell per column onto the curve
/// q = p^s: with u close to the column center's b-th root, the cell that
/// contains (u^b, u^a) is evaluated there instead. Earlier seeds win.
ScanGrid scan_square(const ScanDomain& domain, const ScanOptions& options);

/// Classifies one parameter pair the way scan cells are classified.
ScanCell classify(const Rational& p, const Rational& q, int max_sum, int depth, const Limits& limits = {});

void write_csv(const ScanGrid& grid, std::ostream& out);
void write_svg(const ScanGrid& grid, std::ostream& out, int cell_px = 4);

// ---------------------------------------------------------------------------

struct SliceScan {
  Rational p;
  std::vector<ScanCell> samples;  // ascending q
  std::map<std::pair<int, int>, std::vector<Rational>> flagged;  // by first failing pair

  /// q-values of Flagged and Undecided samples: a depth-limited outer
  /// approximation of the exceptional slice.
  std::vector<Rational> exceptional_points() const;
};

/// Samples q_j = (j + 1/2) / (16 N), j < N, together with q = p^s for the
/// seed powers that land in (0, 1/16).
SliceScan slice_scan(const Rational& p, int q_samples, int max_sum, int depth, const std::vector<int>& seed_powers = {},
                     int jobs = 1, const Limits& limits = {});

// ---------------------------------------------------------------------------

struct BoxDimEstimate {
  std::vector<double> scales;  // box sizes, strictly decreasing
  std::vector<std::size_t> counts;
  double slope = 0.0;
  double r2 = 0.0;
  bool degenerate = false;  // fewer than two usable scales or constant counts
};

/// Occupied-box counts of `points` in [lo, hi] at box sizes (hi-lo) 2^-e for
/// e in [min_exp, max_exp]; OLS slope of log N against -log size over the
/// scales with at least two occupied boxes.
BoxDimEstimate box_dim_estimate(const std::vector<double>& points, double lo, double hi, int min_exp = 3,
                                int max_exp = 12);

/// Endpoints of the 2^depth intervals of the middle-thirds construction.
std::vector<double> middle_thirds_points(int depth);

}  // namespace twofold
