#pragma once

#include "opinf/opi.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace opinf {

// Classical grid strategy on the triangle: each of the three sources emits a
// value uniform on {0..k-1}; each party maps its two incoming values through
// a lookup table to one of the four outputs:
//   a = A[beta*k + gamma],  b = B[gamma*k + alpha],  c = C[alpha*k + beta].
struct GridStrategy {
  int k = 1;
  std::vector<std::int8_t> A, B, C;  // each of size k*k, values in 0..3

  static GridStrategy uniform_output(int k, std::int8_t value = 0);
};

// Closed-form k=2 example: every party outputs the two incoming bits read as
// a number (a = 2 beta + gamma, b = 2 gamma + alpha, c = 2 alpha + beta).
// It meets the inequality with equality on each of its eight populated cells.
GridStrategy witness_strategy();

std::uint64_t strategy_hash(const GridStrategy& s);

// Exact evaluation over the k^3 equally likely source triples.
struct StrategyEval {
  int k = 1;
  std::array<long long, 64> counts{};     // cell counts, index a*16+b*4+c
  std::array<long long, 4> ca{}, cb{}, cc{};  // marginal counts over k^2 pairs
  bool finner_ok = true;    // n_abc^2 <= ca*cb*cc at every cell (exact)
  bool saturating = false;  // finner_ok and equality at some cell with n_abc > 0
  bool exactly_opi = false; // cell counts constant on each outcome orbit class
  double margin = 0;        // min over cells of (sqrt(ca cb cc) - n_abc) / k^3
  double e2 = 0, e3o = 0;   // correlators of the symmetrized distribution
  double opi_dev = 0;       // max cell deviation from its orbit-class average
};

StrategyEval eval_strategy(const GridStrategy& s);

TriangleDistribution to_distribution(const GridStrategy& s);

// --- scanning ----------------------------------------------------------------

struct ScanOptions {
  int k = 2;
  // samples == 0: exhaustive over all 4^(3 k^2) tables (supported for k <= 2);
  // samples > 0: that many pseudo-random strategies from `seed`.
  std::uint64_t samples = 0;
  std::uint64_t seed = 1;
  std::uint64_t start_index = 0;     // resume point (exhaustive mode)
  std::uint64_t max_strategies = 0;  // 0: unbounded; else stop after this many
  int threads = 0;                   // 0: OPINF_THREADS or hardware
};

struct ScanSummary {
  std::uint64_t scanned = 0;
  std::uint64_t total = 0;       // size of the exhaustive space (0 if sampling)
  std::uint64_t next_index = 0;  // resume index when stopped early
  bool complete = true;
  double min_margin = 0;
  std::uint64_t violations = 0;      // strategies with a strict violation
  std::uint64_t saturating = 0;
  std::uint64_t opi_saturating = 0;  // saturating and exactly symmetric
  std::optional<GridStrategy> example_saturating_non_opi;
};

// Per-strategy callback; when set the scan runs single-threaded so the
// record stream is deterministic.
using ScanCallback = std::function<void(std::uint64_t index, const GridStrategy&,
                                        const StrategyEval&)>;

ScanSummary scan_local(const ScanOptions& opts, const ScanCallback& cb = {});

// --- saturating-strategy search ------------------------------------------------

enum class SearchStatus { Empty, Found, Unsupported, BudgetExceeded };

std::string search_status_name(SearchStatus s);

struct SaturatingSearch {
  SearchStatus status = SearchStatus::Unsupported;
  std::uint64_t scanned = 0;
  std::uint64_t next_index = 0;          // resume point for BudgetExceeded
  std::vector<GridStrategy> found;       // capped
  std::string analysis;                  // the exact counting argument applied
};

// Search for strategies whose distribution meets the inequality with
// equality.  With require_opi the distribution must in addition be exactly
// symmetric; an integer counting argument settles most k without
// enumeration, and k <= 2 is additionally confirmed exhaustively.
SaturatingSearch search_finner_saturating(int k, bool require_opi,
                                          std::uint64_t max_strategies = 0,
                                          std::uint64_t start_index = 0,
                                          std::size_t found_cap = 8);

// --- geometry of a strategy set -------------------------------------------------

struct BoxShape {
  bool is_product = false;  // set == product of its three table projections
  std::array<std::uint64_t, 3> sides{0, 0, 0};
  bool is_cube = false;
  std::uint64_t size = 0;   // distinct strategies
};

// Checks whether a set of strategies factors as (A tables) x (B tables) x
// (C tables).  The empty set counts as a degenerate box with sides 0.
BoxShape box_shape_check(const std::vector<GridStrategy>& set);

} // namespace opinf
