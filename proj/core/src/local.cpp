#include "opinf/local.hpp"

#include "opinf/common.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace opinf {

namespace {

// Class of each output cell under the 4/36/24 partition, tabulated once.
const std::array<int, 64>& cell_class_table() {
  static const std::array<int, 64> table = [] {
    std::array<int, 64> t{};
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c) t[a * 16 + b * 4 + c] = outcome_class(a, b, c);
    return t;
  }();
  return table;
}

constexpr std::array<long long, 3> kClassSizes = {4, 36, 24};

std::uint64_t exhaustive_total(int k) {
  const int digits = 3 * k * k;
  if (digits * 2 > 62)
    throw std::invalid_argument("exhaustive strategy space needs k <= 2 (or 3)");
  return std::uint64_t{1} << (2 * digits);
}

GridStrategy strategy_from_index(int k, std::uint64_t index) {
  GridStrategy s;
  s.k = k;
  const int cells = k * k;
  s.A.resize(cells);
  s.B.resize(cells);
  s.C.resize(cells);
  for (int i = 0; i < cells; ++i) {
    s.A[i] = static_cast<std::int8_t>((index >> (2 * i)) & 3);
    s.B[i] = static_cast<std::int8_t>((index >> (2 * (cells + i))) & 3);
    s.C[i] = static_cast<std::int8_t>((index >> (2 * (2 * cells + i))) & 3);
  }
  return s;
}

struct ChunkStats {
  std::uint64_t scanned = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  std::uint64_t violations = 0;
  std::uint64_t saturating = 0;
  std::uint64_t opi_saturating = 0;
  std::uint64_t example_index = std::numeric_limits<std::uint64_t>::max();
  GridStrategy example;
};

void absorb(ChunkStats& into, const ChunkStats& from) {
  into.scanned += from.scanned;
  into.min_margin = std::min(into.min_margin, from.min_margin);
  into.violations += from.violations;
  into.saturating += from.saturating;
  into.opi_saturating += from.opi_saturating;
  if (from.example_index < into.example_index) {
    into.example_index = from.example_index;
    into.example = from.example;
  }
}

void record(ChunkStats& st, std::uint64_t index, const GridStrategy& s,
            const StrategyEval& ev) {
  ++st.scanned;
  st.min_margin = std::min(st.min_margin, ev.margin);
  if (!ev.finner_ok) ++st.violations;
  if (ev.saturating) {
    ++st.saturating;
    if (ev.exactly_opi)
      ++st.opi_saturating;
    else if (index < st.example_index) {
      st.example_index = index;
      st.example = s;
    }
  }
}

void scan_range(int k, std::uint64_t lo, std::uint64_t hi, ChunkStats& st,
                const ScanCallback& cb) {
  for (std::uint64_t idx = lo; idx < hi; ++idx) {
    GridStrategy s = strategy_from_index(k, idx);
    StrategyEval ev = eval_strategy(s);
    record(st, idx, s, ev);
    if (cb) cb(idx, s, ev);
  }
}

} // namespace

GridStrategy GridStrategy::uniform_output(int k, std::int8_t value) {
  GridStrategy s;
  s.k = k;
  s.A.assign(static_cast<std::size_t>(k) * k, value);
  s.B = s.A;
  s.C = s.A;
  return s;
}

GridStrategy witness_strategy() {
  GridStrategy s;
  s.k = 2;
  s.A.resize(4);
  s.B.resize(4);
  s.C.resize(4);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      s.A[x * 2 + y] = static_cast<std::int8_t>(2 * x + y);  // a = 2 beta + gamma
      s.B[x * 2 + y] = static_cast<std::int8_t>(2 * x + y);  // b = 2 gamma + alpha
      s.C[x * 2 + y] = static_cast<std::int8_t>(2 * x + y);  // c = 2 alpha + beta
    }
  return s;
}

std::uint64_t strategy_hash(const GridStrategy& s) {
  std::uint64_t h = fnv1a64(&s.k, sizeof(s.k));
  h = fnv1a64(s.A.data(), s.A.size(), h);
  h = fnv1a64(s.B.data(), s.B.size(), h);
  h = fnv1a64(s.C.data(), s.C.size(), h);
  return h;
}

StrategyEval eval_strategy(const GridStrategy& s) {
  const int k = s.k;
  if (k < 1) throw std::invalid_argument("grid size must be positive");
  const auto cells = static_cast<std::size_t>(k) * k;
  if (s.A.size() != cells || s.B.size() != cells || s.C.size() != cells)
    throw std::invalid_argument("strategy tables must have k*k entries");
  const long long k3 = static_cast<long long>(k) * k * k;
  const double inv_k3 = 1.0 / static_cast<double>(k3);

  StrategyEval ev;
  ev.k = k;
  for (std::size_t i = 0; i < cells; ++i) {
    ++ev.ca[s.A[i]];
    ++ev.cb[s.B[i]];
    ++ev.cc[s.C[i]];
  }
  for (int alpha = 0; alpha < k; ++alpha)
    for (int beta = 0; beta < k; ++beta)
      for (int gamma = 0; gamma < k; ++gamma) {
        const int a = s.A[beta * k + gamma];
        const int b = s.B[gamma * k + alpha];
        const int c = s.C[alpha * k + beta];
        ++ev.counts[a * 16 + b * 4 + c];
      }

  const auto& cls = cell_class_table();
  std::array<long long, 3> class_sum{0, 0, 0};
  std::array<long long, 3> class_ref{-1, -1, -1};
  ev.exactly_opi = true;
  ev.margin = std::numeric_limits<double>::infinity();
  for (int cell = 0; cell < 64; ++cell) {
    const long long n = ev.counts[cell];
    const int m = cls[cell];
    class_sum[m] += n;
    if (class_ref[m] < 0)
      class_ref[m] = n;
    else if (class_ref[m] != n)
      ev.exactly_opi = false;
    const long long prod = ev.ca[cell >> 4] * ev.cb[(cell >> 2) & 3] * ev.cc[cell & 3];
    if (n * n > prod) ev.finner_ok = false;
    if (n > 0 && n * n == prod) ev.saturating = true;
    ev.margin = std::min(
        ev.margin, (std::sqrt(static_cast<double>(prod)) - static_cast<double>(n)) * inv_k3);
  }
  if (!ev.finner_ok) ev.saturating = false;

  const double s1 = static_cast<double>(class_sum[0]);
  const double s2 = static_cast<double>(class_sum[1]);
  const double s3 = static_cast<double>(class_sum[2]);
  ev.e2 = (s1 + s2 / 9.0 - s3 / 3.0) * inv_k3;
  ev.e3o = (s1 - s2 / 3.0 + s3 / 3.0) * inv_k3;
  double dev = 0;
  for (int cell = 0; cell < 64; ++cell) {
    const int m = cls[cell];
    const double mean = static_cast<double>(class_sum[m]) /
                        static_cast<double>(kClassSizes[m]) * inv_k3;
    dev = std::max(dev, std::abs(static_cast<double>(ev.counts[cell]) * inv_k3 - mean));
  }
  ev.opi_dev = dev;
  return ev;
}

TriangleDistribution to_distribution(const GridStrategy& s) {
  StrategyEval ev = eval_strategy(s);
  const double inv_k3 = 1.0 / (static_cast<double>(s.k) * s.k * s.k);
  TriangleDistribution t;
  for (int cell = 0; cell < 64; ++cell)
    t.p[cell] = static_cast<double>(ev.counts[cell]) * inv_k3;
  return t;
}

ScanSummary scan_local(const ScanOptions& opts, const ScanCallback& cb) {
  ScanSummary out;
  ChunkStats total_stats;

  if (opts.samples > 0) {
    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<int> pick(0, 3);
    const auto cells = static_cast<std::size_t>(opts.k) * opts.k;
    for (std::uint64_t i = 0; i < opts.samples; ++i) {
      GridStrategy s;
      s.k = opts.k;
      s.A.resize(cells);
      s.B.resize(cells);
      s.C.resize(cells);
      for (auto& v : s.A) v = static_cast<std::int8_t>(pick(rng));
      for (auto& v : s.B) v = static_cast<std::int8_t>(pick(rng));
      for (auto& v : s.C) v = static_cast<std::int8_t>(pick(rng));
      StrategyEval ev = eval_strategy(s);
      record(total_stats, i, s, ev);
      if (cb) cb(i, s, ev);
    }
    out.total = 0;
    out.next_index = 0;
    out.complete = true;
  } else {
    if (opts.k > 2)
      throw std::invalid_argument("exhaustive scan supported for k <= 2; pass samples > 0");
    const std::uint64_t total = exhaustive_total(opts.k);
    const std::uint64_t lo = std::min(opts.start_index, total);
    std::uint64_t hi = total;
    if (opts.max_strategies > 0 && lo + opts.max_strategies < hi)
      hi = lo + opts.max_strategies;
    out.total = total;
    out.next_index = hi;
    out.complete = (hi == total);

    const unsigned threads = cb ? 1u : thread_count(opts.threads);
    if (threads <= 1 || hi - lo < 1024) {
      scan_range(opts.k, lo, hi, total_stats, cb);
    } else {
      const std::uint64_t span = hi - lo;
      const std::uint64_t chunk = (span + threads - 1) / threads;
      std::vector<ChunkStats> stats(threads);
      std::vector<std::thread> workers;
      workers.reserve(threads);
      for (unsigned t = 0; t < threads; ++t) {
        const std::uint64_t clo = lo + std::min<std::uint64_t>(span, t * chunk);
        const std::uint64_t chi = lo + std::min<std::uint64_t>(span, (t + 1) * chunk);
        workers.emplace_back([&, clo, chi, t] {
          scan_range(opts.k, clo, chi, stats[t], ScanCallback{});
        });
      }
      for (auto& w : workers) w.join();
      for (const auto& st : stats) absorb(total_stats, st);
    }
  }

  out.scanned = total_stats.scanned;
  out.min_margin = total_stats.scanned ? total_stats.min_margin : 0.0;
  out.violations = total_stats.violations;
  out.saturating = total_stats.saturating;
  out.opi_saturating = total_stats.opi_saturating;
  if (total_stats.example_index != std::numeric_limits<std::uint64_t>::max())
    out.example_saturating_non_opi = total_stats.example;
  return out;
}

std::string search_status_name(SearchStatus s) {
  switch (s) {
    case SearchStatus::Empty: return "empty";
    case SearchStatus::Found: return "found";
    case SearchStatus::Unsupported: return "unsupported";
    case SearchStatus::BudgetExceeded: return "budget_exceeded";
  }
  return "?";
}

namespace {

// Exact counting argument for strategies that are exactly symmetric and meet
// the inequality with equality somewhere.  Returns true when the argument
// proves the set empty for this k; the trace is appended to `analysis`.
bool opi_saturating_impossible(int k, std::ostringstream& analysis) {
  const long long k2 = static_cast<long long>(k) * k;
  const long long k3 = k2 * k;
  analysis << "exact symmetry forces uniform single-party marginals, so each "
              "marginal count must equal k^2/4 = " << k2 << "/4";
  if (k2 % 4 != 0) {
    analysis << ", which is not an integer: no exactly symmetric strategy exists.";
    return true;
  }
  const long long cm = k2 / 4;
  analysis << " = " << cm << ". ";
  analysis << "A tight populated cell then needs n^2 = (k^2/4)^3, i.e. n = k^3/8 = "
           << k3 << "/8";
  if (k3 % 8 != 0) {
    analysis << ", which is not an integer: no tight populated cell exists.";
    return true;
  }
  const long long n_tight = k3 / 8;
  analysis << " = " << n_tight << ". ";
  // The tight cell lies in one of the three symmetry classes.  Classes of
  // sizes 36 and 24 are ruled out by normalisation alone:
  analysis << "Placing it in the 36-cell class needs 36*(k^3/8) <= k^3 and the "
              "24-cell class needs 24*(k^3/8) <= k^3; both fail. ";
  // So the four equal-output cells each carry k^3/8, and the remaining mass
  // must satisfy 36*n2 + 24*n3 = k^3 - 4*(k^3/8) = k^3/2 in integers.
  const long long rhs = k3 - 4 * n_tight;
  analysis << "Equal-output cells at k^3/8 leave 36*n2 + 24*n3 = " << rhs
           << " for the other classes";
  for (long long n3 = 0; 24 * n3 <= rhs; ++n3)
    if ((rhs - 24 * n3) % 36 == 0) {
      analysis << "; solvable (n2 = " << (rhs - 24 * n3) / 36 << ", n3 = " << n3
               << "), so counting alone does not decide.";
      return false;
    }
  analysis << ", which has no non-negative integer solution: empty.";
  return true;
}

} // namespace

SaturatingSearch search_finner_saturating(int k, bool require_opi,
                                          std::uint64_t max_strategies,
                                          std::uint64_t start_index,
                                          std::size_t found_cap) {
  SaturatingSearch out;
  std::ostringstream analysis;

  bool proven_empty = false;
  if (require_opi) {
    proven_empty = opi_saturating_impossible(k, analysis);
    analysis << "\n";
  }

  const bool can_enumerate = (k <= 2);
  if (!can_enumerate) {
    if (proven_empty) {
      out.status = SearchStatus::Empty;
      analysis << "k = " << k << ": settled by the counting argument without enumeration.";
    } else {
      out.status = SearchStatus::Unsupported;
      analysis << "k = " << k << ": 4^(3k^2) strategies is beyond exhaustive reach and "
                  "no counting argument applies; use sampling scans instead.";
    }
    out.analysis = analysis.str();
    return out;
  }

  // k <= 2: enumerate, corroborating the counting argument when it applied.
  const std::uint64_t total = exhaustive_total(k);
  const std::uint64_t lo = std::min(start_index, total);
  std::uint64_t hi = total;
  if (max_strategies > 0 && lo + max_strategies < hi) hi = lo + max_strategies;

  struct Hit {
    std::uint64_t index;
    GridStrategy s;
  };
  const unsigned threads = thread_count(0);
  std::vector<std::vector<Hit>> hits(threads);
  std::vector<std::thread> workers;
  const std::uint64_t span = hi - lo;
  const std::uint64_t chunk = threads ? (span + threads - 1) / threads : span;
  for (unsigned t = 0; t < threads; ++t) {
    const std::uint64_t clo = lo + std::min<std::uint64_t>(span, t * chunk);
    const std::uint64_t chi = lo + std::min<std::uint64_t>(span, (t + 1) * chunk);
    workers.emplace_back([&, clo, chi, t] {
      for (std::uint64_t idx = clo; idx < chi; ++idx) {
        GridStrategy s = strategy_from_index(k, idx);
        StrategyEval ev = eval_strategy(s);
        if (ev.saturating && (!require_opi || ev.exactly_opi)) {
          if (hits[t].size() < found_cap) hits[t].push_back({idx, s});
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  std::vector<Hit> merged;
  for (auto& h : hits) merged.insert(merged.end(), h.begin(), h.end());
  std::sort(merged.begin(), merged.end(),
            [](const Hit& a, const Hit& b) { return a.index < b.index; });
  if (merged.size() > found_cap) merged.resize(found_cap);

  out.scanned = span;
  out.next_index = hi;
  for (auto& h : merged) out.found.push_back(std::move(h.s));
  analysis << "k = " << k << ": enumerated strategies " << lo << ".." << hi
           << " of " << total << "; " << merged.size() << " match"
           << (merged.size() == found_cap ? " (capped)" : "") << ".";
  if (!out.found.empty())
    out.status = SearchStatus::Found;
  else if (hi != total)
    out.status = SearchStatus::BudgetExceeded;
  else
    out.status = SearchStatus::Empty;
  out.analysis = analysis.str();
  return out;
}

BoxShape box_shape_check(const std::vector<GridStrategy>& set) {
  BoxShape bs;
  if (set.empty()) {
    bs.is_product = true;
    bs.is_cube = true;
    return bs;
  }
  auto key = [](const std::vector<std::int8_t>& t) {
    return std::string(reinterpret_cast<const char*>(t.data()), t.size());
  };
  std::set<std::string> sa, sb, sc, triples;
  for (const auto& s : set) {
    const std::string ka = key(s.A), kb = key(s.B), kc = key(s.C);
    sa.insert(ka);
    sb.insert(kb);
    sc.insert(kc);
    triples.insert(ka + '\x01' + kb + '\x01' + kc);
  }
  bs.size = triples.size();
  bs.sides = {sa.size(), sb.size(), sc.size()};
  bs.is_product = (bs.size == sa.size() * sb.size() * sc.size());
  bs.is_cube = bs.is_product && sa.size() == sb.size() && sb.size() == sc.size();
  return bs;
}

} // namespace opinf
