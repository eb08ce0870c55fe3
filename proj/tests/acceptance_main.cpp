// Acceptance gate: one line per criterion, PASS / FAIL / SKIP, nonzero exit
// on any FAIL.  The long-running n=9 bound criteria are gated behind the
// `slow` argument (or OPINF_RUN_SLOW=1); everything else always runs.
//
// Usage: opinf_acceptance [slow]

#include "expected_data.hpp"

#include "opinf/certificate.hpp"
#include "opinf/constraints.hpp"
#include "opinf/local.hpp"
#include "opinf/opi.hpp"
#include "opinf/polygon.hpp"
#include "opinf/rational.hpp"
#include "opinf/slp.hpp"
#include "opinf/words.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace opinf;

namespace {

int g_failures = 0;

void report(const std::string& criterion, bool ok, const std::string& detail) {
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << criterion;
  if (!detail.empty()) std::cout << " -- " << detail;
  std::cout << std::endl;
  if (!ok) ++g_failures;
}

void skip(const std::string& criterion, const std::string& why) {
  std::cout << "[SKIP] " << criterion << " -- " << why << std::endl;
}

double now_s() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(9);
  s << v;
  return s.str();
}

bool slow_enabled(int argc, char** argv) {
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "slow") == 0) return true;
  const char* env = std::getenv("OPINF_RUN_SLOW");
  return env && std::string(env) == "1";
}

// ---- criterion 1: enumeration counts, < 60 s through n=9 --------------------

void criterion_counts() {
  const double t0 = now_s();
  bool ok = true;
  std::ostringstream detail;
  for (int n = 3; n <= 9; ++n) {
    const WordOrbits wo = enumerate_word_orbits(n);
    const OutcomeOrbits oo = enumerate_outcome_orbits(n);
    const auto want = expected::kCounts.at(n);
    if (static_cast<int>(wo.reps.size()) != want.first ||
        static_cast<int>(oo.reps.size()) != want.second) {
      ok = false;
      detail << "n=" << n << " got (" << wo.reps.size() << "," << oo.reps.size() << ") want ("
             << want.first << "," << want.second << "); ";
    }
    if (n >= 4) {
      const PolygonConstraints c = constraints_for(n);
      const auto cw = expected::kConstraintCounts.at(n);
      if (static_cast<int>(c.linear_count()) != cw.first ||
          static_cast<int>(c.quadratic_count()) != cw.second) {
        ok = false;
        detail << "n=" << n << " constraints got (" << c.linear_count() << ","
               << c.quadratic_count() << ") want (" << cw.first << "," << cw.second << "); ";
      }
    }
  }
  const double dt = now_s() - t0;
  if (dt >= 60.0) {
    ok = false;
    detail << "runtime " << fmt(dt) << "s exceeds 60s";
  }
  report("criterion 1: orbit and constraint counts through n=9", ok,
         ok ? ("all counts match, " + fmt(dt) + "s") : detail.str());
}

// ---- criterion 2: display lists verbatim ------------------------------------

void criterion_lists() {
  bool ok = true;
  std::ostringstream detail;
  for (const auto& [n, joined] : expected::kWords) {
    const auto want = expected::split_words(joined);
    std::set<std::string> got;
    for (const Word& w : enumerate_word_orbits(n).reps) got.insert(display(w));
    if (got != want) {
      ok = false;
      detail << "word list n=" << n << " differs; ";
    }
  }
  for (const auto& [n, want_list] : expected::kLinear) {
    const PolygonConstraints c = constraints_for(n);
    std::set<std::string> got;
    for (const Word& z : c.zeros) got.insert(display(z) + "=0");
    for (const auto& [member, rep] : c.equalities)
      got.insert(display(member) + "=" + display(rep));
    if (got != std::set<std::string>(want_list.begin(), want_list.end())) {
      ok = false;
      detail << "linear list n=" << n << " differs; ";
    }
  }
  for (const auto& [n, want_list] : expected::kQuad) {
    const PolygonConstraints c = constraints_for(n);
    std::set<std::string> got;
    for (const auto& t : quad_triples(n, c))
      got.insert(display(t[0]) + "=" + display(t[1]) + "*" + display(t[2]));
    if (got != std::set<std::string>(want_list.begin(), want_list.end())) {
      ok = false;
      detail << "quadratic list n=" << n << " differs; ";
    }
  }
  report("criterion 2: published lists for n=4..7 verbatim", ok, detail.str());
}

// ---- criterion 3: change-of-basis matrices -----------------------------------

bool equal_up_to_permutation(const std::vector<std::vector<long long>>& a,
                             const std::vector<std::vector<long long>>& b) {
  if (a.size() != b.size()) return false;
  // row permutation only: match rows as multisets of rows, then check the
  // column order can be aligned by sorting both row sets identically
  std::vector<std::vector<long long>> sa = a, sb = b;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  if (sa == sb) return true;
  // column permutation: compare column multisets after transpose
  const auto transpose = [](const std::vector<std::vector<long long>>& m) {
    std::vector<std::vector<long long>> t(m[0].size(), std::vector<long long>(m.size()));
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
    return t;
  };
  std::vector<std::vector<long long>> ta = transpose(a), tb = transpose(b);
  std::sort(ta.begin(), ta.end());
  std::sort(tb.begin(), tb.end());
  return ta == tb;
}

void criterion_matrices() {
  const CorrelatorMatrix m3 = build_matrix(3);
  const bool ok3 = (m3.entries == expected::kMatrix3);
  const CorrelatorMatrix m4 = build_matrix(4);
  const bool exact4 = (m4.entries == expected::kMatrix4);
  const bool perm4 = exact4 || equal_up_to_permutation(m4.entries, expected::kMatrix4);
  report("criterion 3: basis matrices for n=3 and n=4", ok3 && perm4,
         std::string("n=3 ") + (ok3 ? "exact" : "MISMATCH") + ", n=4 " +
             (exact4 ? "exact" : (perm4 ? "up to permutation" : "MISMATCH")));
}

// ---- criteria 4, 5, 7 (bound parts), 9: the bound ladder ---------------------

struct BoundCheck {
  int n;
  Mode mode;
  Direction dir;
  double target;
  double tol;     // |bound - target| <= tol; if lo/hi set, use the window
  double lo = 0, hi = 0;
  bool window = false;
  bool slow = false;
};

void criterion_bounds(BoundEngine& engine, bool slow) {
  const double sqrt2m1 = std::sqrt(2.0) - 1.0;
  std::vector<BoundCheck> checks = {
      {3, Mode::Single, Direction::Max, 1.0, 1e-9},
      {4, Mode::Single, Direction::Max, 0.5, 1e-6},
      {5, Mode::Single, Direction::Max, 5.0 / 11.0, 1e-9},
      {6, Mode::Single, Direction::Max, sqrt2m1, 1e-4},
      {7, Mode::Single, Direction::Max, 0.3931, 1e-3},
      {7, Mode::Cumulative, Direction::Max, 0.3920, 1e-3},
      {8, Mode::Single, Direction::Max, 0.3820, 1.5e-3},
      {8, Mode::Cumulative, Direction::Max, 0.0, 0.0, 0.3777, 0.3815, true},
  };
  if (slow) {
    checks.push_back({9, Mode::Single, Direction::Max, 0.3766, 2e-3});
    checks.push_back({9, Mode::Cumulative, Direction::Max, 0.3751, 2e-3});
  }

  bool ok = true;
  std::ostringstream detail;
  double t_le7 = 0, t_8 = 0;
  for (const BoundCheck& c : checks) {
    const double t0 = now_s();
    const BoundResult& r = engine.bound(c.n, c.mode, c.dir);
    const double dt = now_s() - t0;
    if (c.n <= 7) t_le7 += dt;
    if (c.n == 8) t_8 += dt;
    const bool conv = (r.status == BoundStatus::Converged);
    const bool hit = c.window ? (r.bound >= c.lo && r.bound <= c.hi)
                              : (std::abs(r.bound - c.target) <= c.tol);
    if (!conv || !hit) {
      ok = false;
      detail << "n=" << c.n << " " << mode_name(c.mode) << " "
             << bound_status_name(r.status) << " bound=" << fmt(r.bound) << "; ";
    }
  }
  // exact rational values where the model is linear
  if (exact_linear_bound(build_model(3, Mode::Single), Direction::Max) != 1) {
    ok = false;
    detail << "n=3 exact != 1; ";
  }
  if (exact_linear_bound(build_model(5, Mode::Single), Direction::Max) != make_rational(5, 11)) {
    ok = false;
    detail << "n=5 exact != 5/11; ";
  }
  // certificate value for the hexagon (exact side of criterion 4)
  const Certificate cert = certify(6);
  if (cert.status != CertStatus::Ok || cert.root.is_rational || cert.root.surd.d != 2) {
    ok = false;
    detail << "hexagon certificate missing; ";
  }
  if (t_le7 >= 300.0) {
    ok = false;
    detail << "n<=7 bounds took " << fmt(t_le7) << "s (budget 300s); ";
  }
  if (t_8 >= 3600.0) {
    ok = false;
    detail << "n=8 bounds took " << fmt(t_8) << "s (budget 3600s); ";
  }
  std::ostringstream timing;
  timing << "n<=7 in " << fmt(t_le7) << "s, n=8 in " << fmt(t_8) << "s";
  report("criterion 4: bound ladder vs the reference table", ok,
         ok ? timing.str() : detail.str());
  if (!slow)
    skip("criterion 4 (n=9 rungs): single 0.3766, cumulative 0.3751",
         "long-running; pass `slow` or set OPINF_RUN_SLOW=1");
}

void criterion_lower_bound(BoundEngine& engine, bool slow) {
  if (!slow) {
    skip("criterion 5: cumulative n=9 minimum -0.2691 +- 2e-3",
         "long-running; pass `slow` or set OPINF_RUN_SLOW=1");
    return;
  }
  const BoundResult& r = engine.bound(9, Mode::Cumulative, Direction::Min);
  const bool ok =
      r.status == BoundStatus::Converged && std::abs(r.bound - (-0.2691)) <= 2e-3;
  report("criterion 5: cumulative n=9 minimum -0.2691 +- 2e-3", ok,
         bound_status_name(r.status) + " bound=" + fmt(r.bound));
}

// ---- criterion 6: hexagon certificate contents --------------------------------

void criterion_certificate() {
  const Certificate c = certify(6);
  bool ok = (c.status == CertStatus::Ok);
  std::ostringstream detail;
  if (!ok) detail << "status " << cert_status_name(c.status);
  if (ok && !(c.c0 == make_rational(1, 256) && c.c1 == make_rational(-1, 128) &&
              c.c2 == make_rational(-1, 256))) {
    ok = false;
    detail << "coefficients (" << to_string(c.c0) << "," << to_string(c.c1) << ","
           << to_string(c.c2) << ") != (1/256,-1/128,-1/256); ";
  }
  if (ok && (c.root.is_rational || c.root.surd.a != -1 || c.root.surd.b != 1 ||
             c.root.surd.d != 2)) {
    ok = false;
    detail << "root " << c.root.str() << " != sqrt(2)-1; ";
  }
  if (ok && c.active_rows.size() != 22) {
    ok = false;
    detail << "active set " << c.active_rows.size() << " != 22; ";
  }
  if (ok && c.cancelled_correlators != 20) {
    ok = false;
    detail << "cancelled " << c.cancelled_correlators << " != 20; ";
  }
  report("criterion 6: hexagon certificate (1/256, -1/128, -1/256), root sqrt(2)-1", ok,
         ok ? "active 22, cancelled 20" : detail.str());
}

// ---- criterion 7: property suite ----------------------------------------------

void criterion_properties(BoundEngine& engine, bool slow) {
  bool ok = true;
  std::ostringstream detail;

  // count identity for all polygons
  for (int n = 3; n <= 9; ++n) {
    const WordOrbits wo = enumerate_word_orbits(n);
    const OutcomeOrbits oo = enumerate_outcome_orbits(n);
    if (oo.reps.size() != wo.reps.size() + 1) {
      ok = false;
      detail << "count identity fails at n=" << n << "; ";
    }
  }

  // noisy-point feasibility: zero correlators satisfy every constraint set
  for (int n = 3; n <= 9; ++n) {
    for (Mode mode : {Mode::Single, Mode::Cumulative}) {
      const Model m = build_model(n, mode);
      const std::vector<double> x(m.vars.size(), 0.0);
      if (row_violation(m, x) > 0 || quad_residual(m, x) > 0) {
        ok = false;
        detail << "noisy point infeasible for n=" << n << " " << mode_name(mode) << "; ";
      }
    }
  }

  // bound ordering: every max >= 1/3, min <= -2/9, cumulative monotone
  const int n_hi = slow ? 9 : 8;
  double prev = 2.0;
  for (int n = 3; n <= n_hi; ++n) {
    const BoundResult& single = engine.bound(n, Mode::Single, Direction::Max);
    const BoundResult& cum = engine.bound(n, Mode::Cumulative, Direction::Max);
    if (single.bound < 1.0 / 3.0 - 1e-9 || cum.bound < 1.0 / 3.0 - 1e-9) {
      ok = false;
      detail << "max bound below 1/3 at n=" << n << "; ";
    }
    if (cum.bound > prev + 1e-9) {
      ok = false;
      detail << "cumulative max not monotone at n=" << n << "; ";
    }
    prev = cum.bound;
  }
  for (int n = 3; n <= 5; ++n) {
    const Rational lo = exact_linear_bound(build_model(n, Mode::Cumulative), Direction::Min);
    if (lo > make_rational(-2, 9)) {
      ok = false;
      detail << "min bound above -2/9 at n=" << n << "; ";
    }
  }

  // exact probability/correlator round trips
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> num(-30, 30);
  for (int trial = 0; trial < 100; ++trial) {
    const Rational e2 = make_rational(num(rng), 91);
    const Rational e3o = make_rational(num(rng), 83);
    const OpiDistribution p = correlators_to_probs({e2, e3o});
    const OpiCorrelators back = probs_to_correlators(p);
    if (!p.normalized() || back.e2 != e2 || back.e3o != e3o) {
      ok = false;
      detail << "round trip failed; ";
      break;
    }
  }

  report("criterion 7: property suite", ok, detail.str());
}

// ---- criterion 8: local lab ----------------------------------------------------

void criterion_local() {
  bool ok = true;
  std::ostringstream detail;

  const double t0 = now_s();
  ScanOptions opts;
  opts.k = 2;
  const ScanSummary scan = scan_local(opts);
  const double dt = now_s() - t0;
  if (scan.total != 16777216ull || !scan.complete) {
    ok = false;
    detail << "scan incomplete: " << scan.scanned << "/" << scan.total << "; ";
  }
  if (scan.min_margin < -1e-12) {
    ok = false;
    detail << "margin " << fmt(scan.min_margin) << " < -1e-12; ";
  }
  if (scan.violations != 0) {
    ok = false;
    detail << scan.violations << " violations; ";
  }
  if (dt >= 600.0) {
    ok = false;
    detail << "scan took " << fmt(dt) << "s (budget 600s); ";
  }
  if (scan.opi_saturating != 0) {
    ok = false;
    detail << "symmetric saturating strategies reported; ";
  }
  // the saturating non-symmetric witness must be exhibited
  if (!scan.example_saturating_non_opi) {
    ok = false;
    detail << "no saturating witness; ";
  } else {
    const StrategyEval ev = eval_strategy(*scan.example_saturating_non_opi);
    if (!ev.saturating || ev.exactly_opi) {
      ok = false;
      detail << "witness is not a saturating non-symmetric strategy; ";
    }
  }

  const SaturatingSearch s2 = search_finner_saturating(2, true);
  if (s2.status != SearchStatus::Empty) {
    ok = false;
    detail << "k=2 symmetric search: " << search_status_name(s2.status) << "; ";
  }
  const SaturatingSearch s4 = search_finner_saturating(4, true);
  if (s4.status != SearchStatus::Empty) {
    ok = false;
    detail << "k=4 symmetric search: " << search_status_name(s4.status) << "; ";
  }

  std::ostringstream timing;
  timing << "16777216 strategies in " << fmt(dt) << "s, min margin "
         << fmt(scan.min_margin);
  report("criterion 8: exhaustive k=2 local lab", ok, ok ? timing.str() : detail.str());
}

// ---- criterion 9: extrapolation -------------------------------------------------

void criterion_fit(BoundEngine& engine, bool slow) {
  std::vector<std::pair<int, double>> series;
  for (int n = 3; n <= 8; ++n)
    series.emplace_back(n, engine.bound(n, Mode::Cumulative, Direction::Max).bound);
  std::string source9;
  if (slow) {
    series.emplace_back(9, engine.bound(9, Mode::Cumulative, Direction::Max).bound);
    source9 = "computed n=9";
  } else {
    series.emplace_back(9, 0.375051);  // published successive-linearization value
    source9 = "published n=9";
  }
  const FitResult fit = fit_extrapolate(series, 4);
  const bool ok = fit.a >= 0.34 && fit.a <= 0.38;
  report("criterion 9: exponential extrapolation limit in [0.34, 0.38]", ok,
         "a=" + fmt(fit.a) + " b=" + fmt(fit.b) + " c=" + fmt(fit.c) + " (" + source9 + ")");
}

} // namespace

int main(int argc, char** argv) {
  const bool slow = slow_enabled(argc, argv);
  std::cout << "acceptance run (" << (slow ? "with" : "without")
            << " the long-running n=9 rungs)\n";

  BoundEngine engine;
  criterion_counts();
  criterion_lists();
  criterion_matrices();
  criterion_bounds(engine, slow);
  criterion_lower_bound(engine, slow);
  criterion_certificate();
  criterion_properties(engine, slow);
  criterion_local();
  criterion_fit(engine, slow);

  if (g_failures == 0) {
    std::cout << "acceptance: all executed criteria pass\n";
    return 0;
  }
  std::cout << "acceptance: " << g_failures << " criteria FAILED\n";
  return 1;
}
