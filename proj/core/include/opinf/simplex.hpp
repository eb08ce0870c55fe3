#pragma once

// Dense two-phase bounded-variable simplex, templated on the scalar so the
// same pivoting logic runs in double and in exact rational arithmetic.  All
// selection rules are index-deterministic: identical inputs produce identical
// pivot sequences, vertices and active sets.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <type_traits>
#include <utility>
#include <vector>

namespace opinf {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

template <class S>
struct SimplexResult {
  LpStatus status = LpStatus::IterationLimit;
  S objective{};
  std::vector<S> x;      // structural variables
  std::vector<S> slack;  // per row: rhs - activity (>= 0 when feasible)
  long iterations = 0;
};

template <class S>
class DenseSimplex {
  static constexpr bool kExact = !std::is_floating_point_v<S>;

 public:
  explicit DenseSimplex(int nvars)
      : nv_(nvars), lo_(nvars, S(-1)), up_(nvars, S(1)), has_up_(nvars, true),
        cost_(nvars, S(0)) {}

  void set_bounds(int j, const S& lo, const S& up) {
    lo_[static_cast<std::size_t>(j)] = lo;
    up_[static_cast<std::size_t>(j)] = up;
    has_up_[static_cast<std::size_t>(j)] = true;
  }

  void set_objective(int j, const S& c) { cost_[static_cast<std::size_t>(j)] = c; }

  // a . x <= rhs
  void add_row(std::vector<std::pair<int, S>> coeffs, const S& rhs) {
    rows_.push_back(std::move(coeffs));
    rhs_.push_back(rhs);
  }

  int num_rows() const { return static_cast<int>(rows_.size()); }

  SimplexResult<S> solve(long max_iterations = 0) const;

 private:
  struct Policy {
    double pivot_accept;   // preferred minimum pivot magnitude (double mode)
    long refresh_every;    // recompute reduced costs / basic values cadence
  };

  SimplexResult<S> run(long max_iterations, const Policy& pol) const;
  double max_violation(const SimplexResult<S>& r) const;

  int nv_;
  std::vector<S> lo_, up_;
  std::vector<char> has_up_;
  std::vector<S> cost_;
  std::vector<std::vector<std::pair<int, S>>> rows_;
  std::vector<S> rhs_;
};

namespace simplex_detail {

template <class S>
bool is_zero(const S& v, double tol) {
  if constexpr (std::is_floating_point_v<S>) {
    return std::abs(v) <= tol;
  } else {
    (void)tol;
    return v == 0;
  }
}

template <class S>
double magnitude(const S& v) {
  if constexpr (std::is_floating_point_v<S>) {
    return std::abs(v);
  } else {
    return v == 0 ? 0.0 : 1.0;  // exact mode: only zero/nonzero matters
  }
}

} // namespace simplex_detail

template <class S>
double DenseSimplex<S>::max_violation(const SimplexResult<S>& r) const {
  if constexpr (kExact) {
    (void)r;
    return 0.0;
  } else {
    double worst = 0.0;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      S act = S(0);
      for (const auto& [j, a] : rows_[i]) act += a * r.x[static_cast<std::size_t>(j)];
      worst = std::max(worst, static_cast<double>(act - rhs_[i]));
    }
    for (int j = 0; j < nv_; ++j) {
      const std::size_t k = static_cast<std::size_t>(j);
      worst = std::max(worst, static_cast<double>(lo_[k] - r.x[k]));
      if (has_up_[k]) worst = std::max(worst, static_cast<double>(r.x[k] - up_[k]));
    }
    return worst;
  }
}

template <class S>
SimplexResult<S> DenseSimplex<S>::solve(long max_iterations) const {
  SimplexResult<S> first = run(max_iterations, Policy{1e-7, 128});
  if constexpr (kExact) return first;

  // Numerical audit: the solution must satisfy the instance it claims to
  // solve.  On failure retry once with conservative pivoting; if that also
  // drifts, report the failure instead of a wrong vertex.
  constexpr double kAcceptable = 1e-6;
  if (first.status != LpStatus::Optimal || max_violation(first) <= kAcceptable)
    return first;
  SimplexResult<S> second = run(max_iterations, Policy{1e-5, 16});
  if (second.status == LpStatus::Optimal && max_violation(second) > kAcceptable)
    second.status = LpStatus::IterationLimit;
  return second;
}

template <class S>
SimplexResult<S> DenseSimplex<S>::run(long max_iterations, const Policy& pol) const {
  using simplex_detail::is_zero;
  using simplex_detail::magnitude;
  constexpr double kPivTol = 1e-9;   // below this a coefficient counts as zero
  constexpr double kCostTol = 1e-9;
  constexpr double kFeasTol = 1e-9;
  constexpr double kRatioTie = 1e-9;

  const int m = static_cast<int>(rows_.size());
  if (max_iterations <= 0) max_iterations = 50000 + 400L * m;

  enum State : char { kLower, kUpper, kBasic };

  // Column layout: structurals, slacks, artificials; one extra column keeps
  // the transformed right-hand side for drift-free recomputation.
  std::vector<S> lo = lo_, up = up_;
  std::vector<char> has_up = has_up_;
  auto add_col = [&](const S& l, bool bounded, const S& u) {
    lo.push_back(l);
    up.push_back(u);
    has_up.push_back(bounded ? 1 : 0);
  };
  for (int i = 0; i < m; ++i) add_col(S(0), false, S(0));  // slacks

  // Initial nonbasic values: every structural starts at the bound of
  // smaller magnitude (nonbasic variables must sit at a bound).
  std::vector<S> xval(static_cast<std::size_t>(nv_) + m, S(0));
  for (int j = 0; j < nv_; ++j) {
    const S& l = lo[static_cast<std::size_t>(j)];
    const S& u = up[static_cast<std::size_t>(j)];
    const S mag_l = l < 0 ? S(-l) : l;
    const S mag_u = u < 0 ? S(-u) : u;
    xval[static_cast<std::size_t>(j)] =
        (!has_up[static_cast<std::size_t>(j)] || mag_l <= mag_u) ? l : u;
  }

  // Slack basis; negate infeasible rows and give them artificials.
  std::vector<S> beta(static_cast<std::size_t>(m), S(0));
  for (int i = 0; i < m; ++i) {
    S act = S(0);
    for (const auto& [j, a] : rows_[static_cast<std::size_t>(i)])
      act += a * xval[static_cast<std::size_t>(j)];
    beta[static_cast<std::size_t>(i)] = rhs_[static_cast<std::size_t>(i)] - act;
  }
  std::vector<char> negated(static_cast<std::size_t>(m), 0);
  std::vector<int> art_of_row(static_cast<std::size_t>(m), -1);
  int n_art = 0;
  for (int i = 0; i < m; ++i) {
    bool bad;
    if constexpr (kExact) {
      bad = beta[static_cast<std::size_t>(i)] < 0;
    } else {
      bad = beta[static_cast<std::size_t>(i)] < -kFeasTol;
    }
    if (bad) {
      negated[static_cast<std::size_t>(i)] = 1;
      art_of_row[static_cast<std::size_t>(i)] = n_art++;
    }
  }
  const int slack0 = nv_;
  const int art0 = nv_ + m;
  const int ncols = nv_ + m + n_art;
  for (int a = 0; a < n_art; ++a) add_col(S(0), false, S(0));
  xval.resize(static_cast<std::size_t>(ncols), S(0));

  // Dense tableau plus the transformed rhs column.
  const std::size_t stride = static_cast<std::size_t>(ncols) + 1;
  std::vector<S> T(static_cast<std::size_t>(m) * stride, S(0));
  auto row_ptr = [&](int i) { return T.data() + static_cast<std::size_t>(i) * stride; };
  std::vector<int> basis(static_cast<std::size_t>(m), -1);
  std::vector<State> state(static_cast<std::size_t>(ncols), kLower);
  std::vector<char> locked(static_cast<std::size_t>(ncols), 0);

  for (int j = 0; j < nv_; ++j) {
    // nonbasic at the value chosen above; record which bound that is
    state[static_cast<std::size_t>(j)] =
        (xval[static_cast<std::size_t>(j)] == lo[static_cast<std::size_t>(j)]) ? kLower : kUpper;
  }
  for (int i = 0; i < m; ++i) {
    S* r = row_ptr(i);
    const S sgn = negated[static_cast<std::size_t>(i)] ? S(-1) : S(1);
    for (const auto& [j, a] : rows_[static_cast<std::size_t>(i)])
      r[j] += sgn * a;
    r[slack0 + i] = sgn;
    r[ncols] = sgn * rhs_[static_cast<std::size_t>(i)];
    if (negated[static_cast<std::size_t>(i)]) {
      const int z = art0 + art_of_row[static_cast<std::size_t>(i)];
      r[z] = S(1);
      basis[static_cast<std::size_t>(i)] = z;
      beta[static_cast<std::size_t>(i)] = -beta[static_cast<std::size_t>(i)];
      state[static_cast<std::size_t>(z)] = kBasic;
      state[static_cast<std::size_t>(slack0 + i)] = kLower;
    } else {
      basis[static_cast<std::size_t>(i)] = slack0 + i;
      state[static_cast<std::size_t>(slack0 + i)] = kBasic;
    }
  }

  std::vector<S> cost(static_cast<std::size_t>(ncols), S(0));
  std::vector<S> d(static_cast<std::size_t>(ncols), S(0));

  auto recompute_reduced = [&]() {
    for (int j = 0; j < ncols; ++j) d[static_cast<std::size_t>(j)] = cost[static_cast<std::size_t>(j)];
    for (int i = 0; i < m; ++i) {
      const S cb = cost[static_cast<std::size_t>(basis[static_cast<std::size_t>(i)])];
      if (is_zero(cb, 0.0)) continue;
      const S* r = row_ptr(i);
      for (int j = 0; j < ncols; ++j) d[static_cast<std::size_t>(j)] -= cb * r[j];
    }
  };

  auto recompute_beta = [&]() {
    for (int i = 0; i < m; ++i) {
      const S* r = row_ptr(i);
      S v = r[ncols];
      for (int j = 0; j < ncols; ++j) {
        if (state[static_cast<std::size_t>(j)] == kBasic) continue;
        if (is_zero(xval[static_cast<std::size_t>(j)], 0.0)) continue;
        v -= r[j] * xval[static_cast<std::size_t>(j)];
      }
      beta[static_cast<std::size_t>(i)] = v;
    }
  };

  SimplexResult<S> result;
  long total_iters = 0;

  for (int phase = (n_art > 0 ? 1 : 2); phase <= 2; ++phase) {
    for (int j = 0; j < ncols; ++j) cost[static_cast<std::size_t>(j)] = S(0);
    if (phase == 1) {
      for (int a = 0; a < n_art; ++a) cost[static_cast<std::size_t>(art0 + a)] = S(1);
    } else {
      for (int j = 0; j < nv_; ++j) cost[static_cast<std::size_t>(j)] = cost_[static_cast<std::size_t>(j)];
    }
    recompute_reduced();

    bool bland = false;
    long stall = 0;
    long since_refresh = 0;

    while (true) {
      if (++total_iters > max_iterations) {
        result.status = LpStatus::IterationLimit;
        result.iterations = total_iters;
        return result;
      }
      if (!kExact && ++since_refresh >= pol.refresh_every) {
        recompute_reduced();
        recompute_beta();
        since_refresh = 0;
      }

      // --- entering variable ---
      int e = -1;
      int dir = 0;
      double best_score = kCostTol;
      for (int j = 0; j < ncols; ++j) {
        if (state[static_cast<std::size_t>(j)] == kBasic || locked[static_cast<std::size_t>(j)]) continue;
        const S& dj = d[static_cast<std::size_t>(j)];
        int cand_dir = 0;
        if (state[static_cast<std::size_t>(j)] == kLower) {
          if constexpr (kExact) {
            if (dj < 0) cand_dir = 1;
          } else {
            if (dj < -kCostTol) cand_dir = 1;
          }
        } else {
          if constexpr (kExact) {
            if (dj > 0) cand_dir = -1;
          } else {
            if (dj > kCostTol) cand_dir = -1;
          }
        }
        if (!cand_dir) continue;
        if (bland) { e = j; dir = cand_dir; break; }
        const double score = magnitude(dj);
        if (score > best_score) { best_score = score; e = j; dir = cand_dir; }
      }

      if (e < 0) {
        if constexpr (!kExact) {
          // confirm optimality against freshly computed reduced costs
          recompute_reduced();
          bool found = false;
          for (int j = 0; j < ncols && !found; ++j) {
            if (state[static_cast<std::size_t>(j)] == kBasic || locked[static_cast<std::size_t>(j)]) continue;
            if (state[static_cast<std::size_t>(j)] == kLower ? d[static_cast<std::size_t>(j)] < -kCostTol
                                                             : d[static_cast<std::size_t>(j)] > kCostTol)
              found = true;
          }
          if (found) continue;
        }
        break;  // phase optimal
      }

      // --- ratio test ---
      // Double mode runs in two tiers: rows with a well-sized pivot
      // (>= pol.pivot_accept) limit the step; rows with a tiny pivot are
      // treated as non-binding (their basic value moves by at most
      // pivot_accept * step, inside the audit tolerance) unless the step
      // would otherwise be unbounded.  Within a ratio tie the largest pivot
      // wins: pivoting on small elements is what amplifies roundoff.
      bool unbounded_step = true;
      S tbest{};
      int leave = -1;
      if (has_up[static_cast<std::size_t>(e)]) {
        tbest = up[static_cast<std::size_t>(e)] - lo[static_cast<std::size_t>(e)];
        unbounded_step = false;
      }
      double best_piv = 0.0;

      auto ratio_scan = [&](double accept_lo, double accept_hi) {
        for (int i = 0; i < m; ++i) {
          const S& a = row_ptr(i)[e];
          const double amag = magnitude(a);
          if (amag < accept_lo || amag >= accept_hi) continue;
          const S delta = (dir > 0) ? a : S(-a);
          const int bi = basis[static_cast<std::size_t>(i)];
          S ti{};
          if (delta > 0) {
            ti = (beta[static_cast<std::size_t>(i)] - lo[static_cast<std::size_t>(bi)]) / delta;
          } else if (has_up[static_cast<std::size_t>(bi)]) {
            ti = (up[static_cast<std::size_t>(bi)] - beta[static_cast<std::size_t>(i)]) / (S(0) - delta);
          } else {
            continue;
          }
          if (ti < 0) ti = S(0);  // clip negative ratios from roundoff
          bool take = false;
          if (unbounded_step) {
            take = true;
          } else if constexpr (kExact) {
            if (ti < tbest) take = true;
            else if (ti == tbest && leave < 0) take = true;
          } else {
            if (static_cast<double>(ti) < static_cast<double>(tbest) - kRatioTie) {
              take = true;
            } else if (static_cast<double>(ti) <= static_cast<double>(tbest) + kRatioTie) {
              if (leave < 0) take = true;  // a row beats a bound flip at ties
              else if (bland)
                take = basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)];
              else if (amag > best_piv)
                take = true;
            }
          }
          if (take) {
            tbest = ti;
            leave = i;
            best_piv = amag;
            unbounded_step = false;
          }
        }
      };

      if constexpr (kExact) {
        ratio_scan(kPivTol, std::numeric_limits<double>::infinity());
      } else {
        ratio_scan(pol.pivot_accept, std::numeric_limits<double>::infinity());
        if (leave < 0 && unbounded_step)
          ratio_scan(kPivTol, pol.pivot_accept);
      }

      if (unbounded_step) {
        result.status = (phase == 1) ? LpStatus::Infeasible : LpStatus::Unbounded;
        result.iterations = total_iters;
        if (phase == 1) break;  // should not happen: phase-1 objective bounded
        return result;
      }

      // --- apply step ---
      const S step = (dir > 0) ? tbest : S(-tbest);
      if (leave < 0) {
        // bound flip: entering runs to its opposite bound
        xval[static_cast<std::size_t>(e)] =
            (dir > 0) ? up[static_cast<std::size_t>(e)] : lo[static_cast<std::size_t>(e)];
        state[static_cast<std::size_t>(e)] = (dir > 0) ? kUpper : kLower;
        for (int i = 0; i < m; ++i) {
          const S& a = row_ptr(i)[e];
          if (!is_zero(a, 0.0)) beta[static_cast<std::size_t>(i)] -= a * step;
        }
        if (is_zero(step, 0.0)) ++stall; else stall = 0;
      } else {
        const int lv = basis[static_cast<std::size_t>(leave)];
        const S newval = xval[static_cast<std::size_t>(e)] + step;
        for (int i = 0; i < m; ++i) {
          if (i == leave) continue;
          const S& a = row_ptr(i)[e];
          if (!is_zero(a, 0.0)) beta[static_cast<std::size_t>(i)] -= a * step;
        }
        // leaving variable lands on the bound the step drove it to
        const S apiv_signed = row_ptr(leave)[e];
        const bool to_lower = (dir > 0) ? (apiv_signed > 0) : (apiv_signed < 0);
        xval[static_cast<std::size_t>(lv)] =
            to_lower ? lo[static_cast<std::size_t>(lv)] : up[static_cast<std::size_t>(lv)];
        state[static_cast<std::size_t>(lv)] = to_lower ? kLower : kUpper;

        // pivot: normalize row, eliminate column e elsewhere, update d
        S* pr = row_ptr(leave);
        const S piv = pr[e];
        for (int j = 0; j <= ncols; ++j) pr[j] = pr[j] / piv;
        pr[e] = S(1);
        for (int i = 0; i < m; ++i) {
          if (i == leave) continue;
          S* r = row_ptr(i);
          const S f = r[e];
          if (is_zero(f, 0.0)) continue;
          for (int j = 0; j <= ncols; ++j) r[j] -= f * pr[j];
          r[e] = S(0);
        }
        const S de = d[static_cast<std::size_t>(e)];
        if (!is_zero(de, 0.0)) {
          for (int j = 0; j < ncols; ++j) d[static_cast<std::size_t>(j)] -= de * pr[j];
          d[static_cast<std::size_t>(e)] = S(0);
        }
        basis[static_cast<std::size_t>(leave)] = e;
        state[static_cast<std::size_t>(e)] = kBasic;
        beta[static_cast<std::size_t>(leave)] = newval;
        if (is_zero(step, 0.0)) ++stall; else stall = 0;
      }
      if (stall > 500) { bland = true; }
      else if (stall == 0) { bland = false; }
    }

    if (phase == 1) {
      S infeas = S(0);
      for (int i = 0; i < m; ++i)
        if (basis[static_cast<std::size_t>(i)] >= art0)
          infeas += beta[static_cast<std::size_t>(i)];
      bool bad;
      if constexpr (kExact) bad = infeas > 0;
      else bad = infeas > kFeasTol * (1 + m);
      if (bad) {
        result.status = LpStatus::Infeasible;
        result.iterations = total_iters;
        return result;
      }
      // Drive basic artificials out with degenerate pivots where possible
      // (on the best-conditioned column available); afterwards clamp every
      // artificial to [0,0] so none can re-enter.
      for (int i = 0; i < m; ++i) {
        if (basis[static_cast<std::size_t>(i)] < art0) continue;
        S* pr = row_ptr(i);
        int enter = -1;
        double enter_mag = kPivTol;
        for (int j = 0; j < art0; ++j) {
          if (state[static_cast<std::size_t>(j)] == kBasic) continue;
          const double amag = magnitude(pr[j]);
          if (amag > enter_mag) { enter = j; enter_mag = amag; }
        }
        if (enter < 0) continue;  // redundant row; artificial stays pinned at 0
        const int lv = basis[static_cast<std::size_t>(i)];
        const S piv = pr[enter];
        for (int j = 0; j <= ncols; ++j) pr[j] = pr[j] / piv;
        pr[enter] = S(1);
        for (int r2 = 0; r2 < m; ++r2) {
          if (r2 == i) continue;
          S* r = row_ptr(r2);
          const S f = r[enter];
          if (is_zero(f, 0.0)) continue;
          for (int j = 0; j <= ncols; ++j) r[j] -= f * pr[j];
          r[enter] = S(0);
        }
        basis[static_cast<std::size_t>(i)] = enter;
        state[static_cast<std::size_t>(enter)] = kBasic;
        state[static_cast<std::size_t>(lv)] = kLower;
        xval[static_cast<std::size_t>(lv)] = S(0);
        beta[static_cast<std::size_t>(i)] = xval[static_cast<std::size_t>(enter)];
      }
      for (int a = 0; a < n_art; ++a) {
        const int z = art0 + a;
        has_up[static_cast<std::size_t>(z)] = 1;
        up[static_cast<std::size_t>(z)] = S(0);
        locked[static_cast<std::size_t>(z)] = 1;
      }
      recompute_beta();
    }
  }

  // Extract the solution.
  result.status = LpStatus::Optimal;
  result.iterations = total_iters;
  if constexpr (!kExact) recompute_beta();
  std::vector<S> full(static_cast<std::size_t>(ncols), S(0));
  for (int j = 0; j < ncols; ++j)
    if (state[static_cast<std::size_t>(j)] != kBasic) full[static_cast<std::size_t>(j)] = xval[static_cast<std::size_t>(j)];
  for (int i = 0; i < m; ++i)
    full[static_cast<std::size_t>(basis[static_cast<std::size_t>(i)])] = beta[static_cast<std::size_t>(i)];

  result.x.assign(full.begin(), full.begin() + nv_);
  if constexpr (!kExact) {
    for (S& v : result.x)
      if (std::abs(v) < 1e-12) v = S(0);
  }
  result.slack.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    // slack value from the original inequality (independent of negation)
    S act = S(0);
    for (const auto& [j, a] : rows_[static_cast<std::size_t>(i)])
      act += a * result.x[static_cast<std::size_t>(j)];
    result.slack[static_cast<std::size_t>(i)] = rhs_[static_cast<std::size_t>(i)] - act;
  }
  result.objective = S(0);
  for (int j = 0; j < nv_; ++j)
    result.objective += cost_[static_cast<std::size_t>(j)] * result.x[static_cast<std::size_t>(j)];
  return result;
}

} // namespace opinf
