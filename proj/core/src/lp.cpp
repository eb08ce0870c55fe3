#include "opinf/lp.hpp"

namespace opinf {

namespace {

template <class S>
LpSolutionT<S> solve_impl(const LpProblemT<S>& p, const LpOptions& opts) {
  // Floating-point instances pivot in extended precision internally: the
  // dense tableau accumulates roundoff across pivots, and the extra mantissa
  // bits keep highly degenerate instances well inside the feasibility audit.
  using W = std::conditional_t<std::is_same_v<S, double>, long double, S>;
  DenseSimplex<W> simplex(p.nvars);
  for (int j = 0; j < p.nvars; ++j)
    simplex.set_bounds(j, W(p.lower[static_cast<std::size_t>(j)]),
                       W(p.upper[static_cast<std::size_t>(j)]));
  for (const auto& [j, c] : p.objective) simplex.set_objective(j, W(c));
  auto widen = [](const std::vector<std::pair<int, S>>& row) {
    std::vector<std::pair<int, W>> wrow;
    wrow.reserve(row.size());
    for (const auto& [j, a] : row) wrow.emplace_back(j, W(a));
    return wrow;
  };
  for (std::size_t r = 0; r < p.rows.size(); ++r)
    simplex.add_row(widen(p.rows[r]), W(p.rhs[r]));
  for (std::size_t r = 0; r < p.eq_rows.size(); ++r) {
    auto wrow = widen(p.eq_rows[r]);
    auto neg = wrow;
    for (auto& [j, c] : neg) c = W(-c);
    simplex.add_row(std::move(wrow), W(p.eq_rhs[r]));
    simplex.add_row(std::move(neg), W(-p.eq_rhs[r]));
  }

  const SimplexResult<W> res = simplex.solve(opts.max_iterations);
  LpSolutionT<S> out;
  out.status = res.status;
  out.iterations = res.iterations;
  if (res.status != LpStatus::Optimal) return out;
  out.objective = static_cast<S>(res.objective);
  out.x.reserve(res.x.size());
  for (const W& v : res.x) out.x.push_back(static_cast<S>(v));
  const std::size_t n_ineq = p.rows.size();
  out.slack.reserve(n_ineq);
  for (std::size_t r = 0; r < n_ineq; ++r) out.slack.push_back(static_cast<S>(res.slack[r]));
  for (std::size_t r = 0; r < n_ineq; ++r) {
    bool active;
    if constexpr (std::is_floating_point_v<S>) {
      active = out.slack[r] <= opts.active_tol;
    } else {
      active = out.slack[r] <= 0;
    }
    if (active) out.active.push_back(static_cast<int>(r));
  }
  return out;
}

} // namespace

LpSolution solve_lp(const LpProblem& p, const LpOptions& opts) {
  return solve_impl(p, opts);
}

ExactLpSolution solve_lp(const ExactLpProblem& p, const LpOptions& opts) {
  return solve_impl(p, opts);
}

} // namespace opinf
