#include "opinf/slp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace opinf {

std::string direction_name(Direction d) { return d == Direction::Max ? "max" : "min"; }

std::string bound_status_name(BoundStatus s) {
  switch (s) {
    case BoundStatus::Converged: return "converged";
    case BoundStatus::NotConverged: return "not_converged";
    case BoundStatus::Infeasible: return "infeasible";
    case BoundStatus::TimeLimit: return "time_limit";
  }
  return "?";
}

namespace {

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

LpProblem pure_lp(const Model& model) {
  LpProblem lp(static_cast<int>(model.vars.size()));
  for (const ModelRow& row : model.rows) {
    std::vector<std::pair<int, double>> coeffs;
    coeffs.reserve(row.coeffs.size());
    for (const auto& [v, c] : row.coeffs)
      coeffs.emplace_back(v, -static_cast<double>(c));
    lp.add_leq(std::move(coeffs), 1.0);
  }
  return lp;
}

} // namespace

double quad_residual(const Model& model, const std::vector<double>& x) {
  double worst = 0;
  for (const auto& [t, u, v] : model.quads)
    worst = std::max(worst, std::abs(x[static_cast<std::size_t>(t)] -
                                     x[static_cast<std::size_t>(u)] *
                                         x[static_cast<std::size_t>(v)]));
  return worst;
}

double row_violation(const Model& model, const std::vector<double>& x) {
  double worst = 0;
  for (const ModelRow& row : model.rows) {
    double val = 1.0;
    for (const auto& [v, c] : row.coeffs)
      val += static_cast<double>(c) * x[static_cast<std::size_t>(v)];
    worst = std::max(worst, -val);
  }
  for (double v : x) worst = std::max(worst, std::abs(v) - 1.0);
  return worst;
}

Rational exact_linear_bound(const Model& model, Direction dir) {
  ExactLpProblem lp(static_cast<int>(model.vars.size()));
  for (const ModelRow& row : model.rows) {
    std::vector<std::pair<int, Rational>> coeffs;
    coeffs.reserve(row.coeffs.size());
    for (const auto& [v, c] : row.coeffs) coeffs.emplace_back(v, Rational(-c));
    lp.add_leq(std::move(coeffs), Rational(1));
  }
  lp.objective = {{model.obj, dir == Direction::Max ? Rational(-1) : Rational(1)}};
  const ExactLpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal)
    throw std::runtime_error("exact linear relaxation failed to solve");
  return sol.x[static_cast<std::size_t>(model.obj)];
}

Linearization build_linearization(const Model& model, double ebar,
                                  const std::vector<double>& xbar) {
  const int nvars = static_cast<int>(model.vars.size());
  Linearization lin;
  lin.ebar = ebar;
  lin.h = 1.0 / (2.0 * ebar);
  lin.substituted.assign(static_cast<std::size_t>(nvars), 0);
  lin.expr.assign(static_cast<std::size_t>(nvars), AffineExpr{});
  lin.col_of.assign(static_cast<std::size_t>(nvars), -1);

  std::vector<char> is_target(static_cast<std::size_t>(nvars), 0);
  for (const auto& q : model.quads) is_target[static_cast<std::size_t>(q[0])] = 1;
  if (is_target[static_cast<std::size_t>(model.obj)])
    throw std::logic_error("objective correlator cannot be a quadratic target");

  for (int v = 0; v < nvars; ++v) {
    if (v == model.obj || is_target[static_cast<std::size_t>(v)]) continue;
    lin.col_of[static_cast<std::size_t>(v)] = static_cast<int>(lin.free_vars.size());
    lin.free_vars.push_back(v);
  }
  lin.eps_col = static_cast<int>(lin.free_vars.size());

  lin.substituted[static_cast<std::size_t>(model.obj)] = 1;
  lin.expr[static_cast<std::size_t>(model.obj)] = AffineExpr{ebar, lin.h, {}};

  auto as_expr = [&](int k) -> AffineExpr {
    if (lin.substituted[static_cast<std::size_t>(k)])
      return lin.expr[static_cast<std::size_t>(k)];
    return AffineExpr{0.0, 0.0, {{k, 1.0}}};
  };
  auto add_lin = [](std::vector<std::pair<int, double>>& acc, int k, double c) {
    for (auto& [kk, cc] : acc)
      if (kk == k) {
        cc += c;
        return;
      }
    acc.emplace_back(k, c);
  };

  std::vector<std::array<int, 3>> pending(model.quads.begin(), model.quads.end());
  while (!pending.empty()) {
    std::vector<std::array<int, 3>> rest;
    for (const auto& [t, u, v] : pending) {
      const bool u_wait = is_target[static_cast<std::size_t>(u)] &&
                          !lin.substituted[static_cast<std::size_t>(u)];
      const bool v_wait = is_target[static_cast<std::size_t>(v)] &&
                          !lin.substituted[static_cast<std::size_t>(v)];
      if (u_wait || v_wait) {
        rest.push_back({t, u, v});
        continue;
      }
      AffineExpr e;
      if (u == model.obj && v == model.obj) {
        e.c0 = ebar * ebar;
        e.ce = 1.0;
      } else if (u == model.obj || v == model.obj) {
        const int o = (u == model.obj) ? v : u;
        const AffineExpr oe = as_expr(o);
        e.c0 = ebar * oe.c0;
        e.ce = ebar * oe.ce + lin.h * xbar[static_cast<std::size_t>(o)];
        for (const auto& [k, c] : oe.lin) add_lin(e.lin, k, ebar * c);
      } else {
        const AffineExpr ue = as_expr(u);
        const AffineExpr ve = as_expr(v);
        const double ub = xbar[static_cast<std::size_t>(u)];
        const double vb = xbar[static_cast<std::size_t>(v)];
        e.c0 = ub * ve.c0 + vb * ue.c0 - ub * vb;
        e.ce = ub * ve.ce + vb * ue.ce;
        for (const auto& [k, c] : ve.lin) add_lin(e.lin, k, ub * c);
        for (const auto& [k, c] : ue.lin) add_lin(e.lin, k, vb * c);
      }
      lin.expr[static_cast<std::size_t>(t)] = std::move(e);
      lin.substituted[static_cast<std::size_t>(t)] = 1;
    }
    if (rest.size() == pending.size())
      throw std::logic_error("cyclic quadratic substitution chain");
    pending = std::move(rest);
  }
  return lin;
}

LpProblem linearized_lp(const Model& model, const Linearization& lin,
                        double eps_lo, double eps_hi) {
  const int ncols = static_cast<int>(lin.free_vars.size()) + 1;
  LpProblem lp(ncols);
  lp.lower[static_cast<std::size_t>(lin.eps_col)] = eps_lo;
  lp.upper[static_cast<std::size_t>(lin.eps_col)] = eps_hi;

  std::vector<double> dense(static_cast<std::size_t>(ncols), 0.0);
  for (const ModelRow& row : model.rows) {
    std::fill(dense.begin(), dense.end(), 0.0);
    double constant = 1.0;
    for (const auto& [k, craw] : row.coeffs) {
      const double c = static_cast<double>(craw);
      if (lin.substituted[static_cast<std::size_t>(k)]) {
        const AffineExpr& e = lin.expr[static_cast<std::size_t>(k)];
        constant += c * e.c0;
        dense[static_cast<std::size_t>(lin.eps_col)] -= c * e.ce;
        for (const auto& [kk, cc] : e.lin)
          dense[static_cast<std::size_t>(lin.col_of[static_cast<std::size_t>(kk)])] -= c * cc;
      } else {
        dense[static_cast<std::size_t>(lin.col_of[static_cast<std::size_t>(k)])] -= c;
      }
    }
    std::vector<std::pair<int, double>> coeffs;
    for (int j = 0; j < ncols; ++j)
      if (dense[static_cast<std::size_t>(j)] != 0.0)
        coeffs.emplace_back(j, dense[static_cast<std::size_t>(j)]);
    lp.add_leq(std::move(coeffs), constant);
  }
  // |expr_t| <= 1 for every substituted quadratic target
  for (const auto& q : model.quads) {
    const int t = q[0];
    const AffineExpr& e = lin.expr[static_cast<std::size_t>(t)];
    std::vector<std::pair<int, double>> pos, neg;
    if (e.ce != 0.0) {
      pos.emplace_back(lin.eps_col, e.ce);
      neg.emplace_back(lin.eps_col, -e.ce);
    }
    for (const auto& [kk, cc] : e.lin) {
      const int col = lin.col_of[static_cast<std::size_t>(kk)];
      pos.emplace_back(col, cc);
      neg.emplace_back(col, -cc);
    }
    lp.add_leq(std::move(pos), 1.0 - e.c0);
    lp.add_leq(std::move(neg), 1.0 + e.c0);
  }
  return lp;
}

BoundResult slp_bound(const Model& model, Direction dir, const SlpOptions& opts) {
  const double t_start = now_seconds();
  BoundResult res;
  res.n = model.n;
  res.mode = model.mode;
  res.direction = dir;
  const int nvars = static_cast<int>(model.vars.size());

  // Linear models (no quadratic constraints): one LP solves them outright.
  if (model.quads.empty()) {
    LpProblem lp = pure_lp(model);
    lp.objective = {{model.obj, dir == Direction::Max ? -1.0 : 1.0}};
    const LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal) {
      res.status = BoundStatus::Infeasible;
      res.wall_time_s = now_seconds() - t_start;
      return res;
    }
    res.status = BoundStatus::Converged;
    res.bound = sol.x[static_cast<std::size_t>(model.obj)];
    res.x = sol.x;
    res.row_violation = row_violation(model, res.x);
    res.wall_time_s = now_seconds() - t_start;
    res.state.ebar = res.bound;
    res.state.xbar = res.x;
    return res;
  }

  // Warm start: value and point of the linear relaxation, unless resuming.
  double ebar;
  std::vector<double> xbar;
  int it0 = 0;
  if (opts.resume) {
    ebar = opts.resume->ebar;
    xbar = opts.resume->xbar;
    it0 = opts.resume->iteration;
    if (static_cast<int>(xbar.size()) != nvars)
      throw std::invalid_argument("resume state has wrong variable count");
  } else {
    LpProblem lp = pure_lp(model);
    lp.objective = {{model.obj, dir == Direction::Max ? -1.0 : 1.0}};
    const LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal) {
      res.status = BoundStatus::Infeasible;
      res.wall_time_s = now_seconds() - t_start;
      return res;
    }
    ebar = sol.x[static_cast<std::size_t>(model.obj)];
    xbar = sol.x;
  }

  double bound = ebar;
  double prev_bound = 0;
  bool have_prev = false;
  int stall_count = 0;

  for (int it = it0; it < opts.max_iterations; ++it) {
    if (opts.time_limit_s > 0 && now_seconds() - t_start > opts.time_limit_s) {
      res.status = BoundStatus::TimeLimit;
      res.bound = bound;
      res.iterations = it;
      res.x = xbar;
      res.state = SlpState{ebar, xbar, it};
      res.wall_time_s = now_seconds() - t_start;
      return res;
    }
    if (std::abs(ebar) < 1e-9)  // keep the substitution well-defined
      ebar = (dir == Direction::Max) ? 1e-3 : -1e-3;

    const Linearization lin = build_linearization(model, ebar, xbar);
    LpProblem lp = linearized_lp(model, lin, -4.0, 4.0);
    lp.objective = {{lin.eps_col, -1.0}};  // maximize eps in both directions
    const LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal) {
      // A failed first linearization means the model itself is bad; a later
      // failure is a numerical dead end, so keep the best iterate instead of
      // mislabelling the model infeasible.
      res.status = (it == 0) ? BoundStatus::Infeasible : BoundStatus::NotConverged;
      res.bound = bound;
      res.iterations = it + 1;
      res.x = xbar;
      res.residual = quad_residual(model, xbar);
      res.row_violation = row_violation(model, xbar);
      res.state = SlpState{ebar, xbar, it};
      res.wall_time_s = now_seconds() - t_start;
      return res;
    }
    const double eps = sol.x[static_cast<std::size_t>(lin.eps_col)];
    bound = ebar + lin.h * eps;

    std::vector<double> xnew = xbar;
    for (std::size_t f = 0; f < lin.free_vars.size(); ++f)
      xnew[static_cast<std::size_t>(lin.free_vars[f])] = sol.x[f];
    xnew[static_cast<std::size_t>(model.obj)] = bound;
    for (const auto& q : model.quads) {
      const AffineExpr& e = lin.expr[static_cast<std::size_t>(q[0])];
      double val = e.c0 + e.ce * eps;
      for (const auto& [kk, cc] : e.lin)
        val += cc * sol.x[static_cast<std::size_t>(lin.col_of[static_cast<std::size_t>(kk)])];
      xnew[static_cast<std::size_t>(q[0])] = val;
    }

    double delta = 0;
    for (int v = 0; v < nvars; ++v)
      delta = std::max(delta, std::abs(xnew[static_cast<std::size_t>(v)] -
                                       xbar[static_cast<std::size_t>(v)]));

    if (have_prev && std::abs(eps) < opts.stall_eps_tol &&
        std::abs(bound - prev_bound) < opts.stall_bound_tol)
      ++stall_count;
    else
      stall_count = 0;

    if ((std::abs(eps) < opts.eps_tol && delta < opts.dx_tol) ||
        stall_count >= opts.stall_iterations) {
      res.bound = bound;
      res.iterations = it + 1;
      res.final_eps = eps;
      res.x = xnew;
      res.residual = quad_residual(model, xnew);
      res.row_violation = row_violation(model, xnew);
      res.status = (res.residual <= opts.residual_tol &&
                    res.row_violation <= opts.residual_tol)
                       ? BoundStatus::Converged
                       : BoundStatus::NotConverged;
      res.state = SlpState{bound, xnew, it + 1};
      res.wall_time_s = now_seconds() - t_start;
      return res;
    }

    // Damp the value estimate when it starts oscillating, and always average
    // the point estimate: degenerate optima make raw vertices jump around.
    if (have_prev && std::abs(bound - prev_bound) > std::abs(prev_bound - ebar))
      ebar = 0.5 * (ebar + bound);
    else
      ebar = bound;
    prev_bound = bound;
    have_prev = true;
    for (int v = 0; v < nvars; ++v)
      xbar[static_cast<std::size_t>(v)] =
          0.5 * (xbar[static_cast<std::size_t>(v)] + xnew[static_cast<std::size_t>(v)]);
    res.final_eps = eps;

    if (opts.on_iteration) opts.on_iteration(SlpState{ebar, xbar, it + 1});
  }

  res.status = BoundStatus::NotConverged;
  res.bound = bound;
  res.iterations = opts.max_iterations;
  res.x = xbar;
  res.residual = quad_residual(model, xbar);
  res.row_violation = row_violation(model, xbar);
  res.state = SlpState{ebar, xbar, opts.max_iterations};
  res.wall_time_s = now_seconds() - t_start;
  return res;
}

const BoundResult& BoundEngine::bound(int n, Mode mode, Direction dir,
                                      const SlpOptions& opts) {
  const auto key = std::make_tuple(n, static_cast<int>(mode), static_cast<int>(dir));
  const auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  const Model model = build_model(n, mode);
  return memo_.emplace(key, slp_bound(model, dir, opts)).first->second;
}

std::vector<BoundResult> BoundEngine::curve(int n_min, int n_max, Mode mode,
                                            Direction dir) {
  std::vector<BoundResult> out;
  for (int n = n_min; n <= n_max; ++n) out.push_back(bound(n, mode, dir));
  return out;
}

FitResult fit_extrapolate(const std::vector<std::pair<int, double>>& series,
                          int n_min) {
  std::vector<std::pair<int, double>> pts;
  for (const auto& [n, v] : series)
    if (n >= n_min) pts.emplace_back(n, v);
  FitResult fit;
  fit.n_min = n_min;
  fit.points = static_cast<int>(pts.size());
  if (pts.size() < 3) return fit;

  // For fixed decay rate c the model is linear in (a, b); scan c on a grid
  // and refine the best cell by golden-section search.
  auto sse_for = [&](double c, double* a_out, double* b_out) {
    double s11 = static_cast<double>(pts.size());
    double s1e = 0, see = 0, s1v = 0, sev = 0;
    for (const auto& [n, v] : pts) {
      const double e = std::exp(-c * n);
      s1e += e;
      see += e * e;
      s1v += v;
      sev += e * v;
    }
    const double det = s11 * see - s1e * s1e;
    if (std::abs(det) < 1e-300) return 1e300;
    const double a = (s1v * see - sev * s1e) / det;
    const double b = (s11 * sev - s1e * s1v) / det;
    double sse = 0;
    for (const auto& [n, v] : pts) {
      const double r = v - (a + b * std::exp(-c * n));
      sse += r * r;
    }
    if (a_out) *a_out = a;
    if (b_out) *b_out = b;
    return sse;
  };

  const double c_lo = 0.02, c_hi = 4.0;
  const int grid = 2000;
  double best_c = c_lo, best_sse = 1e300;
  for (int i = 0; i <= grid; ++i) {
    const double c = c_lo + (c_hi - c_lo) * i / grid;
    const double s = sse_for(c, nullptr, nullptr);
    if (s < best_sse) {
      best_sse = s;
      best_c = c;
    }
  }
  const double step = (c_hi - c_lo) / grid;
  double lo = std::max(c_lo, best_c - step), hi = std::min(c_hi, best_c + step);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = sse_for(x1, nullptr, nullptr), f2 = sse_for(x2, nullptr, nullptr);
  for (int i = 0; i < 80; ++i) {
    if (f1 < f2) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = sse_for(x1, nullptr, nullptr);
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = sse_for(x2, nullptr, nullptr);
    }
  }
  fit.c = (f1 < f2) ? x1 : x2;
  fit.sse = sse_for(fit.c, &fit.a, &fit.b);
  return fit;
}

} // namespace opinf
