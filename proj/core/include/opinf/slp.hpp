#pragma once

#include "opinf/constraints.hpp"
#include "opinf/lp.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace opinf {

enum class Direction { Max, Min };
std::string direction_name(Direction d);

enum class BoundStatus { Converged, NotConverged, Infeasible, TimeLimit };
std::string bound_status_name(BoundStatus s);

struct SlpState {
  double ebar = 0;
  std::vector<double> xbar;  // indexed like Model::vars
  int iteration = 0;
};

struct SlpOptions {
  double eps_tol = 1e-10;      // |eps| convergence threshold
  double dx_tol = 1e-8;        // max estimate movement threshold
  // Degenerate optimal faces let the LP vertex wander without moving the
  // value: accept convergence when eps is tiny and the bound has been
  // stationary for several consecutive iterations.
  double stall_eps_tol = 1e-9;
  double stall_bound_tol = 1e-10;
  int stall_iterations = 5;
  int max_iterations = 200;
  double residual_tol = 1e-7;  // largest constraint violation allowed for Converged
  double time_limit_s = 0;     // 0: unlimited
  std::optional<SlpState> resume;
  std::function<void(const SlpState&)> on_iteration;  // checkpoint hook
};

struct BoundResult {
  int n = 0;
  Mode mode = Mode::Single;
  Direction direction = Direction::Max;
  BoundStatus status = BoundStatus::NotConverged;
  double bound = 0;
  int iterations = 0;
  double final_eps = 0;
  double residual = 0;        // quadratic-constraint violation at the point
  double row_violation = 0;   // positivity violation at the point
  double wall_time_s = 0;
  std::vector<double> x;      // final point, indexed like Model::vars
  SlpState state;             // resume data (meaningful for TimeLimit)
};

// Affine expression in the free correlators and the step variable eps.
struct AffineExpr {
  double c0 = 0;
  double ce = 0;
  std::vector<std::pair<int, double>> lin;  // (var index, coefficient)
};

// The substitution that linearizes the quadratic chain around (ebar, xbar):
// the objective correlator is replaced by ebar + eps/(2 ebar) and every
// quadratic target by the affine expression induced through its product rule.
struct Linearization {
  std::vector<int> free_vars;      // var indices that stay LP columns
  std::vector<int> col_of;         // var index -> LP column (-1 if substituted)
  std::vector<char> substituted;   // var index -> has an expression below
  std::vector<AffineExpr> expr;    // var index -> expression (if substituted)
  double ebar = 0, h = 0;
  int eps_col = 0;                 // == free_vars.size()
};

Linearization build_linearization(const Model& model, double ebar,
                                  const std::vector<double>& xbar);

// LP of the linearized system: rewritten positivity rows plus |expr_t| <= 1
// bands, free correlators in [-1,1], eps in [eps_lo, eps_hi]; no objective.
LpProblem linearized_lp(const Model& model, const Linearization& lin,
                        double eps_lo, double eps_hi);

// Bound on the two-point correlator by successive linearization; falls back
// to a single LP when the model has no quadratic constraints.
BoundResult slp_bound(const Model& model, Direction dir, const SlpOptions& opts = {});

// Constraint violations of a candidate point (indexed like Model::vars).
double quad_residual(const Model& model, const std::vector<double>& x);
double row_violation(const Model& model, const std::vector<double>& x);

// Exact optimum of the linear relaxation (exact solution of the full model
// whenever it has no quadratic constraints, i.e. n <= 5).
Rational exact_linear_bound(const Model& model, Direction dir);

class BoundEngine {
 public:
  const BoundResult& bound(int n, Mode mode, Direction dir, const SlpOptions& opts = {});
  std::vector<BoundResult> curve(int n_min, int n_max, Mode mode, Direction dir);

 private:
  std::map<std::tuple<int, int, int>, BoundResult> memo_;
};

// Least-squares fit of v(n) = a + b exp(-c n) over the series entries with
// n >= n_min; `a` estimates the large-n limit.
struct FitResult {
  double a = 0, b = 0, c = 0;
  double sse = 0;
  int n_min = 0;
  int points = 0;
};

FitResult fit_extrapolate(const std::vector<std::pair<int, double>>& series, int n_min = 4);

} // namespace opinf
