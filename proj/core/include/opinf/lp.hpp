#pragma once

#include "opinf/rational.hpp"
#include "opinf/simplex.hpp"

#include <utility>
#include <vector>

namespace opinf {

// Sparse LP over box-bounded variables:
//   minimize   c . x
//   subject to A x <= b,  Aeq x = beq,  lower <= x <= upper.
// Equality rows are handled as opposed inequality pairs.
template <class S>
struct LpProblemT {
  int nvars = 0;
  std::vector<S> lower, upper;  // sized nvars; default box [-1, 1]
  std::vector<std::vector<std::pair<int, S>>> rows;
  std::vector<S> rhs;
  std::vector<std::vector<std::pair<int, S>>> eq_rows;
  std::vector<S> eq_rhs;
  std::vector<std::pair<int, S>> objective;  // sparse, minimized

  explicit LpProblemT(int n = 0) { resize(n); }
  void resize(int n) {
    nvars = n;
    lower.assign(static_cast<std::size_t>(n), S(-1));
    upper.assign(static_cast<std::size_t>(n), S(1));
  }
  void add_leq(std::vector<std::pair<int, S>> coeffs, S b) {
    rows.push_back(std::move(coeffs));
    rhs.push_back(std::move(b));
  }
  void add_eq(std::vector<std::pair<int, S>> coeffs, S b) {
    eq_rows.push_back(std::move(coeffs));
    eq_rhs.push_back(std::move(b));
  }
};

template <class S>
struct LpSolutionT {
  LpStatus status = LpStatus::IterationLimit;
  S objective{};
  std::vector<S> x;
  std::vector<S> slack;     // inequality rows only
  std::vector<int> active;  // inequality rows with (near-)zero slack
  long iterations = 0;
};

struct LpOptions {
  long max_iterations = 0;   // 0: automatic
  double active_tol = 1e-9;  // slack threshold for the active set (float mode)
};

using LpProblem = LpProblemT<double>;
using LpSolution = LpSolutionT<double>;
using ExactLpProblem = LpProblemT<Rational>;
using ExactLpSolution = LpSolutionT<Rational>;

LpSolution solve_lp(const LpProblem& p, const LpOptions& opts = {});
ExactLpSolution solve_lp(const ExactLpProblem& p, const LpOptions& opts = {});

} // namespace opinf
