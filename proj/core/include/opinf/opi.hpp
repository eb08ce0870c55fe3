#pragma once

#include "opinf/rational.hpp"

#include <array>
#include <optional>
#include <vector>

namespace opinf {

// Fully symmetric four-output triangle distributions are determined by three
// probabilities: p111 (all outputs equal), p112 (exactly two equal) and p123
// (all distinct).  Alternatively by the correlator coordinates (E2, E3odd).
// The exact linear relation is
//   1     =  4 p111 + 36 p112 + 24 p123
//   E2    =  4 p111 +  4 p112 -  8 p123
//   E3odd =  4 p111 - 12 p112 +  8 p123
// with inverse p111 = (1 + 9 E2 + 6 E3odd)/64, p112 = (1 + E2 - 2 E3odd)/64,
// p123 = (1 - 3 E2 + 2 E3odd)/64.

struct OpiDistribution {
  Rational p111{0};
  Rational p112{0};
  Rational p123{0};

  bool normalized() const;       // 4 p111 + 36 p112 + 24 p123 == 1
  bool nonnegative() const;
  bool valid() const { return normalized() && nonnegative(); }
};

struct OpiCorrelators {
  Rational e2{0};
  Rational e3o{0};
};

OpiCorrelators probs_to_correlators(const OpiDistribution& p);
OpiDistribution correlators_to_probs(const OpiCorrelators& e);

// Margin of the symmetric instance of the inequality p_abc <= sqrt(pa pb pc):
// with uniform marginals the right-hand side is 1/8 at every all-equal
// outcome, so the margin is 1/8 - p111.
Rational finner_margin(const OpiDistribution& p);
Rational finner_margin(const OpiCorrelators& e);

// --- region geometry (correlator plane) ------------------------------------

struct RegionGeometry {
  // Vertices of the positivity triangle: images of the three extreme
  // symmetric distributions (only p111, only p112, only p123).
  std::array<std::array<Rational, 2>, 3> triangle;          // {e2, e3o} each
  // Saturation line 1 + 9 E2 + 6 E3odd = 8, clipped to the triangle.
  std::array<std::array<Rational, 2>, 2> finner_segment;
  std::array<Rational, 2> noisy_point;                      // (0, 0)
  std::array<Rational, 2> special_point;                    // (1/3, 2/3)
};

RegionGeometry region_geometry();

// --- general distributions --------------------------------------------------

// A raw three-party four-output distribution p(abc), indexed a*16 + b*4 + c.
struct TriangleDistribution {
  std::array<double, 64> p{};

  std::array<double, 4> marginal_a() const;
  std::array<double, 4> marginal_b() const;
  std::array<double, 4> marginal_c() const;
};

// Embed a symmetric distribution as a concrete 64-cell table.
TriangleDistribution to_triangle(const OpiDistribution& p);

// min over outcomes of sqrt(pa pb pc) - p_abc; negative iff the inequality
// is violated somewhere.
double finner_margin(const TriangleDistribution& t);

// Orbit classification of the 64 outcomes: 0 = all equal (4 cells),
// 1 = exactly two equal (36 cells), 2 = all distinct (24 cells).
int outcome_class(int a, int b, int c);

// Projection of a raw distribution onto the symmetric subspace: averages of
// the cells over the three orbit classes, plus the correlator coordinates of
// the projected point.
struct SymmetrizedPoint {
  double p111 = 0, p112 = 0, p123 = 0;
  double e2 = 0, e3o = 0;
};
SymmetrizedPoint symmetrize(const TriangleDistribution& t);

// Largest absolute deviation of any cell from its orbit-class average.
double opi_deviation(const TriangleDistribution& t);

} // namespace opinf
