#include "opinf/opi.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace opinf {

bool OpiDistribution::normalized() const {
  return 4 * p111 + 36 * p112 + 24 * p123 == 1;
}

bool OpiDistribution::nonnegative() const {
  return p111 >= 0 && p112 >= 0 && p123 >= 0;
}

OpiCorrelators probs_to_correlators(const OpiDistribution& p) {
  if (!p.normalized())
    throw std::invalid_argument("probabilities are not normalized: 4 p111 + 36 p112 + 24 p123 != 1");
  OpiCorrelators e;
  e.e2 = 4 * p.p111 + 4 * p.p112 - 8 * p.p123;
  e.e3o = 4 * p.p111 - 12 * p.p112 + 8 * p.p123;
  return e;
}

OpiDistribution correlators_to_probs(const OpiCorrelators& e) {
  OpiDistribution p;
  p.p111 = (1 + 9 * e.e2 + 6 * e.e3o) / 64;
  p.p112 = (1 + e.e2 - 2 * e.e3o) / 64;
  p.p123 = (1 - 3 * e.e2 + 2 * e.e3o) / 64;
  return p;
}

Rational finner_margin(const OpiDistribution& p) {
  return Rational(1, 8) - p.p111;
}

Rational finner_margin(const OpiCorrelators& e) {
  return finner_margin(correlators_to_probs(e));
}

RegionGeometry region_geometry() {
  RegionGeometry g;
  // Only p111 = 1/4: (E2, E3odd) = (1, 1).  Only p112 = 1/36: (1/9, -1/3).
  // Only p123 = 1/24: (-1/3, 1/3).
  g.triangle = {{{Rational(1), Rational(1)},
                 {Rational(1, 9), Rational(-1, 3)},
                 {Rational(-1, 3), Rational(1, 3)}}};
  // 1 + 9 E2 + 6 E3odd = 8 meets p112 = 0 at (1/3, 2/3) and p123 = 0 at
  // (5/9, 1/3); between those points the line lies inside the triangle.
  g.finner_segment = {{{Rational(1, 3), Rational(2, 3)},
                       {Rational(5, 9), Rational(1, 3)}}};
  g.noisy_point = {Rational(0), Rational(0)};
  g.special_point = {Rational(1, 3), Rational(2, 3)};
  return g;
}

std::array<double, 4> TriangleDistribution::marginal_a() const {
  std::array<double, 4> m{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) m[a] += p[a * 16 + b * 4 + c];
  return m;
}

std::array<double, 4> TriangleDistribution::marginal_b() const {
  std::array<double, 4> m{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) m[b] += p[a * 16 + b * 4 + c];
  return m;
}

std::array<double, 4> TriangleDistribution::marginal_c() const {
  std::array<double, 4> m{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) m[c] += p[a * 16 + b * 4 + c];
  return m;
}

int outcome_class(int a, int b, int c) {
  if (a == b && b == c) return 0;
  if (a != b && b != c && a != c) return 2;
  return 1;
}

TriangleDistribution to_triangle(const OpiDistribution& d) {
  TriangleDistribution t;
  const double v[3] = {to_double(d.p111), to_double(d.p112), to_double(d.p123)};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        t.p[a * 16 + b * 4 + c] = v[outcome_class(a, b, c)];
  return t;
}

double finner_margin(const TriangleDistribution& t) {
  const auto ma = t.marginal_a();
  const auto mb = t.marginal_b();
  const auto mc = t.marginal_c();
  double margin = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) {
        const double m =
            std::sqrt(ma[a] * mb[b] * mc[c]) - t.p[a * 16 + b * 4 + c];
        if (m < margin) margin = m;
      }
  return margin;
}

SymmetrizedPoint symmetrize(const TriangleDistribution& t) {
  double sum[3] = {0, 0, 0};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        sum[outcome_class(a, b, c)] += t.p[a * 16 + b * 4 + c];
  SymmetrizedPoint s;
  s.p111 = sum[0] / 4;
  s.p112 = sum[1] / 36;
  s.p123 = sum[2] / 24;
  s.e2 = 4 * s.p111 + 4 * s.p112 - 8 * s.p123;
  s.e3o = 4 * s.p111 - 12 * s.p112 + 8 * s.p123;
  return s;
}

double opi_deviation(const TriangleDistribution& t) {
  double sum[3] = {0, 0, 0};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        sum[outcome_class(a, b, c)] += t.p[a * 16 + b * 4 + c];
  const double mean[3] = {sum[0] / 4, sum[1] / 36, sum[2] / 24};
  double dev = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) {
        const double d =
            std::abs(t.p[a * 16 + b * 4 + c] - mean[outcome_class(a, b, c)]);
        if (d > dev) dev = d;
      }
  return dev;
}

} // namespace opinf
