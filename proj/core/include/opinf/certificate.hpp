#pragma once

#include "opinf/constraints.hpp"
#include "opinf/rational.hpp"
#include "opinf/slp.hpp"

#include <string>
#include <vector>

namespace opinf {

// Quadratic surd a + b sqrt(d) with d a positive non-square integer.
struct Surd {
  Rational a{0};
  Rational b{0};
  BigInt d{0};

  double value() const;
  std::string str() const;
};

struct RootValue {
  bool is_rational = true;
  Rational rational{0};
  Surd surd;

  double value() const;
  std::string str() const;
};

enum class CertStatus { Ok, NoCertificate, NoRealRoot, AmbiguousRoot };

std::string cert_status_name(CertStatus s);

// An exact algebraic certificate: nonnegative integer multipliers q on the
// active positivity rows such that the combination sum_j q_j (1 + sum_W R E_W)
// cancels every correlator except the two-point one (and its square), leaving
//   p0 + p1 E2 + p2 E2^2 >= 0
// which pins the optimum at a root of the right-hand polynomial.
struct Certificate {
  CertStatus status = CertStatus::NoCertificate;
  int n = 0;
  double numeric_bound = 0;
  std::vector<int> active_rows;              // model row = outcome orbit index
  std::vector<std::string> active_orbits;    // outcome orbit representative
  std::vector<long long> active_sizes;       // orbit sizes
  std::vector<BigInt> q;                     // integer multiplier per active row
  BigInt p0{0}, p1{0}, p2{0};                // primitive integer polynomial
  Rational c0{0}, c1{0}, c2{0};              // presented scale: primitive / 4^(n-2)
  int cancelled_correlators = 0;
  RootValue root;
  std::string message;
};

// Active rows of the model at a candidate point: row value 1 + sum c x < tol.
std::vector<int> active_outcomes(const Model& model, const std::vector<double>& x,
                                 double tol = 1e-7);

// Restrict candidate rows to those vanishing on the whole optimal face of the
// linearized system at (bound, x): for each candidate the row value is
// maximized over the face; rows whose maximum stays below face_tol survive.
std::vector<int> face_zeros(const Model& model, double bound,
                            const std::vector<double>& x,
                            const std::vector<int>& candidates,
                            double face_tol = 1e-9);

// Full certificate pipeline for the single n-gon (exact LP for n <= 5,
// successive linearization plus face reduction for n == 6; larger polygons
// do not admit this certificate form).
Certificate certify(int n);

// Human-auditable rendering.
std::string certificate_text(const Certificate& c);

} // namespace opinf
