#include "opinf/certificate.hpp"

#include "opinf/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace opinf {

namespace {

double sqrt_bigint(const BigInt& v) {
  return std::sqrt(v.convert_to<double>());
}

// Split v = s^2 * d with d squarefree (trial division; the discriminants in
// scope are tiny integers).
void split_square(const BigInt& v, BigInt& s, BigInt& d) {
  s = 1;
  d = v;
  for (BigInt p = 2; p * p <= d && p < 1000000; ++p) {
    while (d % (p * p) == 0) {
      d /= p * p;
      s *= p;
    }
  }
  const BigInt r = boost::multiprecision::sqrt(d);
  if (r * r == d) {
    s *= r;
    d = 1;
  }
}

} // namespace

double Surd::value() const { return to_double(a) + to_double(b) * sqrt_bigint(d); }

std::string Surd::str() const {
  std::ostringstream out;
  if (b == 1) {
    out << "sqrt(" << d.str() << ")";
  } else if (b == -1) {
    out << "-sqrt(" << d.str() << ")";
  } else {
    out << "(" << to_string(b) << ")*sqrt(" << d.str() << ")";
  }
  if (a > 0) {
    out << "+" << to_string(a);
  } else if (a < 0) {
    out << "-" << to_string(Rational(-a));
  }
  return out.str();
}

double RootValue::value() const {
  return is_rational ? to_double(rational) : surd.value();
}

std::string RootValue::str() const {
  return is_rational ? to_string(rational) : surd.str();
}

std::string cert_status_name(CertStatus s) {
  switch (s) {
    case CertStatus::Ok: return "ok";
    case CertStatus::NoCertificate: return "no_certificate";
    case CertStatus::NoRealRoot: return "no_real_root";
    case CertStatus::AmbiguousRoot: return "ambiguous_root";
  }
  return "?";
}

std::vector<int> active_outcomes(const Model& model, const std::vector<double>& x,
                                 double tol) {
  std::vector<int> act;
  for (std::size_t r = 0; r < model.rows.size(); ++r) {
    double val = 1.0;
    for (const auto& [v, c] : model.rows[r].coeffs)
      val += static_cast<double>(c) * x[static_cast<std::size_t>(v)];
    if (val < tol) act.push_back(static_cast<int>(r));
  }
  return act;
}

std::vector<int> face_zeros(const Model& model, double bound,
                            const std::vector<double>& x,
                            const std::vector<int>& candidates, double face_tol) {
  // The optimal face of the linearized system at the converged point: all
  // linearized constraints with eps pinned to zero (which pins the objective
  // correlator at the bound through the substitution).
  const Linearization lin = build_linearization(model, bound, x);
  const LpProblem base = linearized_lp(model, lin, 0.0, 0.0);

  std::vector<int> keep;
  for (int cand : candidates) {
    LpProblem lp = base;
    // Row `cand` reads  A z <= b  with value b - A z; maximizing the value
    // means minimizing A z.
    lp.objective.clear();
    for (const auto& [j, a] : lp.rows[static_cast<std::size_t>(cand)])
      lp.objective.emplace_back(j, a);
    const LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal)
      throw std::runtime_error("face exploration LP failed");
    double amin = 0;
    for (const auto& [j, a] : lp.rows[static_cast<std::size_t>(cand)])
      amin += a * sol.x[static_cast<std::size_t>(j)];
    const double max_value = lp.rhs[static_cast<std::size_t>(cand)] - amin;
    if (max_value < face_tol) keep.push_back(cand);
  }
  return keep;
}

namespace {

// Kernel of { q : sum_r q_r * coeff(active[r], other) = 0 for all others },
// i.e. the nullspace of the (others x active) integer matrix, over exact
// rationals.  Returns a reduced-echelon basis (deterministic).
std::vector<std::vector<Rational>> cancellation_kernel(
    const Model& model, const std::vector<int>& active,
    const std::vector<int>& others, int* touched_correlators) {
  const std::size_t ncols = active.size();
  std::vector<std::vector<Rational>> mat;
  int touched = 0;
  for (int o : others) {
    std::vector<Rational> row(ncols, Rational(0));
    bool nonzero = false;
    for (std::size_t c = 0; c < ncols; ++c) {
      const long long v = model.coeff(active[c], o);
      if (v != 0) {
        row[c] = v;
        nonzero = true;
      }
    }
    if (nonzero) {
      mat.push_back(std::move(row));
      ++touched;
    }
  }
  if (touched_correlators) *touched_correlators = touched;

  // Gauss-Jordan elimination.
  std::vector<std::size_t> piv_cols;
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < mat.size(); ++c) {
    std::size_t piv = r;
    while (piv < mat.size() && mat[piv][c] == 0) ++piv;
    if (piv == mat.size()) continue;
    std::swap(mat[r], mat[piv]);
    const Rational inv = Rational(1) / mat[r][c];
    for (auto& v : mat[r]) v *= inv;
    for (std::size_t rr = 0; rr < mat.size(); ++rr) {
      if (rr == r || mat[rr][c] == 0) continue;
      const Rational f = mat[rr][c];
      for (std::size_t cc = 0; cc < ncols; ++cc) mat[rr][cc] -= f * mat[r][cc];
    }
    piv_cols.push_back(c);
    ++r;
  }

  std::vector<bool> is_piv(ncols, false);
  for (std::size_t c : piv_cols) is_piv[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t fc = 0; fc < ncols; ++fc) {
    if (is_piv[fc]) continue;
    std::vector<Rational> q(ncols, Rational(0));
    q[fc] = 1;
    for (std::size_t ri = 0; ri < piv_cols.size(); ++ri) q[piv_cols[ri]] = -mat[ri][fc];
    basis.push_back(std::move(q));
  }
  return basis;
}

struct CertVec {
  Rational c0, c1, c2;
  bool zero() const { return c0 == 0 && c1 == 0 && c2 == 0; }
};

CertVec cert_of(const Model& model, const std::vector<int>& active,
                const std::vector<Rational>& q, int e2, int e2sq) {
  CertVec v{Rational(0), Rational(0), Rational(0)};
  for (std::size_t i = 0; i < active.size(); ++i) {
    if (q[i] == 0) continue;
    v.c0 += q[i];
    v.c1 += q[i] * model.coeff(active[i], e2);
    if (e2sq >= 0) v.c2 += q[i] * model.coeff(active[i], e2sq);
  }
  return v;
}

bool proportional(const CertVec& x, const CertVec& y) {
  return x.c0 * y.c1 == x.c1 * y.c0 && x.c0 * y.c2 == x.c2 * y.c0 &&
         x.c1 * y.c2 == x.c2 * y.c1;
}

// Scale a rational vector to the primitive integer vector with the same
// direction (positive orientation given by the first nonzero entry).
std::vector<BigInt> primitive_integer(const std::vector<Rational>& v) {
  BigInt lcm = 1;
  for (const Rational& x : v) {
    const BigInt den = boost::multiprecision::denominator(x);
    lcm = boost::multiprecision::lcm(lcm, den);
  }
  std::vector<BigInt> out;
  out.reserve(v.size());
  BigInt g = 0;
  for (const Rational& x : v) {
    const BigInt n = boost::multiprecision::numerator(x) *
                     (lcm / boost::multiprecision::denominator(x));
    out.push_back(n);
    g = boost::multiprecision::gcd(g, boost::multiprecision::abs(n));
  }
  if (g > 1)
    for (BigInt& n : out) n /= g;
  for (const BigInt& n : out) {
    if (n == 0) continue;
    if (n < 0)
      for (BigInt& m : out) m = -m;
    break;
  }
  return out;
}

} // namespace

Certificate certify(int n) {
  if (n < 3) throw std::invalid_argument("polygon size must be at least 3");
  Certificate cert;
  cert.n = n;
  if (n > 7) {
    cert.status = CertStatus::NoCertificate;
    cert.message = "cancellation certificates are not attempted beyond n=7: "
                   "the positivity zeros of larger polygons cannot cancel all "
                   "higher correlators in this form";
    return cert;
  }

  const Model model = build_model(n, Mode::Single);
  const PolygonData& poly = polygon(n);

  // e2 is the objective correlator; its square shows up as the target of the
  // diagonal quadratic constraint when the model has one.
  const int e2 = model.obj;
  int e2sq = -1;
  for (const auto& [t, u, v] : model.quads)
    if (u == model.obj && v == model.obj) e2sq = t;

  std::vector<int> candidates;
  std::vector<double> point;
  if (model.quads.empty()) {
    const Rational exact = exact_linear_bound(model, Direction::Max);
    cert.numeric_bound = to_double(exact);
    // Exact vertex: recover it together with its exactly-zero slacks.
    ExactLpProblem lp(static_cast<int>(model.vars.size()));
    for (const ModelRow& row : model.rows) {
      std::vector<std::pair<int, Rational>> coeffs;
      for (const auto& [v, c] : row.coeffs) coeffs.emplace_back(v, Rational(-c));
      lp.add_leq(std::move(coeffs), Rational(1));
    }
    lp.objective = {{model.obj, Rational(-1)}};
    const ExactLpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal)
      throw std::runtime_error("exact relaxation failed");
    candidates = sol.active;
    point.reserve(sol.x.size());
    for (const Rational& v : sol.x) point.push_back(to_double(v));
  } else {
    const BoundResult res = slp_bound(model, Direction::Max);
    if (res.status != BoundStatus::Converged) {
      cert.status = CertStatus::NoCertificate;
      cert.message = "numeric stage did not converge: " + bound_status_name(res.status);
      return cert;
    }
    cert.numeric_bound = res.bound;
    point = res.x;
    candidates = active_outcomes(model, point, 1e-7);
    candidates = face_zeros(model, res.bound, point, candidates, 1e-9);
  }

  std::vector<int> others;
  for (int v = 0; v < static_cast<int>(model.vars.size()); ++v)
    if (v != e2 && v != e2sq) others.push_back(v);

  auto attempt = [&](const std::vector<int>& active)
      -> std::vector<std::vector<Rational>> {
    return cancellation_kernel(model, active, others, &cert.cancelled_correlators);
  };

  std::vector<int> active = candidates;
  std::vector<std::vector<Rational>> kernel = attempt(active);
  if (kernel.empty() && !model.quads.empty()) {
    // widen the candidate tolerance once before giving up
    active = active_outcomes(model, point, 1e-5);
    active = face_zeros(model, cert.numeric_bound, point, active, 1e-5);
    kernel = attempt(active);
  }
  if (kernel.empty()) {
    cert.status = CertStatus::NoCertificate;
    cert.message = "no nontrivial multiplier cancels the remaining correlators "
                   "over the active rows";
    return cert;
  }

  cert.active_rows = active;
  for (int r : active) {
    const int oi = model.rows[static_cast<std::size_t>(r)].orbit_index;
    cert.active_orbits.push_back(outcome_display(poly.outcomes().reps[static_cast<std::size_t>(oi)]));
    cert.active_sizes.push_back(poly.outcomes().sizes[static_cast<std::size_t>(oi)]);
  }

  // All kernel vectors must induce the same polynomial direction.
  std::vector<CertVec> certs;
  for (const auto& q : kernel) certs.push_back(cert_of(model, active, q, e2, e2sq));
  const CertVec* lead = nullptr;
  for (const CertVec& c : certs)
    if (!c.zero()) {
      lead = &c;
      break;
    }
  if (!lead) {
    cert.status = CertStatus::NoCertificate;
    cert.message = "the cancellation space is orthogonal to the objective row";
    return cert;
  }
  for (const CertVec& c : certs)
    if (!c.zero() && !proportional(*lead, c)) {
      cert.status = CertStatus::AmbiguousRoot;
      cert.message = "independent certificates with different polynomials";
      return cert;
    }

  const std::vector<BigInt> prim =
      primitive_integer({lead->c0, lead->c1, lead->c2});
  cert.p0 = prim[0];
  cert.p1 = prim[1];
  cert.p2 = prim[2];
  if (cert.p0 <= 0) {
    cert.status = CertStatus::NoCertificate;
    cert.message = "certificate polynomial has a nonpositive constant term; no "
                   "nonnegative multiplier vector can produce it";
    return cert;
  }

  // Nonnegative integer multipliers: search the integer lattice of the
  // kernel for the vector of least total weight (the certificate exists iff
  // one is found).
  const std::size_t dim = kernel.size();
  const std::size_t na = active.size();
  bool found = false;
  std::vector<BigInt> best_q;
  BigInt best_sum = 0;
  if (dim <= 3) {
    const int kRange = 64;
    std::vector<long long> t(dim, 0);
    std::vector<Rational> qr(na);
    auto consider = [&]() {
      bool all_zero = true;
      for (std::size_t j = 0; j < na; ++j) {
        Rational v(0);
        for (std::size_t i = 0; i < dim; ++i)
          if (t[i] != 0) v += Rational(t[i]) * kernel[i][j];
        if (v < 0) return;
        if (boost::multiprecision::denominator(v) != 1) return;
        qr[j] = v;
        if (v != 0) all_zero = false;
      }
      if (all_zero) return;
      BigInt sum = 0;
      std::vector<BigInt> qi(na);
      for (std::size_t j = 0; j < na; ++j) {
        qi[j] = boost::multiprecision::numerator(qr[j]);
        sum += qi[j];
      }
      if (!found || sum < best_sum || (sum == best_sum && qi < best_q)) {
        found = true;
        best_sum = sum;
        best_q = qi;
      }
    };
    // iterate the grid lexicographically
    std::vector<long long> idx(dim, -kRange);
    while (true) {
      for (std::size_t i = 0; i < dim; ++i) t[i] = idx[i];
      consider();
      std::size_t pos = dim;
      while (pos > 0) {
        if (++idx[pos - 1] <= kRange) break;
        idx[pos - 1] = -kRange;
        --pos;
      }
      if (pos == 0) break;
    }
  } else {
    // High-dimensional kernel: find any nonnegative rational point with the
    // certificate normalized to the primitive polynomial, then clear
    // denominators.
    const Rational scale = lead->c0 / Rational(cert.p0);
    ExactLpProblem lp(static_cast<int>(dim));
    for (auto& l : lp.lower) l = Rational(-1024);
    for (auto& u : lp.upper) u = Rational(1024);
    for (std::size_t j = 0; j < na; ++j) {
      std::vector<std::pair<int, Rational>> row;
      for (std::size_t i = 0; i < dim; ++i)
        if (kernel[i][j] != 0) row.emplace_back(static_cast<int>(i), -kernel[i][j]);
      if (!row.empty()) lp.add_leq(std::move(row), Rational(0));  // q_j >= 0
    }
    {
      std::vector<std::pair<int, Rational>> row;
      for (std::size_t i = 0; i < dim; ++i) {
        const CertVec& ci = certs[i];
        if (ci.c0 != 0) row.emplace_back(static_cast<int>(i), ci.c0);
      }
      lp.add_eq(std::move(row), scale * Rational(cert.p0));
    }
    const ExactLpSolution sol = solve_lp(lp);
    if (sol.status == LpStatus::Optimal) {
      std::vector<Rational> qr(na, Rational(0));
      for (std::size_t j = 0; j < na; ++j)
        for (std::size_t i = 0; i < dim; ++i)
          qr[j] += sol.x[i] * kernel[i][j];
      bool ok = true;
      for (const Rational& v : qr)
        if (v < 0) ok = false;
      if (ok) {
        BigInt lcm = 1;
        for (const Rational& v : qr)
          lcm = boost::multiprecision::lcm(lcm, boost::multiprecision::denominator(v));
        best_q.assign(na, BigInt(0));
        for (std::size_t j = 0; j < na; ++j)
          best_q[j] = boost::multiprecision::numerator(qr[j]) *
                      (lcm / boost::multiprecision::denominator(qr[j]));
        found = true;
      }
    }
  }

  if (!found) {
    cert.status = CertStatus::NoCertificate;
    cert.message = "no nonnegative integer multiplier vector exists for the "
                   "cancellation system";
    return cert;
  }
  cert.q = best_q;

  // Presented polynomial: primitive coefficients on the 4^{-(n-2)} scale on
  // which the row combination is an explicit probability combination.
  const Rational pres = Rational(BigInt(1), pow4(n - 2));
  cert.c0 = Rational(cert.p0) * pres;
  cert.c1 = Rational(cert.p1) * pres;
  cert.c2 = Rational(cert.p2) * pres;

  // Root of p0 + p1 E + p2 E^2 = 0 nearest the numeric bound.
  if (cert.p2 == 0) {
    if (cert.p1 == 0) {
      cert.status = CertStatus::NoCertificate;
      cert.message = "certificate polynomial is constant";
      return cert;
    }
    cert.root.is_rational = true;
    cert.root.rational = make_rational(-cert.p0, cert.p1);
    if (std::abs(cert.root.value() - cert.numeric_bound) > 1e-4) {
      cert.status = CertStatus::AmbiguousRoot;
      cert.message = "linear root does not match the numeric bound";
      return cert;
    }
  } else {
    const BigInt disc = cert.p1 * cert.p1 - 4 * cert.p0 * cert.p2;
    if (disc < 0) {
      cert.status = CertStatus::NoRealRoot;
      cert.message = "negative discriminant";
      return cert;
    }
    BigInt s, d;
    split_square(disc, s, d);
    std::vector<RootValue> roots;
    if (d == 1) {
      for (int sign : {+1, -1}) {
        RootValue r;
        r.is_rational = true;
        r.rational = make_rational(-cert.p1 + sign * s, 2 * cert.p2);
        roots.push_back(r);
      }
    } else {
      for (int sign : {+1, -1}) {
        RootValue r;
        r.is_rational = false;
        r.surd.a = make_rational(-cert.p1, 2 * cert.p2);
        r.surd.b = make_rational(sign * s, 2 * cert.p2);
        r.surd.d = d;
        roots.push_back(r);
      }
    }
    std::vector<RootValue> near;
    for (const RootValue& r : roots)
      if (std::abs(r.value() - cert.numeric_bound) <= 1e-4) near.push_back(r);
    if (near.empty()) {
      cert.status = CertStatus::AmbiguousRoot;
      cert.message = "no polynomial root matches the numeric bound";
      return cert;
    }
    if (near.size() > 1) {
      cert.status = CertStatus::AmbiguousRoot;
      cert.message = "both polynomial roots match the numeric bound";
      return cert;
    }
    cert.root = near.front();
  }

  cert.status = CertStatus::Ok;
  return cert;
}

std::string certificate_text(const Certificate& c) {
  std::ostringstream out;
  out.precision(9);  // numeric output carries 9 significant digits
  out << "polygon n=" << c.n << "\n";
  out << "status: " << cert_status_name(c.status) << "\n";
  if (!c.message.empty()) out << "note: " << c.message << "\n";
  if (c.status != CertStatus::Ok) return out.str();
  out << "numeric bound: " << c.numeric_bound << "\n";
  out << "active outcome orbits: " << c.active_rows.size() << "\n";
  for (std::size_t i = 0; i < c.active_rows.size(); ++i)
    out << "  " << c.active_orbits[i] << " (orbit size " << c.active_sizes[i]
        << ")  q=" << c.q[i].str() << "\n";
  out << "correlators cancelled by the combination: " << c.cancelled_correlators
      << "\n";
  out << "integer identity: " << c.p0.str() << " + (" << c.p1.str()
      << ") E2 + (" << c.p2.str() << ") E2^2 >= 0\n";
  out << "presented scale: " << to_string(c.c0) << " + (" << to_string(c.c1)
      << ") E2 + (" << to_string(c.c2) << ") E2^2 >= 0\n";
  out << "tight root: " << c.root.str() << " = " << c.root.value() << "\n";
  return out.str();
}

} // namespace opinf
