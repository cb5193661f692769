#include "convlab/diffmod.hpp"

#include "convlab/errors.hpp"

#include <numeric>

namespace convlab {

DiffModule::DiffModule(const FieldMode& f, Derivation d, const Interval& iv, PolyMatrix n)
    : mode(f), derivation(d), interval(iv), matrix(std::move(n)) {
  if (!matrix.square())
    fail(Errc::size_mismatch, "module matrix must be square");
  if (!(matrix.field() == f))
    fail(Errc::mode_mismatch, "matrix field differs from module field");
  if (iv.r_min > iv.r_max)
    fail(Errc::interval_order, "empty interval");
}

std::vector<LaurentPoly> DiffModule::apply_d(const std::vector<LaurentPoly>& v) const {
  std::vector<LaurentPoly> out = matrix.apply(v);
  for (size_t i = 0; i < v.size(); ++i)
    out[i] += derive(v[i], derivation);
  return out;
}

bool operator==(const DiffModule& a, const DiffModule& b) {
  return a.mode == b.mode && a.derivation == b.derivation && a.interval == b.interval && a.matrix == b.matrix;
}

namespace {

void check_compatible(const DiffModule& a, const DiffModule& b) {
  if (!(a.mode == b.mode) || a.derivation != b.derivation)
    fail(Errc::incompatible, "modules differ in field or derivation");
  if (!(a.interval == b.interval))
    fail(Errc::incompatible, "modules live on different intervals");
}

} // namespace

DiffModule change_basis(const DiffModule& m, const PolyMatrix& u) {
  if (u.rows() != m.rank() || !u.square())
    fail(Errc::size_mismatch, "gauge matrix has the wrong size");
  PolyMatrix uinv = inverse(u);
  PolyMatrix n = uinv * (m.matrix * u + derive(u, m.derivation));
  return DiffModule(m.mode, m.derivation, m.interval, std::move(n));
}

DiffModule dual(const DiffModule& m) { return DiffModule(m.mode, m.derivation, m.interval, -m.matrix.transpose()); }

DiffModule tensor(const DiffModule& a, const DiffModule& b) {
  check_compatible(a, b);
  PolyMatrix n = kron(a.matrix, PolyMatrix::identity(a.mode, b.rank())) +
                 kron(PolyMatrix::identity(a.mode, a.rank()), b.matrix);
  return DiffModule(a.mode, a.derivation, a.interval, std::move(n));
}

DiffModule direct_sum(const DiffModule& a, const DiffModule& b) {
  check_compatible(a, b);
  return DiffModule(a.mode, a.derivation, a.interval, block_diag(a.matrix, b.matrix));
}

DiffModule tensor_power(const DiffModule& m, long k) {
  if (k < 0)
    fail(Errc::parameter, "negative tensor power");
  DiffModule out(m.mode, m.derivation, m.interval, PolyMatrix(m.mode, 1, 1));
  for (long i = 0; i < k; ++i)
    out = tensor(out, m);
  return out;
}

DiffModule switch_derivation(const DiffModule& m) {
  LaurentPoly t = LaurentPoly::monomial(m.mode, 1, m.derivation == Derivation::ddt ? 1 : -1);
  Derivation other = m.derivation == Derivation::ddt ? Derivation::t_ddt : Derivation::ddt;
  return DiffModule(m.mode, other, m.interval, m.matrix * t);
}

DiffModule as_ddt(const DiffModule& m) { return m.derivation == Derivation::ddt ? m : switch_derivation(m); }

namespace {

// All k in N^n with |k| = d, in lexicographically ascending order.
void compositions(long n, long d, std::vector<long>& cur, std::vector<std::vector<long>>& out) {
  if (static_cast<long>(cur.size()) == n - 1) {
    cur.push_back(d);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (long k = 0; k <= d; ++k) {
    cur.push_back(k);
    compositions(n, d - k, cur, out);
    cur.pop_back();
  }
}

} // namespace

CompanionData cyclic_vector(const DiffModule& m, const Q& r, long attempt_budget) {
  long n = static_cast<long>(m.rank());
  if (n == 0)
    fail(Errc::parameter, "cyclic vector of a rank-0 module");
  if (attempt_budget < 1)
    fail(Errc::parameter, "attempt budget must be positive");
  const FieldMode& f = m.mode;
  long attempts = 0;
  std::string tried;
  for (long d = 0;; ++d) {
    std::vector<std::vector<long>> ladder;
    std::vector<long> cur;
    compositions(n, d, cur, ladder);
    for (const auto& k : ladder) {
      if (attempts == attempt_budget)
        fail(Errc::cyclic_search_failure, "no cyclic vector among " + std::to_string(attempts) + " candidates:" + tried);
      ++attempts;
      std::vector<LaurentPoly> v;
      std::string label;
      for (long j = 0; j < n; ++j) {
        v.push_back(LaurentPoly::monomial(f, 1, k[static_cast<size_t>(j)]));
        label += (j ? "," : "") + std::to_string(k[static_cast<size_t>(j)]);
      }
      tried += " (" + label + ")";
      PolyMatrix basis(f, static_cast<size_t>(n), static_cast<size_t>(n));
      std::vector<LaurentPoly> w = v;
      for (long i = 0; i < n; ++i) {
        basis.set_column(static_cast<size_t>(i), w);
        w = m.apply_d(w);
      }
      PolyMatrix rhs(f, static_cast<size_t>(n), 1);
      rhs.set_column(0, w);
      // The fraction-free solve ends with den = +-det(basis), so a successful
      // solve is itself the nonvanishing certificate.
      FracSolution s{PolyMatrix(f), LaurentPoly(f)};
      try {
        s = solve(basis, rhs);
      } catch (const Error& e) {
        if (e.code() != Errc::singular_gauge)
          throw;
        continue;
      }
      if (!gauss_val(s.den, r).finite())
        continue;
      return CompanionData{v, s.num.column(0), s.den, s.den, attempts};
    }
  }
}

std::vector<LaurentPoly> companion_polynomial(const CompanionData& c) {
  std::vector<LaurentPoly> p;
  for (const auto& a : c.num)
    p.push_back(-a);
  p.push_back(c.den);
  return p;
}

DiffModule frobenius_descendant(const DiffModule& m0) {
  if (!m0.mode.is_padic())
    fail(Errc::mode_mismatch, "Frobenius descendant needs p-adic mode");
  DiffModule m = as_ddt(m0);
  const FieldMode& f = m.mode;
  long p = f.p();
  size_t n = m.rank();
  size_t np = n * static_cast<size_t>(p);
  PolyMatrix out(f, np, np);
  Q inv_p(1, p);
  auto idx = [p](size_t i, long j) { return i * static_cast<size_t>(p) + static_cast<size_t>(j); };
  // D'(e_i t^j) = p^{-1} t^{1-p} D(e_i t^j)
  //             = (j/p) s^{-1} (e_i t^j) + p^{-1} sum_{k,n} N_{ki,n} t^{n+j+1-p} e_k,
  // and t^E e_k with E = p q + l (0 <= l < p) is s^q (e_k t^l).
  for (size_t i = 0; i < n; ++i)
    for (long j = 0; j < p; ++j) {
      size_t col = idx(i, j);
      if (j != 0)
        out(col, col) += LaurentPoly::monomial(f, Q(j, p), -1);
      for (size_t k = 0; k < n; ++k)
        for (const auto& term : m.matrix(k, i).terms()) {
          long e = term.first + j + 1 - p;
          long q = e >= 0 ? e / p : -((-e + p - 1) / p);
          long l = e - q * p;
          out(idx(k, l), col) += LaurentPoly(term.second * inv_p, q);
        }
    }
  return DiffModule(f, Derivation::ddt, m.interval.scaled(Q(p)), std::move(out));
}

DiffModule test_module(const Scalar& lambda, long h, long e, long m, const FieldMode& f, const Interval& t_interval) {
  if (!(lambda.field() == f))
    fail(Errc::mode_mismatch, "lambda lives in a different field");
  if (e < 1 || m < 1)
    fail(Errc::parameter, "e and m must be positive");
  if (f.is_padic()) {
    long x = e;
    while (x % f.p() == 0)
      x /= f.p();
    if (x != 1)
      fail(Errc::parameter, "e = " + std::to_string(e) + " is not a power of p = " + std::to_string(f.p()));
    if (m % f.p() == 0)
      fail(Errc::parameter, "m divisible by p");
  } else if (e != 1) {
    fail(Errc::parameter, "e must be 1 in residue characteristic 0");
  }
  if (std::gcd(h, e * m) != 1)
    fail(Errc::parameter, "h must be coprime to e*m");
  size_t ne = static_cast<size_t>(e);
  PolyMatrix n(f, ne, ne);
  for (size_t k = 0; k + 1 < ne; ++k)
    n(k + 1, k) = LaurentPoly::monomial(f, 1, -1);
  n(0, ne - 1) += LaurentPoly(lambda, h - 1);
  return DiffModule(f, Derivation::ddt, t_interval.scaled(Q(1, m)), std::move(n));
}

DiffModule translate(const DiffModule& m, const Scalar& z) {
  if (!m.interval.is_disc())
    fail(Errc::domain, "translation needs a disc");
  if (!m.interval.r_min.is_neg_inf() && z.val() < m.interval.r_min)
    fail(Errc::domain, "center " + z.str() + " lies outside the disc");
  DiffModule d = as_ddt(m);
  const size_t n = d.rank();
  PolyMatrix out(d.mode, n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      for (const auto& [k, c] : d.matrix(i, j).terms()) {
        if (k < 0)
          fail(Errc::domain, "translation needs a polynomial matrix");
        // (t + z)^k = sum_l binom(k, l) z^(k-l) t^l
        Z binom = 1;
        for (long l = k; l >= 0; --l) {
          Scalar zp(d.mode, 1);
          for (long e = 0; e < k - l; ++e)
            zp *= z;
          out(i, j) += LaurentPoly(c * zp * Q(binom), l);
          binom = binom * l / (k - l + 1);
        }
      }
  DiffModule t(d.mode, Derivation::ddt, d.interval, std::move(out));
  return m.derivation == Derivation::ddt ? t : switch_derivation(t);
}

DiffModule twist_W(long m_idx, const FieldMode& f, const Interval& iv) {
  if (!f.is_padic())
    fail(Errc::mode_mismatch, "W_m needs p-adic mode");
  if (m_idx < 0 || m_idx >= f.p())
    fail(Errc::index_range, "m must lie in 0..p-1");
  PolyMatrix n(f, 1, 1);
  n(0, 0) = LaurentPoly::monomial(f, Q(m_idx, f.p()), -1);
  return DiffModule(f, Derivation::ddt, iv, std::move(n));
}

} // namespace convlab
