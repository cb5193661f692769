#include "convlab/qlinalg.hpp"

#include "convlab/errors.hpp"

#include <algorithm>
#include <map>

namespace convlab {

QMatrix q_identity(size_t n) {
  QMatrix m(n, std::vector<Q>(n));
  for (size_t i = 0; i < n; ++i)
    m[i][i] = 1;
  return m;
}

QMatrix q_mul(const QMatrix& a, const QMatrix& b) {
  size_t n = a.size(), k = b.size(), w = b.empty() ? 0 : b[0].size();
  QMatrix c(n, std::vector<Q>(w));
  for (size_t i = 0; i < n; ++i)
    for (size_t l = 0; l < k; ++l) {
      if (a[i][l] == 0)
        continue;
      for (size_t j = 0; j < w; ++j)
        c[i][j] += a[i][l] * b[l][j];
    }
  return c;
}

QMatrix q_sub(const QMatrix& a, const QMatrix& b) {
  QMatrix c = a;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j)
      c[i][j] -= b[i][j];
  return c;
}

QMatrix q_scale(const QMatrix& a, const Q& s) {
  QMatrix c = a;
  for (auto& row : c)
    for (auto& x : row)
      x *= s;
  return c;
}

QPoly char_poly(const QMatrix& a) {
  // Faddeev-LeVerrier.
  size_t n = a.size();
  QPoly c(n + 1);
  c[n] = 1;
  QMatrix m(n, std::vector<Q>(n));
  for (size_t k = 1; k <= n; ++k) {
    QMatrix am = q_mul(a, m);
    for (size_t i = 0; i < n; ++i)
      am[i][i] += c[n - k + 1];
    m = am;
    QMatrix t = q_mul(a, m);
    Q tr = 0;
    for (size_t i = 0; i < n; ++i)
      tr += t[i][i];
    c[n - k] = -tr / Q(static_cast<long>(k));
  }
  return c;
}

Q poly_eval(const QPoly& p, const Q& x) {
  Q acc = 0;
  for (size_t i = p.size(); i-- > 0;)
    acc = acc * x + p[i];
  return acc;
}

QPoly poly_eval_shift(const QPoly& p, const Q& j) {
  // Horner in the polynomial ring: acc = acc * (T - j) + p_i.
  QPoly acc;
  for (size_t i = p.size(); i-- > 0;) {
    QPoly next(acc.size() + 1);
    for (size_t k = 0; k < acc.size(); ++k) {
      next[k + 1] += acc[k];
      next[k] -= acc[k] * j;
    }
    next[0] += p[i];
    acc = std::move(next);
  }
  while (!acc.empty() && acc.back() == 0)
    acc.pop_back();
  return acc;
}

namespace {

constexpr unsigned long trial_bound = 1000000;

// Prime factorization by trial division; false if a cofactor above the bound
// could not be certified prime.
bool factor(Z n, std::map<Z, long>& out) {
  n = abs(n);
  for (unsigned long d = 2; d <= trial_bound && Z(d) * Z(d) <= n; ++d)
    while (mpz_divisible_ui_p(n.get_mpz_t(), d)) {
      out[Z(d)] += 1;
      n /= d;
    }
  if (n > 1) {
    if (mpz_probab_prime_p(n.get_mpz_t(), 30) == 0)
      return false;
    out[n] += 1;
  }
  return true;
}

std::vector<Z> divisors(const std::map<Z, long>& f) {
  std::vector<Z> d{Z(1)};
  for (const auto& [prime, e] : f) {
    size_t base = d.size();
    Z pk = 1;
    for (long k = 1; k <= e; ++k) {
      pk *= prime;
      for (size_t i = 0; i < base; ++i)
        d.push_back(d[i] * pk);
    }
  }
  return d;
}

// Divide by (T - x), assuming x is a root.
QPoly deflate(const QPoly& p, const Q& x) {
  size_t n = p.size() - 1;
  QPoly q(n);
  Q carry = 0;
  for (size_t i = n; i-- > 0;) {
    carry = p[i + 1] + carry * x;
    q[i] = carry;
  }
  return q;
}

} // namespace

std::optional<std::vector<std::pair<Q, long>>> rational_roots(const QPoly& p0) {
  QPoly p = p0;
  while (!p.empty() && p.back() == 0)
    p.pop_back();
  if (p.empty())
    fail(Errc::degenerate_input, "roots of the zero polynomial");
  std::vector<std::pair<Q, long>> roots;
  long zero = 0;
  while (p.size() > 1 && p[0] == 0) {
    p.erase(p.begin());
    ++zero;
  }
  if (zero)
    roots.emplace_back(Q(0), zero);
  if (p.size() > 1) {
    Z l = 1;
    for (const auto& c : p)
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    Z a0 = Z(p.front() * l), an = Z(p.back() * l);
    std::map<Z, long> fa, fb;
    if (!factor(a0, fa) || !factor(an, fb))
      return std::nullopt;
    std::vector<Q> cands;
    for (const Z& num : divisors(fa))
      for (const Z& den : divisors(fb)) {
        Q x(num, den);
        x.canonicalize();
        cands.push_back(x);
        cands.push_back(-x);
      }
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    for (const Q& x : cands) {
      long mult = 0;
      while (p.size() > 1 && poly_eval(p, x) == 0) {
        p = deflate(p, x);
        ++mult;
      }
      if (mult)
        roots.emplace_back(x, mult);
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<size_t> rref(QMatrix& a) {
  std::vector<size_t> piv;
  size_t rows = a.size(), cols = rows ? a[0].size() : 0, r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t sel = r;
    while (sel < rows && a[sel][c] == 0)
      ++sel;
    if (sel == rows)
      continue;
    std::swap(a[sel], a[r]);
    Q inv = 1 / a[r][c];
    for (auto& x : a[r])
      x *= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0)
        continue;
      Q f = a[i][c];
      for (size_t j = 0; j < cols; ++j)
        a[i][j] -= f * a[r][j];
    }
    piv.push_back(c);
    ++r;
  }
  return piv;
}

std::vector<std::vector<Q>> kernel(const QMatrix& a0) {
  QMatrix a = a0;
  size_t cols = a.empty() ? 0 : a[0].size();
  std::vector<size_t> piv = rref(a);
  std::vector<bool> is_piv(cols, false);
  for (size_t c : piv)
    is_piv[c] = true;
  std::vector<std::vector<Q>> basis;
  for (size_t free = 0; free < cols; ++free) {
    if (is_piv[free])
      continue;
    std::vector<Q> v(cols);
    v[free] = 1;
    for (size_t r = 0; r < piv.size(); ++r)
      v[piv[r]] = -a[r][free];
    basis.push_back(v);
  }
  return basis;
}

std::optional<QMatrix> q_inverse(const QMatrix& a) {
  size_t n = a.size();
  QMatrix aug(n, std::vector<Q>(2 * n));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j)
      aug[i][j] = a[i][j];
    aug[i][n + i] = 1;
  }
  std::vector<size_t> piv = rref(aug);
  if (piv.size() < n || (n && piv[n - 1] != n - 1))
    return std::nullopt;
  QMatrix inv(n, std::vector<Q>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      inv[i][j] = aug[i][n + j];
  return inv;
}

namespace {

void trim(QPoly& p) {
  while (!p.empty() && p.back() == 0)
    p.pop_back();
}

// Quotient and remainder.
std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b) {
  QPoly r = a, q;
  trim(r);
  if (b.empty())
    fail(Errc::division_by_zero, "polynomial division by zero");
  if (r.size() < b.size())
    return {q, r};
  q.assign(r.size() - b.size() + 1, Q(0));
  Q lead = b.back();
  for (size_t k = r.size(); k-- >= b.size();) {
    Q c = r[k] / lead;
    q[k - (b.size() - 1)] = c;
    if (c != 0)
      for (size_t i = 0; i < b.size(); ++i)
        r[k - (b.size() - 1) + i] -= c * b[i];
    if (k == b.size() - 1)
      break;
  }
  trim(r);
  trim(q);
  return {q, r};
}

QPoly sub(const QPoly& a, const QPoly& b) {
  QPoly c(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i)
    c[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i)
    c[i] -= b[i];
  trim(c);
  return c;
}

} // namespace

QPoly poly_mul_q(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty())
    return {};
  QPoly c(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      c[i + j] += a[i] * b[j];
  trim(c);
  return c;
}

QPoly poly_mod(const QPoly& a, const QPoly& m) { return divmod(a, m).second; }

QPolyXgcd poly_xgcd(const QPoly& a0, const QPoly& b0) {
  QPoly r0 = a0, r1 = b0, s0{Q(1)}, s1{}, t0{}, t1{Q(1)};
  trim(r0);
  trim(r1);
  while (!r1.empty()) {
    auto [q, r] = divmod(r0, r1);
    QPoly s2 = sub(s0, poly_mul_q(q, s1));
    QPoly t2 = sub(t0, poly_mul_q(q, t1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (!r0.empty()) {
    Q inv = 1 / r0.back();
    for (auto* p : {&r0, &s0, &t0})
      for (auto& c : *p)
        c *= inv;
  }
  return {r0, s0, t0};
}

} // namespace convlab
