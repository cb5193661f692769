#include "convlab/expo.hpp"

#include "convlab/errors.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>

namespace convlab {

ExponentMultiset::ExponentMultiset(std::vector<Q> entries) : entries_(std::move(entries)) {
  for (auto& q : entries_)
    q.canonicalize();
  std::sort(entries_.begin(), entries_.end());
}

void ExponentMultiset::check_zp(long p) const {
  for (const Q& q : entries_)
    if (mpz_divisible_ui_p(q.get_den().get_mpz_t(), static_cast<unsigned long>(p)))
      fail(Errc::not_in_zp, q_str(q) + " is not in Z_" + std::to_string(p));
}

std::string ExponentMultiset::str() const {
  std::string s = "{";
  for (size_t i = 0; i < entries_.size(); ++i)
    s += (i ? ", " : "") + q_str(entries_[i]);
  return s + "}";
}

Q frac_dist(const Q& x) {
  Q lo = x - Q(q_floor(x));
  Q hi = Q(q_ceil(x)) - x;
  return std::min(lo, hi);
}

namespace {

void check_prime(long p) {
  if (!is_prime(p))
    fail(Errc::non_prime, std::to_string(p) + " is not prime");
}

Z zp_pow(long p, long m) {
  Z out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(m));
  return out;
}

} // namespace

Z residue_dist(const Q& a, long p, long m) {
  if (m < 0)
    fail(Errc::parameter, "negative depth");
  Z mod = zp_pow(p, m);
  Z inv;
  if (!mpz_invert(inv.get_mpz_t(), a.get_den().get_mpz_t(), mod.get_mpz_t())) {
    if (m == 0)
      return 0;
    fail(Errc::not_in_zp, q_str(a) + " is not in Z_" + std::to_string(p));
  }
  Z r = a.get_num() * inv;
  mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), mod.get_mpz_t());
  Z other = mod - r;
  return r < other ? r : other;
}

const char* liouville_status_name(LiouvilleStatus s) {
  switch (s) {
  case LiouvilleStatus::integer: return "Integer";
  case LiouvilleStatus::rational_non_liouville: return "RationalNonLiouville";
  case LiouvilleStatus::undecided: return "UndecidedToDepth";
  }
  return "?";
}

LiouvilleVerdict liouville_profile(const Q& a, long p, long m_max) {
  check_prime(p);
  if (m_max < 1)
    fail(Errc::parameter, "m_max must be positive");
  ExponentMultiset({a}).check_zp(p);
  LiouvilleVerdict v;
  v.depth = m_max;
  for (long m = 1; m <= m_max; ++m)
    v.profile.emplace_back(m, residue_dist(a, p, m));
  if (q_is_integer(a)) {
    v.status = LiouvilleStatus::integer;
    v.note = "integer: the profile equals |a| once p^m > 2|a|";
  } else {
    // r y - x is a nonzero multiple of p^m, so |r| >= (p^m - |x|) / y.
    v.status = LiouvilleStatus::rational_non_liouville;
    v.note = "a = x/y with y > 1: p^m<a/p^m> >= (p^m - |x|)/y with y = " + a.get_den().get_str() +
             ", so the profile grows like p^m/y";
  }
  return v;
}

std::string WeakEquivalence::str() const {
  if (consistent)
    return "ConsistentToDepth(" + std::to_string(depth) + ")";
  return "RefutedAtDepth(" + std::to_string(depth) + ")";
}

WeakEquivalence weakly_equivalent(const ExponentMultiset& a, const ExponentMultiset& b, long p, const Q& c,
                                  long m_max) {
  check_prime(p);
  if (a.size() != b.size())
    fail(Errc::size_mismatch, "multisets of sizes " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  if (c < 0 || m_max < 1)
    fail(Errc::parameter, "need c >= 0 and m_max >= 1");
  a.check_zp(p);
  b.check_zp(p);
  const size_t n = a.size();
  const auto& av = a.entries();
  const auto& bv = b.entries();

  WeakEquivalence out;
  for (long m = 1; m <= m_max; ++m) {
    Q bound = c * Q(m);
    std::vector<std::vector<size_t>> adj(n);
    for (size_t i = 0; i < n; ++i)
      for (size_t k = 0; k < n; ++k)
        if (Q(residue_dist(av[k] - bv[i], p, m)) <= bound)
          adj[i].push_back(k);

    std::vector<long> mate_of_a(n, -1);
    std::vector<char> seen(n);
    std::function<bool(size_t)> augment = [&](size_t i) {
      for (size_t k : adj[i]) {
        if (seen[k])
          continue;
        seen[k] = 1;
        if (mate_of_a[k] < 0 || augment(static_cast<size_t>(mate_of_a[k]))) {
          mate_of_a[k] = static_cast<long>(i);
          return true;
        }
      }
      return false;
    };
    for (size_t i = 0; i < n; ++i) {
      std::fill(seen.begin(), seen.end(), 0);
      if (augment(i))
        continue;
      // The failed search visited every neighbour of the B entries it reached.
      out.consistent = false;
      out.depth = m;
      out.witness.b.push_back(i);
      for (size_t k = 0; k < n; ++k)
        if (seen[k]) {
          out.witness.a.push_back(k);
          out.witness.b.push_back(static_cast<size_t>(mate_of_a[k]));
        }
      std::sort(out.witness.b.begin(), out.witness.b.end());
      return out;
    }
    std::vector<size_t> sigma(n);
    for (size_t k = 0; k < n; ++k)
      sigma[static_cast<size_t>(mate_of_a[k])] = k;
    out.sigma.push_back(std::move(sigma));
  }
  out.consistent = true;
  out.depth = m_max;
  return out;
}

LiouvillePartition liouville_partition(const ExponentMultiset& a, long p, const Q& c, long m_max) {
  check_prime(p);
  a.check_zp(p);
  const auto& v = a.entries();
  const size_t n = v.size();
  std::vector<size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<size_t(size_t)> find = [&](size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };

  LiouvillePartition out;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      Q d = v[i] - v[j];
      bool link = q_is_integer(d);
      if (!link) {
        LiouvilleVerdict lv = liouville_profile(d, p, m_max);
        if (lv.status == LiouvilleStatus::undecided) {
          out.exact = false;
          link = std::all_of(lv.profile.begin(), lv.profile.end(),
                             [&](const auto& e) { return Q(e.second) <= c * Q(e.first); });
        }
      }
      if (link)
        parent[find(i)] = find(j);
    }
  std::map<size_t, std::vector<size_t>> comps;
  for (size_t i = 0; i < n; ++i)
    comps[find(i)].push_back(i);
  for (auto& [root, idx] : comps)
    out.parts.push_back(std::move(idx));
  std::sort(out.parts.begin(), out.parts.end());
  return out;
}

bool prepared(const ExponentMultiset& a) {
  const auto& v = a.entries();
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t j = i + 1; j < v.size(); ++j) {
      Q d = v[j] - v[i];
      if (d != 0 && q_is_integer(d))
        return false;
    }
  return true;
}

namespace {

DiffModule to_tddt(const DiffModule& m) { return m.derivation == Derivation::t_ddt ? m : switch_derivation(m); }

void require_regular(const PolyMatrix& n) {
  for (size_t i = 0; i < n.rows(); ++i)
    for (size_t j = 0; j < n.cols(); ++j)
      if (!n(i, j).is_zero() && n(i, j).min_exp() < 0)
        fail(Errc::irregularity, "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                     ") has a pole at t = 0 for t d/dt");
}

void require_disc(const DiffModule& m) {
  if (!m.interval.is_disc())
    fail(Errc::domain, "t = 0 is not in the module's disc");
}

QMatrix constant_term(const PolyMatrix& n) {
  QMatrix a(n.rows(), std::vector<Q>(n.cols()));
  for (size_t i = 0; i < n.rows(); ++i)
    for (size_t j = 0; j < n.cols(); ++j) {
      Scalar s = n(i, j).coeff(0);
      if (!s.is_rational())
        fail(Errc::unsupported_spectrum, "constant term " + s.str() + " is not rational");
      a[i][j] = s.rational();
    }
  return a;
}

PolyMatrix to_poly(const FieldMode& f, const QMatrix& a) {
  PolyMatrix out(f, a.size(), a.size());
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a.size(); ++j)
      if (a[i][j] != 0)
        out(i, j) = LaurentPoly::constant(f, a[i][j]);
  return out;
}

std::vector<std::pair<Q, long>> rational_spectrum(const QMatrix& a) {
  auto roots = rational_roots(char_poly(a));
  long total = 0;
  if (roots)
    for (const auto& r : *roots)
      total += r.second;
  if (!roots || total != static_cast<long>(a.size()))
    fail(Errc::unsupported_spectrum, "constant term has eigenvalues outside Q");
  return *roots;
}

QMatrix q_pow(const QMatrix& a, long k) {
  QMatrix out = q_identity(a.size());
  for (long i = 0; i < k; ++i)
    out = q_mul(out, a);
  return out;
}

// Columns: generalized eigenvectors grouped by eigenvalue (ascending).
// Returns the basis and, per eigenvalue, its index range.
struct EigenBlocks {
  QMatrix basis;
  std::vector<std::pair<Q, std::pair<size_t, size_t>>> blocks;
};

EigenBlocks eigen_blocks(const QMatrix& a, const std::vector<std::pair<Q, long>>& spec) {
  const size_t n = a.size();
  EigenBlocks out;
  out.basis.assign(n, std::vector<Q>());
  size_t col = 0;
  for (const auto& [lambda, mult] : spec) {
    QMatrix shifted = q_sub(a, q_scale(q_identity(n), lambda));
    auto ker = kernel(q_pow(shifted, mult));
    if (static_cast<long>(ker.size()) != mult)
      fail(Errc::unsupported_spectrum, "generalized eigenspace has the wrong dimension");
    for (const auto& v : ker)
      for (size_t i = 0; i < n; ++i)
        out.basis[i].push_back(v[i]);
    out.blocks.push_back({lambda, {col, col + ker.size()}});
    col += ker.size();
  }
  return out;
}

ExponentMultiset expand(const std::vector<std::pair<Q, long>>& spec) {
  std::vector<Q> e;
  for (const auto& [q, k] : spec)
    e.insert(e.end(), static_cast<size_t>(k), q);
  return ExponentMultiset(std::move(e));
}

} // namespace

ExponentMultiset residue_exponent(const DiffModule& m) {
  require_disc(m);
  DiffModule t = to_tddt(m);
  require_regular(t.matrix);
  ExponentMultiset out = expand(rational_spectrum(constant_term(t.matrix)));
  if (m.mode.is_padic())
    out.check_zp(m.mode.p());
  return out;
}

ShearResult shear(const DiffModule& m, ShearTarget target) {
  require_disc(m);
  DiffModule cur = to_tddt(m);
  require_regular(cur.matrix);
  const size_t n = cur.rank();
  const FieldMode& f = cur.mode;

  ShearResult out{cur, PolyMatrix::identity(f, n), {}, {}, 0};
  out.before = expand(rational_spectrum(constant_term(cur.matrix)));

  // Each step moves one eigenvalue block one unit closer to its coset target.
  Q budget = 0;
  {
    const auto& e = out.before.entries();
    for (const Q& x : e)
      for (const Q& y : e)
        if (q_is_integer(x - y))
          budget = std::max(budget, q_abs(x - y));
    budget = budget * Q(static_cast<long>(n)) + 1;
  }

  while (true) {
    QMatrix a = constant_term(cur.matrix);
    auto spec = rational_spectrum(a);
    std::optional<Q> move;
    for (const auto& [lambda, k] : spec) {
      bool off_target = false;
      for (const auto& [mu, l] : spec) {
        Q d = mu - lambda;
        if (q_is_integer(d) && (target == ShearTarget::down ? d < 0 : d > 0))
          off_target = true;
      }
      if (off_target && (!move || (target == ShearTarget::down ? lambda > *move : lambda < *move)))
        move = lambda;
    }
    if (!move)
      break;
    if (Q(out.steps) >= budget)
      fail(Errc::unsupported_spectrum, "shear did not terminate");

    EigenBlocks eb = eigen_blocks(a, spec);
    PolyMatrix pb = to_poly(f, eb.basis);
    PolyMatrix g = PolyMatrix::identity(f, n);
    for (const auto& [lambda, range] : eb.blocks)
      if (lambda == *move)
        for (size_t i = range.first; i < range.second; ++i)
          g(i, i) = LaurentPoly::monomial(f, 1, target == ShearTarget::down ? -1 : 1);
    PolyMatrix step = pb * g;
    cur = change_basis(cur, step);
    out.gauge = out.gauge * step;
    ++out.steps;
  }
  out.after = expand(rational_spectrum(constant_term(cur.matrix)));
  out.module = m.derivation == Derivation::t_ddt ? cur : switch_derivation(cur);
  return out;
}

namespace {

LaurentPoly cut(const LaurentPoly& f, long order) {
  std::vector<LaurentPoly::Term> keep;
  for (const auto& t : f.terms())
    if (t.first < order)
      keep.push_back(t);
  return LaurentPoly::from_terms(f.field(), std::move(keep));
}

PolyMatrix cut(const PolyMatrix& m, long order) {
  PolyMatrix out(m.field(), m.rows(), m.cols());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j)
      out(i, j) = cut(m(i, j), order);
  return out;
}

// Cauchy bound on the absolute values of the complex roots of a monic P.
Q root_bound(const QPoly& p) {
  Q b = 0;
  for (size_t i = 0; i + 1 < p.size(); ++i)
    b = std::max(b, q_abs(p[i]));
  return b + 1;
}

} // namespace

FuchsResult fuchs_basis(const DiffModule& m, long order, long step_budget) {
  if (m.mode.is_padic())
    fail(Errc::mode_mismatch, "fuchs_basis needs equal characteristic 0");
  if (order < 1 || step_budget < 0)
    fail(Errc::parameter, "need order >= 1 and step_budget >= 0");
  require_disc(m);
  DiffModule tm = to_tddt(m);
  require_regular(tm.matrix);
  const FieldMode& f = tm.mode;
  const size_t n = tm.rank();
  QMatrix a = constant_term(tm.matrix);
  QPoly pc = char_poly(a);
  PolyMatrix a_poly = to_poly(f, a);
  PolyMatrix nmat = cut(tm.matrix, order);

  std::map<long, QPoly> qs;
  auto q_of = [&](long j) -> const QPoly& {
    auto it = qs.find(j);
    if (it != qs.end())
      return it->second;
    QPolyXgcd g = poly_xgcd(poly_eval_shift(pc, Q(j)), pc);
    if (g.g.size() != 1)
      fail(Errc::preparedness_violation,
           "P(T - " + std::to_string(j) + ") and P(T) share a root: eigenvalues differ by an integer");
    return qs.emplace(j, g.s).first->second;
  };
  Z jmax = q_floor(2 * root_bound(pc));
  for (long j = 1; Z(j) <= jmax; ++j)
    q_of(j);

  auto d_of = [&](const PolyMatrix& e) { return cut(derive(e, Derivation::t_ddt) + nmat * e, order); };
  auto apply_poly = [&](const QPoly& c, const PolyMatrix& e) {
    PolyMatrix r(f, n, n);
    for (size_t k = c.size(); k-- > 0;) {
      r = d_of(r);
      PolyMatrix add = e;
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
          add(i, j) *= c[k];
      r += add;
    }
    return r;
  };

  FuchsResult out{PolyMatrix::identity(f, n), a_poly, order, 0};
  while (!(d_of(out.basis) - cut(out.basis * a_poly, order)).is_zero()) {
    if (out.steps >= step_budget)
      fail(Errc::budget_exhausted, "no horizontal basis mod t^" + std::to_string(order) + " after " +
                                       std::to_string(step_budget) + " steps");
    long j = ++out.steps;
    QPoly op = poly_mul_q(poly_eval_shift(pc, Q(j)), q_of(j));
    out.basis = apply_poly(op, out.basis);
  }
  return out;
}

QMatrix sylvester_operator(const QMatrix& n0, long i) {
  const size_t n = n0.size();
  QMatrix l(n * n, std::vector<Q>(n * n));
  // vec by rows: X(a,b) sits at a*n + b.
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b) {
      size_t row = a * n + b;
      l[row][row] += Q(i);
      for (size_t k = 0; k < n; ++k) {
        l[row][k * n + b] += n0[a][k];
        l[row][a * n + k] -= n0[k][b];
      }
    }
  return l;
}

namespace {

PolyMatrix nonconstant_part(const PolyMatrix& m) {
  PolyMatrix out = m;
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) {
      Scalar c = m(i, j).coeff(0);
      if (!c.is_zero())
        out(i, j) -= LaurentPoly(c, 0);
    }
  return out;
}

ExtQ interval_val(const PolyMatrix& m, const Q& r1, const Q& r2) {
  ExtQ v = ExtQ::inf();
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j)
      v = min(v, interval_gauss_val(m(i, j), r1, r2));
  return v;
}

// Drops every u^k t^e monomial whose valuation on [r1, r2] is at least cap.
LaurentPoly drop_fine(const LaurentPoly& f, const Q& r1, const Q& r2, const ExtQ& cap, bool& dropped) {
  std::vector<LaurentPoly::Term> keep;
  for (const auto& [e, s] : f.terms()) {
    Q shift = std::min(Q(r1 * e), Q(r2 * e));
    // An unknown tail at or beyond the cap goes with the dropped terms.
    if (!s.is_exact() && ExtQ(Q(s.prec()) + shift) < cap) {
      keep.emplace_back(e, s);
      continue;
    }
    if (!s.is_exact())
      dropped = true;
    std::vector<Scalar::Term> us;
    for (const auto& [k, q] : s.terms()) {
      if (ExtQ(Q(k) + shift) >= cap)
        dropped = true;
      else
        us.emplace_back(k, q);
    }
    if (!us.empty())
      keep.emplace_back(e, Scalar::u_series(f.field(), std::move(us)));
  }
  return LaurentPoly::from_terms(f.field(), std::move(keep));
}

PolyMatrix drop(const PolyMatrix& m, const Q& r1, const Q& r2, const ExtQ& cap, bool& dropped) {
  PolyMatrix out(m.field(), m.rows(), m.cols());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j)
      out(i, j) = drop_fine(m(i, j), r1, r2, cap, dropped);
  return out;
}

} // namespace

ConstantBasisResult constant_basis(const DiffModule& m, long iterations) {
  if (m.mode.is_padic())
    fail(Errc::mode_mismatch, "constant_basis needs equal characteristic 0");
  if (iterations < 0)
    fail(Errc::parameter, "negative iteration count");
  if (!m.interval.r_min.finite() || !m.interval.r_max.finite())
    fail(Errc::parameter, "constant_basis needs a closed annulus with finite endpoints");
  const Q r1 = m.interval.r_min.value();
  const Q r2 = m.interval.r_max.value();
  DiffModule tm = to_tddt(m);
  const FieldMode& f = tm.mode;
  const size_t n = tm.rank();
  QMatrix n0 = constant_term(tm.matrix);

  ConstantBasisResult out{PolyMatrix::identity(f, n), tm.matrix, 0, ExtQ::inf(), {}, 0};
  ExtQ eps = interval_val(nonconstant_part(tm.matrix), r1, r2);
  out.residuals.push_back(eps);
  if (eps.is_inf())
    return out;
  if (eps <= ExtQ(0))
    fail(Errc::hypothesis, "N - N_0 has valuation " + eps.str() + " <= 0 on the interval");
  out.gap = eps.value();
  out.cap = ExtQ(out.gap * Q(iterations + 2));

  std::map<long, QMatrix> inverses;
  auto inverse_for = [&](long i) -> const QMatrix& {
    auto it = inverses.find(i);
    if (it != inverses.end())
      return it->second;
    auto inv = q_inverse(sylvester_operator(n0, i));
    if (!inv)
      fail(Errc::preparedness_violation,
           "Sylvester operator singular for mode " + std::to_string(i) + ": eigenvalues of N_0 differ by an integer");
    return inverses.emplace(i, std::move(*inv)).first->second;
  };

  bool dropped = false;
  PolyMatrix cur = tm.matrix;
  for (long l = 0; l < iterations; ++l) {
    PolyMatrix rest = nonconstant_part(cur);
    std::map<long, std::vector<Scalar>> modes;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        for (const auto& [e, c] : rest(i, j).terms()) {
          auto& v = modes.try_emplace(e, n * n, Scalar(f)).first->second;
          v[i * n + j] = c;
        }
    PolyMatrix x(f, n, n);
    for (const auto& [e, rhs] : modes) {
      const QMatrix& linv = inverse_for(e);
      for (size_t row = 0; row < n * n; ++row) {
        Scalar acc(f);
        for (size_t k = 0; k < n * n; ++k)
          if (linv[row][k] != 0 && !rhs[k].is_zero())
            acc -= rhs[k] * linv[row][k];
        if (!acc.is_zero())
          x(row / n, row % n) += LaurentPoly(acc, e);
      }
    }
    PolyMatrix v = PolyMatrix::identity(f, n) + x;
    PolyMatrix vinv = PolyMatrix::identity(f, n);
    PolyMatrix term = PolyMatrix::identity(f, n);
    PolyMatrix negx = -x;
    while (true) {
      term = drop(term * negx, r1, r2, out.cap, dropped);
      if (term.is_zero())
        break;
      vinv += term;
    }
    cur = drop(vinv * (cur * v + derive(v, Derivation::t_ddt)), r1, r2, out.cap, dropped);
    out.gauge = drop(out.gauge * v, r1, r2, out.cap, dropped);
    ++out.iterations;
    ExtQ res = interval_val(nonconstant_part(cur), r1, r2);
    if (res.is_inf() && dropped)
      res = out.cap;
    out.residuals.push_back(res);
    if (res.is_inf() || res >= out.cap)
      break;
  }
  out.matrix = cur;
  return out;
}

} // namespace convlab
