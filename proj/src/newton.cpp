#include "convlab/newton.hpp"

#include "convlab/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>

namespace convlab {

long NewtonPolygon::degree() const {
  long d = 0;
  for (const auto& s : segments)
    d += s.mult;
  return d;
}

NewtonPolygon newton_polygon_from_vals(const std::vector<ExtQ>& vals) {
  long n = static_cast<long>(vals.size()) - 1;
  if (n < 0)
    fail(Errc::degenerate_input, "empty coefficient list");
  long first = -1;
  for (long i = 0; i <= n; ++i)
    if (!vals[static_cast<size_t>(i)].is_inf()) {
      first = i;
      break;
    }
  if (first < 0)
    fail(Errc::degenerate_input, "zero polynomial");
  if (vals[static_cast<size_t>(n)].is_inf())
    fail(Errc::degenerate_input, "leading coefficient vanishes at the Gauss point");

  struct Pt {
    long x;
    Q y;
  };
  std::vector<Pt> hull;
  for (long i = first; i <= n; ++i) {
    const ExtQ& v = vals[static_cast<size_t>(i)];
    if (v.is_inf())
      continue;
    Pt c{i, v.value()};
    while (hull.size() >= 2) {
      const Pt& a = hull[hull.size() - 2];
      const Pt& b = hull[hull.size() - 1];
      Q cross = Q(b.x - a.x) * (c.y - a.y) - (b.y - a.y) * Q(c.x - a.x);
      if (cross > 0)
        break;
      hull.pop_back();
    }
    hull.push_back(c);
  }
  NewtonPolygon np;
  for (size_t k = hull.size(); k-- > 1;) {
    const Pt& a = hull[k - 1];
    const Pt& b = hull[k];
    Q slope = (b.y - a.y) / Q(b.x - a.x);
    np.segments.push_back({ExtQ(Q(-slope)), b.x - a.x});
  }
  // Segments were emitted right to left, so root valuations increase already.
  if (first > 0)
    np.segments.push_back({ExtQ::inf(), first});
  return np;
}

NewtonPolygon newton_polygon(const std::vector<LaurentPoly>& coeffs, const Q& r) {
  std::vector<ExtQ> vals;
  vals.reserve(coeffs.size());
  for (const auto& c : coeffs)
    vals.push_back(gauss_val(c, r));
  return newton_polygon_from_vals(vals);
}

NewtonPolygon merge(const NewtonPolygon& a, const NewtonPolygon& b) {
  std::map<ExtQ, long> acc;
  for (const auto& s : a.segments)
    acc[s.root_val] += s.mult;
  for (const auto& s : b.segments)
    acc[s.root_val] += s.mult;
  NewtonPolygon out;
  for (const auto& [v, m] : acc)
    out.segments.push_back({v, m});
  return out;
}

std::vector<LaurentPoly> poly_mul(const std::vector<LaurentPoly>& a, const std::vector<LaurentPoly>& b) {
  if (a.empty() || b.empty())
    return {};
  const FieldMode& f = a[0].field();
  std::vector<LaurentPoly> out(a.size() + b.size() - 1, LaurentPoly(f));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero())
      continue;
    for (size_t j = 0; j < b.size(); ++j)
      if (!b[j].is_zero())
        out[i + j] += a[i] * b[j];
  }
  return out;
}

namespace {

using TPoly = std::vector<LaurentPoly>;

// Valuation of sum b_i T^i with T of valuation cut.
ExtQ weighted_val(const TPoly& p, const Q& r, const Q& cut) {
  ExtQ best = ExtQ::inf();
  for (size_t i = 0; i < p.size(); ++i)
    best = min(best, gauss_val(p[i], r) + ExtQ(Q(cut * static_cast<long>(i))));
  return best;
}

// Drop terms of Gauss valuation >= cap at r. In p-adic mode the surviving
// coefficients are also rounded modulo the cap so that heights stay bounded
// across Hensel steps.
LaurentPoly round_to(const LaurentPoly& f, const Q& r, const ExtQ& cap) {
  if (!f.field().is_padic() || cap.is_inf())
    return f.drop_above(r, r, cap);
  unsigned long p = static_cast<unsigned long>(f.field().p());
  std::vector<LaurentPoly::Term> out;
  for (const auto& t : f.terms()) {
    const Q& c = t.second.padic_value();
    long v = padic_val(c, p);
    Z room = q_ceil(cap.value() - r * t.first - v);
    if (room <= 0)
      continue;
    Z mod;
    mpz_ui_pow_ui(mod.get_mpz_t(), p, room.get_ui());
    Z pv;
    mpz_ui_pow_ui(pv.get_mpz_t(), p, static_cast<unsigned long>(std::labs(v)));
    Q unit = v >= 0 ? Q(c / pv) : Q(c * pv);
    Z num = unit.get_num(), den = unit.get_den(), inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
    Z res = num * inv;
    mpz_mod(res.get_mpz_t(), res.get_mpz_t(), mod.get_mpz_t());
    if (2 * res > mod)
      res -= mod;
    Q rounded = v >= 0 ? Q(res * pv) : Q(res) / Q(pv);
    out.emplace_back(t.first, Scalar(f.field(), rounded));
  }
  return LaurentPoly::from_terms(f.field(), std::move(out), f.trunc_order().value_or(LaurentPoly::no_trunc));
}

// Remove terms of coefficient i whose weighted valuation reaches cap.
void drop_weighted(TPoly& p, const Q& r, const Q& cut, const ExtQ& cap) {
  for (size_t i = 0; i < p.size(); ++i) {
    ExtQ shifted = cap - ExtQ(Q(cut * static_cast<long>(i)));
    p[i] = round_to(p[i], r, shifted);
  }
}

void trim(TPoly& p) {
  while (!p.empty() && p.back().is_zero())
    p.pop_back();
}

} // namespace

SlopeSplit split_by_slope(const std::vector<LaurentPoly>& coeffs, const Q& r, const Q& cut, long precision) {
  if (coeffs.empty())
    fail(Errc::degenerate_input, "empty coefficient list");
  if (precision <= 0)
    fail(Errc::parameter, "precision must be positive");
  const FieldMode& f = coeffs[0].field();
  long n = static_cast<long>(coeffs.size()) - 1;
  if (!(coeffs.back() == LaurentPoly::constant(f, Q(1))))
    fail(Errc::normalization, "split_by_slope needs a monic polynomial");
  NewtonPolygon np = newton_polygon(coeffs, r);
  long k = 0;
  for (const auto& s : np.segments) {
    if (s.root_val == ExtQ(cut))
      fail(Errc::slope_collision, "cut " + q_str(cut) + " is a root valuation");
    if (s.root_val > ExtQ(cut))
      k += s.mult;
  }
  SlopeSplit out;
  LaurentPoly one = LaurentPoly::constant(f, Q(1));
  if (k == 0 || k == n) {
    out.low = k == 0 ? coeffs : TPoly{one};
    out.high = k == 0 ? TPoly{one} : coeffs;
    out.residual_val = ExtQ::inf();
    out.target_val = ExtQ::inf();
    return out;
  }

  const LaurentPoly& g = coeffs[static_cast<size_t>(k)];
  ExtQ wg = gauss_val(g, r);
  // The vertex coefficient must have a unique dominant monomial at r so that
  // its inverse expands as a Laurent series converging at the Gauss point.
  long dominant = 0;
  LaurentPoly mono(f);
  for (const auto& t : g.terms())
    if (t.second.val() + ExtQ(Q(r * t.first)) == wg) {
      ++dominant;
      mono = LaurentPoly(t.second, t.first);
    }
  if (dominant != 1)
    fail(Errc::normalization, "vertex coefficient " + g.str() + " has no unique dominant term at r = " + q_str(r));

  ExtQ V = wg + ExtQ(Q(cut * k));
  ExtQ target = V + ExtQ(Q(precision));
  Q gap_bound(0);
  bool have_gap = false;
  for (long i = 0; i <= n; ++i) {
    if (i == k)
      continue;
    ExtQ wi = gauss_val(coeffs[static_cast<size_t>(i)], r) + ExtQ(Q(cut * i));
    if (wi.is_inf())
      continue;
    Q gi = (wi - V).value();
    if (!have_gap || gi < gap_bound)
      gap_bound = gi;
    have_gap = true;
  }

  // 1/g = mono^{-1} * sum (-eps)^j with eps = (g - mono)/mono.
  Scalar mono_c = mono.terms()[0].second;
  long mono_e = mono.terms()[0].first;
  LaurentPoly mono_inv(mono_c.inv(), -mono_e);
  LaurentPoly eps = (g - mono) * mono_inv;
  ExtQ series_cap = ExtQ(Q(precision));
  LaurentPoly ginv = one;
  LaurentPoly term = one;
  for (;;) {
    term = round_to(term * -eps, r, series_cap);
    if (term.is_zero())
      break;
    ginv += term;
  }
  ginv = ginv * mono_inv;

  TPoly G(coeffs.begin() + k, coeffs.end());
  TPoly H(static_cast<size_t>(k + 1), LaurentPoly(f));
  H[static_cast<size_t>(k)] = one;
  ExtQ cap_h = target - wg;
  ExtQ cap_g = target - ExtQ(Q(cut * k));

  long max_iter = 4;
  if (have_gap && gap_bound > 0)
    max_iter += static_cast<long>(q_ceil(Q(precision) / gap_bound).get_si());
  ExtQ resid;
  long it = 0;
  for (;; ++it) {
    TPoly E = coeffs;
    TPoly GH = poly_mul(G, H);
    for (size_t i = 0; i < GH.size(); ++i)
      E[i] -= GH[i];
    resid = weighted_val(E, r, cut);
    if (resid >= target || it >= max_iter)
      break;
    TPoly Qp(E.begin() + std::min<long>(k, static_cast<long>(E.size())), E.end());
    for (size_t i = 0; i < Qp.size() && i < G.size(); ++i)
      G[i] += Qp[i];
    for (long i = 0; i < k && i < static_cast<long>(E.size()); ++i)
      H[static_cast<size_t>(i)] += E[static_cast<size_t>(i)] * ginv;
    drop_weighted(G, r, cut, cap_g);
    drop_weighted(H, r, cut, cap_h);
    G.back() = one;
    H.back() = one;
  }
  trim(G);
  trim(H);
  out.low = std::move(G);
  out.high = std::move(H);
  out.residual_val = resid;
  out.target_val = target;
  out.iterations = it;
  return out;
}

} // namespace convlab
