#include "convlab/laurent.hpp"

#include "convlab/errors.hpp"

#include <algorithm>

namespace convlab {

const char* derivation_name(Derivation d) { return d == Derivation::ddt ? "ddt" : "t_ddt"; }

LaurentPoly::LaurentPoly(const Scalar& c, long e) : field_(c.field()) {
  if (!c.is_zero())
    terms_.emplace_back(e, c);
}

LaurentPoly LaurentPoly::from_terms(const FieldMode& f, std::vector<Term> terms, long trunc) {
  LaurentPoly p(f);
  p.terms_ = std::move(terms);
  p.trunc_ = trunc;
  for (const auto& t : p.terms_)
    if (!(t.second.field() == f))
      fail(Errc::mode_mismatch, "coefficient field differs from polynomial field");
  p.normalize();
  return p;
}

void LaurentPoly::normalize() {
  std::stable_sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (auto& t : terms_) {
    if (t.first >= trunc_)
      break;
    if (!out.empty() && out.back().first == t.first)
      out.back().second += t.second;
    else
      out.push_back(std::move(t));
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const Term& t) { return t.second.is_zero(); }), out.end());
  terms_ = std::move(out);
}

long LaurentPoly::min_exp() const {
  if (terms_.empty())
    fail(Errc::domain, "min_exp of the zero polynomial");
  return terms_.front().first;
}

long LaurentPoly::max_exp() const {
  if (terms_.empty())
    fail(Errc::domain, "max_exp of the zero polynomial");
  return terms_.back().first;
}

Scalar LaurentPoly::coeff(long e) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), e, [](const Term& t, long x) { return t.first < x; });
  if (it != terms_.end() && it->first == e)
    return it->second;
  return Scalar(field_);
}

std::optional<long> LaurentPoly::trunc_order() const {
  if (trunc_ == no_trunc)
    return std::nullopt;
  return trunc_;
}

LaurentPoly LaurentPoly::truncated(long order) const {
  LaurentPoly p(*this);
  p.trunc_ = std::min(trunc_, order);
  p.normalize();
  return p;
}

LaurentPoly LaurentPoly::without_trunc() const {
  LaurentPoly p(*this);
  p.trunc_ = no_trunc;
  return p;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly p(*this);
  for (auto& t : p.terms_)
    t.second = -t.second;
  return p;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  if (!(field_ == o.field_))
    fail(Errc::mode_mismatch, "adding polynomials over different fields");
  trunc_ = std::min(trunc_, o.trunc_);
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  normalize();
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) { return *this += -o; }

LaurentPoly& LaurentPoly::operator*=(const Scalar& c) {
  for (auto& t : terms_)
    t.second *= c;
  if (c.is_zero())
    trunc_ = no_trunc;
  normalize();
  return *this;
}

LaurentPoly& LaurentPoly::operator*=(const Q& c) {
  for (auto& t : terms_)
    t.second *= c;
  if (c == 0)
    trunc_ = no_trunc;
  normalize();
  return *this;
}

namespace {

long sat_add(long a, long b) {
  if (a == LaurentPoly::no_trunc || b == LaurentPoly::no_trunc)
    return LaurentPoly::no_trunc;
  return a + b;
}

long low_degree(const LaurentPoly& p) {
  if (!p.is_zero())
    return p.min_exp();
  return p.trunc_order().value_or(LaurentPoly::no_trunc);
}

} // namespace

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  if (!(a.field_ == b.field_))
    fail(Errc::mode_mismatch, "multiplying polynomials over different fields");
  LaurentPoly out(a.field_);
  if ((a.is_zero() && a.trunc_ == LaurentPoly::no_trunc) || (b.is_zero() && b.trunc_ == LaurentPoly::no_trunc))
    return out;
  out.trunc_ = std::min(sat_add(a.trunc_, low_degree(b)), sat_add(b.trunc_, low_degree(a)));
  if (a.is_zero() || b.is_zero())
    return out;
  long lo = a.min_exp() + b.min_exp();
  long hi = a.max_exp() + b.max_exp();
  long span = hi - lo + 1;
  size_t work = a.terms_.size() * b.terms_.size();
  if (a.field_.is_padic() && static_cast<size_t>(span) <= 4 * work + 64) {
    std::vector<Q> acc(static_cast<size_t>(span));
    std::vector<char> hit(static_cast<size_t>(span), 0);
    Q prod;
    for (const auto& x : a.terms_) {
      const Q& qx = x.second.padic_value();
      for (const auto& y : b.terms_) {
        size_t k = static_cast<size_t>(x.first + y.first - lo);
        mpq_mul(prod.get_mpq_t(), qx.get_mpq_t(), y.second.padic_value().get_mpq_t());
        acc[k] += prod;
        hit[k] = 1;
      }
    }
    out.terms_.reserve(static_cast<size_t>(span));
    for (long k = 0; k < span; ++k) {
      size_t i = static_cast<size_t>(k);
      if (hit[i] && acc[i] != 0 && lo + k < out.trunc_)
        out.terms_.emplace_back(lo + k, Scalar(a.field_, acc[i]));
    }
    return out;
  }
  out.terms_.reserve(work);
  for (const auto& x : a.terms_)
    for (const auto& y : b.terms_)
      out.terms_.emplace_back(x.first + y.first, x.second * y.second);
  out.normalize();
  return out;
}

LaurentPoly LaurentPoly::shift(long k) const {
  LaurentPoly p(*this);
  for (auto& t : p.terms_)
    t.first += k;
  if (p.trunc_ != no_trunc)
    p.trunc_ += k;
  return p;
}

LaurentPoly LaurentPoly::drop_above(const Q& r1, const Q& r2, const ExtQ& cap, bool* dropped) const {
  LaurentPoly p(field_);
  p.trunc_ = trunc_;
  for (const auto& t : terms_) {
    ExtQ v = t.second.val_lower_bound();
    ExtQ w = v + ExtQ(min(ExtQ(Q(r1 * t.first)), ExtQ(Q(r2 * t.first))));
    if (w >= cap) {
      if (dropped)
        *dropped = true;
      continue;
    }
    p.terms_.push_back(t);
  }
  return p;
}

bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
  return a.field_ == b.field_ && a.trunc_ == b.trunc_ && a.terms_.size() == b.terms_.size() &&
         std::equal(a.terms_.begin(), a.terms_.end(), b.terms_.begin(),
                    [](const LaurentPoly::Term& x, const LaurentPoly::Term& y) {
                      return x.first == y.first && x.second == y.second;
                    });
}

std::string LaurentPoly::str() const {
  std::string s;
  for (const auto& t : terms_) {
    if (!s.empty())
      s += " + ";
    std::string c = t.second.str();
    bool compound = c.find(' ') != std::string::npos;
    if (compound)
      c = "(" + c + ")";
    s += c;
    if (t.first != 0)
      s += "*t^" + std::to_string(t.first);
  }
  if (trunc_ != no_trunc) {
    if (!s.empty())
      s += " + ";
    s += "O(t^" + std::to_string(trunc_) + ")";
  }
  return s.empty() ? "0" : s;
}

ExtQ gauss_val(const LaurentPoly& f, const Q& r) {
  ExtQ best = ExtQ::inf();
  ExtQ undetermined = ExtQ::inf();
  for (const auto& t : f.terms()) {
    ExtQ shift(Q(r * t.first));
    if (t.second.is_indeterminate())
      undetermined = min(undetermined, t.second.val_lower_bound() + shift);
    else
      best = min(best, t.second.val() + shift);
  }
  if (undetermined <= best && !undetermined.is_inf())
    fail(Errc::precision_exhausted, "Gauss valuation of " + f.str() + " is not determined at r = " + q_str(r));
  return best;
}

ExtQ interval_gauss_val(const LaurentPoly& f, const Q& r1, const Q& r2) {
  if (r1 > r2)
    fail(Errc::interval_order, "r1 = " + q_str(r1) + " exceeds r2 = " + q_str(r2));
  return min(gauss_val(f, r1), gauss_val(f, r2));
}

LaurentPoly derive(const LaurentPoly& f, Derivation d) {
  std::vector<LaurentPoly::Term> out;
  out.reserve(f.terms().size());
  for (const auto& t : f.terms()) {
    if (t.first == 0)
      continue;
    out.emplace_back(d == Derivation::ddt ? t.first - 1 : t.first, t.second * Q(t.first));
  }
  long trunc = f.trunc_order().value_or(LaurentPoly::no_trunc);
  if (trunc != LaurentPoly::no_trunc && d == Derivation::ddt)
    trunc -= 1;
  return LaurentPoly::from_terms(f.field(), std::move(out), trunc);
}

LaurentPoly exact_div(const LaurentPoly& a, const LaurentPoly& b) {
  if (b.is_zero())
    fail(Errc::division_by_zero, "exact_div by zero polynomial");
  if (a.is_zero())
    return LaurentPoly(a.field());
  const FieldMode& f = a.field();
  long la = a.min_exp(), lb = b.min_exp();
  long da = a.max_exp() - la, db = b.max_exp() - lb;
  if (da < db)
    fail(Errc::domain, "exact_div: " + b.str() + " does not divide " + a.str());
  if (b.is_monomial()) {
    Scalar inv = b.terms()[0].second.inv();
    LaurentPoly q = a.shift(-lb);
    return q * inv;
  }
  if (f.is_padic()) {
    std::vector<Q> rem(static_cast<size_t>(da + 1));
    for (const auto& t : a.terms())
      rem[static_cast<size_t>(t.first - la)] = t.second.padic_value();
    std::vector<std::pair<long, Q>> den;
    for (const auto& t : b.terms())
      den.emplace_back(t.first - lb, t.second.padic_value());
    Q lead_inv = 1 / den.back().second;
    std::vector<Q> quo(static_cast<size_t>(da - db + 1));
    Q prod;
    for (long k = da; k >= db; --k) {
      Q& top = rem[static_cast<size_t>(k)];
      if (top == 0)
        continue;
      Q c = top * lead_inv;
      quo[static_cast<size_t>(k - db)] = c;
      for (const auto& d : den) {
        mpq_mul(prod.get_mpq_t(), c.get_mpq_t(), d.second.get_mpq_t());
        rem[static_cast<size_t>(k - db + d.first)] -= prod;
      }
    }
    for (long k = 0; k < db; ++k)
      if (rem[static_cast<size_t>(k)] != 0)
        fail(Errc::domain, "exact_div: " + b.str() + " does not divide " + a.str());
    std::vector<LaurentPoly::Term> terms;
    for (long k = 0; k <= da - db; ++k)
      if (quo[static_cast<size_t>(k)] != 0)
        terms.emplace_back(k + la - lb, Scalar(f, quo[static_cast<size_t>(k)]));
    return LaurentPoly::from_terms(f, std::move(terms));
  }
  std::vector<Scalar> rem(static_cast<size_t>(da + 1), Scalar(f));
  for (const auto& t : a.terms())
    rem[static_cast<size_t>(t.first - la)] = t.second;
  Scalar lead_inv = b.terms().back().second.inv();
  std::vector<LaurentPoly::Term> terms;
  for (long k = da; k >= db; --k) {
    Scalar top = rem[static_cast<size_t>(k)];
    if (top.is_zero())
      continue;
    Scalar c = top * lead_inv;
    terms.emplace_back(k - db + la - lb, c);
    for (const auto& t : b.terms())
      rem[static_cast<size_t>(k - db + t.first - lb)] -= c * t.second;
  }
  for (long k = 0; k < db; ++k)
    if (!rem[static_cast<size_t>(k)].is_zero() && !rem[static_cast<size_t>(k)].is_indeterminate())
      fail(Errc::domain, "exact_div: " + b.str() + " does not divide " + a.str());
  return LaurentPoly::from_terms(f, std::move(terms));
}

} // namespace convlab
