#include "convlab/scalar.hpp"

#include "convlab/errors.hpp"

#include <algorithm>

namespace convlab {

FieldMode FieldMode::padic(long p) {
  if (!is_prime(p))
    fail(Errc::non_prime, "p = " + std::to_string(p) + " is not prime");
  return FieldMode(Kind::padic, p, 0);
}

FieldMode FieldMode::eqchar0(long prec) {
  if (prec <= 0)
    fail(Errc::parameter, "eqchar0 precision must be positive");
  return FieldMode(Kind::eqchar0, 0, prec);
}

Q FieldMode::c_omega() const { return is_padic() ? Q(1, p_ - 1) : Q(0); }

std::string FieldMode::str() const {
  return is_padic() ? "padic(p=" + std::to_string(p_) + ")" : "eqchar0(prec=" + std::to_string(prec_) + ")";
}

namespace {

long sat_add(long a, long b) {
  if (a == Scalar::exact_prec || b == Scalar::exact_prec)
    return Scalar::exact_prec;
  return a + b;
}

} // namespace

Scalar::Scalar(const FieldMode& f) : field_(f) {}

Scalar::Scalar(const FieldMode& f, const Q& c) : field_(f) {
  if (f.is_padic()) {
    q_ = c;
    q_.canonicalize();
  } else if (c != 0) {
    terms_.emplace_back(0, c);
    terms_.back().second.canonicalize();
  }
}

Scalar Scalar::u_monomial(const FieldMode& f, const Q& c, long e) {
  if (f.is_padic())
    fail(Errc::mode_mismatch, "u-monomial in p-adic mode");
  Scalar s(f);
  if (c != 0) {
    s.terms_.emplace_back(e, c);
    s.terms_.back().second.canonicalize();
  }
  return s;
}

Scalar Scalar::u_series(const FieldMode& f, std::vector<Term> terms, long prec) {
  if (f.is_padic())
    fail(Errc::mode_mismatch, "u-series in p-adic mode");
  Scalar s(f);
  s.terms_ = std::move(terms);
  for (auto& t : s.terms_)
    t.second.canonicalize();
  s.prec_ = prec;
  s.normalize();
  return s;
}

void Scalar::normalize() {
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (auto& t : terms_) {
    if (t.first >= prec_)
      break;
    if (!out.empty() && out.back().first == t.first)
      out.back().second += t.second;
    else
      out.push_back(std::move(t));
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const Term& t) { return t.second == 0; }), out.end());
  terms_ = std::move(out);
}

void Scalar::check_same(const Scalar& o) const {
  if (!(field_ == o.field_))
    fail(Errc::mode_mismatch, "scalars from " + field_.str() + " and " + o.field_.str());
}

bool Scalar::is_zero() const {
  if (field_.is_padic())
    return q_ == 0;
  return terms_.empty() && prec_ == exact_prec;
}

bool Scalar::is_indeterminate() const { return !field_.is_padic() && terms_.empty() && prec_ != exact_prec; }

bool Scalar::is_one() const {
  if (field_.is_padic())
    return q_ == 1;
  return is_exact() && terms_.size() == 1 && terms_[0].first == 0 && terms_[0].second == 1;
}

ExtQ Scalar::val() const {
  if (field_.is_padic()) {
    if (q_ == 0)
      return ExtQ::inf();
    return ExtQ(Q(padic_val(q_, static_cast<unsigned long>(field_.p()))));
  }
  if (!terms_.empty())
    return ExtQ(Q(terms_[0].first));
  if (prec_ == exact_prec)
    return ExtQ::inf();
  fail(Errc::precision_exhausted, "valuation of O(u^" + std::to_string(prec_) + ")");
}

ExtQ Scalar::val_lower_bound() const {
  if (is_indeterminate())
    return ExtQ(Q(prec_));
  return val();
}

bool Scalar::is_rational() const {
  if (field_.is_padic())
    return true;
  return is_exact() && (terms_.empty() || (terms_.size() == 1 && terms_[0].first == 0));
}

Q Scalar::rational() const {
  if (field_.is_padic())
    return q_;
  if (!is_rational())
    fail(Errc::domain, "u-series " + str() + " is not a rational constant");
  return terms_.empty() ? Q(0) : terms_[0].second;
}

Q Scalar::leading_coeff() const {
  if (field_.is_padic())
    return q_;
  if (terms_.empty())
    fail(Errc::precision_exhausted, "leading coefficient of " + str());
  return terms_[0].second;
}

Q Scalar::residue() const {
  if (field_.is_padic())
    fail(Errc::mode_mismatch, "residue map is only available in eqchar0 mode");
  if (prec_ <= 0)
    fail(Errc::precision_exhausted, "residue of " + str());
  Q r(0);
  for (const auto& t : terms_) {
    if (t.first < 0)
      fail(Errc::domain, "residue of an element of negative valuation");
    if (t.first == 0)
      r = t.second;
  }
  return r;
}

Scalar Scalar::operator-() const {
  Scalar s(*this);
  if (field_.is_padic())
    s.q_ = -q_;
  else
    for (auto& t : s.terms_)
      t.second = -t.second;
  return s;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  check_same(o);
  if (field_.is_padic()) {
    q_ += o.q_;
    return *this;
  }
  prec_ = std::min(prec_, o.prec_);
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  normalize();
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Q& c) {
  if (field_.is_padic()) {
    q_ *= c;
    return *this;
  }
  if (c == 0) {
    terms_.clear();
    prec_ = exact_prec;
    return *this;
  }
  for (auto& t : terms_)
    t.second *= c;
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  check_same(o);
  if (field_.is_padic()) {
    q_ *= o.q_;
    return *this;
  }
  if (is_zero() || o.is_zero()) {
    terms_.clear();
    prec_ = exact_prec;
    return *this;
  }
  long va = terms_.empty() ? prec_ : terms_[0].first;
  long vb = o.terms_.empty() ? o.prec_ : o.terms_[0].first;
  long prec = std::min(sat_add(prec_, vb), sat_add(o.prec_, va));
  std::vector<Term> out;
  out.reserve(terms_.size() * o.terms_.size());
  for (const auto& a : terms_)
    for (const auto& b : o.terms_)
      if (a.first + b.first < prec)
        out.emplace_back(a.first + b.first, a.second * b.second);
  terms_ = std::move(out);
  prec_ = prec;
  normalize();
  return *this;
}

Scalar Scalar::inv() const {
  if (field_.is_padic()) {
    if (q_ == 0)
      fail(Errc::division_by_zero, "inverse of zero");
    Scalar s(field_);
    s.q_ = 1 / q_;
    return s;
  }
  if (is_zero())
    fail(Errc::division_by_zero, "inverse of zero");
  if (terms_.empty())
    fail(Errc::precision_exhausted, "inverse of " + str());
  long v = terms_[0].first;
  const Q& c = terms_[0].second;
  if (is_exact() && terms_.size() == 1)
    return u_monomial(field_, 1 / c, -v);
  long rel = field_.prec();
  if (!is_exact())
    rel = std::min(rel, prec_ - v);
  std::vector<Q> b(static_cast<size_t>(rel));
  for (const auto& t : terms_)
    if (t.first - v < rel)
      b[static_cast<size_t>(t.first - v)] = t.second;
  std::vector<Q> g(static_cast<size_t>(rel));
  Q cinv = 1 / c;
  g[0] = cinv;
  for (long k = 1; k < rel; ++k) {
    Q acc(0);
    for (long j = 1; j <= k; ++j)
      if (b[static_cast<size_t>(j)] != 0)
        acc += b[static_cast<size_t>(j)] * g[static_cast<size_t>(k - j)];
    g[static_cast<size_t>(k)] = -cinv * acc;
  }
  std::vector<Term> out;
  for (long k = 0; k < rel; ++k)
    if (g[static_cast<size_t>(k)] != 0)
      out.emplace_back(k - v, g[static_cast<size_t>(k)]);
  return u_series(field_, std::move(out), rel - v);
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (!(a.field_ == b.field_))
    return false;
  if (a.field_.is_padic())
    return a.q_ == b.q_;
  return a.prec_ == b.prec_ && a.terms_ == b.terms_;
}

std::string Scalar::str() const {
  if (field_.is_padic())
    return q_str(q_);
  if (is_rational())
    return q_str(rational());
  std::string s;
  for (const auto& t : terms_) {
    if (!s.empty())
      s += " + ";
    s += q_str(t.second);
    if (t.first != 0)
      s += "*u^" + std::to_string(t.first);
  }
  if (!is_exact()) {
    if (!s.empty())
      s += " + ";
    s += "O(u^" + std::to_string(prec_) + ")";
  }
  return s.empty() ? "0" : s;
}

} // namespace convlab
