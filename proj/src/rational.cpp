#include "convlab/rational.hpp"

#include "convlab/errors.hpp"

#include <cctype>

namespace convlab {

const char* errc_name(Errc c) {
  switch (c) {
  case Errc::interval_order: return "interval-order";
  case Errc::degenerate_input: return "degenerate-input";
  case Errc::slope_collision: return "slope-collision";
  case Errc::normalization: return "normalization";
  case Errc::precision_exhausted: return "precision-exhausted";
  case Errc::mode_mismatch: return "mode-mismatch";
  case Errc::incompatible: return "incompatible";
  case Errc::singular_gauge: return "singular-gauge";
  case Errc::cyclic_search_failure: return "cyclic-search-failure";
  case Errc::parameter: return "parameter";
  case Errc::index_range: return "index-range";
  case Errc::ambiguous_inversion: return "ambiguous-inversion";
  case Errc::inversion_infeasible: return "inversion-infeasible";
  case Errc::domain: return "domain";
  case Errc::containment: return "containment";
  case Errc::unsupported_point: return "unsupported-point";
  case Errc::not_in_zp: return "not-in-Zp";
  case Errc::size_mismatch: return "size-mismatch";
  case Errc::unsupported_spectrum: return "unsupported-spectrum";
  case Errc::preparedness_violation: return "preparedness-violation";
  case Errc::budget_exhausted: return "budget-exhausted";
  case Errc::hypothesis: return "hypothesis";
  case Errc::irregularity: return "irregularity";
  case Errc::schema: return "schema";
  case Errc::io: return "io";
  case Errc::non_prime: return "non-prime";
  case Errc::pole_conflict: return "pole-conflict";
  case Errc::division_by_zero: return "division-by-zero";
  case Errc::parse: return "parse";
  }
  return "unknown";
}

static bool valid_int(std::string_view s) {
  size_t i = 0;
  if (i < s.size() && (s[i] == '-' || s[i] == '+'))
    ++i;
  if (i == s.size())
    return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      return false;
  return true;
}

Q parse_q(std::string_view s) {
  auto slash = s.find('/');
  std::string_view num = s.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
    fail(Errc::parse, "not a rational: '" + std::string(s) + "'");
  std::string n(num[0] == '+' ? num.substr(1) : num);
  Z zn(n), zd{std::string(den)};
  if (zd == 0)
    fail(Errc::parse, "zero denominator: '" + std::string(s) + "'");
  Q q(zn, zd);
  q.canonicalize();
  return q;
}

std::string q_str(const Q& q) { return q.get_str(); }

Z q_floor(const Q& q) {
  Z r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Z q_ceil(const Q& q) {
  Z r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

bool q_is_integer(const Q& q) { return q.get_den() == 1; }

Q q_abs(const Q& q) { return q < 0 ? Q(-q) : q; }

long padic_val(const Z& z, unsigned long p) {
  if (z == 0)
    fail(Errc::domain, "valuation of zero");
  Z tmp;
  Z pz(p);
  return static_cast<long>(mpz_remove(tmp.get_mpz_t(), z.get_mpz_t(), pz.get_mpz_t()));
}

long padic_val(const Q& q, unsigned long p) {
  if (q == 0)
    fail(Errc::domain, "valuation of zero");
  return padic_val(Z(q.get_num()), p) - padic_val(Z(q.get_den()), p);
}

long factorial_val(long k, unsigned long p) {
  long v = 0;
  long pk = static_cast<long>(p);
  while (k > 0) {
    k /= pk;
    v += k;
  }
  return v;
}

bool is_prime(long n) {
  if (n < 2)
    return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0)
      return false;
  return true;
}

const Q& ExtQ::value() const {
  if (kind_ != Kind::finite)
    fail(Errc::domain, "value() of an infinite quantity");
  return v_;
}

ExtQ operator+(const ExtQ& a, const ExtQ& b) {
  if (a.finite() && b.finite())
    return ExtQ(Q(a.v_ + b.v_));
  if ((a.is_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_inf()))
    fail(Errc::domain, "inf - inf");
  if (a.is_inf() || b.is_inf())
    return ExtQ::inf();
  return ExtQ::neg_inf();
}

ExtQ operator-(const ExtQ& a) {
  if (a.is_inf())
    return ExtQ::neg_inf();
  if (a.is_neg_inf())
    return ExtQ::inf();
  return ExtQ(Q(-a.v_));
}

ExtQ operator*(const ExtQ& a, const Q& s) {
  if (a.finite())
    return ExtQ(Q(a.v_ * s));
  if (s == 0)
    fail(Errc::domain, "inf * 0");
  return (s > 0) == a.is_inf() ? ExtQ::inf() : ExtQ::neg_inf();
}

bool operator==(const ExtQ& a, const ExtQ& b) {
  if (a.kind_ != b.kind_)
    return false;
  return !a.finite() || a.v_ == b.v_;
}

std::strong_ordering operator<=>(const ExtQ& a, const ExtQ& b) {
  if (a.kind_ != b.kind_)
    return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
  if (!a.finite())
    return std::strong_ordering::equal;
  int c = cmp(a.v_, b.v_);
  return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

std::string ExtQ::str() const {
  if (is_inf())
    return "inf";
  if (is_neg_inf())
    return "-inf";
  return q_str(v_);
}

ExtQ ExtQ::parse(std::string_view s) {
  if (s == "inf" || s == "+inf")
    return inf();
  if (s == "-inf")
    return neg_inf();
  return ExtQ(parse_q(s));
}

ExtQ min(const ExtQ& a, const ExtQ& b) { return b < a ? b : a; }
ExtQ max(const ExtQ& a, const ExtQ& b) { return a < b ? b : a; }

} // namespace convlab
