#ifndef CONVLAB_LAURENT_HPP
#define CONVLAB_LAURENT_HPP

#include "convlab/scalar.hpp"

#include <climits>
#include <optional>
#include <string>
#include <vector>

namespace convlab {

enum class Derivation { ddt, t_ddt };

const char* derivation_name(Derivation d);

// Finite Laurent polynomial sum c_n t^n over the base field. Terms are kept
// sorted by exponent with no exact-zero coefficients. An optional truncation
// order T marks the polynomial as known only modulo t^T.
class LaurentPoly {
public:
  using Term = std::pair<long, Scalar>;
  static constexpr long no_trunc = LONG_MAX;

  explicit LaurentPoly(const FieldMode& f) : field_(f) {}
  LaurentPoly(const Scalar& c, long e = 0);
  static LaurentPoly constant(const FieldMode& f, const Q& c) { return LaurentPoly(Scalar(f, c)); }
  static LaurentPoly monomial(const FieldMode& f, const Q& c, long e) { return LaurentPoly(Scalar(f, c), e); }
  static LaurentPoly from_terms(const FieldMode& f, std::vector<Term> terms, long trunc = no_trunc);

  const FieldMode& field() const { return field_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_monomial() const { return terms_.size() == 1; }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first == 0); }
  long min_exp() const;
  long max_exp() const;
  Scalar coeff(long e) const;

  std::optional<long> trunc_order() const;
  LaurentPoly truncated(long order) const;
  LaurentPoly without_trunc() const;

  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  LaurentPoly& operator*=(const Scalar& c);
  LaurentPoly& operator*=(const Q& c);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator*(LaurentPoly a, const Scalar& c) { return a *= c; }
  friend LaurentPoly operator*(LaurentPoly a, const Q& c) { return a *= c; }
  // Multiplication by t^k.
  LaurentPoly shift(long k) const;

  // Drop every term whose Gauss valuation at all r in [r1, r2] is at least cap.
  // Returns true through *dropped when something was removed.
  LaurentPoly drop_above(const Q& r1, const Q& r2, const ExtQ& cap, bool* dropped = nullptr) const;

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b);
  friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

  std::string str() const;

private:
  void normalize();
  FieldMode field_;
  std::vector<Term> terms_;
  long trunc_ = no_trunc;
};

// min_n val(c_n) + n r; +inf for the zero polynomial.
ExtQ gauss_val(const LaurentPoly& f, const Q& r);
// Minimum of gauss_val over [r1, r2], attained at an endpoint.
ExtQ interval_gauss_val(const LaurentPoly& f, const Q& r1, const Q& r2);
LaurentPoly derive(const LaurentPoly& f, Derivation d);
// a / b when b divides a in the Laurent ring; throws domain otherwise.
LaurentPoly exact_div(const LaurentPoly& a, const LaurentPoly& b);

} // namespace convlab

#endif
