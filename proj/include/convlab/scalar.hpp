#ifndef CONVLAB_SCALAR_HPP
#define CONVLAB_SCALAR_HPP

#include "convlab/field.hpp"

#include <climits>
#include <utility>
#include <vector>

namespace convlab {

// An element of the base field. In p-adic mode this is an exact rational.
// In eqchar0 mode it is a finite Laurent polynomial in u, optionally known
// only modulo u^prec (absolute precision); exact elements have no bound.
class Scalar {
public:
  using Term = std::pair<long, Q>;
  static constexpr long exact_prec = LONG_MAX;

  explicit Scalar(const FieldMode& f);
  Scalar(const FieldMode& f, const Q& c);
  Scalar(const FieldMode& f, long c) : Scalar(f, Q(c)) {}

  // eqchar0 only: c u^e, or an arbitrary list of terms with absolute precision.
  static Scalar u_monomial(const FieldMode& f, const Q& c, long e);
  static Scalar u_series(const FieldMode& f, std::vector<Term> terms, long prec = exact_prec);

  const FieldMode& field() const { return field_; }

  bool is_zero() const;
  bool is_exact() const { return prec_ == exact_prec; }
  // Zero to the known precision without being exactly zero.
  bool is_indeterminate() const;
  bool is_one() const;

  // Exact valuation; +inf for zero. Throws precision_exhausted when undetermined.
  ExtQ val() const;
  // Valuation, or the precision bound when the known part vanishes.
  ExtQ val_lower_bound() const;

  // The rational value (p-adic mode) or the constant term of an exact u-constant.
  bool is_rational() const;
  Q rational() const;
  // Direct access to the p-adic value without copying; p-adic mode only.
  const Q& padic_value() const { return q_; }

  // eqchar0 accessors.
  const std::vector<Term>& terms() const { return terms_; }
  long prec() const { return prec_; }
  // Leading (lowest order) coefficient in eqchar0 mode, the value in p-adic mode.
  Q leading_coeff() const;
  // Reduction: the u^0 coefficient of an element of nonnegative valuation.
  Q residue() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator*=(const Q& c);
  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator*(Scalar a, const Q& c) { return a *= c; }
  Scalar inv() const;
  friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inv(); }

  friend bool operator==(const Scalar& a, const Scalar& b);
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  std::string str() const;

private:
  void check_same(const Scalar& o) const;
  void normalize();

  FieldMode field_;
  Q q_;
  std::vector<Term> terms_;
  long prec_ = exact_prec;
};

} // namespace convlab

#endif
