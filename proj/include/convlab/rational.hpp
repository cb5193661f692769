#ifndef CONVLAB_RATIONAL_HPP
#define CONVLAB_RATIONAL_HPP

#include <gmpxx.h>

#include <compare>
#include <string>
#include <string_view>

namespace convlab {

using Q = mpq_class;
using Z = mpz_class;

// Canonical num/den; the two-argument mpq_class constructor does not reduce.
inline Q qq(long num, long den = 1) {
  Q q(num, den);
  q.canonicalize();
  return q;
}

Q parse_q(std::string_view s);
std::string q_str(const Q& q);

Z q_floor(const Q& q);
Z q_ceil(const Q& q);
bool q_is_integer(const Q& q);
Q q_abs(const Q& q);

// Exponent of p in a nonzero rational.
long padic_val(const Q& q, unsigned long p);
long padic_val(const Z& z, unsigned long p);
// Exponent of p in k!.
long factorial_val(long k, unsigned long p);

bool is_prime(long n);

// A rational extended by -inf and +inf.
class ExtQ {
public:
  enum class Kind { neg_inf, finite, pos_inf };

  ExtQ() : kind_(Kind::finite) {}
  ExtQ(const Q& v) : kind_(Kind::finite), v_(v) { v_.canonicalize(); }
  ExtQ(long v) : kind_(Kind::finite), v_(v) {}

  static ExtQ inf() { return ExtQ(Kind::pos_inf); }
  static ExtQ neg_inf() { return ExtQ(Kind::neg_inf); }

  Kind kind() const { return kind_; }
  bool finite() const { return kind_ == Kind::finite; }
  bool is_inf() const { return kind_ == Kind::pos_inf; }
  bool is_neg_inf() const { return kind_ == Kind::neg_inf; }
  const Q& value() const;

  friend ExtQ operator+(const ExtQ& a, const ExtQ& b);
  friend ExtQ operator-(const ExtQ& a);
  friend ExtQ operator-(const ExtQ& a, const ExtQ& b) { return a + (-b); }
  friend ExtQ operator*(const ExtQ& a, const Q& s);
  friend bool operator==(const ExtQ& a, const ExtQ& b);
  friend std::strong_ordering operator<=>(const ExtQ& a, const ExtQ& b);

  std::string str() const;
  static ExtQ parse(std::string_view s);

private:
  explicit ExtQ(Kind k) : kind_(k) {}
  Kind kind_;
  Q v_;
};

ExtQ min(const ExtQ& a, const ExtQ& b);
ExtQ max(const ExtQ& a, const ExtQ& b);

} // namespace convlab

#endif
