#ifndef CONVLAB_FIELD_HPP
#define CONVLAB_FIELD_HPP

#include "convlab/rational.hpp"

#include <string>

namespace convlab {

// The two concrete base fields: Q with the p-adic valuation, or Q((u)) with the
// u-adic valuation and a working series precision.
class FieldMode {
public:
  enum class Kind { padic, eqchar0 };

  static FieldMode padic(long p);
  static FieldMode eqchar0(long prec);

  Kind kind() const { return kind_; }
  bool is_padic() const { return kind_ == Kind::padic; }
  long p() const { return p_; }
  long prec() const { return prec_; }

  // Valuation of omega: 1/(p-1) in p-adic mode, 0 otherwise.
  Q c_omega() const;

  std::string str() const;

  friend bool operator==(const FieldMode& a, const FieldMode& b) {
    return a.kind_ == b.kind_ && a.p_ == b.p_ && a.prec_ == b.prec_;
  }

private:
  FieldMode(Kind k, long p, long prec) : kind_(k), p_(p), prec_(prec) {}
  Kind kind_;
  long p_;
  long prec_;
};

} // namespace convlab

#endif
