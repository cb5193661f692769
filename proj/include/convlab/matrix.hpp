#ifndef CONVLAB_MATRIX_HPP
#define CONVLAB_MATRIX_HPP

#include "convlab/laurent.hpp"

#include <vector>

namespace convlab {

// Dense matrix of Laurent polynomials, row-major.
class PolyMatrix {
public:
  PolyMatrix(const FieldMode& f, size_t rows, size_t cols);
  explicit PolyMatrix(const FieldMode& f) : PolyMatrix(f, 0, 0) {}
  static PolyMatrix identity(const FieldMode& f, size_t n);

  const FieldMode& field() const { return field_; }
  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  LaurentPoly& operator()(size_t i, size_t j) { return a_[i * cols_ + j]; }
  const LaurentPoly& operator()(size_t i, size_t j) const { return a_[i * cols_ + j]; }

  std::vector<LaurentPoly> column(size_t j) const;
  void set_column(size_t j, const std::vector<LaurentPoly>& v);

  bool is_zero() const;
  // True when every entry is a constant (no t-dependence).
  bool is_constant() const;
  // Minimum Gauss valuation of the entries at r.
  ExtQ gauss_val(const Q& r) const;

  PolyMatrix transpose() const;
  PolyMatrix operator-() const;
  PolyMatrix& operator+=(const PolyMatrix& o);
  PolyMatrix& operator-=(const PolyMatrix& o);
  friend PolyMatrix operator+(PolyMatrix a, const PolyMatrix& b) { return a += b; }
  friend PolyMatrix operator-(PolyMatrix a, const PolyMatrix& b) { return a -= b; }
  friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b);
  friend PolyMatrix operator*(PolyMatrix a, const LaurentPoly& c);
  std::vector<LaurentPoly> apply(const std::vector<LaurentPoly>& v) const;

  friend bool operator==(const PolyMatrix& a, const PolyMatrix& b);
  friend bool operator!=(const PolyMatrix& a, const PolyMatrix& b) { return !(a == b); }

  std::string str() const;

private:
  FieldMode field_;
  size_t rows_, cols_;
  std::vector<LaurentPoly> a_;
};

PolyMatrix derive(const PolyMatrix& m, Derivation d);
PolyMatrix kron(const PolyMatrix& a, const PolyMatrix& b);
PolyMatrix block_diag(const PolyMatrix& a, const PolyMatrix& b);

// Fraction-free determinant (Bareiss).
LaurentPoly determinant(const PolyMatrix& a);

// A * num = den * B with den = det(A) up to sign. Throws singular_gauge when A
// is singular.
struct FracSolution {
  PolyMatrix num;
  LaurentPoly den;
};
FracSolution solve(const PolyMatrix& a, const PolyMatrix& b);

// Inverse over the Laurent ring; requires det(A) to be a monomial.
PolyMatrix inverse(const PolyMatrix& a);

} // namespace convlab

#endif
