#include "convlab/matrix.hpp"

#include "convlab/errors.hpp"

#include <utility>

namespace convlab {

PolyMatrix::PolyMatrix(const FieldMode& f, size_t rows, size_t cols)
    : field_(f), rows_(rows), cols_(cols), a_(rows * cols, LaurentPoly(f)) {}

PolyMatrix PolyMatrix::identity(const FieldMode& f, size_t n) {
  PolyMatrix m(f, n, n);
  for (size_t i = 0; i < n; ++i)
    m(i, i) = LaurentPoly::constant(f, 1);
  return m;
}

std::vector<LaurentPoly> PolyMatrix::column(size_t j) const {
  std::vector<LaurentPoly> v;
  v.reserve(rows_);
  for (size_t i = 0; i < rows_; ++i)
    v.push_back((*this)(i, j));
  return v;
}

void PolyMatrix::set_column(size_t j, const std::vector<LaurentPoly>& v) {
  if (v.size() != rows_)
    fail(Errc::size_mismatch, "column length");
  for (size_t i = 0; i < rows_; ++i)
    (*this)(i, j) = v[i];
}

bool PolyMatrix::is_zero() const {
  for (const auto& e : a_)
    if (!e.is_zero())
      return false;
  return true;
}

bool PolyMatrix::is_constant() const {
  for (const auto& e : a_)
    if (!e.is_constant())
      return false;
  return true;
}

ExtQ PolyMatrix::gauss_val(const Q& r) const {
  ExtQ best = ExtQ::inf();
  for (const auto& e : a_)
    best = min(best, convlab::gauss_val(e, r));
  return best;
}

PolyMatrix PolyMatrix::transpose() const {
  PolyMatrix t(field_, cols_, rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j)
      t(j, i) = (*this)(i, j);
  return t;
}

PolyMatrix PolyMatrix::operator-() const {
  PolyMatrix m(*this);
  for (auto& e : m.a_)
    e = -e;
  return m;
}

PolyMatrix& PolyMatrix::operator+=(const PolyMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    fail(Errc::size_mismatch, "matrix sum");
  for (size_t k = 0; k < a_.size(); ++k)
    a_[k] += o.a_[k];
  return *this;
}

PolyMatrix& PolyMatrix::operator-=(const PolyMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_)
    fail(Errc::size_mismatch, "matrix difference");
  for (size_t k = 0; k < a_.size(); ++k)
    a_[k] -= o.a_[k];
  return *this;
}

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.cols_ != b.rows_)
    fail(Errc::size_mismatch, "matrix product");
  PolyMatrix c(a.field_, a.rows_, b.cols_);
  for (size_t i = 0; i < a.rows_; ++i)
    for (size_t k = 0; k < a.cols_; ++k) {
      const LaurentPoly& x = a(i, k);
      if (x.is_zero())
        continue;
      for (size_t j = 0; j < b.cols_; ++j)
        if (!b(k, j).is_zero())
          c(i, j) += x * b(k, j);
    }
  return c;
}

PolyMatrix operator*(PolyMatrix a, const LaurentPoly& c) {
  for (auto& e : a.a_)
    e = e * c;
  return a;
}

std::vector<LaurentPoly> PolyMatrix::apply(const std::vector<LaurentPoly>& v) const {
  if (v.size() != cols_)
    fail(Errc::size_mismatch, "matrix-vector product");
  std::vector<LaurentPoly> out(rows_, LaurentPoly(field_));
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j)
      if (!(*this)(i, j).is_zero() && !v[j].is_zero())
        out[i] += (*this)(i, j) * v[j];
  return out;
}

bool operator==(const PolyMatrix& a, const PolyMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
}

std::string PolyMatrix::str() const {
  std::string s = "[";
  for (size_t i = 0; i < rows_; ++i) {
    s += i ? ", [" : "[";
    for (size_t j = 0; j < cols_; ++j)
      s += (j ? ", " : "") + (*this)(i, j).str();
    s += "]";
  }
  return s + "]";
}

PolyMatrix derive(const PolyMatrix& m, Derivation d) {
  PolyMatrix out(m.field(), m.rows(), m.cols());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j)
      out(i, j) = derive(m(i, j), d);
  return out;
}

PolyMatrix kron(const PolyMatrix& a, const PolyMatrix& b) {
  PolyMatrix k(a.field(), a.rows() * b.rows(), a.cols() * b.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j).is_zero())
        continue;
      for (size_t r = 0; r < b.rows(); ++r)
        for (size_t c = 0; c < b.cols(); ++c)
          if (!b(r, c).is_zero())
            k(i * b.rows() + r, j * b.cols() + c) = a(i, j) * b(r, c);
    }
  return k;
}

PolyMatrix block_diag(const PolyMatrix& a, const PolyMatrix& b) {
  PolyMatrix m(a.field(), a.rows() + b.rows(), a.cols() + b.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j)
      m(i, j) = a(i, j);
  for (size_t i = 0; i < b.rows(); ++i)
    for (size_t j = 0; j < b.cols(); ++j)
      m(a.rows() + i, a.cols() + j) = b(i, j);
  return m;
}

namespace {

// Index of a usable pivot in column k at or below row k: nonzero, fewest terms.
long pick_pivot(const PolyMatrix& m, size_t k) {
  long best = -1;
  size_t best_terms = 0;
  for (size_t i = k; i < m.rows(); ++i) {
    const LaurentPoly& e = m(i, k);
    if (e.is_zero())
      continue;
    if (best < 0 || e.terms().size() < best_terms) {
      best = static_cast<long>(i);
      best_terms = e.terms().size();
    }
  }
  return best;
}

void swap_rows(PolyMatrix& m, size_t a, size_t b) {
  for (size_t j = 0; j < m.cols(); ++j)
    std::swap(m(a, j), m(b, j));
}

} // namespace

LaurentPoly determinant(const PolyMatrix& a) {
  if (!a.square())
    fail(Errc::size_mismatch, "determinant of a non-square matrix");
  const FieldMode& f = a.field();
  size_t n = a.rows();
  if (n == 0)
    return LaurentPoly::constant(f, 1);
  PolyMatrix m(a);
  LaurentPoly prev = LaurentPoly::constant(f, 1);
  bool negate = false;
  for (size_t k = 0; k + 1 < n; ++k) {
    long piv = pick_pivot(m, k);
    if (piv < 0)
      return LaurentPoly(f);
    if (static_cast<size_t>(piv) != k) {
      swap_rows(m, k, static_cast<size_t>(piv));
      negate = !negate;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j)
        m(i, j) = exact_div(m(k, k) * m(i, j) - m(i, k) * m(k, j), prev);
    for (size_t i = k + 1; i < n; ++i)
      m(i, k) = LaurentPoly(f);
    prev = m(k, k);
  }
  LaurentPoly d = m(n - 1, n - 1);
  return negate ? -d : d;
}

FracSolution solve(const PolyMatrix& a, const PolyMatrix& b) {
  if (!a.square() || a.rows() != b.rows())
    fail(Errc::size_mismatch, "solve dimensions");
  const FieldMode& f = a.field();
  size_t n = a.rows(), w = b.cols();
  // Fraction-free Gauss-Jordan on [A | B]: after step k every pivot column is
  // the current leading minor times a unit vector, and the right block holds
  // that minor times the partial solution.
  PolyMatrix m(f, n, n + w);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j)
      m(i, j) = a(i, j);
    for (size_t j = 0; j < w; ++j)
      m(i, n + j) = b(i, j);
  }
  LaurentPoly prev = LaurentPoly::constant(f, 1);
  for (size_t k = 0; k < n; ++k) {
    long piv = pick_pivot(m, k);
    if (piv < 0)
      fail(Errc::singular_gauge, "matrix is singular");
    if (static_cast<size_t>(piv) != k)
      swap_rows(m, k, static_cast<size_t>(piv));
    LaurentPoly pk = m(k, k);
    for (size_t i = 0; i < n; ++i) {
      if (i == k)
        continue;
      LaurentPoly lik = m(i, k);
      for (size_t j = k + 1; j < n + w; ++j)
        m(i, j) = exact_div(pk * m(i, j) - lik * m(k, j), prev);
      m(i, k) = LaurentPoly(f);
    }
    prev = pk;
  }
  // Every diagonal entry now equals the last pivot, which is +-det(A).
  FracSolution s{PolyMatrix(f, n, w), prev};
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < w; ++j)
      s.num(i, j) = m(i, n + j);
  return s;
}

PolyMatrix inverse(const PolyMatrix& a) {
  FracSolution s = solve(a, PolyMatrix::identity(a.field(), a.rows()));
  if (!s.den.is_monomial())
    fail(Errc::singular_gauge, "determinant " + s.den.str() + " is not a unit in the Laurent ring");
  return s.num * exact_div(LaurentPoly::constant(a.field(), 1), s.den);
}

} // namespace convlab
