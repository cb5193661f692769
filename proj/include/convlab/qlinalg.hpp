#ifndef CONVLAB_QLINALG_HPP
#define CONVLAB_QLINALG_HPP

#include "convlab/rational.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace convlab {

// Small dense linear algebra over Q.
using QMatrix = std::vector<std::vector<Q>>;
using QPoly = std::vector<Q>; // coefficients, lowest degree first

QMatrix q_identity(size_t n);
QMatrix q_mul(const QMatrix& a, const QMatrix& b);
QMatrix q_sub(const QMatrix& a, const QMatrix& b);
QMatrix q_scale(const QMatrix& a, const Q& s);

// Monic characteristic polynomial det(T I - A).
QPoly char_poly(const QMatrix& a);
QPoly poly_eval_shift(const QPoly& p, const Q& j); // p(T - j)
Q poly_eval(const QPoly& p, const Q& x);

// Rational roots with multiplicity, ascending. Returns nullopt when the
// integer coefficients cannot be factored within the trial-division bound.
std::optional<std::vector<std::pair<Q, long>>> rational_roots(const QPoly& p);

// Reduced row echelon form in place; returns pivot columns.
std::vector<size_t> rref(QMatrix& a);
// Basis of the right kernel.
std::vector<std::vector<Q>> kernel(const QMatrix& a);
std::optional<QMatrix> q_inverse(const QMatrix& a);

// Extended Euclid over Q[T]: returns (g, s, t) with s a + t b = g monic gcd.
struct QPolyXgcd {
  QPoly g, s, t;
};
QPolyXgcd poly_xgcd(const QPoly& a, const QPoly& b);
QPoly poly_mul_q(const QPoly& a, const QPoly& b);
QPoly poly_mod(const QPoly& a, const QPoly& m);

} // namespace convlab

#endif
