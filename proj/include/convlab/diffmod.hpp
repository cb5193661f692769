#ifndef CONVLAB_DIFFMOD_HPP
#define CONVLAB_DIFFMOD_HPP

#include "convlab/matrix.hpp"

#include <string>
#include <vector>

namespace convlab {

// Closed interval of log radii r = -log rho. r_max = +inf means the disc
// contains t = 0; r_min = -inf means the module is defined near infinity.
struct Interval {
  ExtQ r_min = ExtQ::neg_inf();
  ExtQ r_max = ExtQ::inf();

  bool contains(const Q& r) const { return r_min <= ExtQ(r) && ExtQ(r) <= r_max; }
  bool is_disc() const { return r_max.is_inf(); }
  Interval scaled(const Q& s) const { return {r_min * s, r_max * s}; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// A differential module: D(e_j) = sum_i N(i,j) e_i on the implicit basis.
struct DiffModule {
  FieldMode mode;
  Derivation derivation;
  Interval interval;
  PolyMatrix matrix;

  DiffModule(const FieldMode& f, Derivation d, const Interval& iv, PolyMatrix n);

  size_t rank() const { return matrix.rows(); }
  // Coordinates of D(v) for v given in coordinates: d(v) + N v.
  std::vector<LaurentPoly> apply_d(const std::vector<LaurentPoly>& v) const;

  friend bool operator==(const DiffModule& a, const DiffModule& b);
};

DiffModule change_basis(const DiffModule& m, const PolyMatrix& u);
DiffModule dual(const DiffModule& m);
DiffModule tensor(const DiffModule& a, const DiffModule& b);
DiffModule direct_sum(const DiffModule& a, const DiffModule& b);
DiffModule tensor_power(const DiffModule& m, long k);
// ddt <-> t_ddt on the same basis: N_tddt = t N_ddt.
DiffModule switch_derivation(const DiffModule& m);
DiffModule as_ddt(const DiffModule& m);

// D^n v = sum_i a_i D^i v with a_i = num[i] / den.
struct CompanionData {
  std::vector<LaurentPoly> vector;
  std::vector<LaurentPoly> num;
  LaurentPoly den;
  // +-det[v, Dv, ..., D^{n-1} v], nonzero.
  LaurentPoly certificate;
  long attempts = 0;
};

// Deterministic ladder v = sum_j t^{k_j} e_j, k ordered by total degree then
// lexicographically. Companion data refer to the module's own derivation.
CompanionData cyclic_vector(const DiffModule& m, const Q& r, long attempt_budget = 64);

// Coefficients c_0..c_n of den*T^n - sum num_i T^i.
std::vector<LaurentPoly> companion_polynomial(const CompanionData& c);

// Pushforward along t -> t^p = s, basis e_i t^j (index i*p + j), derivation d/ds.
DiffModule frobenius_descendant(const DiffModule& m);

// N_{lambda,h,e,m} in the variable u = t^{1/m}, derivation d/du; interval in
// u-units is the given t-interval divided by m.
DiffModule test_module(const Scalar& lambda, long h, long e, long m, const FieldMode& f, const Interval& t_interval);

// Pullback along t -> t + z for a polynomial ddt matrix on a disc containing z.
// The Gauss point of radius r around z becomes the one around 0.
DiffModule translate(const DiffModule& m, const Scalar& z);

// W_m over the descended variable s: D(v) = (m/p) s^{-1} v for d/ds.
DiffModule twist_W(long m_idx, const FieldMode& f, const Interval& iv);

} // namespace convlab

#endif
