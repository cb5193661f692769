#ifndef CONVLAB_NEWTON_HPP
#define CONVLAB_NEWTON_HPP

#include "convlab/laurent.hpp"

#include <vector>

namespace convlab {

// Root valuations of a polynomial sum a_i T^i at a Gauss point, with
// multiplicities, in strictly increasing order. Roots equal to zero carry
// valuation +inf.
struct NewtonPolygon {
  struct Segment {
    ExtQ root_val;
    long mult;
    friend bool operator==(const Segment&, const Segment&) = default;
  };
  std::vector<Segment> segments;

  long degree() const;
  friend bool operator==(const NewtonPolygon&, const NewtonPolygon&) = default;
};

// Polygon from the valuations of a_0..a_n (+inf for zero coefficients).
NewtonPolygon newton_polygon_from_vals(const std::vector<ExtQ>& vals);
// Polygon of sum a_i T^i, coefficients measured with w_r.
NewtonPolygon newton_polygon(const std::vector<LaurentPoly>& coeffs, const Q& r);

// Multiset union of two polygons.
NewtonPolygon merge(const NewtonPolygon& a, const NewtonPolygon& b);

struct SlopeSplit {
  std::vector<LaurentPoly> low;  // monic, roots of valuation < cut
  std::vector<LaurentPoly> high; // monic, roots of valuation > cut
  // Valuation of input - low*high in the Gauss norm at r with T weighted by cut.
  ExtQ residual_val;
  // The valuation that the lifting was asked to reach.
  ExtQ target_val;
  long iterations = 0;
};

// Factor a monic polynomial over the completion at the Gauss point r into the
// parts with root valuations below and above cut. The lift stops once the
// residual gains `precision` over the dominant term.
SlopeSplit split_by_slope(const std::vector<LaurentPoly>& coeffs, const Q& r, const Q& cut, long precision);

// Product of polynomials in T with Laurent coefficients.
std::vector<LaurentPoly> poly_mul(const std::vector<LaurentPoly>& a, const std::vector<LaurentPoly>& b);

} // namespace convlab

#endif
