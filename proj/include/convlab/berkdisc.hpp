#ifndef CONVLAB_BERKDISC_HPP
#define CONVLAB_BERKDISC_HPP

#include "convlab/profile.hpp"

#include <optional>
#include <string>
#include <vector>

namespace convlab {

enum class PointType { t1, t2, t3, t4 };

const char* point_type_name(PointType t);

// A point of the Berkovich disc of log radius r_beta (radius beta = p^{-r_beta}),
// in r-units: zeta_{z,r} is the Gauss norm of radius p^{-r} around z.
// Type 3 points are markers carrying a rational bracket lo < r < hi around the
// irrational log radius. Type 4 points are caller-supplied nested chains of
// discs with a declared limit; empty intersection is taken on trust.
class DiscPoint {
public:
  static DiscPoint classical(const Scalar& z);
  static DiscPoint gauss(const Scalar& z, const Q& r);
  static DiscPoint irrational(const Scalar& z, const Q& lo, const Q& hi);
  static DiscPoint nested(std::vector<std::pair<Scalar, Q>> chain, const Q& limit);

  PointType type() const { return type_; }
  const FieldMode& field() const { return center_.field(); }
  const Scalar& center() const { return center_; }
  // Log radius: +inf for type 1, the declared limit for type 4. Type 3 throws.
  ExtQ r() const;
  const std::pair<Q, Q>& bracket() const { return bracket_; }
  const std::vector<std::pair<Scalar, Q>>& chain() const { return chain_; }

  // Center reduced to a canonical representative modulo the disc.
  Scalar canonical_center() const;
  std::string str() const;

  friend bool operator==(const DiscPoint& a, const DiscPoint& b);
  friend bool operator!=(const DiscPoint& a, const DiscPoint& b) { return !(a == b); }
  // Canonical total order: by log radius, then by canonical center.
  friend bool operator<(const DiscPoint& a, const DiscPoint& b);

private:
  DiscPoint(PointType t, Scalar z) : type_(t), center_(std::move(z)) {}
  PointType type_;
  Scalar center_;
  Q r_ = 0;
  std::pair<Q, Q> bracket_;
  std::vector<std::pair<Scalar, Q>> chain_;
};

// Representative of z modulo the closed disc of log radius r.
Scalar canonical_center(const Scalar& z, const ExtQ& r);

// Diameter in r-units.
ExtQ diameter(const DiscPoint& x);

// H(x, rho) with rho = p^{-s}: the point of x's root path at log radius s,
// i.e. radius max(rho(x), rho). Requires s >= r_beta and x in the disc.
DiscPoint homotopy(const DiscPoint& x, const Q& s, const Q& r_beta = 0);

// y dominates x iff y = H(x, rho) for some rho.
bool dominates(const DiscPoint& y, const DiscPoint& x);

// Largest log radius s at which the root paths of x and y coincide.
ExtQ path_agreement(const DiscPoint& x, const DiscPoint& y);

bool in_disc(const DiscPoint& x, const Q& r_beta);

struct SkeletonEdge {
  size_t upper;  // vertex index
  size_t lower;  // vertex index
  Q r_start;
  ExtQ r_end;
  size_t branch; // generator whose root path carries the edge
};

// Union of the root paths of the generators; vertices are the root, the
// generators and the points where root paths separate.
class Skeleton {
public:
  explicit Skeleton(std::vector<DiscPoint> generators, const Q& r_beta = 0);

  const Q& r_beta() const { return r_beta_; }
  const std::vector<DiscPoint>& generators() const { return gens_; }
  const std::vector<DiscPoint>& vertices() const { return vertices_; }
  const std::vector<SkeletonEdge>& edges() const { return edges_; }
  DiscPoint root() const;
  bool contains(const DiscPoint& x) const;
  // Log radii of the skeleton vertices on generator i's root path.
  std::vector<ExtQ> levels(size_t i) const;

private:
  Q r_beta_;
  std::vector<DiscPoint> gens_;
  std::vector<DiscPoint> vertices_;
  std::vector<SkeletonEdge> edges_;
};

// pi_S(x): the first point of x's root path lying in S.
DiscPoint retract(const Skeleton& s, const DiscPoint& x);

// f(H(g_branch, p^{-r})) for r in the function's domain.
struct BranchFunction {
  size_t branch;
  PAFunction f;
};

struct VertexSlope {
  size_t function;
  std::optional<Q> upper; // slope toward the root
  std::optional<Q> lower; // slope away from the root along the function's branch
};

struct SubdivisionVertex {
  DiscPoint point;
  bool added; // not already a skeleton vertex
  std::vector<VertexSlope> slopes;
};

struct ControllingSubdivision {
  std::vector<SubdivisionVertex> vertices;
  std::vector<SkeletonEdge> edges; // vertex indices refer to `vertices`
  std::vector<std::string> flags;
  long added_count() const;
  // Every vertex is of type 2.
  bool strict() const;
};

// Minimal subdivision of S on whose edges every function is affine.
ControllingSubdivision controlling_subdivision(const Skeleton& s, const std::vector<BranchFunction>& fs);

} // namespace convlab

#endif
