#include <doctest.h>

#include "convlab/berkdisc.hpp"
#include "convlab/errors.hpp"

#include <random>

using namespace convlab;

namespace {

const FieldMode P2 = FieldMode::padic(2);
const FieldMode P3 = FieldMode::padic(3);

Scalar s2(const Q& x) { return Scalar(P2, x); }
DiscPoint z2(const Q& c, const Q& r) { return DiscPoint::gauss(s2(c), r); }

PAFunction pieces(std::initializer_list<std::tuple<Q, Q, Q, Q>> ps) {
  PAFunction f;
  for (const auto& [a, b, slope, icpt] : ps)
    f.append(a, b, {slope, icpt, true});
  return f;
}

// Oracle for the Gauss norm of a polynomial at zeta_{z,r}: min_i val(f^{(i)}(z)/i!) + i r,
// straight from the Taylor expansion at z.
ExtQ gauss_norm_at(const std::vector<Q>& coeffs, const Q& z, const ExtQ& r, long p) {
  ExtQ best = ExtQ::inf();
  size_t n = coeffs.size();
  for (size_t i = 0; i < n; ++i) {
    // i-th Taylor coefficient at z: sum_j C(j,i) c_j z^{j-i}.
    Q c = 0;
    for (size_t j = i; j < n; ++j) {
      Z binom;
      mpz_bin_uiui(binom.get_mpz_t(), j, i);
      Q zp = 1;
      for (size_t k = 0; k < j - i; ++k)
        zp *= z;
      c += Q(binom) * coeffs[j] * zp;
    }
    if (c == 0)
      continue;
    ExtQ v(Q(padic_val(c, static_cast<unsigned long>(p))));
    if (r.is_inf()) {
      if (i == 0)
        best = min(best, v);
    } else {
      best = min(best, v + ExtQ(r.value() * static_cast<long>(i)));
    }
  }
  return best;
}

} // namespace

TEST_CASE("canonical forms") {
  CHECK(z2(0, 2) == z2(4, 2));
  CHECK(z2(0, 2) != z2(2, 2));
  CHECK(z2(1, 0) == z2(0, 0));
  CHECK(z2(qq(1, 3), 1) == z2(1, 1));
  CHECK(canonical_center(s2(qq(1, 3)), ExtQ(3)) == s2(3)); // 3 * 3 = 9 = 1 mod 8
  CHECK(canonical_center(s2(qq(5, 2)), ExtQ(1)) == s2(qq(1, 2)));
  CHECK(DiscPoint::classical(s2(1)) != DiscPoint::classical(s2(5)));
  CHECK(DiscPoint::classical(s2(1)) != z2(1, 100));
  FieldMode e0 = FieldMode::eqchar0(10);
  DiscPoint a = DiscPoint::gauss(Scalar::u_series(e0, {{0, 1}, {3, 2}}), 2);
  DiscPoint b = DiscPoint::gauss(Scalar(e0, 1), 2);
  CHECK(a == b);
  CHECK(DiscPoint::gauss(Scalar::u_series(e0, {{0, 1}, {1, 2}}), 2) != b);
}

TEST_CASE("homotopy examples") {
  DiscPoint x = DiscPoint::classical(s2(6));
  CHECK(homotopy(x, 2) == z2(6, 2));
  CHECK(homotopy(x, 0) == z2(0, 0));
  CHECK(homotopy(z2(5, 1), 3) == z2(5, 1));
  CHECK(homotopy(z2(5, 3), 1) == z2(1, 1));
  CHECK(homotopy(z2(5, 3), 1).type() == PointType::t2);
  try {
    homotopy(x, -1);
    FAIL("expected containment");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::containment);
  }
  CHECK_THROWS_AS(homotopy(DiscPoint::classical(s2(qq(1, 2))), 1), Error);
  // Bigger ambient disc: r_beta = -1 admits |z| <= 2.
  CHECK(homotopy(DiscPoint::classical(s2(qq(1, 2))), -1, -1) == z2(0, -1));
}

TEST_CASE("homotopy semigroup law and norm oracle") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<long> cen(-40, 40), rad(0, 12), cf(-9, 9);
  for (int it = 0; it < 500; ++it) {
    DiscPoint x = rng() % 3 == 0 ? DiscPoint::classical(s2(cen(rng))) : z2(cen(rng), qq(rad(rng), 2));
    Q a = qq(rad(rng), 3), b = qq(rad(rng), 3);
    CHECK(homotopy(homotopy(x, a), b) == homotopy(x, std::min(a, b)));
    // H(x, rho) dominates x, checked against Gauss norms from the Taylor expansion.
    DiscPoint y = homotopy(x, a);
    CHECK(dominates(y, x));
    std::vector<Q> poly;
    for (int k = 0; k < 4; ++k)
      poly.push_back(qq(cf(rng), 1 + static_cast<long>(rng() % 3)));
    if (std::all_of(poly.begin(), poly.end(), [](const Q& c) { return c == 0; }))
      continue;
    ExtQ nx = gauss_norm_at(poly, x.center().padic_value(), x.r(), 2);
    ExtQ ny = gauss_norm_at(poly, y.center().padic_value(), y.r(), 2);
    CHECK(ny <= nx); // |f|_y >= |f|_x
  }
}

TEST_CASE("dominates examples") {
  CHECK(dominates(z2(0, 0), z2(0, 1)));
  CHECK(!dominates(z2(1, 1), z2(0, 2)));
  CHECK(!dominates(z2(0, 2), z2(1, 1)));
  CHECK(!dominates(z2(0, 1), z2(0, 0)));
  std::mt19937 rng(9);
  std::uniform_int_distribution<long> cen(-40, 40), rad(0, 12);
  for (int it = 0; it < 200; ++it) {
    DiscPoint x = rng() % 2 ? DiscPoint::classical(s2(cen(rng))) : z2(cen(rng), qq(rad(rng), 3));
    CHECK(dominates(z2(0, 0), x));
    CHECK(dominates(x, x));
  }
}

TEST_CASE("domination is a partial order") {
  std::mt19937 rng(13);
  std::uniform_int_distribution<long> cen(0, 15), rad(0, 5);
  std::vector<DiscPoint> pts;
  for (int i = 0; i < 30; ++i)
    pts.push_back(rng() % 4 == 0 ? DiscPoint::classical(s2(cen(rng))) : z2(cen(rng), rad(rng)));
  for (const auto& a : pts)
    for (const auto& b : pts) {
      if (dominates(a, b) && dominates(b, a))
        CHECK(a == b);
      for (const auto& c : pts)
        if (dominates(a, b) && dominates(b, c))
          CHECK(dominates(a, c));
    }
}

TEST_CASE("diameter and exotic points") {
  CHECK(diameter(z2(3, qq(5, 2))) == ExtQ(qq(5, 2)));
  CHECK(diameter(DiscPoint::classical(s2(3))).is_inf());
  // Log radii 1 - 1/(k+1) increasing to 1, centers 2^k.
  std::vector<std::pair<Scalar, Q>> chain;
  for (long k = 1; k <= 6; ++k)
    chain.emplace_back(s2(Q(1L << k)), 1 - Q(1) / Q(k + 1));
  DiscPoint t4 = DiscPoint::nested(chain, 1);
  CHECK(diameter(t4) == ExtQ(1));
  CHECK(homotopy(t4, qq(1, 2)) == z2(0, qq(1, 2)));
  CHECK(homotopy(t4, 2) == t4);
  CHECK(dominates(z2(0, qq(1, 3)), t4));
  CHECK(!dominates(t4, z2(0, 2)));
  CHECK_THROWS_AS(DiscPoint::nested({{s2(0), 1}, {s2(1), 2}}, 3), Error);
  CHECK_THROWS_AS(DiscPoint::nested({{s2(0), 2}, {s2(0), 1}}, 3), Error);

  DiscPoint t3 = DiscPoint::irrational(s2(0), 1, 2);
  CHECK_THROWS_AS(diameter(t3), Error);
  CHECK(homotopy(t3, qq(1, 2)) == z2(0, qq(1, 2)));
  CHECK(homotopy(t3, 3) == t3);
  CHECK(dominates(z2(4, 1), t3));
  CHECK(!dominates(z2(1, 1), t3));
  try {
    homotopy(t3, qq(3, 2));
    FAIL("expected unsupported point");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unsupported_point);
  }
}

TEST_CASE("retract examples") {
  Skeleton s({z2(0, 2)});
  CHECK(retract(s, z2(0, 2)) == z2(0, 2));
  CHECK(retract(s, z2(0, 1)) == z2(0, 1));
  CHECK(retract(s, DiscPoint::classical(s2(2))) == z2(0, 1));
  CHECK(retract(s, DiscPoint::classical(s2(8))) == z2(0, 2));
  Skeleton g({z2(0, 0)});
  std::mt19937 rng(3);
  for (int it = 0; it < 50; ++it) {
    DiscPoint x = DiscPoint::classical(s2(static_cast<long>(rng() % 64)));
    CHECK(retract(g, x) == z2(0, 0));
    DiscPoint y = retract(s, x);
    CHECK(s.contains(y));
    CHECK(retract(s, y) == y);
    CHECK(dominates(y, x));
  }
}

TEST_CASE("skeleton structure") {
  // Root paths of 0 and 1 separate at r = 0; of 0 and 4 at r = 2.
  Skeleton s({DiscPoint::classical(s2(4)), z2(0, 3), z2(1, 2)});
  CHECK(s.generators().size() == 3);
  CHECK(s.root() == z2(0, 0));
  std::vector<DiscPoint> want = {z2(0, 0), z2(0, 2), z2(0, 3), DiscPoint::classical(s2(4)), z2(1, 2)};
  CHECK(s.vertices().size() == want.size());
  for (const auto& w : want)
    CHECK(std::find(s.vertices().begin(), s.vertices().end(), w) != s.vertices().end());
  CHECK(s.edges().size() == 4);
  CHECK(s.contains(z2(0, qq(5, 2))));
  CHECK(!s.contains(z2(2, 2)));
  CHECK_THROWS_AS(Skeleton({}), Error);
  CHECK_THROWS_AS(Skeleton({DiscPoint::irrational(s2(0), 0, 1)}), Error);
}

TEST_CASE("controlling subdivision examples") {
  Skeleton s({z2(0, 3)});
  auto c0 = controlling_subdivision(s, {{0, pieces({{0, 3, 0, 5}})}});
  CHECK(c0.added_count() == 0);
  CHECK(c0.strict());

  auto c1 = controlling_subdivision(s, {{0, pieces({{0, qq(3, 2), -1, 5}, {qq(3, 2), 3, 0, qq(7, 2)}})}});
  CHECK(c1.added_count() == 1);
  CHECK(c1.vertices.back().point == z2(0, qq(3, 2)));
  CHECK(c1.vertices.back().slopes.size() == 1);
  CHECK(*c1.vertices.back().slopes[0].upper == -1);
  CHECK(*c1.vertices.back().slopes[0].lower == 0);
  CHECK(c1.edges.size() == 2);

  auto c2 = controlling_subdivision(s, {{0, pieces({{0, 1, 0, 2}, {1, 3, 1, 1}})},
                                        {0, pieces({{0, 2, -1, 4}, {2, 3, 0, 2}})},
                                        {0, pieces({{0, 1, 1, 0}, {1, 3, 2, -1}})}});
  CHECK(c2.added_count() == 2);
  CHECK(c2.edges.size() == 3);
  CHECK(c2.strict());

  // Branching skeleton: a kink on the shared segment is one vertex.
  Skeleton b({z2(0, 3), z2(2, 3)});
  auto c3 = controlling_subdivision(b, {{0, pieces({{0, qq(1, 2), 1, 0}, {qq(1, 2), 3, 0, qq(1, 2)}})},
                                        {1, pieces({{0, qq(1, 2), 1, 0}, {qq(1, 2), 3, 0, qq(1, 2)}})}});
  CHECK(c3.added_count() == 1);
  CHECK(c3.edges.size() == 4);

  PAFunction flagged;
  flagged.append(0, 3, {0, 1, false});
  CHECK(!controlling_subdivision(s, {{0, flagged}}).flags.empty());
  CHECK_THROWS_AS(controlling_subdivision(s, {{1, pieces({{0, 3, 0, 0}})}}), Error);
  CHECK_THROWS_AS(controlling_subdivision(s, {{0, pieces({{0, 4, 0, 0}})}}), Error);
}
