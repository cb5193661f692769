#include <doctest.h>

#include "convlab/errors.hpp"
#include "convlab/radii.hpp"

#include <functional>
#include <random>

using namespace convlab;

namespace {

const FieldMode P2 = FieldMode::padic(2);
const FieldMode P3 = FieldMode::padic(3);
const Interval disc{ExtQ(0), ExtQ::inf()};

LaurentPoly mono(const FieldMode& f, const Q& c, long e = 0) { return LaurentPoly::monomial(f, c, e); }

DiffModule rank1(const FieldMode& f, const LaurentPoly& n, Derivation d = Derivation::ddt, Interval iv = disc) {
  PolyMatrix a(f, 1, 1);
  a(0, 0) = n;
  return DiffModule(f, d, iv, a);
}

RadiiMultiset ms(std::initializer_list<std::tuple<Q, long, Certainty>> xs) {
  RadiiMultiset m;
  for (const auto& [x, k, c] : xs)
    m.add(x, k, c);
  return m;
}

constexpr Certainty E = Certainty::exact;
constexpr Certainty LB = Certainty::lower_bound_only;

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::parse;
}

// Test-module closed form in u-units: max(c, c - val(lambda)/e - h r/e).
Q test_module_irlog(const FieldMode& f, const Q& val_lambda, long h, long e, const Q& r) {
  Q c = f.c_omega();
  return std::max(c, Q(c - val_lambda / e - Q(h) * r / e));
}

} // namespace

TEST_CASE("christol_dwork examples") {
  NewtonPolygon np{{{ExtQ(-2), 1}}};
  CHECK(christol_dwork(np, 0, P2) == ms({{3, 1, E}}));
  CHECK(christol_dwork(NewtonPolygon{{{ExtQ(-1), 1}}}, 0, P2) == ms({{2, 1, E}}));
  CHECK(christol_dwork(NewtonPolygon{{{ExtQ(0), 2}}}, 0, P2) == ms({{1, 2, LB}}));
  CHECK(christol_dwork(NewtonPolygon{{{ExtQ(-1), 1}}}, 1, P3) == ms({{qq(1, 2), 1, LB}}));
  CHECK(christol_dwork(NewtonPolygon{{{ExtQ(-1), 1}, {ExtQ(1), 1}}}, 0, FieldMode::eqchar0(8)) ==
        ms({{1, 1, E}, {0, 1, E}}));
}

TEST_CASE("module_radii examples") {
  DiffModule m = test_module(Scalar(P2, qq(1, 4)), 1, 1, 1, P2, disc);
  CHECK(module_radii(m, 0) == ms({{3, 1, E}}));
  CHECK(module_radii(DiffModule(P2, Derivation::ddt, disc, PolyMatrix(P2, 2, 2)), 0) == ms({{0, 2, E}}));
  CHECK(module_radii(rank1(P2, mono(P2, 1), Derivation::t_ddt, Interval{ExtQ(-1), ExtQ(1)}), 0) == ms({{0, 1, E}}));
  CHECK(module_radii(DiffModule(P2, Derivation::ddt, disc, PolyMatrix(P2, 0, 0)), 0).rank() == 0);
  CHECK(code_of([&] { module_radii(m, -1); }) == Errc::domain);

  // c = 1: the radius is omega, resolved after one descendant step.
  CHECK(module_radii(rank1(P2, mono(P2, 1)), 0, 0) == ms({{1, 1, LB}}));
  CHECK(module_radii(rank1(P2, mono(P2, 1)), 0, 1) == ms({{1, 1, E}}));
  // c = p stays hidden: each step only tightens the bound to c_omega / p^d.
  CHECK(module_radii(rank1(P2, mono(P2, 2)), 0, 2) == ms({{qq(1, 4), 1, LB}}));

  FieldMode e0 = FieldMode::eqchar0(8);
  DiffModule q = rank1(e0, LaurentPoly(Scalar::u_monomial(e0, 1, -2)));
  CHECK(module_radii(q, 0) == ms({{2, 1, E}}));
  CHECK(module_radii(rank1(e0, LaurentPoly(Scalar(e0, 1))), 0) == ms({{0, 1, E}}));
}

TEST_CASE("test module closed form") {
  struct Case {
    long p;
    Q lambda;
    long h, e, m;
  };
  std::vector<Case> cases = {
      {2, qq(1, 4), 1, 1, 1},  {2, qq(1, 8), -1, 1, 1}, {2, qq(3, 16), 1, 2, 1}, {2, qq(1, 4), -1, 2, 3},
      {3, qq(1, 9), 1, 1, 2},  {3, qq(2, 27), 2, 3, 1}, {3, qq(1, 3), -1, 3, 1}, {5, qq(1, 25), 1, 1, 1},
      {5, qq(3, 125), -2, 1, 3}, {5, qq(1, 5), 1, 5, 1},
  };
  for (const auto& c : cases) {
    FieldMode f = FieldMode::padic(c.p);
    DiffModule m = test_module(Scalar(f, c.lambda), c.h, c.e, c.m, f, disc);
    Q v = Q(padic_val(c.lambda, static_cast<unsigned long>(c.p)));
    RadiiMultiset got = module_radii(m, 0);
    CAPTURE(c.p);
    CAPTURE(c.e);
    CHECK(got == ms({{test_module_irlog(f, v, c.h, c.e, 0), c.e, E}}));
  }
}

TEST_CASE("invert_descendant_multiset examples") {
  CHECK(invert_descendant_multiset(ms({{4, 2, E}}), 2) == ms({{3, 1, E}}));
  CHECK(invert_descendant_multiset(ms({{2, 2, E}}), 2) == ms({{1, 1, E}}));
  CHECK(code_of([] { invert_descendant_multiset(ms({{qq(1, 2), 2, E}}), 2); }) == Errc::inversion_infeasible);
  CHECK(code_of([] { invert_descendant_multiset(ms({{2, 1, E}}), 2); }) == Errc::inversion_infeasible);
  CHECK(code_of([] { invert_descendant_multiset(ms({{5, 1, E}, {4, 1, E}}), 2); }) == Errc::inversion_infeasible);
  CHECK(code_of([] { invert_descendant_multiset(ms({{2, 2, LB}}), 2); }) == Errc::ambiguous_inversion);
  CHECK(invert_descendant_multiset(ms({{2, 2, E}, {qq(1, 2), 2, LB}}), 2) == ms({{qq(1, 4), 2, LB}}));
  CHECK(code_of([] { descendant_law(ms({{1, 1, LB}}), 2); }) == Errc::parameter);
}

TEST_CASE("descendant law round trip on random multisets") {
  std::mt19937 rng(17);
  for (long p : {2L, 3L, 5L}) {
    Q c(1, p - 1);
    for (int it = 0; it < 200; ++it) {
      RadiiMultiset m;
      std::uniform_int_distribution<long> num(0, 24), cnt(1, 3);
      for (long k = cnt(rng); k > 0; --k) {
        Q x = qq(num(rng), 4);
        if (rng() % 4 == 0)
          x = c;
        m.add(x, cnt(rng), E);
      }
      RadiiMultiset d = descendant_law(m, p);
      CHECK(d.rank() == m.rank() * p);
      CHECK(invert_descendant_multiset(d, p) == m);
    }
  }
}

TEST_CASE("descendant law end to end") {
  std::vector<DiffModule> mods = {
      test_module(Scalar(P2, qq(1, 4)), 1, 1, 1, P2, disc),
      test_module(Scalar(P2, qq(3, 8)), -1, 1, 1, P2, Interval{ExtQ(-2), ExtQ(2)}),
      test_module(Scalar(P2, qq(1, 4)), 1, 2, 1, P2, disc),
      test_module(Scalar(P3, qq(1, 9)), 1, 1, 1, P3, disc),
      direct_sum(test_module(Scalar(P2, qq(1, 4)), 1, 1, 1, P2, disc),
                 test_module(Scalar(P2, qq(1, 32)), 1, 1, 1, P2, disc)),
      rank1(P2, mono(P2, qq(1, 4)) + mono(P2, 1, 1)),
  };
  for (const auto& m : mods)
    for (const Q& r : {Q(0), qq(1, 2)}) {
      RadiiMultiset base = module_radii(m, r, 0);
      REQUIRE(base.fully_exact());
      long p = m.mode.p();
      CHECK(module_radii(frobenius_descendant(m), r * p, 1) == descendant_law(base, p));
    }
}

TEST_CASE("rank-1 power laws") {
  std::mt19937 rng(23);
  for (long p : {2L, 3L}) {
    FieldMode f = FieldMode::padic(p);
    Q c = f.c_omega();
    for (int it = 0; it < 30; ++it) {
      std::uniform_int_distribution<long> num(1, 7), ex(0, 2), v(-3, 1);
      LaurentPoly n(f);
      for (long k = 1 + static_cast<long>(rng() % 2); k > 0; --k) {
        Q a = qq(num(rng));
        long s = v(rng);
        for (long i = 0; i < std::abs(s); ++i)
          a = s < 0 ? Q(a / p) : Q(a * p);
        n += mono(f, a, ex(rng));
      }
      DiffModule m = rank1(f, n);
      DiffModule mp = tensor_power(m, p);
      REQUIRE(mp.matrix(0, 0) == n * Q(p));
      RadiiMultiset a = module_radii(m, 0, 2), b = module_radii(mp, 0, 2);
      if (!a.fully_exact())
        continue;
      Q x = a.entries[0].irlog;
      // Hidden mass only asserts irlog <= c, which already decides the clip.
      Q clip_b = b.fully_exact() ? std::max(c, b.entries[0].irlog) : c;
      CHECK(clip_b == std::max(c, Q(x - 1)));
      Q bound = std::max(Q(x / p), Q(x - 1));
      CHECK(b.entries[0].irlog <= bound);
    }
  }
}

TEST_CASE("oracle brackets the exact radius") {
  DiffModule m = test_module(Scalar(P2, qq(1, 4)), 1, 1, 1, P2, disc);
  auto steps = spectral_radius_oracle(m, 0, 32);
  REQUIRE(!steps.empty());
  CHECK(steps.back().k == 32);
  for (const auto& s : steps) {
    CHECK(s.lo <= 3);
    CHECK(s.hi >= 3);
  }
  CHECK(steps.back().hi - steps.back().lo <= qq(1, 8));

  DiffModule triv(P2, Derivation::ddt, disc, PolyMatrix(P2, 1, 1));
  auto t = spectral_radius_oracle(triv, 0, 64);
  for (const auto& s : t)
    CHECK(s.lo == 0);
  for (size_t i = 1; i < t.size(); ++i)
    CHECK(t[i].hi - t[i].lo <= t[i - 1].hi - t[i - 1].lo);

  CHECK(code_of([&] { spectral_radius_oracle(m, 0, 0); }) == Errc::parameter);
}

TEST_CASE("oracle on a visible corpus") {
  std::vector<DiffModule> mods = {
      test_module(Scalar(P2, qq(1, 8)), 1, 1, 1, P2, disc),
      test_module(Scalar(P2, qq(1, 4)), 1, 2, 1, P2, disc),
      test_module(Scalar(P3, qq(1, 27)), -1, 1, 1, P3, Interval{ExtQ(-1), ExtQ(1)}),
      rank1(P3, mono(P3, qq(1, 9)) + mono(P3, qq(1, 3), 1)),
  };
  for (const auto& m : mods) {
    RadiiMultiset r = module_radii(m, 0, 0);
    REQUIRE(r.fully_exact());
    Q top = r.entries[0].irlog;
    auto steps = spectral_radius_oracle(m, 0, 64);
    for (size_t i = 0; i < steps.size(); ++i) {
      CHECK(steps[i].lo <= top);
      CHECK(steps[i].hi >= top);
      if (i)
        CHECK(steps[i].hi - steps[i].lo <= steps[i - 1].hi - steps[i - 1].lo);
    }
    CHECK(steps.back().hi - steps.back().lo <= qq(1, 4));
  }
}
