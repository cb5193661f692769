#include <doctest.h>

#include "convlab/diffmod.hpp"
#include "convlab/errors.hpp"
#include "convlab/radii.hpp"

#include <random>

using namespace convlab;

namespace {

const FieldMode P2 = FieldMode::padic(2);
const FieldMode P3 = FieldMode::padic(3);
const Interval disc{ExtQ(0), ExtQ::inf()};
const Interval annulus{ExtQ(-1), ExtQ(1)};

LaurentPoly mono(const FieldMode& f, const Q& c, long e = 0) { return LaurentPoly::monomial(f, c, e); }

PolyMatrix mat(const FieldMode& f, std::initializer_list<std::initializer_list<LaurentPoly>> rows) {
  size_t n = rows.size(), m = rows.begin()->size();
  PolyMatrix a(f, n, m);
  size_t i = 0;
  for (const auto& row : rows) {
    size_t j = 0;
    for (const auto& x : row)
      a(i, j++) = x;
    ++i;
  }
  return a;
}

LaurentPoly random_poly(const FieldMode& f, std::mt19937& rng, long lo, long hi) {
  std::uniform_int_distribution<long> ex(lo, hi), num(-6, 6), den(1, 4), cnt(1, 3);
  LaurentPoly out(f);
  for (long k = cnt(rng); k > 0; --k)
    out += mono(f, qq(num(rng), den(rng)), ex(rng));
  return out;
}

// Upper unitriangular times lower unitriangular with Laurent entries: det 1.
PolyMatrix random_unimodular(const FieldMode& f, std::mt19937& rng, size_t n) {
  PolyMatrix up = PolyMatrix::identity(f, n), lo = PolyMatrix::identity(f, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      up(i, j) = random_poly(f, rng, -1, 1);
      lo(j, i) = random_poly(f, rng, -1, 1);
    }
  return up * lo;
}

} // namespace

TEST_CASE("change_basis examples") {
  DiffModule m(P2, Derivation::ddt, annulus, mat(P2, {{mono(P2, qq(1, 4))}}));
  CHECK(change_basis(m, PolyMatrix::identity(P2, 1)) == m);

  DiffModule z(P2, Derivation::ddt, annulus, PolyMatrix(P2, 1, 1));
  DiffModule g = change_basis(z, mat(P2, {{mono(P2, 1, 1)}}));
  CHECK(g.matrix(0, 0) == mono(P2, 1, -1));

  CHECK_THROWS_AS(change_basis(z, PolyMatrix(P2, 1, 1)), Error);
  try {
    change_basis(z, mat(P2, {{mono(P2, 1) + mono(P2, 1, 1)}}));
    FAIL("expected singular gauge");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::singular_gauge);
  }
}

TEST_CASE("change_basis round trip") {
  std::mt19937 rng(11);
  for (int it = 0; it < 40; ++it) {
    PolyMatrix n(P3, 2, 2);
    for (size_t i = 0; i < 2; ++i)
      for (size_t j = 0; j < 2; ++j)
        n(i, j) = random_poly(P3, rng, -2, 2);
    DiffModule m(P3, it % 2 ? Derivation::t_ddt : Derivation::ddt, annulus, n);
    PolyMatrix u = random_unimodular(P3, rng, 2);
    DiffModule back = change_basis(change_basis(m, u), inverse(u));
    CHECK(back == m);
  }
}

TEST_CASE("gauge invariance of radii") {
  std::mt19937 rng(5);
  DiffModule base = direct_sum(test_module(Scalar(P2, qq(1, 4)), 1, 1, 1, P2, disc),
                               test_module(Scalar(P2, qq(1, 16)), 1, 1, 1, P2, disc));
  RadiiMultiset want = module_radii(base, 0, 1);
  CHECK(want.str() == "{(5, 1), (3, 1)}");
  for (int it = 0; it < 5; ++it) {
    PolyMatrix u = PolyMatrix::identity(P2, 2);
    u(0, 1) = random_poly(P2, rng, 0, 2);
    CHECK(module_radii(change_basis(base, u), 0, 1) == want);
  }
}

TEST_CASE("dual and tensor examples") {
  Q c1 = qq(1, 4), c2 = qq(3, 8);
  DiffModule a(P2, Derivation::ddt, disc, mat(P2, {{mono(P2, c1)}}));
  DiffModule b(P2, Derivation::ddt, disc, mat(P2, {{mono(P2, c2)}}));
  CHECK(dual(a).matrix(0, 0) == mono(P2, -c1));
  CHECK(tensor(a, b).matrix(0, 0) == mono(P2, c1 + c2));
  CHECK(tensor(dual(a), a).matrix.is_zero());
  CHECK(tensor(a, b).rank() == 1);
  CHECK(tensor(direct_sum(a, b), direct_sum(a, b)).rank() == 4);

  DiffModule other(P2, Derivation::t_ddt, disc, mat(P2, {{mono(P2, c1)}}));
  try {
    tensor(a, other);
    FAIL("expected incompatibility");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::incompatible);
  }
  DiffModule p3(P3, Derivation::ddt, disc, mat(P3, {{mono(P3, c1)}}));
  CHECK_THROWS_AS(tensor(a, p3), Error);
}

TEST_CASE("functoriality bounds on rank-1 modules") {
  // Rank-1 constant modules: irlog = c_omega - val(c) whenever that exceeds c_omega.
  std::vector<Q> cs = {qq(1, 4), qq(1, 8), qq(3, 16), qq(1, 2), qq(5, 32)};
  for (const Q& x : cs)
    for (const Q& y : cs) {
      DiffModule a(P2, Derivation::ddt, disc, mat(P2, {{mono(P2, x)}}));
      DiffModule b(P2, Derivation::ddt, disc, mat(P2, {{mono(P2, y)}}));
      RadiiMultiset ra = module_radii(a, 0, 1), rb = module_radii(b, 0, 1);
      CHECK(module_radii(dual(a), 0, 1) == ra);
      if (x + y == 0)
        continue;
      RadiiMultiset rt = module_radii(tensor(a, b), 0, 2);
      REQUIRE(rt.fully_exact());
      Q ia = ra.entries[0].irlog, ib = rb.entries[0].irlog, it = rt.entries[0].irlog;
      CHECK(it <= std::max(ia, ib));
      if (ia != ib)
        CHECK(it == std::max(ia, ib));
    }
}

TEST_CASE("switch_derivation examples") {
  Q lam = qq(1, 3);
  DiffModule m(P2, Derivation::ddt, annulus, mat(P2, {{mono(P2, lam, -1)}}));
  DiffModule s = switch_derivation(m);
  CHECK(s.derivation == Derivation::t_ddt);
  CHECK(s.matrix(0, 0) == mono(P2, lam));
  CHECK(switch_derivation(s) == m);

  PolyMatrix nil = mat(P2, {{mono(P2, 0), mono(P2, 1)}, {mono(P2, 0), mono(P2, 0)}});
  DiffModule t(P2, Derivation::t_ddt, annulus, nil);
  CHECK(switch_derivation(t).matrix == nil * mono(P2, 1, -1));
  CHECK(as_ddt(t) == switch_derivation(t));
  CHECK(as_ddt(m) == m);
}

TEST_CASE("cyclic vector examples") {
  DiffModule r1(P2, Derivation::ddt, disc, mat(P2, {{mono(P2, qq(1, 4))}}));
  CompanionData c = cyclic_vector(r1, 0);
  CHECK(c.vector[0] == mono(P2, 1));
  CHECK(c.num[0] == c.den * mono(P2, qq(1, 4)));

  // (0) + (t^-1): check D^2 v = a_0 v + a_1 D v with a_i = num_i / den.
  DiffModule sum(P2, Derivation::ddt, annulus, mat(P2, {{mono(P2, 0), mono(P2, 0)}, {mono(P2, 0), mono(P2, 1, -1)}}));
  CompanionData cs = cyclic_vector(sum, 0);
  std::vector<LaurentPoly> v = cs.vector, dv = sum.apply_d(v), d2v = sum.apply_d(dv);
  for (size_t i = 0; i < 2; ++i)
    CHECK(d2v[i] * cs.den == cs.num[0] * v[i] + cs.num[1] * dv[i]);
  CHECK(gauss_val(cs.certificate, 0).finite());

  // Trivial rank 2: e_1 and e_2 give Dv = 0, the ladder reaches v = e_1 + t e_2.
  DiffModule triv(P2, Derivation::ddt, disc, PolyMatrix(P2, 2, 2));
  CompanionData ct = cyclic_vector(triv, 0);
  CHECK(ct.vector[0] == mono(P2, 1));
  CHECK(ct.vector[1] == mono(P2, 1, 1));
  CHECK(ct.num[0].is_zero());
  CHECK(ct.num[1].is_zero());
  CHECK(ct.attempts == 2);

  try {
    cyclic_vector(triv, 0, 1);
    FAIL("expected budget exhaustion");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::cyclic_search_failure);
    CHECK(std::string(e.what()).find("(0,0)") != std::string::npos);
  }
}

TEST_CASE("cyclic vector certificate on random modules") {
  std::mt19937 rng(3);
  for (int it = 0; it < 20; ++it) {
    size_t n = 2 + static_cast<size_t>(it % 2);
    PolyMatrix a(P3, n, n);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        if (rng() % 2)
          a(i, j) = random_poly(P3, rng, -1, 1);
    DiffModule m(P3, Derivation::ddt, annulus, a);
    CompanionData c = cyclic_vector(m, 0);
    CHECK(gauss_val(c.certificate, 0).finite());
    std::vector<std::vector<LaurentPoly>> iter{c.vector};
    for (size_t k = 0; k < n; ++k)
      iter.push_back(m.apply_d(iter.back()));
    for (size_t i = 0; i < n; ++i) {
      LaurentPoly rhs(P3);
      for (size_t k = 0; k < n; ++k)
        rhs += c.num[k] * iter[k][i];
      CHECK(iter[n][i] * c.den == rhs);
    }
  }
}

TEST_CASE("frobenius descendant examples") {
  DiffModule zero(P2, Derivation::ddt, disc, PolyMatrix(P2, 0, 0));
  CHECK(frobenius_descendant(zero).rank() == 0);

  // N = 0: e_1 t^0 is horizontal, e_1 t^j carries (j/p) s^-1, i.e. W_j.
  DiffModule triv(P3, Derivation::ddt, disc, PolyMatrix(P3, 1, 1));
  DiffModule d = frobenius_descendant(triv);
  CHECK(d.rank() == 3);
  for (long j = 0; j < 3; ++j)
    CHECK(d.matrix(static_cast<size_t>(j), static_cast<size_t>(j)) == twist_W(j, P3, disc).matrix(0, 0));
  CHECK(d.interval == disc.scaled(3));

  DiffModule m = test_module(Scalar(P2, qq(1, 4)), 1, 1, 1, P2, disc);
  DiffModule dm = frobenius_descendant(m);
  CHECK(dm.matrix == mat(P2, {{mono(P2, 0), mono(P2, qq(1, 8))}, {mono(P2, qq(1, 8), -1), mono(P2, qq(1, 2), -1)}}));

  DiffModule e0(FieldMode::eqchar0(8), Derivation::ddt, disc, PolyMatrix(FieldMode::eqchar0(8), 1, 1));
  try {
    frobenius_descendant(e0);
    FAIL("expected mode error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::mode_mismatch);
  }
}

TEST_CASE("test module examples") {
  DiffModule m = test_module(Scalar(P2, qq(1, 4)), 1, 1, 1, P2, disc);
  CHECK(m.rank() == 1);
  CHECK(m.matrix(0, 0) == mono(P2, qq(1, 4)));

  Q lam = qq(1, 9);
  DiffModule m3 = test_module(Scalar(P3, lam), 2, 3, 1, P3, disc);
  CHECK(m3.matrix == mat(P3, {{mono(P3, 0), mono(P3, 0), mono(P3, lam, 1)},
                              {mono(P3, 1, -1), mono(P3, 0), mono(P3, 0)},
                              {mono(P3, 0), mono(P3, 1, -1), mono(P3, 0)}}));

  DiffModule m2 = test_module(Scalar(P3, lam), 1, 1, 2, P3, Interval{ExtQ(0), ExtQ(4)});
  CHECK(m2.interval == Interval{ExtQ(0), ExtQ(2)});

  auto code = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::parse;
  };
  CHECK(code([&] { test_module(Scalar(P3, lam), 1, 2, 1, P3, disc); }) == Errc::parameter);
  CHECK(code([&] { test_module(Scalar(P3, lam), 1, 1, 3, P3, disc); }) == Errc::parameter);
  CHECK(code([&] { test_module(Scalar(P2, lam), 2, 1, 2, P2, disc); }) == Errc::parameter);
  CHECK(code([&] { test_module(Scalar(P2, lam), 3, 1, 3, P2, disc); }) == Errc::parameter);
  CHECK(code([&] { test_module(Scalar(P2, lam), 1, 1, 1, P3, disc); }) == Errc::mode_mismatch);
  FieldMode e0 = FieldMode::eqchar0(8);
  CHECK(code([&] { test_module(Scalar(e0, lam), 1, 2, 1, e0, disc); }) == Errc::parameter);
}

TEST_CASE("twist W examples") {
  CHECK(twist_W(0, P2, disc).matrix.is_zero());
  DiffModule w1 = twist_W(1, P2, annulus);
  CHECK(w1.matrix(0, 0) == mono(P2, qq(1, 2), -1));
  for (long j = 1; j < 3; ++j)
    CHECK(dual(twist_W(j, P3, disc)).matrix == -twist_W(j, P3, disc).matrix);
  // W_m^dual and W_{p-m} differ by the integer exponent shift t^{-1}: same radii.
  CHECK(module_radii(dual(twist_W(1, P3, annulus)), 0, 1) == module_radii(twist_W(2, P3, annulus), 0, 1));
  for (long p : {2L, 3L}) {
    FieldMode f = FieldMode::padic(p);
    RadiiMultiset r = module_radii(twist_W(1, f, annulus), 0, 2);
    CHECK(r.str() == "{(" + q_str(f.c_omega() * p) + ", 1)}");
  }
  auto code = [](long m, const FieldMode& f) {
    try {
      twist_W(m, f, disc);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::parse;
  };
  CHECK(code(2, P2) == Errc::index_range);
  CHECK(code(-1, P2) == Errc::index_range);
  CHECK(code(0, FieldMode::eqchar0(4)) == Errc::mode_mismatch);
}
