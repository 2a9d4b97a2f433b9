#include "glct/chars.hpp"

#include <random>

#include "doctest.h"

using namespace glct;

namespace {

MatF random_invertible(const FieldTower& T, int level, int n, std::mt19937& rng) {
  std::uint64_t Q = T.level_size(level);
  while (true) {
    MatF m = mat_zero(level, n);
    for (auto& x : m.a) x = static_cast<std::uint32_t>(rng() % Q);
    if (!mat_det(T, m).is_zero()) return m;
  }
}

} // namespace

TEST_CASE("dimensions and identity values") {
  FieldTower T3(3, {1, 2});
  CharCache cache;
  CharSpec cusp3 = cuspidal_spec(T3, 2, 1, 1);
  CHECK(dim_of(T3, cusp3) == 2); // q - 1
  FieldTower T2(2, {1, 2, 4});
  CharSpec cusp2 = cuspidal_spec(T2, 4, 1, 1);
  CHECK(dim_of(T2, cusp2) == 21); // 1 * 3 * 7
  CHECK(dim_of(T2, det_char_spec(T2, 3, 1, 0)) == 1);
  CharSpec ind = induced_spec(cuspidal_spec(T2, 2, 1, 1) /* over F_2 via level-2 theta */,
                              cuspidal_spec(T2, 2, 1, 1));
  CHECK(dim_of(T2, ind) == 35); // [4 2]_2 * 1 * 1
  // char value at the identity equals the dimension, for every variant
  for (const CharSpec& s : {cusp3, det_char_spec(T3, 2, 1, 1)}) {
    ClassData id = class_of(T3, mat_identity(T3, 1, s.n));
    CHECK(as_integer(cache.value(T3, s, id)) == dim_of(T3, s));
  }
  ClassData id4 = class_of(T2, mat_identity(T2, 1, 4));
  CHECK(as_integer(cache.value(T2, cusp2, id4)) == 21);
  CHECK(as_integer(cache.value(T2, ind, id4)) == 35);
}

TEST_CASE("cuspidal values on the classical GL_2 table shape") {
  FieldTower T(3, {1, 2});
  CharCache cache;
  CharSpec pi = cuspidal_spec(T, 2, 1, 1);
  std::uint64_t M = 8;
  // central class (x - z): (q-1) theta(z)
  for (std::uint32_t z = 1; z < 3; ++z) {
    Poly f{1, {T.neg({1, z}).idx, 1}};
    ClassData c{1, 2, {{f, {1, 1}}}};
    CycValue expect = scaled(char_eval(T, pi.chi, T.embed({1, z}, 2), M), 2);
    CHECK(reduce(lift(cache.value(T, pi, c), M)) == reduce(expect));
    // non-semisimple (x - z, (2)): -theta(z)
    ClassData cns{1, 2, {{f, {2}}}};
    CycValue expect2 = neg(char_eval(T, pi.chi, T.embed({1, z}, 2), M));
    CHECK(reduce(lift(cache.value(T, pi, cns), M)) == reduce(expect2));
  }
  // split regular classes vanish
  ClassData split{1, 2, {{Poly{1, {2, 1}}, {1}}, {Poly{1, {1, 1}}, {1}}}};
  CHECK(is_zero(cache.value(T, pi, split)));
  // elliptic: -(theta(alpha) + theta(alpha^q))
  for (const Poly& f : all_irreducibles(T, 1, 2)) {
    Poly lifted{2, {T.embed({1, f.c[0]}, 2).idx, T.embed({1, f.c[1]}, 2).idx, 1}};
    FieldElem alpha = poly_roots(T, lifted).front();
    ClassData c{1, 2, {{f, {1}}}};
    CycValue expect =
        neg(add(char_eval(T, pi.chi, alpha, M), char_eval(T, pi.chi, T.pow(alpha, 3), M)));
    CHECK(reduce(lift(cache.value(T, pi, c), M)) == reduce(expect));
  }

  // GL_2(F_2) cuspidal at the order-3 class: -(zeta_3 + zeta_3^2) = 1
  FieldTower T2(2, {1, 2});
  CharCache cache2;
  CharSpec sgn = cuspidal_spec(T2, 2, 1, 1);
  ClassData c3 = class_from_string(T2, "q2:n2:[x^2+x+1|1]");
  CHECK(as_integer(cache2.value(T2, sgn, c3)) == 1);
}

TEST_CASE("cuspidal characters vanish off primary classes") {
  FieldTower T(3, {1, 2});
  CharCache cache;
  CharSpec pi = cuspidal_spec(T, 2, 1, 3);
  for (const ClassData& c : enumerate_classes(T, 2, 1))
    if (c.pairs.size() > 1) CHECK(is_zero(cache.value(T, pi, c)));
}

TEST_CASE("det characters") {
  FieldTower T(2, {1, 2});
  CharCache cache;
  CharSpec triv = det_char_spec(T, 2, 1, 0);
  for (const ClassData& c : enumerate_classes(T, 2, 1))
    CHECK(as_integer(cache.value(T, triv, c)) == 1);
  // det of the companion of x^2+x+1 over F_2 is 1
  ClassData c = class_from_string(T, "q2:n2:[x^2+x+1|1]");
  CHECK(class_det(T, c) == T.one(1));
  FieldTower T9(3, {1, 2});
  CharCache c9;
  CharSpec chi = det_char_spec(T9, 2, 2, 1); // GL_2(F_9), chi = gen character
  ClassData idc = class_of(T9, mat_identity(T9, 2, 2));
  CHECK(as_integer(c9.value(T9, chi, idc)) == 1);
}

TEST_CASE("green formula matches the dixon oracle (small groups)") {
  struct Case {
    std::uint64_t q;
    int n;
    std::vector<int> degrees;
  };
  for (const Case& tc : {Case{2, 2, {1, 2}}, Case{3, 2, {1, 2}}, Case{2, 3, {1, 3}}}) {
    FieldTower T(tc.q, tc.degrees);
    DenseGroup G = build_dense_group(T, tc.n, 1);
    CharTable table = dixon_table(T, G);
    verify_table(T, table);
    auto ident = identify_cuspidal(T, table, tc.n, 1);
    CharCache cache;
    for (const auto& [rep, row] : ident) {
      CharSpec pi = cuspidal_spec(T, tc.n, 1, rep);
      for (std::size_t i = 0; i < table.reps.size(); ++i) {
        ClassData c = class_of(T, table.reps[i]);
        CycValue green = lift(cache.value(T, pi, c), table.conductor);
        CHECK(reduce(green) == reduce(table.rows[row].values[i]));
      }
    }
  }
}

TEST_CASE("induced characters: GL_2 principal series values") {
  FieldTower T(3, {1, 2});
  CharCache cache;
  for (std::uint64_t c1 : {0ull, 1ull})
    for (std::uint64_t c2 : {0ull, 1ull}) {
      if (c1 == c2) continue; // keep it irreducible
      CharSpec ps = induced_spec(det_char_spec(T, 1, 1, c1), det_char_spec(T, 1, 1, c2));
      MultChar l1 = make_char(T, 1, c1), l2 = make_char(T, 1, c2);
      std::uint64_t M = 2;
      for (std::uint32_t x = 1; x < 3; ++x) {
        for (std::uint32_t y = 1; y < 3; ++y) {
          MatF g = mat_zero(1, 2);
          g.at(0, 0) = x;
          g.at(1, 1) = y;
          CycValue got = lift(cache.value(T, ps, g), static_cast<std::uint32_t>(M));
          CycValue expect;
          if (x != y) {
            expect = add(mul(char_eval(T, l1, {1, x}, M), char_eval(T, l2, {1, y}, M)),
                         mul(char_eval(T, l2, {1, x}, M), char_eval(T, l1, {1, y}, M)));
          } else {
            expect = scaled(mul(char_eval(T, l1, {1, x}, M), char_eval(T, l2, {1, x}, M)), 4);
          }
          CHECK(reduce(got) == reduce(expect));
        }
      }
    }
}

TEST_CASE("element-level and class-level evaluation agree; induced is a class function") {
  FieldTower T(3, {1, 2});
  CharCache cache;
  CharSpec ind = induced_spec(cuspidal_spec(T, 2, 1, 1), cuspidal_spec(T, 2, 1, 3));
  std::mt19937 rng(41);
  for (int trial = 0; trial < 15; ++trial) {
    MatF g = random_invertible(T, 1, 4, rng);
    MatF x = random_invertible(T, 1, 4, rng);
    MatF conj = mat_mul(T, x, mat_mul(T, g, mat_inv(T, x)));
    CycValue direct = cache.value(T, ind, g);
    CHECK(reduce(direct) == reduce(cache.value(T, ind, conj)));
    CHECK(reduce(direct) == reduce(cache.value(T, ind, class_of(T, g))));
  }
}

TEST_CASE("dual, twist and frobenius act correctly on characters") {
  FieldTower T(3, {1, 2});
  CharCache cache;
  CharSpec pi = cuspidal_spec(T, 2, 1, 1);
  CHECK(dual_spec(T, pi).chi.exponent == 7); // -1 mod 8
  CHECK(iso_test(T, twist_spec(T, pi, make_char(T, 1, 0)), pi));
  std::uint64_t M = 8;
  for (const ClassData& c : enumerate_classes(T, 2, 1)) {
    // dual takes conjugate values
    CHECK(reduce(lift(cache.value(T, dual_spec(T, pi), c), M)) ==
          reduce(conj(lift(cache.value(T, pi, c), M))));
    // twisting multiplies by chi(det)
    MultChar chi = make_char(T, 1, 1);
    CycValue lhs = lift(cache.value(T, twist_spec(T, pi, chi), c), M);
    CycValue rhs = mul(lift(cache.value(T, pi, c), M),
                       char_eval(T, chi, class_det(T, c), M));
    CHECK(reduce(lhs) == reduce(rhs));
  }
  // frobenius on an E-level spec matches precomposition with the Galois map
  FieldTower T2(2, {1, 2});
  CharCache cache2;
  CharSpec piE = cuspidal_spec(T2, 1, 2, 1); // character of GL_1(F_4)
  CharSpec piS = frobenius_spec(T2, piE);
  for (std::uint32_t i = 1; i < 4; ++i) {
    MatF g{2, 1, {i}};
    CHECK(reduce(cache2.value(T2, piS, g)) ==
          reduce(cache2.value(T2, piE, frobenius_map(T2, g, 1))));
  }
}

TEST_CASE("iso_test") {
  FieldTower T(2, {1, 2, 4});
  CharSpec a1 = cuspidal_spec(T, 4, 1, 1);
  CHECK(iso_test(T, a1, cuspidal_spec(T, 4, 1, 2)));  // same Frobenius orbit
  CHECK_FALSE(iso_test(T, a1, cuspidal_spec(T, 4, 1, 7)));
  CHECK_FALSE(iso_test(T, a1, cuspidal_spec(T, 4, 1, 3)));
  CHECK_THROWS_AS((void)iso_test(T, a1, det_char_spec(T, 4, 1, 0)), Error);

  // agreement with pointwise character equality on GL_2(F_3)
  FieldTower T3(3, {1, 2});
  CharCache cache;
  std::vector<std::uint64_t> reps;
  for (std::uint64_t a = 1; a < 8; ++a)
    if (is_regular(T3, make_char(T3, 2, a), 2, 1)) {
      bool seen = false;
      for (std::uint64_t r : reps)
        if (iso_test(T3, cuspidal_spec(T3, 2, 1, a), cuspidal_spec(T3, 2, 1, r))) seen = true;
      if (!seen) reps.push_back(a);
    }
  CHECK(reps.size() == 3);
  for (std::uint64_t a : reps)
    for (std::uint64_t b : reps) {
      bool equal_everywhere = true;
      for (const ClassData& c : enumerate_classes(T3, 2, 1))
        if (!(reduce(cache.value(T3, cuspidal_spec(T3, 2, 1, a), c)) ==
              reduce(cache.value(T3, cuspidal_spec(T3, 2, 1, b), c))))
          equal_everywhere = false;
      CHECK(iso_test(T3, cuspidal_spec(T3, 2, 1, a), cuspidal_spec(T3, 2, 1, b)) ==
            equal_everywhere);
    }
}

TEST_CASE("basechange_spec") {
  FieldTower T(2, {1, 2, 4});
  CharSpec pi = cuspidal_spec(T, 4, 1, 1);
  CharSpec bc = basechange_spec(T, pi);
  REQUIRE(bc.kind == CharSpec::Kind::Induced);
  CHECK(bc.left->level == 2);
  CHECK(bc.left->chi.exponent == 1);
  CHECK(bc.right->chi.exponent == 2);
  // sigma-invariant under iso_test
  CHECK(iso_test(T, bc, frobenius_spec(T, bc)));

  // GL_1: basechange of chi is chi composed with the norm
  CharSpec chi = det_char_spec(T, 1, 1, 0);
  CharSpec chiE = basechange_spec(T, chi);
  CHECK(chiE.level == 2);
  CHECK(chiE.chi.exponent == 0);
  FieldTower T3(3, {1, 2});
  CharSpec chi3 = det_char_spec(T3, 1, 1, 1);
  CHECK(basechange_spec(T3, chi3).chi.exponent == 4);

  // odd size: cuspidal stays cuspidal with the inflated character
  FieldTower T6(2, {1, 2, 3, 6});
  CharSpec pi3 = cuspidal_spec(T6, 3, 1, 1);
  CharSpec bc3 = basechange_spec(T6, pi3);
  CHECK(bc3.kind == CharSpec::Kind::Cuspidal);
  CHECK(bc3.level == 2);
  CHECK(bc3.chi.exponent == 9); // 1 * (63/7)
}

TEST_CASE("self-orthogonality and cross-orthogonality of cuspidal specs") {
  for (auto [q, n, degrees] :
       {std::tuple<std::uint64_t, int, std::vector<int>>{2, 2, {1, 2}},
        {3, 2, {1, 2}},
        {4, 2, {1, 2}},
        {5, 2, {1, 2}},
        {2, 3, {1, 3}}}) {
    FieldTower T(q, degrees);
    CharCache cache;
    std::vector<std::uint64_t> reps;
    for (std::uint64_t a = 1; a < T.level_order(n); ++a) {
      if (!is_regular(T, make_char(T, n, a), n, 1)) continue;
      bool seen = false;
      for (std::uint64_t r : reps)
        if (iso_test(T, cuspidal_spec(T, n, 1, a), cuspidal_spec(T, n, 1, r))) seen = true;
      if (!seen) reps.push_back(a);
    }
    for (std::uint64_t a : reps)
      for (std::uint64_t b : reps) {
        long long ip = inner_product_full(T, cache, cuspidal_spec(T, n, 1, a),
                                          cuspidal_spec(T, n, 1, b));
        CHECK(ip == (iso_test(T, cuspidal_spec(T, n, 1, a), cuspidal_spec(T, n, 1, b)) ? 1 : 0));
      }
  }
}

TEST_CASE("additive characters") {
  FieldTower T(3, {1, 2});
  AdditiveChar psi{mat_identity(T, 1, 2)};
  std::uint32_t M = 3;
  CHECK(additive_char_value(T, psi, mat_zero(1, 2), M) == CycValue::integer(M, 1));
  std::mt19937 rng(43);
  for (int trial = 0; trial < 40; ++trial) {
    MatF X = mat_zero(1, 2), Y = mat_zero(1, 2);
    for (auto& x : X.a) x = static_cast<std::uint32_t>(rng() % 3);
    for (auto& y : Y.a) y = static_cast<std::uint32_t>(rng() % 3);
    CHECK(additive_char_value(T, psi, mat_add(T, X, Y), M) ==
          mul(additive_char_value(T, psi, X, M), additive_char_value(T, psi, Y, M)));
  }
  CHECK_THROWS_AS(additive_char_value(T, psi, mat_zero(1, 2), 8), Error); // 3 does not divide 8
}
