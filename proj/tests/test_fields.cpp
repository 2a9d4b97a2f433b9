#include "glct/fields.hpp"

#include <random>
#include <set>

#include "doctest.h"

using namespace glct;

TEST_CASE("tower construction basics") {
  FieldTower T(2, {1, 2, 4});
  CHECK(T.p() == 2);
  CHECK(T.level_order(4) == 15);
  // generator order is exactly q^d - 1 at every level
  for (int d : T.degrees()) {
    FieldElem g = T.gen(d);
    std::uint64_t ord = T.level_order(d);
    CHECK(T.pow(g, static_cast<long long>(ord)) == T.one(d));
    for (std::uint64_t ell : {2ull, 3ull, 5ull})
      if (ord % ell == 0) CHECK_FALSE(T.pow(g, static_cast<long long>(ord / ell)) == T.one(d));
  }

  FieldTower T3(3, {1, 2, 4});
  CHECK(T3.level_order(4) == 80);

  CHECK_THROWS_AS(FieldTower(6, {1}), Error);
  CHECK_THROWS_AS(FieldTower(2, {30}), Error); // 2^30 above default bound

  // determinism: same inputs, identical descriptor
  CHECK(FieldTower(3, {1, 2, 4}).descriptor_json() == T3.descriptor_json());
  CHECK(T.descriptor_json() != T3.descriptor_json());
}

TEST_CASE("defining polynomials are irreducible and norm-compatibility holds") {
  for (auto [q, degs] : {std::pair<std::uint64_t, std::vector<int>>{2, {1, 2, 4}},
                         {3, {1, 2, 4}},
                         {2, {1, 2, 3, 6}},
                         {4, {1, 2}},
                         {5, {1, 2}}}) {
    FieldTower T(q, degs);
    int top = T.degrees().back();
    for (int d : T.degrees()) {
      if (d > 1) CHECK(poly_is_irreducible(T, T.defining_poly(d)));
      // gen[d] = Nm(gen[top])
      CHECK(T.norm_to_subfield(T.gen(top), d) == T.gen(d));
      // embed(gen[d]) = gen[top]^((q^top-1)/(q^d-1))
      CHECK(T.embed(T.gen(d), top) ==
            T.pow(T.gen(top), static_cast<long long>(T.level_order(top) / T.level_order(d))));
    }
  }
}

TEST_CASE("embeddings are transitive ring embeddings (exhaustive small levels)") {
  FieldTower T(2, {1, 2, 4});
  for (std::uint32_t i = 0; i < 4; ++i) {
    FieldElem x = T.element(2, i);
    CHECK(T.embed(T.embed(x, 2), 4) == T.embed(x, 4));
    for (std::uint32_t j = 0; j < 4; ++j) {
      FieldElem y = T.element(2, j);
      CHECK(T.embed(T.add(x, y), 4) == T.add(T.embed(x, 4), T.embed(y, 4)));
      CHECK(T.embed(T.mul(x, y), 4) == T.mul(T.embed(x, 4), T.embed(y, 4)));
    }
  }
  FieldTower S(2, {1, 2, 3, 6});
  for (std::uint32_t i = 1; i < 8; ++i) {
    FieldElem x = S.element(3, i);
    CHECK(S.embed(S.embed(x, 3), 6) == S.embed(x, 6));
    // norm transitivity
    CHECK(S.norm_to_subfield(S.embed(x, 6), 1) == S.norm_to_subfield(S.norm_to_subfield(S.embed(x, 6), 3), 1));
  }
}

TEST_CASE("norms") {
  FieldTower T(3, {1, 2});
  // quadratic norm is x^(q+1)
  for (std::uint32_t i = 1; i < 9; ++i) {
    FieldElem x = T.element(2, i);
    CHECK(T.embed(T.norm_to_subfield(x, 1), 2) == T.pow(x, 4));
  }
  CHECK(T.norm_to_subfield(T.one(2), 1) == T.one(1));
  CHECK_THROWS_AS(T.norm_to_subfield(T.zero(2), 1), Error);

  FieldTower T2(2, {1, 2, 4});
  FieldElem nm = T2.norm_to_subfield(T2.gen(4), 2);
  CHECK(nm == T2.gen(2)); // gen[4]^5 lands on the level-2 generator
  CHECK(T2.pow(T2.embed(nm, 4), 3) == T2.one(4));
  CHECK_FALSE(T2.embed(nm, 4) == T2.one(4));
}

TEST_CASE("dlog") {
  FieldTower T(3, {1, 2});
  CHECK(T.dlog(T.one(1)) == 0);
  CHECK(T.dlog(T.gen(2)) == 1);
  CHECK(T.dlog(T.element(1, 2)) == 1); // 2 generates F_3^x
  CHECK_THROWS_AS(T.dlog(T.zero(2)), Error);
}

TEST_CASE("char_eval") {
  FieldTower T(2, {1, 2});
  MultChar theta = make_char(T, 2, 1);
  CHECK(char_eval(T, theta, T.one(2)) == CycValue::integer(3, 1));
  CHECK(char_eval(T, theta, T.gen(2)) == root_of_unity(3, 1));
  MultChar triv = make_char(T, 2, 0);
  for (std::uint32_t i = 1; i < 4; ++i)
    CHECK(char_eval(T, triv, T.element(2, i)) == CycValue::integer(3, 1));
  CHECK_THROWS_AS(char_eval(T, theta, T.zero(2)), Error);
  CHECK_THROWS_AS(char_eval(T, theta, T.gen(2), 4), Error); // 3 does not divide 4

  // multiplicativity, exhaustive on F_9
  FieldTower T3(3, {1, 2});
  MultChar th = make_char(T3, 2, 3);
  for (std::uint32_t i = 1; i < 9; ++i)
    for (std::uint32_t j = 1; j < 9; ++j) {
      FieldElem x = T3.element(2, i), y = T3.element(2, j);
      CHECK(char_eval(T3, th, T3.mul(x, y)) == mul(char_eval(T3, th, x), char_eval(T3, th, y)));
    }
}

TEST_CASE("restrict_char matches evaluation on the subfield") {
  FieldTower T(2, {1, 2, 4});
  MultChar theta = make_char(T, 4, 3);
  MultChar res = restrict_char(T, theta, 2);
  CHECK(res.exponent == 0); // 3 mod 3
  std::uint64_t M = 15;
  for (std::uint32_t i = 1; i < 4; ++i) {
    FieldElem x = T.element(2, i);
    CHECK(char_eval(T, res, x, M) == char_eval(T, theta, T.embed(x, 4), M));
  }

  FieldTower T3(3, {1, 2});
  MultChar th = make_char(T3, 2, 4);
  CHECK(restrict_char(T3, th, 1).exponent == 0); // 4 mod 2
  for (std::uint32_t i = 1; i < 3; ++i) {
    FieldElem x = T3.element(1, i);
    CHECK(char_eval(T3, restrict_char(T3, th, 1), x, 8) == char_eval(T3, th, T3.embed(x, 2), 8));
  }
  CHECK(restrict_char(T, make_char(T, 4, 0), 2).exponent == 0);
}

TEST_CASE("inflate_char_by_norm") {
  FieldTower T(3, {1, 2});
  MultChar chi = make_char(T, 1, 1);
  MultChar inf = inflate_char_by_norm(T, chi, 2);
  CHECK(inf.exponent == 4);
  for (std::uint32_t i = 1; i < 9; ++i) {
    FieldElem x = T.element(2, i);
    CHECK(char_eval(T, inf, x, 8) == char_eval(T, chi, T.norm_to_subfield(x, 1), 8));
  }
  CHECK(inflate_char_by_norm(T, make_char(T, 1, 0), 2).exponent == 0);
  FieldTower T2(2, {1, 2});
  CHECK(inflate_char_by_norm(T2, make_char(T2, 1, 0), 2).exponent == 0); // F_2^x is trivial
}

TEST_CASE("frobenius twists and orbits") {
  FieldTower T(2, {1, 2, 4});
  CHECK(frobenius_twist(T, make_char(T, 4, 3), 1).exponent == 6);
  CHECK(char_orbit(T, make_char(T, 4, 1), 1) == std::vector<std::uint64_t>{1, 2, 4, 8});
  CHECK(char_orbit(T, make_char(T, 4, 5), 1) == std::vector<std::uint64_t>{5, 10});
  CHECK(is_regular(T, make_char(T, 4, 1), 4, 1));
  CHECK_FALSE(is_regular(T, make_char(T, 4, 5), 4, 1));
  CHECK_FALSE(is_regular(T, make_char(T, 4, 0), 4, 1));
  // orbit sizes divide the ambient degree
  for (std::uint64_t a = 0; a < 15; ++a) CHECK(4 % char_orbit(T, make_char(T, 4, a), 1).size() == 0);
  // over E: orbits under q^2
  CHECK(is_regular(T, make_char(T, 4, 1), 2, 2));
}

TEST_CASE("trace to the prime field") {
  FieldTower T(4, {1, 2});
  CHECK(T.trace_to_prime(T.zero(1)) == 0);
  CHECK(T.trace_to_prime(T.one(1)) == 0); // 1 + 1 = 0 over F_4
  int ones = 0;
  for (std::uint32_t i = 0; i < 4; ++i) ones += T.trace_to_prime(T.element(1, i));
  CHECK(ones == 2); // the two non-subfield elements have trace 1
}

TEST_CASE("polynomial factorization") {
  std::mt19937 rng(4242);
  for (auto [q, lvl] : {std::pair<std::uint64_t, int>{2, 2}, {3, 2}, {4, 1}, {9, 1}, {5, 1}}) {
    FieldTower T(q, {1, 2});
    std::uint64_t Q = T.level_size(lvl);
    for (int trial = 0; trial < 30; ++trial) {
      int deg = 1 + static_cast<int>(rng() % 6);
      std::vector<std::uint32_t> cs(deg + 1);
      for (auto& c : cs) c = static_cast<std::uint32_t>(rng() % Q);
      cs[deg] = 1;
      Poly f{lvl, cs};
      auto factors = poly_factor(T, f);
      Poly prod = poly_one(lvl);
      int degsum = 0;
      for (const auto& [u, e] : factors) {
        CHECK(poly_is_irreducible(T, u));
        for (int i = 0; i < e; ++i) prod = poly_mul(T, prod, u);
        degsum += u.degree() * e;
      }
      CHECK(prod == poly_monic(T, f));
      CHECK(degsum == deg);
    }
  }
  // counts of monic irreducibles match the necklace numbers
  FieldTower T2(2, {1, 2});
  CHECK(all_irreducibles(T2, 1, 1).size() == 2);
  CHECK(all_irreducibles(T2, 1, 2).size() == 1);
  CHECK(all_irreducibles(T2, 1, 3).size() == 2);
  CHECK(all_irreducibles(T2, 1, 4).size() == 3);
  CHECK(all_irreducibles(T2, 2, 2).size() == 6); // (16-4)/2 over F_4
}

TEST_CASE("polynomial strings round-trip") {
  FieldTower T(3, {1, 2});
  for (const Poly& f : {Poly{1, {2, 0, 1}}, Poly{1, {1, 1}}, Poly{1, {0, 2, 0, 1}}, Poly{1, {1}}}) {
    CHECK(poly_from_string(1, poly_to_string(f)) == f);
  }
  CHECK(poly_to_string(Poly{1, {1, 1, 1}}) == "x^2+x+1");
  CHECK(poly_to_string(Poly{1, {2, 0, 1}}) == "x^2+2");
}
