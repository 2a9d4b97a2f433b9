#include "glct/cyclo.hpp"

#include <random>

#include "doctest.h"

using namespace glct;

TEST_CASE("roots of unity reduce against minimal polynomials") {
  // zeta_3 + zeta_3^2 = -1
  auto v = add(root_of_unity(3, 1), root_of_unity(3, 2));
  CHECK(as_integer(v) == -1);
  // zeta_m^m = 1
  for (std::uint32_t m : {2u, 5u, 12u, 30u}) CHECK(root_of_unity(m, m) == CycValue::integer(m, 1));
  // conj(zeta_5) * zeta_5 = 1
  CHECK(as_integer(mul(conj(root_of_unity(5, 1)), root_of_unity(5, 1))) == 1);
}

TEST_CASE("cyclotomic polynomials") {
  CHECK(cyclotomic_poly(6) == std::vector<long long>{1, -1, 1});
  CHECK(cyclotomic_poly(8) == std::vector<long long>{1, 0, 0, 0, 1});
  CHECK(cyclotomic_poly(1) == std::vector<long long>{-1, 1});
  for (std::uint32_t m = 1; m <= 100; ++m)
    CHECK(cyclotomic_poly(m).size() == euler_phi(m) + 1);
}

TEST_CASE("integer extraction") {
  CHECK(as_integer(CycValue::integer(7, 3)) == 3);
  CHECK_THROWS_AS((void)as_integer(root_of_unity(5, 1)), Error);
  CHECK(as_integer(scaled(root_of_unity(4, 2), -2)) == 2); // -2*zeta_4^2 = 2
}

TEST_CASE("exact division") {
  CHECK(divide_exact(6, 3) == 2);
  auto v = add(scaled(root_of_unity(3, 1), 3), CycValue::integer(3, 3));
  CHECK(divide_exact(v, 3) == add(root_of_unity(3, 1), CycValue::integer(3, 1)));
  CHECK_THROWS_AS((void)divide_exact(5, 2), Error);
}

TEST_CASE("conductor discipline") {
  CHECK_THROWS_AS((void)add(root_of_unity(3, 1), root_of_unity(5, 1)), Error);
  auto lifted = lift(root_of_unity(3, 1), 15);
  CHECK(lifted == root_of_unity(15, 5));
  CHECK_THROWS_AS((void)lift(root_of_unity(4, 1), 15), Error);
}

TEST_CASE("ring axioms on random triples") {
  std::mt19937 rng(20240137);
  for (std::uint32_t m : {4u, 9u, 15u, 24u}) {
    auto rnd = [&] {
      CycValue v = CycValue::zero(m);
      for (int t = 0; t < 4; ++t)
        v = add(v, scaled(root_of_unity(m, static_cast<long long>(rng() % m)),
                          static_cast<long long>(rng() % 9) - 4));
      return v;
    };
    for (int trial = 0; trial < 25; ++trial) {
      auto a = rnd(), b = rnd(), c = rnd();
      CHECK(mul(a, add(b, c)) == add(mul(a, b), mul(a, c)));
      CHECK(mul(mul(a, b), c) == mul(a, mul(b, c)));
      CHECK(add(a, b) == add(b, a));
      // conj is an involutive ring automorphism
      CHECK(conj(conj(a)) == a);
      CHECK(conj(mul(a, b)) == mul(conj(a), conj(b)));
    }
  }
}

TEST_CASE("reduce is idempotent and matches float evaluation") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    std::uint32_t m = 2 + rng() % 40;
    CycValue v = CycValue::zero(m);
    for (int t = 0; t < 5; ++t)
      v = add(v, scaled(root_of_unity(m, static_cast<long long>(rng() % m)),
                        static_cast<long long>(rng() % 7) - 3));
    auto r = reduce(v);
    CHECK(reduce(r) == r);
    CHECK(std::abs(approx(r) - approx(v)) < 1e-6);
  }
}

TEST_CASE("accumulator agrees with term-by-term addition") {
  std::mt19937 rng(99);
  std::uint32_t m = 30;
  CycAccum acc(m);
  CycValue ref = CycValue::zero(m);
  for (int t = 0; t < 50; ++t) {
    auto v = add(root_of_unity(m, static_cast<long long>(rng() % m)),
                 CycValue::integer(m, static_cast<long long>(rng() % 5) - 2));
    long long w = static_cast<long long>(rng() % 11) - 5;
    acc.add(v, w);
    ref = add(ref, scaled(v, w));
  }
  CHECK(acc.value() == ref);
}

TEST_CASE("overflow is detected") {
  long long big = (1LL << 62);
  auto v = scaled(root_of_unity(3, 1), big);
  CHECK_THROWS_AS((void)add(v, v), Error);
  CHECK_THROWS_AS((void)checked_mul(big, 4), Error);
}
