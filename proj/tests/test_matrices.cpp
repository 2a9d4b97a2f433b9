#include "glct/matrices.hpp"

#include <map>
#include <random>
#include <set>

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

TEST_CASE("char_poly matches cofactor expansion on small random matrices") {
  FieldTower T(3, {1, 2});
  std::mt19937 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 1 + static_cast<int>(rng() % 3);
    MatF g = random_invertible(T, 1, n, rng);
    Poly cp = char_poly(T, g);
    CHECK(cp.degree() == n);
    CHECK(cp.c.back() == 1);
    // det(xI-g) at x=0 is (-1)^n det(g)
    FieldElem at0{1, cp.c[0]};
    FieldElem expect = mat_det(T, g);
    if (n % 2 != 0) expect = T.neg(expect);
    CHECK(at0 == expect);
    // Cayley-Hamilton: cp(g) = 0
    MatF acc = mat_zero(1, n);
    for (int i = n; i >= 0; --i) {
      acc = mat_mul(T, acc, g);
      for (int r = 0; r < n; ++r) acc.at(r, r) = T.add({1, acc.at(r, r)}, {1, cp.c[i]}).idx;
    }
    CHECK(acc == mat_zero(1, n));
  }
}

TEST_CASE("class_of on the spec's fixed examples") {
  FieldTower T2(2, {1, 2});
  MatF id2 = mat_identity(T2, 1, 2);
  CHECK(class_to_string(T2, class_of(T2, id2)) == "q2:n2:[x+1|1,1]");

  MatF comp = companion_matrix(T2, poly_from_string(1, "x^2+x+1"));
  CHECK(class_to_string(T2, class_of(T2, comp)) == "q2:n2:[x^2+x+1|1]");

  FieldTower T3(3, {1, 2});
  MatF u = mat_identity(T3, 1, 2);
  u.at(0, 1) = 1;
  CHECK(class_to_string(T3, class_of(T3, u)) == "q3:n2:[x+2|2]");

  CHECK_THROWS_AS(class_of(T2, mat_zero(1, 2)), Error);
}

TEST_CASE("class_of is conjugation invariant and representative-consistent") {
  std::mt19937 rng(13);
  for (auto [q, n] : {std::pair<std::uint64_t, int>{2, 3}, {3, 2}, {2, 4}, {4, 2}}) {
    FieldTower T(q, {1, 2});
    for (int trial = 0; trial < 20; ++trial) {
      MatF g = random_invertible(T, 1, n, rng);
      MatF x = random_invertible(T, 1, n, rng);
      MatF conj = mat_mul(T, x, mat_mul(T, g, mat_inv(T, x)));
      ClassData c = class_of(T, g);
      CHECK(class_of(T, conj) == c);
      CHECK(class_of(T, rep_of_class(T, c)) == c);
      CHECK(class_det(T, c) == mat_det(T, g));
      // string round trip
      CHECK(class_from_string(T, class_to_string(T, c)) == c);
    }
  }
}

TEST_CASE("weil embedding") {
  FieldTower T(2, {1, 2});
  // multiplication by omega (omega^2 = omega + 1) on the basis {1, omega}
  MatF w{2, 1, {T.gen(2).idx}};
  MatF img = weil_embed(T, w);
  CHECK(img == MatF{1, 2, {0, 1, 1, 1}});

  // identity goes to identity
  FieldTower T9(3, {1, 2});
  CHECK(weil_embed(T9, mat_identity(T9, 2, 2)) == mat_identity(T9, 1, 4));

  // group homomorphism + determinant norm + char polynomial on randoms
  std::mt19937 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    MatF g = random_invertible(T9, 2, 2, rng);
    MatF h = random_invertible(T9, 2, 2, rng);
    CHECK(weil_embed(T9, mat_mul(T9, g, h)) == mat_mul(T9, weil_embed(T9, g), weil_embed(T9, h)));
    FieldElem detE = mat_det(T9, g);
    FieldElem nm = T9.norm_to_subfield(detE, 1);
    CHECK(mat_det(T9, weil_embed(T9, g)) == nm);
    // char poly of the embedding = Nm of the char poly
    Poly cpE = char_poly(T9, g);
    Poly nmcp = poly_mul(T9, cpE, poly_frobenius(T9, cpE, 1));
    Poly cpF = char_poly(T9, weil_embed(T9, g));
    // nmcp has subfield coefficients; compare after embedding cpF
    Poly cpF_up{2, {}};
    cpF_up.c.resize(cpF.c.size());
    for (std::size_t i = 0; i < cpF.c.size(); ++i)
      cpF_up.c[i] = T9.embed({1, cpF.c[i]}, 2).idx;
    CHECK(cpF_up == nmcp);
    // class-level transform agrees with the matrix-level one
    CHECK(weil_class(T9, class_of(T9, g)) == class_of(T9, weil_embed(T9, g)));
  }
}

TEST_CASE("levi embedding merges class data") {
  FieldTower T(3, {1, 2});
  CHECK(levi_embed(T, mat_identity(T, 1, 2), mat_identity(T, 1, 2)) == mat_identity(T, 1, 4));
  MatF c = companion_matrix(T, poly_from_string(1, "x^2+x+2"));
  CHECK(class_to_string(T, class_of(T, levi_embed(T, c, c))) == "q3:n4:[x^2+x+2|1,1]");
  std::mt19937 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    MatF g1 = random_invertible(T, 1, 2, rng);
    MatF g2 = random_invertible(T, 1, 2, rng);
    CHECK(class_of(T, levi_embed(T, g1, g2)) ==
          merge_classes(class_of(T, g1), class_of(T, g2)));
  }
}

TEST_CASE("frobenius_map is an involution fixing the subfield") {
  FieldTower T(3, {1, 2});
  std::mt19937 rng(29);
  CHECK(frobenius_map(T, mat_identity(T, 2, 2), 1) == mat_identity(T, 2, 2));
  for (int trial = 0; trial < 100; ++trial) {
    MatF g = random_invertible(T, 2, 2, rng);
    CHECK(frobenius_map(T, frobenius_map(T, g, 1), 1) == g);
  }
  MatF sub = mat_embed(T, random_invertible(T, 1, 2, rng), 2);
  CHECK(frobenius_map(T, sub, 1) == sub);
}

TEST_CASE("shintani norm") {
  FieldTower T4(2, {1, 2});
  // n=1 over F_4/F_2: Nm(omega) = omega * omega^2 = 1
  MatF w{2, 1, {T4.gen(2).idx}};
  CHECK(class_to_string(T4, shintani_norm(T4, w, 1)) == "q2:n1:[x+1|1]");
  CHECK(shintani_norm(T4, mat_identity(T4, 2, 2), 1) ==
        class_of(T4, mat_identity(T4, 1, 2)));

  // n=1 over F_9/F_3: Nm(gen) = gen^4 which is the scalar 2
  FieldTower T9(3, {1, 2});
  MatF g{2, 1, {T9.gen(2).idx}};
  ClassData nm = shintani_norm(T9, g, 1);
  CHECK(class_to_string(T9, nm) == "q3:n1:[x+1|1]"); // root -1 = 2
}

TEST_CASE("descend and basechange round trip over all classes of GL_n(F_q^2)") {
  for (auto [q, n] : {std::pair<std::uint64_t, int>{2, 1}, {3, 1}, {2, 2}, {3, 2}}) {
    FieldTower T(q, {1, 2});
    // every class of GL_n(F_q) basechanges and descends back
    for (const ClassData& c : enumerate_classes(T, n, 1)) {
      ClassData up = basechange_class(T, c, 2);
      CHECK(descend_class(T, up, 1) == c);
    }
    // every sigma-stable class of GL_n(E) descends and basechanges back
    for (const ClassData& c : enumerate_classes(T, n, 2)) {
      ClassData back{2, c.n, {}};
      bool stable = true;
      for (const auto& [f, lambda] : c.pairs) {
        Poly fs = poly_frobenius(T, f, 1);
        auto it = std::find_if(c.pairs.begin(), c.pairs.end(), [&](const auto& pr) {
          return pr.first == fs && pr.second == lambda;
        });
        if (it == c.pairs.end()) stable = false;
      }
      if (!stable) continue;
      CHECK(basechange_class(T, descend_class(T, c, 1), 2) == c);
    }
  }
  // conjugate pair example over F_4
  FieldTower T(2, {1, 2});
  ClassData up = basechange_class(T, class_from_string(T, "q2:n2:[x^2+x+1|1]"), 2);
  CHECK(up.pairs.size() == 2); // splits into the two conjugate linear factors
  CHECK(descend_class(T, up, 1) == class_from_string(T, "q2:n2:[x^2+x+1|1]"));
  // odd-degree irreducible stays irreducible over the quadratic extension
  FieldTower T6(2, {1, 2, 3, 6});
  ClassData cubic{1, 3, {{poly_from_string(1, "x^3+x+1"), {1}}}};
  CHECK(basechange_class(T6, cubic, 2).pairs.size() == 1);
}

TEST_CASE("invariant subspaces and Gaussian binomials") {
  FieldTower T2(2, {1, 2});
  CHECK(invariant_subspaces(T2, mat_identity(T2, 1, 4), 2).size() == 35);
  MatF comp = companion_matrix(T2, poly_from_string(1, "x^4+x+1"));
  CHECK(invariant_subspaces(T2, comp, 2).empty());
  FieldTower T3(3, {1, 2});
  CHECK(invariant_subspaces(T3, mat_identity(T3, 1, 4), 2).size() == 130);
  for (int n = 1; n <= 5; ++n)
    for (int k = 0; k <= n; ++k) {
      CHECK(static_cast<long long>(invariant_subspaces(T2, mat_identity(T2, 1, n), k).size()) ==
            gaussian_binomial(2, n, k));
      if (n <= 4)
        CHECK(static_cast<long long>(invariant_subspaces(T3, mat_identity(T3, 1, n), k).size()) ==
              gaussian_binomial(3, n, k));
    }
}

TEST_CASE("restrict_and_quotient") {
  FieldTower T(3, {1, 2});
  MatF id = mat_identity(T, 1, 4);
  Subspace W{1, 4, {{1, 0, 0, 0}, {0, 1, 0, 0}}};
  auto [a, b] = restrict_and_quotient(T, id, W);
  CHECK(a == mat_identity(T, 1, 2));
  CHECK(b == mat_identity(T, 1, 2));

  std::mt19937 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    MatF g1 = random_invertible(T, 1, 2, rng);
    MatF g2 = random_invertible(T, 1, 2, rng);
    MatF g = levi_embed(T, g1, g2);
    auto [r, qt] = restrict_and_quotient(T, g, W);
    CHECK(r == g1);
    CHECK(qt == g2);
    // char poly multiplicativity on every invariant subspace
    for (const Subspace& V : invariant_subspaces(T, g, 2)) {
      auto [rv, qv] = restrict_and_quotient(T, g, V);
      CHECK(poly_mul(T, char_poly(T, rv), char_poly(T, qv)) == char_poly(T, g));
    }
  }
  MatF u = mat_identity(T, 1, 4);
  u.at(0, 2) = 1;
  Subspace notinv{1, 4, {{0, 0, 1, 0}, {0, 0, 0, 1}}};
  (void)restrict_and_quotient(T, u, Subspace{1, 4, {{1, 0, 0, 0}, {0, 1, 0, 0}}});
  CHECK_THROWS_AS(restrict_and_quotient(T, u, notinv), Error);
}

TEST_CASE("unipotent embedding") {
  FieldTower T(3, {1, 2});
  CHECK(unipotent_embed(T, mat_zero(1, 2)) == mat_identity(T, 1, 4));
  std::mt19937 rng(37);
  for (int trial = 0; trial < 50; ++trial) {
    MatF X = mat_zero(1, 2), Y = mat_zero(1, 2);
    for (auto& x : X.a) x = static_cast<std::uint32_t>(rng() % 3);
    for (auto& y : Y.a) y = static_cast<std::uint32_t>(rng() % 3);
    CHECK(mat_mul(T, unipotent_embed(T, X), unipotent_embed(T, Y)) ==
          unipotent_embed(T, mat_add(T, X, Y)));
    // Levi conjugation acts by (m1, m2): u(X) -> u(m1 X m2^-1)
    MatF m1 = random_invertible(T, 1, 2, rng);
    MatF m2 = random_invertible(T, 1, 2, rng);
    MatF levi = levi_embed(T, m1, m2);
    MatF lhs = mat_mul(T, levi, mat_mul(T, unipotent_embed(T, X), mat_inv(T, levi)));
    CHECK(lhs == unipotent_embed(T, mat_mul(T, m1, mat_mul(T, X, mat_inv(T, m2)))));
  }
}

TEST_CASE("group orders, centralizers, class sizes") {
  FieldTower T4(4, {1, 2});
  CHECK(group_order(T4, 2, 1) == 180);
  FieldTower T3(3, {1, 2});
  ClassData central = class_from_string(T3, "q3:n2:[x+2|1,1]");
  CHECK(centralizer_order(T3, central) == 48);
  FieldTower T2(2, {1, 2});
  long long total = 0;
  for (const ClassData& c : enumerate_classes(T2, 3, 1)) total += class_size(T2, c);
  CHECK(total == 168);

  // per-class sizes match explicit conjugation orbits on small groups
  for (auto [q, n] : {std::pair<std::uint64_t, int>{2, 2}, {3, 2}, {2, 3}}) {
    FieldTower T(q, {1, 2});
    auto elements = enumerate_group(T, n, 1);
    std::map<std::string, long long> orbit_count;
    for (const MatF& g : elements) orbit_count[class_to_string(T, class_of(T, g))]++;
    long long sum = 0;
    for (const ClassData& c : enumerate_classes(T, n, 1)) {
      CHECK(orbit_count[class_to_string(T, c)] == class_size(T, c));
      sum += class_size(T, c);
    }
    CHECK(sum == group_order(T, n, 1));
  }
}

TEST_CASE("class and group enumeration counts") {
  FieldTower T2(2, {1, 2});
  CHECK(enumerate_classes(T2, 2, 1).size() == 3);
  CHECK(enumerate_classes(T2, 4, 1).size() == 14);
  FieldTower T3(3, {1, 2});
  CHECK(enumerate_group(T3, 2, 1).size() == 48);
  CHECK(enumerate_classes(T3, 2, 1).size() == 8);
  CHECK(enumerate_group(T2, 2, 2).size() == 180); // GL_2(F_4)
  CHECK_THROWS_AS(enumerate_group(T3, 4, 1), Error);
}
