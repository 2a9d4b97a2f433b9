#include "glct/oracle.hpp"

#include <algorithm>
#include <map>

#include "doctest.h"

using namespace glct;

TEST_CASE("dense group classes agree with polynomial-partition enumeration") {
  for (auto [q, n] : {std::pair<std::uint64_t, int>{2, 2}, {3, 2}, {2, 3}, {4, 2}}) {
    FieldTower T(q, {1, 2});
    DenseGroup G = build_dense_group(T, n, 1);
    CHECK(G.order() == group_order(T, n, 1));
    auto classes = enumerate_classes(T, n, 1);
    CHECK(static_cast<std::size_t>(G.num_classes()) == classes.size());
    // bijection preserving sizes
    std::map<std::string, long long> brute;
    for (int c = 0; c < G.num_classes(); ++c)
      brute[class_to_string(T, class_of(T, G.elements[G.class_rep[c]]))] = G.class_sizes[c];
    for (const ClassData& c : classes) {
      REQUIRE(brute.count(class_to_string(T, c)) == 1);
      CHECK(brute[class_to_string(T, c)] == class_size(T, c));
    }
  }
}

TEST_CASE("GL_2(F_2) table is the symmetric group table") {
  FieldTower T(2, {1, 2});
  DenseGroup G = build_dense_group(T, 2, 1);
  CHECK(G.num_classes() == 3);
  std::vector<long long> sizes = G.class_sizes;
  std::sort(sizes.begin(), sizes.end());
  CHECK(sizes == std::vector<long long>{1, 2, 3});
  CharTable table = dixon_table(T, G);
  verify_table(T, table);
  std::vector<long long> degrees;
  for (const auto& row : table.rows) degrees.push_back(row.degree);
  CHECK(degrees == std::vector<long long>{1, 1, 2});
}

TEST_CASE("GL_2(F_3) table") {
  FieldTower T(3, {1, 2});
  DenseGroup G = build_dense_group(T, 2, 1);
  CHECK(G.num_classes() == 8);
  CharTable table = dixon_table(T, G);
  verify_table(T, table);
  std::vector<long long> degrees;
  for (const auto& row : table.rows) degrees.push_back(row.degree);
  CHECK(degrees == std::vector<long long>{1, 1, 2, 2, 2, 3, 3, 4});
  // three cuspidal rows of degree q-1 = 2, one per regular orbit
  auto ident = identify_cuspidal(T, table, 2, 1);
  CHECK(ident.size() == 3);
  for (const auto& [rep, row] : ident) CHECK(table.rows[row].degree == 2);
}

TEST_CASE("GL_3(F_2) table") {
  FieldTower T(2, {1, 2, 3, 6});
  DenseGroup G = build_dense_group(T, 3, 1);
  CHECK(G.num_classes() == 6);
  CharTable table = dixon_table(T, G);
  verify_table(T, table);
  std::vector<long long> degrees;
  for (const auto& row : table.rows) degrees.push_back(row.degree);
  CHECK(degrees == std::vector<long long>{1, 3, 3, 6, 7, 8});
  auto ident = identify_cuspidal(T, table, 3, 1);
  CHECK(ident.size() == 2); // the two degree-3 rows
  for (const auto& [rep, row] : ident) CHECK(table.rows[row].degree == 3);
}

TEST_CASE("trivial-character multiplicity through the oracle") {
  FieldTower T(3, {1, 2});
  DenseGroup G = build_dense_group(T, 2, 1);
  CharTable table = dixon_table(T, G);
  int trivial_row = -1;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.rows[r].degree != 1) continue;
    bool all_one = true;
    for (const CycValue& v : table.rows[r].values)
      if (!(reduce(v) == CycValue::integer(table.conductor, 1))) all_one = false;
    if (all_one) trivial_row = static_cast<int>(r);
  }
  REQUIRE(trivial_row >= 0);
  // m(trivial, trivial over any H) = 1: take H = the whole group
  std::vector<std::pair<int, CycValue>> vals;
  for (std::size_t e = 0; e < G.elements.size(); ++e)
    vals.emplace_back(G.elem_class[e], CycValue::integer(1, 1));
  CHECK(oracle_multiplicity(table, trivial_row, vals) == 1);
}

TEST_CASE("table serialization round trip") {
  FieldTower T(2, {1, 2});
  DenseGroup G = build_dense_group(T, 2, 1);
  CharTable table = dixon_table(T, G);
  std::string js = table_to_json(T, table, 2, 1);
  CharTable back = table_from_json(T, js, 2, 1);
  CHECK(back.conductor == table.conductor);
  CHECK(back.group_order == table.group_order);
  CHECK(back.class_sizes == table.class_sizes);
  REQUIRE(back.rows.size() == table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    CHECK(back.rows[r].degree == table.rows[r].degree);
    for (std::size_t i = 0; i < table.rows[r].values.size(); ++i)
      CHECK(back.rows[r].values[i] == table.rows[r].values[i]);
  }
  verify_table(T, back);
  FieldTower other(3, {1, 2});
  CHECK_THROWS_AS(table_from_json(other, js, 2, 1), Error);
}
