#ifndef GLCT_ORACLE_HPP
#define GLCT_ORACLE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "glct/matrices.hpp"

namespace glct {

/// Fully materialized matrix group of order <= 25,000 with brute-force
/// conjugacy data.  Classes come from conjugation-orbit closure under a
/// generating set, independent of the polynomial-partition classification,
/// so the two can be cross-checked.
struct DenseGroup {
  int level = 1;
  int n = 0;
  std::vector<MatF> elements; // element 0 is the identity
  std::unordered_map<std::string, int> index;
  std::vector<int> inverse;
  std::vector<int> elem_class;      // element -> class id
  std::vector<int> class_rep;       // class id -> element index
  std::vector<long long> class_sizes;
  std::vector<int> inverse_class;   // class id -> class id of inverses

  long long order() const { return static_cast<long long>(elements.size()); }
  int num_classes() const { return static_cast<int>(class_rep.size()); }
  int lookup(const MatF& g) const;
};

std::string pack_matrix(const MatF& g);
DenseGroup build_dense_group(const FieldTower& T, int n, int level);

/// Exact character table: class sizes plus irreducible rows over Z[zeta_m],
/// m = exp(G).
struct CharTable {
  std::uint32_t conductor = 1;
  long long group_order = 0;
  std::vector<long long> class_sizes;
  std::vector<int> inverse_class;
  std::vector<MatF> reps;
  struct Row {
    long long degree = 0;
    std::vector<CycValue> values;
  };
  std::vector<Row> rows;
};

/// Dixon's modular method: class multiplication constants, simultaneous
/// eigenvectors over F_p with p = 1 mod exp(G), then an exact discrete
/// Fourier lift of the eigenvalue multiplicities back to Z[zeta].
CharTable dixon_table(const FieldTower& T, const DenseGroup& G);

/// Throws PatternViolation unless all orthogonality and degree identities
/// hold exactly.
void verify_table(const FieldTower& T, const CharTable& table);

/// Map each regular theta-orbit (keyed by its least exponent) to the table
/// row whose degree and elliptic-primary values match the orbit sums.
std::map<std::uint64_t, int> identify_cuspidal(const FieldTower& T, const CharTable& table,
                                               int n, int level);

/// Exact inner product of a table row against explicit subgroup data:
/// pairs (class id of the embedded element, native character value).
long long oracle_multiplicity(const CharTable& table, int row,
                              const std::vector<std::pair<int, CycValue>>& subgroup_values);

std::string table_to_json(const FieldTower& T, const CharTable& table, int n, int level);
CharTable table_from_json(const FieldTower& T, const std::string& text, int n, int level);

} // namespace glct

#endif
