#ifndef GLCT_CHARS_HPP
#define GLCT_CHARS_HPP

#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <vector>

#include "glct/matrices.hpp"
#include "glct/oracle.hpp"

namespace glct {

/// Symbolic representation data: a cuspidal of GL_n given by a regular
/// character theta of F_{q^(n*level)}^x, a one-dimensional chi(det),
/// a two-factor parabolically induced pair, or a reference into an oracle
/// character table.
struct CharSpec {
  enum class Kind { Cuspidal, DetChar, Induced, OracleRow };

  Kind kind = Kind::DetChar;
  int n = 1;
  int level = 1;
  MultChar chi; // Cuspidal: theta at level n*level; DetChar: chi at level
  std::shared_ptr<CharSpec> left, right;
  std::shared_ptr<const CharTable> table;
  int row = -1;
  std::string table_tag;

  std::string key() const;
};

/// Throws NotRegular unless theta has a full Frobenius orbit.
CharSpec cuspidal_spec(const FieldTower& T, int n, int level, std::uint64_t theta_exp);
CharSpec det_char_spec(const FieldTower& T, int n, int level, std::uint64_t chi_exp);
CharSpec induced_spec(CharSpec left, CharSpec right);
CharSpec oracle_row_spec(std::shared_ptr<const CharTable> table, int row, int n, int level,
                         std::string tag);

long long dim_of(const FieldTower& T, const CharSpec& s);
/// lcm of the q^d - 1 his values live in (and p for nothing here; additive
/// characters carry their own conductor).
std::uint64_t natural_conductor(const FieldTower& T, const CharSpec& s);

CharSpec dual_spec(const FieldTower& T, const CharSpec& s);
CharSpec twist_spec(const FieldTower& T, const CharSpec& s, const MultChar& chi);
CharSpec frobenius_spec(const FieldTower& T, const CharSpec& s);
bool iso_test(const FieldTower& T, const CharSpec& a, const CharSpec& b);
/// Basechange to the quadratic extension of the spec's coefficient field:
/// even n becomes the induced pair (theta, theta^Frob) on GL_(n/2) pairs;
/// odd n stays cuspidal with theta inflated through the norm.
CharSpec basechange_spec(const FieldTower& T, const CharSpec& s);

/// psi_A(X) = psi_0(tr(AX)) with psi_0(x) = zeta_p^(Tr(x)); nondegenerate
/// iff A has full rank.
struct AdditiveChar {
  MatF A;
};
CycValue additive_char_value(const FieldTower& T, const AdditiveChar& psi, const MatF& X,
                             std::uint32_t conductor);

/// Memoized exact evaluation.  Class-level values are cached per
/// (spec, class); the invariant-subspace pair decompositions behind induced
/// characters are cached per (class, k).  Concurrent reads, single writer.
class CharCache {
public:
  /// Value at a conjugacy class, at the spec's natural conductor.
  CycValue value(const FieldTower& T, const CharSpec& s, const ClassData& c);
  /// Value at a group element (geometric for induced specs).
  CycValue value(const FieldTower& T, const CharSpec& s, const MatF& g);

  struct PairDecomp {
    // ((class on W, class on V/W), multiplicity)
    std::vector<std::pair<std::pair<ClassData, ClassData>, long long>> pairs;
  };
  const PairDecomp& decomposition(const FieldTower& T, const ClassData& c, int k);

private:
  CycValue compute(const FieldTower& T, const CharSpec& s, const ClassData& c);

  std::shared_mutex mu_;
  std::map<std::pair<std::string, std::string>, CycValue> values_;
  std::map<std::string, std::unique_ptr<PairDecomp>> decomps_;
};

/// Green's formula for a cuspidal character at a primary class, cached
/// nowhere; CharCache::value is the normal entry point.
CycValue cuspidal_char_value(const FieldTower& T, const CharSpec& s, const ClassData& c);
CycValue det_char_value(const FieldTower& T, const CharSpec& s, const ClassData& c);

/// Exact self/cross inner product over the full group, class-indexed:
/// (1/|G|) sum |c| A(c) conj(B(c)).
long long inner_product_full(const FieldTower& T, CharCache& cache, const CharSpec& a,
                             const CharSpec& b);

} // namespace glct

#endif
