#ifndef GLCT_MATRICES_HPP
#define GLCT_MATRICES_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "glct/fields.hpp"

namespace glct {

/// Dense matrix over a tower level, row-major field-element indices.
struct MatF {
  int level = 1;
  int n = 0;
  std::vector<std::uint32_t> a;

  std::uint32_t& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  std::uint32_t at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
  bool operator==(const MatF&) const = default;
};

/// Conjugacy class of GL_n over a level: canonically ordered multiset of
/// (monic irreducible polynomial != x, partition) pairs with
/// sum deg(f)*|lambda(f)| = n.
struct ClassData {
  int level = 1;
  int n = 0;
  std::vector<std::pair<Poly, std::vector<int>>> pairs;

  bool operator==(const ClassData&) const = default;
};

/// Subspace of F^n in reduced row echelon form (rows are basis vectors).
struct Subspace {
  int level = 1;
  int ambient = 0;
  std::vector<std::vector<std::uint32_t>> basis;

  int dim() const { return static_cast<int>(basis.size()); }
};

// ---- basic matrix arithmetic -------------------------------------------------

MatF mat_identity(const FieldTower& T, int level, int n);
MatF mat_zero(int level, int n);
MatF mat_mul(const FieldTower& T, const MatF& a, const MatF& b);
MatF mat_add(const FieldTower& T, const MatF& a, const MatF& b);
std::vector<std::uint32_t> mat_apply(const FieldTower& T, const MatF& g,
                                     const std::vector<std::uint32_t>& v);
FieldElem mat_det(const FieldTower& T, const MatF& g);
MatF mat_inv(const FieldTower& T, const MatF& g); // SingularMatrix
MatF mat_pow(const FieldTower& T, MatF g, std::uint64_t k);
int mat_rank(const FieldTower& T, MatF g);
MatF companion_matrix(const FieldTower& T, const Poly& f);
MatF direct_sum(const MatF& a, const MatF& b);
/// Characteristic polynomial det(xI - g), division-free subset expansion.
Poly char_poly(const FieldTower& T, const MatF& g);

// ---- conjugacy classes ---------------------------------------------------------

/// Primary rational canonical data of an invertible matrix: factor the
/// characteristic polynomial; the partition attached to each irreducible f
/// is the conjugate of the kernel-dimension jump sequence of f(g)^k.
ClassData class_of(const FieldTower& T, const MatF& g);
/// Block-diagonal representative built from companion matrices of f^k.
MatF rep_of_class(const FieldTower& T, const ClassData& c);
FieldElem class_det(const FieldTower& T, const ClassData& c);
ClassData merge_classes(const ClassData& a, const ClassData& b);
std::string class_to_string(const FieldTower& T, const ClassData& c);
ClassData class_from_string(const FieldTower& T, const std::string& s);
bool class_less(const ClassData& a, const ClassData& b);

// ---- embeddings ---------------------------------------------------------------

/// View GL_m(F_{q^D}) inside GL_{m r}(F_{q^d}), r = D/d: each entry becomes
/// its r x r multiplication matrix on the power basis {1, gen[D], ...}.
MatF restrict_scalars(const FieldTower& T, const MatF& g, int d);
/// The n=... quadratic case of restrict_scalars (D = 2d).
MatF weil_embed(const FieldTower& T, const MatF& g);
/// Class of the scalar-restricted matrix, computed on class data directly.
ClassData weil_class(const FieldTower& T, const ClassData& c);
/// Entrywise embedding GL_n(F_{q^d}) -> GL_n(F_{q^D}).
MatF mat_embed(const FieldTower& T, const MatF& g, int D);
MatF levi_embed(const FieldTower& T, const MatF& g1, const MatF& g2);
/// Entrywise x -> x^(q^sub_level): the Galois action relative to the subfield.
MatF frobenius_map(const FieldTower& T, const MatF& g, int sub_level);
MatF unipotent_embed(const FieldTower& T, const MatF& X);

// ---- Shintani norm and basechange of classes -----------------------------------

/// Class of g*sigma(g) descended to the subfield: the norm class.
ClassData shintani_norm(const FieldTower& T, const MatF& g, int sub_level);
/// Descend a sigma-stable class over F_{q^(2d)} to F_{q^d}: sigma-fixed
/// factors map down, sigma-pairs {f, f^sigma} (equal partitions required)
/// merge to (f * f^sigma, lambda).
ClassData descend_class(const FieldTower& T, const ClassData& c, int sub_level);
/// Factor each polynomial over the extension, copying partitions.
ClassData basechange_class(const FieldTower& T, const ClassData& c, int ext_level);

// ---- subspaces -----------------------------------------------------------------

std::vector<Subspace> invariant_subspaces(const FieldTower& T, const MatF& g, int k);
std::pair<MatF, MatF> restrict_and_quotient(const FieldTower& T, const MatF& g, const Subspace& W);
long long gaussian_binomial(std::uint64_t Q, int n, int k);

// ---- orders and enumeration ------------------------------------------------------

long long group_order(const FieldTower& T, int n, int level);
long long centralizer_order(const FieldTower& T, const ClassData& c);
long long class_size(const FieldTower& T, const ClassData& c);
std::vector<ClassData> enumerate_classes(const FieldTower& T, int n, int level);
/// Row-by-row enumeration with an invertibility filter; throws BoundExceeded
/// when the group order exceeds the bound.
std::vector<MatF> enumerate_group(const FieldTower& T, int n, int level,
                                  long long bound = 200000);

} // namespace glct

#endif
