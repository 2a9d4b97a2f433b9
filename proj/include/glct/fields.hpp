#ifndef GLCT_FIELDS_HPP
#define GLCT_FIELDS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "glct/cyclo.hpp"
#include "glct/error.hpp"

namespace glct {

/// Element of F_{q^d}: the tower level plus an index encoding the residue
/// polynomial over F_q in base-q digits (digit i = coefficient of x^i).
struct FieldElem {
  int level = 1;
  std::uint32_t idx = 0;

  bool operator==(const FieldElem&) const = default;
  bool is_zero() const { return idx == 0; }
};

/// Multiplicative character of F_{q^d}^x as an exponent a relative to the
/// tower generator: theta(gen[d]^j) = zeta_{q^d-1}^{a j}.
struct MultChar {
  int level = 1;
  std::uint64_t exponent = 0;

  bool operator==(const MultChar&) const = default;
};

/// Dense polynomial over a tower level, constant coefficient first.
struct Poly {
  int level = 1;
  std::vector<std::uint32_t> c;

  int degree() const { return static_cast<int>(c.size()) - 1; }
  bool operator==(const Poly&) const = default;
};

/// Compatible chain of finite fields F_q c F_{q^d1} c ... with a fixed
/// generator per level.  Generators are norm-compatible across levels
/// (gen[d1] = Nm(gen[d2]) for d1 | d2), which makes embedding, norm,
/// restriction and inflation of characters pure exponent arithmetic.
/// Immutable after construction; all operations are const.
class FieldTower {
public:
  FieldTower(std::uint64_t q, std::vector<int> degrees,
             std::uint64_t element_bound = std::uint64_t(1) << 20);

  std::uint64_t q() const { return q_; }
  std::uint64_t p() const { return p_; }
  int e() const { return e_; }
  const std::vector<int>& degrees() const { return degrees_; }
  bool has_level(int d) const;

  std::uint64_t level_size(int d) const;   // q^d
  std::uint64_t level_order(int d) const;  // q^d - 1
  const Poly& defining_poly(int d) const;  // over F_q
  FieldElem gen(int d) const;
  FieldElem zero(int d) const { return {d, 0}; }
  FieldElem one(int d) const;
  FieldElem element(int d, std::uint32_t idx) const;

  // field arithmetic
  FieldElem add(FieldElem a, FieldElem b) const;
  FieldElem sub(FieldElem a, FieldElem b) const;
  FieldElem neg(FieldElem a) const;
  FieldElem mul(FieldElem a, FieldElem b) const;
  FieldElem inv(FieldElem a) const;
  FieldElem pow(FieldElem a, long long k) const;
  /// x -> x^(q^k), the k-th power of the arithmetic Frobenius over F_q.
  FieldElem frobenius(FieldElem a, int k = 1) const;

  /// Coefficients of the residue polynomial over F_q (length = level).
  std::vector<std::uint32_t> digits(FieldElem a) const;
  FieldElem from_digits(int d, const std::vector<std::uint32_t>& digits) const;

  std::uint64_t dlog(FieldElem a) const;
  FieldElem from_dlog(int d, std::uint64_t j) const;

  FieldElem embed(FieldElem a, int d2) const;
  FieldElem norm_to_subfield(FieldElem a, int d) const;
  /// Trace of a level-1 element down to the prime field, as 0..p-1.
  std::uint32_t trace_to_prime(FieldElem a) const;

  /// Versioned JSON descriptor (q, degrees, polynomials, generators); the
  /// hash keys every cache derived from this tower.
  std::string descriptor_json() const;
  std::uint64_t descriptor_hash() const;

private:
  struct Level {
    int d = 1;
    std::uint64_t size = 0; // q^d
    Poly defining;          // over F_q, monic of degree d
    std::uint32_t gen_idx = 0;
    std::vector<std::uint32_t> exp_t; // size q^d - 1
    std::vector<std::uint32_t> log_t; // size q^d, log_t[0] unused
  };

  const Level& level(int d) const;
  std::uint32_t base_add(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t base_mul(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t base_neg(std::uint32_t a) const;
  std::uint32_t add_digits(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t base_neg_level(int d, std::uint32_t idx) const;

  // polynomial-basis multiplication, used during construction and as the
  // fallback the tables are generated from
  std::uint32_t mul_poly_basis(const Level& L, std::uint32_t a, std::uint32_t b) const;

  std::uint64_t q_, p_;
  int e_;
  std::uint64_t element_bound_;
  std::vector<int> degrees_;
  std::vector<std::uint32_t> bq_add_, bq_mul_; // q x q base-field tables
  std::map<int, Level> levels_;

  friend struct PolyOps;
};

// ---- multiplicative characters --------------------------------------------

/// theta(x) as an element of Z[zeta_M]; (q^d - 1) | M required.
CycValue char_eval(const FieldTower& T, const MultChar& theta, FieldElem x, std::uint64_t conductor);
CycValue char_eval(const FieldTower& T, const MultChar& theta, FieldElem x);

MultChar make_char(const FieldTower& T, int level, std::uint64_t exponent);
MultChar restrict_char(const FieldTower& T, const MultChar& theta, int d);
MultChar inflate_char_by_norm(const FieldTower& T, const MultChar& chi, int d);
MultChar frobenius_twist(const FieldTower& T, const MultChar& theta, int k);
std::vector<std::uint64_t> char_orbit(const FieldTower& T, const MultChar& theta, int step);
bool is_regular(const FieldTower& T, const MultChar& theta, int n_factors, int step);

// ---- polynomials over tower levels -----------------------------------------

Poly poly_trim(Poly f);
Poly poly_make(const FieldTower& T, int level, std::vector<std::uint32_t> coeffs);
Poly poly_x(int level);
Poly poly_one(int level);
bool poly_is_zero(const Poly& f);
Poly poly_add(const FieldTower& T, const Poly& a, const Poly& b);
Poly poly_sub(const FieldTower& T, const Poly& a, const Poly& b);
Poly poly_mul(const FieldTower& T, const Poly& a, const Poly& b);
Poly poly_scale(const FieldTower& T, const Poly& a, FieldElem s);
std::pair<Poly, Poly> poly_divmod(const FieldTower& T, const Poly& a, const Poly& b);
Poly poly_mod(const FieldTower& T, const Poly& a, const Poly& b);
Poly poly_gcd(const FieldTower& T, Poly a, Poly b); // monic
Poly poly_powmod(const FieldTower& T, const Poly& base, std::uint64_t e, const Poly& mod);
Poly poly_monic(const FieldTower& T, const Poly& f);
Poly poly_derivative(const FieldTower& T, const Poly& f);
FieldElem poly_eval(const FieldTower& T, const Poly& f, FieldElem x);
/// Coefficientwise Frobenius x -> x^(q^k).
Poly poly_frobenius(const FieldTower& T, const Poly& f, int k);

bool poly_is_irreducible(const FieldTower& T, const Poly& f);
/// Full factorization with multiplicities, canonically sorted
/// (degree, then coefficient order).
std::vector<std::pair<Poly, int>> poly_factor(const FieldTower& T, const Poly& f);
/// All monic irreducibles of the given degree at a level, sorted.
std::vector<Poly> all_irreducibles(const FieldTower& T, int level, int degree);
/// Roots of f among level elements of f's level, ascending by index.
std::vector<FieldElem> poly_roots(const FieldTower& T, const Poly& f);

std::string poly_to_string(const Poly& f);
Poly poly_from_string(int level, const std::string& s);

/// Canonical order used everywhere classes are sorted: degree first, then
/// the base-q digit encoding of the coefficient vector.
bool poly_less(const Poly& a, const Poly& b);

} // namespace glct

#endif
