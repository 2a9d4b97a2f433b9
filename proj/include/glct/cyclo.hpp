#ifndef GLCT_CYCLO_HPP
#define GLCT_CYCLO_HPP

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "glct/error.hpp"

namespace glct {

// Overflow-checked 64-bit arithmetic. Character sums at desk scale stay far
// below 2^63, but a silent wraparound must never masquerade as a result.
long long checked_add(long long a, long long b);
long long checked_mul(long long a, long long b);

/// Element of Z[zeta_m]: a sparse integer combination of powers of zeta_m.
/// Values are kept unreduced; reduce() maps to the power basis of
/// Z[x]/Phi_m(x), which is the canonical form used for equality and
/// integer extraction.
struct CycValue {
  std::uint32_t m = 1;
  // sorted by exponent (each in [0,m)), no zero coefficients
  std::vector<std::pair<std::uint32_t, long long>> terms;

  static CycValue zero(std::uint32_t m) { return CycValue{m, {}}; }
  static CycValue integer(std::uint32_t m, long long c);

  bool operator==(const CycValue& o) const;
};

CycValue root_of_unity(std::uint32_t m, long long e);

CycValue add(const CycValue& a, const CycValue& b);
CycValue mul(const CycValue& a, const CycValue& b);
CycValue neg(const CycValue& a);
CycValue sub(const CycValue& a, const CycValue& b);
/// Complex conjugation: zeta^e -> zeta^(m-e).
CycValue conj(const CycValue& a);
CycValue scaled(const CycValue& a, long long k);
/// Lift to conductor M (m | M required).
CycValue lift(const CycValue& a, std::uint32_t M);

/// Coefficients of Phi_m, low degree first, computed by exact recursive
/// division of x^m - 1. Memoized; m is capped at 10^4.
const std::vector<long long>& cyclotomic_poly(std::uint32_t m);
std::uint32_t euler_phi(std::uint32_t m);

/// Canonical power-basis coefficients (length phi(m)) of a mod Phi_m.
std::vector<long long> reduced_coeffs(const CycValue& a);
CycValue reduce(const CycValue& a);
bool is_zero(const CycValue& a);

/// The value as a rational integer; throws NotRational if the reduced form
/// is not constant.  A NotRational out of a multiplicity computation means
/// an upstream modeling bug, never a rounding problem.
long long as_integer(const CycValue& a);

CycValue divide_exact(const CycValue& a, long long k);
long long divide_exact(long long v, long long k);

/// Floating-point evaluation; diagnostic cross-check only.
std::complex<double> approx(const CycValue& a);

/// Dense accumulator for inner-product loops: terms are added unreduced into
/// an exponent-indexed vector and reduced once at the end.  Addition is
/// commutative, so partial sums from worker threads combine by merge().
struct CycAccum {
  explicit CycAccum(std::uint32_t conductor) : m(conductor), dense(conductor, 0) {}

  std::uint32_t m;
  std::vector<long long> dense;

  void add(const CycValue& v, long long scale = 1);
  void merge(const CycAccum& other);
  CycValue value() const;
};

} // namespace glct

#endif
