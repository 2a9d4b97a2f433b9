#include "glct/cyclo.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>

namespace glct {

long long checked_add(long long a, long long b) {
  long long r;
  if (__builtin_add_overflow(a, b, &r)) fail(Err::Overflow, "integer overflow in add");
  return r;
}

long long checked_mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) fail(Err::Overflow, "integer overflow in mul");
  return r;
}

static std::uint32_t mod_exp(long long e, std::uint32_t m) {
  long long r = e % static_cast<long long>(m);
  if (r < 0) r += m;
  return static_cast<std::uint32_t>(r);
}

CycValue CycValue::integer(std::uint32_t m, long long c) {
  CycValue v{m, {}};
  if (c != 0) v.terms.emplace_back(0, c);
  return v;
}

bool CycValue::operator==(const CycValue& o) const {
  check(m == o.m, Err::ConductorMismatch, "comparing values of different conductor");
  return is_zero(sub(*this, o));
}

CycValue root_of_unity(std::uint32_t m, long long e) {
  check(m >= 1, Err::Config, "conductor must be positive");
  return CycValue{m, {{mod_exp(e, m), 1}}};
}

static void push_term(std::vector<std::pair<std::uint32_t, long long>>& out, std::uint32_t e,
                      long long c) {
  if (c != 0) out.emplace_back(e, c);
}

static CycValue from_map(std::uint32_t m, const std::map<std::uint32_t, long long>& acc) {
  CycValue v{m, {}};
  for (const auto& [e, c] : acc) push_term(v.terms, e, c);
  return v;
}

CycValue add(const CycValue& a, const CycValue& b) {
  check(a.m == b.m, Err::ConductorMismatch, "add: mixed conductors (lift explicitly)");
  CycValue v{a.m, {}};
  std::size_t i = 0, j = 0;
  while (i < a.terms.size() || j < b.terms.size()) {
    if (j == b.terms.size() || (i < a.terms.size() && a.terms[i].first < b.terms[j].first)) {
      v.terms.push_back(a.terms[i++]);
    } else if (i == a.terms.size() || b.terms[j].first < a.terms[i].first) {
      v.terms.push_back(b.terms[j++]);
    } else {
      push_term(v.terms, a.terms[i].first, checked_add(a.terms[i].second, b.terms[j].second));
      ++i, ++j;
    }
  }
  return v;
}

CycValue mul(const CycValue& a, const CycValue& b) {
  check(a.m == b.m, Err::ConductorMismatch, "mul: mixed conductors (lift explicitly)");
  std::map<std::uint32_t, long long> acc;
  for (const auto& [ea, ca] : a.terms)
    for (const auto& [eb, cb] : b.terms) {
      std::uint32_t e = (ea + eb) % a.m;
      acc[e] = checked_add(acc.count(e) ? acc[e] : 0, checked_mul(ca, cb));
    }
  return from_map(a.m, acc);
}

CycValue neg(const CycValue& a) {
  CycValue v = a;
  for (auto& t : v.terms) t.second = -t.second;
  return v;
}

CycValue sub(const CycValue& a, const CycValue& b) { return add(a, neg(b)); }

CycValue conj(const CycValue& a) {
  CycValue v{a.m, {}};
  for (const auto& [e, c] : a.terms) v.terms.emplace_back(e == 0 ? 0 : a.m - e, c);
  std::sort(v.terms.begin(), v.terms.end());
  return v;
}

CycValue scaled(const CycValue& a, long long k) {
  if (k == 0) return CycValue::zero(a.m);
  CycValue v = a;
  for (auto& t : v.terms) t.second = checked_mul(t.second, k);
  return v;
}

CycValue lift(const CycValue& a, std::uint32_t M) {
  check(M % a.m == 0, Err::ConductorMismatch, "lift: target conductor not a multiple");
  std::uint32_t f = M / a.m;
  CycValue v{M, {}};
  for (const auto& [e, c] : a.terms) v.terms.emplace_back(e * f, c);
  return v;
}

std::uint32_t euler_phi(std::uint32_t m) {
  std::uint32_t r = m;
  for (std::uint32_t p = 2; p * p <= m; ++p)
    if (m % p == 0) {
      r -= r / p;
      while (m % p == 0) m /= p;
    }
  if (m > 1) r -= r / m;
  return r;
}

// Exact division of integer polynomials (divisor monic), used both for the
// Phi_m recursion and for reduction mod Phi_m.
static std::vector<long long> poly_divide_exact(std::vector<long long> num,
                                                const std::vector<long long>& den) {
  int dn = static_cast<int>(num.size()) - 1;
  int dd = static_cast<int>(den.size()) - 1;
  std::vector<long long> quot(dn - dd + 1, 0);
  for (int i = dn; i >= dd; --i) {
    long long c = num[i];
    if (c == 0) continue;
    quot[i - dd] = c;
    for (int j = 0; j <= dd; ++j) num[i - dd + j] = checked_add(num[i - dd + j], -checked_mul(c, den[j]));
  }
  for (long long c : num) check(c == 0, Err::NotDivisible, "inexact polynomial division");
  return quot;
}

const std::vector<long long>& cyclotomic_poly(std::uint32_t m) {
  static std::map<std::uint32_t, std::vector<long long>> table;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  check(m >= 1 && m <= 10000, Err::BoundExceeded, "cyclotomic conductor above bound");
  auto it = table.find(m);
  if (it != table.end()) return it->second;
  std::vector<long long> num(m + 1, 0);
  num[0] = -1;
  num[m] = 1;
  for (std::uint32_t d = 1; d < m; ++d)
    if (m % d == 0) {
      auto found = table.find(d);
      if (found == table.end()) {
        // recurse without holding a second lock: compute divisors bottom-up
        // (all proper divisors are strictly smaller, so iteration order works)
        std::vector<long long> sub(d + 1, 0);
        sub[0] = -1;
        sub[d] = 1;
        for (std::uint32_t e = 1; e < d; ++e)
          if (d % e == 0) sub = poly_divide_exact(std::move(sub), table.at(e));
        found = table.emplace(d, std::move(sub)).first;
      }
      num = poly_divide_exact(std::move(num), found->second);
    }
  return table.emplace(m, std::move(num)).first->second;
}

std::vector<long long> reduced_coeffs(const CycValue& a) {
  const auto& phi = cyclotomic_poly(a.m);
  std::size_t deg = phi.size() - 1;
  std::vector<long long> dense(a.m, 0);
  for (const auto& [e, c] : a.terms) dense[e] = checked_add(dense[e], c);
  for (std::size_t i = a.m; i-- > deg;) {
    long long c = dense[i];
    if (c == 0) continue;
    dense[i] = 0;
    for (std::size_t j = 0; j < deg; ++j)
      dense[i - deg + j] = checked_add(dense[i - deg + j], -checked_mul(c, phi[j]));
  }
  dense.resize(deg);
  return dense;
}

CycValue reduce(const CycValue& a) {
  auto coeffs = reduced_coeffs(a);
  CycValue v{a.m, {}};
  for (std::uint32_t e = 0; e < coeffs.size(); ++e) push_term(v.terms, e, coeffs[e]);
  return v;
}

bool is_zero(const CycValue& a) {
  for (long long c : reduced_coeffs(a))
    if (c != 0) return false;
  return true;
}

long long as_integer(const CycValue& a) {
  auto coeffs = reduced_coeffs(a);
  for (std::size_t e = 1; e < coeffs.size(); ++e)
    check(coeffs[e] == 0, Err::NotRational, "value is not a rational integer");
  return coeffs.empty() ? 0 : coeffs[0];
}

long long divide_exact(long long v, long long k) {
  check(k != 0, Err::Config, "division by zero");
  check(v % k == 0, Err::NotDivisible, "inexact integer division");
  return v / k;
}

CycValue divide_exact(const CycValue& a, long long k) {
  check(k != 0, Err::Config, "division by zero");
  CycValue v = reduce(a);
  for (auto& t : v.terms) t.second = divide_exact(t.second, k);
  return v;
}

std::complex<double> approx(const CycValue& a) {
  std::complex<double> s = 0;
  const double tau = 6.283185307179586476925287;
  for (const auto& [e, c] : a.terms)
    s += static_cast<double>(c) *
         std::exp(std::complex<double>(0, tau * static_cast<double>(e) / a.m));
  return s;
}

void CycAccum::add(const CycValue& v, long long scale) {
  check(v.m == m, Err::ConductorMismatch, "accumulator conductor mismatch");
  if (scale == 0) return;
  for (const auto& [e, c] : v.terms) dense[e] = checked_add(dense[e], checked_mul(c, scale));
}

void CycAccum::merge(const CycAccum& other) {
  check(other.m == m, Err::ConductorMismatch, "accumulator conductor mismatch");
  for (std::uint32_t e = 0; e < m; ++e) dense[e] = checked_add(dense[e], other.dense[e]);
}

CycValue CycAccum::value() const {
  CycValue v{m, {}};
  for (std::uint32_t e = 0; e < m; ++e) push_term(v.terms, e, dense[e]);
  return v;
}

} // namespace glct
