#include "glct/fields.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <random>
#include <sstream>

namespace glct {

namespace {

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> ps;
  for (std::uint64_t p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      ps.push_back(p);
      while (n % p == 0) n /= p;
    }
  if (n > 1) ps.push_back(n);
  return ps;
}

std::uint64_t pow_u64_checked(std::uint64_t b, int e, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    check(r <= cap / b, Err::DegreeBoundExceeded, "field size exceeds the element bound");
    r *= b;
  }
  return r;
}

std::uint64_t mod_pow_u64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  if (m == 1) return 0;
  unsigned __int128 r = 1, base = b % m;
  while (e) {
    if (e & 1) r = r * base % m;
    base = base * base % m;
    e >>= 1;
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

} // namespace

// ---- base field tables ------------------------------------------------------

std::uint32_t FieldTower::base_add(std::uint32_t a, std::uint32_t b) const {
  return bq_add_[a * q_ + b];
}
std::uint32_t FieldTower::base_mul(std::uint32_t a, std::uint32_t b) const {
  return bq_mul_[a * q_ + b];
}
std::uint32_t FieldTower::base_neg(std::uint32_t a) const {
  if (p_ == 2) return a;
  // negate each base-p digit
  std::uint32_t r = 0, place = 1;
  for (int i = 0; i < e_; ++i) {
    std::uint32_t dig = a % p_;
    r += ((p_ - dig) % p_) * place;
    a /= p_;
    place *= p_;
  }
  return r;
}

FieldTower::FieldTower(std::uint64_t q, std::vector<int> degrees, std::uint64_t element_bound)
    : q_(q), element_bound_(element_bound) {
  check(q >= 2, Err::NotPrimePower, "base field size must be at least 2");
  auto ps = prime_factors(q);
  check(ps.size() == 1, Err::NotPrimePower, "base field size is not a prime power");
  p_ = ps[0];
  e_ = 0;
  for (std::uint64_t t = q; t > 1; t /= p_) ++e_;
  check(pow_u64_checked(p_, e_, q) == q, Err::NotPrimePower, "base field size is not a prime power");
  check(q <= 512, Err::DegreeBoundExceeded, "base field larger than supported");

  check(!degrees.empty(), Err::Config, "degree list must be nonempty");
  degrees.push_back(1);
  std::sort(degrees.begin(), degrees.end());
  degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());
  check(degrees.front() >= 1, Err::Config, "degrees must be positive");
  degrees_ = degrees;
  int top = degrees_.back();
  for (int d : degrees_)
    check(top % d == 0, Err::Config, "every tower degree must divide the top degree");
  (void)pow_u64_checked(q_, top, element_bound_); // throws DegreeBoundExceeded

  // base-field add/mul tables
  bq_add_.assign(q_ * q_, 0);
  bq_mul_.assign(q_ * q_, 0);
  if (e_ == 1) {
    for (std::uint32_t a = 0; a < q_; ++a)
      for (std::uint32_t b = 0; b < q_; ++b) {
        bq_add_[a * q_ + b] = (a + b) % p_;
        bq_mul_[a * q_ + b] = static_cast<std::uint32_t>((std::uint64_t(a) * b) % p_);
      }
  } else {
    // F_q = F_p[y]/(g), g the least monic irreducible of degree e over F_p
    const std::uint32_t p = static_cast<std::uint32_t>(p_);
    auto pmul = [&](const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
      std::vector<std::uint32_t> r(a.size() + b.size() - 1, 0);
      for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
      return r;
    };
    auto pmod = [&](std::vector<std::uint32_t> a, const std::vector<std::uint32_t>& m) {
      while (a.size() >= m.size()) {
        std::uint32_t c = a.back();
        if (c != 0)
          for (std::size_t j = 0; j < m.size(); ++j) {
            auto& t = a[a.size() - m.size() + j];
            t = (t + (p - c % p) * m[j]) % p;
          }
        a.pop_back();
      }
      return a;
    };
    auto decode = [&](std::uint32_t idx) {
      std::vector<std::uint32_t> v(e_);
      for (int i = 0; i < e_; ++i) {
        v[i] = idx % p;
        idx /= p;
      }
      return v;
    };
    // least monic irreducible over F_p: no roots and (for e<4) that suffices;
    // test degree <= 3 by root absence, degree >= 4 via gcd with x^(p^i)-x
    std::vector<std::uint32_t> g;
    for (std::uint32_t code = 0;; ++code) {
      std::vector<std::uint32_t> cand = decode(code);
      cand.resize(e_);
      cand.push_back(1);
      bool ok = true;
      for (std::uint32_t r = 0; r < p && ok; ++r) {
        std::uint32_t val = 0, pw = 1;
        for (std::uint32_t c : cand) {
          val = (val + c * pw) % p;
          pw = pw * r % p;
        }
        if (val == 0) ok = false;
      }
      if (ok && e_ >= 4) {
        // x^(p^i) mod cand by iterated powering
        std::vector<std::uint32_t> w = {0, 1};
        for (int i = 1; i <= e_ / 2 && ok; ++i) {
          std::vector<std::uint32_t> acc = {1}, base = w;
          std::uint64_t ex = p;
          while (ex) {
            if (ex & 1) acc = pmod(pmul(acc, base), cand);
            base = pmod(pmul(base, base), cand);
            ex >>= 1;
          }
          w = acc;
          if (e_ % i == 0) {
            // gcd(w - x, cand) must be 1
            std::vector<std::uint32_t> diff = w;
            diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
            diff[1] = (diff[1] + p - 1) % p;
            while (!diff.empty() && diff.back() == 0) diff.pop_back();
            std::vector<std::uint32_t> A = cand, B = diff;
            while (!B.empty()) {
              A = pmod(A, B);
              // make B monic-dividable: scale not needed for gcd over F_p if
              // we normalize by leading inverse
              if (!A.empty()) {
                std::uint32_t lead = B.back();
                std::uint32_t linv = 1;
                for (std::uint32_t t = 1; t < p; ++t)
                  if (lead * t % p == 1) linv = t;
                for (auto& cc : A) cc = cc * linv % p;
              }
              std::swap(A, B);
            }
            if (A.size() != 1) ok = false;
          }
        }
      }
      if (ok) {
        g = cand;
        break;
      }
    }
    auto encode = [&](const std::vector<std::uint32_t>& v) {
      std::uint32_t idx = 0, place = 1;
      for (int i = 0; i < e_; ++i) {
        idx += (i < static_cast<int>(v.size()) ? v[i] : 0) * place;
        place *= p;
      }
      return idx;
    };
    for (std::uint32_t a = 0; a < q_; ++a)
      for (std::uint32_t b = 0; b < q_; ++b) {
        auto va = decode(a), vb = decode(b);
        std::vector<std::uint32_t> s(e_);
        for (int i = 0; i < e_; ++i) s[i] = (va[i] + vb[i]) % p;
        bq_add_[a * q_ + b] = encode(s);
        bq_mul_[a * q_ + b] = encode(pmod(pmul(va, vb), g));
      }
  }

  // level shells with defining polynomials (least monic irreducible over F_q)
  for (int d : degrees_) {
    Level L;
    L.d = d;
    L.size = 1;
    for (int i = 0; i < d; ++i) L.size *= q_;
    if (d == 1) {
      L.defining = Poly{1, {0, 1}}; // x
    } else {
      // search in encoded order; irreducibility by the standard power test
      for (std::uint64_t code = 0;; ++code) {
        check(code < L.size, Err::Config, "no irreducible polynomial found");
        std::vector<std::uint32_t> cs(d + 1);
        std::uint64_t t = code;
        for (int i = 0; i < d; ++i) {
          cs[i] = static_cast<std::uint32_t>(t % q_);
          t /= q_;
        }
        cs[d] = 1;
        Poly f{1, cs};
        if (poly_is_irreducible(*this, f)) {
          L.defining = f;
          break;
        }
      }
    }
    levels_.emplace(d, std::move(L));
  }

  // top-level generator: least primitive element
  {
    Level& T = levels_.at(top);
    std::uint64_t ord = T.size - 1;
    auto pows = prime_factors(ord);
    auto order_ok = [&](std::uint32_t g) {
      for (std::uint64_t ell : pows) {
        std::uint32_t acc = 1, base = g;
        std::uint64_t ex = ord / ell;
        while (ex) {
          if (ex & 1) acc = mul_poly_basis(T, acc, base);
          base = mul_poly_basis(T, base, base);
          ex >>= 1;
        }
        if (acc == 1) return false;
      }
      return true;
    };
    std::uint32_t g = 0;
    for (std::uint32_t idx = 1; idx < T.size; ++idx)
      if (order_ok(idx)) {
        g = idx;
        break;
      }
    check(g != 0 || ord == 0, Err::Config, "no primitive element found");
    if (ord == 0) g = 1;
    T.gen_idx = g;
    T.exp_t.assign(ord == 0 ? 1 : ord, 1);
    T.log_t.assign(T.size, 0);
    std::uint32_t cur = 1;
    for (std::uint64_t j = 0; j < std::max<std::uint64_t>(ord, 1); ++j) {
      T.exp_t[j] = cur;
      T.log_t[cur] = static_cast<std::uint32_t>(j);
      cur = mul_poly_basis(T, cur, g);
    }
  }

  // sub-level generators, norm-compatible with the top generator
  int topd = top;
  for (int d : degrees_) {
    if (d == topd) continue;
    Level& L = levels_.at(d);
    const Level& T = levels_.at(topd);
    std::uint64_t k = (T.size - 1) / (L.size - 1 == 0 ? 1 : L.size - 1);
    if (L.size - 1 == 0) k = T.size - 1; // q = 2, level 1: norm lands on 1
    std::uint32_t gamma = L.size - 1 == 0 ? 1 : T.exp_t[k % (T.size - 1)];
    // minimal polynomial of gamma over F_q, computed in the top level
    std::vector<std::uint32_t> md; // scalar coefficients, degree d
    {
      Poly m{topd, {1}};
      std::uint32_t conj = gamma;
      for (int i = 0; i < d; ++i) {
        Poly lin{topd, {base_neg_level(topd, conj), 1}};
        m = poly_mul(*this, m, lin);
        // conj -> conj^q
        if (conj != 0) {
          std::uint64_t tord = T.size - 1;
          conj = T.exp_t[(static_cast<std::uint64_t>(T.log_t[conj]) * (q_ % tord)) % tord];
        }
      }
      md.resize(d + 1);
      for (int i = 0; i <= d; ++i) {
        std::uint32_t c = i < static_cast<int>(m.c.size()) ? m.c[i] : 0;
        check(c < q_, Err::Config, "minimal polynomial coefficient not in the base field");
        md[i] = c;
      }
    }
    // gen[d] = least root of md in the standalone level-d field
    std::uint64_t ord = L.size - 1;
    std::uint32_t gen = 0;
    if (ord == 0) {
      gen = 1;
    } else {
      for (std::uint32_t idx = 1; idx < L.size; ++idx) {
        std::uint32_t acc = 0;
        for (int i = d; i >= 0; --i) {
          acc = mul_poly_basis(L, acc, idx);
          acc = add_digits(acc, md[i]);
        }
        if (acc == 0) {
          gen = idx;
          break;
        }
      }
      check(gen != 0, Err::Config, "norm-compatible generator not found");
    }
    L.gen_idx = gen;
    L.exp_t.assign(std::max<std::uint64_t>(ord, 1), 1);
    L.log_t.assign(L.size, 0);
    std::uint32_t cur = 1;
    for (std::uint64_t j = 0; j < std::max<std::uint64_t>(ord, 1); ++j) {
      L.exp_t[j] = cur;
      check(j == 0 || cur != 1, Err::Config, "generator order too small");
      L.log_t[cur] = static_cast<std::uint32_t>(j);
      cur = mul_poly_basis(L, cur, gen);
    }
    check(cur == 1, Err::Config, "generator order mismatch");
  }
}

// digitwise base-p addition of packed indices (used before tables exist)
std::uint32_t FieldTower::add_digits(std::uint32_t a, std::uint32_t b) const {
  if (p_ == 2) return a ^ b;
  std::uint32_t r = 0, place = 1;
  while (a || b) {
    r += ((a % p_ + b % p_) % p_) * place;
    a /= p_;
    b /= p_;
    place *= p_;
  }
  return r;
}

std::uint32_t FieldTower::mul_poly_basis(const Level& L, std::uint32_t a, std::uint32_t b) const {
  if (a == 0 || b == 0) return 0;
  const int d = L.d;
  std::uint32_t da[32], db[32];
  for (int i = 0; i < d; ++i) {
    da[i] = a % q_;
    a /= q_;
    db[i] = b % q_;
    b /= q_;
  }
  std::uint32_t prod[63] = {0};
  for (int i = 0; i < d; ++i) {
    if (da[i] == 0) continue;
    for (int j = 0; j < d; ++j)
      if (db[j] != 0) prod[i + j] = base_add(prod[i + j], base_mul(da[i], db[j]));
  }
  // reduce modulo the monic defining polynomial
  for (int i = 2 * d - 2; i >= d; --i) {
    std::uint32_t c = prod[i];
    if (c == 0) continue;
    prod[i] = 0;
    for (int j = 0; j < d; ++j)
      prod[i - d + j] = base_add(prod[i - d + j], base_mul(base_neg(L.defining.c[j]), c));
  }
  std::uint32_t r = 0, place = 1;
  for (int i = 0; i < d; ++i) {
    r += prod[i] * place;
    place *= static_cast<std::uint32_t>(q_);
  }
  return r;
}

std::uint32_t FieldTower::base_neg_level(int d, std::uint32_t idx) const {
  // negate a packed level element (digitwise base-p complement)
  (void)d;
  if (p_ == 2) return idx;
  std::uint32_t r = 0, place = 1;
  while (idx) {
    r += ((p_ - idx % p_) % p_) * place;
    idx /= p_;
    place *= p_;
  }
  return r;
}

const FieldTower::Level& FieldTower::level(int d) const {
  auto it = levels_.find(d);
  check(it != levels_.end(), Err::NotSubfield, "level " + std::to_string(d) + " not in tower");
  return it->second;
}

bool FieldTower::has_level(int d) const { return levels_.count(d) != 0; }

std::uint64_t FieldTower::level_size(int d) const { return level(d).size; }
std::uint64_t FieldTower::level_order(int d) const { return level(d).size - 1; }
const Poly& FieldTower::defining_poly(int d) const { return level(d).defining; }
FieldElem FieldTower::gen(int d) const { return {d, level(d).gen_idx}; }
FieldElem FieldTower::one(int d) const {
  (void)level(d);
  return {d, 1};
}

FieldElem FieldTower::element(int d, std::uint32_t idx) const {
  check(idx < level(d).size, Err::Config, "element index out of range");
  return {d, idx};
}

FieldElem FieldTower::add(FieldElem a, FieldElem b) const {
  check(a.level == b.level, Err::LevelMismatch, "add: level mismatch");
  return {a.level, add_digits(a.idx, b.idx)};
}

FieldElem FieldTower::neg(FieldElem a) const { return {a.level, base_neg_level(a.level, a.idx)}; }

FieldElem FieldTower::sub(FieldElem a, FieldElem b) const { return add(a, neg(b)); }

FieldElem FieldTower::mul(FieldElem a, FieldElem b) const {
  check(a.level == b.level, Err::LevelMismatch, "mul: level mismatch");
  if (a.idx == 0 || b.idx == 0) return {a.level, 0};
  const Level& L = level(a.level);
  if (L.exp_t.empty()) return {a.level, mul_poly_basis(L, a.idx, b.idx)}; // during construction
  std::uint64_t ord = L.size - 1;
  return {a.level, L.exp_t[(static_cast<std::uint64_t>(L.log_t[a.idx]) + L.log_t[b.idx]) % ord]};
}

FieldElem FieldTower::inv(FieldElem a) const {
  check(a.idx != 0, Err::ZeroElement, "inverse of zero");
  const Level& L = level(a.level);
  if (L.exp_t.empty()) {
    for (std::uint32_t i = 1; i < L.size; ++i)
      if (mul_poly_basis(L, a.idx, i) == 1) return {a.level, i};
    fail(Err::Config, "inverse not found");
  }
  std::uint64_t ord = L.size - 1;
  return {a.level, L.exp_t[(ord - L.log_t[a.idx]) % ord]};
}

FieldElem FieldTower::pow(FieldElem a, long long k) const {
  const Level& L = level(a.level);
  if (a.idx == 0) {
    check(k > 0, Err::ZeroElement, "0^k needs k > 0");
    return a;
  }
  std::uint64_t ord = L.size - 1;
  if (ord == 0) return {a.level, 1};
  long long r = k % static_cast<long long>(ord);
  if (r < 0) r += ord;
  return {a.level, L.exp_t[(static_cast<std::uint64_t>(L.log_t[a.idx]) * r) % ord]};
}

FieldElem FieldTower::frobenius(FieldElem a, int k) const {
  if (a.idx == 0) return a;
  const Level& L = level(a.level);
  std::uint64_t ord = L.size - 1;
  if (ord == 0) return a;
  std::uint64_t f = mod_pow_u64(q_, static_cast<std::uint64_t>(k), ord);
  return {a.level, L.exp_t[(static_cast<std::uint64_t>(L.log_t[a.idx]) * f) % ord]};
}

std::vector<std::uint32_t> FieldTower::digits(FieldElem a) const {
  const Level& L = level(a.level);
  std::vector<std::uint32_t> v(L.d);
  std::uint32_t t = a.idx;
  for (int i = 0; i < L.d; ++i) {
    v[i] = t % q_;
    t /= q_;
  }
  return v;
}

FieldElem FieldTower::from_digits(int d, const std::vector<std::uint32_t>& digs) const {
  const Level& L = level(d);
  check(static_cast<int>(digs.size()) <= L.d, Err::Config, "too many digits");
  std::uint32_t idx = 0, place = 1;
  for (int i = 0; i < L.d; ++i) {
    std::uint32_t c = i < static_cast<int>(digs.size()) ? digs[i] : 0;
    check(c < q_, Err::Config, "digit out of range");
    idx += c * place;
    place *= static_cast<std::uint32_t>(q_);
  }
  return {d, idx};
}

std::uint64_t FieldTower::dlog(FieldElem a) const {
  check(a.idx != 0, Err::ZeroElement, "dlog of zero");
  const Level& L = level(a.level);
  check(!L.log_t.empty(), Err::LevelTooLarge, "no discrete-log table at this level");
  return L.log_t[a.idx];
}

FieldElem FieldTower::from_dlog(int d, std::uint64_t j) const {
  const Level& L = level(d);
  std::uint64_t ord = L.size - 1;
  if (ord == 0) return {d, 1};
  return {d, L.exp_t[j % ord]};
}

FieldElem FieldTower::embed(FieldElem a, int d2) const {
  int d1 = a.level;
  check(d2 % d1 == 0, Err::NotSubfield, "embed: source degree does not divide target");
  if (d1 == d2) return a;
  const Level& L2 = level(d2);
  if (a.idx == 0) return {d2, 0};
  std::uint64_t ord1 = level_order(d1), ord2 = L2.size - 1;
  if (ord1 == 0) return {d2, 1};
  std::uint64_t k = ord2 / ord1;
  return {d2, L2.exp_t[(dlog(a) * k) % ord2]};
}

FieldElem FieldTower::norm_to_subfield(FieldElem a, int d) const {
  int D = a.level;
  check(D % d == 0, Err::NotSubfield, "norm: target degree does not divide source");
  check(a.idx != 0, Err::ZeroElement, "norm of zero");
  std::uint64_t ordd = level_order(d);
  if (ordd == 0) return one(d);
  return from_dlog(d, dlog(a) % ordd);
}

std::uint32_t FieldTower::trace_to_prime(FieldElem a) const {
  check(a.level == 1, Err::LevelMismatch, "trace_to_prime expects a level-1 element");
  FieldElem s = zero(1), t = a;
  for (int i = 0; i < e_; ++i) {
    s = add(s, t);
    t = pow(t, static_cast<long long>(p_));
  }
  check(s.idx < p_, Err::Config, "trace did not land in the prime field");
  return s.idx;
}

std::string FieldTower::descriptor_json() const {
  std::ostringstream os;
  os << "{\"version\":1,\"q\":" << q_ << ",\"degrees\":[";
  for (std::size_t i = 0; i < degrees_.size(); ++i) os << (i ? "," : "") << degrees_[i];
  os << "],\"defining\":{";
  bool first = true;
  for (int d : degrees_) {
    os << (first ? "" : ",") << "\"" << d << "\":[";
    const auto& f = defining_poly(d);
    for (std::size_t i = 0; i < f.c.size(); ++i) os << (i ? "," : "") << f.c[i];
    os << "]";
    first = false;
  }
  os << "},\"generators\":{";
  first = true;
  for (int d : degrees_) {
    os << (first ? "" : ",") << "\"" << d << "\":" << gen(d).idx;
    first = false;
  }
  os << "}}";
  return os.str();
}

std::uint64_t FieldTower::descriptor_hash() const { return fnv1a(descriptor_json()); }

// ---- multiplicative characters ----------------------------------------------

MultChar make_char(const FieldTower& T, int level, std::uint64_t exponent) {
  std::uint64_t ord = T.level_order(level);
  return {level, ord == 0 ? 0 : exponent % ord};
}

CycValue char_eval(const FieldTower& T, const MultChar& theta, FieldElem x,
                   std::uint64_t conductor) {
  check(x.idx != 0, Err::ZeroElement, "character evaluated at zero");
  FieldElem y = x.level == theta.level ? x : T.embed(x, theta.level);
  std::uint64_t ord = T.level_order(theta.level);
  if (ord == 0) return CycValue::integer(static_cast<std::uint32_t>(conductor), 1);
  check(conductor % ord == 0, Err::ConductorMismatch, "conductor not divisible by q^d-1");
  std::uint64_t scale = conductor / ord;
  std::uint64_t e = (theta.exponent % ord) * (T.dlog(y) % ord) % ord;
  return root_of_unity(static_cast<std::uint32_t>(conductor),
                       static_cast<long long>(e * scale % conductor));
}

CycValue char_eval(const FieldTower& T, const MultChar& theta, FieldElem x) {
  std::uint64_t ord = T.level_order(theta.level);
  return char_eval(T, theta, x, ord == 0 ? 1 : ord);
}

MultChar restrict_char(const FieldTower& T, const MultChar& theta, int d) {
  check(theta.level % d == 0, Err::NotSubfield, "restrict: degree does not divide level");
  return make_char(T, d, theta.exponent % std::max<std::uint64_t>(T.level_order(d), 1));
}

MultChar inflate_char_by_norm(const FieldTower& T, const MultChar& chi, int d) {
  check(d % chi.level == 0, Err::NotSubfield, "inflate: level does not divide degree");
  std::uint64_t ord0 = T.level_order(chi.level), ord = T.level_order(d);
  if (ord0 == 0) return make_char(T, d, 0);
  return make_char(T, d, (chi.exponent % ord0) * (ord / ord0) % ord);
}

MultChar frobenius_twist(const FieldTower& T, const MultChar& theta, int k) {
  std::uint64_t ord = T.level_order(theta.level);
  if (ord == 0) return theta;
  return make_char(T, theta.level, theta.exponent * mod_pow_u64(T.q(), k, ord) % ord);
}

std::vector<std::uint64_t> char_orbit(const FieldTower& T, const MultChar& theta, int step) {
  std::vector<std::uint64_t> orbit;
  std::uint64_t ord = T.level_order(theta.level);
  if (ord == 0) return {0};
  std::uint64_t f = mod_pow_u64(T.q(), step, ord);
  std::uint64_t a = theta.exponent % ord;
  std::uint64_t cur = a;
  do {
    orbit.push_back(cur);
    cur = cur * f % ord;
  } while (cur != a);
  std::sort(orbit.begin(), orbit.end());
  return orbit;
}

bool is_regular(const FieldTower& T, const MultChar& theta, int n_factors, int step) {
  check(theta.level == n_factors * step, Err::LevelMismatch,
        "regularity asks level = n * step");
  return char_orbit(T, theta, step).size() == static_cast<std::size_t>(n_factors);
}

// ---- polynomials -------------------------------------------------------------

Poly poly_trim(Poly f) {
  while (!f.c.empty() && f.c.back() == 0) f.c.pop_back();
  return f;
}

Poly poly_make(const FieldTower& T, int level, std::vector<std::uint32_t> coeffs) {
  for (std::uint32_t c : coeffs)
    check(c < T.level_size(level), Err::Config, "coefficient out of range");
  return poly_trim(Poly{level, std::move(coeffs)});
}

Poly poly_x(int level) { return Poly{level, {0, 1}}; }
Poly poly_one(int level) { return Poly{level, {1}}; }
bool poly_is_zero(const Poly& f) { return f.c.empty(); }

Poly poly_add(const FieldTower& T, const Poly& a, const Poly& b) {
  check(a.level == b.level, Err::LevelMismatch, "poly_add: level mismatch");
  Poly r{a.level, std::vector<std::uint32_t>(std::max(a.c.size(), b.c.size()), 0)};
  for (std::size_t i = 0; i < r.c.size(); ++i) {
    FieldElem s = T.add({a.level, i < a.c.size() ? a.c[i] : 0}, {a.level, i < b.c.size() ? b.c[i] : 0});
    r.c[i] = s.idx;
  }
  return poly_trim(r);
}

Poly poly_sub(const FieldTower& T, const Poly& a, const Poly& b) {
  Poly nb = b;
  for (auto& c : nb.c) c = T.neg({b.level, c}).idx;
  return poly_add(T, a, nb);
}

Poly poly_mul(const FieldTower& T, const Poly& a, const Poly& b) {
  check(a.level == b.level, Err::LevelMismatch, "poly_mul: level mismatch");
  if (a.c.empty() || b.c.empty()) return Poly{a.level, {}};
  Poly r{a.level, std::vector<std::uint32_t>(a.c.size() + b.c.size() - 1, 0)};
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (std::size_t j = 0; j < b.c.size(); ++j) {
      if (b.c[j] == 0) continue;
      FieldElem t = T.mul({a.level, a.c[i]}, {a.level, b.c[j]});
      r.c[i + j] = T.add({a.level, r.c[i + j]}, t).idx;
    }
  }
  return poly_trim(r);
}

Poly poly_scale(const FieldTower& T, const Poly& a, FieldElem s) {
  check(s.level == a.level, Err::LevelMismatch, "poly_scale: level mismatch");
  Poly r = a;
  for (auto& c : r.c) c = T.mul({a.level, c}, s).idx;
  return poly_trim(r);
}

std::pair<Poly, Poly> poly_divmod(const FieldTower& T, const Poly& a, const Poly& b) {
  check(!b.c.empty(), Err::Config, "division by zero polynomial");
  Poly rem = a;
  int db = b.degree();
  FieldElem linv = T.inv({b.level, b.c.back()});
  Poly quot{a.level, {}};
  if (rem.degree() >= db) quot.c.assign(rem.degree() - db + 1, 0);
  while (rem.degree() >= db) {
    int shift = rem.degree() - db;
    FieldElem c = T.mul({rem.level, rem.c.back()}, linv);
    quot.c[shift] = c.idx;
    for (int j = 0; j <= db; ++j) {
      FieldElem t = T.mul({b.level, b.c[j]}, c);
      rem.c[shift + j] = T.sub({rem.level, rem.c[shift + j]}, t).idx;
    }
    rem = poly_trim(rem);
    if (rem.c.empty()) break;
  }
  return {poly_trim(quot), rem};
}

Poly poly_mod(const FieldTower& T, const Poly& a, const Poly& b) { return poly_divmod(T, a, b).second; }

Poly poly_monic(const FieldTower& T, const Poly& f) {
  if (f.c.empty()) return f;
  return poly_scale(T, f, T.inv({f.level, f.c.back()}));
}

Poly poly_gcd(const FieldTower& T, Poly a, Poly b) {
  while (!b.c.empty()) {
    Poly r = poly_mod(T, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a.c.empty() ? a : poly_monic(T, a);
}

Poly poly_powmod(const FieldTower& T, const Poly& base, std::uint64_t e, const Poly& mod) {
  Poly acc = poly_one(base.level), b = poly_mod(T, base, mod);
  while (e) {
    if (e & 1) acc = poly_mod(T, poly_mul(T, acc, b), mod);
    b = poly_mod(T, poly_mul(T, b, b), mod);
    e >>= 1;
  }
  return acc;
}

Poly poly_derivative(const FieldTower& T, const Poly& f) {
  Poly r{f.level, {}};
  if (f.c.size() <= 1) return r;
  r.c.assign(f.c.size() - 1, 0);
  for (std::size_t i = 1; i < f.c.size(); ++i) {
    // multiply coefficient by i in the field
    FieldElem m = T.zero(f.level);
    for (std::uint64_t k = 0; k < i % T.p(); ++k) m = T.add(m, T.one(f.level));
    r.c[i - 1] = T.mul({f.level, f.c[i]}, m).idx;
  }
  return poly_trim(r);
}

FieldElem poly_eval(const FieldTower& T, const Poly& f, FieldElem x) {
  check(x.level == f.level, Err::LevelMismatch, "poly_eval: level mismatch");
  FieldElem acc = T.zero(f.level);
  for (std::size_t i = f.c.size(); i-- > 0;) acc = T.add(T.mul(acc, x), {f.level, f.c[i]});
  return acc;
}

Poly poly_frobenius(const FieldTower& T, const Poly& f, int k) {
  Poly r = f;
  for (auto& c : r.c) c = T.frobenius({f.level, c}, k).idx;
  return r;
}

bool poly_is_irreducible(const FieldTower& T, const Poly& f) {
  int d = f.degree();
  if (d <= 0) return false;
  if (d == 1) return true;
  std::uint64_t Q = T.level_size(f.level);
  Poly x = poly_x(f.level);
  // w_i = x^(Q^i) mod f, computed iteratively
  Poly w = x;
  std::vector<Poly> frob(d + 1);
  for (int i = 1; i <= d; ++i) {
    w = poly_powmod(T, w, Q, f);
    frob[i] = w;
  }
  if (!(poly_sub(T, frob[d], x).c.empty())) return false;
  for (std::uint64_t ell : prime_factors(d)) {
    Poly g = poly_gcd(T, f, poly_sub(T, frob[d / ell], x));
    if (g.degree() != 0) return false;
  }
  return true;
}

namespace {

// equal-degree splitting (Cantor-Zassenhaus); g squarefree, all factors of
// degree d, deterministic seeding for reproducibility
void edf(const FieldTower& T, const Poly& g, int d, std::vector<Poly>& out, std::mt19937_64& rng) {
  int r = g.degree() / d;
  if (r == 1) {
    out.push_back(poly_monic(T, g));
    return;
  }
  std::uint64_t Q = T.level_size(g.level);
  while (true) {
    Poly h{g.level, std::vector<std::uint32_t>(g.degree(), 0)};
    for (auto& c : h.c) c = static_cast<std::uint32_t>(rng() % Q);
    h = poly_trim(h);
    if (h.c.empty()) continue;
    Poly s = poly_gcd(T, g, h);
    if (s.degree() > 0 && s.degree() < g.degree()) {
      edf(T, s, d, out, rng);
      edf(T, poly_divmod(T, g, s).first, d, out, rng);
      return;
    }
    Poly t;
    if (T.p() == 2) {
      // trace map over F_2
      int bits = 0;
      for (std::uint64_t v = Q; v > 1; v >>= 1) ++bits;
      bits *= d;
      t = Poly{g.level, {}};
      Poly cur = poly_mod(T, h, g);
      for (int i = 0; i < bits; ++i) {
        t = poly_add(T, t, cur);
        t = poly_mod(T, t, g);
        cur = poly_mod(T, poly_mul(T, cur, cur), g);
      }
    } else {
      std::uint64_t e = 1;
      for (int i = 0; i < d; ++i) e *= Q;
      t = poly_powmod(T, h, (e - 1) / 2, g);
      t = poly_sub(T, t, poly_one(g.level));
    }
    Poly s2 = poly_gcd(T, g, t);
    if (s2.degree() > 0 && s2.degree() < g.degree()) {
      edf(T, s2, d, out, rng);
      edf(T, poly_divmod(T, g, s2).first, d, out, rng);
      return;
    }
  }
}

// factor a squarefree monic polynomial
std::vector<Poly> factor_squarefree(const FieldTower& T, Poly f, std::mt19937_64& rng) {
  std::vector<Poly> out;
  std::uint64_t Q = T.level_size(f.level);
  Poly x = poly_x(f.level);
  Poly w = x;
  int d = 0;
  while (f.degree() > 0) {
    ++d;
    if (2 * d > f.degree()) {
      out.push_back(poly_monic(T, f));
      break;
    }
    w = poly_powmod(T, w, Q, f);
    Poly g = poly_gcd(T, f, poly_sub(T, w, x));
    if (g.degree() > 0) {
      edf(T, g, d, out, rng);
      f = poly_divmod(T, f, g).first;
      w = poly_mod(T, w, f);
    }
  }
  return out;
}

std::uint64_t poly_seed(const Poly& f) {
  std::string s = std::to_string(f.level) + ":";
  for (auto c : f.c) s += std::to_string(c) + ",";
  return fnv1a(s);
}

} // namespace

std::vector<std::pair<Poly, int>> poly_factor(const FieldTower& T, const Poly& f0) {
  check(f0.degree() >= 0 && !f0.c.empty(), Err::Config, "factoring zero polynomial");
  std::mt19937_64 rng(poly_seed(f0));
  std::vector<std::pair<Poly, int>> result;
  Poly f = poly_monic(T, f0);
  int pmult = 1;
  while (f.degree() > 0) {
    Poly der = poly_derivative(T, f);
    if (poly_is_zero(der)) {
      // f = g(x^p): take p-th roots of coefficients
      std::uint64_t Q = T.level_size(f.level);
      Poly g{f.level, {}};
      g.c.assign(f.degree() / T.p() + 1, 0);
      for (std::size_t i = 0; i < g.c.size(); ++i) {
        std::uint32_t c = f.c[i * T.p()];
        g.c[i] = T.pow({f.level, c}, static_cast<long long>(Q / T.p())).idx;
        if (c == 0) g.c[i] = 0;
      }
      f = poly_trim(g);
      pmult *= static_cast<int>(T.p());
      continue;
    }
    Poly gcd = poly_gcd(T, f, der);
    Poly sqfree = poly_divmod(T, f, gcd).first;
    for (const Poly& u : factor_squarefree(T, sqfree, rng)) {
      int e = 0;
      while (true) {
        auto [quo, rem] = poly_divmod(T, f, u);
        if (!rem.c.empty()) break;
        f = quo;
        ++e;
      }
      result.emplace_back(u, e * pmult);
    }
    // what is left has only multiplicities divisible by p; loop again
  }
  std::sort(result.begin(), result.end(),
            [](const auto& a, const auto& b) { return poly_less(a.first, b.first); });
  return result;
}

std::vector<Poly> all_irreducibles(const FieldTower& T, int level, int degree) {
  std::uint64_t Q = T.level_size(level);
  std::uint64_t count = 1;
  for (int i = 0; i < degree; ++i) {
    check(count < (std::uint64_t(1) << 40) / Q, Err::BoundExceeded, "irreducible scan too large");
    count *= Q;
  }
  std::vector<Poly> out;
  for (std::uint64_t code = 0; code < count; ++code) {
    std::vector<std::uint32_t> cs(degree + 1);
    std::uint64_t t = code;
    for (int i = 0; i < degree; ++i) {
      cs[i] = static_cast<std::uint32_t>(t % Q);
      t /= Q;
    }
    cs[degree] = 1;
    Poly f{level, cs};
    if (poly_is_irreducible(T, f)) out.push_back(f);
  }
  return out;
}

std::vector<FieldElem> poly_roots(const FieldTower& T, const Poly& f) {
  std::vector<FieldElem> roots;
  std::uint64_t Q = T.level_size(f.level);
  for (std::uint64_t i = 0; i < Q; ++i) {
    FieldElem x{f.level, static_cast<std::uint32_t>(i)};
    if (poly_eval(T, f, x).is_zero()) roots.push_back(x);
  }
  return roots;
}

bool poly_less(const Poly& a, const Poly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (std::size_t i = a.c.size(); i-- > 0;)
    if (a.c[i] != b.c[i]) return a.c[i] < b.c[i];
  return false;
}

std::string poly_to_string(const Poly& f) {
  if (f.c.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = f.c.size(); i-- > 0;) {
    if (f.c[i] == 0) continue;
    if (!first) os << "+";
    first = false;
    if (i == 0) {
      os << f.c[i];
    } else {
      if (f.c[i] != 1) os << f.c[i];
      os << "x";
      if (i > 1) os << "^" << i;
    }
  }
  if (first) os << "0";
  return os.str();
}

Poly poly_from_string(int level, const std::string& s) {
  std::vector<std::uint32_t> coeffs;
  auto put = [&](std::size_t deg, std::uint32_t c) {
    if (coeffs.size() <= deg) coeffs.resize(deg + 1, 0);
    coeffs[deg] = c;
  };
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t j = s.find('+', i);
    if (j == std::string::npos) j = s.size();
    std::string term = s.substr(i, j - i);
    i = j + 1;
    check(!term.empty(), Err::Config, "bad polynomial string: " + s);
    std::size_t xpos = term.find('x');
    std::uint32_t coef = 1;
    std::size_t deg = 0;
    if (xpos == std::string::npos) {
      coef = static_cast<std::uint32_t>(std::stoul(term));
      deg = 0;
    } else {
      if (xpos > 0) coef = static_cast<std::uint32_t>(std::stoul(term.substr(0, xpos)));
      deg = 1;
      std::size_t caret = term.find('^', xpos);
      if (caret != std::string::npos) deg = std::stoul(term.substr(caret + 1));
    }
    put(deg, coef);
  }
  return poly_trim(Poly{level, coeffs});
}

} // namespace glct
