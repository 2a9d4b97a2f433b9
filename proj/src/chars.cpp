#include "glct/chars.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>

namespace glct {

namespace {

std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b) {
  std::uint64_t g = a;
  std::uint64_t x = b;
  while (x) {
    g %= x;
    std::swap(g, x);
  }
  return a / (g == 0 ? 1 : g) * b;
}

} // namespace

std::string CharSpec::key() const {
  switch (kind) {
    case Kind::Cuspidal:
      return "cusp:" + std::to_string(n) + ":" + std::to_string(level) + ":" +
             std::to_string(chi.exponent);
    case Kind::DetChar:
      return "det:" + std::to_string(n) + ":" + std::to_string(level) + ":" +
             std::to_string(chi.exponent);
    case Kind::Induced:
      return "ind(" + left->key() + "," + right->key() + ")";
    case Kind::OracleRow:
      return "oracle:" + table_tag + ":" + std::to_string(row);
  }
  return "?";
}

CharSpec cuspidal_spec(const FieldTower& T, int n, int level, std::uint64_t theta_exp) {
  CharSpec s;
  s.kind = CharSpec::Kind::Cuspidal;
  s.n = n;
  s.level = level;
  s.chi = make_char(T, n * level, theta_exp);
  check(is_regular(T, s.chi, n, level), Err::NotRegular,
        "theta is not regular: orbit smaller than n");
  return s;
}

CharSpec det_char_spec(const FieldTower& T, int n, int level, std::uint64_t chi_exp) {
  CharSpec s;
  s.kind = CharSpec::Kind::DetChar;
  s.n = n;
  s.level = level;
  s.chi = make_char(T, level, chi_exp);
  return s;
}

CharSpec induced_spec(CharSpec left, CharSpec right) {
  check(left.level == right.level, Err::LevelMismatch, "induced factors must share a level");
  CharSpec s;
  s.kind = CharSpec::Kind::Induced;
  s.n = left.n + right.n;
  s.level = left.level;
  s.left = std::make_shared<CharSpec>(std::move(left));
  s.right = std::make_shared<CharSpec>(std::move(right));
  return s;
}

CharSpec oracle_row_spec(std::shared_ptr<const CharTable> table, int row, int n, int level,
                         std::string tag) {
  CharSpec s;
  s.kind = CharSpec::Kind::OracleRow;
  s.n = n;
  s.level = level;
  s.table = std::move(table);
  s.row = row;
  s.table_tag = std::move(tag);
  return s;
}

long long dim_of(const FieldTower& T, const CharSpec& s) {
  switch (s.kind) {
    case CharSpec::Kind::Cuspidal: {
      long long d = 1;
      for (int i = 1; i < s.n; ++i) {
        long long qi = 1;
        for (int t = 0; t < i; ++t) qi = checked_mul(qi, static_cast<long long>(T.level_size(s.level)));
        d = checked_mul(d, qi - 1);
      }
      return d;
    }
    case CharSpec::Kind::DetChar:
      return 1;
    case CharSpec::Kind::Induced:
      return checked_mul(gaussian_binomial(T.level_size(s.level), s.n, s.left->n),
                         checked_mul(dim_of(T, *s.left), dim_of(T, *s.right)));
    case CharSpec::Kind::OracleRow:
      return s.table->rows[s.row].degree;
  }
  return 0;
}

std::uint64_t natural_conductor(const FieldTower& T, const CharSpec& s) {
  switch (s.kind) {
    case CharSpec::Kind::Cuspidal:
      return T.level_order(s.n * s.level);
    case CharSpec::Kind::DetChar:
      return std::max<std::uint64_t>(T.level_order(s.level), 1);
    case CharSpec::Kind::Induced:
      return lcm_u64(natural_conductor(T, *s.left), natural_conductor(T, *s.right));
    case CharSpec::Kind::OracleRow:
      return s.table->conductor;
  }
  return 1;
}

CharSpec dual_spec(const FieldTower& T, const CharSpec& s) {
  CharSpec d = s;
  switch (s.kind) {
    case CharSpec::Kind::Cuspidal:
    case CharSpec::Kind::DetChar: {
      std::uint64_t ord = T.level_order(s.chi.level);
      d.chi = make_char(T, s.chi.level, ord == 0 ? 0 : (ord - s.chi.exponent % ord) % ord);
      return d;
    }
    case CharSpec::Kind::Induced:
      d.left = std::make_shared<CharSpec>(dual_spec(T, *s.left));
      d.right = std::make_shared<CharSpec>(dual_spec(T, *s.right));
      return d;
    case CharSpec::Kind::OracleRow:
      fail(Err::IncomparableSpecs, "no dual for oracle rows");
  }
  return d;
}

CharSpec twist_spec(const FieldTower& T, const CharSpec& s, const MultChar& chi) {
  CharSpec t = s;
  switch (s.kind) {
    case CharSpec::Kind::Cuspidal: {
      MultChar inf = inflate_char_by_norm(T, chi, s.n * s.level);
      t.chi = make_char(T, s.chi.level, s.chi.exponent + inf.exponent);
      return t;
    }
    case CharSpec::Kind::DetChar: {
      check(chi.level == s.level, Err::LevelMismatch, "twist character has the wrong level");
      t.chi = make_char(T, s.level, s.chi.exponent + chi.exponent);
      return t;
    }
    case CharSpec::Kind::Induced:
      t.left = std::make_shared<CharSpec>(twist_spec(T, *s.left, chi));
      t.right = std::make_shared<CharSpec>(twist_spec(T, *s.right, chi));
      return t;
    case CharSpec::Kind::OracleRow:
      fail(Err::IncomparableSpecs, "no twist for oracle rows");
  }
  return t;
}

CharSpec frobenius_spec(const FieldTower& T, const CharSpec& s) {
  check(s.level % 2 == 0, Err::LevelMismatch,
        "frobenius_spec acts relative to the index-2 subfield");
  CharSpec f = s;
  switch (s.kind) {
    case CharSpec::Kind::Cuspidal:
    case CharSpec::Kind::DetChar:
      f.chi = frobenius_twist(T, s.chi, s.level / 2);
      return f;
    case CharSpec::Kind::Induced:
      f.left = std::make_shared<CharSpec>(frobenius_spec(T, *s.left));
      f.right = std::make_shared<CharSpec>(frobenius_spec(T, *s.right));
      return f;
    case CharSpec::Kind::OracleRow:
      fail(Err::IncomparableSpecs, "no frobenius for oracle rows");
  }
  return f;
}

bool iso_test(const FieldTower& T, const CharSpec& a, const CharSpec& b) {
  if (a.kind != b.kind || a.n != b.n || a.level != b.level)
    fail(Err::IncomparableSpecs, "iso_test needs the same variant, size and level");
  switch (a.kind) {
    case CharSpec::Kind::Cuspidal: {
      auto orbit = char_orbit(T, a.chi, a.level);
      return std::binary_search(orbit.begin(), orbit.end(), b.chi.exponent);
    }
    case CharSpec::Kind::DetChar:
      return a.chi == b.chi;
    case CharSpec::Kind::Induced:
      return (iso_test(T, *a.left, *b.left) && iso_test(T, *a.right, *b.right)) ||
             (a.left->n == b.right->n && a.right->n == b.left->n &&
              iso_test(T, *a.left, *b.right) && iso_test(T, *a.right, *b.left));
    case CharSpec::Kind::OracleRow:
      return a.table_tag == b.table_tag && a.row == b.row;
  }
  return false;
}

CharSpec basechange_spec(const FieldTower& T, const CharSpec& s) {
  check(s.kind == CharSpec::Kind::Cuspidal || s.kind == CharSpec::Kind::DetChar,
        Err::IncomparableSpecs, "basechange is defined on cuspidal and det data");
  if (s.kind == CharSpec::Kind::DetChar)
    return det_char_spec(T, s.n, 2 * s.level,
                         inflate_char_by_norm(T, s.chi, 2 * s.level).exponent);
  if (s.n % 2 == 0) {
    // theta stays, the Galois partner picks up one Frobenius step
    int half = s.n / 2;
    CharSpec l = cuspidal_spec(T, half, 2 * s.level, s.chi.exponent);
    CharSpec r = cuspidal_spec(T, half, 2 * s.level,
                               frobenius_twist(T, s.chi, s.level).exponent);
    return induced_spec(std::move(l), std::move(r));
  }
  MultChar inflated = inflate_char_by_norm(T, s.chi, 2 * s.n * s.level);
  CharSpec bc;
  bc.kind = CharSpec::Kind::Cuspidal;
  bc.n = s.n;
  bc.level = 2 * s.level;
  bc.chi = inflated;
  check(is_regular(T, bc.chi, bc.n, bc.level), Err::NotRegular,
        "inflated character is not regular over the extension");
  return bc;
}

CycValue additive_char_value(const FieldTower& T, const AdditiveChar& psi, const MatF& X,
                             std::uint32_t conductor) {
  check(psi.A.level == 1 && X.level == 1, Err::LevelMismatch,
        "additive characters live on matrices over the base field");
  check(conductor % T.p() == 0, Err::ConductorMismatch, "conductor must absorb zeta_p");
  MatF prod = mat_mul(T, psi.A, X);
  FieldElem tr = T.zero(1);
  for (int i = 0; i < prod.n; ++i) tr = T.add(tr, {1, prod.at(i, i)});
  std::uint32_t t = T.trace_to_prime(tr);
  return root_of_unity(conductor, static_cast<long long>(t) *
                                      static_cast<long long>(conductor / T.p()));
}

CycValue cuspidal_char_value(const FieldTower& T, const CharSpec& s, const ClassData& c) {
  check(s.kind == CharSpec::Kind::Cuspidal, Err::Config, "not a cuspidal spec");
  check(c.level == s.level && c.n == s.n, Err::LevelMismatch,
        "class does not match the spec's group");
  std::uint64_t M = natural_conductor(T, s);
  if (c.pairs.size() != 1) return CycValue::zero(static_cast<std::uint32_t>(M));
  const auto& [f, lambda] = c.pairs[0];
  int d = f.degree();
  // root of f in F_{Q^d}, embedded into theta's field
  int root_level = s.level * d;
  Poly lifted{root_level, {}};
  lifted.c.resize(f.c.size());
  for (std::size_t i = 0; i < f.c.size(); ++i)
    lifted.c[i] = T.embed({s.level, f.c[i]}, root_level).idx;
  auto roots = poly_roots(T, lifted);
  check(!roots.empty(), Err::Config, "irreducible factor has no root in its splitting field");
  FieldElem alpha = T.embed(roots.front(), s.n * s.level);

  CycAccum acc(static_cast<std::uint32_t>(M));
  FieldElem a = alpha;
  for (int k = 0; k < d; ++k) {
    acc.add(char_eval(T, s.chi, a, M));
    a = T.pow(a, static_cast<long long>(T.level_size(s.level)));
  }
  long long factor = 1;
  std::uint64_t Q = T.level_size(s.level);
  long long Qdi = 1;
  for (int i = 1; i < static_cast<int>(lambda.size()); ++i) {
    long long qd = 1;
    for (int t = 0; t < d; ++t) qd = checked_mul(qd, static_cast<long long>(Q));
    Qdi = checked_mul(Qdi, qd);
    factor = checked_mul(factor, 1 - Qdi);
  }
  if (s.n % 2 == 0) factor = -factor;
  return scaled(acc.value(), factor);
}

CycValue det_char_value(const FieldTower& T, const CharSpec& s, const ClassData& c) {
  check(s.kind == CharSpec::Kind::DetChar, Err::Config, "not a det-char spec");
  check(c.level == s.level && c.n == s.n, Err::LevelMismatch,
        "class does not match the spec's group");
  std::uint64_t M = natural_conductor(T, s);
  return char_eval(T, s.chi, class_det(T, c), M);
}

const CharCache::PairDecomp& CharCache::decomposition(const FieldTower& T, const ClassData& c,
                                                      int k) {
  std::string key = class_to_string(T, c) + "#" + std::to_string(k);
  {
    std::shared_lock lock(mu_);
    auto it = decomps_.find(key);
    if (it != decomps_.end()) return *it->second;
  }
  auto dec = std::make_unique<PairDecomp>();
  MatF rep = rep_of_class(T, c);
  std::map<std::pair<std::string, std::string>, std::pair<std::pair<ClassData, ClassData>, long long>>
      agg;
  for (const Subspace& W : invariant_subspaces(T, rep, k)) {
    auto [A, B] = restrict_and_quotient(T, rep, W);
    ClassData ca = class_of(T, A), cb = class_of(T, B);
    auto kk = std::make_pair(class_to_string(T, ca), class_to_string(T, cb));
    auto it = agg.find(kk);
    if (it == agg.end())
      agg.emplace(kk, std::make_pair(std::make_pair(ca, cb), 1LL));
    else
      it->second.second++;
  }
  for (auto& [unused, entry] : agg) dec->pairs.push_back(entry);
  std::unique_lock lock(mu_);
  auto [it, inserted] = decomps_.emplace(key, std::move(dec));
  return *it->second;
}

CycValue CharCache::compute(const FieldTower& T, const CharSpec& s, const ClassData& c) {
  switch (s.kind) {
    case CharSpec::Kind::Cuspidal:
      return reduce(cuspidal_char_value(T, s, c));
    case CharSpec::Kind::DetChar:
      return reduce(det_char_value(T, s, c));
    case CharSpec::Kind::Induced: {
      check(c.level == s.level && c.n == s.n, Err::LevelMismatch,
            "class does not match the spec's group");
      std::uint64_t M = natural_conductor(T, s);
      CycAccum acc(static_cast<std::uint32_t>(M));
      const PairDecomp& dec = decomposition(T, c, s.left->n);
      for (const auto& [pr, count] : dec.pairs) {
        if (pr.first.n != s.left->n) continue;
        CycValue lv = lift(value(T, *s.left, pr.first), static_cast<std::uint32_t>(M));
        CycValue rv = lift(value(T, *s.right, pr.second), static_cast<std::uint32_t>(M));
        acc.add(mul(lv, rv), count);
      }
      return reduce(acc.value());
    }
    case CharSpec::Kind::OracleRow: {
      // match the class against the table's representatives
      for (std::size_t i = 0; i < s.table->reps.size(); ++i)
        if (class_of(T, s.table->reps[i]) == c) return reduce(s.table->rows[s.row].values[i]);
      fail(Err::Config, "class not found in the oracle table");
    }
  }
  fail(Err::Config, "unhandled spec kind");
}

CycValue CharCache::value(const FieldTower& T, const CharSpec& s, const ClassData& c) {
  auto key = std::make_pair(s.key(), class_to_string(T, c));
  {
    std::shared_lock lock(mu_);
    auto it = values_.find(key);
    if (it != values_.end()) return it->second;
  }
  CycValue v = compute(T, s, c);
  std::unique_lock lock(mu_);
  return values_.emplace(std::move(key), std::move(v)).first->second;
}

CycValue CharCache::value(const FieldTower& T, const CharSpec& s, const MatF& g) {
  if (s.kind == CharSpec::Kind::Induced) {
    // the geometric sum at the element itself
    std::uint64_t M = natural_conductor(T, s);
    CycAccum acc(static_cast<std::uint32_t>(M));
    for (const Subspace& W : invariant_subspaces(T, g, s.left->n)) {
      auto [A, B] = restrict_and_quotient(T, g, W);
      CycValue lv = lift(value(T, *s.left, class_of(T, A)), static_cast<std::uint32_t>(M));
      CycValue rv = lift(value(T, *s.right, class_of(T, B)), static_cast<std::uint32_t>(M));
      acc.add(mul(lv, rv));
    }
    return reduce(acc.value());
  }
  return value(T, s, class_of(T, g));
}

long long inner_product_full(const FieldTower& T, CharCache& cache, const CharSpec& a,
                             const CharSpec& b) {
  check(a.n == b.n && a.level == b.level, Err::LevelMismatch,
        "inner product needs specs on the same group");
  std::uint32_t M = static_cast<std::uint32_t>(
      lcm_u64(natural_conductor(T, a), natural_conductor(T, b)));
  CycAccum acc(M);
  for (const ClassData& c : enumerate_classes(T, a.n, a.level)) {
    CycValue va = lift(cache.value(T, a, c), M);
    CycValue vb = lift(cache.value(T, b, c), M);
    acc.add(mul(va, conj(vb)), class_size(T, c));
  }
  return divide_exact(as_integer(acc.value()), group_order(T, a.n, a.level));
}

} // namespace glct
