#include "glct/matrices.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

namespace glct {

MatF mat_identity(const FieldTower& T, int level, int n) {
  (void)T;
  MatF m{level, n, std::vector<std::uint32_t>(static_cast<std::size_t>(n) * n, 0)};
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

MatF mat_zero(int level, int n) {
  return MatF{level, n, std::vector<std::uint32_t>(static_cast<std::size_t>(n) * n, 0)};
}

MatF mat_mul(const FieldTower& T, const MatF& a, const MatF& b) {
  check(a.level == b.level && a.n == b.n, Err::LevelMismatch, "mat_mul: shape/level mismatch");
  const int n = a.n;
  MatF r = mat_zero(a.level, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      std::uint32_t aik = a.at(i, k);
      if (aik == 0) continue;
      FieldElem e{a.level, aik};
      for (int j = 0; j < n; ++j) {
        std::uint32_t bkj = b.at(k, j);
        if (bkj == 0) continue;
        FieldElem t = T.mul(e, {a.level, bkj});
        r.at(i, j) = T.add({a.level, r.at(i, j)}, t).idx;
      }
    }
  return r;
}

MatF mat_add(const FieldTower& T, const MatF& a, const MatF& b) {
  check(a.level == b.level && a.n == b.n, Err::LevelMismatch, "mat_add: shape/level mismatch");
  MatF r = a;
  for (std::size_t i = 0; i < r.a.size(); ++i)
    r.a[i] = T.add({a.level, r.a[i]}, {a.level, b.a[i]}).idx;
  return r;
}

std::vector<std::uint32_t> mat_apply(const FieldTower& T, const MatF& g,
                                     const std::vector<std::uint32_t>& v) {
  std::vector<std::uint32_t> r(g.n, 0);
  for (int i = 0; i < g.n; ++i) {
    FieldElem acc = T.zero(g.level);
    for (int j = 0; j < g.n; ++j)
      acc = T.add(acc, T.mul({g.level, g.at(i, j)}, {g.level, v[j]}));
    r[i] = acc.idx;
  }
  return r;
}

namespace {

// Gaussian elimination returning (rank, det); optionally reduces an attached
// right block (for inversion).
std::pair<int, FieldElem> eliminate(const FieldTower& T, MatF& m, MatF* attached) {
  const int n = m.n;
  FieldElem det = T.one(m.level);
  int rank = 0;
  for (int col = 0; col < n && rank < n; ++col) {
    int piv = -1;
    for (int r = rank; r < n; ++r)
      if (m.at(r, col) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) {
      det = T.zero(m.level);
      continue;
    }
    if (piv != rank) {
      for (int j = 0; j < n; ++j) std::swap(m.at(piv, j), m.at(rank, j));
      if (attached)
        for (int j = 0; j < n; ++j) std::swap(attached->at(piv, j), attached->at(rank, j));
      det = T.neg(det);
    }
    FieldElem pval{m.level, m.at(rank, col)};
    det = T.mul(det, pval);
    FieldElem pinv = T.inv(pval);
    for (int j = 0; j < n; ++j) m.at(rank, j) = T.mul({m.level, m.at(rank, j)}, pinv).idx;
    if (attached)
      for (int j = 0; j < n; ++j)
        attached->at(rank, j) = T.mul({m.level, attached->at(rank, j)}, pinv).idx;
    for (int r = 0; r < n; ++r) {
      if (r == rank || m.at(r, col) == 0) continue;
      FieldElem f{m.level, m.at(r, col)};
      for (int j = 0; j < n; ++j) {
        FieldElem t = T.mul(f, {m.level, m.at(rank, j)});
        m.at(r, j) = T.sub({m.level, m.at(r, j)}, t).idx;
        if (attached) {
          FieldElem u = T.mul(f, {m.level, attached->at(rank, j)});
          attached->at(r, j) = T.sub({m.level, attached->at(r, j)}, u).idx;
        }
      }
    }
    ++rank;
  }
  return {rank, det};
}

} // namespace

FieldElem mat_det(const FieldTower& T, const MatF& g) {
  MatF m = g;
  auto [rank, det] = eliminate(T, m, nullptr);
  return rank == g.n ? det : T.zero(g.level);
}

MatF mat_inv(const FieldTower& T, const MatF& g) {
  MatF m = g, inv = mat_identity(T, g.level, g.n);
  auto [rank, det] = eliminate(T, m, &inv);
  (void)det;
  check(rank == g.n, Err::SingularMatrix, "matrix is singular");
  return inv;
}

MatF mat_pow(const FieldTower& T, MatF g, std::uint64_t k) {
  MatF acc = mat_identity(T, g.level, g.n);
  while (k) {
    if (k & 1) acc = mat_mul(T, acc, g);
    g = mat_mul(T, g, g);
    k >>= 1;
  }
  return acc;
}

int mat_rank(const FieldTower& T, MatF g) {
  auto [rank, det] = eliminate(T, g, nullptr);
  (void)det;
  return rank;
}

MatF companion_matrix(const FieldTower& T, const Poly& f) {
  (void)T;
  int d = f.degree();
  check(d >= 1 && f.c.back() == 1, Err::Config, "companion matrix needs a monic polynomial");
  MatF m = mat_zero(f.level, d);
  for (int i = 1; i < d; ++i) m.at(i, i - 1) = 1;
  FieldTower const& TT = T;
  for (int i = 0; i < d; ++i) m.at(i, d - 1) = TT.neg({f.level, f.c[i]}).idx;
  return m;
}

MatF direct_sum(const MatF& a, const MatF& b) {
  check(a.level == b.level, Err::LevelMismatch, "direct_sum: level mismatch");
  MatF r = mat_zero(a.level, a.n + b.n);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) r.at(i, j) = a.at(i, j);
  for (int i = 0; i < b.n; ++i)
    for (int j = 0; j < b.n; ++j) r.at(a.n + i, a.n + j) = b.at(i, j);
  return r;
}

Poly char_poly(const FieldTower& T, const MatF& g) {
  // det(xI - g) by Laplace expansion along the last active column, memoized
  // over row subsets; division-free and exact for n <= ~12.
  const int n = g.n;
  check(n <= 12, Err::BoundExceeded, "char_poly limited to n <= 12");
  const int lvl = g.level;
  std::vector<Poly> memo(std::size_t(1) << n);
  memo[0] = poly_one(lvl);
  // entry (i,j) of xI - g as a linear polynomial
  auto entry = [&](int i, int j) {
    Poly e{lvl, {T.neg({lvl, g.at(i, j)}).idx, static_cast<std::uint32_t>(i == j ? 1 : 0)}};
    return poly_trim(e);
  };
  for (std::uint32_t mask = 1; mask < (std::uint32_t(1) << n); ++mask) {
    int k = __builtin_popcount(mask);
    int col = k - 1;
    Poly acc{lvl, {}};
    int pos = 0;
    for (int r = 0; r < n; ++r) {
      if (!(mask & (1u << r))) continue;
      Poly term = poly_mul(T, entry(r, col), memo[mask & ~(1u << r)]);
      bool negate = ((pos + col) % 2) != 0;
      acc = negate ? poly_sub(T, acc, term) : poly_add(T, acc, term);
      ++pos;
    }
    memo[mask] = acc;
  }
  return memo[(std::uint32_t(1) << n) - 1];
}

ClassData class_of(const FieldTower& T, const MatF& g) {
  check(!mat_det(T, g).is_zero(), Err::SingularMatrix, "class_of needs an invertible matrix");
  Poly cp = char_poly(T, g);
  ClassData c{g.level, g.n, {}};
  for (const auto& [f, mult] : poly_factor(T, cp)) {
    int d = f.degree();
    // evaluate f at g
    MatF fg = mat_zero(g.level, g.n);
    for (int i = d; i >= 0; --i) {
      fg = mat_mul(T, fg, g);
      if (f.c[i] != 0)
        for (int r = 0; r < g.n; ++r)
          fg.at(r, r) = T.add({g.level, fg.at(r, r)}, {g.level, f.c[i]}).idx;
    }
    // kernel dimension jumps of fg^k give the conjugate partition
    std::vector<int> jumps;
    MatF pw = fg;
    int prev = 0;
    while (true) {
      int ker = g.n - mat_rank(T, pw);
      int jump = (ker - prev) / d;
      if (jump == 0) break;
      jumps.push_back(jump);
      prev = ker;
      if (ker == d * mult) break;
      pw = mat_mul(T, pw, fg);
    }
    // partition = conjugate of the jump sequence
    std::vector<int> lambda;
    for (int i = 1; i <= (jumps.empty() ? 0 : jumps[0]); ++i) {
      int cnt = 0;
      for (int jv : jumps)
        if (jv >= i) ++cnt;
      lambda.push_back(cnt);
    }
    std::sort(lambda.rbegin(), lambda.rend());
    c.pairs.emplace_back(f, lambda);
  }
  std::sort(c.pairs.begin(), c.pairs.end(),
            [](const auto& a, const auto& b) { return poly_less(a.first, b.first); });
  return c;
}

MatF rep_of_class(const FieldTower& T, const ClassData& c) {
  MatF rep{c.level, 0, {}};
  for (const auto& [f, lambda] : c.pairs)
    for (int part : lambda) {
      Poly fk = poly_one(c.level);
      for (int i = 0; i < part; ++i) fk = poly_mul(T, fk, f);
      MatF blk = companion_matrix(T, fk);
      rep = rep.n == 0 ? blk : direct_sum(rep, blk);
    }
  check(rep.n == c.n, Err::Config, "class data inconsistent with its size");
  return rep;
}

FieldElem class_det(const FieldTower& T, const ClassData& c) {
  // det = prod over pairs of ((-1)^deg f * f(0))^|lambda|
  FieldElem det = T.one(c.level);
  for (const auto& [f, lambda] : c.pairs) {
    FieldElem f0{c.level, f.c[0]};
    if (f.degree() % 2 != 0) f0 = T.neg(f0);
    int total = std::accumulate(lambda.begin(), lambda.end(), 0);
    det = T.mul(det, T.pow(f0, total));
  }
  return det;
}

ClassData merge_classes(const ClassData& a, const ClassData& b) {
  check(a.level == b.level, Err::LevelMismatch, "merge_classes: level mismatch");
  ClassData c{a.level, a.n + b.n, a.pairs};
  for (const auto& pr : b.pairs) {
    auto it = std::find_if(c.pairs.begin(), c.pairs.end(),
                           [&](const auto& q) { return q.first == pr.first; });
    if (it == c.pairs.end()) {
      c.pairs.push_back(pr);
    } else {
      it->second.insert(it->second.end(), pr.second.begin(), pr.second.end());
      std::sort(it->second.rbegin(), it->second.rend());
    }
  }
  std::sort(c.pairs.begin(), c.pairs.end(),
            [](const auto& x, const auto& y) { return poly_less(x.first, y.first); });
  return c;
}

std::string class_to_string(const FieldTower& T, const ClassData& c) {
  std::ostringstream os;
  os << "q" << T.level_size(c.level) << ":n" << c.n << ":";
  for (const auto& [f, lambda] : c.pairs) {
    os << "[" << poly_to_string(f) << "|";
    for (std::size_t i = 0; i < lambda.size(); ++i) os << (i ? "," : "") << lambda[i];
    os << "]";
  }
  return os.str();
}

ClassData class_from_string(const FieldTower& T, const std::string& s) {
  check(s.size() > 1 && s[0] == 'q', Err::Config, "bad class string: " + s);
  std::size_t colon1 = s.find(':');
  std::size_t colon2 = s.find(':', colon1 + 1);
  check(colon1 != std::string::npos && colon2 != std::string::npos, Err::Config,
        "bad class string: " + s);
  std::uint64_t Q = std::stoull(s.substr(1, colon1 - 1));
  int n = std::stoi(s.substr(colon1 + 2, colon2 - colon1 - 2));
  int level = -1;
  for (int d : T.degrees())
    if (T.level_size(d) == Q) level = d;
  check(level > 0, Err::Config, "class string names a field not in the tower");
  ClassData c{level, n, {}};
  std::size_t i = colon2 + 1;
  while (i < s.size()) {
    check(s[i] == '[', Err::Config, "bad class string: " + s);
    std::size_t bar = s.find('|', i);
    std::size_t close = s.find(']', i);
    check(bar != std::string::npos && close != std::string::npos && bar < close, Err::Config,
          "bad class string: " + s);
    Poly f = poly_from_string(level, s.substr(i + 1, bar - i - 1));
    std::vector<int> lambda;
    std::size_t j = bar + 1;
    while (j < close) {
      std::size_t comma = s.find(',', j);
      if (comma == std::string::npos || comma > close) comma = close;
      lambda.push_back(std::stoi(s.substr(j, comma - j)));
      j = comma + 1;
    }
    std::sort(lambda.rbegin(), lambda.rend());
    c.pairs.emplace_back(f, lambda);
    i = close + 1;
  }
  std::sort(c.pairs.begin(), c.pairs.end(),
            [](const auto& a, const auto& b) { return poly_less(a.first, b.first); });
  int total = 0;
  for (const auto& [f, lambda] : c.pairs)
    for (int part : lambda) total += part * f.degree();
  check(total == n, Err::Config, "class string size mismatch");
  return c;
}

bool class_less(const ClassData& a, const ClassData& b) {
  if (a.pairs.size() != b.pairs.size()) return a.pairs.size() < b.pairs.size();
  for (std::size_t i = 0; i < a.pairs.size(); ++i) {
    if (a.pairs[i].first != b.pairs[i].first) return poly_less(a.pairs[i].first, b.pairs[i].first);
    if (a.pairs[i].second != b.pairs[i].second) return a.pairs[i].second < b.pairs[i].second;
  }
  return false;
}

// ---- scalar restriction ---------------------------------------------------------

namespace {

// Decomposition of F_{q^D} as a free module over F_{q^d} with basis
// {1, gen[D], ..., gen[D]^(r-1)}; cached per (tower, D, d).
struct Decomp {
  int D, d, r;
  // inverse change of basis over F_q: maps level-D digit vectors to the
  // concatenated digit vectors of the level-d coordinates
  std::vector<std::vector<std::uint32_t>> inv; // D x D over F_q
};

const Decomp& decomp_for(const FieldTower& T, int D, int d) {
  static std::map<std::tuple<std::uint64_t, int, int>, Decomp> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_tuple(T.descriptor_hash(), D, d);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  int r = D / d;
  // columns: embed(x_d^i) * gen_D^j for j < r, i < d, as F_q digit vectors
  std::vector<std::vector<FieldElem>> cols;
  for (int j = 0; j < r; ++j) {
    FieldElem bj = T.pow(T.gen(D), j);
    for (int i = 0; i < d; ++i) {
      std::vector<std::uint32_t> digs(d, 0);
      digs[i] = 1;
      FieldElem xi = T.embed(T.from_digits(d, digs), D);
      cols.push_back({T.mul(xi, bj)});
    }
  }
  // invert the D x D matrix over F_q via a level-1 MatF
  MatF M = mat_zero(1, D);
  for (int cidx = 0; cidx < D; ++cidx) {
    auto digs = T.digits(cols[cidx][0]);
    for (int rdx = 0; rdx < D; ++rdx) M.at(rdx, cidx) = digs[rdx];
  }
  MatF Minv = mat_inv(T, M);
  Decomp dec{D, d, r, {}};
  dec.inv.assign(D, std::vector<std::uint32_t>(D));
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) dec.inv[i][j] = Minv.at(i, j);
  return cache.emplace(key, std::move(dec)).first->second;
}

// coordinates of a level-D element over level d w.r.t. the gen-power basis
std::vector<FieldElem> decompose(const FieldTower& T, const Decomp& dec, FieldElem x) {
  auto digs = T.digits(x);
  std::vector<FieldElem> coords(dec.r);
  for (int j = 0; j < dec.r; ++j) {
    std::vector<std::uint32_t> part(dec.d, 0);
    for (int i = 0; i < dec.d; ++i) {
      FieldElem acc = T.zero(1);
      for (int k = 0; k < dec.D; ++k)
        acc = T.add(acc, T.mul({1, dec.inv[j * dec.d + i][k]}, {1, digs[k]}));
      part[i] = acc.idx;
    }
    coords[j] = T.from_digits(dec.d, part);
  }
  return coords;
}

} // namespace

MatF restrict_scalars(const FieldTower& T, const MatF& g, int d) {
  int D = g.level;
  check(D % d == 0, Err::LevelMismatch, "restrict_scalars: target level must divide");
  const Decomp& dec = decomp_for(T, D, d);
  int r = dec.r;
  MatF out = mat_zero(d, g.n * r);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      FieldElem x{D, g.at(i, j)};
      if (x.is_zero()) continue;
      // column b of the block = coordinates of x * gen^b
      for (int b = 0; b < r; ++b) {
        FieldElem xb = T.mul(x, T.pow(T.gen(D), b));
        auto coords = decompose(T, dec, xb);
        for (int a = 0; a < r; ++a) out.at(i * r + a, j * r + b) = coords[a].idx;
      }
    }
  return out;
}

MatF weil_embed(const FieldTower& T, const MatF& g) {
  check(g.level % 2 == 0, Err::LevelMismatch, "weil_embed needs an even level");
  return restrict_scalars(T, g, g.level / 2);
}

ClassData weil_class(const FieldTower& T, const ClassData& c) {
  // Each primary part maps independently: for sigma-fixed f the module
  // E[x]/(f^k) splits as two copies of F[x]/(f^k), doubling every part's
  // multiplicity; for f != f^sigma it is cyclic over F[x]/((f f^sigma)^k).
  int D = c.level;
  check(D % 2 == 0, Err::LevelMismatch, "weil_class needs an even level");
  int d = D / 2;
  ClassData out{d, 2 * c.n, {}};
  auto down_poly = [&](const Poly& f) {
    Poly fd{d, {}};
    fd.c.resize(f.c.size());
    for (std::size_t i = 0; i < f.c.size(); ++i) {
      FieldElem coef{D, f.c[i]};
      if (coef.is_zero()) {
        fd.c[i] = 0;
        continue;
      }
      std::uint64_t k = T.level_order(D) / T.level_order(d);
      std::uint64_t lg = T.dlog(coef);
      check(lg % k == 0, Err::Config, "coefficient not in the subfield");
      fd.c[i] = T.from_dlog(d, lg / k).idx;
    }
    return fd;
  };
  auto add_pair = [&](Poly f, const std::vector<int>& parts) {
    auto it = std::find_if(out.pairs.begin(), out.pairs.end(),
                           [&](const auto& pr) { return pr.first == f; });
    if (it == out.pairs.end()) {
      out.pairs.emplace_back(std::move(f), parts);
      std::sort(out.pairs.back().second.rbegin(), out.pairs.back().second.rend());
    } else {
      it->second.insert(it->second.end(), parts.begin(), parts.end());
      std::sort(it->second.rbegin(), it->second.rend());
    }
  };
  for (const auto& [f, lambda] : c.pairs) {
    Poly fs = poly_frobenius(T, f, d);
    if (fs == f) {
      std::vector<int> twice = lambda;
      twice.insert(twice.end(), lambda.begin(), lambda.end());
      add_pair(down_poly(f), twice);
    } else {
      add_pair(down_poly(poly_mul(T, f, fs)), lambda);
    }
  }
  std::sort(out.pairs.begin(), out.pairs.end(),
            [](const auto& a, const auto& b) { return poly_less(a.first, b.first); });
  return out;
}

MatF mat_embed(const FieldTower& T, const MatF& g, int D) {
  MatF r{D, g.n, g.a};
  for (auto& x : r.a) x = T.embed({g.level, x}, D).idx;
  return r;
}

MatF levi_embed(const FieldTower& T, const MatF& g1, const MatF& g2) {
  (void)T;
  check(g1.level == g2.level && g1.n == g2.n, Err::LevelMismatch, "levi_embed: shape mismatch");
  return direct_sum(g1, g2);
}

MatF frobenius_map(const FieldTower& T, const MatF& g, int sub_level) {
  MatF r = g;
  for (auto& x : r.a) x = T.frobenius({g.level, x}, sub_level).idx;
  return r;
}

MatF unipotent_embed(const FieldTower& T, const MatF& X) {
  int n = X.n;
  MatF u = mat_identity(T, X.level, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) u.at(i, n + j) = X.at(i, j);
  return u;
}

ClassData descend_class(const FieldTower& T, const ClassData& c, int sub_level) {
  int D = c.level;
  check(D == 2 * sub_level, Err::LevelMismatch, "descend_class expects a quadratic extension");
  std::uint64_t k = T.level_order(D) / T.level_order(sub_level);
  auto down_elem = [&](FieldElem x) {
    if (x.is_zero()) return T.zero(sub_level);
    std::uint64_t lg = T.dlog(x);
    check(lg % k == 0, Err::NotSigmaStable, "coefficient not fixed by sigma");
    return T.from_dlog(sub_level, lg / k);
  };
  ClassData out{sub_level, c.n, {}};
  std::vector<bool> used(c.pairs.size(), false);
  for (std::size_t i = 0; i < c.pairs.size(); ++i) {
    if (used[i]) continue;
    const auto& [f, lambda] = c.pairs[i];
    Poly fs = poly_frobenius(T, f, sub_level);
    if (fs == f) {
      Poly fd{sub_level, {}};
      fd.c.resize(f.c.size());
      for (std::size_t t = 0; t < f.c.size(); ++t) fd.c[t] = down_elem({D, f.c[t]}).idx;
      out.pairs.emplace_back(fd, lambda);
      used[i] = true;
    } else {
      auto j = std::find_if(c.pairs.begin(), c.pairs.end(),
                            [&](const auto& pr) { return pr.first == fs; });
      check(j != c.pairs.end(), Err::NotSigmaStable, "class is not sigma-stable");
      check(j->second == lambda, Err::PartitionMismatch,
            "sigma-paired factors carry different partitions");
      Poly prod = poly_mul(T, f, fs);
      Poly fd{sub_level, {}};
      fd.c.resize(prod.c.size());
      for (std::size_t t = 0; t < prod.c.size(); ++t) fd.c[t] = down_elem({D, prod.c[t]}).idx;
      out.pairs.emplace_back(fd, lambda);
      used[i] = used[static_cast<std::size_t>(j - c.pairs.begin())] = true;
    }
  }
  std::sort(out.pairs.begin(), out.pairs.end(),
            [](const auto& a, const auto& b) { return poly_less(a.first, b.first); });
  return out;
}

ClassData basechange_class(const FieldTower& T, const ClassData& c, int ext_level) {
  check(ext_level % c.level == 0, Err::NotSubfield, "basechange_class: level must divide");
  ClassData out{ext_level, c.n, {}};
  for (const auto& [f, lambda] : c.pairs) {
    Poly lifted{ext_level, {}};
    lifted.c.resize(f.c.size());
    for (std::size_t i = 0; i < f.c.size(); ++i)
      lifted.c[i] = T.embed({c.level, f.c[i]}, ext_level).idx;
    for (const auto& [u, e] : poly_factor(T, lifted)) {
      check(e == 1, Err::Config, "irreducible polynomial factored with multiplicity");
      out.pairs.emplace_back(u, lambda);
    }
  }
  std::sort(out.pairs.begin(), out.pairs.end(),
            [](const auto& a, const auto& b) { return poly_less(a.first, b.first); });
  return out;
}

ClassData shintani_norm(const FieldTower& T, const MatF& g, int sub_level) {
  MatF prod = mat_mul(T, g, frobenius_map(T, g, sub_level));
  ClassData cE = class_of(T, prod);
  try {
    return descend_class(T, cE, sub_level);
  } catch (const Error& e) {
    fail(Err::DescentFailure, std::string("norm class failed to descend: ") + e.what());
  }
}

// ---- subspaces --------------------------------------------------------------------

namespace {

// reduce v against RREF rows; returns true if v lands in the span
bool reduce_into(const FieldTower& T, const std::vector<std::vector<std::uint32_t>>& rows,
                 std::vector<std::uint32_t>& v, int level) {
  for (const auto& row : rows) {
    int pivot = -1;
    for (std::size_t j = 0; j < row.size(); ++j)
      if (row[j] != 0) {
        pivot = static_cast<int>(j);
        break;
      }
    if (pivot < 0 || v[pivot] == 0) continue;
    FieldElem f{level, v[pivot]};
    for (std::size_t j = 0; j < v.size(); ++j)
      v[j] = T.sub({level, v[j]}, T.mul(f, {level, row[j]})).idx;
  }
  for (std::uint32_t x : v)
    if (x != 0) return false;
  return true;
}

} // namespace

std::vector<Subspace> invariant_subspaces(const FieldTower& T, const MatF& g, int k) {
  const int n = g.n;
  check(k >= 0 && k <= n, Err::Config, "invariant_subspaces: bad dimension");
  std::vector<Subspace> out;
  if (k == 0) {
    out.push_back(Subspace{g.level, n, {}});
    return out;
  }
  std::uint64_t Q = T.level_size(g.level);
  // iterate pivot column sets in lexicographic order
  std::vector<int> piv(k);
  std::iota(piv.begin(), piv.end(), 0);
  while (true) {
    // free positions: (row i, col j) with j > piv[i], j not a pivot
    std::vector<std::pair<int, int>> free_pos;
    for (int i = 0; i < k; ++i)
      for (int j = piv[i] + 1; j < n; ++j)
        if (std::find(piv.begin(), piv.end(), j) == piv.end()) free_pos.emplace_back(i, j);
    std::uint64_t total = 1;
    for (std::size_t t = 0; t < free_pos.size(); ++t) total *= Q;
    for (std::uint64_t code = 0; code < total; ++code) {
      std::vector<std::vector<std::uint32_t>> rows(k, std::vector<std::uint32_t>(n, 0));
      for (int i = 0; i < k; ++i) rows[i][piv[i]] = 1;
      std::uint64_t t = code;
      for (const auto& [i, j] : free_pos) {
        rows[i][j] = static_cast<std::uint32_t>(t % Q);
        t /= Q;
      }
      bool stable = true;
      for (int i = 0; i < k && stable; ++i) {
        auto img = mat_apply(T, g, rows[i]);
        stable = reduce_into(T, rows, img, g.level);
      }
      if (stable) out.push_back(Subspace{g.level, n, rows});
    }
    // next pivot combination
    int i = k - 1;
    while (i >= 0 && piv[i] == n - k + i) --i;
    if (i < 0) break;
    ++piv[i];
    for (int j = i + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
  }
  return out;
}

std::pair<MatF, MatF> restrict_and_quotient(const FieldTower& T, const MatF& g,
                                            const Subspace& W) {
  const int n = g.n, k = W.dim();
  // change of basis: W's rows, then the standard vectors off the pivots
  std::vector<int> pivots;
  for (const auto& row : W.basis)
    for (int j = 0; j < n; ++j)
      if (row[j] != 0) {
        pivots.push_back(j);
        break;
      }
  MatF P = mat_zero(g.level, n);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j) P.at(j, i) = W.basis[i][j];
  int col = k;
  for (int j = 0; j < n; ++j)
    if (std::find(pivots.begin(), pivots.end(), j) == pivots.end()) P.at(j, col++) = 1;
  MatF M = mat_mul(T, mat_inv(T, P), mat_mul(T, g, P));
  for (int i = k; i < n; ++i)
    for (int j = 0; j < k; ++j)
      check(M.at(i, j) == 0, Err::NotInvariant, "subspace is not invariant");
  MatF A = mat_zero(g.level, k), C = mat_zero(g.level, n - k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) A.at(i, j) = M.at(i, j);
  for (int i = k; i < n; ++i)
    for (int j = k; j < n; ++j) C.at(i - k, j - k) = M.at(i, j);
  return {A, C};
}

long long gaussian_binomial(std::uint64_t Q, int n, int k) {
  if (k < 0 || k > n) return 0;
  // prod (Q^n - Q^i) / (Q^k - Q^i), i < k -- exact by construction
  long long num = 1, den = 1;
  for (int i = 0; i < k; ++i) {
    long long qn = 1, qk = 1;
    for (int t = 0; t < n; ++t) qn = checked_mul(qn, static_cast<long long>(Q));
    for (int t = 0; t < k; ++t) qk = checked_mul(qk, static_cast<long long>(Q));
    long long qi = 1;
    for (int t = 0; t < i; ++t) qi = checked_mul(qi, static_cast<long long>(Q));
    num = checked_mul(num, qn - qi);
    den = checked_mul(den, qk - qi);
  }
  return divide_exact(num, den);
}

long long group_order(const FieldTower& T, int n, int level) {
  std::uint64_t Q = T.level_size(level);
  long long qn = 1;
  for (int i = 0; i < n; ++i) qn = checked_mul(qn, static_cast<long long>(Q));
  long long order = 1, qi = 1;
  for (int i = 0; i < n; ++i) {
    order = checked_mul(order, qn - qi);
    qi = checked_mul(qi, static_cast<long long>(Q));
  }
  return order;
}

long long centralizer_order(const FieldTower& T, const ClassData& c) {
  // product over pairs of the classical partition-indexed centralizer order
  // z_lambda(t) = t^(sum conj(lambda)_i^2) * prod_i prod_{j<=m_i} (1 - t^-j),
  // computed over t = Q^(deg f)
  long long z = 1;
  for (const auto& [f, lambda] : c.pairs) {
    long long t = 1;
    for (int i = 0; i < f.degree(); ++i)
      t = checked_mul(t, static_cast<long long>(T.level_size(c.level)));
    // conjugate partition
    std::vector<int> conj;
    for (int i = 1; i <= (lambda.empty() ? 0 : lambda[0]); ++i) {
      int cnt = 0;
      for (int part : lambda)
        if (part >= i) ++cnt;
      conj.push_back(cnt);
    }
    long long sumsq = 0;
    for (int cc : conj) sumsq += static_cast<long long>(cc) * cc;
    // multiplicities of each part size
    std::map<int, int> mult;
    for (int part : lambda) mult[part]++;
    long long J = 0;
    long long prod = 1;
    for (const auto& [part, m] : mult) {
      (void)part;
      for (int j = 1; j <= m; ++j) {
        J += j;
        long long tj = 1;
        for (int i = 0; i < j; ++i) tj = checked_mul(tj, t);
        prod = checked_mul(prod, tj - 1);
      }
    }
    long long tpow = 1;
    for (long long i = 0; i < sumsq - J; ++i) tpow = checked_mul(tpow, t);
    z = checked_mul(z, checked_mul(tpow, prod));
  }
  return z;
}

long long class_size(const FieldTower& T, const ClassData& c) {
  return divide_exact(group_order(T, c.n, c.level), centralizer_order(T, c));
}

namespace {

void partitions_of(int m, std::vector<std::vector<int>>& out) {
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int left, int maxpart) {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (int part = std::min(left, maxpart); part >= 1; --part) {
      cur.push_back(part);
      rec(left - part, part);
      cur.pop_back();
    }
  };
  rec(m, m);
}

} // namespace

std::vector<ClassData> enumerate_classes(const FieldTower& T, int n, int level) {
  // all irreducibles of degree <= n, excluding x itself
  std::vector<Poly> irr;
  for (int d = 1; d <= n; ++d)
    for (const Poly& f : all_irreducibles(T, level, d))
      if (!(d == 1 && f.c[0] == 0)) irr.push_back(f);
  std::sort(irr.begin(), irr.end(), poly_less);
  std::vector<std::vector<std::vector<int>>> parts(n + 1);
  for (int m = 1; m <= n; ++m) partitions_of(m, parts[m]);

  std::vector<ClassData> out;
  ClassData cur{level, n, {}};
  std::function<void(std::size_t, int)> rec = [&](std::size_t next, int left) {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = next; i < irr.size(); ++i) {
      int d = irr[i].degree();
      for (int m = 1; m * d <= left; ++m)
        for (const auto& lambda : parts[m]) {
          cur.pairs.emplace_back(irr[i], lambda);
          rec(i + 1, left - m * d);
          cur.pairs.pop_back();
        }
    }
  };
  rec(0, n);
  std::sort(out.begin(), out.end(), class_less);
  return out;
}

std::vector<MatF> enumerate_group(const FieldTower& T, int n, int level, long long bound) {
  long long order = group_order(T, n, level);
  check(order <= bound, Err::BoundExceeded,
        "group order " + std::to_string(order) + " exceeds the iteration bound");
  std::uint64_t Q = T.level_size(level);
  std::uint64_t rowcount = 1;
  for (int i = 0; i < n; ++i) rowcount *= Q;
  std::vector<MatF> out;
  out.reserve(static_cast<std::size_t>(order));
  MatF m = mat_zero(level, n);
  // span kept fully reduced (every row zero at the other rows' pivots), so a
  // single reduction pass decides membership; copied per recursion level
  using Span = std::vector<std::vector<std::uint32_t>>;
  auto insert_into = [&](Span span, std::vector<std::uint32_t> v) -> std::pair<bool, Span> {
    if (reduce_into(T, span, v, level)) return {false, std::move(span)};
    int pivot = 0;
    while (v[pivot] == 0) ++pivot;
    FieldElem pinv = T.inv({level, v[pivot]});
    for (auto& x : v) x = T.mul({level, x}, pinv).idx;
    for (auto& row : span) {
      if (row[pivot] == 0) continue;
      FieldElem f{level, row[pivot]};
      for (int j = 0; j < n; ++j)
        row[j] = T.sub({level, row[j]}, T.mul(f, {level, v[j]})).idx;
    }
    span.push_back(std::move(v));
    return {true, std::move(span)};
  };
  std::function<void(int, const Span&)> rec = [&](int row, const Span& span) {
    if (row == n) {
      out.push_back(m);
      return;
    }
    for (std::uint64_t code = 1; code < rowcount; ++code) {
      std::vector<std::uint32_t> v(n);
      std::uint64_t t = code;
      for (int j = 0; j < n; ++j) {
        v[j] = static_cast<std::uint32_t>(t % Q);
        t /= Q;
      }
      auto [independent, next] = insert_into(span, v);
      if (!independent) continue;
      for (int j = 0; j < n; ++j) m.at(row, j) = v[j];
      rec(row + 1, next);
    }
  };
  rec(0, Span{});
  return out;
}

} // namespace glct
