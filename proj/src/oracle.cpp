#include "glct/oracle.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "json.hpp"

namespace glct {

namespace {

constexpr long long kOracleBound = 25000;
constexpr int kClassBound = 40;

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  unsigned __int128 r = 1, base = b % m;
  while (e) {
    if (e & 1) r = r * base % m;
    base = base * base % m;
    e >>= 1;
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t p) { return powmod(a % p, p - 2, p); }

} // namespace

std::string pack_matrix(const MatF& g) {
  std::string s;
  s.reserve(g.a.size() * 3);
  for (std::uint32_t x : g.a) {
    s.push_back(static_cast<char>(x & 0xff));
    s.push_back(static_cast<char>((x >> 8) & 0xff));
    s.push_back(static_cast<char>((x >> 16) & 0xff));
  }
  return s;
}

int DenseGroup::lookup(const MatF& g) const {
  auto it = index.find(pack_matrix(g));
  check(it != index.end(), Err::Config, "element not in the dense group");
  return it->second;
}

DenseGroup build_dense_group(const FieldTower& T, int n, int level) {
  check(group_order(T, n, level) <= kOracleBound, Err::BoundExceeded,
        "group too large for the oracle");
  DenseGroup G;
  G.level = level;
  G.n = n;
  G.elements = enumerate_group(T, n, level, kOracleBound);
  // put the identity first (row enumeration yields it first, but be explicit)
  MatF id = mat_identity(T, level, n);
  auto it = std::find(G.elements.begin(), G.elements.end(), id);
  std::iter_swap(G.elements.begin(), it);
  for (std::size_t i = 0; i < G.elements.size(); ++i)
    G.index.emplace(pack_matrix(G.elements[i]), static_cast<int>(i));
  G.inverse.resize(G.elements.size());
  for (std::size_t i = 0; i < G.elements.size(); ++i)
    G.inverse[i] = G.lookup(mat_inv(T, G.elements[i]));

  // generating set: elementary transvections plus one-parameter diagonals
  std::vector<MatF> gens;
  std::uint64_t Q = T.level_size(level);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (std::uint32_t c = 1; c < Q; ++c) {
        MatF g = mat_identity(T, level, n);
        g.at(i, j) = c;
        gens.push_back(g);
      }
    }
  for (std::uint32_t u = 2; u < Q; ++u) {
    MatF g = mat_identity(T, level, n);
    g.at(0, 0) = u;
    gens.push_back(g);
  }
  std::vector<std::pair<MatF, MatF>> gen_pairs;
  for (const MatF& g : gens) gen_pairs.emplace_back(g, mat_inv(T, g));

  // conjugation-orbit closure
  G.elem_class.assign(G.elements.size(), -1);
  for (std::size_t seed = 0; seed < G.elements.size(); ++seed) {
    if (G.elem_class[seed] != -1) continue;
    int cls = static_cast<int>(G.class_rep.size());
    G.class_rep.push_back(static_cast<int>(seed));
    G.elem_class[seed] = cls;
    long long size = 1;
    std::deque<int> frontier{static_cast<int>(seed)};
    while (!frontier.empty()) {
      int x = frontier.front();
      frontier.pop_front();
      for (const auto& [g, ginv] : gen_pairs) {
        MatF y = mat_mul(T, g, mat_mul(T, G.elements[x], ginv));
        int yi = G.lookup(y);
        if (G.elem_class[yi] == -1) {
          G.elem_class[yi] = cls;
          ++size;
          frontier.push_back(yi);
        }
      }
    }
    G.class_sizes.push_back(size);
  }
  G.inverse_class.resize(G.num_classes());
  for (int c = 0; c < G.num_classes(); ++c)
    G.inverse_class[c] = G.elem_class[G.inverse[G.class_rep[c]]];
  return G;
}

namespace {

// modular linear algebra helpers (k <= 40, p a few thousand)
using Vec = std::vector<std::uint64_t>;
using Mat = std::vector<Vec>;

Mat mat_mul_mod(const Mat& a, const Mat& b, std::uint64_t p) {
  std::size_t n = a.size(), m = b[0].size(), kk = b.size();
  Mat r(n, Vec(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < kk; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) r[i][j] = (r[i][j] + a[i][k] * b[k][j]) % p;
    }
  return r;
}

// solve B * R = C where B (k x s) has full column rank; returns R (s x s)
Mat solve_restriction(Mat B, Mat C, std::uint64_t p) {
  std::size_t k = B.size(), s = B[0].size();
  // eliminate to express each C row combination; standard augmented reduction
  std::vector<int> pivot_row(s, -1);
  std::size_t rank = 0;
  for (std::size_t col = 0; col < s && rank < k; ++col) {
    std::size_t piv = rank;
    while (piv < k && B[piv][col] == 0) ++piv;
    if (piv == k) continue;
    std::swap(B[piv], B[rank]);
    std::swap(C[piv], C[rank]);
    std::uint64_t inv = invmod(B[rank][col], p);
    for (std::size_t j = 0; j < s; ++j) B[rank][j] = B[rank][j] * inv % p;
    for (std::size_t j = 0; j < C[0].size(); ++j) C[rank][j] = C[rank][j] * inv % p;
    for (std::size_t r = 0; r < k; ++r) {
      if (r == rank || B[r][col] == 0) continue;
      std::uint64_t f = B[r][col];
      for (std::size_t j = 0; j < s; ++j) B[r][j] = (B[r][j] + (p - f) * B[rank][j]) % p;
      for (std::size_t j = 0; j < C[0].size(); ++j)
        C[r][j] = (C[r][j] + (p - f) * C[rank][j]) % p;
    }
    pivot_row[col] = static_cast<int>(rank);
    ++rank;
  }
  check(rank == s, Err::BadPrime, "restriction solve: basis not full rank");
  Mat R(s, Vec(C[0].size(), 0));
  for (std::size_t col = 0; col < s; ++col) R[col] = C[pivot_row[col]];
  return R;
}

// characteristic polynomial mod p by Faddeev-LeVerrier (1..s invertible)
Vec char_poly_mod(const Mat& R, std::uint64_t p) {
  std::size_t s = R.size();
  Vec coeffs(s + 1, 0);
  coeffs[s] = 1;
  Mat N(s, Vec(s, 0));
  for (std::size_t i = 0; i < s; ++i) N[i][i] = 1;
  std::uint64_t c = 1;
  for (std::size_t j = 1; j <= s; ++j) {
    N = mat_mul_mod(R, N, p);
    std::uint64_t tr = 0;
    for (std::size_t i = 0; i < s; ++i) tr = (tr + N[i][i]) % p;
    c = tr % p;
    c = c * invmod(j % p, p) % p;
    c = (p - c) % p;
    coeffs[s - j] = c;
    for (std::size_t i = 0; i < s; ++i) N[i][i] = (N[i][i] + c) % p;
  }
  return coeffs;
}

Mat kernel_basis(Mat A, std::uint64_t p) {
  std::size_t s = A.size();
  std::vector<int> pivot_col_of_row(s, -1);
  std::vector<bool> is_pivot(s, false);
  std::size_t rank = 0;
  for (std::size_t col = 0; col < s && rank < s; ++col) {
    std::size_t piv = rank;
    while (piv < s && A[piv][col] == 0) ++piv;
    if (piv == s) continue;
    std::swap(A[piv], A[rank]);
    std::uint64_t inv = invmod(A[rank][col], p);
    for (std::size_t j = 0; j < s; ++j) A[rank][j] = A[rank][j] * inv % p;
    for (std::size_t r = 0; r < s; ++r) {
      if (r == rank || A[r][col] == 0) continue;
      std::uint64_t f = A[r][col];
      for (std::size_t j = 0; j < s; ++j) A[r][j] = (A[r][j] + (p - f) * A[rank][j]) % p;
    }
    pivot_col_of_row[rank] = static_cast<int>(col);
    is_pivot[col] = true;
    ++rank;
  }
  Mat basis; // columns of the kernel, one per free column
  for (std::size_t free = 0; free < s; ++free) {
    if (is_pivot[free]) continue;
    Vec v(s, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < rank; ++r)
      v[pivot_col_of_row[r]] = (p - A[r][free]) % p;
    basis.push_back(v);
  }
  return basis; // rows are kernel vectors
}

} // namespace

CharTable dixon_table(const FieldTower& T, const DenseGroup& G) {
  const int k = G.num_classes();
  check(k <= kClassBound, Err::BoundExceeded, "class count above the oracle bound");
  const long long gorder = G.order();

  // exponent of the group from class representative orders
  std::vector<int> rep_order(k);
  std::uint64_t m = 1;
  for (int c = 0; c < k; ++c) {
    MatF pw = G.elements[G.class_rep[c]];
    int ord = 1;
    while (!(pw == G.elements[0])) {
      pw = mat_mul(T, pw, G.elements[G.class_rep[c]]);
      ++ord;
    }
    rep_order[c] = ord;
    m = m / gcd_u64(m, ord) * ord;
  }

  // class of every power of every representative
  std::vector<std::vector<int>> power_class(k, std::vector<int>(m));
  for (int c = 0; c < k; ++c) {
    MatF pw = mat_identity(T, G.level, G.n);
    for (std::uint64_t v = 0; v < m; ++v) {
      power_class[c][v] = G.elem_class[G.lookup(pw)];
      pw = mat_mul(T, pw, G.elements[G.class_rep[c]]);
    }
  }

  // class multiplication constants a[i][j][l]
  std::vector<std::vector<int>> by_class(k);
  for (std::size_t e = 0; e < G.elements.size(); ++e)
    by_class[G.elem_class[e]].push_back(static_cast<int>(e));
  std::vector<std::vector<std::vector<long long>>> a(
      k, std::vector<std::vector<long long>>(k, std::vector<long long>(k, 0)));
  for (int l = 0; l < k; ++l) {
    int zl = G.class_rep[l];
    for (int i = 0; i < k; ++i)
      for (int x : by_class[i]) {
        int y = G.lookup(mat_mul(T, G.elements[G.inverse[x]], G.elements[zl]));
        a[i][G.elem_class[y]][l]++;
      }
  }

  // try successive primes p = 1 mod m
  std::uint64_t sqrt_bound = 2;
  while (sqrt_bound * sqrt_bound < static_cast<std::uint64_t>(4 * gorder)) ++sqrt_bound;
  for (std::uint64_t p = m + 1;; p += m) {
    if (!is_prime_u64(p) || p <= sqrt_bound || gorder % static_cast<long long>(p) == 0) continue;
    try {
      // simultaneous eigenvectors of the class matrices M_i
      std::vector<Mat> spaces;
      {
        Mat full(k, Vec(k, 0));
        for (int i = 0; i < k; ++i) full[i][i] = 1; // columns = basis vectors
        spaces.push_back(full);
      }
      for (int i = 1; i < k; ++i) {
        Mat Mi(k, Vec(k, 0));
        for (int j = 0; j < k; ++j)
          for (int l = 0; l < k; ++l) Mi[j][l] = static_cast<std::uint64_t>(a[i][j][l] % static_cast<long long>(p));
        std::vector<Mat> next;
        for (Mat& S : spaces) {
          std::size_t s = S[0].size();
          if (s == 1) {
            next.push_back(std::move(S));
            continue;
          }
          Mat MiS = mat_mul_mod(Mi, S, p);
          Mat R = solve_restriction(S, MiS, p); // s x s
          Vec cp = char_poly_mod(R, p);
          // roots by scanning the prime field
          for (std::uint64_t lam = 0; lam < p; ++lam) {
            std::uint64_t val = 0;
            for (std::size_t t = cp.size(); t-- > 0;) val = (val * lam + cp[t]) % p;
            if (val != 0) continue;
            Mat RmL = R;
            for (std::size_t t = 0; t < s; ++t) RmL[t][t] = (RmL[t][t] + p - lam) % p;
            Mat ker = kernel_basis(RmL, p); // rows are kernel vectors in S-coords
            if (ker.empty()) continue;
            Mat sub(k, Vec(ker.size(), 0));
            for (std::size_t col = 0; col < ker.size(); ++col)
              for (int row = 0; row < k; ++row) {
                std::uint64_t acc = 0;
                for (std::size_t t = 0; t < s; ++t)
                  acc = (acc + S[row][t] * ker[col][t]) % p;
                sub[row][col] = acc;
              }
            next.push_back(std::move(sub));
          }
        }
        spaces = std::move(next);
        check(!spaces.empty(), Err::BadPrime, "eigenspace splitting lost dimensions");
      }
      check(static_cast<int>(spaces.size()) == k, Err::BadPrime,
            "class matrices did not split completely");

      // per-irreducible data: omega values, then degrees, then lifted rows
      CharTable table;
      table.conductor = static_cast<std::uint32_t>(m);
      table.group_order = gorder;
      table.class_sizes = G.class_sizes;
      table.inverse_class = G.inverse_class;
      for (int c = 0; c < k; ++c) table.reps.push_back(G.elements[G.class_rep[c]]);

      std::uint64_t z = 0; // primitive m-th root mod p
      {
        std::uint64_t gen = 2;
        for (;; ++gen) {
          bool ok = true;
          std::uint64_t t = p - 1;
          for (std::uint64_t ell = 2; ell * ell <= t && ok; ++ell)
            if (t % ell == 0) {
              while (t % ell == 0) t /= ell;
              if (powmod(gen, (p - 1) / ell, p) == 1) ok = false;
            }
          if (ok && t > 1 && powmod(gen, (p - 1) / t, p) == 1) ok = false;
          if (ok) break;
        }
        z = powmod(gen, (p - 1) / m, p);
      }
      std::uint64_t minv = invmod(m % p, p);

      for (const Mat& S : spaces) {
        // normalize the eigenvector so the identity coordinate is 1
        Vec v(k);
        for (int i = 0; i < k; ++i) v[i] = S[i][0];
        check(v[0] != 0, Err::BadPrime, "eigenvector vanishes at the identity class");
        std::uint64_t norm = invmod(v[0], p);
        for (auto& x : v) x = x * norm % p;
        // degree from the orthogonality identity
        std::uint64_t denom = 0;
        for (int i = 0; i < k; ++i) {
          std::uint64_t term = v[i] * v[G.inverse_class[i]] % p;
          term = term * invmod(static_cast<std::uint64_t>(G.class_sizes[i] % static_cast<long long>(p)), p) % p;
          denom = (denom + term) % p;
        }
        check(denom != 0, Err::BadPrime, "degree denominator vanished");
        std::uint64_t d2 = static_cast<std::uint64_t>(gorder % static_cast<long long>(p)) *
                           invmod(denom, p) % p;
        long long degree = -1;
        for (std::uint64_t d = 1; d * d <= static_cast<std::uint64_t>(gorder); ++d)
          if (d * d % p == d2) {
            degree = static_cast<long long>(d);
            break;
          }
        check(degree > 0, Err::BadPrime, "no admissible degree for an eigenvector");

        // chi mod p on each class, then Fourier-lift the root multiplicities
        Vec chi(k);
        for (int i = 0; i < k; ++i)
          chi[i] = static_cast<std::uint64_t>(degree % static_cast<long long>(p)) * v[i] % p *
                   invmod(static_cast<std::uint64_t>(G.class_sizes[i] % static_cast<long long>(p)), p) % p;
        CharTable::Row row;
        row.degree = degree;
        row.values.resize(k, CycValue::zero(static_cast<std::uint32_t>(m)));
        for (int i = 0; i < k; ++i) {
          CycValue val = CycValue::zero(static_cast<std::uint32_t>(m));
          std::uint64_t zinv = invmod(z, p);
          for (std::uint64_t u = 0; u < m; ++u) {
            // n_iu = (1/m) sum_v chi(g_i^v) z^(-uv)
            std::uint64_t acc = 0, zpow = 1, zstep = powmod(zinv, u, p);
            for (std::uint64_t vv = 0; vv < m; ++vv) {
              acc = (acc + chi[power_class[i][vv]] * zpow) % p;
              zpow = zpow * zstep % p;
            }
            acc = acc * minv % p;
            check(acc <= static_cast<std::uint64_t>(degree), Err::BadPrime,
                  "lifted multiplicity above the degree");
            if (acc != 0)
              val = add(val, scaled(root_of_unity(static_cast<std::uint32_t>(m),
                                                  static_cast<long long>(u)),
                                    static_cast<long long>(acc)));
          }
          row.values[i] = reduce(val);
        }
        table.rows.push_back(std::move(row));
      }

      long long sq = 0;
      for (const auto& row : table.rows) sq += row.degree * row.degree;
      check(sq == gorder, Err::BadPrime, "degree squares do not sum to the group order");
      std::sort(table.rows.begin(), table.rows.end(), [](const auto& x, const auto& y) {
        if (x.degree != y.degree) return x.degree < y.degree;
        for (std::size_t i = 0; i < x.values.size(); ++i) {
          auto cx = reduced_coeffs(x.values[i]), cy = reduced_coeffs(y.values[i]);
          if (cx != cy) return cx < cy;
        }
        return false;
      });
      return table;
    } catch (const Error& e) {
      if (e.code() != Err::BadPrime) throw;
      // retry with the next admissible prime
    }
  }
}

void verify_table(const FieldTower& T, const CharTable& table) {
  (void)T;
  const int k = static_cast<int>(table.rows.size());
  check(k == static_cast<int>(table.class_sizes.size()), Err::PatternViolation,
        "row count differs from class count");
  long long sq = 0;
  for (const auto& row : table.rows) {
    sq += row.degree * row.degree;
    check(table.group_order % row.degree == 0, Err::PatternViolation,
          "a degree does not divide the group order");
  }
  check(sq == table.group_order, Err::PatternViolation, "sum of degree squares is off");
  // row orthogonality
  for (int s = 0; s < k; ++s)
    for (int t = s; t < k; ++t) {
      CycAccum acc(table.conductor);
      for (int i = 0; i < k; ++i)
        acc.add(mul(table.rows[s].values[i], table.rows[t].values[table.inverse_class[i]]),
                table.class_sizes[i]);
      long long ip = as_integer(acc.value());
      check(ip == (s == t ? table.group_order : 0), Err::PatternViolation,
            "row orthogonality fails");
    }
  // column orthogonality
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      CycAccum acc(table.conductor);
      for (int t = 0; t < k; ++t)
        acc.add(mul(table.rows[t].values[i], table.rows[t].values[table.inverse_class[j]]));
      long long ip = as_integer(acc.value());
      long long expect = i == j ? divide_exact(table.group_order, table.class_sizes[i]) : 0;
      check(ip == expect, Err::PatternViolation, "column orthogonality fails");
    }
}

std::map<std::uint64_t, int> identify_cuspidal(const FieldTower& T, const CharTable& table,
                                               int n, int level) {
  check(n >= 2, Err::Config, "cuspidal identification needs n >= 2");
  std::uint64_t ord = T.level_order(level * n);
  // regular orbits keyed by least exponent
  std::vector<std::uint64_t> orbit_reps;
  {
    std::vector<bool> seen(ord, false);
    for (std::uint64_t aexp = 1; aexp < ord; ++aexp) {
      if (seen[aexp]) continue;
      auto orbit = char_orbit(T, make_char(T, level * n, aexp), level);
      for (std::uint64_t b : orbit)
        if (b < ord) seen[b] = true;
      if (orbit.size() == static_cast<std::size_t>(n)) orbit_reps.push_back(orbit.front());
    }
  }
  long long cusp_degree = 1;
  for (int i = 1; i < n; ++i) {
    long long qi = 1;
    for (int t = 0; t < i; ++t) qi = checked_mul(qi, static_cast<long long>(T.level_size(level)));
    cusp_degree = checked_mul(cusp_degree, qi - 1);
  }
  // primary classes with a single-part partition: on these the cuspidal
  // value is (-1)^(n-1) times the theta-orbit sum at a root, with no
  // unipotent factor, which pins the row uniquely (elliptic classes alone
  // cannot separate the two linear characters of GL_2(F_2))
  std::vector<int> elliptic;
  std::vector<FieldElem> roots;
  std::vector<int> root_degrees;
  for (int c = 0; c < static_cast<int>(table.reps.size()); ++c) {
    ClassData cd = class_of(T, table.reps[c]);
    if (cd.pairs.size() == 1 && cd.pairs[0].second.size() == 1) {
      int d = cd.pairs[0].first.degree();
      elliptic.push_back(c);
      root_degrees.push_back(d);
      Poly lifted{level * d, {}};
      lifted.c.resize(cd.pairs[0].first.c.size());
      for (std::size_t i = 0; i < lifted.c.size(); ++i)
        lifted.c[i] = T.embed({level, cd.pairs[0].first.c[i]}, level * d).idx;
      auto rs = poly_roots(T, lifted);
      check(!rs.empty(), Err::Config, "no root for a primary class");
      roots.push_back(T.embed(rs.front(), level * n));
    }
  }
  check(!elliptic.empty(), Err::Config, "no one-part primary classes found");

  std::map<std::uint64_t, int> out;
  std::vector<bool> row_used(table.rows.size(), false);
  for (std::uint64_t rep : orbit_reps) {
    MultChar theta = make_char(T, level * n, rep);
    std::vector<CycValue> expected;
    for (std::size_t e = 0; e < elliptic.size(); ++e) {
      CycAccum acc(table.conductor);
      FieldElem alpha = roots[e];
      for (int kk = 0; kk < root_degrees[e]; ++kk) {
        acc.add(lift(char_eval(T, theta, alpha), table.conductor));
        alpha = T.pow(alpha, static_cast<long long>(T.level_size(level)));
      }
      CycValue v = acc.value();
      if (n % 2 == 0) v = neg(v);
      expected.push_back(reduce(v));
    }
    int found = -1;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      if (row_used[r] || table.rows[r].degree != cusp_degree) continue;
      bool match = true;
      for (std::size_t e = 0; e < elliptic.size() && match; ++e)
        match = (reduce(lift(table.rows[r].values[elliptic[e]], table.conductor)) == expected[e]);
      if (match) {
        check(found == -1, Err::IdentificationAmbiguous,
              "two rows match one theta-orbit on all elliptic classes");
        found = static_cast<int>(r);
      }
    }
    check(found != -1, Err::IdentificationAmbiguous,
          "no table row matches a regular theta-orbit");
    row_used[found] = true;
    out.emplace(rep, found);
  }
  return out;
}

long long oracle_multiplicity(const CharTable& table, int row,
                              const std::vector<std::pair<int, CycValue>>& subgroup_values) {
  CycAccum acc(table.conductor);
  for (const auto& [cls, chi] : subgroup_values)
    acc.add(mul(table.rows[row].values[cls], conj(lift(chi, table.conductor))));
  return divide_exact(as_integer(acc.value()),
                      static_cast<long long>(subgroup_values.size()));
}

// ---- serialization -------------------------------------------------------------

std::string table_to_json(const FieldTower& T, const CharTable& table, int n, int level) {
  nlohmann::json j;
  j["version"] = 1;
  j["tower_hash"] = T.descriptor_hash();
  j["group"] = "gl:" + std::to_string(n) + ":q" + std::to_string(T.level_size(level));
  j["conductor"] = table.conductor;
  j["order"] = table.group_order;
  j["class_sizes"] = table.class_sizes;
  j["inverse_class"] = table.inverse_class;
  auto reps = nlohmann::json::array();
  for (const MatF& rep : table.reps) reps.push_back(rep.a);
  j["reps"] = reps;
  auto rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json rj;
    rj["degree"] = row.degree;
    auto vals = nlohmann::json::array();
    for (const CycValue& v : row.values) {
      auto terms = nlohmann::json::array();
      for (const auto& [e, c] : v.terms) terms.push_back({e, c});
      vals.push_back(terms);
    }
    rj["values"] = vals;
    rows.push_back(rj);
  }
  j["rows"] = rows;
  return j.dump();
}

CharTable table_from_json(const FieldTower& T, const std::string& text, int n, int level) {
  nlohmann::json j = nlohmann::json::parse(text);
  check(j.at("version") == 1, Err::Config, "unknown table cache version");
  check(j.at("tower_hash") == T.descriptor_hash(), Err::Config,
        "table cache was built against a different tower");
  check(j.at("group") == "gl:" + std::to_string(n) + ":q" + std::to_string(T.level_size(level)),
        Err::Config, "table cache is for a different group");
  CharTable table;
  table.conductor = j.at("conductor").get<std::uint32_t>();
  table.group_order = j.at("order").get<long long>();
  table.class_sizes = j.at("class_sizes").get<std::vector<long long>>();
  table.inverse_class = j.at("inverse_class").get<std::vector<int>>();
  for (const auto& rep : j.at("reps")) {
    MatF m{level, n, rep.get<std::vector<std::uint32_t>>()};
    table.reps.push_back(std::move(m));
  }
  for (const auto& rj : j.at("rows")) {
    CharTable::Row row;
    row.degree = rj.at("degree").get<long long>();
    for (const auto& vj : rj.at("values")) {
      CycValue v = CycValue::zero(table.conductor);
      for (const auto& term : vj)
        v.terms.emplace_back(term[0].get<std::uint32_t>(), term[1].get<long long>());
      row.values.push_back(std::move(v));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

} // namespace glct
