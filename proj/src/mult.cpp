#include "glct/mult.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

namespace glct {

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b) {
  std::uint64_t g = a, x = b;
  while (x) {
    g %= x;
    std::swap(g, x);
  }
  return a / (g == 0 ? 1 : g) * b;
}

} // namespace

std::string EmbeddedSubgroup::name() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::LeviNN: os << "levi"; break;
    case Kind::WeilGLnE: os << "weil"; break;
    case Kind::SplitTorus: os << "torus"; break;
    case Kind::SubfieldGLn: os << "subfield"; break;
    case Kind::CenterQuotient: os << "pgl2"; break;
  }
  os << ":" << n << ":" << level;
  return os.str();
}

const SubgroupData& Engine::subgroup(const EmbeddedSubgroup& H) {
  std::lock_guard<std::mutex> lock(sub_mu_);
  auto it = subgroups_.find(H.name());
  if (it != subgroups_.end()) return *it->second;

  auto data = std::make_unique<SubgroupData>();
  std::map<std::string, int> ambient_idx;
  auto intern_ambient = [&](const ClassData& c) {
    std::string key = class_to_string(T, c);
    auto [jt, inserted] = ambient_idx.emplace(key, static_cast<int>(data->ambient_classes.size()));
    if (inserted) data->ambient_classes.push_back(c);
    return jt->second;
  };

  switch (H.kind) {
    case EmbeddedSubgroup::Kind::LeviNN: {
      auto classes = enumerate_classes(T, H.n, H.level);
      data->factors = 2;
      data->native_classes = {classes, classes};
      data->order = checked_mul(group_order(T, H.n, H.level), group_order(T, H.n, H.level));
      std::vector<long long> sizes;
      for (const ClassData& c : classes) sizes.push_back(class_size(T, c));
      for (std::size_t i = 0; i < classes.size(); ++i)
        for (std::size_t j = 0; j < classes.size(); ++j)
          data->classwise.push_back({intern_ambient(merge_classes(classes[i], classes[j])),
                                     {static_cast<int>(i), static_cast<int>(j)},
                                     checked_mul(sizes[i], sizes[j])});
      if (data->order <= element_bound) {
        auto elements = enumerate_group(T, H.n, H.level, element_bound);
        std::vector<int> elem_class(elements.size());
        std::map<std::string, int> native_idx;
        for (std::size_t i = 0; i < classes.size(); ++i)
          native_idx[class_to_string(T, classes[i])] = static_cast<int>(i);
        for (std::size_t e = 0; e < elements.size(); ++e)
          elem_class[e] = native_idx.at(class_to_string(T, class_of(T, elements[e])));
        for (std::size_t i = 0; i < elements.size(); ++i)
          for (std::size_t j = 0; j < elements.size(); ++j)
            data->elementwise.push_back(
                {intern_ambient(class_of(T, levi_embed(T, elements[i], elements[j]))),
                 {elem_class[i], elem_class[j]},
                 1});
        data->has_elementwise = true;
      }
      break;
    }
    case EmbeddedSubgroup::Kind::WeilGLnE: {
      check(H.level % 2 == 0, Err::LevelMismatch, "weil subgroup needs an even level");
      auto classes = enumerate_classes(T, H.n, H.level);
      data->factors = 1;
      data->native_classes = {classes};
      data->order = group_order(T, H.n, H.level);
      for (std::size_t i = 0; i < classes.size(); ++i)
        data->classwise.push_back({intern_ambient(weil_class(T, classes[i])),
                                   {static_cast<int>(i)},
                                   class_size(T, classes[i])});
      if (data->order <= element_bound) {
        std::map<std::string, int> native_idx;
        for (std::size_t i = 0; i < classes.size(); ++i)
          native_idx[class_to_string(T, classes[i])] = static_cast<int>(i);
        for (const MatF& g : enumerate_group(T, H.n, H.level, element_bound))
          data->elementwise.push_back(
              {intern_ambient(class_of(T, weil_embed(T, g))),
               {native_idx.at(class_to_string(T, class_of(T, g)))},
               1});
        data->has_elementwise = true;
      }
      break;
    }
    case EmbeddedSubgroup::Kind::SplitTorus: {
      data->factors = H.n;
      std::uint64_t units = T.level_order(H.level);
      std::vector<ClassData> unit_classes;
      for (std::uint32_t u = 1; u <= units; ++u) {
        Poly f{H.level, {T.neg(T.element(H.level, u)).idx, 1}};
        unit_classes.push_back(ClassData{H.level, 1, {{f, {1}}}});
      }
      std::sort(unit_classes.begin(), unit_classes.end(), class_less);
      data->native_classes.assign(H.n, unit_classes);
      data->order = 1;
      for (int i = 0; i < H.n; ++i) data->order = checked_mul(data->order, static_cast<long long>(units));
      std::vector<int> tuple(H.n, 0);
      while (true) {
        ClassData amb = unit_classes[tuple[0]];
        for (int i = 1; i < H.n; ++i) amb = merge_classes(amb, unit_classes[tuple[i]]);
        data->classwise.push_back({intern_ambient(amb), tuple, 1});
        int pos = H.n - 1;
        while (pos >= 0 && tuple[pos] + 1 == static_cast<int>(unit_classes.size())) {
          tuple[pos] = 0;
          --pos;
        }
        if (pos < 0) break;
        ++tuple[pos];
      }
      break;
    }
    case EmbeddedSubgroup::Kind::SubfieldGLn: {
      auto classes = enumerate_classes(T, H.n, H.level);
      data->factors = 1;
      data->native_classes = {classes};
      data->order = group_order(T, H.n, H.level);
      for (std::size_t i = 0; i < classes.size(); ++i)
        data->classwise.push_back({intern_ambient(basechange_class(T, classes[i], 2 * H.level)),
                                   {static_cast<int>(i)},
                                   class_size(T, classes[i])});
      if (data->order <= element_bound) {
        std::map<std::string, int> native_idx;
        for (std::size_t i = 0; i < classes.size(); ++i)
          native_idx[class_to_string(T, classes[i])] = static_cast<int>(i);
        for (const MatF& g : enumerate_group(T, H.n, H.level, element_bound))
          data->elementwise.push_back(
              {intern_ambient(class_of(T, mat_embed(T, g, 2 * H.level))),
               {native_idx.at(class_to_string(T, class_of(T, g)))},
               1});
        data->has_elementwise = true;
      }
      break;
    }
    case EmbeddedSubgroup::Kind::CenterQuotient: {
      // sum over GL_2 with the plain Haar measure: for specs trivial on the
      // center this equals the PGL_2 average
      auto classes = enumerate_classes(T, 2, H.level);
      data->factors = 1;
      data->native_classes = {classes};
      data->order = group_order(T, 2, H.level);
      for (std::size_t i = 0; i < classes.size(); ++i)
        data->classwise.push_back(
            {intern_ambient(classes[i]), {static_cast<int>(i)}, class_size(T, classes[i])});
      break;
    }
  }
  auto [jt, inserted] = subgroups_.emplace(H.name(), std::move(data));
  return *jt->second;
}

long long Engine::run_entries(const std::vector<SubgroupData::Entry>& entries, long long order,
                              const SubgroupData& data, const CharSpec& pi,
                              const std::vector<CharSpec>& chi_factors) {
  std::uint64_t M = natural_conductor(T, pi);
  for (const CharSpec& f : chi_factors) M = lcm_u64(M, natural_conductor(T, f));
  // value tables per distinct class
  std::vector<CycValue> ambient_vals;
  ambient_vals.reserve(data.ambient_classes.size());
  for (const ClassData& c : data.ambient_classes)
    ambient_vals.push_back(lift(cache.value(T, pi, c), static_cast<std::uint32_t>(M)));
  std::vector<std::vector<CycValue>> native_vals(chi_factors.size());
  for (std::size_t f = 0; f < chi_factors.size(); ++f)
    for (const ClassData& c : data.native_classes[f])
      native_vals[f].push_back(
          conj(lift(cache.value(T, chi_factors[f], c), static_cast<std::uint32_t>(M))));

  std::vector<CycAccum> partial(std::max(threads, 1),
                                CycAccum(static_cast<std::uint32_t>(M)));
  parallel_chunks(entries.size(), threads, [&](std::size_t worker, std::size_t begin,
                                               std::size_t end) {
    CycAccum& acc = partial[std::min(worker, partial.size() - 1)];
    for (std::size_t e = begin; e < end; ++e) {
      const auto& entry = entries[e];
      CycValue term = ambient_vals[entry.ambient];
      for (std::size_t f = 0; f < chi_factors.size(); ++f)
        term = mul(term, native_vals[f][entry.native[f]]);
      acc.add(term, entry.weight);
    }
  });
  for (std::size_t i = 1; i < partial.size(); ++i) partial[0].merge(partial[i]);
  return divide_exact(as_integer(partial[0].value()), order);
}

MultReport Engine::multiplicity(const CharSpec& pi, const EmbeddedSubgroup& H,
                                const std::vector<CharSpec>& chi_factors) {
  auto t0 = std::chrono::steady_clock::now();
  const SubgroupData& data = subgroup(H);
  check(static_cast<int>(chi_factors.size()) == data.factors, Err::Config,
        "subgroup expects " + std::to_string(data.factors) + " character factors");
  MultReport rep;
  rep.q = T.q();
  rep.n = pi.n;
  rep.pi = pi.key();
  rep.subgroup = H.name();
  rep.tower = std::to_string(T.descriptor_hash());
  {
    std::ostringstream os;
    for (std::size_t i = 0; i < chi_factors.size(); ++i)
      os << (i ? "," : "") << chi_factors[i].key();
    rep.chi = os.str();
  }
  long long m_class = run_entries(data.classwise, data.order, data, pi, chi_factors);
  if (data.has_elementwise) {
    long long m_elem = run_entries(data.elementwise, data.order, data, pi, chi_factors);
    check(m_elem == m_class, Err::PatternViolation,
          "elementwise and classwise multiplicities disagree");
    rep.method = "both";
  } else {
    rep.method = "classwise";
  }
  check(m_class >= 0, Err::PatternViolation, "negative multiplicity");
  rep.m = m_class;
  rep.wall_ms = ms_since(t0);
  return rep;
}

// ---- predictors -----------------------------------------------------------------

bool predict_thm41(const FieldTower& T, int two_n, std::uint64_t a, std::uint64_t c1,
                   std::uint64_t c2) {
  int n = two_n / 2;
  std::uint64_t ordn = T.level_order(n);
  std::uint64_t ord1 = T.level_order(1);
  if (ord1 == 0) return a % ordn == 0;
  std::uint64_t k = ((c1 + c2) % ord1) * (ordn / ord1) % ordn;
  return a % ordn == k;
}

bool predict_thm53(const FieldTower& T, int two_n, std::uint64_t a, std::uint64_t c) {
  int n = two_n / 2;
  std::uint64_t ordn = T.level_order(n);
  std::uint64_t ord1 = T.level_order(1);
  if (ord1 == 0) return a % ordn == 0;
  std::uint64_t k = (c % ord1) * (ordn / ord1) % ordn;
  return a % ordn == k;
}

bool predict_prop51(const FieldTower& T, int n, std::uint64_t a) {
  if (n % 2 == 0) return false;
  return a % T.level_order(n) == 0;
}

long long predict_thm31(Engine& eng, int n, std::uint64_t a1, std::uint64_t a2, std::uint64_t c1,
                        std::uint64_t c2) {
  const FieldTower& T = eng.T;
  if (n == 1) {
    // lambda_1 x lambda_2 irreducible: mu_1 mu_2 = lambda_1 lambda_2 gives 1,
    // with the two orderings of (lambda_1, lambda_2) themselves giving 2
    std::uint64_t ord = T.level_order(1);
    if (ord == 0) return 2; // q = 2: the unique torus character of the unique series
    if ((a1 + a2) % ord != (c1 + c2) % ord) return 0;
    bool same = (c1 % ord == a1 % ord && c2 % ord == a2 % ord) ||
                (c1 % ord == a2 % ord && c2 % ord == a1 % ord);
    return same ? 2 : 1;
  }
  std::uint64_t ord1 = std::max<std::uint64_t>(T.level_order(1), 1);
  MultChar chi1_inv = make_char(T, 1, (ord1 - c1 % ord1) % ord1);
  MultChar chi2_inv = make_char(T, 1, (ord1 - c2 % ord1) % ord1);
  CharSpec pi1 = cuspidal_spec(T, n, 1, a1);
  CharSpec pi2 = cuspidal_spec(T, n, 1, a2);
  long long cond1 =
      iso_test(T, dual_spec(T, twist_spec(T, pi1, chi1_inv)), twist_spec(T, pi2, chi2_inv)) ? 1
                                                                                            : 0;
  long long cond2 = 0;
  if (n % 2 == 0) {
    EmbeddedSubgroup levi{EmbeddedSubgroup::Kind::LeviNN, n / 2, 1};
    std::vector<CharSpec> chis{det_char_spec(T, n / 2, 1, c1), det_char_spec(T, n / 2, 1, c2)};
    cond2 = checked_mul(eng.multiplicity(pi1, levi, chis).m, eng.multiplicity(pi2, levi, chis).m);
  }
  return cond1 + cond2;
}

// ---- the twisted-linear relation --------------------------------------------------

namespace {

TwistedTriple finish_triple(long long m, long long m_E, std::string method) {
  check(m <= m_E, Err::ParityViolation, "m exceeds its basechange bound");
  check((m_E + m) % 2 == 0, Err::ParityViolation,
        "m and m_E have different parities");
  TwistedTriple t;
  t.m = m;
  t.m_E = m_E;
  t.m_tilde = (m_E + m) / 2;
  t.method = std::move(method);
  check(t.m_tilde >= 0 && t.m_tilde <= t.m_E, Err::ParityViolation,
        "twisted multiplicity out of range");
  return t;
}

} // namespace

TwistedTriple shintani_twisted_multiplicity(Engine& eng, const CharSpec& pi,
                                            std::uint64_t chi_exp) {
  const FieldTower& T = eng.T;
  check(pi.kind == CharSpec::Kind::Cuspidal && pi.n % 2 == 0, Err::Config,
        "the twisted-linear relation needs a cuspidal of even size");
  int n = pi.n / 2;
  int levelE = 2 * pi.level;
  EmbeddedSubgroup weil{EmbeddedSubgroup::Kind::WeilGLnE, n, levelE};
  MultReport mrep = eng.multiplicity(pi, weil, {det_char_spec(T, n, levelE, chi_exp)});

  CharSpec piE = basechange_spec(T, pi);
  std::uint64_t chi_sigma = frobenius_twist(T, make_char(T, levelE, chi_exp), pi.level).exponent;
  EmbeddedSubgroup leviE{EmbeddedSubgroup::Kind::LeviNN, n, levelE};
  MultReport erep = eng.multiplicity(
      piE, leviE,
      {det_char_spec(T, n, levelE, chi_exp), det_char_spec(T, n, levelE, chi_sigma)});
  return finish_triple(mrep.m, erep.m, mrep.method + "/" + erep.method);
}

TwistedTriple shintani_twisted_subfield(Engine& eng, const CharSpec& piE, std::uint64_t chi_exp) {
  const FieldTower& T = eng.T;
  check(piE.level % 2 == 0, Err::Config, "spec must live over the quadratic extension");
  int n = piE.n;
  int levelF = piE.level / 2;
  EmbeddedSubgroup sub{EmbeddedSubgroup::Kind::SubfieldGLn, n, levelF};
  MultReport mrep = eng.multiplicity(piE, sub, {det_char_spec(T, n, levelF, chi_exp)});

  // m_E = <Theta_pi . Theta_pi^sigma, (chi o Nm) o det> over GL_n(E)
  CharSpec piS = frobenius_spec(T, piE);
  MultChar chiE = inflate_char_by_norm(T, make_char(T, levelF, chi_exp), piE.level);
  std::uint64_t M = lcm_u64(natural_conductor(T, piE),
                            std::max<std::uint64_t>(T.level_order(piE.level), 1));
  CycAccum acc(static_cast<std::uint32_t>(M));
  for (const ClassData& c : enumerate_classes(T, n, piE.level)) {
    CycValue v = mul(lift(eng.cache.value(T, piE, c), static_cast<std::uint32_t>(M)),
                     lift(eng.cache.value(T, piS, c), static_cast<std::uint32_t>(M)));
    FieldElem det = class_det(T, c);
    v = mul(v, conj(char_eval(T, chiE, det, M)));
    acc.add(v, class_size(T, c));
  }
  long long m_E = divide_exact(as_integer(acc.value()), group_order(T, n, piE.level));
  return finish_triple(mrep.m, m_E, mrep.method + "/classwise");
}

std::vector<std::uint64_t> regular_orbit_reps(const FieldTower& T, int n, int s) {
  std::uint64_t ord = T.level_order(n * s);
  std::vector<std::uint64_t> reps;
  std::vector<bool> seen(ord, false);
  for (std::uint64_t a = 1; a < ord; ++a) {
    if (seen[a]) continue;
    auto orbit = char_orbit(T, make_char(T, n * s, a), s);
    for (std::uint64_t b : orbit) seen[b] = true;
    if (orbit.size() == static_cast<std::size_t>(n)) reps.push_back(orbit.front());
  }
  return reps;
}

} // namespace glct
