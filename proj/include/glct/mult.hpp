#ifndef GLCT_MULT_HPP
#define GLCT_MULT_HPP

#include <iosfwd>
#include <optional>

#include "glct/chars.hpp"
#include "glct/parallel.hpp"

namespace glct {

/// A subgroup H together with its embedding into the ambient group:
///   LeviNN(n, level):     GL_n x GL_n block-diagonal in GL_2n, over `level`
///   WeilGLnE(n, level):   GL_n over `level` inside GL_2n over `level`/2
///   SplitTorus(n, level): diagonal torus of GL_n over `level`
///   SubfieldGLn(n, level): GL_n over `level` inside GL_n over 2*`level`
///   CenterQuotient(level): GL_2 summed with the center-quotient measure
struct EmbeddedSubgroup {
  enum class Kind { LeviNN, WeilGLnE, SplitTorus, SubfieldGLn, CenterQuotient };
  Kind kind = Kind::LeviNN;
  int n = 1;
  int level = 1;

  std::string name() const;
};

/// Result of one multiplicity computation or one verifier case.
struct MultReport {
  std::string verifier;
  std::uint64_t q = 0;
  int n = 0;
  std::string pi, chi, subgroup, tower;
  std::uint64_t theta_orbit = 0;
  long long chi1 = -1, chi2 = -1;
  long long m = -1;
  long long m_E = -1, m_tilde = -1;
  long long predicted = -1, computed = -1;
  std::string method;
  bool pass = true;
  std::vector<std::string> counterexamples;
  double wall_ms = 0;
};

struct VerifyReport {
  std::string verifier;
  bool pass = true;
  std::vector<MultReport> rows;
  double wall_ms = 0;
};

/// Materialized iteration data for a subgroup: every entry contributes
/// weight * Theta_pi(ambient) * prod_i conj chi_i(native_i).  The classwise
/// table always exists; the elementwise table exists when |H| is within the
/// iteration bound and is built by genuinely embedding elements.
struct SubgroupData {
  long long order = 0;
  int factors = 1;
  std::vector<ClassData> ambient_classes;
  std::vector<std::vector<ClassData>> native_classes; // per factor
  struct Entry {
    int ambient = 0;
    std::vector<int> native;
    long long weight = 1;
  };
  std::vector<Entry> classwise;
  std::vector<Entry> elementwise;
  bool has_elementwise = false;
};

/// Shared computation context: one tower, one memo cache, one thread budget.
class Engine {
public:
  Engine(const FieldTower& tower, int threads = 1, long long element_bound = 200000)
      : T(tower), threads(threads), element_bound(element_bound) {}

  const FieldTower& T;
  CharCache cache;
  int threads;
  long long element_bound;

  const SubgroupData& subgroup(const EmbeddedSubgroup& H);

  /// m(pi, chi) = (1/|H|) sum_h Theta_pi(emb h) conj Theta_chi(h), exact.
  /// Runs elementwise and/or classwise depending on availability; when both
  /// run they must agree (method "both").
  MultReport multiplicity(const CharSpec& pi, const EmbeddedSubgroup& H,
                          const std::vector<CharSpec>& chi_factors);

private:
  long long run_entries(const std::vector<SubgroupData::Entry>& entries, long long order,
                        const SubgroupData& data, const CharSpec& pi,
                        const std::vector<CharSpec>& chi_factors);
  std::map<std::string, std::unique_ptr<SubgroupData>> subgroups_;
  std::mutex sub_mu_;
};

// ---- exponent-form predictors (each carries a derivation unit test) ---------

bool predict_thm41(const FieldTower& T, int two_n, std::uint64_t a, std::uint64_t c1,
                   std::uint64_t c2);
bool predict_thm53(const FieldTower& T, int two_n, std::uint64_t a, std::uint64_t c);
bool predict_prop51(const FieldTower& T, int n, std::uint64_t a);
long long predict_thm31(Engine& eng, int n, std::uint64_t a1, std::uint64_t a2, std::uint64_t c1,
                        std::uint64_t c2);

/// m, m_E and m~ = (m_E + m)/2 for the twisted-linear pair: pi cuspidal of
/// GL_2n over the base, chi a character of E^x acting through det on
/// GL_n(E).  ParityViolation if the half-sum is not an integer.
struct TwistedTriple {
  long long m = 0, m_E = 0, m_tilde = 0;
  std::string method;
};
TwistedTriple shintani_twisted_multiplicity(Engine& eng, const CharSpec& pi, std::uint64_t chi_exp);
/// Same relation for GL_n(F) inside GL_n(E): pi cuspidal of GL_n(E),
/// chi a character of F^x.
TwistedTriple shintani_twisted_subfield(Engine& eng, const CharSpec& piE, std::uint64_t chi_exp);

/// Regular theta-orbits at level n*s under the q^s-Frobenius, keyed by the
/// least exponent.
std::vector<std::uint64_t> regular_orbit_reps(const FieldTower& T, int n, int s);

// ---- the Green-formula gate ---------------------------------------------------

/// Proof that the cuspidal character formula was validated against the
/// Dixon oracle.  Verifiers require one; obtain it from
/// run_green_validation or by loading a stamp written by the CLI.
struct GreenGate {
  std::vector<std::string> validated;
  bool covers_reference_set() const;
};

struct GreenGroupSpec {
  std::uint64_t q;
  int n;
  std::vector<int> degrees;
  std::string tag() const;
};
const std::vector<GreenGroupSpec>& green_reference_groups();

/// Builds each group's table (or loads it from cache_dir), checks the exact
/// equality of every cuspidal value, and returns the gate.  Throws
/// PatternViolation on any mismatch.
GreenGate run_green_validation(const std::string& cache_dir = "", std::ostream* log = nullptr);

// ---- theorem verifiers ---------------------------------------------------------

VerifyReport verify_thm41(const GreenGate&, std::uint64_t q, int two_n, int threads = 1);
VerifyReport verify_thm53(const GreenGate&, std::uint64_t q, int two_n, int threads = 1);
VerifyReport verify_bc_relation(const GreenGate&, std::uint64_t q, int two_n, int threads = 1);
VerifyReport verify_distinction_cor24(const GreenGate&, std::uint64_t q, int n, int threads = 1);
VerifyReport verify_prop51(const GreenGate&, std::uint64_t q, int n);
VerifyReport verify_thm31(const GreenGate&, std::uint64_t q, int n, int threads = 1);
VerifyReport verify_thm42(const GreenGate&, std::uint64_t q, int n);
VerifyReport verify_cor43(const GreenGate&, std::uint64_t q, int n);
VerifyReport verify_remark56(const GreenGate&, std::uint64_t q);
VerifyReport verify_example25(const GreenGate&, std::uint64_t q);

} // namespace glct

#endif
