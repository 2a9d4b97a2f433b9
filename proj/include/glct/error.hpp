#ifndef GLCT_ERROR_HPP
#define GLCT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace glct {

// Every failure mode gets a distinct code so tests can assert on the exact
// condition rather than on message text.
enum class Err {
  NotPrimePower,
  DegreeBoundExceeded,
  NotSubfield,
  ZeroElement,
  LevelTooLarge,
  ConductorMismatch,
  BoundExceeded,
  NotRational,
  NotDivisible,
  Overflow,
  SingularMatrix,
  LevelMismatch,
  NotInvariant,
  NotSigmaStable,
  PartitionMismatch,
  DescentFailure,
  NotRegular,
  IncomparableSpecs,
  ParityViolation,
  PredictorMismatch,
  IdentityViolation,
  PatternViolation,
  BadPrime,
  IdentificationAmbiguous,
  GateNotValidated,
  Config,
};

class Error : public std::runtime_error {
public:
  Error(Err code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Err code() const { return code_; }

private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) { throw Error(code, what); }

inline void check(bool ok, Err code, const std::string& what) {
  if (!ok) fail(code, what);
}

} // namespace glct

#endif
