#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ltpg {

// Precision sentinel for values that are known exactly (exact zeros, exact tails).
constexpr int kInf = 1 << 28;
// Valuation bound meaning "nothing is known".
constexpr int kNoBound = -(1 << 20);

inline int sat_add(int a, int b) {
  if (a >= kInf || b >= kInf) return kInf;
  if (a <= kNoBound || b <= kNoBound) return kNoBound;
  return a + b;
}

enum class Err : int {
  Ok = 0,
  InvOfZero,
  PrecisionExhausted,
  DomainError,
  EmptyWindow,
  CompositionDomain,
  NotReversible,
  NonIntegralScalar,
  DegreeBudgetExceeded,
  InvOfNonUnit,
  LevelMismatch,
  NonUnitScalar,
  NotInMaximalIdeal,
  Unsolvable,
  OperatorDiverges,
  ObstructedExactly,
  ImageObstruction,
  WindowTooSmall,
  NonInvertiblePhi,
  CommutationFailure,
  NotSubgroup,
  Singular,
  ObstructionNonzero,
  KernelAmbiguity,
  JetOrderExceeded,
  PoleUncancelled,
  ResidueObstruction,
  UnsupportedBase,
  Infeasible,
  ParseError,
  InvalidArgument,
};

const char* err_name(Err e);

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& msg) { throw Error(code, msg); }

}  // namespace ltpg
