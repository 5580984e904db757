#pragma once

#include <map>
#include <string>

#include "field.hpp"

namespace ltpg {

// Result of parsing a literal: a Laurent polynomial in one variable plus
// optional big-O markers on either side.
struct LaurentPoly {
  std::map<int, FieldElem> c;
  int hi = kInf;    // O(X^hi): terms of exponent >= hi unknown
  int lo = -kInf;   // O(1/X^k): terms of exponent < lo unknown (lo = 1 - k)
};

// Grammar: sums of products of numbers, w, pi, p, q, the variable, parenthesised
// sub-expressions, integer powers, division by constants, "mod pi^N" suffixes
// and O(var^M) / O(1/var^k) terms.  Numbers without an explicit "mod" get
// absolute precision default_prec.
LaurentPoly parse_literal(const Field* F, const std::string& s, const std::string& var, int default_prec);

}  // namespace ltpg
