#pragma once

#include <random>

#include "ops.hpp"

namespace ltpg::test {

struct Env {
  FieldPtr Fp;
  const Field* F;
  LTGroup G;
  Tower T;
  Ops O;
  Env(int p, int f, int M = 32, int N = 16) : Fp(Field::make({p, f, {}, {}, N})), F(Fp.get()), G(Fp), T(G), O(G, M) {}
};

inline Series random_poly(const Field* F, std::mt19937_64& rng, int lo, int hi, int prec = 16) {
  std::vector<FieldElem> c;
  for (int i = lo; i < hi; ++i) c.push_back(F->random(rng, 0, prec));
  return Series::from_coeffs(F, lo, c);
}

// v(x - y) on [lo, hi)
inline int rv(const Series& x, const Series& y, int lo, int hi) { return (x - y).val_range(lo, hi); }

inline int tv(const TowerElem& x, const TowerElem& y) {
  TowerElem d = x - y;
  int v = kInf;
  for (auto& c : d.coords()) v = std::min(v, c.val());
  return v;
}

inline FieldElem random_unit(const Field* F, std::mt19937_64& rng) {
  while (true) {
    FieldElem a = F->random(rng, 0, 30);
    if (a.is_unit()) return a;
  }
}

}  // namespace ltpg::test
