#include <random>

#include "doctest.h"
#include "field.hpp"

using namespace ltpg;

namespace {

// Independent reference: coordinate vectors mod m = p^K, reduced by the monic
// minimal polynomial with lower coefficients c.
using Vec = std::vector<int64_t>;

int64_t md(__int128 a, int64_t m) {
  a %= m;
  return (int64_t)(a < 0 ? a + m : a);
}

Vec ref_mul(const Vec& a, const Vec& b, const Vec& c, int64_t m) {
  size_t f = c.size();
  std::vector<__int128> r(2 * f, 0);
  for (size_t i = 0; i < f; ++i)
    for (size_t j = 0; j < f; ++j) r[i + j] += (__int128)a[i] * b[j] % m;
  for (size_t k = 2 * f - 1; k >= f; --k) {
    __int128 t = r[k] % m;
    r[k] = 0;
    for (size_t i = 0; i < f; ++i) r[k - f + i] -= t * c[i] % m;
    if (k == f) break;
  }
  Vec out(f);
  for (size_t i = 0; i < f; ++i) out[i] = md(r[i], m);
  return out;
}

Vec coords(const FieldElem& x, int K) {
  auto c = x.coords_mod(K);
  return Vec(c.begin(), c.end());
}

}  // namespace

TEST_CASE("default minimal polynomials") {
  CHECK(default_minpoly(2, 2) == Vec{1, 1});
  CHECK(default_minpoly(3, 2) == Vec{1, 0});
  CHECK(irreducible_mod_p({1, 1, 0}, 2));  // x^3 + x + 1
}

TEST_CASE("irreducibility against brute-force root search for small degrees") {
  // degree 2 and 3: irreducible iff no root mod p
  for (int p : {2, 3, 5}) {
    for (int f : {2, 3}) {
      int64_t total = 1;
      for (int i = 0; i < f; ++i) total *= p;
      for (int64_t idx = 0; idx < total; ++idx) {
        Vec c(f);
        int64_t t = idx;
        for (int i = 0; i < f; ++i) c[i] = t % p, t /= p;
        bool root = false;
        for (int x = 0; x < p; ++x) {
          int64_t v = 1;
          for (int i = 0; i < f; ++i) v = v * x % p;
          int64_t xi = 1;
          for (int i = 0; i < f; ++i) {
            v = (v + c[i] * xi) % p;
            xi = xi * x % p;
          }
          if (v == 0) root = true;
        }
        CHECK(irreducible_mod_p(c, p) == !root);
      }
    }
  }
}

TEST_CASE("(1+w)*w = -1 in the p=2, f=2 field") {
  auto F = Field::make({2, 2, {}, {}, 16});
  FieldElem w = FieldElem::gen(F.get(), 16);
  FieldElem r = (F->one(16) + w) * w;
  CHECK((r + F->one()).is_zero());
  CHECK(r.prec() == 16);
  Vec ref = ref_mul({1, 1}, {0, 1}, {1, 1}, 1 << 16);
  CHECK(coords(r, 16) == ref);
}

TEST_CASE("multiplication agrees with the reference on random elements") {
  for (auto [p, f] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {2, 3}, {5, 1}}) {
    auto F = Field::make({p, f, {}, {}, 12});
    std::mt19937_64 rng(11 + p * 7 + f);
    int K = 12;
    int64_t m = 1;
    for (int i = 0; i < K; ++i) m *= p;
    Vec c = F->minpoly();
    for (int t = 0; t < 50; ++t) {
      FieldElem x = F->random(rng, 0, K), y = F->random(rng, 0, K);
      Vec ref = ref_mul(coords(x, K), coords(y, K), c, m);
      CHECK(coords(x * y, K) == ref);
    }
  }
}

TEST_CASE("ring axioms on random samples") {
  auto F = Field::make({3, 2, {}, {}, 14});
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    FieldElem a = F->random(rng, 0, 14), b = F->random(rng, 1, 14), c = F->random(rng, 0, 14);
    CHECK(((a + b) * c - (a * c + b * c)).is_zero());
    CHECK(((a * b) * c - a * (b * c)).is_zero());
    CHECK((a * b - b * a).is_zero());
    CHECK((a + b - b - a).is_zero());
  }
}

TEST_CASE("inverse, valuation and precision bookkeeping") {
  auto F = Field::make({2, 2, {}, {}, 16});
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    FieldElem x = F->random_unit(rng, 16);
    CHECK((x * x.inv() - F->one()).is_zero());
    FieldElem y = F->random(rng, 3, 16);
    if (!y.is_zero()) {
      CHECK((x * y).val() == y.val());
      CHECK((x * y).prec() <= 16);
    }
  }
  auto G = Field::make({3, 2, {}, {}, 10});
  CHECK(G->integer(9).val() == 2);
  CHECK(G->q_elem().val() == 2);
  CHECK_THROWS_AS(G->zero(10).inv(), Error);
  // Precision never increases: pi^-1 * (x mod pi^10) is known mod pi^9.
  CHECK(G->one(10).div_pi().prec() == 9);
}

TEST_CASE("p-adic log against its Taylor polynomial") {
  auto F = Field::make({3, 2, {}, {}, 12});
  FieldElem L = F->plog(F->integer(4)).with_prec(4);
  // 3 - 9/2 + 27/3 mod 81, with 1/2 = 41 mod 81
  int64_t ref = md(3 - 9 * 41 + 9, 81);
  CHECK((L - F->integer(ref)).is_zero());
}

TEST_CASE("log and exp are inverse on 1 + p^n0 O_F") {
  for (auto [p, f] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}}) {
    auto F = Field::make({p, f, {}, {}, 16});
    std::mt19937_64 rng(17);
    int n0 = F->n0();
    for (int t = 0; t < 100; ++t) {
      FieldElem x = F->one() + F->random(rng, n0, 16);
      FieldElem l = F->plog(x);
      CHECK(l.val() >= n0);
      FieldElem back = F->pexp(l);
      CHECK((back - x).val() >= 16 - 2);
      FieldElem y = F->one() + F->random(rng, n0, 16);
      CHECK((F->plog(x * y) - F->plog(x) - F->plog(y)).val() >= 16 - 2);
    }
    CHECK_THROWS_AS(F->plog(F->integer(p == 2 ? 3 : 2)), Error);
  }
  auto F = Field::make({2, 2, {}, {}, 16});
  FieldElem a = F->one() + F->pi().pow(2);
  CHECK((F->pexp(F->plog(a)) - a).is_zero());
}

TEST_CASE("Frobenius is a ring automorphism of order f fixing Z_p") {
  auto F = Field::make({3, 3, {}, {}, 10});
  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    FieldElem x = F->random(rng, 0, 10), y = F->random(rng, 0, 10);
    CHECK(((x * y).frobenius() - x.frobenius() * y.frobenius()).is_zero());
    CHECK((x.frobenius().frobenius().frobenius() - x).is_zero());
    FieldElem xp = x.pow(3);
    CHECK((x.frobenius() - xp).val() >= 1);
  }
  CHECK((F->integer(7).frobenius() - F->integer(7)).is_zero());
}

TEST_CASE("textual format round-trips") {
  auto F = Field::make({2, 2, {}, {}, 16});
  std::mt19937_64 rng(1);
  for (int t = 0; t < 30; ++t) {
    FieldElem x = F->random(rng, t % 4 - 1, 16);
    FieldElem y = F->parse(x.str());
    CHECK(y.prec() == x.prec());
    CHECK((x - y).is_zero());
  }
  CHECK(F->parse("(1 + w)*w").compact() == "-1");
  CHECK(F->parse("pi^2 * (1 + w) mod pi^5").prec() == 5);
  CHECK_THROWS_AS(F->parse("1 + T"), Error);
}

TEST_CASE("trace down to Q_p") {
  auto F = Field::make({2, 2, {}, {}, 16});
  // Tr(w) = -1 for w^2 + w + 1, Tr(1) = 2
  CHECK((F->trace_qp(FieldElem::gen(F.get())) + F->one()).is_zero());
  CHECK((F->trace_qp(F->one()) - F->integer(2)).is_zero());
}
