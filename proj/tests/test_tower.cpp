#include <random>

#include "doctest.h"
#include "tower.hpp"

using namespace ltpg;

namespace {

struct Env {
  FieldPtr Fp;
  const Field* F;
  LTGroup G;
  Tower T;
  Env(int p, int f, int N = 16) : Fp(Field::make({p, f, {}, {}, N})), F(Fp.get()), G(Fp), T(G) {}
};

TowerElem random_elem(const Env& e, std::mt19937_64& rng, int n, int prec = 16) {
  std::vector<FieldElem> c;
  for (int i = 0; i < e.T.degree(n); ++i) c.push_back(e.F->random(rng, 0, prec));
  return e.T.from_coords(n, c);
}

Series random_poly(const Field* F, std::mt19937_64& rng, int deg, int prec = 16) {
  std::vector<FieldElem> c;
  for (int i = 0; i <= deg; ++i) c.push_back(F->random(rng, 0, prec));
  return Series::from_coeffs(F, 0, c);
}

// Residual valuation of x - y in whole pi-units.
int resval(const TowerElem& x, const TowerElem& y) {
  TowerElem d = x - y;
  int v = kInf;
  for (auto& c : d.coords()) v = std::min(v, c.val());
  return v;
}

// Teichmueller representative of a mod pi.
FieldElem teich(const FieldElem& a, int iters = 40) {
  FieldElem x = a;
  for (int i = 0; i < iters; ++i) x = x.pow(a.field()->q());
  return x;
}

}  // namespace

TEST_CASE("linear algebra over F") {
  auto Fp = Field::make({2, 2, {}, {}, 16});
  const Field* F = Fp.get();
  std::mt19937_64 rng(1);
  for (int t = 0; t < 10; ++t) {
    const int n = 6;
    Mat A(F, n, n);
    std::vector<FieldElem> b;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) A.at(i, j) = F->random(rng, 0, 30);
      b.push_back(F->random(rng, 0, 30));
    }
    SolveResult s = solve(A, b);
    REQUIRE(s.rank == n);
    std::vector<FieldElem> Ax = A.apply(s.x);
    for (int i = 0; i < n; ++i) CHECK((Ax[i] - b[i]).val() >= 30 - 2 * s.pivot_loss);
    // det(AB) = det A det B
    Mat B(F, n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) B.at(i, j) = F->random(rng, 0, 30);
    Mat AB(F, n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        FieldElem x = F->zero();
        for (int k = 0; k < n; ++k) x += A.at(i, k) * B.at(k, j);
        AB.at(i, j) = x;
      }
    CHECK(det(AB).equals(det(A) * det(B)));
  }
  // a rank 2 system and its kernel
  Mat A(F, 3, 3);
  int v[3][3] = {{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) A.at(i, j) = F->integer(v[i][j]);
  SolveResult s = solve(A, {F->integer(1), F->integer(2), F->integer(0)}, true);
  CHECK(s.rank == 2);
  CHECK(s.consistent);
  REQUIRE(s.kernel.size() == 1);
  for (auto& y : A.apply(s.kernel[0])) CHECK(y.is_zero());
  CHECK_FALSE(solve(A, {F->integer(1), F->integer(1), F->integer(0)}).consistent);
}

TEST_CASE("torsion levels") {
  for (auto [p, f] : {std::pair{2, 2}, std::pair{3, 2}, std::pair{2, 1}}) {
    Env e(p, f);
    const int q = (int)e.F->q();
    // u_1^(q-1) = -pi
    CHECK(e.T.u(1).pow(q - 1).equals(e.T.constant(-e.F->pi(), 1)));
    if (q <= 4) {
      // Q_1 vanishes at the image of u_1 in F_2, and [pi](u_2) is that image
      TowerElem u1 = e.T.embed(e.T.u(1), 2);
      CHECK(e.T.eval_at(e.G.torsion_poly(1), u1).is_zero());
      CHECK(e.T.eval(e.G.pi_series(), 2).equals(u1));
      // N(u_n) = (-1)^d Q_n(0): u_n has valuation 1/d
      for (int n = 1; n <= 2; ++n) {
        int d = e.T.degree(n);
        FieldElem N = e.T.norm(e.T.u(n));
        CHECK(N.equals(d % 2 ? -e.F->pi() : e.F->pi()));
        CHECK(e.T.u(n).val_d() == 1);
      }
    }
  }
}

TEST_CASE("tower arithmetic") {
  Env e(2, 2);
  std::mt19937_64 rng(7);
  for (int t = 0; t < 10; ++t) {
    TowerElem x = random_elem(e, rng, 2), y = random_elem(e, rng, 2);
    CHECK((e.T.one(2) * x).equals(x));
    CHECK((x * y).equals(y * x));
    if (x.val_d() == 0) CHECK((x * x.inv()).equals(e.T.one(2)));
    // embed_up is a ring homomorphism
    TowerElem a = random_elem(e, rng, 1), b = random_elem(e, rng, 1);
    CHECK(e.T.embed(a * b, 2).equals(e.T.embed(a, 2) * e.T.embed(b, 2)));
    CHECK(e.T.embed(a + b, 2).equals(e.T.embed(a, 2) + e.T.embed(b, 2)));
    CHECK(e.T.descend(e.T.embed(a, 2), 1).equals(a));
  }
  TowerElem z = e.T.u(2).div_u();
  CHECK(z.equals(e.T.one(2)));
  CHECK((e.T.u(2).inv() * e.T.u(2)).equals(e.T.one(2)));
  CHECK_THROWS_AS(e.T.zero(1).inv(), Error);
  CHECK_THROWS_AS(e.T.u(1) + e.T.u(2), Error);
  try {
    (void)e.T.embed(e.T.u(2), 1);
    FAIL("no error");
  } catch (const Error& err) {
    CHECK(err.code() == Err::LevelMismatch);
  }
  // literals
  TowerElem w = e.T.parse("1 + 2*u + w*u^2 @level 1", 16);
  CHECK(w.equals(e.T.one(1) + e.T.u(1) * e.F->integer(2) + e.T.u(1).pow(2) * FieldElem::gen(e.F)));
  CHECK(e.T.parse(w.str(), 16).equals(w));
}

TEST_CASE("Galois action") {
  Env e(2, 2);
  std::mt19937_64 rng(11);
  TowerElem x = random_elem(e, rng, 2);
  CHECK(e.T.galois(e.F->one(), x).equals(x));
  for (int t = 0; t < 5; ++t) {
    FieldElem a = e.F->random_unit(rng, 16), b = e.F->random_unit(rng, 16);
    TowerElem y = random_elem(e, rng, 2), z = random_elem(e, rng, 2);
    CHECK(resval(e.T.galois(a, e.T.galois(b, y)), e.T.galois(a * b, y)) >= 16 - 4);
    CHECK(resval(e.T.galois(a, y * z), e.T.galois(a, y) * e.T.galois(a, z)) >= 16 - 4);
    // [a](u_1) = teich(a) u_1 since [zeta](T) = zeta T
    CHECK(e.T.galois(a, e.T.u(1)).equals(e.T.u(1) * teich(a)));
    // fixes F
    CHECK(e.T.galois(a, e.T.constant(a, 2)).equals(e.T.constant(a, 2)));
    // only a mod pi^n matters
    CHECK(e.T.galois(a + e.F->pi_pow(2) * b, y).equals(e.T.galois(a, y)));
  }
  try {
    (void)e.T.galois(e.F->pi(), x);
    FAIL("no error");
  } catch (const Error& err) {
    CHECK(err.code() == Err::NonUnitScalar);
  }
}

TEST_CASE("field traces") {
  for (auto [p, f] : {std::pair{2, 2}, std::pair{3, 2}, std::pair{2, 1}}) {
    Env e(p, f);
    const int q = (int)e.F->q();
    if (q >= 3) CHECK(e.T.trace(e.T.u(1), 0).coord(0).is_zero());
    std::mt19937_64 rng(13);
    int top = q <= 4 ? 2 : 1;
    for (int t = 0; t < 5; ++t) {
      for (int m = 1; m <= top; ++m) {
        TowerElem x = random_elem(e, rng, m);
        // trace to F equals the trace of the multiplication matrix
        FieldElem tr = e.F->zero();
        Mat M = e.T.mult_matrix(x);
        for (int i = 0; i < M.rows(); ++i) tr += M.at(i, i);
        CHECK(e.T.trace(x, 0).coord(0).equals(tr));
        // power sums agree with the sum over the Galois coset
        for (int n = 0; n < m; ++n) {
          TowerElem g = e.T.trace_galois(x, n);
          CHECK(resval(g, e.T.embed(e.T.trace(x, n), m)) >= 16 - 4);
        }
      }
      if (top == 2) {
        // transitivity through the coset sums
        TowerElem x = random_elem(e, rng, 2);
        TowerElem t21 = e.T.descend(e.T.trace_galois(x, 1), 1);
        CHECK(resval(e.T.trace_galois(x, 0), e.T.embed(e.T.trace_galois(t21, 0), 2)) >= 16 - 4);
      }
    }
  }
}

TEST_CASE("trace image and trace_lift") {
  Env e(2, 2);
  // Tr(O_{F_2}) = pi O_{F_1}: the traces of the integral basis u_2^j span pi O_{F_1}
  const int d1 = e.T.degree(1), d2 = e.T.degree(2);
  Mat A(e.F, d1, d2);
  for (int j = 0; j < d2; ++j) {
    TowerElem t = e.T.trace(e.T.u(2).pow(j), 1);
    CHECK(t.val_d() >= d1);
    for (int i = 0; i < d1; ++i) A.at(i, j) = t.coord(i).div_pi();
  }
  SolveResult s = solve(A, std::vector<FieldElem>(d1, e.F->zero()));
  CHECK(s.rank == d1);
  CHECK(s.pivot_loss == 0);

  std::mt19937_64 rng(17);
  FieldElem qpi = e.F->q_elem() / e.F->pi();
  for (int t = 0; t < 10; ++t) {
    TowerElem y = random_elem(e, rng, 1);
    TowerElem z = e.T.trace_lift(y);
    CHECK(z.level() == 2);
    CHECK(resval(e.T.trace(z, 1), y * qpi) >= 16 - 4);
  }
  CHECK(e.T.trace_lift(e.T.zero(1)).is_zero());
  CHECK_THROWS_AS(e.T.trace_lift(e.T.one(0)), Error);
}

TEST_CASE("evaluation at torsion points") {
  Env e(2, 2);
  std::mt19937_64 rng(19);
  for (int t = 0; t < 5; ++t) {
    Series f = random_poly(e.F, rng, 20), g = random_poly(e.F, rng, 20);
    for (int n = 1; n <= 2; ++n) CHECK(resval(e.T.eval(f * g, n), e.T.eval(f, n) * e.T.eval(g, n)) >= 16);
    // phi-compatibility: f([pi] T)(u_2) = f(u_1)
    Series fp = compose(f, e.G.pi_series(), 200);
    CHECK(resval(e.T.eval(fp, 2), e.T.embed(e.T.eval(f, 1), 2)) >= 16);
    // Galois equivariance: g_a(f(u_n)) = f([a] T)(u_n)
    FieldElem a = e.F->random_unit(rng, 16);
    const int L = 256;
    Series fa = compose(f, e.G.scalar(a.lifted(), L).with_tail_hi(L, 0), L);
    for (int n = 1; n <= 2; ++n) CHECK(resval(e.T.galois(a, e.T.eval(f, n)), e.T.eval(fa, n)) >= 16 - 4);
    // Laurent evaluation: (T^-3 f)(u_n) u_n^3 = f(u_n)
    for (int n = 1; n <= 2; ++n)
      CHECK(resval(e.T.eval(f.shift(-3), n) * e.T.u(n).pow(3), e.T.eval(f, n)) >= 16 - 4);
  }
  // a series with an unknown tail loses exactly the digits of the tail
  Series l = Series::parse(e.F, "1 + T + O(T^24)", 16).with_tail_hi(24, 0);
  TowerElem v = e.T.eval(l, 2);
  CHECK(v.min_prec() == 24 / 12);
}

TEST_CASE("Lubin-Tate trace") {
  Env e(2, 2);
  std::mt19937_64 rng(23);
  const int M = 40;
  Series lam = e.G.log(M);
  for (int t = 0; t < 3; ++t) {
    for (int m = 1; m <= 2; ++m) {
      // deep enough that log_LT converges fast at the truncation
      TowerElem x = random_elem(e, rng, m) * e.F->pi_pow(2);
      for (int n = 0; n < m; ++n) {
        TowerElem s = e.T.trace_lt(x, n);
        TowerElem lhs = e.T.eval_at(lam, s);
        TowerElem rhs = e.T.trace(e.T.eval_at(lam, x), n);
        CHECK(resval(lhs, rhs) >= 16 - 4);
      }
    }
  }
  try {
    (void)e.T.trace_lt(e.T.one(1), 0);
    FAIL("no error");
  } catch (const Error& err) {
    CHECK(err.code() == Err::NotInMaximalIdeal);
  }
}
