#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "ops.hpp"

using namespace ltpg;
using namespace ltpg::test;

TEST_CASE("psi on monomials") {
  for (auto [p, f] : {std::pair{2, 2}, {3, 2}, {2, 1}, {3, 1}}) {
    Env e(p, f);
    const int q = (int)e.F->q();
    CAPTURE(q);
    CHECK(e.O.psi(Series::constant(e.F->one())).coeff(0).equals(e.F->one()));
    for (int i = 1; i < q - 1; ++i) CHECK(e.O.psi(Series::monomial(e.F->one(), i)).vmin() >= kInf);
    FieldElem want = -(e.F->pi().mul_int(q - 1) / e.F->q_elem());
    Series s = e.O.psi(Series::monomial(e.F->one(), q - 1));
    CHECK(s.hi() <= 1);
    CHECK(s.coeff(0).equals(want));
  }
  Env e(2, 1);
  CHECK(e.O.psi(Series::var(e.F)).coeff(0).equals(-(e.F->pi().div_int(2))));
}

TEST_CASE("psi(f)(u_1) = q^-1 Tr f(u_2)") {
  for (auto [p, f] : {std::pair{2, 2}, {3, 2}, {2, 1}}) {
    Env e(p, f);
    std::mt19937_64 rng(11);
    const FieldElem qi = e.F->q_elem().inv();
    for (int t = 0; t < 4; ++t) {
      Series g = random_poly(e.F, rng, t % 2 ? -3 : 0, 20, 30);
      TowerElem lhs = e.T.eval(e.O.psi(g), 1);
      TowerElem rhs = e.T.trace(e.T.eval(g, 2), 1) * qi;
      CHECK(tv(lhs, rhs) >= 20);
    }
  }
}

TEST_CASE("operator identities") {
  for (auto [p, f] : {std::pair{2, 2}, {3, 2}}) {
    Env e(p, f);
    const int M = e.O.M();
    std::mt19937_64 rng(5);
    const FieldElem pi = e.F->pi();
    CAPTURE(p);
    for (int t = 0; t < 5; ++t) {
      Series x = random_poly(e.F, rng, 0, M);
      Series y = random_poly(e.F, rng, 0, M);
      FieldElem a = random_unit(e.F, rng);
      CHECK(rv(e.O.psi(e.O.phi(x)), x, 0, M) >= 14);
      CHECK(rv(e.O.psi(e.O.phi(x) * y), x * e.O.psi(y), 0, M) >= 12);
      CHECK(rv(e.O.partial(e.O.phi(x)), e.O.phi(e.O.partial(x)).scale(pi), 0, M - 2) >= 12);
      CHECK(rv(e.O.partial(e.O.gamma(a, x)), e.O.gamma(a, e.O.partial(x)).scale(a), 0, M - 2) >= 12);
      CHECK(rv(e.O.gamma(a, e.O.phi(x)), e.O.phi(e.O.gamma(a, x)), 0, M) >= 12);
    }
    // psi reads its input to about q j + (q - 1) digits for coefficient j
    const int q = (int)e.F->q(), W = 6;
    Ops big(e.G, q * W + (q - 1) * 14);
    for (int t = 0; t < 3; ++t) {
      Series x = random_poly(e.F, rng, 0, big.M());
      FieldElem a = random_unit(e.F, rng);
      CHECK(rv(big.partial(big.psi(x)), big.psi(big.partial(x)).scale(pi.inv()), 0, W) >= 12);
      CHECK(rv(big.gamma(a, big.psi(x)), big.psi(big.gamma(a, x)), 0, W) >= 12);
    }
    Series t = e.O.t();
    FieldElem a = random_unit(e.F, rng);
    CHECK(rv(e.O.phi(t), t.scale(pi), 0, M) >= 12);
    CHECK(rv(e.O.gamma(a, t), t.scale(a), 0, M) >= 12);
    Series tk = Series::constant(e.F->one());
    for (int k = 1; k <= 3; ++k) {
      tk = (tk * t).truncate_hi(M);
      CHECK(rv(e.O.nabla(tk), tk.mul_int(k), 0, M - 2) >= 10);
      CHECK(e.O.nabla_i(tk, k).val_range(0, M - 2) >= 10);
    }
  }
}

TEST_CASE("phi and psi on Laurent series") {
  Env e(2, 2, 24);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 4; ++t) {
    Series x = random_poly(e.F, rng, -4, 10);
    Series px = e.O.phi(x);
    CHECK(px.lo() >= -e.O.depth());
    CHECK(rv(e.O.psi(px), x, -4, 10) >= 12);
    Series y = random_poly(e.F, rng, 0, 10);
    CHECK(rv(e.O.psi(e.O.phi(y) * x), y * e.O.psi(x), -1, 8) >= 10);
  }
}

TEST_CASE("residues") {
  Env e(2, 2);
  const FieldElem one = e.F->one();
  CHECK(e.O.res(Series::monomial(one, -1)).equals(one));
  CHECK(e.O.res(e.O.x0()).equals(one));
  std::mt19937_64 rng(9);
  CHECK(e.O.res(random_poly(e.F, rng, 0, 8)).is_zero());
  const FieldElem c = e.F->pi() / e.F->q_elem();
  for (int t = 0; t < 5; ++t) {
    Series x = random_poly(e.F, rng, -5, 20);
    CHECK(e.O.res(e.O.partial(x)).is_zero());
    CHECK(e.O.res(e.O.psi(x)).equals(e.O.res(x) * c));
    Series y = x - e.O.x0().scale(e.O.res(x));
    Series g = e.O.antiderivative(y);
    CHECK(rv(e.O.partial(g), y, -5, e.O.M() - 2) >= 12);
  }
  CHECK_THROWS_AS(e.O.antiderivative(Series::monomial(one, -1)), Error);
}

TEST_CASE("divided Gamma operators") {
  Env e(3, 2, 24);
  std::mt19937_64 rng(2);
  GammaBasis b = gamma_basis(e.F, 1);
  const FieldElem chi = b.chi[0];
  Series x = random_poly(e.F, rng, 0, 12, 30);
  for (int j : {0, 1}) {
    Series D = e.O.divided_gamma(chi, x, j);
    // (1 - chi^j gamma) D = nabla + j
    Series lhs = D - e.O.gamma(chi, D).scale(chi.pow(j));
    Series rhs = e.O.nabla(x) + x.mul_int(j);
    CHECK(rv(lhs, rhs, 0, 12) >= 10);
  }
  Series t = e.O.t();
  Series D = e.O.divided_gamma(chi, t);
  CHECK(rv(D, t.scale(e.F->one() / (e.F->one() - chi)), 0, 16) >= 10);
}

TEST_CASE("Theta_b") {
  for (auto [p, f] : {std::pair{2, 2}, {3, 2}}) {
    Env e(p, f, 20);
    CAPTURE(p);
    std::mt19937_64 rng(4);
    GammaBasis b = gamma_basis(e.F, 1);
    const FieldElem q2 = e.F->q_elem().pow(2).inv();
    for (int t = 0; t < 3; ++t) {
      Series g = random_poly(e.F, rng, 0, 14, 30);
      TowerElem x = e.T.eval(g, 2);
      TowerElem tr = e.T.trace(x, 1) * q2;
      CHECK(tv(e.O.theta_b_tower(e.T, b, x, 1), tr) >= 20);
      // psi = 0 inputs vanish at u_2
      Series h = g - e.O.phi(e.O.psi(g));
      CHECK(e.O.psi(h).vmin() >= 20);
      CHECK(e.O.theta_b_tower(e.T, b, e.T.eval(h, 2), 1).is_zero());
    }
    // series path: evaluating at u_2 costs one digit per d_2 = q(q - 1) T-degrees
    if (e.T.degree(2) <= 12) {
      Ops big(e.G, 14 * e.T.degree(2));
      Series g = random_poly(e.F, rng, 0, 14, 30);
      TowerElem tr = e.T.trace(e.T.eval(g, 2), 1) * q2;
      CHECK(tv(e.T.eval(big.theta_b_finite(b, g, 1), 2), e.T.embed(tr, 2)) >= 10);
    }
    // the finite forms converge to the nabla form T-adically
    Series g = random_poly(e.F, rng, 0, 10, 30);
    Series th = e.O.theta_b(b, g);
    int prev = -kInf;
    for (int k = 1; k <= 2; ++k) {
      int v = rv(e.O.theta_b_finite(b, g, k), th, 0, 6);
      CHECK(v > prev);
      prev = v;
    }
  }
}

TEST_CASE("psi - a solvers") {
  Env e(2, 2);
  std::mt19937_64 rng(8);
  const int M = e.O.M();
  for (int t = 0; t < 5; ++t) {
    FieldElem a = random_unit(e.F, rng);
    Series x = random_poly(e.F, rng, 0, M);
    auto s = e.O.solve_psi_minus_a(x, a);
    CHECK(s.m == 0);
    CHECK(rv(e.O.psi(s.g) - s.g.scale(a), x, 0, M / 2) >= 12);
  }
  // Neumann and dense agree when 1/a lies in q O_F
  for (int t = 0; t < 3; ++t) {
    FieldElem a = random_unit(e.F, rng) / e.F->q_elem().pow(2);
    Series x = random_poly(e.F, rng, -2, M);
    auto n = e.O.solve_psi_minus_a(x, a);
    auto d = e.O.solve_psi_minus_a(x, a, true);
    CHECK(n.neumann);
    CHECK(!d.neumann);
    CHECK(rv(n.g, d.g, -2, M / 2) >= 10);
  }
  for (int m : {1, 2}) {
    FieldElem a = e.F->pi_pow(m) / e.F->q_elem();
    CHECK(e.O.cokernel_index(a) == m);
    Series gen = e.O.cokernel_generator(m);
    CHECK(e.O.cokernel_functional(m, gen).equals(e.F->one()));
    Series x = random_poly(e.F, rng, 0, M);
    CHECK(e.O.cokernel_functional(m, x).is_zero());
    Series y = x + gen.scale(e.F->integer(3));
    auto s = e.O.solve_psi_minus_a(y, a);
    CHECK(s.m == m);
    CHECK(s.obstruction.equals(e.F->integer(3)));
    Series corrected = y - gen.scale(s.obstruction);
    CHECK(rv(e.O.psi(s.g) - s.g.scale(a), corrected, -1, M / 4) >= 10);
  }
}

TEST_CASE("a phi - 1 on plus series") {
  Env e(3, 2);
  std::mt19937_64 rng(6);
  const int M = e.O.M();
  Series x = random_poly(e.F, rng, 0, M);
  for (FieldElem a : {e.F->integer(5), e.F->pi().inv().mul_int(7)}) {
    auto s = e.O.solve_a_phi_minus_one(x, a);
    CHECK(!s.kernel);
    CHECK(rv(e.O.phi(s.g).scale(a) - s.g, x, 0, M) >= 12);
  }
  // a = pi^-2: kernel t^2, image is d^2 f (0) = 0
  FieldElem a = e.F->pi_pow(-2);
  CHECK_THROWS_AS(e.O.solve_a_phi_minus_one(Series::monomial(e.F->one(), 2), a), Error);
  Series y = x - Series::monomial(x.coeff(2), 2);
  auto s = e.O.solve_a_phi_minus_one(y, a);
  CHECK(s.kernel);
  CHECK(s.m == 2);
  CHECK(rv(e.O.phi(s.kernel_basis).scale(a), s.kernel_basis, 0, M) >= 12);
}
