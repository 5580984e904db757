#include <random>

#include "bigexp.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace ltpg;
using namespace ltpg::test;

namespace {

Mat diag(const Field* F, std::vector<FieldElem> d) {
  Mat A(F, (int)d.size(), (int)d.size());
  for (int i = 0; i < (int)d.size(); ++i) A.at(i, i) = d[i];
  return A;
}

// g - phi psi g for a random polynomial g: an exact polynomial with psi = 0
ModElem psi_zero(const FPhiMod& D, std::mt19937_64& rng, int deg = 20) {
  ModElem g;
  for (int i = 0; i < D.dim(); ++i) g.push_back(random_poly(D.field(), rng, 0, deg, 30));
  return g - D.module().phi(D.module().psi(g));
}

ModElem times_t(const Ops& O, const ModElem& x) {
  ModElem out;
  for (auto& s : x) out.push_back((s * O.t()).truncate_hi(O.M()));
  return out;
}

int tvv(const std::vector<TowerElem>& a, const std::vector<TowerElem>& b) {
  int v = kInf;
  for (size_t i = 0; i < a.size(); ++i) v = std::min(v, tv(a[i], b[i]));
  return v;
}

std::vector<TowerElem> trace_all(const Tower& T, const std::vector<TowerElem>& x, int n) {
  std::vector<TowerElem> out;
  for (auto& e : x) out.push_back(T.trace(e, n));
  return out;
}

}  // namespace

TEST_CASE("characteristic polynomial and slopes") {
  Env e(2, 2, 64);
  const Field* F = e.F;
  FPhiMod D(e.O, {2, diag(F, {F->integer(3), F->integer(5) / F->pi()}), 1});
  auto sl = D.slopes();
  REQUIRE(sl.size() == 2);
  std::sort(sl.begin(), sl.end());
  CHECK(sl[0] == std::pair{-1, 1});
  CHECK(sl[1] == std::pair{0, 1});
  CHECK(D.slopes_bounded(1));
  CHECK(!D.slopes_bounded(0));
  Mat R(F, 2, 2);
  R.at(0, 1) = F->one();
  R.at(1, 0) = F->pi();
  FPhiMod Dr(e.O, {2, R, 0});
  for (auto s : Dr.slopes()) CHECK(s == std::pair{1, 2});
  Vec c = charpoly(R);
  CHECK(c[0].equals(-F->pi()));
  CHECK(c[1].is_zero());
  CHECK_THROWS_AS(FPhiMod(e.O, {2, diag(F, {F->one(), F->zero()}), 0}), Error);
  FPhiMod steep(e.O, {1, diag(F, {F->pi_pow(-2)}), 1});
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(solve_one_minus_phi(steep, psi_zero(steep, rng), 1), Error);
}

TEST_CASE("Delta") {
  Env e(2, 2, 64);
  const Field* F = e.F;
  std::mt19937_64 rng(2);
  const int h = 2;
  FPhiMod D(e.O, {1, diag(F, {F->one()}), h});
  // divisible by T^(h+1)
  ModElem f{random_poly(F, rng, 0, 10).shift(h + 1)};
  for (auto& c : delta_map(D, f, h)) {
    CHECK(c.zero);
    CHECK(c.value[0].is_zero());
  }
  // constants: only degree 0 sees them, and 1 - phi = 0 there
  const FieldElem c0 = F->integer(7);
  auto d = delta_map(D, {Series::constant(c0)}, h);
  CHECK(d[0].value[0].equals(c0));
  CHECK(d[0].functionals.size() == 1);
  CHECK(!d[0].zero);
  CHECK(d[1].functionals.empty());
  CHECK(d[2].zero);

  // phi = A L A^-1 against its eigenbasis
  Mat L = diag(F, {F->one(), F->integer(3) / F->pi()});
  Mat A = identity(F, 2);
  A.at(0, 1) = F->integer(5);
  Mat Ai = inverse(A);
  FPhiMod Db(e.O, {2, A * L * Ai, h}), De(e.O, {2, L, h});
  for (int t = 0; t < 4; ++t) {
    ModElem x{random_poly(F, rng, 0, 12), random_poly(F, rng, 0, 12)};
    // move x(0) into the image (1 - phi)D = A L-image, spanned by (5, 1)
    if (t % 2) x[0] = x[0] - Series::constant(x[0].coeff(0)) + Series::constant(x[1].coeff(0).mul_int(5));
    ModElem xe{x[0].scale(Ai.at(0, 0)) + x[1].scale(Ai.at(0, 1)), x[0].scale(Ai.at(1, 0)) + x[1].scale(Ai.at(1, 1))};
    auto db = delta_map(Db, x, h), de = delta_map(De, xe, h);
    for (int k = 0; k <= h; ++k) {
      CAPTURE(k);
      Vec ve = Ai.apply(db[k].value);
      CHECK(ve[0].equals(de[k].value[0]));
      CHECK(ve[1].equals(de[k].value[1]));
      CHECK(db[k].functionals.size() == de[k].functionals.size());
      CHECK(db[k].zero == de[k].zero);
    }
    CHECK(db[0].zero == (t % 2 == 1));
  }
}

TEST_CASE("1 - phi on the trivial module") {
  Env e(2, 2, 64);
  const Field* F = e.F;
  std::mt19937_64 rng(3);
  FPhiMod D(e.O, {1, diag(F, {F->one()}), 0});
  for (int t = 0; t < 3; ++t) {
    Series f = random_poly(F, rng, 1, 30);
    auto s = solve_one_minus_phi(D, {f}, 0);
    CHECK(s.ambiguous);
    REQUIRE(s.kernel.size() == 1);
    CHECK(s.kernel[0].first == 0);
    CHECK(s.residual >= F->N() - 4);
    // sum_i phi^i(f) by iterating Ops::phi on the bare series
    Series y = f, term = f;
    for (int i = 0; i < 80; ++i) {
      term = e.O.phi(term).truncate_hi(e.O.M());
      y = y + term;
    }
    CHECK(rv(s.y[0], y, 0, e.O.M()) >= F->N() - 4);
  }
  CHECK_THROWS_AS(solve_one_minus_phi(D, {Series::constant(F->one()) + random_poly(F, rng, 1, 8)}, 0), Error);
  try {
    solve_one_minus_phi(D, {Series::constant(F->one())}, 0);
  } catch (const Error& err) {
    CHECK(err.code() == Err::ObstructionNonzero);
  }
}

TEST_CASE("kernel of 1 - phi") {
  Env e(2, 2, 64);
  const Field* F = e.F;
  std::mt19937_64 rng(4);
  FPhiMod D(e.O, {2, diag(F, {F->pi().inv(), F->integer(3)}), 2});
  ModElem f = psi_zero(D, rng);
  f[0] = f[0] - e.O.t().scale(f[0].coeff(1));  // degree 1 obstruction of the pi^-1 line
  auto s1 = solve_one_minus_phi(D, f, 1);
  CHECK(s1.omega_ambiguous);
  auto s2 = solve_one_minus_phi(D, f, 2);
  CHECK(s2.ambiguous);
  CHECK(!s2.omega_ambiguous);
  REQUIRE(s2.kernel.size() == 1);
  CHECK(s2.kernel[0].first == 1);
  CHECK(s2.residual >= F->N() - 4);
  // t e_0 is killed by 1 - phi and by nabla_1 nabla_0
  ModElem y = s2.y;
  y[0] = y[0] + e.O.t();
  const int M = e.O.M();
  ModElem lhs = y - truncate_hi(D.module().phi(y), M);
  CHECK(resval(lhs, truncate_hi(f, M), 0, M) >= F->N() - 4);
  ColcolSolution s3 = s2;
  s3.y = y;
  CHECK(resval(omega(D, s3), omega(D, s2), 0, M / 2) >= F->N() - 4);
  // the class of f in degree 1 is now non-zero
  ModElem g = f;
  g[0] = g[0] + e.O.t();
  CHECK(!delta_map(D, g, 2)[1].zero);
  CHECK_THROWS_AS(solve_one_minus_phi(D, g, 2), Error);
}

TEST_CASE("round trip through 1 - phi") {
  Env e(2, 2, 64);
  const Field* F = e.F;
  std::mt19937_64 rng(5);
  FPhiMod D(e.O, {2, diag(F, {F->integer(3), F->integer(7)}), 1});
  std::vector<ModElem> basis = psi_fixed_solve(D.module(), 3);
  REQUIRE(basis.size() >= 4);
  const int M = e.O.M();
  for (int t = 0; t < 3; ++t) {
    ModElem y0 = D.module().zero();
    for (auto& b : basis) y0 = y0 + scale(b, F->random(rng, 0, 30));
    ModElem f = y0 - truncate_hi(D.module().phi(y0), M);
    auto s = solve_one_minus_phi(D, f, 1);
    CHECK(!s.ambiguous);
    CHECK(resval(s.y, y0, 0, M) >= F->N() - 4);
    // h = 1: Omega is nabla y
    CHECK(resval(omega(D, s), D.module().nabla(y0), 0, M / 2) >= F->N() - 4);
  }
}

TEST_CASE("nabla_h Omega_h = Omega_(h+1)") {
  Env e(2, 2, 64);
  const Field* F = e.F;
  std::mt19937_64 rng(6);
  std::vector<FPhiModData> fixtures = {
      {1, diag(F, {F->integer(3)}), 1},
      {2, diag(F, {F->integer(3), F->integer(5) / F->pi()}), 1},
  };
  for (auto& fx : fixtures)
    for (int h : {1, 2}) {
      CAPTURE(fx.dim);
      CAPTURE(h);
      FPhiMod D(e.O, {fx.dim, fx.phi, h});
      ModElem f = psi_zero(D, rng);
      auto s = solve_one_minus_phi(D, f, h);
      auto s1 = solve_one_minus_phi(D, f, h + 1);
      CHECK(!s.omega_ambiguous);
      ModElem lhs = D.module().nabla_i(omega(D, s), h);
      CHECK(resval(lhs, omega(D, s1), 0, 32) >= F->N() - 4);
      CHECK(resval(lhs, omega_vh(D, f, h + 1), 0, 32) >= F->N() - 4);
    }
}

TEST_CASE("twist identity") {
  Env e(2, 2, 64);
  const Field* F = e.F;
  std::mt19937_64 rng(7);
  for (int h : {1, 2}) {
    FPhiMod D(e.O, {2, diag(F, {F->integer(3), F->integer(5) / F->pi()}), h});
    FPhiMod D1(e.O, D.twisted(1));
    CHECK(D1.h() == h + 1);
    ModElem x = psi_zero(D, rng);
    // Omega_h(x) (x) e_1 has coordinates t Omega_h(x) in the basis t^-1 e_1 (x) d_i
    ModElem lhs = times_t(e.O, omega_vh(D, x, h));
    ModElem rhs = omega_vh(D1, antiderivative(e.O, x, 1), h + 1);
    CHECK(resval(lhs, rhs, 0, 32) >= F->N() - 4);
  }
}

TEST_CASE("jets of phi^-n") {
  Env e(2, 2, 64);
  const Field* F = e.F;
  std::mt19937_64 rng(8);
  FPhiMod D1(e.O, {1, diag(F, {F->one()}), 0});
  // y = T: u_n + a(u_n) t / pi^n, with a read off the group law
  {
    Jet j = phi_inv_jet(D1, e.T, {Series::var(F)}, 1, 1);
    CHECK(tv(j.at(0)[0], e.T.u(1)) >= 20);
    BiPoly law = e.G.law(48);
    TowerElem a = e.T.zero(1), up = e.T.one(1);
    for (int i = 0; i < 47; ++i) {
      a += up * law.at(i, 1);
      up = up.mul_u();
    }
    CHECK(tv(j.at(1)[0], a * F->pi().inv()) >= 12);
  }
  FPhiMod D(e.O, {2, diag(F, {F->integer(3), F->integer(5) / F->pi()}), 1});
  const Mat Pi = D.phi_pow(-1);
  ModElem g{random_poly(F, rng, 0, 10, 30), random_poly(F, rng, 0, 10, 30)};
  // order 0: f(u_n) phi^-n x
  {
    Jet j = phi_inv_jet(D, e.T, g, 1, 0);
    std::vector<TowerElem> want = apply_mat(Pi, {e.T.eval(g[0], 1), e.T.eval(g[1], 1)});
    CHECK(tvv(partial_D(j), want) >= 20);
  }
  // phi-equivariance
  {
    Jet a = phi_inv_jet(D, e.T, g, 0, 3), b = phi_inv_jet(D, e.T, D.module().phi(g), 1, 3);
    for (int k = 0; k <= 3; ++k) {
      std::vector<TowerElem> ea;
      for (auto& x : a.at(k)) ea.push_back(e.T.embed(x, 1));
      CHECK(tvv(ea, b.at(k)) >= 12);
    }
    Ops big(e.G, 256);
    FPhiMod Db(big, {2, D.phi(), 1});
    Jet c = phi_inv_jet(Db, e.T, g, 1, 2), d = phi_inv_jet(Db, e.T, Db.module().phi(g), 2, 2);
    for (int k = 0; k <= 2; ++k) {
      std::vector<TowerElem> ec;
      for (auto& x : c.at(k)) ec.push_back(e.T.embed(x, 2));
      CHECK(tvv(ec, d.at(k)) >= 12);
    }
  }
  // base change of D
  {
    Mat A = identity(F, 2);
    A.at(1, 0) = F->integer(3);
    Mat Ai = inverse(A);
    FPhiMod Dc(e.O, {2, Ai * D.phi() * A, 1});
    ModElem gc{g[0].scale(Ai.at(0, 0)) + g[1].scale(Ai.at(0, 1)), g[0].scale(Ai.at(1, 0)) + g[1].scale(Ai.at(1, 1))};
    for (int n : {0, 1}) {
      auto v = partial_D(phi_inv_jet(D, e.T, g, n, 1)), vc = partial_D(phi_inv_jet(Dc, e.T, gc, n, 1));
      CHECK(tvv(apply_mat(Ai, v), vc) >= 14);
    }
  }
  // partial_D: linear, kills t, needs the jet to reach t^0
  {
    const FieldElem a = F->integer(3), b = F->integer(11);
    ModElem h{random_poly(F, rng, 0, 10, 30), random_poly(F, rng, 0, 10, 30)};
    auto lin = partial_D(phi_inv_jet(D, e.T, scale(g, a) + scale(h, b), 1, 0));
    auto vg = partial_D(phi_inv_jet(D, e.T, g, 1, 0)), vh = partial_D(phi_inv_jet(D, e.T, h, 1, 0));
    for (int i = 0; i < 2; ++i) CHECK(tv(lin[i], vg[i] * a + vh[i] * b) >= 20);
    auto z = partial_D(phi_inv_jet(D, e.T, times_t(e.O, g), 1, 0));
    for (auto& x : z) CHECK(tv(x, e.T.zero(1)) >= F->N() - 4);
    Jet polar = phi_inv_jet(D, e.T, g, 1, -1, 2);
    CHECK_THROWS_AS(partial_D(polar), Error);
    CHECK_THROWS_AS(phi_inv_jet(D, e.T, g, 1, kJetBound + 1), Error);
    // t^-1 t g has the same d_D as g
    auto back = partial_D(phi_inv_jet(D, e.T, times_t(e.O, g), 1, 0, 1));
    CHECK(tvv(back, vg) >= F->N() - 4);
  }
}

TEST_CASE("exact jets from the solver") {
  Env e(2, 2, 64);
  const Field* F = e.F;
  std::mt19937_64 rng(9);
  Ops big(e.G, 192);
  FPhiMod D(big, {2, diag(F, {F->integer(3), F->integer(5) / F->pi()}), 1});
  auto s = solve_one_minus_phi(D, psi_zero(D, rng), 1);
  Jet a = phi_inv_jet(D, e.T, s, 1, 2), b = phi_inv_jet(D, e.T, s.y, 1, 2);
  for (int k = 0; k <= 2; ++k) CHECK(tvv(a.at(k), b.at(k)) >= 16);
}

TEST_CASE("dual exponential ladder") {
  Env e(2, 2, 64);
  const Field* F = e.F;
  std::mt19937_64 rng(10);
  std::vector<FPhiModData> fixtures = {
      {1, diag(F, {F->integer(3)}), 1},
      {2, diag(F, {F->integer(3), F->integer(5) / F->pi()}), 1},
  };
  int count = 0;
  for (int t = 0; t < 5; ++t) {
    FPhiMod D(e.O, fixtures[t % 2]);
    auto s = solve_one_minus_phi(D, psi_zero(D, rng), 1);
    ++count;
    auto r0 = dualexp_rhs(D, e.T, s, 0), r1 = dualexp_rhs(D, e.T, s, 1), r2 = dualexp_rhs(D, e.T, s, 2);
    CHECK(tvv(trace_all(e.T, r2, 1), r1) >= F->N() - 4);
    CHECK(tvv(trace_all(e.T, r1, 0), r0) >= F->N() - 4);
  }
  CHECK(count == 5);
  // psi = 1 elements from the fixed-point solver, read from their series
  FPhiMod D(e.O, {2, diag(F, {F->integer(3), F->integer(7)}), 0});
  for (auto& y : psi_fixed_solve(D.module(), 2)) {
    auto r0 = dualexp_rhs(D, e.T, y, 0), r1 = dualexp_rhs(D, e.T, y, 1);
    CHECK(tvv(trace_all(e.T, r1, 0), r0) >= F->N() - 4);
  }
  // phi y = y on a constant: q^-n y at every level n >= 1
  FPhiMod D1(e.O, {1, diag(F, {F->one()}), 0});
  const ModElem one{Series::constant(F->one())};
  for (int n : {1, 2}) CHECK(tv(dualexp_rhs(D1, e.T, one, n)[0], e.T.constant(F->q_elem().pow(-n), n)) >= 20);
  CHECK(tv(dualexp_rhs(D1, e.T, one, 0)[0], e.T.constant(F->one() - F->q_elem().inv(), 0)) >= 20);
}

TEST_CASE("iterated antiderivative") {
  Env e(2, 2, 64);
  const Field* F = e.F;
  std::mt19937_64 rng(11);
  for (int t = 0; t < 3; ++t) {
    Series f = random_poly(F, rng, 0, 30);
    Series g = antiderivative(e.O, f, 1);
    CHECK(g.coeff(0).is_zero());
    CHECK(rv(e.O.partial(g), f, 0, 40) >= F->N() - 4);
    CHECK(rv(e.O.partial(antiderivative(e.O, f, 2), 2), f, 0, 40) >= F->N() - 4);
  }
  CHECK(rv(antiderivative(e.O, Series::constant(F->one()), 1), e.O.t(), 0, e.O.M()) >= F->N() - 4);
  try {
    antiderivative(e.O, Series::monomial(F->one(), -1), 1);
    CHECK(false);
  } catch (const Error& err) {
    CHECK(err.code() == Err::ResidueObstruction);
  }
}
