#include "suites.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <random>

#include "kummer.hpp"

namespace ltpg {

namespace {

struct Ctx {
  FieldPtr Fp;
  const Field* F;
  LTGroup G;
  Tower T;
  Ops O;
  std::mt19937_64 rng;
  explicit Ctx(const RunConfig& c, int p = 0, int f = 0)
      : Fp(Field::make({p ? p : c.p, f ? f : c.f, {}, (p || f) ? std::vector<int64_t>{} : c.unit_u, c.N})),
        F(Fp.get()),
        G(Fp),
        T(G),
        O(G, c.M),
        rng(c.seed) {}
  int need() const { return F->N() - 4; }
};

class Rec {
 public:
  explicit Rec(SuiteResult& r) : r_(r) {}
  // Keeps the minimum residual over repeated samples of the same identity.
  void val(const std::string& name, int v, int need) {
    auto it = idx_.find(name);
    if (it == idx_.end()) {
      idx_[name] = r_.checks.size();
      r_.checks.push_back({name, v, need, 1, false});
    } else {
      Check& c = r_.checks[it->second];
      c.residual = std::min(c.residual, v);
      ++c.samples;
    }
  }
  void flag(const std::string& name, bool ok) {
    auto it = idx_.find(name);
    if (it == idx_.end()) {
      idx_[name] = r_.checks.size();
      r_.checks.push_back({name, ok ? 1 : 0, -1, 1, false});
    } else {
      Check& c = r_.checks[it->second];
      c.residual = std::min(c.residual, ok ? 1 : 0);
      ++c.samples;
    }
  }
  void error(const std::string& where, const Error& e) {
    flag(where + ": " + err_name(e.code()) + " (" + e.what() + ")", false);
  }

 private:
  SuiteResult& r_;
  std::map<std::string, size_t> idx_;
};

Series random_poly(const Field* F, std::mt19937_64& rng, int lo, int hi, int prec) {
  std::vector<FieldElem> c;
  for (int i = lo; i < hi; ++i) c.push_back(F->random(rng, 0, prec));
  return Series::from_coeffs(F, lo, c);
}

FieldElem random_unit(const Field* F, std::mt19937_64& rng) {
  while (true) {
    FieldElem a = F->random(rng, 0, 30);
    if (a.is_unit()) return a;
  }
}

int rv(const Series& x, const Series& y, int lo, int hi) { return (x - y).val_range(lo, hi); }

int tval(const TowerElem& x) {
  int v = kInf;
  for (auto& c : x.coords()) v = std::min(v, c.val());
  return v;
}
int tv(const TowerElem& x, const TowerElem& y) { return tval(x - y); }
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

Mat diag(const Field* F, std::vector<FieldElem> d) {
  Mat A(F, (int)d.size(), (int)d.size());
  for (int i = 0; i < (int)d.size(); ++i) A.at(i, i) = d[i];
  return A;
}

ModElem cut(ModElem x, int n) {
  for (auto& s : x) s = s.cut_hi(n);
  return x;
}

std::vector<int64_t> unit_vec(int d, int i) {
  std::vector<int64_t> v(d, 0);
  v[i] = 1;
  return v;
}

// g - phi psi g: an exact polynomial with psi = 0
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

// ---------------------------------------------------------------------------

void formal_group(const RunConfig& cfg, Rec& rec) {
  Ctx c(cfg);
  const Field* F = c.F;
  const int M = cfg.M, need = c.need();
  Series T = Series::var(F);
  Series l = c.G.log(M);
  rec.val("log([pi] T) = pi log(T)", rv(compose(l, c.G.pi_series(), M), l.scale(F->pi()), 0, M), need);
  Series e = c.G.exp(M);
  rec.val("exp(log T) = T", rv(compose(e, l, M), T, 0, M), need);
  rec.val("log(exp T) = T", rv(compose(l, e, M), T, 0, M), need);
  rec.val("X (+) 0 = X", rv(c.G.add(T, Series::zero(F), M), T, 0, M), need);
  const int D = 6;
  BiPoly law = c.G.law(D);
  Series ld = c.G.log(D + 1);
  BiPoly lhs(F, D), pw = law;
  for (int m = 1; m <= D; ++m) {
    BiPoly cm(F, D);
    cm.at(0, 0) = ld.coeff(m);
    lhs = lhs + cm * pw;
    pw = pw * law;
  }
  rec.val("log(X (+) Y) = log X + log Y, total degree 6",
          (lhs - BiPoly::from_x(ld, D) - BiPoly::from_y(ld, D)).vmin(), need);
  for (int t = 0; t < 10; ++t) {
    FieldElem a = F->random(c.rng, 0, F->N()), b = F->random(c.rng, 0, F->N());
    Series sa = c.G.scalar(a, M), sb = c.G.scalar(b, M), sab = c.G.scalar(a * b, M);
    rec.val("[a][b] = [ab]", rv(compose(sa, sb, M), sab, 0, M), need);
  }
}

void operator_identities(const RunConfig& cfg, Rec& rec) {
  Ctx c(cfg);
  const Field* F = c.F;
  const Ops& O = c.O;
  const int M = cfg.M, need = c.need(), q = (int)F->q();
  const FieldElem pi = F->pi();
  // psi reads coefficient j to about q j + (q - 1) s
  const int W = M / 4;
  Ops big(c.G, q * W + (q - 1) * (F->N() + 2));
  for (int t = 0; t < 50; ++t) {
    Series x = random_poly(F, c.rng, 0, M, F->N()), y = random_poly(F, c.rng, 0, M, F->N());
    FieldElem a = random_unit(F, c.rng);
    rec.val("psi phi = id", rv(O.psi(O.phi(x)), x, 0, M), need);
    rec.val("psi(phi(f) g) = f psi(g)", rv(O.psi(O.phi(x) * y), x * O.psi(y), 0, M), need);
    rec.val("d phi = pi phi d", rv(O.partial(O.phi(x)), O.phi(O.partial(x)).scale(pi), 0, M - 2), need);
    Series xb = random_poly(F, c.rng, 0, big.M(), F->N());
    rec.val("d psi = pi^-1 psi d", rv(big.partial(big.psi(xb)), big.psi(big.partial(xb)).scale(pi.inv()), 0, W),
            need);
    rec.val("d gamma_a = a gamma_a d", rv(O.partial(O.gamma(a, x)), O.gamma(a, O.partial(x)).scale(a), 0, M - 2),
            need);
  }
  Series t = O.t();
  rec.val("phi(t) = pi t", rv(O.phi(t), t.scale(pi), 0, M), need);
  for (int i = 0; i < 10; ++i) {
    FieldElem a = random_unit(F, c.rng);
    rec.val("gamma_a(t) = a t", rv(O.gamma(a, t), t.scale(a), 0, M), need);
  }
}

void residue(const RunConfig& cfg, Rec& rec) {
  Ctx c(cfg);
  const Field* F = c.F;
  const Ops& O = c.O;
  const int M = cfg.M, need = c.need();
  const FieldElem one = F->one(), ratio = F->pi() / F->q_elem();
  rec.val("Res(T^-1) = 1", (O.res(Series::monomial(one, -1)) - one).val(), need);
  rec.val("Res(x0) = 1", (O.res(O.x0()) - one).val(), need);
  for (int t = 0; t < 20; ++t) {
    Series x = random_poly(F, c.rng, -5, 20, F->N());
    rec.val("Res(d f) = 0", O.res(O.partial(x)).val(), need);
    rec.val("Res(psi f) = (pi/q) Res(f)", (O.res(O.psi(x)) - O.res(x) * ratio).val(), need);
    Series y = x - O.x0().scale(O.res(x));
    Series g = O.antiderivative(y);
    rec.val("Res(f) = 0 => d g = f (window M - 2)", rv(O.partial(g), y, -5, M - 2), need);
  }
  try {
    O.antiderivative(Series::monomial(one, -1));
    rec.flag("Res(f) != 0 has no d-preimage", false);
  } catch (const Error&) {
    rec.flag("Res(f) != 0 has no d-preimage", true);
  }
}

void cokernel(const RunConfig& cfg, Rec& rec) {
  Ctx c(cfg);
  const Field* F = c.F;
  const Ops& O = c.O;
  const int M = cfg.M, need = c.need();
  const FieldElem qi = F->q_elem().inv();
  int generic = 0;
  while (generic < 10) {
    // units and units / q^2 (the Neumann side)
    FieldElem a = random_unit(F, c.rng) * (generic % 2 ? qi * qi : F->one());
    if (O.cokernel_index(a) >= 0) continue;
    ++generic;
    Series x = random_poly(F, c.rng, 0, M, F->N());
    auto s = O.solve_psi_minus_a(x, a);
    rec.flag("generic a: no obstruction", s.m == 0 && s.obstruction.is_zero());
    rec.val("(psi - a) g = f, generic a", rv(O.psi(s.g) - s.g.scale(a), x, 0, M / 2), need);
  }
  for (int t = 0; t < 3; ++t) {
    FieldElem a = random_unit(F, c.rng) * qi * qi;
    Series x = random_poly(F, c.rng, -2, M, F->N());
    auto n = O.solve_psi_minus_a(x, a);
    auto d = O.solve_psi_minus_a(x, a, true);
    rec.flag("1/a in qO: Neumann path taken", n.neumann && !d.neumann);
    rec.val("Neumann = dense", rv(n.g, d.g, -2, M / 2), need);
  }
  for (int m : {1, 2}) {
    const std::string tag = " (m = " + std::to_string(m) + ")";
    FieldElem a = F->pi_pow(m) * qi;
    rec.flag("a = pi^m/q detected" + tag, O.cokernel_index(a) == m);
    Series gen = O.cokernel_generator(m);
    rec.val("functional = 1 on the generator" + tag, (O.cokernel_functional(m, gen) - F->one()).val(), need);
    for (int t = 0; t < 3; ++t) {
      Series x = random_poly(F, c.rng, 0, M, F->N());
      rec.val("functional = 0 on plus series" + tag, O.cokernel_functional(m, x).val(), need);
      FieldElem k = F->random(c.rng, 0, F->N());
      Series y = x + gen.scale(k);
      auto s = O.solve_psi_minus_a(y, a);
      rec.val("obstruction recovers the generator coefficient" + tag, (s.obstruction - k).val(), need);
      Series corrected = y - gen.scale(s.obstruction);
      rec.val("corrected input solvable" + tag, rv(O.psi(s.g) - s.g.scale(a), corrected, -1, M / 4), need);
    }
  }
}

void theta_trace(const RunConfig& cfg, Rec& rec) {
  Ctx c(cfg);
  const Field* F = c.F;
  const int need = c.need();
  GammaBasis b = gamma_basis(F, 1);
  const FieldElem q2 = F->q_elem().pow(2).inv();
  const int d2 = c.T.degree(2);
  for (int t = 0; t < 10; ++t) {
    std::vector<FieldElem> co;
    for (int i = 0; i < d2; ++i) co.push_back(F->random(c.rng, 0, 30));
    TowerElem x = c.T.from_coords(2, co);
    rec.val("Theta_b(x) = q^-2 Tr_{F_2/F_1}(x)", tv(c.O.theta_b_tower(c.T, b, x, 1), c.T.trace(x, 1) * q2), need);
  }
  for (int t = 0; t < 10; ++t) {
    Series g = random_poly(F, c.rng, 0, 14, 30);
    Series h = g - c.O.phi(c.O.psi(g));
    rec.val("Theta_b(f)(u_2) = 0 for psi(f) = 0", tval(c.O.theta_b_tower(c.T, b, c.T.eval(h, 2), 1)), need);
  }
}

void cocycle(const RunConfig& cfg, Rec& rec) {
  Ctx c(cfg);
  const Field* F = c.F;
  const int need = c.need();
  auto D = PhiGammaMod::twist(c.O, 0);
  auto ys = psi_fixed_solve(D, 4);
  const ModElem& y = ys.back();
  GammaBasis b = gamma_basis(F, F->n0());
  const int d = (int)b.chi.size();
  Cocycle cb = cocycle_cb(D, y, b);
  std::uniform_int_distribution<int> k(-3, 5);
  for (int t = 0; t < 10; ++t) {
    std::vector<int64_t> g(d), h(d);
    for (int i = 0; i < d; ++i) g[i] = k(c.rng), h[i] = k(c.rng);
    rec.val("(g - 1) c(h) = (h - 1) c(g)", cb.relation_residual(g, h, 0, 32), need);
  }
  // c(b_j^(p^K)) / l(b_j^(p^K)) converges to Theta_b(y) linearly in K
  ModElem th = theta_b(D, b, y);
  for (int j = 0; j < d; ++j) {
    int prev = kNoBound;
    bool increasing = true;
    for (int K = 1; K <= 20; ++K) {
      int v = resval(cocycle_derivative(cb, j, K), th, 0, 24);
      increasing = increasing && v > prev;
      prev = v;
      if (v >= need) break;
    }
    rec.flag("finite differences increase towards Theta_b(y)", increasing);
    rec.val("derivative at 1 = Theta_b(y)", prev, need);
  }
  GammaBasis b2 = power_basis(b, F->p());
  Cocycle cb2 = cocycle_cb(D, y, b2);
  std::vector<int> ones(d, 1);
  Cocycle cor = corestrict(cb2, b, ones);
  for (int j = 0; j < d; ++j)
    for (int kk : {1, 2, -1}) rec.val("cor c_(b^p) = c_b", resval(cor.at(j, kk), cb.at(j, kk), 0, 32), need);
  // cor(res c)(g) = [G:H] c(g) + (g - 1) sum_x c(x)
  Cocycle cr = corestrict(restrict_to(cb, ones), b, ones);
  ModElem S = D.zero();
  const int64_t p = F->p();
  std::vector<int64_t> r(d, 0);
  while (true) {
    S = S + cb.at(r);
    int i = 0;
    while (i < d && ++r[i] == p) r[i++] = 0;
    if (i == d) break;
  }
  int64_t index = 1;
  for (int i = 0; i < d; ++i) index *= p;
  for (int j = 0; j < d; ++j) {
    ModElem want = scale(cb.at(j, 1), F->integer(index)) + D.gamma(b, unit_vec(d, j), S) - S;
    rec.val("cor res = index (mod coboundary)", resval(cr.at(j, 1), want, 0, 32), need);
  }
  if (d >= 2) {
    std::vector<std::vector<int64_t>> E(d, std::vector<int64_t>(d, 0));
    for (int i = 0; i < d; ++i) E[i][i] = 1;
    E[0][1] = 1;
    GammaBasis a = change_basis(b, E);
    Cocycle ca = cocycle_cb(D, y, a);
    ModElem w = coboundary(ca, cb, E);
    std::vector<int64_t> ka(d, 0), kb(d, 0);
    ka[0] = 2, ka[1] = 1;
    kb[0] = 2, kb[1] = 3;
    rec.val("basis change is a coboundary", resval(ca.at(ka) - cb.at(kb), D.gamma(a, ka, w) - w, 0, 24), need);
  }
}

void mc(const RunConfig& cfg, Rec& rec) {
  Ctx c(cfg);
  const Field* F = c.F;
  const int need = c.need(), q = (int)F->q(), M = cfg.M;
  GammaBasis b = gamma_basis(F, F->n0());
  const int d = (int)b.chi.size();
  for (int j : {0, 1}) {
    const std::string tag = " (j = " + std::to_string(j) + ")";
    auto D = PhiGammaMod::twist(c.O, j);
    auto zs = psi_fixed_solve(D, 4);
    // (b_1 - 1) ... (b_d - 1) z
    ModElem y = zs.back();
    for (int i = 0; i < d; ++i) y = D.gamma(b, unit_vec(d, i), y) - y;
    Cocycle cc = cocycle_cb(D, y, b);
    McSolve s = solve_mc(cc);
    rec.flag("m_c unique" + tag, s.unique && s.consistent);
    for (int i = 0; i < d; ++i) {
      ModElem x = cc.at(i, 1);
      rec.val("(phi - 1) c(b_i) = (b_i - 1) m_c" + tag,
              resval(D.phi(x) - x, D.gamma(b, unit_vec(d, i), s.m) - s.m, 0, 32), need);
    }
    const int W = std::max(1, (M - (F->N() - 2) * (q - 1)) / q);
    rec.val("psi(m_c) = 0" + tag, resval(D.psi(cut(s.m, M)), 0, W), need);
  }
}

void big_exponential(const RunConfig& cfg, Rec& rec) {
  Ctx c(cfg);
  const Field* F = c.F;
  const int need = c.need(), M = cfg.M;
  {
    FPhiMod D(c.O, {2, diag(F, {F->integer(3), F->integer(7)}), 1});
    std::vector<ModElem> basis = psi_fixed_solve(D.module(), 3);
    for (int t = 0; t < 3; ++t) {
      ModElem y0 = D.module().zero();
      for (auto& e : basis) y0 = y0 + scale(e, F->random(c.rng, 0, 30));
      ModElem f = y0 - truncate_hi(D.module().phi(y0), M);
      auto s = solve_one_minus_phi(D, f, 1);
      rec.flag("round trip: empty kernel", !s.ambiguous);
      rec.val("round trip recovers y", resval(s.y, y0, 0, M), need);
    }
  }
  {
    // pi^-1 eigenline: y is determined up to F t e_0
    FPhiMod D(c.O, {2, diag(F, {F->pi().inv(), F->integer(3)}), 2});
    ModElem f = psi_zero(D, c.rng);
    f[0] = f[0] - c.O.t().scale(f[0].coeff(1));
    auto s = solve_one_minus_phi(D, f, 2);
    rec.flag("declared kernel is t e_0", s.kernel.size() == 1 && s.kernel[0].first == 1);
    ModElem y = s.y;
    y[0] = y[0] + c.O.t();
    rec.val("(1 - phi) y = f modulo the kernel",
            resval(y - truncate_hi(D.module().phi(y), M), truncate_hi(f, M), 0, M), need);
    ColcolSolution s2 = s;
    s2.y = y;
    rec.val("Omega blind to the kernel", resval(omega(D, s2), omega(D, s), 0, M / 2), need);
  }
  std::vector<FPhiModData> fixtures = {
      {1, diag(F, {F->integer(3)}), 1},
      {2, diag(F, {F->integer(3), F->integer(5) / F->pi()}), 1},
  };
  for (auto& fx : fixtures)
    for (int h : {1, 2}) {
      const std::string tag = " (rank " + std::to_string(fx.dim) + ", h = " + std::to_string(h) + ")";
      FPhiMod D(c.O, {fx.dim, fx.phi, h});
      ModElem f = psi_zero(D, c.rng);
      auto s = solve_one_minus_phi(D, f, h);
      auto s1 = solve_one_minus_phi(D, f, h + 1);
      ModElem lhs = D.module().nabla_i(omega(D, s), h);
      rec.val("nabla_h Omega_h = Omega_(h+1)" + tag, resval(lhs, omega(D, s1), 0, M / 2), need);
    }
  for (int h : {1, 2}) {
    FPhiMod D(c.O, {2, diag(F, {F->integer(3), F->integer(5) / F->pi()}), h});
    FPhiMod D1(c.O, D.twisted(1));
    ModElem x = psi_zero(D, c.rng);
    ModElem lhs = times_t(c.O, omega_vh(D, x, h));
    ModElem rhs = omega_vh(D1, antiderivative(c.O, x, 1), h + 1);
    rec.val("twist identity (h = " + std::to_string(h) + ")", resval(lhs, rhs, 0, M / 2), need);
  }
}

void ladder(const RunConfig& cfg, Rec& rec) {
  Ctx c(cfg);
  const Field* F = c.F;
  const int need = c.need(), q = (int)F->q();
  // wide enough to read psi(y) on T^0..T^3
  const int W = 4;
  Ops big(c.G, std::max(cfg.M, q * W + (q - 1) * (F->N() + 2)));
  std::vector<FPhiModData> fixtures = {
      {1, diag(F, {F->integer(3)}), 1},
      {2, diag(F, {F->integer(3), F->integer(5) / F->pi()}), 1},
  };
  for (int t = 0; t < 5; ++t) {
    FPhiMod D(big, fixtures[t % 2]);
    auto s = solve_one_minus_phi(D, psi_zero(D, c.rng), 1);
    rec.val("(1 - phi) y = f", s.residual, need);
    rec.val("psi(y) = y", resval(D.module().psi(cut(s.y, big.M())), s.y, 0, W), need);
    auto r0 = dualexp_rhs(D, c.T, s, 0), r1 = dualexp_rhs(D, c.T, s, 1), r2 = dualexp_rhs(D, c.T, s, 2);
    rec.val("q^-2 Tr d_D(phi^-2 y) = q^-1 d_D(phi^-1 y)", tvv(trace_all(c.T, r2, 1), r1), need);
    rec.val("n = 0: (1 - q^-1 phi^-1) d_D(y)", tvv(trace_all(c.T, r1, 0), r0), need);
  }
}

TowerElem random_point(const Tower& T, std::mt19937_64& rng, int k) {
  std::vector<FieldElem> co;
  for (int i = 0; i < T.degree(k); ++i) co.push_back(T.field()->random(rng, 0, 30));
  return T.from_coords(k, co).mul_u();
}

std::vector<TowerElem> logs(const Tower& T, const SSeq& s) {
  std::vector<TowerElem> out;
  for (int n = 1; n <= s.nmax(); ++n) out.push_back(lt_log(T, s.at(n)));
  return out;
}

void kummer(const RunConfig& cfg, Rec& rec) {
  Ctx c(cfg);
  const Field* F = c.F;
  const int need = F->N() - 5, nmax = std::max(2, cfg.nmax);
  const FieldElem qp = F->q_elem() / F->pi();
  if ((F->q_elem() / F->pi()).val() == 0) {
    rec.flag("q = pi base: Kummer suite needs q != pi", false);
    return;
  }
  for (int k : {1, 2}) {
    const std::string tag = " (k = " + std::to_string(k) + ")";
    SBuild b = build_s_from_point(c.T, random_point(c.T, c.rng, k), nmax);
    rec.val("x_k = [pi^l] z" + tag, b.point_residual, need);
    for (int v : b.relation) rec.val("Tr^LT x_(n+1) = [q/pi] x_n" + tag, v, need);
    std::vector<TowerElem> ys = logs(c.T, b.s);
    for (int n = 1; n < nmax; ++n)
      rec.val("Tr log x_(n+1) = (q/pi) log x_n" + tag, tv(c.T.trace(ys[n], n), ys[n - 1] * qp), need);
    Interp in = interp_log(c.G, c.T, ys, interp_window(c.T, nmax, cfg.M));
    rec.val("psi f = f / pi" + tag, in.psi_residual, need);
    for (int v : in.eval_residual) rec.val("f(u_n) = y_n" + tag, v, need);
    KummerReport r = kummer_shell(c.G, c.T, b.s, in);
    rec.val("psi(d f) = d f" + tag, r.psi_residual, need);
    for (int n = 0; n < 2; ++n) {
      rec.val("(q/pi)^-n ladder, n = " + std::to_string(n + 1) + tag, r.ladder_residual[n], need);
      rec.val("jet of phi^-n(d f)" + tag, r.jet_residual[n], need);
    }
  }
  RunConfig base = cfg;
  Ctx qpi(base, 2, 1);
  try {
    build_s_from_point(qpi.T, qpi.T.u(1), 2);
    rec.flag("q = pi refused", false);
  } catch (const Error& e) {
    rec.flag("q = pi refused", e.code() == Err::UnsupportedBase);
  }
}

void q2_probe(const RunConfig& cfg, Rec& rec, nlohmann::json& notes) {
  Ctx c(cfg, 2, 1);
  const Field* F = c.F;
  const int need = c.need();
  // Newton-identity path
  Series ps = c.O.psi(Series::var(F));
  // psi(f)(u_1) = q^-1 sum of f over the conjugates of u_2 over F_1
  const FieldElem qi = F->q_elem().inv();
  TowerElem brute = c.T.descend(c.T.trace_galois(c.T.u(2), 1), 1) * qi;
  TowerElem newton = c.T.eval(ps, 1);
  // the roots of X^2 + pi X - W sum to -pi, so phi(psi(T)) = -pi / q
  const FieldElem direct = -(F->pi() * qi);
  rec.flag("psi_q(T) is a constant", ps.val_range(1, ps.hi()) >= need && ps.tau_hi() >= need);
  rec.val("Newton path = conjugate sum at u_1", tv(newton, brute), need);
  rec.val("conjugate sum = -pi/q", tv(brute, c.T.constant(direct, 1)), need);
  for (int k = 2; k <= 6; ++k) {
    Series pk = c.O.psi(Series::monomial(F->one(), k));
    TowerElem b = c.T.descend(c.T.trace_galois(c.T.u(2).pow(k), 1), 1) * qi;
    rec.val("psi_q(T^k)(u_1) paths agree, k <= 6", tv(c.T.eval(pk, 1), b), need);
  }
  notes["field"] = "p = 2, f = 1, q = pi = 2";
  notes["psi_q(T)"] = ps.coeff(0).compact();
  notes["newton"] = newton.coord(0).compact();
  notes["conjugate_sum"] = brute.coord(0).compact();
  notes["q_gt_2_psi_q(T)"] = [&] {
    Ctx c4(cfg, 2, 2);
    return c4.O.psi(Series::var(c4.F)).str();
  }();
}

using Runner = std::function<void(const RunConfig&, Rec&, nlohmann::json&)>;

const std::vector<std::pair<std::string, Runner>>& registry() {
  static const std::vector<std::pair<std::string, Runner>> r = {
      {"formal-group", [](auto& c, auto& r, auto&) { formal_group(c, r); }},
      {"operator-identities", [](auto& c, auto& r, auto&) { operator_identities(c, r); }},
      {"residue", [](auto& c, auto& r, auto&) { residue(c, r); }},
      {"cokernel", [](auto& c, auto& r, auto&) { cokernel(c, r); }},
      {"theta-trace", [](auto& c, auto& r, auto&) { theta_trace(c, r); }},
      {"cocycle", [](auto& c, auto& r, auto&) { cocycle(c, r); }},
      {"mc", [](auto& c, auto& r, auto&) { mc(c, r); }},
      {"big-exponential", [](auto& c, auto& r, auto&) { big_exponential(c, r); }},
      {"ladder", [](auto& c, auto& r, auto&) { ladder(c, r); }},
      {"kummer", [](auto& c, auto& r, auto&) { kummer(c, r); }},
      {"q2-probe", [](auto& c, auto& r, auto& n) { q2_probe(c, r, n); }},
  };
  return r;
}

// wall-clock limits in seconds
const std::map<std::string, double> kLimits = {
    {"formal-group", 10}, {"operator-identities", 30}, {"theta-trace", 120}};

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (auto& [k, v] : registry()) n.push_back(k);
    return n;
  }();
  return names;
}

bool is_suite(const std::string& name) {
  const auto& n = suite_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

SuiteResult run_suite(const std::string& name, const RunConfig& cfg) {
  const auto& reg = registry();
  auto it = std::find_if(reg.begin(), reg.end(), [&](auto& e) { return e.first == name; });
  if (it == reg.end()) fail(Err::InvalidArgument, "unknown suite " + name);
  SuiteResult out;
  out.name = name;
  out.p = cfg.p, out.f = cfg.f, out.N = cfg.N, out.M = cfg.M;
  if (name == "q2-probe") out.p = 2, out.f = 1;  // fixed field
  Rec rec(out);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    it->second(cfg, rec, out.notes);
  } catch (const Error& e) {
    rec.error("aborted", e);
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (auto l = kLimits.find(name); l != kLimits.end())
    rec.flag("runtime < " + std::to_string((int)l->second) + " s", out.seconds < l->second);
  for (auto& ch : out.checks) {
    ch.pass = ch.flag() ? ch.residual == 1 : ch.residual >= ch.required;
    out.pass = out.pass && ch.pass;
  }
  return out;
}

nlohmann::json to_json(const RunConfig& c) {
  return {{"p", c.p}, {"f", c.f},       {"unit_u", c.unit_u},       {"N", c.N},
          {"M", c.M}, {"nmax", c.nmax}, {"jet_order", c.jet_order}, {"seed", c.seed}};
}

nlohmann::json to_json(const Check& c) {
  nlohmann::json j = {{"name", c.name}, {"pass", c.pass}, {"samples", c.samples}};
  if (c.flag()) {
    j["kind"] = "flag";
  } else {
    j["kind"] = "valuation";
    j["residual"] = c.residual >= kInf ? nlohmann::json("exact") : nlohmann::json(c.residual);
    j["required"] = c.required;
  }
  return j;
}

nlohmann::json to_json(const SuiteResult& r) {
  nlohmann::json checks = nlohmann::json::array();
  int worst = kInf;
  for (auto& c : r.checks) {
    checks.push_back(to_json(c));
    if (!c.flag()) worst = std::min(worst, c.residual);
  }
  nlohmann::json j = {{"suite", r.name},
                      {"config", {{"p", r.p}, {"f", r.f}, {"N", r.N}, {"M", r.M}}},
                      {"pass", r.pass},
                      {"seconds", r.seconds},
                      {"checks", checks}};
  if (worst < kInf) j["ledger"] = {{"digits", worst}, {"N", r.N}, {"slack", r.N - std::min(worst, r.N)}};
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

}  // namespace ltpg
