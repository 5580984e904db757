#include "ops.hpp"

#include <algorithm>
#include <cmath>

namespace ltpg {

namespace {


int ceil_div(int a, int b) { return a <= 0 ? -((-a) / b) : (a + b - 1) / b; }

int floor_log(int64_t x, int b) {
  int k = 0;
  for (int64_t t = b; t <= x; t *= b) ++k;
  return k;
}

// Digits of a polynomial in base W = T^q + pi T, collapsed by psi:
// psi(sum_j R_j W^j) = sum_j psi(R_j) T^j, and psi(T^i) = 0 for 0 < i < q - 1,
// psi(T^(q-1)) = -(q-1) pi / q, psi(1) = 1.
Vec psi_poly(const Field* F, Vec cur) {
  const int q = (int)F->q();
  const FieldElem pi = F->pi();
  const FieldElem cst = -(pi.mul_int(q - 1) / F->q_elem());
  Vec out;
  while (true) {
    while (!cur.empty() && cur.back().is_exact_zero()) cur.pop_back();
    if (cur.empty()) break;
    const int n = (int)cur.size();
    Vec Q(std::max(0, n - q), F->zero());
    for (int k = n - 1; k >= q; --k) {
      const FieldElem c = cur[k];
      if (c.is_exact_zero()) continue;
      Q[k - q] = c;
      cur[k - q + 1] -= pi * c;
    }
    FieldElem d = cur[0];
    if (q - 1 < n && !cur[q - 1].is_exact_zero()) d += cst * cur[q - 1];
    out.push_back(d);
    cur = std::move(Q);
  }
  return out;
}

// sum_k c_k W^k by Horner.
Vec phi_poly(const Field* F, const Vec& c) {
  const int q = (int)F->q();
  const FieldElem pi = F->pi();
  Vec acc;
  for (int k = (int)c.size() - 1; k >= 0; --k) {
    if (!acc.empty()) {
      Vec nw(acc.size() + q, F->zero());
      for (size_t i = 0; i < acc.size(); ++i) {
        if (acc[i].is_exact_zero()) continue;
        nw[i + q] += acc[i];
        nw[i + 1] += pi * acc[i];
      }
      acc = std::move(nw);
    }
    if (acc.empty()) {
      if (!c[k].is_exact_zero()) acc.push_back(c[k]);
    } else {
      acc[0] += c[k];
    }
  }
  return acc;
}

Vec poly_mul(const Field* F, const Vec& a, const Vec& b) {
  if (a.empty() || b.empty()) return {};
  Vec r(a.size() + b.size() - 1, F->zero());
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_exact_zero()) continue;
    for (size_t j = 0; j < b.size(); ++j)
      if (!b[j].is_exact_zero()) r[i + j] += a[i] * b[j];
  }
  return r;
}

}  // namespace

GammaBasis gamma_basis(const Field* F, int n) {
  if (n < 1) fail(Err::InvalidArgument, "Gamma basis level must be >= 1");
  GammaBasis b;
  b.n = n;
  FieldElem w = FieldElem::gen(F), wi = F->one();
  FieldElem pn = F->pi_pow(n);
  FieldElem prod = F->one();
  for (int i = 0; i < F->f(); ++i) {
    FieldElem x = pn * wi;
    if (n >= F->n0()) {
      b.chi.push_back(F->pexp(x));
      b.ell.push_back(x);
    } else {
      FieldElem c = F->one() + x;
      b.chi.push_back(c);
      b.ell.push_back(F->plog_principal(c));
    }
    prod *= b.ell.back();
    wi *= w;
  }
  b.ell_star = prod / F->q_elem().pow(n);
  return b;
}

Ops::Ops(const LTGroup& G, int M, int depth) : G_(G), M_(M), depth_(depth < 0 ? M : depth) {
  if (M < 2) fail(Err::InvalidArgument, "series order must be >= 2");
}

Series Ops::a_series(int order) const {
  std::lock_guard<std::recursive_mutex> lk(mu_);
  auto it = a_cache_.lower_bound(order);
  if (it != a_cache_.end()) return it->second.truncate_hi(order);
  return a_cache_[order] = G_.a_series(order);
}

Series Ops::dlog(int order) const {
  std::lock_guard<std::recursive_mutex> lk(mu_);
  auto it = dl_cache_.lower_bound(order);
  if (it != dl_cache_.end()) return it->second.truncate_hi(order);
  return dl_cache_[order] = G_.log_derivative(order);
}

Series Ops::t() const { return G_.log(M_); }

Series Ops::x0() const { return a_series(M_ + 1).shift(-1); }

Series Ops::phi_T() const { return G_.pi_series(); }

// ---- phi ----

Series Ops::phi(const Series& f) const {
  const Field* F = field();
  const int q = (int)F->q();
  const int lo = f.lo(), hi = f.hi();
  // plus part
  Vec pc;
  for (int k = 0; k < hi; ++k) pc.push_back(k >= lo ? f.coeffs()[k - lo] : FieldElem::zero(F, f.tau_lo()));
  Vec pp = phi_poly(F, pc);
  const int th = f.tau_hi();
  if (th < kInf) {
    // T^k with k >= hi contributes to T^e (e >= k) with valuation >= th + ceil((q k - e)/(q - 1)) when e < q k
    for (int e = hi; e < (int)pp.size(); ++e) {
      int b = sat_add(th, std::max(0, ceil_div(q * hi - e, q - 1)));
      pp[e] = pp[e].with_prec(std::min(pp[e].prec(), b));
    }
    if ((int)pp.size() < hi) pp.resize(hi, F->zero());
  }
  Series plus = Series::from_coeffs(F, 0, pp, kInf, th);
  if (th < kInf || (int)pp.size() > std::max(M_, kDegreeBudget / 2)) plus = plus.truncate_hi(std::max(M_, hi));
  if (lo >= 0 && f.tau_lo() >= kInf) return plus;

  // negative part: phi(T^-k) = T^(-qk) (1 + pi T^(1-q))^(-k), kept down to -depth
  const int D = std::max(depth_, q);
  const int K = std::max(0, -lo);
  Vec neg(D, F->zero());  // neg[i] = coefficient of T^(i - D)
  int tau = kInf;
  const FieldElem pi = F->pi();
  for (int k = 1; k <= K; ++k) {
    const FieldElem c = f.coeff(-k);
    if (c.is_exact_zero()) continue;
    // binom(-k, j) pi^j
    FieldElem b = F->one();
    int j = 0;
    for (;; ++j) {
      int e = -q * k - j * (q - 1);
      if (e < -D) break;
      neg[e + D] += c * b;
      b = (b * pi).mul_int(-(k + j)).div_int(j + 1);
    }
    tau = std::min(tau, sat_add(c.val(), j));
  }
  if (f.tau_lo() < kInf) {
    // unknown coefficients at T^-k, k > K, land at exponents <= -q (K + 1)
    const int top = -q * (K + 1);
    for (int e = -D; e <= std::min(top, -1); ++e) neg[e + D] = neg[e + D].with_prec(std::min(neg[e + D].prec(), f.tau_lo()));
    tau = std::min(tau, f.tau_lo());
  }
  Series ns = Series::from_coeffs(F, -D, neg, tau, kInf);
  return ns + plus;
}

Series Ops::phi_pow(Series f, int k) const {
  for (int i = 0; i < k; ++i) f = phi(f);
  return f;
}

// ---- psi ----

Series Ops::psi(const Series& f) const {
  const Field* F = field();
  const int q = (int)F->q(), fdeg = F->f();
  const int lo = f.lo(), hi = f.hi();
  const int loss = std::min(0, 1 - fdeg);  // psi(O_F[T]) lies in (pi/q) O_F[T]
  // plus part
  Vec pc;
  for (int k = 0; k < hi; ++k) pc.push_back(k >= lo ? f.coeffs()[k - lo] : FieldElem::zero(F, f.tau_lo()));
  Vec out = psi_poly(F, pc);
  const int th = f.tau_hi();
  int hi_out = (int)out.size();
  int tau_hi_out = kInf;
  if (th < kInf) {
    hi_out = std::max(hi_out, ceil_div(std::max(hi, 0), q));
    out.resize(hi_out, F->zero());
    for (int j = 0; j < hi_out; ++j) {
      int s0 = ceil_div(std::max(0, hi - q * j), q - 1);
      int s1 = ceil_div(std::max(0, hi - q * j - q + 1), q - 1);
      int b = sat_add(th, std::min(s0, 1 - fdeg + s1));
      out[j] = out[j].with_prec(std::min(out[j].prec(), b));
    }
    tau_hi_out = sat_add(th, loss);
  }
  Series plus = Series::from_coeffs(F, 0, out, kInf, tau_hi_out);
  if (lo >= 0 && f.tau_lo() >= kInf) return plus;

  // negative part: sum_{k<=K} f_-k T^-k = phi(T^-K) H^K (T^K g), H = T^(q-1) + pi
  const int K = std::max(0, -lo);
  Series neg(F);
  if (K > 0) {
    Vec H(q, F->zero());
    H[0] = F->pi();
    H[q - 1] = F->one();
    Vec HK = {F->one()};
    for (int i = 0; i < K; ++i) HK = poly_mul(F, HK, H);
    Vec g(K, F->zero());
    for (int k = 1; k <= K; ++k) g[K - k] = f.coeff(-k);
    Vec r = psi_poly(F, poly_mul(F, HK, g));
    neg = Series::from_coeffs(F, -K, r);
  }
  if (f.tau_lo() < kInf) {
    // unknown T^-k, k > K, only reach exponents <= -ceil((K + 1)/q)
    const int top = -ceil_div(K + 1, q);
    const int tau = sat_add(f.tau_lo(), loss);
    const int end = std::max(neg.hi(), -K);
    Vec c;
    for (int e = -K; e < end; ++e) {
      FieldElem x = neg.coeff(e);
      c.push_back(e <= top ? x.with_prec(std::min(x.prec(), tau)) : x);
    }
    neg = Series::from_coeffs(F, -K, c, tau, kInf);
  }
  return neg + plus;
}

Series Ops::psi_pow(Series f, int k) const {
  for (int i = 0; i < k; ++i) f = psi(f);
  return f;
}

// ---- gamma, partial, nabla ----

Series Ops::gamma(const FieldElem& a, const Series& f) const {
  if (!a.is_unit()) fail(Err::NonUnitScalar, "gamma_a needs a unit of O_F");
  const int L = std::max(M_, f.hi());
  Series s = G_.scalar(a, L).with_tail_hi(L, 0);
  return compose(f, s, L);
}

Series Ops::partial(const Series& f, int k) const {
  Series g = f;
  for (int i = 0; i < k; ++i) {
    const int out = std::max(M_, g.hi());
    Series A = a_series(out - std::min(g.lo(), 0) + 2);
    g = (g.derivative() * A).truncate_hi(out);
  }
  return g;
}

Series Ops::nabla(const Series& f, int k) const {
  Series g = f;
  for (int i = 0; i < k; ++i) {
    const int out = std::max(M_, g.hi());
    Series d = partial(g);
    Series t = G_.log(out - std::min(d.lo(), 0) + 2);
    g = (t * d).truncate_hi(out);
  }
  return g;
}

Series Ops::nabla_i(const Series& f, int i) const { return nabla(f) - f.mul_int(i); }

FieldElem Ops::res(const Series& f) const {
  const Field* F = field();
  const int lo = f.lo(), hi = f.hi();
  FieldElem r = F->zero();
  if (lo < 0) {
    Series dl = dlog(-lo + 1);
    for (int k = lo; k <= std::min(-1, hi - 1); ++k) {
      const FieldElem& c = f.coeffs()[k - lo];
      if (!c.is_exact_zero()) r += c * dl.coeff(-1 - k);
    }
  }
  if (hi <= -1 && f.tau_hi() < kInf) r = r.with_prec(std::min(r.prec(), f.tau_hi()));
  if (f.tau_lo() < kInf) r = r.with_prec(std::min(r.prec(), f.tau_lo()));
  return r;
}

Series Ops::antiderivative(const Series& f) const {
  const Field* F = field();
  if (f.tau_lo() < kInf) fail(Err::PrecisionExhausted, "antiderivative of a series with an unknown negative tail");
  const int out = std::max(M_, f.hi());
  Series h = (f * dlog(out - std::min(f.lo(), 0) + 2)).truncate_hi(out);
  if (!h.coeff(-1).is_zero()) fail(Err::ResidueObstruction, "Res(f) is non-zero, f is not a derivative");
  const int lo = std::min(h.lo(), 0);
  Vec c;
  for (int k = lo; k < h.hi(); ++k) {
    if (k == -1) {
      c.push_back(F->zero());
      continue;
    }
    c.push_back(h.coeff(k).div_int(k + 1));
  }
  int tail = kInf;
  if (h.tau_hi() < kInf) tail = sat_add(h.tau_hi(), -floor_log((int64_t)F->p() * (h.hi() + 1), F->p()));
  return Series::from_coeffs(F, lo + 1, c, kInf, tail);
}

// ---- functions of nabla ----

Series Ops::nabla_fn(const Series& f, const std::function<FieldElem(int)>& mult) const {
  const Field* F = field();
  if (f.tau_lo() < kInf) fail(Err::PrecisionExhausted, "functions of nabla need a known negative part");
  const int H = f.high_exact() ? std::max(M_, f.hi()) : f.hi();
  const int L = H - std::min(f.lo(), 0) + 2;
  Series E = G_.exp(L);
  Series g = compose(f, E, H);
  Vec c;
  for (int e = g.lo(); e < g.hi(); ++e) {
    const FieldElem& x = g.coeffs()[e - g.lo()];
    c.push_back(x.is_exact_zero() ? x : x * mult(e));
  }
  int th = g.tau_hi();
  if (th < kInf) {
    // the multipliers on high exponents are bounded by their values on the window
    int mv = kInf;
    for (int e = g.hi(); e < g.hi() + 8; ++e) mv = std::min(mv, mult(e).val());
    th = sat_add(th, std::min(mv, 0));
  }
  Series s = Series::from_coeffs(F, g.lo(), c, kInf, th);
  return compose(s, G_.log(L), H);
}

Series Ops::divided_gamma(const FieldElem& chi, const Series& f, int shift) const {
  const Field* F = field();
  const FieldElem ell = F->plog_principal(chi);
  if (ell.is_zero()) fail(Err::OperatorDiverges, "log chi(g) = 0: g has finite order");
  return nabla_fn(f, [&](int e) {
    const int s = e + shift;
    if (s == 0) return -ell.inv();
    FieldElem den = F->one() - chi.pow(s);
    if (den.is_zero()) fail(Err::OperatorDiverges, "1 - chi^s vanishes");
    return F->integer(s) / den;
  });
}

Series Ops::theta_b(const GammaBasis& b, const Series& f, int shift) const {
  const Field* F = field();
  const int d = (int)b.chi.size();
  FieldElem c0 = b.ell_star;
  for (auto& l : b.ell) c0 = c0 / l;
  return nabla_fn(f, [&](int e) {
    const int s = e + shift;
    if (s == 0) return c0;
    FieldElem num = b.ell_star * F->integer(s).pow(d), den = F->one();
    for (auto& x : b.chi) den *= x.pow(s) - F->one();
    if (den.is_zero()) fail(Err::OperatorDiverges, "chi(b_i)^s = 1");
    return num / den;
  });
}

namespace {

// all a in [0, p^k)^d, applied as prod chi_i^a_i
template <class Fn>
void for_each_exponent(const GammaBasis& b, int p, int k, Fn fn) {
  const int d = (int)b.chi.size();
  int64_t pk = 1;
  for (int i = 0; i < k; ++i) pk *= p;
  std::vector<int64_t> a(d, 0);
  while (true) {
    FieldElem u = b.chi[0].field()->one();
    for (int i = 0; i < d; ++i) u *= b.chi[i].pow(a[i]);
    fn(u);
    int i = 0;
    while (i < d && ++a[i] == pk) a[i++] = 0;
    if (i == d) break;
  }
}

FieldElem finite_norm(const Field* F, const GammaBasis& b, int k) {
  FieldElem n = F->q_elem().pow(b.n);
  return n * F->integer(F->p()).pow((int64_t)k * (int64_t)b.chi.size());
}

}  // namespace

Series Ops::theta_b_finite(const GammaBasis& b, const Series& f, int k) const {
  const Field* F = field();
  Series acc = Series::zero(F);
  for_each_exponent(b, F->p(), k, [&](const FieldElem& u) { acc = acc + gamma(u, f); });
  return acc.scale(finite_norm(F, b, k).inv());
}

TowerElem Ops::theta_b_tower(const Tower& T, const GammaBasis& b, const TowerElem& x, int k) const {
  const Field* F = field();
  TowerElem acc = T.zero(x.level());
  for_each_exponent(b, F->p(), k, [&](const FieldElem& u) { acc += T.galois(u, x); });
  acc = acc * finite_norm(F, b, k).inv();
  // with k >= m the sum is the full trace and lands in F_n
  return x.level() > b.n && x.level() - b.n <= k ? T.descend(acc, b.n) : acc;
}

// ---- solvers ----

int Ops::cokernel_index(const FieldElem& a) const {
  const Field* F = field();
  if (a.is_zero()) return -1;
  FieldElem qa = a * F->q_elem();
  int m = qa.val();
  if (m < 1) return -1;
  return (qa / F->pi_pow(m)).equals(F->one()) ? m : -1;
}

Series Ops::cokernel_generator(int m) const { return partial(x0(), m - 1); }

FieldElem Ops::cokernel_functional(int m, const Series& f) const {
  // Res(t^(m-1) d^(m-1) x0) = (-1)^(m-1) (m-1)!
  const Field* F = field();
  Series tm = Series::constant(F->one());
  Series t = G_.log(std::max(M_, f.hi()) - std::min(f.lo(), 0) + 2);
  for (int i = 1; i < m; ++i) tm = tm * t;
  FieldElem norm = F->one();
  for (int i = 1; i < m; ++i) norm = norm.mul_int(-i);
  return res(f * tm) / norm;
}

Series Ops::psi_neumann(const Series& fin, const FieldElem& a) const {
  // g = -sum_k a^(-1-k) psi^k(fin)
  const FieldElem ai = a.inv();
  Series term = fin.scale(ai);
  Series g = -term;
  int target = std::min(fin.min_prec(), fin.vmin() + field()->kcap() - 2);
  for (int k = 0; k < 400; ++k) {
    term = psi(term).scale(ai);
    if (term.window_empty() && term.tau_hi() >= kInf && term.tau_lo() >= kInf) break;
    g = g - term;
    if (term.vmin() >= target) break;
  }
  return g;
}

Series Ops::psi_dense(const Series& fin, const FieldElem& a) const {
  const Field* F = field();
  const int L = std::min(fin.lo(), 0);
  const int H = std::max(M_, fin.hi());
  const int q = (int)F->q();
  Vec b;
  for (int e = L; e < H; ++e) b.push_back(fin.coeff(e));
  // square first; if that is inconsistent, columns above the window (which
  // psi moves down by a factor q) supply the missing directions
  for (int C : {H, q * H}) {
    Mat A(F, H - L, C - L);
    for (int j = L; j < C; ++j) {
      Series col = psi(Series::monomial(F->one(), j));
      if (j < H) col = col - Series::monomial(a, j);
      for (int e = std::max(L, col.lo()); e < std::min(H, col.hi()); ++e) A.at(e - L, j - L) = col.coeffs()[e - col.lo()];
    }
    SolveResult s = solve(A, b);
    if (s.consistent) return Series::from_coeffs(F, L, s.x);
  }
  fail(Err::Unsolvable, "(psi - a) g = f has no solution on the window");
}

Ops::PsiSolve Ops::solve_psi_minus_a(const Series& fin, const FieldElem& a, bool force_dense) const {
  const Field* F = field();
  PsiSolve r;
  r.obstruction = F->zero();
  Series f = fin;
  r.m = std::max(0, cokernel_index(a));
  if (r.m >= 1) {
    r.obstruction = cokernel_functional(r.m, fin);
    if (!r.obstruction.is_exact_zero()) f = fin - cokernel_generator(r.m).scale(r.obstruction);
  }
  r.neumann = !force_dense && a.val() <= -F->f();
  r.g = r.neumann ? psi_neumann(f, a) : psi_dense(f, a);
  return r;
}

Ops::PhiSolve Ops::solve_a_phi_minus_one(const Series& fin, const FieldElem& a) const {
  const Field* F = field();
  if (!fin.is_plus() || fin.start() < 0) fail(Err::DomainError, "(a phi - 1) is solved on plus series");
  PhiSolve r;
  if (a.is_zero()) {
    r.g = -fin;
    return r;
  }
  const int H = std::max(M_, fin.hi());
  const int q = (int)F->q();
  const FieldElem pi = F->pi();
  int m = -a.val();
  if (m >= 0 && (a * F->pi_pow(m)).equals(F->one())) r.m = m;
  Vec acc(H, F->zero()), W = {F->one()}, g(H, F->zero());
  for (int e = 0; e < H; ++e) {
    FieldElem rhs = fin.coeff(e) - acc[e];
    if (e == r.m) {
      if (!rhs.is_zero()) fail(Err::ImageObstruction, "d^m(f)(0) != 0 for a = pi^-m");
      r.kernel = true;
      g[e] = F->zero();
    } else {
      g[e] = rhs / (a * F->pi_pow(e) - F->one());
    }
    if (!g[e].is_exact_zero()) {
      FieldElem c = a * g[e];
      for (int i = e + 1; i < std::min<int>(H, (int)W.size()); ++i)
        if (!W[i].is_exact_zero()) acc[i] += c * W[i];
    }
    // W <- W * (T^q + pi T), truncated
    Vec nw(std::min<int>(H, (int)W.size() + q), F->zero());
    for (size_t i = 0; i < W.size(); ++i) {
      if (W[i].is_exact_zero()) continue;
      if ((int)(i + q) < H) nw[i + q] += W[i];
      if ((int)(i + 1) < H) nw[i + 1] += pi * W[i];
    }
    W = std::move(nw);
  }
  r.g = Series::from_coeffs(F, 0, g);
  if (r.kernel) {
    Series tm = Series::constant(F->one()), t = G_.log(H);
    for (int i = 0; i < r.m; ++i) tm = (tm * t).truncate_hi(H);
    r.kernel_basis = tm;
  }
  return r;
}

}  // namespace ltpg
