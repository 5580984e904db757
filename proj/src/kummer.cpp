#include "kummer.hpp"

#include <algorithm>

namespace ltpg {

namespace {

int tval(const TowerElem& x) {
  int v = kInf;
  for (auto& c : x.coords()) v = std::min(v, c.val());
  return v;
}

void require_q_ne_pi(const Field* F) {
  if ((F->q_elem() / F->pi()).val() == 0)
    fail(Err::UnsupportedBase, "q = pi: F = Q_p has no room for the Kummer interpolation");
}

// order for sum c_m x^m with v(c_m) >= -slope * m - 1 to reach W digits
int series_order(int W, int v, int d, double slope) {
  const double s = (double)v / d - slope;
  if (s <= 0) fail(Err::DomainError, "series does not converge at this point");
  return std::min(8192, (int)((W + 8) / s) + 4);
}

}  // namespace

TowerElem lt_log(const Tower& T, const TowerElem& x) {
  if (x.is_zero()) return x;
  const int v = x.val_d(), d = x.degree();
  if (v < 1) fail(Err::NotInMaximalIdeal, "log_LT needs x in the maximal ideal");
  // v(lambda_m) >= -log_q(m); a linear bound with slope 1/(2d) is safe for the orders used
  const int order = series_order(T.work_prec(), v, d, 1.0 / (2 * d));
  return T.eval_at(T.group().log(order), x);
}

TowerElem lt_exp(const Tower& T, const TowerElem& x) {
  if (x.is_zero()) return x;
  const Field* F = T.field();
  const int v = x.val_d(), d = x.degree();
  const double slope = 1.0 / (F->q() - 1);
  if ((double)v / d <= slope) fail(Err::DomainError, "exp_LT needs v(x) > 1/(q - 1)");
  const int order = series_order(T.work_prec(), v, d, slope);
  Series e = T.group().exp(order);
  // v(e_m) >= -(m - 1)/(q - 1); the tail bound makes eval_at account for the truncation
  e = e.with_tail_hi(order, -(int)((order - 1) * slope) - 1);
  return T.eval_at(e, x);
}

int s_relation_residual(const Tower& T, const TowerElem& x_next, const TowerElem& x) {
  const Field* F = T.field();
  const int n = x.level();
  TowerElem lhs = T.trace_lt(x_next, n);
  if (x.is_zero()) return tval(lhs);
  const int order = series_order(T.work_prec(), x.val_d(), x.degree(), 0.0);
  TowerElem rhs = T.eval_at(T.group().scalar(F->q_elem() / F->pi(), order), x);
  return tval(lhs - rhs);
}

SBuild build_s_from_point(const Tower& T, const TowerElem& z, int nmax) {
  const Field* F = T.field();
  require_q_ne_pi(F);
  const int k = z.level();
  if (k < 1 || k > nmax) fail(Err::InvalidArgument, "the point must live at a level 1 <= k <= nmax");
  SBuild out;
  if (z.is_zero()) {
    for (int n = 1; n <= nmax; ++n) {
      out.s.x.push_back(T.zero(n));
      out.y.push_back(T.zero(n));
    }
    out.relation.assign(nmax - 1, kInf);
    return out;
  }
  if (z.val_d() < 1) fail(Err::NotInMaximalIdeal, "z must lie in the maximal ideal");
  const TowerElem L = lt_log(T, z);
  out.ell2 = std::max(0, -tval(L));
  std::vector<TowerElem> y(nmax);
  y[k - 1] = L * F->pi_pow(out.ell2);
  for (int n = k; n < nmax; ++n) y[n] = T.trace_lift(y[n - 1]);
  const FieldElem pq = F->pi() / F->q_elem();
  for (int n = k; n >= 2; --n) y[n - 2] = T.trace(y[n - 1], n - 1) * pq;
  int minval = kInf;
  for (auto& e : y) minval = std::min(minval, tval(e));
  out.ell1 = std::max(1, 1 - minval);
  // [pi^ell](z) must also sit where log_LT is injective
  const Series pis = T.group().pi_series();
  TowerElem w = z;
  for (int i = 0; i < out.ell1 + out.ell2; ++i) w = T.eval_at(pis, w);
  const double bound = 1.0 / (F->q() - 1);
  while (!w.is_zero() && (double)w.val_d() / w.degree() <= bound) {
    ++out.ell1;
    w = T.eval_at(pis, w);
  }
  out.ell = out.ell1 + out.ell2;
  for (int n = 1; n <= nmax; ++n) {
    out.y.push_back(y[n - 1]);
    out.s.x.push_back(lt_exp(T, y[n - 1] * F->pi_pow(out.ell1)));
  }
  out.point_residual = tval(out.s.at(k) - w);
  for (int n = 1; n < nmax; ++n) out.relation.push_back(s_relation_residual(T, out.s.at(n + 1), out.s.at(n)));
  return out;
}

Interp interp_log(const LTGroup& G, const Tower& T, const std::vector<TowerElem>& ys, int window) {
  const Field* F = G.field();
  require_q_ne_pi(F);
  if (ys.empty()) fail(Err::InvalidArgument, "no values to interpolate");
  const int W = window, q = (int)F->q(), J = W / q;
  if (J < 1) fail(Err::Infeasible, "window too small for any psi constraint");
  Ops O(G, W);
  int rows = J + 1;
  for (size_t n = 1; n <= ys.size(); ++n) {
    if (ys[n - 1].level() != (int)n) fail(Err::LevelMismatch, "ys[n - 1] must live at level n");
    rows += T.degree((int)n);
  }
  if (rows > W) fail(Err::Infeasible, "window has fewer unknowns than constraints");
  Mat A(F, rows, W);
  Vec b(rows, F->zero());
  const FieldElem pinv = F->pi().inv();
  int r = 0;
  for (int i = 0; i < W; ++i) {
    Series ps = O.psi(Series::monomial(F->one(), i));
    for (int j = 0; j < std::min(J, ps.hi()); ++j) A.at(j, i) = ps.coeff(j);
    if (i < J) A.at(i, i) -= pinv;
  }
  r = J;
  for (size_t n = 1; n <= ys.size(); ++n) {
    const int d = T.degree((int)n);
    TowerElem up = T.one((int)n);
    for (int i = 0; i < W; ++i) {
      for (int c = 0; c < d; ++c) A.at(r + c, i) = up.coord(c);
      up = up.mul_u();
    }
    for (int c = 0; c < d; ++c) b[r + c] = ys[n - 1].coord(c);
    r += d;
  }
  // (1/pi) g(0) = (1/q) g(0) + (1/q) Tr_{F_1/F}(y_1)
  const FieldElem qi = F->q_elem().inv();
  Interp out;
  out.g0 = T.trace(ys[0], 0).coord(0) * qi / (pinv - qi);
  A.at(r, 0) = F->one();
  b[r] = out.g0;
  SolveResult s = solve(A, b);
  if (!s.consistent) fail(Err::Infeasible, "no polynomial of this degree meets the constraints");
  out.window = W;
  out.psi_rows = J;
  out.rank = s.rank;
  out.pivot_loss = s.pivot_loss;
  out.f = Series::from_coeffs(F, 0, s.x);
  out.psi_residual = (O.psi(out.f) - out.f.scale(pinv)).val_range(0, J);
  for (size_t n = 1; n <= ys.size(); ++n) out.eval_residual.push_back(tval(T.eval(out.f, (int)n) - ys[n - 1]));
  return out;
}

int interp_window(const Tower& T, int nmax, int at_least) {
  const int q = (int)T.field()->q();
  int rows = 1;
  for (int n = 1; n <= nmax; ++n) rows += T.degree(n);
  int W = std::max(at_least, q);
  W = (W + q - 1) / q * q;
  // W - W/q psi rows leave the evaluation rows; keep a margin of q free unknowns
  while (W - W / q < rows + q) W += q;
  return W;
}

SSeq torsion_shift(const Tower& T, const SSeq& x, int k, const TowerElem& z) {
  const Field* F = T.field();
  const FieldElem qp = F->q_elem() / F->pi();
  TowerElem zk = T.embed(z, k);
  if (!z.is_zero()) {
    const int order = series_order(T.work_prec(), z.val_d(), z.degree(), 0.0);
    if (tval(T.eval_at(T.group().scalar(qp, order), z)) < T.work_prec() - 4)
      fail(Err::InvalidArgument, "z is not a [q/pi]-torsion point");
  }
  SSeq out = x;
  // a torsion point of small valuation needs the group law to high total degree
  const int v = std::min(x.at(k).val_d(), zk.val_d()), d = zk.degree();
  const int deg = v >= kInf ? 1 : (T.work_prec() * d + v - 1) / v;
  out.x[k - 1] = T.lt_add(x.at(k), zk, std::max(32, deg));
  return out;
}

KummerReport kummer_shell(const LTGroup& G, const Tower& T, const SSeq& x, const Interp& in) {
  const Field* F = G.field();
  KummerReport rep;
  rep.zero = std::all_of(x.x.begin(), x.x.end(), [](const TowerElem& e) { return e.is_zero(); });
  const int q = (int)F->q(), J = in.psi_rows;
  // psi reads coefficient j of its input up to about q j + (q - 1) s; evaluating at
  // u_n costs one digit per d_n coefficients
  const int dn = x.nmax() > 0 ? T.degree(x.nmax()) : 1;
  Ops E(G, std::max(q * J + (q - 1) * (F->N() + 8), dn * (F->N() + 8)));
  const Series df = E.partial(in.f);
  rep.psi_residual = (E.psi(df) - df).val_range(0, std::max(0, J - 1));
  FPhiMod Dchi(E, {1, scale(identity(F, 1), F->pi().inv()), 1});
  FPhiMod D0(E, {1, identity(F, 1), 0});
  const FieldElem qp = F->q_elem() / F->pi();
  for (int n = 1; n <= x.nmax(); ++n) {
    const TowerElem lg = lt_log(T, x.at(n));
    rep.log_residual.push_back(tval(T.eval(in.f, n) - lg));
    // y = f (x) t^-1 e_1 with phi = pi^-1 on D_cris
    TowerElem rhs = dualexp_rhs(Dchi, T, {in.f}, n)[0];
    rep.ladder_residual.push_back(tval(rhs - lg * qp.pow(-n)));
    TowerElem a = partial_D(phi_inv_jet(D0, T, {df}, n, 0))[0];
    TowerElem b = phi_inv_jet(D0, T, {in.f}, n, 1).at(1)[0] * F->pi_pow(n);
    rep.jet_residual.push_back(tval(a - b));
  }
  return rep;
}

}  // namespace ltpg
