#include "bigexp.hpp"

#include <numeric>

namespace ltpg {

namespace {

PhiGammaMod make_module(const Ops& O, const FPhiModData& d) {
  if (d.dim < 1 || d.phi.rows() != d.dim || d.phi.cols() != d.dim)
    fail(Err::InvalidArgument, "phi matrix must be dim x dim");
  if (d.h < 0) fail(Err::InvalidArgument, "filtration bound h must be >= 0");
  std::vector<std::vector<Series>> P(d.dim);
  for (int i = 0; i < d.dim; ++i)
    for (int j = 0; j < d.dim; ++j) P[i].push_back(Series::constant(d.phi.at(i, j)));
  return PhiGammaMod::with_twists(O, std::move(P), std::vector<int>(d.dim, 0));
}

// Lower convex hull of (i, v(c_i)); one (num, den) per root.
std::vector<std::pair<int, int>> newton_slopes(const Vec& c) {
  std::vector<std::pair<int, int>> pts, hull, out;
  for (int i = 0; i < (int)c.size(); ++i)
    if (!c[i].is_zero()) pts.push_back({i, c[i].val()});
  for (auto& pt : pts) {
    while (hull.size() >= 2) {
      auto [x1, y1] = hull[hull.size() - 2];
      auto [x2, y2] = hull.back();
      // drop the middle point when it lies on or above the chord
      if ((int64_t)(y2 - y1) * (pt.first - x1) >= (int64_t)(pt.second - y1) * (x2 - x1))
        hull.pop_back();
      else
        break;
    }
    hull.push_back(pt);
  }
  for (size_t s = 1; s < hull.size(); ++s) {
    int num = -(hull[s].second - hull[s - 1].second), den = hull[s].first - hull[s - 1].first;
    const int g = std::gcd(std::abs(num), den);
    for (int k = 0; k < den; ++k) out.push_back({num / g, den / g});
  }
  return out;
}

Series drop_below(const Series& s, int n) {
  const Field* F = s.field();
  if (s.lo() >= n) return s;
  std::vector<FieldElem> c;
  for (int e = n; e < s.hi(); ++e) c.push_back(s.coeff(e));
  return Series::from_coeffs(F, n, c, kInf, s.tau_hi());
}

FieldElem factorial(const Field* F, int k) {
  FieldElem x = F->one();
  for (int i = 2; i <= k; ++i) x = x.mul_int(i);
  return x;
}

}  // namespace

Vec charpoly(const Mat& A) {
  // Faddeev-LeVerrier
  const Field* F = A.field();
  const int n = A.rows();
  Vec c(n + 1, F->zero());
  c[n] = F->one();
  Mat Mk(F, n, n);
  for (int k = 1; k <= n; ++k) {
    Mat AM = A * Mk;
    Mk = AM + scale(identity(F, n), c[n - k + 1]);
    Mat AMk = A * Mk;
    FieldElem tr = F->zero();
    for (int i = 0; i < n; ++i) tr += AMk.at(i, i);
    c[n - k] = -tr.div_int(k);
  }
  return c;
}

FPhiMod::FPhiMod(const Ops& O, FPhiModData d) : d_(std::move(d)), D_(make_module(O, d_)) {
  if (det(d_.phi).is_zero()) fail(Err::NonInvertiblePhi, "phi is not invertible on D");
  inv_ = inverse(d_.phi);
  slopes_ = newton_slopes(charpoly(d_.phi));
}

Mat FPhiMod::phi_pow(int k) const {
  Mat R = identity(field(), d_.dim);
  const Mat& B = k >= 0 ? d_.phi : inv_;
  for (int i = 0; i < std::abs(k); ++i) R = R * B;
  return R;
}

bool FPhiMod::slopes_bounded(int h) const {
  for (auto [num, den] : slopes_)
    if (num < -h * den) return false;
  return true;
}

FPhiModData FPhiMod::twisted(int j) const {
  return {d_.dim, scale(d_.phi, field()->pi_pow(-j)), d_.h + j};
}

std::vector<Vec> t_jet_at_zero(const FPhiMod& D, const ModElem& f, int K) {
  const Field* F = D.field();
  const Series E = D.ops().group().exp(std::max(K + 1, 2));
  std::vector<Vec> out(K + 1, Vec(D.dim(), F->zero()));
  for (int i = 0; i < D.dim(); ++i) {
    if (!f[i].is_plus() || f[i].start() < 0) fail(Err::DomainError, "the t-expansion at 0 needs a plus series");
    Series g = compose(f[i].truncate_hi(K + 1), E, K + 1);
    for (int k = 0; k <= K; ++k) out[k][i] = g.coeff(k) * factorial(F, k);
  }
  return out;
}

std::vector<DeltaComponent> delta_map(const FPhiMod& D, const ModElem& f, int h) {
  const Field* F = D.field();
  const int r = D.dim();
  std::vector<Vec> jet = t_jet_at_zero(D, f, h);
  std::vector<DeltaComponent> out;
  for (int k = 0; k <= h; ++k) {
    DeltaComponent c;
    c.k = k;
    c.value = jet[k];
    Mat A = identity(F, r) - scale(D.phi(), F->pi_pow(k));
    Mat At(F, r, r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) At.at(i, j) = A.at(j, i);
    c.functionals = solve(At, Vec(r, F->zero()), true).kernel;
    for (auto& w : c.functionals) {
      FieldElem s = F->zero();
      for (int i = 0; i < r; ++i) s += w[i] * c.value[i];
      c.cls.push_back(s);
      c.zero = c.zero && s.is_zero();
    }
    out.push_back(std::move(c));
  }
  return out;
}

ColcolSolution solve_one_minus_phi(const FPhiMod& D, const ModElem& f, int h) {
  const Field* F = D.field();
  const Ops& O = D.ops();
  const PhiGammaMod& Dm = D.module();
  const int r = D.dim(), M = O.M();
  if (!D.slopes_bounded(h)) fail(Err::DomainError, "phi has a slope below -h; 1 - phi is not bijective on T^(h+1)");
  ColcolSolution s;
  s.f = f;
  s.h = h;
  std::vector<Vec> jet = t_jet_at_zero(D, f, h);
  const Series t = O.t();
  Series tk = Series::constant(F->one());
  ModElem poly = Dm.zero(), fk_part = Dm.zero();
  for (int k = 0; k <= h; ++k) {
    if (k > 0) tk = (tk * t).truncate_hi(M);
    const FieldElem kf = factorial(F, k).inv();
    Vec fk(r);
    for (int i = 0; i < r; ++i) fk[i] = jet[k][i] * kf;
    Mat A = identity(F, r) - scale(D.phi(), F->pi_pow(k));
    SolveResult sr = solve(A, fk, true);
    if (!sr.consistent)
      fail(Err::ObstructionNonzero, "Delta(f) is non-zero in degree " + std::to_string(k));
    for (auto& v : sr.kernel) {
      s.kernel.push_back({k, v});
      s.ambiguous = true;
      if (k == h) s.omega_ambiguous = true;
    }
    s.Y.push_back(sr.x);
    for (int i = 0; i < r; ++i) {
      poly[i] = poly[i] + tk.scale(sr.x[i]);
      fk_part[i] = fk_part[i] + tk.scale(fk[i]);
    }
  }
  // the tail f - sum f_k t^k vanishes to order h + 1
  ModElem tail = f - fk_part;
  int target = F->kcap() - 2;
  for (auto& x : tail) {
    x = drop_below(x.truncate_hi(M), h + 1);
    target = std::min(target, x.min_prec());
  }
  ModElem P = tail, term = tail;
  std::vector<int> hist;
  bool ok = resval(term, 0, M) >= target;
  while (!ok) {
    term = truncate_hi(Dm.phi(term), M);
    P = P + term;
    ++s.iterations;
    const int v = resval(term, 0, M);
    if (v >= target) {
      ok = true;
      break;
    }
    hist.push_back(v);
    if (hist.size() > 16 && v <= hist[hist.size() - 17])
      fail(Err::OperatorDiverges, "sum of phi^i on the T^(h+1) part does not converge");
  }
  s.y = poly + P;
  s.residual = resval(s.y - truncate_hi(Dm.phi(s.y), M), truncate_hi(f, M), 0, M);
  return s;
}

ModElem omega(const FPhiMod& D, const ColcolSolution& s) {
  ModElem x = s.y;
  for (int i = 0; i < s.h; ++i) x = D.module().nabla_i(x, i);
  return x;
}

ModElem omega_vh(const FPhiMod& D, const ModElem& f, int h) { return omega(D, solve_one_minus_phi(D, f, h)); }

std::vector<TowerElem> apply_mat(const Mat& A, const std::vector<TowerElem>& x) {
  std::vector<TowerElem> out;
  for (int i = 0; i < A.rows(); ++i) {
    TowerElem acc = x[0] * A.at(i, 0);
    for (int j = 1; j < A.cols(); ++j) acc += x[j] * A.at(i, j);
    out.push_back(acc);
  }
  return out;
}

namespace {

void check_order(int order, int pole) {
  if (order < -pole) fail(Err::InvalidArgument, "jet order below the pole");
  if (order + pole > kJetBound) fail(Err::JetOrderExceeded, "jet order exceeds the configured bound");
}

// c_k = pi^(n pole) / (k! pi^(n k)) phi^-n Z_k
Jet finish_jet(const FPhiMod& D, int n, int order, int pole, const std::vector<std::vector<TowerElem>>& Z) {
  const Field* F = D.field();
  const Mat Pn = D.phi_pow(-n);
  Jet j;
  j.n = n;
  j.lo = -pole;
  j.order = order;
  for (int k = 0; k <= order + pole; ++k) {
    const FieldElem c = F->pi_pow(n * (pole - k)) / factorial(F, k);
    std::vector<TowerElem> v = apply_mat(Pn, Z[k]);
    for (auto& x : v) x = x * c;
    j.c.push_back(std::move(v));
  }
  return j;
}

}  // namespace

Jet phi_inv_jet(const FPhiMod& D, const Tower& T, const ModElem& g, int n, int order, int pole) {
  check_order(order, pole);
  const Ops& O = D.ops();
  std::vector<std::vector<TowerElem>> Z;
  for (int k = 0; k <= order + pole; ++k) {
    std::vector<TowerElem> z;
    for (auto& gi : g) z.push_back(T.eval(k == 0 ? gi : O.partial(gi, k), n));
    Z.push_back(std::move(z));
  }
  return finish_jet(D, n, order, pole, Z);
}

Jet phi_inv_jet(const FPhiMod& D, const Tower& T, const ColcolSolution& s, int n, int order, const Ops* E) {
  check_order(order, 0);
  const Field* F = D.field();
  const Ops& O = E ? *E : D.ops();
  std::vector<Vec> y0 = t_jet_at_zero(D, s.y, order);
  std::vector<std::vector<TowerElem>> Z;
  for (int k = 0; k <= order; ++k) {
    const Mat A = scale(D.phi(), F->pi_pow(k));
    std::vector<Series> dk;
    for (auto& fi : s.f) dk.push_back(k == 0 ? fi : O.partial(fi, k));
    std::vector<TowerElem> z;
    for (auto& c : y0[k]) z.push_back(T.constant(c, n));
    // Z_m = d^k f(u_m) + A Z_(m-1)
    for (int m = 1; m <= n; ++m) {
      std::vector<TowerElem> prev = apply_mat(A, z), next;
      for (int i = 0; i < D.dim(); ++i) next.push_back(T.embed(T.eval(dk[i], m), n) + prev[i]);
      z = std::move(next);
    }
    Z.push_back(std::move(z));
  }
  return finish_jet(D, n, order, 0, Z);
}

std::vector<TowerElem> partial_D(const Jet& j) {
  if (j.order < 0 || j.lo > 0) fail(Err::PoleUncancelled, "the jet does not reach t^0");
  return j.at(0);
}

namespace {

std::vector<TowerElem> rhs_from(const FPhiMod& D, const std::vector<TowerElem>& v, int n) {
  const Field* F = D.field();
  if (n >= 1) {
    std::vector<TowerElem> out;
    const FieldElem c = F->q_elem().pow(-n);
    for (auto& x : v) out.push_back(x * c);
    return out;
  }
  std::vector<TowerElem> w = apply_mat(scale(D.phi_pow(-1), F->q_elem().inv()), v), out;
  for (int i = 0; i < D.dim(); ++i) out.push_back(v[i] - w[i]);
  return out;
}

}  // namespace

std::vector<TowerElem> dualexp_rhs(const FPhiMod& D, const Tower& T, const ModElem& y, int n, int pole) {
  return rhs_from(D, partial_D(phi_inv_jet(D, T, y, n, 0, pole)), n);
}

std::vector<TowerElem> dualexp_rhs(const FPhiMod& D, const Tower& T, const ColcolSolution& s, int n) {
  return rhs_from(D, partial_D(phi_inv_jet(D, T, s, n, 0)), n);
}

Series antiderivative(const Ops& O, const Series& f, int j) {
  if (j < 0) fail(Err::InvalidArgument, "antiderivative order must be >= 0");
  Series g = f;
  for (int i = 0; i < j; ++i) g = O.antiderivative(g);
  return g;
}

ModElem antiderivative(const Ops& O, const ModElem& f, int j) {
  ModElem out;
  for (auto& x : f) out.push_back(antiderivative(O, x, j));
  return out;
}

}  // namespace ltpg
