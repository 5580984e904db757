#include "phigamma.hpp"

#include <algorithm>

namespace ltpg {

namespace {

using SMat = std::vector<std::vector<Series>>;

bool is_constant(const Series& s) {
  return s.is_plus() && s.high_exact() && (s.window_empty() || (s.lo() >= 0 && s.end() <= 1));
}

int mat_val(const Mat& A) {
  int v = kInf;
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j) v = std::min(v, A.at(i, j).val());
  return v;
}

int floor_log_p(int64_t x, int p) {
  int k = 0;
  for (int64_t t = p; t <= x; t *= p) ++k;
  return k;
}

Mat mat_pow(Mat A, int64_t e) {
  if (e < 0) return mat_pow(inverse(A), -e);
  Mat R = identity(A.field(), A.rows());
  while (e) {
    if (e & 1) R = R * A;
    e >>= 1;
    if (e) A = A * A;
  }
  return R;
}

// log(A) for A = 1 mod pi^n0, by the series in A - 1.
Mat mat_log(const Mat& A) {
  const Field* F = A.field();
  const int n = A.rows();
  Mat X = A - identity(F, n), P = X, L(F, n, n);
  const int v = mat_val(X);
  if (v < 1) fail(Err::DomainError, "matrix logarithm needs A = 1 mod pi");
  for (int k = 1; k < 4 * F->kcap(); ++k) {
    Mat term = scale(P, F->integer(k % 2 ? 1 : -1).div_int(k));
    L = L + term;
    P = P * X;
    if (mat_val(P) - vp_int(k + 1, F->p()) >= F->kcap() + 2) break;
  }
  return L;
}

SMat smat_mul(const SMat& A, const SMat& B, int order) {
  const int n = (int)A.size(), m = (int)B[0].size(), K = (int)B.size();
  const Field* F = A[0][0].field();
  SMat C(n, std::vector<Series>(m, Series::zero(F)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < K; ++k) C[i][j] = (C[i][j] + (A[i][k] * B[k][j]).truncate_hi(order));
  return C;
}

Mat const_part(const SMat& A) {
  const int n = (int)A.size();
  Mat C(A[0][0].field(), n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) C.at(i, j) = A[i][j].coeff(0);
  return C;
}

SMat from_mat(const Mat& A) {
  SMat S(A.rows(), std::vector<Series>(A.cols()));
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j) S[i][j] = Series::constant(A.at(i, j));
  return S;
}

}  // namespace

// ---- element arithmetic ----

ModElem operator+(const ModElem& x, const ModElem& y) {
  ModElem r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
  return r;
}

ModElem operator-(const ModElem& x, const ModElem& y) {
  ModElem r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
  return r;
}

ModElem scale(const ModElem& x, const FieldElem& a) {
  ModElem r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = x[i].scale(a);
  return r;
}

ModElem truncate_hi(const ModElem& x, int n) {
  ModElem r(x.size());
  for (size_t i = 0; i < x.size(); ++i) r[i] = x[i].truncate_hi(n);
  return r;
}

int resval(const ModElem& x, const ModElem& y, int lo, int hi) { return resval(x - y, lo, hi); }

int resval(const ModElem& x, int lo, int hi) {
  int v = kInf;
  for (auto& s : x) v = std::min(v, s.val_range(lo, hi));
  return v;
}

// ---- modules ----

PhiGammaMod PhiGammaMod::twist(const Ops& O, int j, int rank) {
  if (rank < 1) fail(Err::InvalidArgument, "module rank must be >= 1");
  const Field* F = O.field();
  SMat P(rank, std::vector<Series>(rank, Series::zero(F)));
  for (int i = 0; i < rank; ++i) P[i][i] = Series::constant(F->one());
  return with_twists(O, std::move(P), std::vector<int>(rank, j));
}

PhiGammaMod PhiGammaMod::with_twists(const Ops& O, SMat P, std::vector<int> twists) {
  PhiGammaMod D;
  D.O_ = &O;
  D.r_ = (int)twists.size();
  if (D.r_ < 1 || (int)P.size() != D.r_) fail(Err::InvalidArgument, "phi matrix and twist list disagree in size");
  for (auto& row : P)
    if ((int)row.size() != D.r_) fail(Err::InvalidArgument, "phi matrix is not square");
  D.P_ = std::move(P);
  D.tw_ = std::move(twists);
  D.gb_ = ltpg::gamma_basis(O.field(), O.field()->n0());
  D.init_inverse();
  if (D.commutation_residual(D.gb_.chi) < O.field()->N())
    fail(Err::CommutationFailure, "phi matrix does not commute with the twist action");
  return D;
}

PhiGammaMod PhiGammaMod::with_matrices(const Ops& O, SMat P, const GammaBasis& b, std::vector<Mat> G) {
  PhiGammaMod D;
  D.O_ = &O;
  D.r_ = (int)P.size();
  if (D.r_ < 1 || G.size() != b.chi.size()) fail(Err::InvalidArgument, "one Gamma matrix per basis element is needed");
  for (auto& g : G)
    if (g.rows() != D.r_ || g.cols() != D.r_) fail(Err::InvalidArgument, "Gamma matrix has the wrong size");
  D.P_ = std::move(P);
  D.gb_ = b;
  D.G_ = std::move(G);
  D.init_inverse();
  if (D.commutation_residual({}) < O.field()->N())
    fail(Err::CommutationFailure, "Mat(g) g(Mat(phi)) != Mat(phi) phi(Mat(g))");
  return D;
}

void PhiGammaMod::init_inverse() {
  const Field* F = field();
  bool cst = true;
  for (auto& row : P_)
    for (auto& s : row) cst = cst && is_constant(s);
  Mat P0 = const_part(P_);
  Mat X;
  try {
    X = inverse(P0);
  } catch (const Error&) {
    fail(Err::NonInvertiblePhi, "the phi matrix is not invertible at precision");
  }
  if (cst) {
    Pinv_ = from_mat(X);
    return;
  }
  // Newton iteration X <- X (2 - P X), doubling the T-adic precision
  const int M = O_->M();
  SMat S = from_mat(X), two = from_mat(scale(identity(F, r_), F->integer(2)));
  for (int k = 1; k < 2 * M; k *= 2) {
    SMat PX = smat_mul(P_, S, M);
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < r_; ++j) PX[i][j] = two[i][j] - PX[i][j];
    S = smat_mul(S, PX, M);
  }
  Pinv_ = std::move(S);
}

ModElem PhiGammaMod::zero() const { return ModElem(r_, Series::zero(field())); }

ModElem PhiGammaMod::basis(int i, const Series& f) const {
  if (i < 0 || i >= r_) fail(Err::InvalidArgument, "basis index out of range");
  ModElem x = zero();
  x[i] = f;
  return x;
}

ModElem PhiGammaMod::phi(const ModElem& x) const {
  ModElem fx(r_), out = zero();
  for (int j = 0; j < r_; ++j) fx[j] = O_->phi(x[j]);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < r_; ++j) {
      if (P_[i][j].window_empty() && P_[i][j].high_exact() && P_[i][j].is_plus()) continue;
      const int H = std::max(O_->M(), fx[j].hi());
      out[i] = out[i] + (P_[i][j] * fx[j]).truncate_hi(H);
    }
  return out;
}

ModElem PhiGammaMod::psi(const ModElem& x) const {
  ModElem out = zero();
  for (int i = 0; i < r_; ++i) {
    Series s = Series::zero(field());
    for (int j = 0; j < r_; ++j) {
      if (Pinv_[i][j].window_empty() && Pinv_[i][j].high_exact() && Pinv_[i][j].is_plus()) continue;
      const int H = std::max(O_->M(), x[j].hi());
      s = s + (Pinv_[i][j] * x[j]).truncate_hi(H);
    }
    out[i] = O_->psi(s);
  }
  return out;
}

ModElem PhiGammaMod::gamma(const FieldElem& a, const ModElem& x) const {
  if (!is_twist()) fail(Err::DomainError, "gamma by a unit needs a twist module");
  ModElem out(r_);
  for (int i = 0; i < r_; ++i) out[i] = O_->gamma(a, x[i]).scale(a.pow(tw_[i]));
  return out;
}

Mat PhiGammaMod::gamma_matrix(const GammaBasis& b, const std::vector<int64_t>& k) const {
  const Field* F = field();
  const int p = F->p();
  Mat R = identity(F, r_);
  for (size_t i = 0; i < b.chi.size(); ++i) {
    if (k[i] == 0) continue;
    FieldElem c = gb_.chi[i];
    int e = 0;
    while (e < 40 && !c.equals(b.chi[i])) c = c.pow(p), ++e;
    if (e == 40) fail(Err::NotSubgroup, "basis is not a p-power of the module's Gamma basis");
    Mat A = mat_pow(G_[i], k[i]);
    for (int s = 0; s < e; ++s) A = mat_pow(A, p);
    R = R * A;
  }
  return R;
}

ModElem PhiGammaMod::gamma(const GammaBasis& b, const std::vector<int64_t>& k, const ModElem& x) const {
  if (k.size() != b.chi.size()) fail(Err::InvalidArgument, "exponent vector has the wrong length");
  FieldElem a = field()->one();
  for (size_t i = 0; i < k.size(); ++i)
    if (k[i] != 0) a *= b.chi[i].pow(k[i]);
  if (is_twist()) return gamma(a, x);
  Mat G = gamma_matrix(b, k);
  ModElem gx(r_), out = zero();
  for (int j = 0; j < r_; ++j) gx[j] = O_->gamma(a, x[j]);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < r_; ++j)
      if (!G.at(i, j).is_exact_zero()) out[i] = out[i] + gx[j].scale(G.at(i, j));
  return out;
}

Mat PhiGammaMod::nabla_matrix() const {
  const Field* F = field();
  if (is_twist()) {
    Mat N(F, r_, r_);
    for (int i = 0; i < r_; ++i) N.at(i, i) = F->integer(tw_[i]);
    return N;
  }
  if (N_.rows() == r_) return N_;
  // G_1^(p^m) close enough to 1 for the logarithm series
  Mat G = G_[0];
  FieldElem ell = gb_.ell[0];
  int m = 0;
  while (mat_val(G - identity(F, r_)) < F->n0()) {
    if (++m > 20) fail(Err::DomainError, "Gamma matrix is not close to a unipotent-free form");
    G = mat_pow(G, F->p());
    ell = ell.mul_int(F->p());
  }
  const_cast<Mat&>(N_) = scale(mat_log(G), ell.inv());
  return N_;
}

ModElem PhiGammaMod::nabla(const ModElem& x) const {
  ModElem out(r_);
  for (int i = 0; i < r_; ++i) out[i] = O_->nabla(x[i]);
  Mat N = nabla_matrix();
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < r_; ++j)
      if (!N.at(i, j).is_exact_zero()) out[i] = out[i] + x[j].scale(N.at(i, j));
  return out;
}

ModElem PhiGammaMod::nabla_i(const ModElem& x, int i) const { return nabla(x) - scale(x, field()->integer(i)); }

ModElem PhiGammaMod::nabla_fn(const ModElem& x, const std::function<FieldElem(int)>& mult) const {
  if (!is_twist()) fail(Err::DomainError, "functions of nabla are evaluated on twist modules");
  ModElem out(r_);
  for (int i = 0; i < r_; ++i) {
    const int j = tw_[i];
    out[i] = O_->nabla_fn(x[i], [&](int e) { return mult(e + j); });
  }
  return out;
}

int PhiGammaMod::commutation_residual(const std::vector<FieldElem>& units) const {
  const Field* F = field();
  const int M = O_->M();
  int v = kInf;
  auto check = [&](const Mat& G, const FieldElem& a) {
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < r_; ++j) {
        Series lhs = Series::zero(F), rhs = Series::zero(F);
        for (int k = 0; k < r_; ++k) {
          if (!G.at(i, k).is_exact_zero()) lhs = lhs + O_->gamma(a, P_[k][j]).scale(G.at(i, k));
          if (!G.at(k, j).is_exact_zero()) rhs = rhs + P_[i][k].scale(G.at(k, j));
        }
        v = std::min(v, (lhs - rhs).val_range(0, M));
      }
  };
  if (is_twist()) {
    for (auto& a : units) {
      Mat G(F, r_, r_);
      for (int i = 0; i < r_; ++i) G.at(i, i) = a.pow(tw_[i]);
      check(G, a);
    }
  } else {
    for (size_t i = 0; i < G_.size(); ++i) check(G_[i], gb_.chi[i]);
  }
  return v;
}

// ---- characters ----

WDelta char_w_delta(const GammaBasis& b, const std::vector<FieldElem>& delta) {
  if (delta.size() != b.chi.size()) fail(Err::InvalidArgument, "one character value per basis element is needed");
  const Field* F = b.chi[0].field();
  WDelta r;
  for (size_t i = 0; i < delta.size(); ++i) {
    if ((delta[i] - F->one()).val() < 1) fail(Err::DomainError, "delta(b_i) is not a principal unit");
    r.w.push_back(F->plog_principal(delta[i]) / b.ell[i]);
  }
  r.analytic = true;
  for (auto& w : r.w) r.analytic = r.analytic && w.equals(r.w[0]);
  return r;
}

// ---- psi = 1 ----

std::vector<ModElem> psi_fixed_solve(const PhiGammaMod& D, int count) {
  std::vector<ModElem> out;
  if (count <= 0) return out;
  const Field* F = D.field();
  const int r = D.rank(), M = D.ops().M();
  bool cst = true;
  for (auto& row : D.phi_matrix())
    for (auto& s : row) cst = cst && is_constant(s);
  if (cst) {
    // psi fixes a constant vector v iff P v = v
    Mat A = const_part(D.phi_matrix()) - identity(F, r);
    SolveResult s = solve(A, Vec(r, F->zero()), true);
    for (auto& v : s.kernel) {
      ModElem x = D.zero();
      for (int i = 0; i < r; ++i) x[i] = Series::constant(v[i]);
      out.push_back(x);
    }
  }
  // h = (1 - phi psi)(T^k e_c) has psi = 0; combinations with h(0) = 0 give
  // convergent sums sum_i phi^i(h)
  std::vector<ModElem> hs;
  for (int c = 0; c < r; ++c)
    for (int k = 1; k <= count && k < M; ++k) {
      ModElem x = D.basis(c, Series::monomial(F->one(), k));
      hs.push_back(truncate_hi(x - D.phi(D.psi(x)), M));
    }
  for (int c = 0; c < r; ++c) {
    int piv = -1;
    for (int i = 0; i < (int)hs.size(); ++i) {
      const FieldElem x = hs[i][c].coeff(0);
      if (x.is_zero()) continue;
      if (piv < 0 || x.val() < hs[piv][c].coeff(0).val()) piv = i;
    }
    if (piv < 0) continue;
    const ModElem h = hs[piv];
    const FieldElem inv = h[c].coeff(0).inv();
    hs.erase(hs.begin() + piv);
    for (auto& g : hs) {
      const FieldElem x = g[c].coeff(0);
      if (!x.is_exact_zero()) g = g - scale(h, x * inv);
    }
  }
  for (auto& h : hs) {
    for (auto& s : h) {
      // drop the constant term, which is zero at precision
      std::vector<FieldElem> cs;
      for (int e = 0; e < s.hi(); ++e) cs.push_back(e == 0 ? F->zero() : s.coeff(e));
      s = Series::from_coeffs(F, 0, cs, kInf, s.tau_hi());
    }
    int target = kInf;
    for (auto& s : h) target = std::min(target, s.min_prec());
    target = std::min(target, F->kcap() - 2);
    ModElem y = h, term = h;
    bool ok = false;
    std::vector<int> hist;
    for (int i = 0; i < 400; ++i) {
      term = truncate_hi(D.phi(term), M);
      y = y + term;
      const int v = resval(term, 0, M);
      if (v >= target) {
        ok = true;
        break;
      }
      hist.push_back(v);
      if (hist.size() > 16 && v <= hist[hist.size() - 17]) break;
    }
    if (ok) out.push_back(y);
  }
  return out;
}

// ---- cocycles ----

ModElem Cocycle::at(int j, int64_t k) const {
  if (j < 0 || j >= (int)b_.chi.size()) fail(Err::InvalidArgument, "generator index out of range");
  if (k == 0) return D_->zero();
  auto key = std::make_pair(j, k);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  return cache_[key] = gen_(j, k);
}

ModElem Cocycle::at(const std::vector<int64_t>& k) const {
  const int d = (int)b_.chi.size();
  if ((int)k.size() != d) fail(Err::InvalidArgument, "exponent vector has the wrong length");
  ModElem acc = at(d - 1, k[d - 1]);
  for (int i = d - 2; i >= 0; --i) {
    if (k[i] == 0) continue;
    std::vector<int64_t> ki(d, 0);
    ki[i] = k[i];
    acc = at(i, k[i]) + D_->gamma(b_, ki, acc);
  }
  return acc;
}

int Cocycle::relation_residual(const std::vector<int64_t>& g, const std::vector<int64_t>& h, int lo, int hi) const {
  ModElem ch = at(h), cg = at(g);
  ModElem lhs = D_->gamma(b_, g, ch) - ch;
  ModElem rhs = D_->gamma(b_, h, cg) - cg;
  return resval(lhs, rhs, lo, hi);
}

GammaBasis power_basis(const GammaBasis& b, int p) {
  GammaBasis r;
  r.n = b.n + 1;
  for (size_t i = 0; i < b.chi.size(); ++i) {
    r.chi.push_back(b.chi[i].pow(p));
    r.ell.push_back(b.ell[i].mul_int(p));
  }
  r.ell_star = b.ell_star;  // prod ell gains p^d = q, as does the index
  return r;
}

GammaBasis change_basis(const GammaBasis& b, const std::vector<std::vector<int64_t>>& E) {
  const int d = (int)b.chi.size();
  const Field* F = b.chi[0].field();
  if ((int)E.size() != d) fail(Err::InvalidArgument, "basis change matrix has the wrong size");
  Mat A(F, d, d);
  GammaBasis r;
  r.n = b.n;
  FieldElem prod = F->one();
  for (int i = 0; i < d; ++i) {
    if ((int)E[i].size() != d) fail(Err::InvalidArgument, "basis change matrix has the wrong size");
    FieldElem c = F->one(), l = F->zero();
    for (int j = 0; j < d; ++j) {
      c *= b.chi[j].pow(E[i][j]);
      l += b.ell[j].mul_int(E[i][j]);
      A.at(i, j) = F->integer(E[i][j]);
    }
    r.chi.push_back(c);
    r.ell.push_back(l);
    prod *= l;
  }
  if (!det(A).is_unit()) fail(Err::NotSubgroup, "basis change is not invertible over Z_p");
  r.ell_star = prod / F->q_elem().pow(b.n);
  return r;
}

Cocycle cocycle_cb(const PhiGammaMod& D, const ModElem& y, const GammaBasis& b) {
  if (!D.is_twist()) fail(Err::DomainError, "c_b(y) is evaluated on twist modules");
  const Field* F = D.field();
  const int d = (int)b.chi.size();
  return Cocycle(D, b, [&D, y, b, F, d](int j, int64_t k) {
    return D.nabla_fn(y, [&](int s) {
      if (s == 0) {
        FieldElem m = b.ell_star.mul_int(k);
        for (int i = 0; i < d; ++i)
          if (i != j) m = m / b.ell[i];
        return m;
      }
      const FieldElem cs = b.chi[j].pow(s);
      const FieldElem den = cs - F->one();
      if (den.is_zero()) fail(Err::OperatorDiverges, "chi(b_j)^s = 1");
      FieldElem m = b.ell_star * (cs.pow(k) - F->one()) / den * F->integer(s).pow(d - 1);
      for (int i = 0; i < d; ++i) {
        if (i == j) continue;
        const FieldElem di = b.chi[i].pow(s) - F->one();
        if (di.is_zero()) fail(Err::OperatorDiverges, "chi(b_i)^s = 1");
        m = m / di;
      }
      return m;
    });
  });
}

ModElem cocycle_derivative(const Cocycle& c, int j, int K) {
  const Field* F = c.module().field();
  int64_t k = 1;
  for (int i = 0; i < K; ++i) {
    if (k > (int64_t(1) << 62) / F->p()) fail(Err::InvalidArgument, "p^K does not fit in 64 bits");
    k *= F->p();
  }
  return scale(c.at(j, k), (c.basis().ell[j] * F->integer(k)).inv());
}

ModElem theta_b(const PhiGammaMod& D, const GammaBasis& b, const ModElem& y) {
  if (!D.is_twist()) fail(Err::DomainError, "Theta_b is evaluated on twist modules");
  ModElem out(D.rank());
  for (int i = 0; i < D.rank(); ++i) out[i] = D.ops().theta_b(b, y[i], D.twists()[i]);
  return out;
}

namespace {

// Linear systems in the coefficients of T^e e_c, e in [L, H), column c * (H - L) + e - L.
struct Dense {
  Mat A;
  Vec b;
};

int col_lo(const std::vector<ModElem>& rhs) {
  int L = 0;
  for (auto& x : rhs)
    for (auto& s : x) L = std::min(L, s.window_empty() ? 0 : s.start());
  return L;
}

Dense stack(const std::vector<const Dense*>& parts) {
  int rows = 0;
  for (auto* d : parts) rows += d->A.rows();
  const Mat& A0 = parts[0]->A;
  Dense S{Mat(A0.field(), rows, A0.cols()), {}};
  int r0 = 0;
  for (auto* d : parts) {
    for (int i = 0; i < d->A.rows(); ++i)
      for (int j = 0; j < d->A.cols(); ++j) S.A.at(r0 + i, j) = d->A.at(i, j);
    S.b.insert(S.b.end(), d->b.begin(), d->b.end());
    r0 += d->A.rows();
  }
  return S;
}

// (g - 1) m = rhs_g for the listed group elements, rows [L, H).
Dense gamma_rows(const PhiGammaMod& D, const GammaBasis& b, const std::vector<std::vector<int64_t>>& gens,
                 const std::vector<ModElem>& rhs, int L, int H) {
  const Field* F = D.field();
  const int r = D.rank(), W = H - L, ng = (int)gens.size();
  Dense S{Mat(F, ng * r * W, r * W), {}};
  for (int g = 0; g < ng; ++g)
    for (int c = 0; c < r; ++c)
      for (int e = L; e < H; ++e) S.b.push_back(rhs[g][c].coeff(e));
  auto put = [&](int g, int c, int e, const ModElem& y) {
    for (int i = 0; i < r; ++i)
      for (int k = std::max(L, y[i].lo()); k < std::min(H, y[i].hi()); ++k)
        S.A.at(g * r * W + i * W + (k - L), c * W + (e - L)) = y[i].coeff(k);
  };
  for (int g = 0; g < ng; ++g) {
    if (D.is_twist()) {
      // powers of [a](T) built incrementally
      FieldElem a = F->one();
      for (size_t i = 0; i < gens[g].size(); ++i)
        if (gens[g][i] != 0) a *= b.chi[i].pow(gens[g][i]);
      const Series S1 = D.ops().group().scalar(a, H).with_tail_hi(H, 0);
      Series P = L < 0 ? power(S1, L, H) : Series::constant(F->one());
      for (int e = L; e < H; ++e) {
        for (int c = 0; c < r; ++c) {
          ModElem y = D.zero();
          y[c] = P.scale(a.pow(D.twists()[c])) - Series::monomial(F->one(), e);
          put(g, c, e, y);
        }
        P = (P * S1).truncate_hi(H);
      }
    } else {
      for (int c = 0; c < r; ++c)
        for (int e = L; e < H; ++e) {
          ModElem x = D.basis(c, Series::monomial(F->one(), e));
          put(g, c, e, D.gamma(b, gens[g], x) - x);
        }
    }
  }
  return S;
}

// psi(m) = 0 on rows k < R.  psi of the coefficients at and above H reaches row k
// with about (H - q k) / (q - 1) digits on top of v(m); vm is a guess for v(m).
Dense psi_rows(const PhiGammaMod& D, int L, int H, int R, int vm) {
  const Field* F = D.field();
  const int r = D.rank(), W = H - L, q = (int)F->q();
  Dense S{Mat(F, r * R, r * W), {}};
  for (int c = 0; c < r; ++c)
    for (int e = L; e < H; ++e) {
      ModElem y = D.psi(D.basis(c, Series::monomial(F->one(), e)));
      for (int i = 0; i < r; ++i)
        for (int k = 0; k < R; ++k) S.A.at(i * R + k, c * W + (e - L)) = y[i].coeff(k);
    }
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < R; ++k) S.b.push_back(F->zero(std::max(1, (H - q * k + q - 2) / (q - 1) + vm)));
  return S;
}

// The t^(-j) coefficient of each coordinate of a twist-j module vanishes
// (coordinates with j > 0 have no such term and get no row).
Dense kernel_rows(const PhiGammaMod& D, int L, int H) {
  const Field* F = D.field();
  const int r = D.rank(), W = H - L;
  std::vector<int> cs;
  for (int c = 0; c < r; ++c)
    if (D.twists()[c] <= 0 && -D.twists()[c] < H) cs.push_back(c);
  Dense S{Mat(F, (int)cs.size(), r * W), Vec(cs.size(), F->zero())};
  if (cs.empty()) return S;
  int kmax = 0;
  for (int c : cs) kmax = std::max(kmax, -D.twists()[c]);
  const int order = kmax + 1 - std::min(L, 0);
  const Series E = D.ops().group().exp(order + 1);
  Series P = L < 0 ? power(E, L, order) : Series::constant(F->one());
  for (int e = L; e < std::min(H, kmax + 1); ++e) {
    for (int i = 0; i < (int)cs.size(); ++i) S.A.at(i, cs[i] * W + (e - L)) = P.coeff(-D.twists()[cs[i]]);
    P = (P * E).truncate_hi(order);
  }
  return S;
}

// Twist modules: (g - 1) keeps each coordinate and is lower triangular in T, with
// diagonal chi^(e + j) - 1.  The column with e + j = 0 is fixed by the kernel row.
Vec forward_solve(const PhiGammaMod& D, const Dense& G, const Dense& K, int L, int H) {
  const Field* F = D.field();
  const int W = H - L;
  Vec x(D.rank() * W, F->zero());
  int krow = 0;
  for (int c = 0; c < D.rank(); ++c) {
    const int j = D.twists()[c];
    const int row0 = c * W, col0 = c * W;
    const bool has_k = j <= 0 && -j < H;
    for (int e = L; e < H; ++e) {
      const int col = col0 + e - L;
      if (has_k && e == -j) continue;
      FieldElem acc = G.b[row0 + e - L];
      for (int e2 = L; e2 < e; ++e2)
        if (!G.A.at(row0 + e - L, col0 + e2 - L).is_exact_zero()) acc -= G.A.at(row0 + e - L, col0 + e2 - L) * x[col0 + e2 - L];
      const FieldElem& dg = G.A.at(row0 + e - L, col);
      if (dg.is_zero()) fail(Err::Singular, "zero diagonal in the Gamma system");
      x[col] = acc / dg;
      if (has_k && e + 1 == -j) {
        // kernel row: sum_e K_e x_e = 0, with K = 1 on the column e = -j
        FieldElem s = F->zero();
        for (int e2 = L; e2 < -j; ++e2)
          if (!K.A.at(krow, col0 + e2 - L).is_exact_zero()) s -= K.A.at(krow, col0 + e2 - L) * x[col0 + e2 - L];
        x[col0 - j - L] = s;
      }
    }
    if (has_k && -j == L) x[col0] = F->zero();
    if (has_k) ++krow;
  }
  return x;
}

ModElem unpack(const PhiGammaMod& D, const Vec& x, int L, int H) {
  const int W = H - L;
  ModElem m = D.zero();
  for (int c = 0; c < D.rank(); ++c) m[c] = Series::from_coeffs(D.field(), L, Vec(x.begin() + c * W, x.begin() + (c + 1) * W));
  return m;
}

std::vector<std::vector<int64_t>> unit_vectors(int d) {
  std::vector<std::vector<int64_t>> g(d, std::vector<int64_t>(d, 0));
  for (int i = 0; i < d; ++i) g[i][i] = 1;
  return g;
}

}  // namespace

McSolve solve_mc(const Cocycle& c) {
  const PhiGammaMod& D = c.module();
  const Field* F = D.field();
  const int d = (int)c.basis().chi.size(), q = (int)F->q();
  const int H = D.ops().M();
  std::vector<ModElem> rhs;
  int vr = kInf;
  for (int j = 0; j < d; ++j) {
    ModElem x = c.at(j, 1);
    rhs.push_back(truncate_hi(D.phi(x) - x, H));
    vr = std::min(vr, resval(rhs.back(), 0, H));
  }
  const int L = col_lo(rhs);
  const int R = std::max(1, (H - (q - 1) * F->N()) / q);
  Dense G = gamma_rows(D, c.basis(), unit_vectors(d), rhs, L, H);
  // dividing by chi^e - 1 costs up to n + v_p(e) digits per generator
  const int vm = std::min(vr, 0) - d * (c.basis().n + floor_log_p(H, F->p()));
  Dense P = psi_rows(D, L, H, R, vm);
  McSolve r;
  r.unknowns = G.A.cols();
  // injectivity of (g - 1) on the psi = 0 part of the window
  r.rank = rank(stack({&G, &P}).A);
  r.unique = r.rank == r.unknowns;
  if (!r.unique) fail(Err::Singular, "(g - 1) is not injective on the psi = 0 window");
  // On the truncated window the psi rows see only part of m, so the remaining
  // direction is fixed by the eigen-component that psi = 0 forces to vanish.
  Vec x;
  if (D.is_twist()) {
    Dense G1 = gamma_rows(D, c.basis(), {unit_vectors(d)[0]}, {rhs[0]}, L, H);
    x = forward_solve(D, G1, kernel_rows(D, L, H), L, H);
    r.consistent = true;
    for (int i = 0; i < G.A.rows(); ++i) {
      FieldElem acc = G.b[i];
      for (int j = 0; j < G.A.cols(); ++j)
        if (!G.A.at(i, j).is_exact_zero()) acc -= G.A.at(i, j) * x[j];
      if (!acc.is_zero()) r.consistent = false;
    }
  } else {
    Dense S = stack({&G, &P});
    SolveResult s = solve(S.A, S.b);
    r.consistent = s.consistent;
    x = s.x;
  }
  if (!r.consistent) fail(Err::Unsolvable, "no m_c on the window");
  r.m = unpack(D, x, L, H);
  return r;
}

Cocycle corestrict(const Cocycle& c, const GammaBasis& b, const std::vector<int>& e) {
  const int d = (int)b.chi.size();
  const Field* F = c.module().field();
  const int p = F->p();
  if ((int)e.size() != d || (int)c.basis().chi.size() != d) fail(Err::InvalidArgument, "exponent list has the wrong length");
  std::vector<int64_t> pe(d, 1);
  for (int i = 0; i < d; ++i) {
    if (e[i] < 0 || e[i] > 20) fail(Err::InvalidArgument, "index exponents must lie in [0, 20]");
    for (int s = 0; s < e[i]; ++s) pe[i] *= p;
    if (!b.chi[i].pow(pe[i]).equals(c.basis().chi[i])) fail(Err::NotSubgroup, "source basis is not b^(p^e)");
  }
  const PhiGammaMod* D = &c.module();
  return Cocycle(*D, b, [c, b, pe, d, D](int j, int64_t k) {
    // sum over coset representatives b^r, 0 <= r_i < p^e_i
    ModElem acc = D->zero();
    std::vector<int64_t> r(d, 0);
    while (true) {
      const int64_t s = r[j] + k;
      const int64_t qt = s >= 0 ? s / pe[j] : -((-s + pe[j] - 1) / pe[j]);
      if (qt != 0) {
        std::vector<int64_t> rep = r;
        rep[j] = s - qt * pe[j];
        acc = acc + D->gamma(b, rep, c.at(j, qt));
      }
      int i = 0;
      while (i < d && ++r[i] == pe[i]) r[i++] = 0;
      if (i == d) break;
    }
    return acc;
  });
}

Cocycle restrict_to(const Cocycle& c, const std::vector<int>& e) {
  const GammaBasis& b = c.basis();
  const int d = (int)b.chi.size();
  const int p = c.module().field()->p();
  if ((int)e.size() != d) fail(Err::InvalidArgument, "exponent list has the wrong length");
  GammaBasis a;
  std::vector<int64_t> pe(d, 1);
  int emin = e[0];
  for (int i = 0; i < d; ++i) {
    for (int s = 0; s < e[i]; ++s) pe[i] *= p;
    a.chi.push_back(b.chi[i].pow(pe[i]));
    a.ell.push_back(b.ell[i].mul_int(pe[i]));
    emin = std::min(emin, e[i]);
  }
  a.n = b.n + emin;
  a.ell_star = b.ell_star;  // prod ell and the index both gain p^(sum e)
  return Cocycle(c.module(), a, [c, pe](int j, int64_t k) { return c.at(j, k * pe[j]); });
}

ModElem coboundary(const Cocycle& x, const Cocycle& y, const std::vector<std::vector<int64_t>>& E) {
  const PhiGammaMod& D = x.module();
  const int d = (int)x.basis().chi.size();
  if ((int)E.size() != d) fail(Err::InvalidArgument, "basis change matrix has the wrong size");
  const int H = D.ops().M();
  std::vector<ModElem> rhs;
  for (int i = 0; i < d; ++i) rhs.push_back(truncate_hi(x.at(i, 1) - y.at(E[i]), H));
  const int L = col_lo(rhs);
  Dense S = gamma_rows(D, y.basis(), E, rhs, L, H);
  SolveResult s = solve(S.A, S.b);
  if (!s.consistent) fail(Err::Unsolvable, "x - y is not a coboundary on the window");
  return unpack(D, s.x, L, H);
}

ModElem cocycle_T(const PhiGammaMod& D, const ModElem& f_phi) { return scale(D.psi(f_phi), D.field()->integer(-1)); }

ModElem cocycle_U(const PhiGammaMod& D, const ModElem& f_psi, const ModElem& m_f) {
  return m_f - D.phi(f_psi);
}

}  // namespace ltpg
