#include "field.hpp"

#include <algorithm>
#include <sstream>

namespace ltpg {

const char* err_name(Err e) {
  switch (e) {
    case Err::Ok: return "Ok";
    case Err::InvOfZero: return "InvOfZero";
    case Err::PrecisionExhausted: return "PrecisionExhausted";
    case Err::DomainError: return "DomainError";
    case Err::EmptyWindow: return "EmptyWindow";
    case Err::CompositionDomain: return "CompositionDomain";
    case Err::NotReversible: return "NotReversible";
    case Err::NonIntegralScalar: return "NonIntegralScalar";
    case Err::DegreeBudgetExceeded: return "DegreeBudgetExceeded";
    case Err::InvOfNonUnit: return "InvOfNonUnit";
    case Err::LevelMismatch: return "LevelMismatch";
    case Err::NonUnitScalar: return "NonUnitScalar";
    case Err::NotInMaximalIdeal: return "NotInMaximalIdeal";
    case Err::Unsolvable: return "Unsolvable";
    case Err::OperatorDiverges: return "OperatorDiverges";
    case Err::ObstructedExactly: return "ObstructedExactly";
    case Err::ImageObstruction: return "ImageObstruction";
    case Err::WindowTooSmall: return "WindowTooSmall";
    case Err::NonInvertiblePhi: return "NonInvertiblePhi";
    case Err::CommutationFailure: return "CommutationFailure";
    case Err::NotSubgroup: return "NotSubgroup";
    case Err::Singular: return "Singular";
    case Err::ObstructionNonzero: return "ObstructionNonzero";
    case Err::KernelAmbiguity: return "KernelAmbiguity";
    case Err::JetOrderExceeded: return "JetOrderExceeded";
    case Err::PoleUncancelled: return "PoleUncancelled";
    case Err::ResidueObstruction: return "ResidueObstruction";
    case Err::UnsupportedBase: return "UnsupportedBase";
    case Err::Infeasible: return "Infeasible";
    case Err::ParseError: return "ParseError";
    case Err::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

int64_t vp_int(int64_t n, int p) {
  if (n == 0) return kInf;
  int64_t k = 0;
  while (n % p == 0) {
    n /= p;
    ++k;
  }
  return k;
}

// ---- polynomials mod p (for irreducibility and residue inverses) ----

namespace {

using PolyP = std::vector<int64_t>;

int64_t md(int64_t a, int64_t p) {
  a %= p;
  return a < 0 ? a + p : a;
}

void trim(PolyP& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

PolyP poly_mod(PolyP a, const PolyP& b, int64_t p) {
  trim(a);
  PolyP bb = b;
  trim(bb);
  int64_t lead_inv = 1;
  for (int64_t t = 1; t < p; ++t)
    if (md(bb.back() * t, p) == 1) lead_inv = t;
  while (a.size() >= bb.size() && !a.empty()) {
    int64_t c = md(a.back() * lead_inv, p);
    size_t sh = a.size() - bb.size();
    for (size_t i = 0; i < bb.size(); ++i) a[sh + i] = md(a[sh + i] - c * bb[i], p);
    trim(a);
  }
  return a;
}

PolyP poly_mulmod(const PolyP& a, const PolyP& b, const PolyP& m, int64_t p) {
  if (a.empty() || b.empty()) return {};
  PolyP r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = md(r[i + j] + a[i] * b[j], p);
  return poly_mod(r, m, p);
}

PolyP poly_gcd(PolyP a, PolyP b, int64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    PolyP r = poly_mod(a, b, p);
    a = b;
    b = r;
  }
  return a;
}

}  // namespace

bool irreducible_mod_p(const std::vector<int64_t>& low, int p) {
  int f = (int)low.size();
  if (f == 1) return true;
  PolyP m(low.begin(), low.end());
  for (auto& c : m) c = md(c, p);
  m.push_back(1);
  // Rabin-style: gcd(x^(p^i) - x, m) = 1 for i <= f/2.
  PolyP x = {0, 1};
  PolyP xp = x;
  for (int i = 1; i <= f / 2; ++i) {
    PolyP acc = {1};
    PolyP base = xp;
    int64_t e = p;
    while (e) {
      if (e & 1) acc = poly_mulmod(acc, base, m, p);
      base = poly_mulmod(base, base, m, p);
      e >>= 1;
    }
    xp = acc;
    PolyP d = xp;
    d.resize(std::max<size_t>(d.size(), 2), 0);
    d[1] = md(d[1] - 1, p);
    PolyP g = poly_gcd(m, d, p);
    if (g.size() > 1) return false;
  }
  return true;
}

std::vector<int64_t> default_minpoly(int p, int f) {
  if (f == 1) return {0};
  std::vector<int64_t> c(f, 0);
  int64_t total = 1;
  for (int i = 0; i < f; ++i) total *= p;
  for (int64_t idx = 0; idx < total; ++idx) {
    int64_t t = idx;
    for (int i = 0; i < f; ++i) {
      c[i] = t % p;
      t /= p;
    }
    if (c[0] != 0 && irreducible_mod_p(c, p)) return c;
  }
  fail(Err::InvalidArgument, "no irreducible polynomial found");
}

// ---- Field ----

std::shared_ptr<const Field> Field::make(const FieldConfig& cfg) {
  std::shared_ptr<Field> F(new Field());
  F->init(cfg);
  return F;
}

void Field::init(const FieldConfig& cfg) {
  cfg_ = cfg;
  p_ = cfg.p;
  f_ = cfg.f;
  N_ = cfg.N;
  if (p_ < 2) fail(Err::InvalidArgument, "p must be a prime");
  for (int d = 2; d * d <= p_; ++d)
    if (p_ % d == 0) fail(Err::InvalidArgument, "p must be a prime");
  if (f_ < 1 || f_ > kMaxF) fail(Err::InvalidArgument, "f out of range");
  q_ = 1;
  for (int i = 0; i < f_; ++i) q_ *= p_;
  if (q_ > (1 << 20)) fail(Err::InvalidArgument, "q too large");
  minpoly_ = cfg.minpoly.empty() ? default_minpoly(p_, f_) : cfg.minpoly;
  if ((int)minpoly_.size() != f_) fail(Err::InvalidArgument, "minpoly must have f lower coefficients");
  for (auto& c : minpoly_) c = md(c, p_);
  if (!irreducible_mod_p(minpoly_, p_)) fail(Err::InvalidArgument, "minpoly is not irreducible mod p");
  // Largest k with p^k < 2^62.
  ppow_.assign(1, 1);
  const unsigned __int128 lim = ((unsigned __int128)1) << 62;
  while ((unsigned __int128)ppow_.back() * p_ < lim) ppow_.push_back(ppow_.back() * p_);
  kcap_ = (int)ppow_.size() - 1;
  if (N_ < 1 || N_ + 4 > kcap_) fail(Err::InvalidArgument, "precision N too large for this p");

  if (cfg.unit_u.empty()) {
    u_ = FieldElem::from_int(this, 1);
  } else {
    u_ = FieldElem::from_coords(this, cfg.unit_u);
    if (!u_.is_unit()) fail(Err::InvalidArgument, "unit_u is not a unit");
  }
  pi_ = u_.mul_p_pow(1);
  qe_ = FieldElem::from_int(this, q_);

  // Frobenius image of w: the root of the minimal polynomial congruent to w^p.
  FieldElem w = FieldElem::gen(this);
  FieldElem r = w.pow(p_);
  for (int it = 0; it < 8; ++it) {
    // minpoly(r) and its derivative
    FieldElem val = r.pow(f_);
    FieldElem der = r.pow(f_ - 1).mul_int(f_);
    for (int i = 0; i < f_; ++i) {
      val += r.pow(i).mul_int(minpoly_[i]);
      if (i >= 1) der += r.pow(i - 1).mul_int(minpoly_[i] * i);
    }
    if (val.is_zero()) break;
    r = r - val / der;
  }
  frob_w_ = r;
}

int Field::vp_u64(uint64_t x) const {
  if (x == 0) return kInf;
  int k = 0;
  if (p_ == 2) return __builtin_ctzll(x);
  while (x % p_ == 0) {
    x /= p_;
    ++k;
  }
  return k;
}

void Field::mul_units(const uint64_t* a, const uint64_t* b, uint64_t* out, int R) const {
  const int f = f_;
  if (f == 1) {
    out[0] = modR((unsigned __int128)a[0] * b[0], R);
    return;
  }
  unsigned __int128 acc[2 * kMaxF];
  for (int i = 0; i < 2 * f - 1; ++i) acc[i] = 0;
  for (int i = 0; i < f; ++i) {
    if (!a[i]) continue;
    for (int j = 0; j < f; ++j) acc[i + j] += (unsigned __int128)a[i] * b[j];
  }
  uint64_t r[2 * kMaxF];
  for (int i = 0; i < 2 * f - 1; ++i) r[i] = modR(acc[i], R);
  const unsigned __int128 M = (p_ == 2) ? (((unsigned __int128)1) << R) : (unsigned __int128)ppow_[R];
  // w^f = -sum c_i w^i
  for (int k = 2 * f - 2; k >= f; --k) {
    uint64_t t = r[k];
    if (!t) continue;
    for (int i = 0; i < f; ++i) {
      if (!minpoly_[i]) continue;
      unsigned __int128 sub = (unsigned __int128)t * (uint64_t)minpoly_[i];
      uint64_t s = modR(sub, R);
      unsigned __int128 cur = r[k - f + i];
      r[k - f + i] = (uint64_t)((cur + M - s) % M);
    }
    r[k] = 0;
  }
  for (int i = 0; i < f; ++i) out[i] = r[i];
}

void Field::inv_unit(const uint64_t* a, uint64_t* out, int R) const {
  const int f = f_;
  // Inverse modulo p by solving the multiplication matrix.
  std::vector<std::vector<int64_t>> A(f, std::vector<int64_t>(f + 1, 0));
  uint64_t basis[kMaxF], col[kMaxF], am[kMaxF];
  for (int i = 0; i < f; ++i) am[i] = a[i] % p_;
  for (int j = 0; j < f; ++j) {
    for (int i = 0; i < f; ++i) basis[i] = (i == j);
    mul_units(am, basis, col, 1);
    for (int i = 0; i < f; ++i) A[i][j] = (int64_t)col[i];
  }
  A[0][f] = 1;
  for (int c = 0; c < f; ++c) {
    int piv = -1;
    for (int r = c; r < f; ++r)
      if (A[r][c] % p_) {
        piv = r;
        break;
      }
    if (piv < 0) fail(Err::InvOfZero, "element is not a unit");
    std::swap(A[piv], A[c]);
    int64_t inv = 1;
    for (int64_t t = 1; t < p_; ++t)
      if ((A[c][c] * t) % p_ == 1) inv = t;
    for (int k = 0; k <= f; ++k) A[c][k] = md(A[c][k] * inv, p_);
    for (int r = 0; r < f; ++r) {
      if (r == c || A[r][c] == 0) continue;
      int64_t fac = A[r][c];
      for (int k = 0; k <= f; ++k) A[r][k] = md(A[r][k] - fac * A[c][k], p_);
    }
  }
  uint64_t y[kMaxF];
  for (int i = 0; i < f; ++i) y[i] = (uint64_t)A[i][f];
  // Newton: y <- y (2 - a y)
  int cur = 1;
  while (cur < R) {
    cur = std::min(R, 2 * cur);
    uint64_t ay[kMaxF], t[kMaxF];
    uint64_t ar[kMaxF];
    for (int i = 0; i < f; ++i) ar[i] = modR(a[i], cur);
    mul_units(ar, y, ay, cur);
    const unsigned __int128 M = (p_ == 2) ? (((unsigned __int128)1) << cur) : (unsigned __int128)ppow_[cur];
    for (int i = 0; i < f; ++i) {
      unsigned __int128 v = (i == 0 ? 2 : 0);
      v = (v + M - ay[i]) % M;
      t[i] = (uint64_t)v;
    }
    mul_units(y, t, y, cur);
  }
  for (int i = 0; i < f; ++i) out[i] = modR(y[i], R);
}

FieldElem Field::pi_pow(int k) const { return one().mul_pi_pow(k); }

FieldElem Field::random(std::mt19937_64& rng, int v, int prec) const {
  int R = std::min(kcap_, prec - v);
  if (R <= 0) return zero(prec);
  std::vector<int64_t> c(f_);
  FieldElem x = FieldElem::zero(this, kInf);
  x.v_ = v;
  x.prec_ = v + R;
  uint64_t M = ppow_[R];
  for (int i = 0; i < f_; ++i) x.d_[i] = rng() % M;
  x.normalize(v, R);
  x.prec_ = prec;
  return x;
}

FieldElem Field::random_unit(std::mt19937_64& rng, int prec) const {
  for (;;) {
    FieldElem x = random(rng, 0, prec);
    if (x.is_unit()) return x;
  }
}

FieldElem Field::plog(const FieldElem& x) const {
  FieldElem z = x - one();
  if (x.val() != 0 || z.val() < n0()) fail(Err::DomainError, "log outside 1 + p^n0 O_F");
  if (z.is_zero()) return zero(x.prec());
  int vz = z.val();
  int target = x.prec();
  FieldElem sum = zero();
  FieldElem zk = one();
  for (int k = 1;; ++k) {
    zk = zk * z;
    FieldElem term = zk.div_int(k);
    if (k % 2 == 0) term = -term;
    sum += term;
    // All later terms have valuation >= (k+1) vz - log_p(k+1).
    int64_t kk = k + 1, lg = 0;
    while (kk >= p_) {
      kk /= p_;
      ++lg;
    }
    if ((int64_t)(k + 1) * vz - lg >= target + 1) break;
    if (k > 4 * kcap_) break;
  }
  return sum.with_prec(target);
}

FieldElem Field::pexp(const FieldElem& x) const {
  if (x.is_zero()) return one(x.prec());
  if (x.val() < n0()) fail(Err::DomainError, "exp outside p^n0 O_F");
  int target = x.prec();
  FieldElem sum = one();
  FieldElem term = one();
  int64_t vfact = 0;
  for (int k = 1;; ++k) {
    term = term * x;
    term = term.div_int(k);
    sum += term;
    vfact += vp_int(k + 1, p_);
    if ((int64_t)(k + 1) * x.val() - vfact >= target + 1) break;
    if (k > 4 * kcap_) break;
  }
  return sum.with_prec(target);
}

FieldElem Field::plog_principal(const FieldElem& x) const {
  FieldElem z = x - one();
  if (x.val() != 0 || z.val() < 1) fail(Err::DomainError, "log outside 1 + p O_F");
  if (p_ == 2 && z.val() < 2) return plog(x * x).div_int(2);
  return plog(x);
}

FieldElem Field::trace_qp(const FieldElem& x) const {
  // trace of multiplication by x on the basis 1, w, ..., w^(f-1)
  if (x.is_zero()) return x;
  FieldElem s = zero();
  FieldElem w = FieldElem::gen(this);
  FieldElem wi = one();
  for (int i = 0; i < f_; ++i) {
    FieldElem y = x * wi;
    if (y.is_zero()) {
      s += zero(y.prec());
    } else {
      int64_t c = (int64_t)y.digits()[i];
      s += integer(c).with_prec(y.relprec()).mul_p_pow(y.val());
    }
    wi = wi * w;
  }
  return s;
}

// ---- FieldElem ----

bool FieldElem::is_zero() const {
  if (!F_) return true;
  for (int i = 0; i < F_->f(); ++i)
    if (d_[i]) return false;
  return true;
}

void FieldElem::normalize(int v0, int R) {
  const Field* F = F_;
  int k = kInf;
  for (int i = 0; i < F->f(); ++i)
    if (d_[i]) k = std::min(k, F->vp_u64(d_[i]));
  if (k >= kInf || k >= R) {
    d_.fill(0);
    v_ = 0;
    prec_ = v0 + R;
    return;
  }
  if (k > 0) {
    uint64_t pk = F->ppow(k);
    for (int i = 0; i < F->f(); ++i) d_[i] /= pk;
  }
  v_ = v0 + k;
  prec_ = v0 + R;
}

FieldElem FieldElem::zero(const Field* F, int prec) {
  FieldElem x;
  x.F_ = F;
  x.v_ = 0;
  x.prec_ = prec;
  return x;
}

FieldElem FieldElem::from_int(const Field* F, int64_t n, int prec) {
  std::vector<int64_t> c(F->f(), 0);
  c[0] = n;
  return from_coords(F, c, prec);
}

FieldElem FieldElem::from_rational(const Field* F, int64_t a, int64_t b, int prec) {
  if (b == 0) fail(Err::InvOfZero, "zero denominator");
  FieldElem x = from_int(F, a) / from_int(F, b);
  return x.with_prec(prec);
}

FieldElem FieldElem::from_coords(const Field* F, const std::vector<int64_t>& c, int prec) {
  FieldElem x = zero(F, prec);
  int v = kInf;
  for (size_t i = 0; i < c.size() && (int)i < F->f(); ++i)
    if (c[i]) v = std::min<int>(v, (int)vp_int(c[i], F->p()));
  if (v >= kInf) return x;
  int R = std::min(F->kcap(), prec >= kInf ? F->kcap() : prec - v);
  if (R <= 0) return zero(F, prec);
  int64_t pv = 1;
  for (int i = 0; i < v; ++i) pv *= F->p();
  const unsigned __int128 M = (F->p() == 2) ? (((unsigned __int128)1) << R) : (unsigned __int128)F->ppow(R);
  for (size_t i = 0; i < c.size() && (int)i < F->f(); ++i) {
    int64_t t = c[i] / pv;
    __int128 tt = t % (__int128)M;
    if (tt < 0) tt += (__int128)M;
    x.d_[i] = (uint64_t)tt;
  }
  x.v_ = v;
  x.prec_ = v + R;
  return x;
}

FieldElem FieldElem::gen(const Field* F, int prec) {
  std::vector<int64_t> c(F->f(), 0);
  if (F->f() == 1) {
    // w is a root of x + c_0 in the degree-one case
    c[0] = -F->minpoly()[0];
  } else {
    c[1] = 1;
  }
  return from_coords(F, c, prec);
}

FieldElem FieldElem::operator+(const FieldElem& o) const {
  const Field* F = F_ ? F_ : o.F_;
  int P = std::min(prec_, o.prec_);
  bool za = is_zero(), zb = o.is_zero();
  if (za && zb) return zero(F, P);
  int v0 = za ? o.v_ : (zb ? v_ : std::min(v_, o.v_));
  if (P >= kInf || P - v0 > F->kcap()) P = v0 + F->kcap();
  int R = P - v0;
  if (R <= 0) return zero(F, P);
  FieldElem r = zero(F, P);
  const unsigned __int128 M = (F->p() == 2) ? (((unsigned __int128)1) << R) : (unsigned __int128)F->ppow(R);
  auto add_in = [&](const FieldElem& x) {
    if (x.is_zero()) return;
    int sh = x.v_ - v0;
    if (sh >= R) return;
    uint64_t scale = F->ppow(sh);
    for (int i = 0; i < F->f(); ++i) {
      if (!x.d_[i]) continue;
      uint64_t t = F->modR((unsigned __int128)F->modR(x.d_[i], R) * scale, R);
      r.d_[i] = (uint64_t)(((unsigned __int128)r.d_[i] + t) % M);
    }
  };
  add_in(*this);
  add_in(o);
  r.normalize(v0, R);
  return r;
}

FieldElem FieldElem::operator-() const {
  if (is_zero()) return *this;
  FieldElem r = *this;
  int R = prec_ - v_;
  const unsigned __int128 M = (F_->p() == 2) ? (((unsigned __int128)1) << R) : (unsigned __int128)F_->ppow(R);
  for (int i = 0; i < F_->f(); ++i)
    if (d_[i]) r.d_[i] = (uint64_t)(M - d_[i]);
  return r;
}

FieldElem FieldElem::operator-(const FieldElem& o) const { return *this + (-o); }

FieldElem FieldElem::operator*(const FieldElem& o) const {
  const Field* F = F_ ? F_ : o.F_;
  bool za = is_zero(), zb = o.is_zero();
  if (za || zb) {
    int a = za ? prec_ : v_;
    int b = zb ? o.prec_ : o.v_;
    return zero(F, sat_add(a, b));
  }
  int R = std::min(prec_ - v_, o.prec_ - o.v_);
  FieldElem r = zero(F, 0);
  uint64_t a[kMaxF], b[kMaxF];
  for (int i = 0; i < F->f(); ++i) {
    a[i] = F->modR(d_[i], R);
    b[i] = F->modR(o.d_[i], R);
  }
  F->mul_units(a, b, r.d_.data(), R);
  r.v_ = v_ + o.v_;
  r.prec_ = r.v_ + R;
  return r;
}

FieldElem FieldElem::inv() const {
  if (is_zero()) fail(Err::InvOfZero, "inverse of zero");
  int R = prec_ - v_;
  FieldElem r = zero(F_, 0);
  F_->inv_unit(d_.data(), r.d_.data(), R);
  r.v_ = -v_;
  r.prec_ = r.v_ + R;
  return r;
}

FieldElem FieldElem::mul_int(int64_t n) const { return *this * from_int(F_, n); }

FieldElem FieldElem::div_int(int64_t n) const { return *this * from_int(F_, n).inv(); }

FieldElem FieldElem::mul_p_pow(int k) const {
  FieldElem r = *this;
  if (is_zero()) {
    r.prec_ = sat_add(prec_, k);
    return r;
  }
  r.v_ += k;
  r.prec_ += k;
  return r;
}

FieldElem FieldElem::mul_pi_pow(int k) const {
  FieldElem r = mul_p_pow(k);
  if (k == 0 || r.is_zero()) return r;
  const FieldElem& u = F_->unit_u();
  bool trivial = u.v_ == 0 && u.d_[0] == 1;
  for (int i = 1; i < F_->f() && trivial; ++i)
    if (u.d_[i]) trivial = false;
  if (trivial) return r;
  return r * u.pow(k);
}

FieldElem FieldElem::pow(int64_t e) const {
  if (e < 0) return inv().pow(-e);
  FieldElem r = from_int(F_, 1);
  FieldElem b = *this;
  if (e == 0) return r;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

FieldElem FieldElem::with_prec(int P) const {
  if (P >= prec_) return *this;
  if (is_zero() || P <= v_) return zero(F_, P);
  FieldElem r = *this;
  int R = P - v_;
  for (int i = 0; i < F_->f(); ++i) r.d_[i] = F_->modR(d_[i], R);
  r.normalize(v_, R);
  r.prec_ = P;
  return r;
}

FieldElem FieldElem::lifted() const {
  if (is_zero()) return zero(F_, kInf);
  FieldElem r = *this;
  r.prec_ = v_ + F_->kcap();
  return r;
}

std::vector<int64_t> FieldElem::unit_coords_balanced() const {
  std::vector<int64_t> c(F_->f(), 0);
  if (is_zero()) return c;
  int R = prec_ - v_;
  uint64_t M = F_->ppow(R);
  for (int i = 0; i < F_->f(); ++i) {
    uint64_t d = d_[i];
    c[i] = (d > M / 2) ? (int64_t)d - (int64_t)M : (int64_t)d;
  }
  return c;
}

std::vector<uint64_t> FieldElem::coords_mod(int P) const {
  std::vector<uint64_t> c(F_->f(), 0);
  if (is_zero() || v_ >= P) return c;
  if (v_ < 0) fail(Err::DomainError, "coords_mod of non-integral element");
  int R = P - v_;
  uint64_t s = F_->ppow(v_);
  for (int i = 0; i < F_->f(); ++i) c[i] = F_->modR((unsigned __int128)F_->modR(d_[i], R) * s, P);
  return c;
}

FieldElem FieldElem::frobenius() const {
  if (is_zero()) return *this;
  int R = prec_ - v_;
  FieldElem w = F_->frob_w();
  FieldElem s = zero(F_);
  FieldElem wi = from_int(F_, 1);
  for (int i = 0; i < F_->f(); ++i) {
    s += wi * from_int(F_, (int64_t)d_[i]);
    wi = wi * w;
  }
  return s.with_prec(R).mul_p_pow(v_);
}

namespace {

std::string i128_str(__int128 x) {
  if (x == 0) return "0";
  bool neg = x < 0;
  unsigned __int128 u = neg ? (unsigned __int128)(-x) : (unsigned __int128)x;
  std::string s;
  while (u) {
    s.push_back(char('0' + (int)(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

std::string poly_w(const std::vector<__int128>& c, bool* single) {
  std::string out;
  int terms = 0;
  for (size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    ++terms;
    std::string mono = (i == 0) ? "" : (i == 1 ? "w" : "w^" + std::to_string(i));
    std::string num;
    __int128 a = c[i];
    bool neg = a < 0;
    if (neg) a = -a;
    if (i == 0)
      num = i128_str(a);
    else if (a == 1)
      num = mono;
    else
      num = i128_str(a) + "*" + mono;
    if (out.empty())
      out = (neg ? "-" : "") + num;
    else
      out += (neg ? " - " : " + ") + num;
  }
  if (single) *single = terms <= 1;
  if (out.empty()) out = "0";
  return out;
}

}  // namespace

std::string FieldElem::str() const {
  if (is_zero()) return prec_ >= kInf ? std::string("0") : "0 mod pi^" + std::to_string(prec_);
  // x / pi^v = U * u^-v
  FieldElem U = *this;
  U = U.mul_pi_pow(-v_);
  std::vector<__int128> c(F_->f());
  for (int i = 0; i < F_->f(); ++i) c[i] = (__int128)U.d_[i];
  std::string s = "pi^" + std::to_string(v_) + " * (" + poly_w(c, nullptr) + ")";
  s += " mod pi^" + std::to_string(prec_);
  return s;
}

std::string FieldElem::compact() const {
  if (is_zero()) return "0";
  std::vector<int64_t> b = unit_coords_balanced();
  const int p = F_->p();
  if (v_ >= 0) {
    // try to multiply out p^v
    __int128 pv = 1;
    bool fits = true;
    for (int i = 0; i < v_ && fits; ++i) {
      pv *= p;
      if (pv > ((__int128)1 << 62)) fits = false;
    }
    std::vector<__int128> c(b.size());
    for (size_t i = 0; i < b.size(); ++i) c[i] = (__int128)b[i] * (fits ? pv : 1);
    bool single = false;
    std::string s = poly_w(c, &single);
    if (fits) return s;
    return (single ? s : "(" + s + ")") + "*" + std::to_string(p) + "^" + std::to_string(v_);
  }
  std::vector<__int128> c(b.begin(), b.end());
  bool single = false;
  std::string s = poly_w(c, &single);
  __int128 pv = 1;
  bool fits = true;
  for (int i = 0; i < -v_ && fits; ++i) {
    pv *= p;
    if (pv > ((__int128)1 << 62)) fits = false;
  }
  std::string den = fits ? i128_str(pv) : std::to_string(p) + "^" + std::to_string(-v_);
  return (single ? s : "(" + s + ")") + "/" + den;
}

}  // namespace ltpg
