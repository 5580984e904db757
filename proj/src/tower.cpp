#include "tower.hpp"

#include <algorithm>

#include "parse.hpp"

namespace ltpg {

namespace {

void same_level(const TowerElem& a, const TowerElem& b) {
  if (a.level() != b.level() || a.tower() != b.tower()) fail(Err::LevelMismatch, "tower elements live at different levels");
}

int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

}  // namespace

// ---- TowerElem ----

TowerElem TowerElem::operator+(const TowerElem& o) const {
  same_level(*this, o);
  TowerElem r = *this;
  for (int i = 0; i < degree(); ++i) r.c_[i] += o.c_[i];
  return r;
}

TowerElem TowerElem::operator-(const TowerElem& o) const {
  same_level(*this, o);
  TowerElem r = *this;
  for (int i = 0; i < degree(); ++i) r.c_[i] -= o.c_[i];
  return r;
}

TowerElem TowerElem::operator-() const {
  TowerElem r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

TowerElem TowerElem::operator*(const FieldElem& a) const {
  TowerElem r = *this;
  for (auto& x : r.c_) x *= a;
  return r;
}

TowerElem TowerElem::operator*(const TowerElem& o) const {
  same_level(*this, o);
  const Field* F = T_->field();
  const int d = degree();
  const auto& low = T_->level(n_).low;
  std::vector<FieldElem> w(2 * d - 1, F->zero());
  for (int i = 0; i < d; ++i) {
    if (c_[i].is_exact_zero()) continue;
    for (int j = 0; j < d; ++j) {
      if (o.c_[j].is_exact_zero()) continue;
      w[i + j] += c_[i] * o.c_[j];
    }
  }
  for (int k = 2 * d - 2; k >= d; --k) {
    if (w[k].is_exact_zero()) continue;
    for (int i = 0; i < d; ++i)
      if (!low[i].is_exact_zero()) w[k - d + i] -= w[k] * low[i];
  }
  w.resize(d);
  return TowerElem(T_, n_, std::move(w));
}

TowerElem TowerElem::mul_u() const {
  const int d = degree();
  const auto& low = T_->level(n_).low;
  std::vector<FieldElem> w(d, T_->field()->zero());
  for (int i = 1; i < d; ++i) w[i] = c_[i - 1];
  const FieldElem& top = c_[d - 1];
  if (!top.is_exact_zero())
    for (int i = 0; i < d; ++i)
      if (!low[i].is_exact_zero()) w[i] -= top * low[i];
  return TowerElem(T_, n_, std::move(w));
}

TowerElem TowerElem::div_u() const {
  if (n_ == 0) fail(Err::InvOfZero, "u_0 = 0 is not invertible");
  const int d = degree();
  const auto& low = T_->level(n_).low;
  // u^-1 = -(u^(d-1) + low[d-1] u^(d-2) + ... + low[1]) / low[0]
  std::vector<FieldElem> w(d, T_->field()->zero());
  for (int i = 1; i < d; ++i) w[i - 1] = c_[i];
  if (!c_[0].is_exact_zero()) {
    FieldElem t = -(c_[0] / low[0]);
    w[d - 1] += t;
    for (int i = 1; i < d; ++i)
      if (!low[i].is_exact_zero()) w[i - 1] += t * low[i];
  }
  return TowerElem(T_, n_, std::move(w));
}

TowerElem TowerElem::inv() const {
  if (is_zero()) fail(Err::InvOfZero, "inverse of a tower element that is zero at its precision");
  const int d = degree();
  std::vector<FieldElem> e(d, T_->field()->zero());
  e[0] = T_->field()->one();
  SolveResult s = solve(T_->mult_matrix(*this), e);
  if (s.rank < d || !s.consistent) fail(Err::InvOfNonUnit, "tower element is not invertible at its precision");
  return TowerElem(T_, n_, std::move(s.x));
}

TowerElem TowerElem::pow(int64_t e) const {
  if (e < 0) return inv().pow(-e);
  TowerElem r = T_->one(n_), b = *this;
  for (; e; e >>= 1) {
    if (e & 1) r = r * b;
    if (e > 1) b = b * b;
  }
  return r;
}

bool TowerElem::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const FieldElem& x) { return x.is_zero(); });
}

int TowerElem::val_d() const {
  const int d = degree();
  int v = kInf;
  for (int i = 0; i < d; ++i) {
    if (c_[i].is_exact_zero()) continue;
    v = std::min(v, c_[i].val() * d + i);
  }
  return v;
}

int TowerElem::min_prec() const {
  int P = kInf;
  for (auto& x : c_) P = std::min(P, x.prec());
  return P;
}

TowerElem TowerElem::with_prec(int P) const {
  TowerElem r = *this;
  for (auto& x : r.c_) x = x.with_prec(P);
  return r;
}

TowerElem TowerElem::lifted() const {
  TowerElem r = *this;
  for (auto& x : r.c_) x = x.lifted();
  return r;
}

std::string TowerElem::str() const {
  Series s = Series::from_coeffs(T_->field(), 0, c_);
  std::string body = s.str();
  std::replace(body.begin(), body.end(), 'T', 'u');
  return body + " @level " + std::to_string(n_);
}

// ---- Tower ----

const TorsionLevel& Tower::level(int n) const {
  std::lock_guard<std::recursive_mutex> lk(mu_);
  if (n < 0) fail(Err::InvalidArgument, "negative tower level");
  while ((int)levels_.size() <= n) {
    int k = (int)levels_.size();
    auto L = std::make_unique<TorsionLevel>();
    L->n = k;
    const Field* F = field();
    if (k == 0) {
      L->d = 1;
      L->low = {F->zero()};
    } else {
      int64_t d = F->q() - 1;
      for (int i = 1; i < k; ++i) d *= F->q();
      if (d > budget_) fail(Err::DegreeBudgetExceeded, "level " + std::to_string(k) + " has degree " + std::to_string(d));
      L->d = (int)d;
      Series Q = G_.torsion_poly(k);
      for (int i = 0; i < L->d; ++i) L->low.push_back(Q.coeff(i));
    }
    levels_.push_back(std::move(L));
  }
  return *levels_[n];
}

int Tower::work_prec() const { return std::min(field()->N() + 8, field()->kcap() - 2); }

TowerElem Tower::zero(int n) const { return TowerElem(this, n, std::vector<FieldElem>(degree(n), field()->zero())); }

TowerElem Tower::one(int n) const { return constant(field()->one(), n); }

TowerElem Tower::constant(const FieldElem& a, int n) const {
  TowerElem r = zero(n);
  std::vector<FieldElem> c = r.coords();
  c[0] = a;
  return TowerElem(this, n, std::move(c));
}

TowerElem Tower::u(int n) const {
  if (n == 0) return zero(0);
  std::vector<FieldElem> c(degree(n), field()->zero());
  if (degree(n) > 1)
    c[1] = field()->one();
  else
    c[0] = -level(n).low[0];  // q = 2: u_1 = -pi
  return TowerElem(this, n, std::move(c));
}

TowerElem Tower::from_coords(int n, std::vector<FieldElem> c) const {
  if ((int)c.size() != degree(n)) fail(Err::InvalidArgument, "wrong number of tower coordinates");
  return TowerElem(this, n, std::move(c));
}

TowerElem Tower::parse(const std::string& s, int default_prec) const {
  auto at = s.find('@');
  if (at == std::string::npos) fail(Err::ParseError, "tower literal needs '@level n'");
  std::string tail = s.substr(at + 1);
  int n = -1;
  if (sscanf(tail.c_str(), " level %d", &n) != 1 || n < 0) fail(Err::ParseError, "bad level in tower literal");
  LaurentPoly lp = parse_literal(field(), s.substr(0, at), "u", default_prec);
  return eval(Series::from_literal(field(), lp), n);
}

const TowerElem& Tower::u_image(int n, int m) const {
  std::lock_guard<std::recursive_mutex> lk(mu_);
  auto key = std::make_pair(n, m);
  auto it = u_image_.find(key);
  if (it != u_image_.end()) return it->second;
  TowerElem e = eval(G_.iterate_pi(m - n), m);
  return u_image_.emplace(key, std::move(e)).first->second;
}

TowerElem Tower::embed(const TowerElem& x, int m) const {
  int n = x.level();
  if (m < n) fail(Err::LevelMismatch, "embed_up needs a higher target level");
  if (m == n) return x;
  if (n == 0) return constant(x.coord(0), m);
  const TowerElem& e = u_image(n, m);
  TowerElem acc = constant(x.coord(x.degree() - 1), m);
  for (int i = x.degree() - 2; i >= 0; --i) acc = acc * e + constant(x.coord(i), m);
  return acc;
}

TowerElem Tower::eval(const Series& f, int n) const {
  if (f.tau_lo() < kInf) fail(Err::PrecisionExhausted, "series with unknown negative tail cannot be evaluated at u_n");
  if (n == 0) {
    if (f.start() < 0) fail(Err::DomainError, "Laurent series evaluated at u_0 = 0");
    return constant(f.coeff(0), 0);
  }
  const int d = degree(n);
  TowerElem acc = zero(n);
  for (int k = f.hi() - 1; k >= 0; --k) {
    acc = acc.mul_u();
    if (k >= f.lo()) {
      const FieldElem& c = f.coeffs()[k - f.lo()];
      if (!c.is_exact_zero()) {
        std::vector<FieldElem> w = acc.coords();
        w[0] += c;
        acc = TowerElem(this, n, std::move(w));
      }
    }
  }
  if (f.lo() < 0) {
    TowerElem neg = zero(n);
    for (int k = f.lo(); k < std::min(0, f.hi()); ++k) {
      std::vector<FieldElem> w = neg.coords();
      w[0] += f.coeffs()[k - f.lo()];
      neg = TowerElem(this, n, std::move(w)).div_u();
    }
    // neg = sum f_k u^(k - min(0, hi))
    for (int k = f.hi(); k < 0; ++k) neg = neg.div_u();
    acc += neg;
  }
  // every coefficient at exponent k >= hi contributes coordinates of valuation >= tau_hi + floor(k/d)
  if (f.tau_hi() < kInf) acc = acc.with_prec(sat_add(f.tau_hi(), floor_div(f.hi(), d)));
  return acc;
}

TowerElem Tower::eval_at(const Series& f, const TowerElem& x) const {
  if (f.tau_lo() < kInf || f.start() < 0) fail(Err::DomainError, "eval_at needs a plus series");
  const int n = x.level(), d = x.degree();
  const int v = x.val_d();
  if (f.tau_hi() < kInf && v < 1) fail(Err::NotInMaximalIdeal, "series evaluated outside the maximal ideal");
  TowerElem acc = zero(n);
  for (int k = f.hi() - 1; k >= 0; --k) {
    acc = acc * x;
    if (k >= f.lo()) acc += constant(f.coeffs()[k - f.lo()], n);
  }
  if (f.tau_hi() < kInf) {
    int64_t t = v >= kInf ? kInf : (int64_t)f.hi() * v / d;
    acc = acc.with_prec(sat_add(f.tau_hi(), (int)std::min<int64_t>(t, kInf)));
  }
  return acc;
}

const TowerElem& Tower::scalar_at(const FieldElem& a, int n) const {
  std::lock_guard<std::recursive_mutex> lk(mu_);
  // [a](u_n) only depends on a mod pi^n, so a is lifted to an exact element.
  FieldElem al = a.lifted();
  auto key = std::make_pair(al.str(), n);
  auto it = scalar_.find(key);
  if (it != scalar_.end()) return it->second;
  const int d = degree(n), K = d * (work_prec() + 1);
  // the coefficients of [a] are integral
  Series s = G_.scalar(al, K).with_tail_hi(K, 0);
  return scalar_.emplace(key, eval(s, n)).first->second;
}

TowerElem Tower::galois(const FieldElem& a, const TowerElem& x) const {
  if (!a.is_unit()) fail(Err::NonUnitScalar, "Galois action needs a unit of O_F");
  const int n = x.level();
  if (n == 0) return x;
  if (a.prec() < n) fail(Err::PrecisionExhausted, "unit known to less than pi^n");
  const TowerElem& g = scalar_at(a, n);
  TowerElem acc = constant(x.coord(x.degree() - 1), n);
  for (int i = x.degree() - 2; i >= 0; --i) acc = acc * g + constant(x.coord(i), n);
  return acc;
}

const std::vector<TowerElem>& Tower::power_traces(int n) const {
  std::lock_guard<std::recursive_mutex> lk(mu_);
  auto it = ptr_.find(n);
  if (it != ptr_.end()) return it->second;
  const Field* F = field();
  const int q = (int)F->q();
  // monic minimal polynomial of u_{n+1} over F_n: X^(q-1) + pi for n = 0, X^q + pi X - u_n otherwise
  const int D = n == 0 ? q - 1 : q;
  std::vector<TowerElem> a(D, zero(n));
  if (n == 0)
    a[0] = constant(F->pi(), 0);
  else {
    if (D > 1) a[1] = constant(F->pi(), n);
    a[0] = -u(n);
  }
  const int m = degree(n + 1);
  std::vector<TowerElem> pw(m, zero(n));
  pw[0] = constant(F->integer(D), n);
  for (int j = 1; j < m; ++j) {
    TowerElem s = zero(n);
    if (j <= D) s = a[D - j] * F->integer(j);
    for (int i = 1; i <= std::min(j - 1, D); ++i) s += a[D - i] * pw[j - i];
    pw[j] = -s;
  }
  return ptr_.emplace(n, std::move(pw)).first->second;
}

TowerElem Tower::trace(const TowerElem& x, int n) const {
  if (n < 0 || n > x.level()) fail(Err::LevelMismatch, "trace target above the source level");
  TowerElem y = x;
  while (y.level() > n) {
    const int k = y.level() - 1;
    const auto& pw = power_traces(k);
    TowerElem acc = zero(k);
    for (int i = 0; i < y.degree(); ++i)
      if (!y.coord(i).is_exact_zero()) acc += pw[i] * y.coord(i);
    y = acc;
  }
  return y;
}

std::vector<FieldElem> Tower::galois_coset(int m, int n) const {
  if (n < 0 || n > m) fail(Err::LevelMismatch, "coset needs n <= m");
  const Field* F = field();
  const int p = F->p(), f = F->f();
  std::vector<FieldElem> res;  // residue representatives with coordinates in [0, p)
  int64_t q = F->q();
  for (int64_t k = 0; k < q; ++k) {
    std::vector<int64_t> c(f);
    int64_t t = k;
    for (int i = 0; i < f; ++i) c[i] = t % p, t /= p;
    res.push_back(FieldElem::from_coords(F, c));
  }
  std::vector<FieldElem> out;
  // digits r_0 .. r_{m-1} of a = sum r_i pi^i
  std::vector<int> dig(m, 0);
  auto valid = [&]() {
    if (n == 0) return dig.empty() || dig[0] != 0;
    if (dig[0] != 1) return false;
    for (int i = 1; i < n; ++i)
      if (dig[i] != 0) return false;
    return true;
  };
  if (m == 0) return {F->one()};
  while (true) {
    if (valid()) {
      FieldElem a = F->zero();
      for (int i = m - 1; i >= 0; --i) a = a * F->pi() + res[dig[i]];
      out.push_back(a);
    }
    int i = 0;
    while (i < m && ++dig[i] == q) dig[i++] = 0;
    if (i == m) break;
  }
  return out;
}

TowerElem Tower::trace_galois(const TowerElem& x, int n) const {
  const int m = x.level();
  TowerElem acc = zero(m);
  for (const FieldElem& a : galois_coset(m, n)) acc += galois(a, x);
  return acc;
}

TowerElem Tower::lt_add(const TowerElem& x, const TowerElem& y, int max_degree) const {
  same_level(x, y);
  const int d = x.degree();
  const int v = std::min(x.val_d(), y.val_d());
  if (v < 1) fail(Err::NotInMaximalIdeal, "formal group law needs arguments in the maximal ideal");
  if (v >= kInf) return x + y;
  const int W = work_prec();
  int D = std::min(max_degree, std::max(1, (W * d + v - 1) / v - 1));
  TowerElem r = G_.law(D).eval(x, y, zero(x.level()));
  // dropped terms have total degree > D and valuation >= (D + 1) v / d
  return r.with_prec((D + 1) * v / d);
}

TowerElem Tower::trace_lt(const TowerElem& x, int n, int max_degree) const {
  const int m = x.level();
  if (x.val_d() < 1) fail(Err::NotInMaximalIdeal, "Lubin-Tate trace needs x in the maximal ideal");
  if (n < 0 || n > m) fail(Err::LevelMismatch, "trace target above the source level");
  TowerElem acc = zero(m);
  bool first = true;
  for (const FieldElem& a : galois_coset(m, n)) {
    TowerElem c = galois(a, x);
    acc = first ? c : lt_add(acc, c, max_degree);
    first = false;
  }
  return descend(acc, n);
}

TowerElem Tower::descend(const TowerElem& x, int n) const {
  const int m = x.level();
  if (n > m) fail(Err::LevelMismatch, "descend target above the source level");
  if (n == m) return x;
  const int dm = degree(m), dn = degree(n);
  Mat A(field(), dm, dn);
  TowerElem b = one(n);
  for (int j = 0; j < dn; ++j) {
    TowerElem e = embed(b, m);
    for (int i = 0; i < dm; ++i) A.at(i, j) = e.coord(i);
    if (n > 0) b = b.mul_u();
  }
  SolveResult s = solve(A, x.coords());
  if (!s.consistent || s.rank < dn) fail(Err::Unsolvable, "element does not lie in the smaller level at its precision");
  return TowerElem(this, n, std::move(s.x));
}

TowerElem Tower::trace_lift(const TowerElem& y) const {
  const int n = y.level();
  const Field* F = field();
  if (n < 1) fail(Err::DomainError, "trace_lift needs level n >= 1");
  if (F->f() < 2) fail(Err::DomainError, "trace_lift needs f >= 2");
  TowerElem target = y * (F->q_elem() / F->pi());
  const auto& pw = power_traces(n);
  const int dn = degree(n), dm = degree(n + 1);
  Mat A(F, dn, dm);
  for (int j = 0; j < dm; ++j)
    for (int i = 0; i < dn; ++i) A.at(i, j) = pw[j].coord(i);
  SolveResult s = solve(A, target.coords());
  if (!s.consistent) fail(Err::Unsolvable, "trace image does not contain (q/pi) y at this precision");
  return TowerElem(this, n + 1, std::move(s.x));
}

Mat Tower::mult_matrix(const TowerElem& x) const {
  const int d = x.degree();
  Mat M(field(), d, d);
  TowerElem col = x;
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) M.at(i, j) = col.coord(i);
    if (j + 1 < d) col = col.mul_u();
  }
  return M;
}

FieldElem Tower::norm(const TowerElem& x) const { return det(mult_matrix(x)); }

}  // namespace ltpg
