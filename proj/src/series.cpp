#include "series.hpp"

#include <algorithm>

namespace ltpg {

namespace {

int min3(int a, int b, int c) { return std::min(a, std::min(b, c)); }

}  // namespace

Series Series::constant(const FieldElem& x) { return monomial(x, 0); }

Series Series::monomial(const FieldElem& x, int k) {
  Series s(x.field());
  s.lo_ = k;
  s.c_.push_back(x);
  s.trim();
  if (s.c_.empty()) s.lo_ = k;
  return s;
}

Series Series::unknown(const Field* F, int tau) {
  Series s(F);
  s.tau_hi_ = tau;
  return s;
}

Series Series::from_coeffs(const Field* F, int lo, std::vector<FieldElem> c, int tau_lo, int tau_hi) {
  Series s(F);
  s.lo_ = lo;
  s.c_ = std::move(c);
  s.tau_lo_ = tau_lo;
  s.tau_hi_ = tau_hi;
  s.trim();
  return s;
}

Series Series::from_literal(const Field* F, const LaurentPoly& lp) {
  Series s(F);
  int a = lp.c.empty() ? 0 : lp.c.begin()->first;
  int b = lp.c.empty() ? 0 : lp.c.rbegin()->first + 1;
  if (lp.lo > -kInf) a = std::min(a, lp.lo);
  if (lp.hi < kInf) b = std::max(b, lp.hi);
  if (lp.hi < kInf && lp.lo > -kInf && lp.lo > lp.hi) fail(Err::EmptyWindow, "literal has an empty window");
  if (b - a > kDegreeBudget) fail(Err::DegreeBudgetExceeded, "literal spans too many exponents");
  s.lo_ = a;
  s.c_.assign(b - a, F->zero());
  for (auto& [k, v] : lp.c) s.c_[k - a] = v;
  // Exponents strictly inside the literal but absent are exact zeros.  The
  // O-terms make the outside unknown.
  s.tau_lo_ = lp.lo > -kInf ? kNoBound : kInf;
  s.tau_hi_ = lp.hi < kInf ? kNoBound : kInf;
  if (lp.hi < kInf) s.c_.resize(std::max(0, lp.hi - a), F->zero());
  s.trim();
  return s;
}

Series Series::parse(const Field* F, const std::string& s, int default_prec) {
  return from_literal(F, parse_literal(F, s, "T", default_prec));
}

FieldElem Series::coeff(int k) const {
  if (k < lo_) return FieldElem::zero(F_, tau_lo_);
  if (k >= hi()) return FieldElem::zero(F_, tau_hi_);
  return c_[k - lo_];
}

int Series::start() const {
  for (size_t i = 0; i < c_.size(); ++i)
    if (!c_[i].is_zero()) return lo_ + (int)i;
  return hi();
}

int Series::end() const {
  for (size_t i = c_.size(); i-- > 0;)
    if (!c_[i].is_zero()) return lo_ + (int)i + 1;
  return lo_;
}

int Series::vmin() const {
  int v = std::min(tau_lo_, tau_hi_);
  for (auto& x : c_) v = std::min(v, x.val());
  return v;
}

int Series::val_range(int a, int b) const {
  int v = kInf;
  if (a >= b) return v;
  if (a < lo_) v = std::min(v, tau_lo_);
  if (b > hi()) v = std::min(v, tau_hi_);
  int s = std::max(a, lo_), e = std::min(b, hi());
  for (int k = s; k < e; ++k) v = std::min(v, c_[k - lo_].val());
  return v;
}

int Series::min_prec() const {
  int v = kInf;
  for (auto& x : c_) v = std::min(v, x.prec());
  return v;
}

namespace {

// A stored zero known mod pi^P can join a tail with bound tau without loss.
bool absorbable(const FieldElem& x, int tau) {
  if (!x.is_zero()) return false;
  int P = x.prec();
  return P == tau || (P <= kNoBound && tau <= kNoBound);
}

}  // namespace

void Series::trim() {
  while (!c_.empty() && absorbable(c_.back(), tau_hi_)) c_.pop_back();
  size_t k = 0;
  while (k < c_.size() && absorbable(c_[k], tau_lo_)) ++k;
  if (k) {
    c_.erase(c_.begin(), c_.begin() + k);
    lo_ += (int)k;
  }
}

Series Series::operator+(const Series& o) const {
  const Field* F = F_ ? F_ : o.F_;
  if (!F_) return o;
  if (!o.F_) return *this;
  // A window edge matters when the window is nonempty or the tail beyond it is inexact.
  bool has_lo = false, has_hi = false;
  int a = 0, b = 0;
  for (const Series* s : {this, &o}) {
    bool ne = !s->c_.empty();
    if (ne || s->tau_lo_ < kInf) a = has_lo ? std::min(a, s->lo_) : s->lo_, has_lo = true;
    if (ne || s->tau_hi_ < kInf) b = has_hi ? std::max(b, s->hi()) : s->hi(), has_hi = true;
  }
  if (!has_lo) a = b;
  if (!has_hi) b = a;
  if (b < a) b = a;
  Series r(F);
  r.lo_ = a;
  r.c_.reserve(b - a);
  for (int k = a; k < b; ++k) r.c_.push_back(coeff(k) + o.coeff(k));
  r.tau_lo_ = std::min(tau_lo_, o.tau_lo_);
  r.tau_hi_ = std::min(tau_hi_, o.tau_hi_);
  r.trim();
  return r;
}

Series Series::operator-() const {
  Series r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

Series Series::operator-(const Series& o) const { return *this + (-o); }

Series mul_impl(const Series& f, const Series& g) {
  const Field* F = f.F_ ? f.F_ : g.F_;
  const int lf = f.lo_, hf = f.hi(), lg = g.lo_, hg = g.hi();
  const int nf = hf - lf, ng = hg - lg;
  const int lo_r = lf + lg;
  int hi_r = std::max(lo_r, hf + hg - 1);
  if (hi_r - lo_r > kDegreeBudget) hi_r = lo_r + kDegreeBudget;
  const int tlf = f.tau_lo_, thf = f.tau_hi_, tlg = g.tau_lo_, thg = g.tau_hi_;

  std::vector<int> pf(nf), sf(nf), pg(ng), sg(ng);
  for (int i = 0; i < nf; ++i) pf[i] = std::min(i ? pf[i - 1] : kInf, f.c_[i].val());
  for (int i = nf - 1; i >= 0; --i) sf[i] = std::min(i + 1 < nf ? sf[i + 1] : kInf, f.c_[i].val());
  for (int i = 0; i < ng; ++i) pg[i] = std::min(i ? pg[i - 1] : kInf, g.c_[i].val());
  for (int i = ng - 1; i >= 0; --i) sg[i] = std::min(i + 1 < ng ? sg[i + 1] : kInf, g.c_[i].val());
  const int vkf = nf ? pf[nf - 1] : kInf, vkg = ng ? pg[ng - 1] : kInf;
  const int vf = min3(vkf, tlf, thf), vg = min3(vkg, tlg, thg);

  Series r(F);
  r.lo_ = lo_r;
  const int n = hi_r - lo_r;
  r.c_.assign(n, FieldElem::zero(F, kInf));
  std::vector<bool> touched(n, false);
  for (int i = 0; i < nf; ++i) {
    const FieldElem& x = f.c_[i];
    if (x.is_exact_zero()) continue;
    int jmax = std::min(ng, n - i);
    for (int j = 0; j < jmax; ++j) {
      const FieldElem& y = g.c_[j];
      if (y.is_exact_zero()) continue;
      FieldElem t = x * y;
      if (touched[i + j])
        r.c_[i + j] += t;
      else
        r.c_[i + j] = t, touched[i + j] = true;
    }
  }

  bool any_tail = thf < kInf || tlf < kInf || thg < kInf || tlg < kInf;
  if (any_tail) {
    for (int k = lo_r; k < hi_r; ++k) {
      int cap = kInf;
      if (thf < kInf) {
        int jmax = std::min(hg - 1, k - hf);
        if (jmax >= lg) cap = std::min(cap, sat_add(thf, pg[jmax - lg]));
        if (k >= hf + hg) cap = std::min(cap, sat_add(thf, thg));
        cap = std::min(cap, sat_add(thf, tlg));
      }
      if (tlf < kInf) {
        int jmin = std::max(lg, k - lf + 1);
        if (jmin <= hg - 1) cap = std::min(cap, sat_add(tlf, sg[jmin - lg]));
        if (k <= lf + lg - 2) cap = std::min(cap, sat_add(tlf, tlg));
        cap = std::min(cap, sat_add(tlf, thg));
      }
      if (thg < kInf) {
        int imax = std::min(hf - 1, k - hg);
        if (imax >= lf) cap = std::min(cap, sat_add(thg, pf[imax - lf]));
        cap = std::min(cap, sat_add(thg, tlf));
      }
      if (tlg < kInf) {
        int imin = std::max(lf, k - lg + 1);
        if (imin <= hf - 1) cap = std::min(cap, sat_add(tlg, sf[imin - lf]));
        cap = std::min(cap, sat_add(tlg, thf));
      }
      if (cap < kInf) r.c_[k - lo_r] = r.c_[k - lo_r].with_prec(cap);
    }
  }

  // Tails of the product.
  int th = kInf, tl = kInf;
  th = std::min(th, sat_add(thf, vg));
  th = std::min(th, sat_add(thg, vf));
  if (lf + hg - 2 >= hi_r) th = std::min(th, sat_add(tlf, vkg));
  if (lg + hf - 2 >= hi_r) th = std::min(th, sat_add(tlg, vkf));
  if (hi_r < hf + hg - 1) th = std::min(th, sat_add(vkf, vkg));  // degree budget cut
  tl = std::min(tl, sat_add(tlf, vg));
  tl = std::min(tl, sat_add(tlg, vf));
  if (hf + lg < lo_r) tl = std::min(tl, sat_add(thf, vkg));
  if (hg + lf < lo_r) tl = std::min(tl, sat_add(thg, vkf));
  r.tau_hi_ = std::max(th, kNoBound);
  r.tau_lo_ = std::max(tl, kNoBound);
  r.trim();
  return r;
}

Series Series::operator*(const Series& o) const {
  if (!F_ || !o.F_) return Series(F_ ? F_ : o.F_);
  return mul_impl(*this, o);
}

Series Series::scale(const FieldElem& a) const {
  Series r = *this;
  for (auto& x : r.c_) x = x * a;
  int va = a.val();
  r.tau_lo_ = sat_add(tau_lo_, va);
  r.tau_hi_ = sat_add(tau_hi_, va);
  r.trim();
  return r;
}

Series Series::shift(int k) const {
  Series r = *this;
  r.lo_ += k;
  return r;
}

Series Series::truncate_hi(int n) const {
  if (n >= hi()) return *this;
  Series r = *this;
  int v = tau_hi_;
  if (n <= lo_) {
    v = std::min(v, vmin());
    r.c_.clear();
    r.lo_ = n;
    if (n < lo_) v = std::min(v, tau_lo_);
  } else {
    for (int k = n; k < hi(); ++k) v = std::min(v, c_[k - lo_].val());
    r.c_.resize(n - lo_);
  }
  r.tau_hi_ = v;
  r.trim();
  return r;
}

Series Series::truncate_lo(int n) const {
  if (n <= lo_) return *this;
  Series r = *this;
  int v = tau_lo_;
  if (n >= hi()) {
    for (auto& x : c_) v = std::min(v, x.val());
    if (n > hi()) v = std::min(v, tau_hi_);
    r.c_.clear();
    r.lo_ = n;
  } else {
    for (int k = lo_; k < n; ++k) v = std::min(v, c_[k - lo_].val());
    r.c_.erase(r.c_.begin(), r.c_.begin() + (n - lo_));
    r.lo_ = n;
  }
  r.tau_lo_ = v;
  r.trim();
  return r;
}

Series Series::cut_hi(int n) const {
  Series r = truncate_hi(n);
  r.tau_hi_ = kInf;
  r.trim();
  return r;
}

Series Series::with_tail_hi(int n, int tau) const {
  Series r = *this;
  for (int k = hi(); k < n; ++k) r.c_.push_back(coeff(k));
  r.tau_hi_ = tau;
  r.trim();
  return r;
}

Series Series::lifted() const {
  Series r = *this;
  for (auto& x : r.c_) x = x.lifted();
  r.tau_lo_ = kInf;
  r.tau_hi_ = kInf;
  r.trim();
  return r;
}

Series Series::with_prec(int P) const {
  Series r = *this;
  for (auto& x : r.c_) x = x.with_prec(P);
  if (r.tau_lo_ < kInf) r.tau_lo_ = std::min(r.tau_lo_, P);
  if (r.tau_hi_ < kInf) r.tau_hi_ = std::min(r.tau_hi_, P);
  r.trim();
  return r;
}

Series Series::derivative() const {
  Series r(F_);
  r.lo_ = lo_ - 1;
  r.c_.reserve(c_.size());
  for (int k = lo_; k < hi(); ++k) r.c_.push_back(c_[k - lo_].mul_int(k));
  r.tau_lo_ = tau_lo_;
  r.tau_hi_ = tau_hi_;
  r.trim();
  return r;
}

Series Series::map_coeffs(FieldElem (*fn)(const FieldElem&)) const {
  Series r = *this;
  for (auto& x : r.c_) x = fn(x);
  r.trim();
  return r;
}

std::string Series::str() const {
  std::string out;
  auto append = [&](std::string t, bool negative) {
    if (out.empty())
      out = negative ? "-" + t : t;
    else
      out += (negative ? " - " : " + ") + t;
  };
  if (tau_lo_ < kInf) append("O(1/T^" + std::to_string(1 - lo_) + ")", false);
  for (int k = lo_; k < hi(); ++k) {
    const FieldElem& x = c_[k - lo_];
    if (x.is_zero()) continue;
    std::string cs = x.compact();
    bool neg = false;
    if (cs[0] == '-' && cs.find(' ') == std::string::npos) {
      neg = true;
      cs = cs.substr(1);
    }
    bool simple = cs.find(' ') == std::string::npos;
    std::string mono = k == 0 ? "" : (k == 1 ? "T" : "T^" + std::to_string(k));
    std::string term;
    if (k == 0)
      term = cs;
    else if (cs == "1")
      term = mono;
    else
      term = (simple ? cs : "(" + cs + ")") + "*" + mono;
    append(term, neg);
  }
  if (tau_hi_ < kInf) append("O(T^" + std::to_string(hi()) + ")", false);
  if (out.empty()) out = "0";
  return out;
}

// ---- composition and friends ----

Series inverse(const Series& g, int order) {
  const Field* F = g.field();
  if (!g.is_plus()) fail(Err::InvOfZero, "leading coefficient of series unknown");
  int s = g.start();
  if (s >= g.hi()) fail(Err::InvOfZero, "inverse of a zero series");
  Series u = g.shift(-s);
  FieldElem u0 = u.coeff(0);
  int n = order + s;
  if (n <= 0) return Series::from_coeffs(F, -s, {}, kInf, u0.val() >= kInf ? kInf : -u0.val());
  FieldElem inv0 = u0.inv();
  std::vector<FieldElem> b;
  b.reserve(n);
  b.push_back(inv0);
  int rigorous = -u0.val();
  for (int k = 0; k < u.hi(); ++k)
    if (k > 0 && u.coeff(k).val() < u0.val()) rigorous = kNoBound;
  if (u.tau_hi() < u0.val()) rigorous = kNoBound;
  for (int k = 1; k < n; ++k) {
    FieldElem acc = F->zero();
    int jmax = std::min(k, u.hi() - 1);
    for (int j = 1; j <= jmax; ++j) acc += u.coeff(j) * b[k - j];
    if (k >= u.hi() && u.tau_hi() < kInf) acc += FieldElem::zero(F, sat_add(u.tau_hi(), -u0.val()));
    b.push_back(-(acc * inv0));
  }
  int tail = rigorous;
  if (tail <= kNoBound) {
    // No a priori bound: use the smallest valuation seen, one digit lower.
    tail = kInf;
    for (auto& x : b) tail = std::min(tail, x.val());
    tail = tail >= kInf ? -u0.val() : tail - 1;
  }
  return Series::from_coeffs(F, -s, std::move(b), kInf, tail);
}

Series power(const Series& f, int64_t n, int order) {
  const Field* F = f.field();
  if (n < 0) return power(inverse(f, order), -n, order);
  Series r = Series::constant(F->one());
  Series b = f.truncate_hi(order);
  while (n) {
    if (n & 1) r = (r * b).truncate_hi(order);
    n >>= 1;
    if (n) b = (b * b).truncate_hi(order);
  }
  return r;
}

Series compose(const Series& f, const Series& g, int order) {
  const Field* F = f.field();
  bool laurent = !f.is_plus() || f.lo() < 0;
  FieldElem g0 = g.coeff(0);
  if (!g.is_plus() || g.lo() < 0 || !g0.is_zero())
    fail(Err::CompositionDomain, "inner series must have g(0) = 0");
  if (laurent) {
    if (g.start() != 1) fail(Err::CompositionDomain, "Laurent composition needs g = T * unit");
  }
  // Nonnegative part by Horner.
  Series r = f.high_exact() ? Series::zero(F) : Series::unknown(F, f.tau_hi());
  for (int i = f.hi() - 1; i >= 0; --i) {
    r = (r * g).truncate_hi(order);
    FieldElem c = f.coeff(i);
    if (!c.is_exact_zero()) r = r + Series::constant(c);
  }
  if (!laurent) return r.truncate_hi(order);
  Series h = inverse(g, order);
  int K = std::max(0, -f.lo());
  Series s = f.tau_lo() >= kInf ? Series::zero(F) : Series::from_coeffs(F, 0, {}, f.tau_lo(), f.tau_lo());
  for (int k = K; k >= 1; --k) {
    FieldElem c = f.coeff(-k);
    if (!c.is_exact_zero()) s = s + Series::constant(c);
    s = (s * h).truncate_hi(order);
  }
  return (r + s).truncate_hi(order);
}

Series reverse(const Series& f, int order) {
  const Field* F = f.field();
  if (!f.is_plus() || f.lo() < 0 || !f.coeff(0).is_zero() || f.coeff(1).is_zero())
    fail(Err::NotReversible, "reverse needs f = cT + O(T^2) with c nonzero");
  FieldElem c = f.coeff(1);
  Series df = f.derivative();
  Series T = Series::var(F);
  Series g = Series::monomial(c.inv(), 1);
  int cur = 2;
  while (cur < order) {
    cur = std::min(order, 2 * cur);
    Series fg = compose(f, g, cur) - T;
    Series dg = compose(df, g, cur);
    g = (g - fg * inverse(dg, cur)).cut_hi(cur);
  }
  int tail = kInf;
  for (auto& x : g.coeffs()) tail = std::min(tail, x.val());
  return g.with_tail_hi(order, tail);
}

}  // namespace ltpg
