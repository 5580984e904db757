#include "ltgroup.hpp"

#include <algorithm>

namespace ltpg {

// ---- BiPoly ----

BiPoly::BiPoly(const Field* F, int D) : F_(F), D_(D), c_((D + 1) * (D + 2) / 2, FieldElem::zero(F)) {}

BiPoly BiPoly::from_x(const Series& s, int D) {
  BiPoly r(s.field(), D);
  for (int i = 0; i <= D; ++i) r.at(i, 0) = s.coeff(i);
  return r;
}

BiPoly BiPoly::from_y(const Series& s, int D) {
  BiPoly r(s.field(), D);
  for (int j = 0; j <= D; ++j) r.at(0, j) = s.coeff(j);
  return r;
}

BiPoly BiPoly::operator+(const BiPoly& o) const {
  BiPoly r = *this;
  for (size_t k = 0; k < c_.size(); ++k) r.c_[k] = c_[k] + o.c_[k];
  return r;
}

BiPoly BiPoly::operator-(const BiPoly& o) const {
  BiPoly r = *this;
  for (size_t k = 0; k < c_.size(); ++k) r.c_[k] = c_[k] - o.c_[k];
  return r;
}

BiPoly BiPoly::operator*(const BiPoly& o) const {
  BiPoly r(F_, D_);
  for (int a = 0; a <= D_; ++a)
    for (int b = 0; a + b <= D_; ++b) {
      const FieldElem& x = at(a, b);
      if (x.is_exact_zero()) continue;
      for (int c = 0; a + b + c <= D_; ++c)
        for (int d = 0; a + b + c + d <= D_; ++d) {
          const FieldElem& y = o.at(c, d);
          if (y.is_exact_zero()) continue;
          r.at(a + c, b + d) += x * y;
        }
    }
  return r;
}

int BiPoly::vmin() const {
  int v = kInf;
  for (auto& x : c_) v = std::min(v, x.val());
  return v;
}

// ---- LTGroup ----

Series LTGroup::pi_series() const {
  const Field* F = field();
  std::vector<FieldElem> c(F->q(), F->zero());
  c[0] = F->pi();
  c[F->q() - 1] = F->one();
  return Series::from_coeffs(F, 1, c);
}

Series LTGroup::iterate_pi(int n) const {
  const Field* F = field();
  Series g = Series::var(F);
  Series P = pi_series();
  for (int i = 0; i < n; ++i) {
    if ((double)g.hi() * F->q() > kDegreeBudget) fail(Err::DegreeBudgetExceeded, "[pi^n] exceeds the degree budget");
    Series gq = power(g, F->q(), kDegreeBudget);
    g = gq + g.scale(F->pi());
  }
  return g;
}

Series LTGroup::torsion_poly(int n) const {
  const Field* F = field();
  if (n < 1) fail(Err::InvalidArgument, "torsion level must be >= 1");
  Series g = iterate_pi(n - 1);
  if ((double)g.hi() * (F->q() - 1) > kDegreeBudget) fail(Err::DegreeBudgetExceeded, "Q_n exceeds the degree budget");
  return power(g, F->q() - 1, kDegreeBudget) + Series::constant(F->pi());
}

void LTGroup::ensure_factorials(int n) const {
  const Field* F = field();
  if (fact_.empty()) {
    fact_.push_back(F->one());
    inv_fact_.push_back(F->one());
  }
  while ((int)fact_.size() <= n) {
    int k = (int)fact_.size();
    fact_.push_back(fact_.back().mul_int(k));
    inv_fact_.push_back(fact_.back().inv());
  }
}

FieldElem LTGroup::binom(int n, int k) const {
  ensure_factorials(n);
  return fact_[n] * inv_fact_[k] * inv_fact_[n - k];
}

FieldElem LTGroup::pk_coeff(int k, int j) const {
  return binom(k, j) * field()->pi_pow(k - j);
}

Series LTGroup::log(int order) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  const Field* F = field();
  const int q1 = (int)F->q() - 1;
  if (log_.empty()) {
    log_.push_back(F->zero());
    log_.push_back(F->one());
  }
  // lambda(P(T)) = pi lambda(T): c_m (pi - pi^m) = sum_{j>=1} binom(k, j) pi^(k-j) c_k, k = m - j(q-1)
  while ((int)log_.size() < order) {
    int m = (int)log_.size();
    FieldElem s = F->zero();
    for (int j = 1; m - j * q1 >= 1; ++j) {
      int k = m - j * q1;
      if (k < j) break;
      if (log_[k].is_zero()) continue;
      s += pk_coeff(k, j) * log_[k];
    }
    log_.push_back(s / (F->pi() - F->pi_pow(m)));
  }
  std::vector<FieldElem> c(log_.begin() + 1, log_.begin() + std::max(1, order));
  // m c_m is integral, so on [order, q order) the valuations stay >= -log_p(q order).
  int tail = 0;
  for (int64_t t = (int64_t)F->q() * order; t >= F->p(); t /= F->p()) --tail;
  return Series::from_coeffs(F, 1, c, kInf, tail);
}

Series LTGroup::log_derivative(int order) const {
  const Field* F = field();
  Series l = log(order + 1);
  std::vector<FieldElem> c;
  for (int m = 1; m <= order; ++m) c.push_back(l.coeff(m).mul_int(m));
  return Series::from_coeffs(F, 0, c, kInf, 0);
}

Series LTGroup::a_series(int order) const {
  return inverse(log_derivative(order), order).cut_hi(order).with_tail_hi(order, 0);
}

Series LTGroup::exp(int order) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  auto it = exp_cache_.lower_bound(order);
  if (it != exp_cache_.end()) return it->second.truncate_hi(order);
  Series e = reverse(log(order), order);
  exp_cache_[order] = e;
  return e;
}

Series LTGroup::scalar(const FieldElem& a, int order) const {
  const Field* F = field();
  if (a.val() < 0) fail(Err::NonIntegralScalar, "[a] needs a in O_F");
  const int q = (int)F->q(), q1 = q - 1;
  if (order <= 1) return Series::from_coeffs(F, 1, {}, kInf, 0);
  const int pa = a.prec();
  const FieldElem al = a.lifted();
  // pw[r][m] = [T^m] g^r for r = 1..q, filled in increasing m.
  std::vector<std::vector<FieldElem>> pw(q + 1, std::vector<FieldElem>(order, F->zero()));
  pw[1][1] = al;
  for (int r = 2; r <= q; ++r) pw[r][r] = pw[r - 1][r - 1] * al;
  FieldElem pi = F->pi();
  for (int m = 2; m < order; ++m) {
    for (int r = 2; r <= q; ++r) {
      if (m < r) continue;
      if (m == r) continue;  // a^r, set above
      FieldElem s = F->zero();
      for (int k = 1; k <= m - (r - 1); ++k) {
        const FieldElem& gk = pw[1][k];
        const FieldElem& h = pw[r - 1][m - k];
        if (gk.is_exact_zero() || h.is_exact_zero()) continue;
        s += gk * h;
      }
      pw[r][m] = s;
    }
    // g_m (pi^m - pi) = [T^m] g^q - sum_{j>=1} binom(k, j) pi^(k-j) g_k
    FieldElem s = pw[q][m];
    for (int j = 1; m - j * q1 >= 1; ++j) {
      int k = m - j * q1;
      if (k < j) break;
      if (pw[1][k].is_exact_zero()) continue;
      s -= pk_coeff(k, j) * pw[1][k];
    }
    pw[1][m] = (s / (F->pi_pow(m) - pi)).lifted();
  }
  // Rounding errors are amplified by 1/pi only along m/q -> m, and changing a
  // by pi^P changes the T^m coefficient by pi^(P - floor(log_q m)).
  std::vector<FieldElem> c;
  int d = 0;
  int64_t next = q;
  for (int m = 1; m < order; ++m) {
    if (m >= next) ++d, next *= q;
    int P = std::min(pa, F->kcap() - 2) - d;
    c.push_back(pw[1][m].is_exact_zero() ? pw[1][m] : pw[1][m].with_prec(std::max(P, 0)));
  }
  return Series::from_coeffs(F, 1, c, kInf, 0);
}

BiPoly LTGroup::law(int D) const {
  std::lock_guard<std::recursive_mutex> lock(mu_);
  auto it = law_cache_.find(D);
  if (it != law_cache_.end()) return it->second;
  const Field* F = field();
  Series l = log(D + 1), e = exp(D + 1);
  BiPoly L = BiPoly::from_x(l, D) + BiPoly::from_y(l, D);
  BiPoly r(F, D);
  for (int k = D; k >= 1; --k) {
    BiPoly c(F, D);
    c.at(0, 0) = e.coeff(k);
    r = (r + c) * L;
  }
  law_cache_[D] = r;
  return r;
}

Series LTGroup::add(const Series& X, const Series& Y, int order) const {
  if (!X.coeff(0).is_zero() || !Y.coeff(0).is_zero() || !X.is_plus() || !Y.is_plus() || X.lo() < 0 || Y.lo() < 0)
    fail(Err::CompositionDomain, "group law needs series without constant term");
  Series l = log(order);
  Series s = compose(l, X, order) + compose(l, Y, order);
  Series e = exp(order);
  return compose(e, s, order);
}

}  // namespace ltpg
