#pragma once

#include <map>
#include <mutex>
#include <vector>

#include "series.hpp"

namespace ltpg {

// Polynomial in two variables truncated at total degree D.
class BiPoly {
 public:
  BiPoly() = default;
  BiPoly(const Field* F, int D);

  int degree() const { return D_; }
  const FieldElem& at(int i, int j) const { return c_[idx(i, j)]; }
  FieldElem& at(int i, int j) { return c_[idx(i, j)]; }

  static BiPoly from_x(const Series& s, int D);  // s(X)
  static BiPoly from_y(const Series& s, int D);  // s(Y)

  BiPoly operator+(const BiPoly& o) const;
  BiPoly operator-(const BiPoly& o) const;
  BiPoly operator*(const BiPoly& o) const;
  // Minimum valuation of all coefficients.
  int vmin() const;

  // Evaluate at ring elements x, y (R needs +, * and R * FieldElem).
  template <class R>
  R eval(const R& x, const R& y, const R& zero) const {
    std::vector<R> xp(D_ + 1, zero), yp(D_ + 1, zero);
    if (D_ >= 1) xp[1] = x, yp[1] = y;
    for (int i = 2; i <= D_; ++i) xp[i] = xp[i - 1] * x, yp[i] = yp[i - 1] * y;
    R acc = zero;
    for (int i = 0; i <= D_; ++i)
      for (int j = 0; i + j <= D_; ++j) {
        if (i + j == 0) continue;
        const FieldElem& c = at(i, j);
        if (c.is_zero()) continue;
        if (i == 0)
          acc = acc + yp[j] * c;
        else if (j == 0)
          acc = acc + xp[i] * c;
        else
          acc = acc + xp[i] * yp[j] * c;
      }
    return acc;
  }

 private:
  int idx(int i, int j) const { return (i + j) * (i + j + 1) / 2 + j; }
  const Field* F_ = nullptr;
  int D_ = 0;
  std::vector<FieldElem> c_;
};

// The Lubin-Tate formal group of [pi](T) = T^q + pi T.
class LTGroup {
 public:
  explicit LTGroup(FieldPtr F) : F_(std::move(F)) {}

  const Field* field() const { return F_.get(); }
  const FieldPtr& field_ptr() const { return F_; }

  Series pi_series() const;               // T^q + pi T
  Series iterate_pi(int n) const;         // [pi^n](T), exact
  Series torsion_poly(int n) const;       // Q_n, exact
  Series log(int order) const;            // lambda = log_LT mod T^order
  Series log_derivative(int order) const; // lambda'
  Series a_series(int order) const;       // 1 / lambda'
  Series exp(int order) const;            // exp_LT mod T^order
  Series scalar(const FieldElem& a, int order) const;  // [a](T)
  // Formal group law X (+) Y to total degree D.
  BiPoly law(int D) const;
  // X (+) Y for series without constant term.
  Series add(const Series& X, const Series& Y, int order) const;

 private:
  FieldPtr F_;
  void ensure_factorials(int n) const;
  FieldElem binom(int n, int k) const;
  // [T^m] P^k coefficient table access: binom(k, j) pi^(k - j) with m = k + j (q - 1)
  FieldElem pk_coeff(int k, int j) const;

  mutable std::recursive_mutex mu_;
  mutable std::vector<FieldElem> fact_, inv_fact_;
  mutable std::vector<FieldElem> log_;  // log_[m] = coefficient of T^m, log_[0] = 0
  mutable std::map<int, Series> exp_cache_;
  mutable std::map<int, BiPoly> law_cache_;
};

}  // namespace ltpg
