#pragma once

#include <string>
#include <vector>

#include "field.hpp"
#include "parse.hpp"

namespace ltpg {

// Largest exponent span kept by any product before it is truncated.
constexpr int kDegreeBudget = 1 << 13;

// Truncated Laurent series sum_{k} c_k T^k.  Coefficients for exponents in
// [lo, hi) are stored, each with its own absolute precision.  Exponents
// outside the window are summarized by valuation bounds: every coefficient
// below lo has valuation >= tau_lo, every coefficient at or above hi has
// valuation >= tau_hi.  A bound of kInf means those coefficients are zero.
class Series {
 public:
  Series() = default;
  explicit Series(const Field* F) : F_(F) {}

  static Series zero(const Field* F) { return Series(F); }
  static Series constant(const FieldElem& x);
  static Series monomial(const FieldElem& x, int k);
  static Series var(const Field* F) { return monomial(F->one(), 1); }
  // All coefficients unknown beyond a valuation bound tau.
  static Series unknown(const Field* F, int tau);
  static Series from_coeffs(const Field* F, int lo, std::vector<FieldElem> c, int tau_lo = kInf, int tau_hi = kInf);
  static Series from_literal(const Field* F, const LaurentPoly& lp);
  static Series parse(const Field* F, const std::string& s, int default_prec);

  const Field* field() const { return F_; }
  int lo() const { return lo_; }
  int hi() const { return lo_ + (int)c_.size(); }
  int tau_lo() const { return tau_lo_; }
  int tau_hi() const { return tau_hi_; }
  const std::vector<FieldElem>& coeffs() const { return c_; }
  bool window_empty() const { return c_.empty(); }
  bool is_plus() const { return tau_lo_ >= kInf; }
  bool high_exact() const { return tau_hi_ >= kInf; }

  // Coefficient of T^k (tail bounds become zero-with-precision).
  FieldElem coeff(int k) const;
  // Lowest exponent with a nonzero stored coefficient; hi() when none.
  int start() const;
  int end() const;  // one past the highest nonzero stored coefficient
  // Minimum valuation over every coefficient including tails.
  int vmin() const;
  // Minimum valuation over exponents in [a, b).
  int val_range(int a, int b) const;
  // Minimum coefficient precision over the stored window.
  int min_prec() const;

  Series operator+(const Series& o) const;
  Series operator-(const Series& o) const;
  Series operator-() const;
  Series operator*(const Series& o) const;
  Series& operator+=(const Series& o) { return *this = *this + o; }
  Series& operator-=(const Series& o) { return *this = *this - o; }
  Series& operator*=(const Series& o) { return *this = *this * o; }

  Series scale(const FieldElem& a) const;
  Series mul_int(int64_t n) const { return scale(F_->integer(n)); }
  Series shift(int k) const;  // times T^k
  // Drop exponents >= n (resp. < n), folding them into the tail bound.
  Series truncate_hi(int n) const;
  Series truncate_lo(int n) const;
  Series truncate(int a, int b) const { return truncate_hi(b).truncate_lo(a); }
  // Keep only exponents < n and treat the result as a polynomial (tail exactly zero).
  Series cut_hi(int n) const;
  // Extend the window to n (making implicit coefficients explicit) and then
  // replace the high tail bound.
  Series with_tail_hi(int n, int tau) const;
  // Treat the stored coefficients as exact and the tails as zero.
  Series lifted() const;
  // Lower every coefficient precision (and the tails) to at most P.
  Series with_prec(int P) const;
  Series derivative() const;  // d/dT
  Series map_coeffs(FieldElem (*fn)(const FieldElem&)) const;

  std::string str() const;

 private:
  void trim();
  friend Series mul_impl(const Series& f, const Series& g);

  const Field* F_ = nullptr;
  int lo_ = 0;
  std::vector<FieldElem> c_;
  int tau_lo_ = kInf;
  int tau_hi_ = kInf;
};

inline Series operator*(const Series& s, const FieldElem& a) { return s.scale(a); }

// Multiplicative inverse up to exponent < order (relative to the leading term).
Series inverse(const Series& g, int order);
// f(g) on exponents < order.  Plus f needs g(0) = 0; Laurent f needs g = T * unit.
// Exponents of negative parts are kept down to depth.
Series compose(const Series& f, const Series& g, int order);
// Compositional inverse of f = c T + ..., c a unit of F.
Series reverse(const Series& f, int order);
Series power(const Series& f, int64_t n, int order);

// Residual valuation of x on exponents [a, b): the largest v with x = 0 mod pi^v there.
inline int resval(const Series& x, int a, int b) { return x.val_range(a, b); }

}  // namespace ltpg
