#pragma once

#include <array>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "common.hpp"

namespace ltpg {

constexpr int kMaxF = 6;

class Field;

// p^v * U with U a unit of O_F given by coordinates in the basis 1, w, ..., w^(f-1)
// modulo p^(prec - v).  Zero elements carry only their absolute precision.
class FieldElem {
 public:
  FieldElem() = default;

  static FieldElem zero(const Field* F, int prec = kInf);
  static FieldElem from_int(const Field* F, int64_t n, int prec = kInf);
  static FieldElem from_rational(const Field* F, int64_t a, int64_t b, int prec = kInf);
  static FieldElem from_coords(const Field* F, const std::vector<int64_t>& c, int prec = kInf);
  static FieldElem gen(const Field* F, int prec = kInf);  // w

  const Field* field() const { return F_; }
  int val() const { return is_zero() ? prec_ : v_; }
  int prec() const { return prec_; }
  int relprec() const { return is_zero() ? 0 : prec_ - v_; }
  bool is_zero() const;
  bool is_exact_zero() const { return is_zero() && prec_ >= kInf; }
  bool is_unit() const { return !is_zero() && v_ == 0; }
  const std::array<uint64_t, kMaxF>& digits() const { return d_; }

  FieldElem operator+(const FieldElem& o) const;
  FieldElem operator-(const FieldElem& o) const;
  FieldElem operator-() const;
  FieldElem operator*(const FieldElem& o) const;
  FieldElem operator/(const FieldElem& o) const { return *this * o.inv(); }
  FieldElem& operator+=(const FieldElem& o) { return *this = *this + o; }
  FieldElem& operator-=(const FieldElem& o) { return *this = *this - o; }
  FieldElem& operator*=(const FieldElem& o) { return *this = *this * o; }

  FieldElem inv() const;
  FieldElem mul_int(int64_t n) const;
  FieldElem div_int(int64_t n) const;
  FieldElem mul_p_pow(int k) const;   // times p^k
  FieldElem mul_pi_pow(int k) const;  // times pi^k (k may be negative)
  FieldElem div_pi() const { return mul_pi_pow(-1); }
  FieldElem pow(int64_t e) const;

  // Lower the absolute precision to at most P.
  FieldElem with_prec(int P) const;
  // Treat the stored digits as exact (used when a solver candidate is checked).
  FieldElem lifted() const;
  // Equality modulo the meet of the two precisions.
  bool equals(const FieldElem& o) const { return (*this - o).is_zero(); }

  // Coordinates of the element times p^-val, as signed values in the balanced range.
  std::vector<int64_t> unit_coords_balanced() const;
  // Coordinates of the element in the basis 1..w^(f-1) as residues mod p^(prec) when val >= 0.
  std::vector<uint64_t> coords_mod(int P) const;

  FieldElem frobenius() const;

  std::string str() const;        // canonical: pi^v * (d0 + d1*w) mod pi^N
  std::string compact() const;    // integers / rationals in w, no precision

 private:
  friend class Field;
  void normalize(int v0, int R);

  const Field* F_ = nullptr;
  int v_ = 0;
  int prec_ = kInf;
  std::array<uint64_t, kMaxF> d_{};
};

struct FieldConfig {
  int p = 2;
  int f = 2;
  std::vector<int64_t> minpoly;  // c_0..c_{f-1}, monic; empty selects the smallest irreducible
  std::vector<int64_t> unit_u;   // coordinates of the unit; empty means 1
  int N = 16;
};

class Field : public std::enable_shared_from_this<Field> {
 public:
  static std::shared_ptr<const Field> make(const FieldConfig& cfg);

  int p() const { return p_; }
  int f() const { return f_; }
  int64_t q() const { return q_; }
  int N() const { return N_; }
  int kcap() const { return kcap_; }
  int n0() const { return p_ == 2 ? 2 : 1; }
  const std::vector<int64_t>& minpoly() const { return minpoly_; }
  const FieldConfig& config() const { return cfg_; }

  FieldElem one(int prec = kInf) const { return FieldElem::from_int(this, 1, prec); }
  FieldElem zero(int prec = kInf) const { return FieldElem::zero(this, prec); }
  FieldElem integer(int64_t n, int prec = kInf) const { return FieldElem::from_int(this, n, prec); }
  const FieldElem& unit_u() const { return u_; }
  const FieldElem& pi() const { return pi_; }
  const FieldElem& q_elem() const { return qe_; }
  FieldElem pi_pow(int k) const;

  // Random element of p^v O_F known to absolute precision prec.
  FieldElem random(std::mt19937_64& rng, int v, int prec) const;
  FieldElem random_unit(std::mt19937_64& rng, int prec) const;

  // p-adic logarithm and exponential.  log needs x in 1 + p^n0 O_F,
  // exp needs val(x) >= n0.
  FieldElem plog(const FieldElem& x) const;
  FieldElem pexp(const FieldElem& x) const;
  // log on all of 1 + pO_F (for p = 2 via log(x^2)/2).
  FieldElem plog_principal(const FieldElem& x) const;

  // Trace and norm down to Q_p, returned as elements of F.
  FieldElem trace_qp(const FieldElem& x) const;

  // Numbers without a "mod pi^k" suffix get absolute precision default_prec (N when negative).
  FieldElem parse(const std::string& s, int default_prec = -1) const;
  // Image of w under the arithmetic Frobenius.
  const FieldElem& frob_w() const { return frob_w_; }

  // Internal arithmetic helpers.
  uint64_t modR(unsigned __int128 x, int R) const {
    if (p_ == 2) return R >= 64 ? (uint64_t)x : (uint64_t)(x & ((((unsigned __int128)1) << R) - 1));
    return (uint64_t)(x % ppow_[R]);
  }
  uint64_t ppow(int k) const { return ppow_[k]; }
  void mul_units(const uint64_t* a, const uint64_t* b, uint64_t* out, int R) const;
  void inv_unit(const uint64_t* a, uint64_t* out, int R) const;
  int vp_u64(uint64_t x) const;

 private:
  Field() = default;
  void init(const FieldConfig& cfg);

  FieldConfig cfg_;
  int p_ = 2, f_ = 1, N_ = 16, kcap_ = 60;
  int64_t q_ = 2;
  std::vector<int64_t> minpoly_;
  std::vector<uint64_t> ppow_;
  std::vector<std::array<uint16_t, kMaxF>> inv_table_;  // inverses in the residue field
  FieldElem u_, pi_, qe_, frob_w_;
};

using FieldPtr = std::shared_ptr<const Field>;

// Smallest monic irreducible polynomial of degree f mod p in lexicographic order.
std::vector<int64_t> default_minpoly(int p, int f);
bool irreducible_mod_p(const std::vector<int64_t>& low, int p);
int64_t vp_int(int64_t n, int p);

}  // namespace ltpg
