#pragma once

#include <functional>
#include <map>
#include <vector>

#include "ops.hpp"

namespace ltpg {

// Coordinates in the basis e_1..e_r.
using ModElem = std::vector<Series>;

ModElem operator+(const ModElem& x, const ModElem& y);
ModElem operator-(const ModElem& x, const ModElem& y);
ModElem scale(const ModElem& x, const FieldElem& a);
ModElem truncate_hi(const ModElem& x, int n);
// v(x - y) on exponents [lo, hi), minimum over coordinates.
int resval(const ModElem& x, const ModElem& y, int lo, int hi);
int resval(const ModElem& x, int lo, int hi);

// Free module over the series ring.  phi(e_j) = sum_i P_ij e_i.  Gamma acts
// either by twists, gamma_a(e_i) = a^(j_i) e_i, or by constant matrices given
// on a basis of Gamma_n.
class PhiGammaMod {
 public:
  static PhiGammaMod twist(const Ops& O, int j, int rank = 1);
  static PhiGammaMod with_twists(const Ops& O, std::vector<std::vector<Series>> P, std::vector<int> twists);
  static PhiGammaMod with_matrices(const Ops& O, std::vector<std::vector<Series>> P, const GammaBasis& b,
                                   std::vector<Mat> G);

  const Ops& ops() const { return *O_; }
  const Field* field() const { return O_->field(); }
  int rank() const { return r_; }
  bool is_twist() const { return G_.empty(); }
  const std::vector<int>& twists() const { return tw_; }
  const std::vector<std::vector<Series>>& phi_matrix() const { return P_; }
  const GammaBasis& gamma_basis() const { return gb_; }

  ModElem zero() const;
  ModElem basis(int i, const Series& f) const;  // f e_i

  ModElem phi(const ModElem& x) const;
  // psi(e r) = e psi(P^-1 r)
  ModElem psi(const ModElem& x) const;
  // g with chi(g) = a; twist modules only.
  ModElem gamma(const FieldElem& a, const ModElem& x) const;
  // g = b_1^k_1 ... b_d^k_d.  Matrix modules need b to be a p-power basis of their own.
  ModElem gamma(const GammaBasis& b, const std::vector<int64_t>& k, const ModElem& x) const;
  ModElem nabla(const ModElem& x) const;
  ModElem nabla_i(const ModElem& x, int i) const;
  // Constant part of nabla on the basis: diag(j) for twists, log(G_1)/l(b_1) otherwise.
  Mat nabla_matrix() const;
  // mult(s) on t^e e_i with s = e + j_i; twist modules only.
  ModElem nabla_fn(const ModElem& x, const std::function<FieldElem(int)>& mult) const;

  // Largest-valuation check of Mat(g) g(P) = P phi(Mat(g)) over the sampled units; returns the
  // residual valuation on [0, M).
  int commutation_residual(const std::vector<FieldElem>& units) const;

 private:
  const Ops* O_ = nullptr;
  int r_ = 0;
  std::vector<std::vector<Series>> P_, Pinv_;
  std::vector<int> tw_;
  GammaBasis gb_;
  std::vector<Mat> G_;
  Mat N_;
  void init_inverse();
  Mat gamma_matrix(const GammaBasis& b, const std::vector<int64_t>& k) const;
};

// w_delta(b_i) = log delta(b_i) / log chi(b_i); delta is F-analytic iff these agree.
struct WDelta {
  std::vector<FieldElem> w;
  bool analytic = false;
};
WDelta char_w_delta(const GammaBasis& b, const std::vector<FieldElem>& delta);

// Approximate basis of D^(psi=1): the constants of each coordinate and
// sum_k phi^k(h) for psi = 0 elements h with h(0) = 0 built from T^1..T^count.
std::vector<ModElem> psi_fixed_solve(const PhiGammaMod& D, int count);

// Cocycle on Gamma_K given by its values on powers of the basis generators.
class Cocycle {
 public:
  using Gen = std::function<ModElem(int j, int64_t k)>;
  Cocycle(const PhiGammaMod& D, GammaBasis b, Gen gen) : D_(&D), b_(std::move(b)), gen_(std::move(gen)) {}

  const PhiGammaMod& module() const { return *D_; }
  const GammaBasis& basis() const { return b_; }
  // c(b_j^k)
  ModElem at(int j, int64_t k) const;
  // c(b_1^k_1 ... b_d^k_d) = c(b_1^k_1) + b_1^k_1 c(b_2^k_2 ...)
  ModElem at(const std::vector<int64_t>& k) const;
  // v((g - 1) c(h) - (h - 1) c(g)) on [lo, hi)
  int relation_residual(const std::vector<int64_t>& g, const std::vector<int64_t>& h, int lo, int hi) const;

 private:
  const PhiGammaMod* D_;
  GammaBasis b_;
  Gen gen_;
  mutable std::map<std::pair<int, int64_t>, ModElem> cache_;
};

// b^p: basis of Gamma_(n+1) for a basis b of Gamma_n.
GammaBasis power_basis(const GammaBasis& b, int p);
// a_i = prod_j b_j^(E_ij) for an integer matrix E invertible over Z_p.
GammaBasis change_basis(const GammaBasis& b, const std::vector<std::vector<int64_t>>& E);

// c_b(y)(b_j^k) = l*(b) (b_j^k - 1)/(b_j - 1) nabla^(d-1) / prod_(i != j)(b_i - 1) (y).
Cocycle cocycle_cb(const PhiGammaMod& D, const ModElem& y, const GammaBasis& b);
// Finite-difference derivative c(b_j^(p^K)) / l(b_j^(p^K)).
ModElem cocycle_derivative(const Cocycle& c, int j, int K);
// Theta_b on module elements.
ModElem theta_b(const PhiGammaMod& D, const GammaBasis& b, const ModElem& y);

struct McSolve {
  ModElem m;
  int rank = 0, unknowns = 0;  // rank of the stacked (g - 1), psi system
  bool unique = false;
  bool consistent = false;
};
// m_c in D^(psi=0) with (phi - 1) c(b_i) = (b_i - 1) m_c for every generator.
McSolve solve_mc(const Cocycle& c);

// cor from Gamma_M with basis c.basis() = b^(p^e) to Gamma_L with basis b.
Cocycle corestrict(const Cocycle& c, const GammaBasis& b, const std::vector<int>& e);
// res to the subgroup with basis b^(p^e).
Cocycle restrict_to(const Cocycle& c, const std::vector<int>& e);
// w with (a_i - 1) w = x(a_i) - y(a_i) on the generators a_i of x, found by a dense solve;
// a_i = b^(E_i) in terms of the basis b of y.  Throws Unsolvable.
ModElem coboundary(const Cocycle& x, const Cocycle& y, const std::vector<std::vector<int64_t>>& E);

// Maps between Phi and Psi cocycles: T f(psi) = -psi(f(phi)), U f(phi) = -phi(f(psi)) + m_f.
ModElem cocycle_T(const PhiGammaMod& D, const ModElem& f_phi);
ModElem cocycle_U(const PhiGammaMod& D, const ModElem& f_psi, const ModElem& m_f);

}  // namespace ltpg
