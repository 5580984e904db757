#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <vector>

#include "ltgroup.hpp"
#include "tower.hpp"

namespace ltpg {

// Z_p-basis b_1..b_f of the principal units 1 + pi^n O_F, chi(b_i) = exp(pi^n w^i).
// For p = 2, n = 1 the exponential diverges and chi(b_i) = 1 + 2 w^i is used instead;
// those elements still map onto (1 + 2O_F)/(1 + 4O_F).
struct GammaBasis {
  int n = 1;
  std::vector<FieldElem> chi;
  std::vector<FieldElem> ell;  // log_p chi(b_i)
  FieldElem ell_star;          // prod ell / q^n
};

GammaBasis gamma_basis(const Field* F, int n);

// Operators on truncated series.  Plus parts are kept below exponent M, Laurent
// parts produced by phi are kept down to exponent -depth.
class Ops {
 public:
  Ops(const LTGroup& G, int M, int depth = -1);

  const LTGroup& group() const { return G_; }
  const Field* field() const { return G_.field(); }
  int M() const { return M_; }
  int depth() const { return depth_; }

  Series t() const;            // t_pi = log_LT, truncated at M with its tail bound
  Series x0() const;           // T^-1 / lambda', Res(x0) = 1
  Series phi_T() const;        // [pi](T)

  Series phi(const Series& f) const;
  Series psi(const Series& f) const;
  Series phi_pow(Series f, int k) const;
  Series psi_pow(Series f, int k) const;
  Series gamma(const FieldElem& a, const Series& f) const;
  Series partial(const Series& f, int k = 1) const;
  Series nabla(const Series& f, int k = 1) const;
  Series nabla_i(const Series& f, int i) const;  // nabla - i
  FieldElem res(const Series& f) const;
  // g with partial(g) = f and zero constant term; needs Res(f) = 0.
  Series antiderivative(const Series& f) const;

  // Functions of nabla act on t^e by mult(e).  The series is rewritten in
  // powers of t (composition with exp_LT), scaled and composed back with log_LT.
  Series nabla_fn(const Series& f, const std::function<FieldElem(int)>& mult) const;
  // nabla / (1 - g) for chi(g) = chi; on t^e it is e / (1 - chi^e), on constants -1/ell(g).
  // shift j applies it to f (x) e_j in the twist by chi_pi^j.
  Series divided_gamma(const FieldElem& chi, const Series& f, int shift = 0) const;
  // Theta_b = ell*(b) nabla^d / prod (b_i - 1).
  Series theta_b(const GammaBasis& b, const Series& f, int shift = 0) const;
  // (q^n p^(kd))^-1 sum_{0 <= a_i < p^k} b^a applied to f (finite form).
  Series theta_b_finite(const GammaBasis& b, const Series& f, int k) const;
  TowerElem theta_b_tower(const Tower& T, const GammaBasis& b, const TowerElem& x, int k) const;

  // Solvers.
  struct PsiSolve {
    Series g;
    FieldElem obstruction;  // coefficient along the cokernel generator, zero when a is generic
    int m = 0;              // a = pi^m / q, 0 when generic
    bool neumann = false;
  };
  // (psi - a) g = fin.  For a = q^-1 pi^m the component of fin along d^(m-1) x0 is
  // reported and removed first.
  PsiSolve solve_psi_minus_a(const Series& fin, const FieldElem& a, bool force_dense = false) const;
  Series psi_neumann(const Series& fin, const FieldElem& a) const;
  Series psi_dense(const Series& fin, const FieldElem& a) const;
  // m with a = pi^m / q, or -1.
  int cokernel_index(const FieldElem& a) const;
  Series cokernel_generator(int m) const;      // d^(m-1) x0
  FieldElem cokernel_functional(int m, const Series& f) const;  // Res(t^(m-1) f), normalised on the generator

  struct PhiSolve {
    Series g;
    bool kernel = false;  // a = pi^-m: g is determined up to F t^m
    int m = -1;
    Series kernel_basis;  // t^m
  };
  // (a phi - 1) g = fin on plus series.
  PhiSolve solve_a_phi_minus_one(const Series& fin, const FieldElem& a) const;

 private:
  const LTGroup& G_;
  int M_, depth_;
  mutable std::recursive_mutex mu_;
  mutable std::map<int, Series> a_cache_, dl_cache_;
  Series a_series(int order) const;
  Series dlog(int order) const;  // lambda'
};

}  // namespace ltpg
