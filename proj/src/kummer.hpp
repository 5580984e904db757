#pragma once

#include <vector>

#include "bigexp.hpp"

namespace ltpg {

// x_1..x_nmax with Tr^LT_{F_(n+1)/F_n}(x_(n+1)) = [q/pi](x_n); x[n - 1] lives at level n.
struct SSeq {
  std::vector<TowerElem> x;
  int nmax() const { return (int)x.size(); }
  const TowerElem& at(int n) const { return x[n - 1]; }
};

struct SBuild {
  SSeq s;
  int ell = 0, ell1 = 0, ell2 = 0;
  std::vector<TowerElem> y;     // y_n = pi^-ell1 log_LT(x_n)
  std::vector<int> relation;    // v(Tr^LT x_(n+1) - [q/pi] x_n) for n = 1..nmax-1
  int point_residual = kInf;    // v(x_k - [pi^ell] z)
};

// Lubin-Tate log and exp on tower elements.
TowerElem lt_log(const Tower& T, const TowerElem& x);
TowerElem lt_exp(const Tower& T, const TowerElem& x);
// v(Tr^LT x_(n+1) - [q/pi] x_n)
int s_relation_residual(const Tower& T, const TowerElem& x_next, const TowerElem& x);

// x in S with x_k = [pi^ell](z).  Throws UnsupportedBase when q = pi.
SBuild build_s_from_point(const Tower& T, const TowerElem& z, int nmax);

struct Interp {
  Series f;
  int window = 0;        // unknown coefficients T^0..T^(window-1)
  int psi_rows = 0;      // psi(f) = f/pi imposed on T^0..T^(psi_rows-1)
  int rank = 0, pivot_loss = 0;
  FieldElem g0;          // the value forced by the g(0) equation
  int psi_residual = 0;  // v(psi f - f/pi) on [0, psi_rows), recomputed with Ops::psi
  std::vector<int> eval_residual;  // v(f(u_n) - y_n)
};
// Polynomial f of degree < window with psi(f) = f/pi on low degrees and f(u_n) = y_n.
// ys[n - 1] lives at level n.  Throws UnsupportedBase when q = pi, Infeasible when the
// window cannot meet the constraints.
Interp interp_log(const LTGroup& G, const Tower& T, const std::vector<TowerElem>& ys, int window);
// Smallest multiple of q that is >= at_least and leaves room for the constraints of levels 1..nmax.
int interp_window(const Tower& T, int nmax, int at_least);

// x with x_k replaced by x_k (+) z for a [q/pi]-torsion point z; the result is again in S
// and has the same logarithms, so x is not determined by an interpolant of log x.
SSeq torsion_shift(const Tower& T, const SSeq& x, int k, const TowerElem& z);

struct KummerReport {
  int psi_residual = kInf;          // psi(df) - df on the readable window
  std::vector<int> log_residual;    // f(u_n) - log_LT(x_n)
  std::vector<int> ladder_residual; // dualexp_rhs(n) - (q/pi)^-n log_LT(x_n)
  std::vector<int> jet_residual;    // phi^-n(df) - pi^n d(phi^-n f) at t^0
  bool zero = false;
};
// Checks the computable content attached to x in S and its interpolant f.
KummerReport kummer_shell(const LTGroup& G, const Tower& T, const SSeq& x, const Interp& in);

}  // namespace ltpg
