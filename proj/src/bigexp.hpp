#pragma once

#include <vector>

#include "phigamma.hpp"

namespace ltpg {

// A filtered phi-module over F given by its matrix: phi(d_j) = sum_i phi_ij d_i,
// with Fil^-h D = D.
struct FPhiModData {
  int dim = 1;
  Mat phi;
  int h = 0;
};

constexpr int kJetBound = 12;

// R+ (x) D as a module with trivial Gamma action on D.
class FPhiMod {
 public:
  FPhiMod(const Ops& O, FPhiModData d);

  const FPhiModData& data() const { return d_; }
  const PhiGammaMod& module() const { return D_; }
  const Ops& ops() const { return D_.ops(); }
  const Field* field() const { return D_.field(); }
  int dim() const { return d_.dim; }
  int h() const { return d_.h; }
  const Mat& phi() const { return d_.phi; }
  Mat phi_pow(int k) const;  // k may be negative
  // Valuations of the eigenvalues of phi, with multiplicity, as num/den pairs.
  const std::vector<std::pair<int, int>>& slopes() const { return slopes_; }
  // Every eigenvalue has valuation >= -h.
  bool slopes_bounded(int h) const;
  // D(chi_pi^j) in the basis t^-j e_j (x) d_i: phi -> pi^-j phi, h -> h + j.
  FPhiModData twisted(int j) const;

 private:
  FPhiModData d_;
  PhiGammaMod D_;
  Mat inv_;
  std::vector<std::pair<int, int>> slopes_;
};

// Coefficients of the characteristic polynomial det(x - A), low degree first.
Vec charpoly(const Mat& A);

// d^k f(0) for k <= K via the t-expansion f(exp_LT(t)) = sum f_k t^k.
std::vector<Vec> t_jet_at_zero(const FPhiMod& D, const ModElem& f, int K);

struct DeltaComponent {
  int k = 0;
  Vec value;                    // d^k f(0)
  std::vector<Vec> functionals;  // basis of the left kernel of 1 - pi^k phi
  Vec cls;                      // functionals applied to value
  bool zero = true;
};
std::vector<DeltaComponent> delta_map(const FPhiMod& D, const ModElem& f, int h);

struct ColcolSolution {
  ModElem f, y;
  int h = 0;
  std::vector<Vec> Y;                    // y = sum_(k<=h) Y_k t^k + P, P divisible by T^(h+1)
  std::vector<std::pair<int, Vec>> kernel;  // (k, v) with phi v = pi^-k v
  bool ambiguous = false;                // kernel non-empty
  bool omega_ambiguous = false;          // kernel in degree h
  int residual = 0;                      // v((1 - phi) y - f) on [0, M)
  int iterations = 0;
};
// (1 - phi) y = f with the degrees <= h solved by linear algebra and the tail by
// sum phi^i.  Throws ObstructionNonzero when Delta(f) != 0, DomainError when a slope of
// phi is below -h, OperatorDiverges when the tail sum stalls.
ColcolSolution solve_one_minus_phi(const FPhiMod& D, const ModElem& f, int h);
// nabla_(h-1) o ... o nabla_0 (y).
ModElem omega(const FPhiMod& D, const ColcolSolution& s);
ModElem omega_vh(const FPhiMod& D, const ModElem& f, int h);

// phi^-n(t^-pole g) as sum_k c_k t^k over F_n (x) D for pole <= k <= order.
struct Jet {
  int n = 0, lo = 0, order = 0;
  std::vector<std::vector<TowerElem>> c;  // c[k - lo][i]
  const std::vector<TowerElem>& at(int k) const { return c[k - lo]; }
};
// From the series of g, evaluating d^k g at u_n; precision is limited by the truncation of g.
Jet phi_inv_jet(const FPhiMod& D, const Tower& T, const ModElem& g, int n, int order, int pole = 0);
// From a solution of (1 - phi) y = f, using d^k y(u_n) = sum_(i<n) (pi^k phi)^i d^k f(u_(n-i))
// + (pi^k phi)^n d^k y(0).  E supplies d^k f for k >= 1 (defaults to D.ops()).
Jet phi_inv_jet(const FPhiMod& D, const Tower& T, const ColcolSolution& s, int n, int order,
                const Ops* E = nullptr);
// The t^0 coefficient; throws PoleUncancelled when the jet stops below t^0.
std::vector<TowerElem> partial_D(const Jet& j);
// q^-n d_D(phi^-n y) for n >= 1, (1 - q^-1 phi^-1) d_D(y) for n = 0.
std::vector<TowerElem> dualexp_rhs(const FPhiMod& D, const Tower& T, const ModElem& y, int n, int pole = 0);
std::vector<TowerElem> dualexp_rhs(const FPhiMod& D, const Tower& T, const ColcolSolution& s, int n);

// d^-j with zero constant term at each step.  Throws ResidueObstruction.
Series antiderivative(const Ops& O, const Series& f, int j);
ModElem antiderivative(const Ops& O, const ModElem& f, int j);

// A x for x in F_n (x) D.
std::vector<TowerElem> apply_mat(const Mat& A, const std::vector<TowerElem>& x);

}  // namespace ltpg
