#pragma once

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "linalg.hpp"
#include "ltgroup.hpp"

namespace ltpg {

class Tower;

// F_n = F[u]/(Q_n(u)).  Level 0 is F itself with u_0 = 0.
struct TorsionLevel {
  int n = 0;
  int d = 1;                    // q^(n-1)(q-1), 1 at level 0
  std::vector<FieldElem> low;   // Q_n = u^d + sum_{i<d} low[i] u^i
};

// Element sum_{i<d} c_i u_n^i.
class TowerElem {
 public:
  TowerElem() = default;
  TowerElem(const Tower* T, int n, std::vector<FieldElem> c) : T_(T), n_(n), c_(std::move(c)) {}

  const Tower* tower() const { return T_; }
  int level() const { return n_; }
  int degree() const { return (int)c_.size(); }
  const std::vector<FieldElem>& coords() const { return c_; }
  const FieldElem& coord(int i) const { return c_[i]; }

  TowerElem operator+(const TowerElem& o) const;
  TowerElem operator-(const TowerElem& o) const;
  TowerElem operator-() const;
  TowerElem operator*(const TowerElem& o) const;
  TowerElem operator*(const FieldElem& a) const;
  TowerElem& operator+=(const TowerElem& o) { return *this = *this + o; }
  TowerElem& operator-=(const TowerElem& o) { return *this = *this - o; }
  TowerElem& operator*=(const TowerElem& o) { return *this = *this * o; }
  TowerElem inv() const;
  TowerElem pow(int64_t e) const;
  TowerElem mul_u() const;      // times u_n
  TowerElem div_u() const;      // times u_n^-1

  bool is_zero() const;
  // Valuation in units of v(u_n) = 1/d, i.e. d * v_pi(x); a lower bound when x is zero.
  int val_d() const;
  double val() const { return (double)val_d() / degree(); }
  int min_prec() const;
  TowerElem with_prec(int P) const;
  TowerElem lifted() const;
  bool equals(const TowerElem& o) const { return (*this - o).is_zero(); }

  std::string str() const;

 private:
  const Tower* T_ = nullptr;
  int n_ = 0;
  std::vector<FieldElem> c_;
};

inline TowerElem operator*(const FieldElem& a, const TowerElem& x) { return x * a; }

class Tower {
 public:
  // The group must outlive the tower.  Levels are built on demand while
  // their degree stays within degree_budget.
  explicit Tower(const LTGroup& G, int degree_budget = 256) : G_(G), budget_(degree_budget) {}

  const LTGroup& group() const { return G_; }
  const Field* field() const { return G_.field(); }
  const TorsionLevel& level(int n) const;
  int degree(int n) const { return level(n).d; }
  // Precision the tower aims for in transcendental steps (Galois action, Tr^LT).
  int work_prec() const;

  TowerElem zero(int n) const;
  TowerElem one(int n) const;
  TowerElem constant(const FieldElem& a, int n) const;
  TowerElem u(int n) const;
  TowerElem from_coords(int n, std::vector<FieldElem> c) const;
  // "poly in u @level n"
  TowerElem parse(const std::string& s, int default_prec) const;

  // F_n -> F_m by u_n -> [pi^(m-n)](u_m).
  TowerElem embed(const TowerElem& x, int m) const;
  // f(u_n); plus series at level 0 give f(0).
  TowerElem eval(const Series& f, int n) const;
  // f(x) for a plus series f; x must lie in the maximal ideal unless f is a polynomial.
  TowerElem eval_at(const Series& f, const TowerElem& x) const;
  // u_n -> [a](u_n) extended F-linearly.
  TowerElem galois(const FieldElem& a, const TowerElem& x) const;
  // Tr_{F_m/F_n} by power sums of the conjugates of u_{k+1} over F_k.
  TowerElem trace(const TowerElem& x, int n) const;
  // The same trace as a sum over Gal(F_m/F_n) (units mod pi^m that are 1 mod pi^n).
  TowerElem trace_galois(const TowerElem& x, int n) const;
  // Lubin-Tate trace: the conjugates added with the formal group law.
  // Terms of total degree above max_degree are dropped and the precision lowered to match.
  TowerElem trace_lt(const TowerElem& x, int n, int max_degree = 32) const;
  // x (+) y with the same truncation rule.
  TowerElem lt_add(const TowerElem& x, const TowerElem& y, int max_degree = 32) const;
  // The element of F_n whose image in F_m is x.
  TowerElem descend(const TowerElem& x, int n) const;
  // y_{n+1} with Tr_{F_{n+1}/F_n}(y_{n+1}) = (q/pi) y_n.
  TowerElem trace_lift(const TowerElem& y) const;

  Mat mult_matrix(const TowerElem& x) const;
  FieldElem norm(const TowerElem& x) const;  // N_{F_n/F}
  // Representatives of Gal(F_m/F_n) as units of O_F.
  std::vector<FieldElem> galois_coset(int m, int n) const;

 private:
  const LTGroup& G_;
  int budget_;
  const TowerElem& u_image(int n, int m) const;
  const TowerElem& scalar_at(const FieldElem& a, int n) const;
  // Tr_{F_{n+1}/F_n}(u_{n+1}^j) for j < d_{n+1}.
  const std::vector<TowerElem>& power_traces(int n) const;

  mutable std::recursive_mutex mu_;
  mutable std::vector<std::unique_ptr<TorsionLevel>> levels_;
  mutable std::map<std::pair<int, int>, TowerElem> u_image_;
  mutable std::map<std::pair<std::string, int>, TowerElem> scalar_;
  mutable std::map<int, std::vector<TowerElem>> ptr_;
};

}  // namespace ltpg
