#pragma once

#include <vector>

#include "field.hpp"

namespace ltpg {

using Vec = std::vector<FieldElem>;

// Dense matrix over F, row major.
class Mat {
 public:
  Mat() = default;
  Mat(const Field* F, int rows, int cols) : F_(F), r_(rows), c_(cols), a_((size_t)rows * cols, FieldElem::zero(F)) {}

  int rows() const { return r_; }
  int cols() const { return c_; }
  const Field* field() const { return F_; }
  FieldElem& at(int i, int j) { return a_[(size_t)i * c_ + j]; }
  const FieldElem& at(int i, int j) const { return a_[(size_t)i * c_ + j]; }

  std::vector<FieldElem> apply(const std::vector<FieldElem>& x) const;

 private:
  const Field* F_ = nullptr;
  int r_ = 0, c_ = 0;
  std::vector<FieldElem> a_;
};

struct SolveResult {
  std::vector<FieldElem> x;  // one solution, free variables set to zero
  int rank = 0;
  bool consistent = true;
  // Largest pivot valuation, i.e. the digits lost to division.
  int pivot_loss = 0;
  std::vector<std::vector<FieldElem>> kernel;  // basis of the null space at precision
};

// Gaussian elimination with full pivoting on the pivot of smallest valuation.
// Entries that are zero at their precision are never used as pivots.
SolveResult solve(const Mat& A, const std::vector<FieldElem>& b, bool want_kernel = false);
int rank(const Mat& A);
FieldElem det(const Mat& A);  // square A
Mat identity(const Field* F, int n);
Mat operator*(const Mat& A, const Mat& B);
Mat operator+(const Mat& A, const Mat& B);
Mat operator-(const Mat& A, const Mat& B);
Mat scale(const Mat& A, const FieldElem& c);
Mat inverse(const Mat& A);  // throws Singular

}  // namespace ltpg
