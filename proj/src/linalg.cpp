#include "linalg.hpp"

#include <algorithm>
#include <numeric>

namespace ltpg {

std::vector<FieldElem> Mat::apply(const std::vector<FieldElem>& x) const {
  std::vector<FieldElem> y(r_, FieldElem::zero(F_));
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) {
      const FieldElem& a = at(i, j);
      if (a.is_exact_zero() || x[j].is_exact_zero()) continue;
      y[i] += a * x[j];
    }
  return y;
}

SolveResult solve(const Mat& A, const std::vector<FieldElem>& b, bool want_kernel) {
  const Field* F = A.field();
  const int R = A.rows(), C = A.cols();
  Mat M = A;
  std::vector<FieldElem> rhs = b;
  std::vector<int> colp(C);
  std::iota(colp.begin(), colp.end(), 0);
  SolveResult res;
  int r = 0;
  for (; r < std::min(R, C); ++r) {
    int bi = -1, bj = -1, bv = kInf;
    for (int i = r; i < R; ++i)
      for (int j = r; j < C; ++j) {
        const FieldElem& x = M.at(i, colp[j]);
        if (x.is_zero()) continue;
        if (x.val() < bv) bv = x.val(), bi = i, bj = j;
      }
    if (bi < 0) break;
    res.pivot_loss = std::max(res.pivot_loss, bv);
    if (bi != r) {
      for (int j = 0; j < C; ++j) std::swap(M.at(r, j), M.at(bi, j));
      std::swap(rhs[r], rhs[bi]);
    }
    std::swap(colp[r], colp[bj]);
    FieldElem inv = M.at(r, colp[r]).inv();
    for (int i = r + 1; i < R; ++i) {
      const FieldElem& lead = M.at(i, colp[r]);
      if (lead.is_exact_zero()) continue;
      FieldElem t = lead * inv;
      for (int j = r; j < C; ++j) {
        const FieldElem& y = M.at(r, colp[j]);
        if (y.is_exact_zero()) continue;
        M.at(i, colp[j]) -= t * y;
      }
      rhs[i] -= t * rhs[r];
    }
  }
  res.rank = r;
  for (int i = r; i < R; ++i)
    if (!rhs[i].is_zero()) res.consistent = false;
  // back substitution with free variables zero
  res.x.assign(C, FieldElem::zero(F));
  for (int i = r - 1; i >= 0; --i) {
    FieldElem s = rhs[i];
    for (int j = i + 1; j < r; ++j) {
      const FieldElem& y = M.at(i, colp[j]);
      if (y.is_exact_zero()) continue;
      s -= y * res.x[colp[j]];
    }
    res.x[colp[i]] = s / M.at(i, colp[i]);
  }
  if (want_kernel) {
    for (int fcol = r; fcol < C; ++fcol) {
      std::vector<FieldElem> v(C, FieldElem::zero(F));
      v[colp[fcol]] = F->one();
      for (int i = r - 1; i >= 0; --i) {
        FieldElem s = F->zero();
        const FieldElem& y0 = M.at(i, colp[fcol]);
        if (!y0.is_exact_zero()) s -= y0;
        for (int j = i + 1; j < r; ++j) {
          const FieldElem& y = M.at(i, colp[j]);
          if (y.is_exact_zero()) continue;
          s -= y * v[colp[j]];
        }
        v[colp[i]] = s / M.at(i, colp[i]);
      }
      res.kernel.push_back(std::move(v));
    }
  }
  return res;
}

FieldElem det(const Mat& A) {
  const int n = A.rows();
  Mat M = A;
  FieldElem d = A.field()->one();
  for (int r = 0; r < n; ++r) {
    int bi = -1, bv = kInf;
    for (int i = r; i < n; ++i)
      if (!M.at(i, r).is_zero() && M.at(i, r).val() < bv) bv = M.at(i, r).val(), bi = i;
    if (bi < 0) {
      // zero at precision: the determinant is zero with the precision of the column
      int P = kInf;
      for (int i = r; i < n; ++i) P = std::min(P, M.at(i, r).prec());
      return FieldElem::zero(A.field(), sat_add(P, d.val()));
    }
    if (bi != r) {
      for (int j = 0; j < n; ++j) std::swap(M.at(r, j), M.at(bi, j));
      d = -d;
    }
    d *= M.at(r, r);
    FieldElem inv = M.at(r, r).inv();
    for (int i = r + 1; i < n; ++i) {
      if (M.at(i, r).is_exact_zero()) continue;
      FieldElem t = M.at(i, r) * inv;
      for (int j = r; j < n; ++j)
        if (!M.at(r, j).is_exact_zero()) M.at(i, j) -= t * M.at(r, j);
    }
  }
  return d;
}

int rank(const Mat& A) { return solve(A, std::vector<FieldElem>(A.rows(), FieldElem::zero(A.field()))).rank; }

Mat identity(const Field* F, int n) {
  Mat I(F, n, n);
  for (int i = 0; i < n; ++i) I.at(i, i) = F->one();
  return I;
}

Mat operator*(const Mat& A, const Mat& B) {
  Mat C(A.field(), A.rows(), B.cols());
  for (int i = 0; i < A.rows(); ++i)
    for (int k = 0; k < A.cols(); ++k) {
      const FieldElem& a = A.at(i, k);
      if (a.is_exact_zero()) continue;
      for (int j = 0; j < B.cols(); ++j)
        if (!B.at(k, j).is_exact_zero()) C.at(i, j) += a * B.at(k, j);
    }
  return C;
}

Mat operator+(const Mat& A, const Mat& B) {
  Mat C = A;
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j) C.at(i, j) += B.at(i, j);
  return C;
}

Mat operator-(const Mat& A, const Mat& B) {
  Mat C = A;
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j) C.at(i, j) -= B.at(i, j);
  return C;
}

Mat scale(const Mat& A, const FieldElem& c) {
  Mat C = A;
  for (int i = 0; i < A.rows(); ++i)
    for (int j = 0; j < A.cols(); ++j) C.at(i, j) = C.at(i, j) * c;
  return C;
}

Mat inverse(const Mat& A) {
  const int n = A.rows();
  Mat R(A.field(), n, n);
  for (int j = 0; j < n; ++j) {
    std::vector<FieldElem> e(n, FieldElem::zero(A.field()));
    e[j] = A.field()->one();
    SolveResult s = solve(A, e);
    if (s.rank < n) fail(Err::Singular, "matrix is singular at working precision");
    for (int i = 0; i < n; ++i) R.at(i, j) = s.x[i];
  }
  return R;
}

}  // namespace ltpg
