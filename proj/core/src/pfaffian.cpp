#include "quasiwork/pfaffian.hpp"

#include <cmath>

namespace quasiwork {

namespace {

template <typename Mat, typename Scalar>
Scalar pfaffian_ltl(Mat& A, double antisym_tol) {
  const Eigen::Index n = A.rows();
  if (A.cols() != n) throw ContractError("pfaffian: matrix must be square");
  if ((A + A.transpose()).cwiseAbs().maxCoeff() >
      antisym_tol * std::max(1.0, A.cwiseAbs().maxCoeff()))
    throw ContractError("pfaffian: matrix not antisymmetric");
  if (n % 2 != 0) return Scalar(0);
  Scalar pf(1);
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    // Pivot: largest entry in column k below the diagonal.
    Eigen::Index kp = k + 1;
    double best = std::abs(A(k + 1, k));
    for (Eigen::Index i = k + 2; i < n; ++i) {
      const double v = std::abs(A(i, k));
      if (v > best) {
        best = v;
        kp = i;
      }
    }
    if (best == 0.0) return Scalar(0);
    if (kp != k + 1) {
      A.row(k + 1).swap(A.row(kp));
      A.col(k + 1).swap(A.col(kp));
      pf = -pf;
    }
    pf *= A(k, k + 1);
    if (k + 2 < n) {
      const Eigen::Index m = n - k - 2;
      auto tau = (A.row(k).segment(k + 2, m) / A(k, k + 1)).eval();
      auto col = A.col(k + 1).segment(k + 2, m).eval();
      A.block(k + 2, k + 2, m, m).noalias() += tau.transpose() * col.transpose();
      A.block(k + 2, k + 2, m, m).noalias() -= col * tau;
    }
  }
  return pf;
}

}  // namespace

cplx pfaffian(Eigen::MatrixXcd A, double antisym_tol) {
  return pfaffian_ltl<Eigen::MatrixXcd, cplx>(A, antisym_tol);
}

double pfaffian_real(Eigen::MatrixXd A, double antisym_tol) {
  return pfaffian_ltl<Eigen::MatrixXd, double>(A, antisym_tol);
}

}  // namespace quasiwork
