#pragma once

#include <Eigen/Dense>

#include "quasiwork/types.hpp"

namespace quasiwork {

// Pfaffian of an even-dimensional antisymmetric matrix, Parlett-Reid
// tridiagonalization with partial pivoting. Returns 0 for odd dimension or a
// structurally singular column. The antisymmetry defect must stay below tol.
cplx pfaffian(Eigen::MatrixXcd A, double antisym_tol = 1e-10);
double pfaffian_real(Eigen::MatrixXd A, double antisym_tol = 1e-10);

}  // namespace quasiwork
