#pragma once

#include <functional>

#include "quasiwork/types.hpp"

namespace quasiwork {

struct DerivativeResult {
  cplx value;
  double err_estimate;
  bool converged;
};

// n-th central derivative at 0 of a complex-valued function, Richardson
// extrapolated over the step sequence (h, h/2, h/4). Minimal O(h^2) stencils,
// two Richardson levels, so the truncation error is O(h^6).
DerivativeResult central_derivative(const std::function<cplx(double)>& f, int n,
                                    double h);

// Same, reusing previously computed samples: eval(u) must be callable for all
// stencil points u in {0, +-h/4, ..., +-(3/... ) * h} needed by order n.
std::vector<double> central_stencil_points(int n, double h);

// Moment < w^n > = (-i)^n d^n chi / du^n (0). Throws NumericalError if the
// imaginary residue exceeds 1e-7 relative or the extrapolation fails to settle.
double moment_from_chf(const std::function<cplx(double)>& chi, int n, double h);

}  // namespace quasiwork
