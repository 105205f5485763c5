#pragma once

#include <functional>
#include <vector>

#include "quasiwork/types.hpp"

namespace quasiwork {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  int max_depth = 32;
  std::vector<double> breakpoints;  // interior seed points for the first split
};

// Adaptive Gauss-Kronrod (G7,K15) on [a,b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opt = {});
cplx integrate_complex(const std::function<cplx(double)>& f, double a, double b,
                       const QuadratureOptions& opt = {});

// Integral of the continuous complex logarithm of w(k) over [a,b]. The branch
// is fixed by unwrapping arg w along an ordered reference sweep; a panel whose
// neighbouring reference phases jump by more than pi/2 triggers refinement,
// and refinement past the cap raises NumericalError (branch ambiguity).
cplx integrate_log_unwrapped(const std::function<cplx(double)>& w, double a, double b,
                             const QuadratureOptions& opt = {},
                             int initial_sweep_points = 1024);

}  // namespace quasiwork
