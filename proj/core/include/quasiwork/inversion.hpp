#pragma once

#include <functional>
#include <vector>

#include "quasiwork/global_quench.hpp"
#include "quasiwork/types.hpp"

namespace quasiwork {

struct WorkHistogram {
  double dw = 0.0;
  double K = 0.0;
  std::vector<double> w;  // bin centers w_n = n dw
  std::vector<double> p;  // real masses, sum ~ 1
  double imag_residue = 0.0;     // max |Im p_n| before discarding
  bool aliasing_warning = false; // |chi| at the u-interval edge above 1e-6
  double mass() const;
  double moment(int n) const;
  double density(size_t i) const { return p[i] / dw; }
};

// Sinc-kernel Fourier inversion on u in [-2 pi K / dw, 2 pi K / dw], uniform
// trapezoid with >= 40 points per period of the fastest oscillation.
WorkHistogram histogram(const std::function<cplx(double)>& chi, double dw, double K,
                        double w_lo, double w_hi);
// Same, with chi sampled by linear interpolation of a precomputed curve.
WorkHistogram histogram(const CharacteristicCurve& curve, double dw, double K,
                        double w_lo, double w_hi);

// N = sum |p_n|; >= 1 - 1e-6 for a converged histogram.
double negativity_integral(const WorkHistogram& hist);

}  // namespace quasiwork
