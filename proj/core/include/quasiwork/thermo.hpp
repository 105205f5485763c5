#pragma once

#include <functional>

#include "quasiwork/model.hpp"
#include "quasiwork/types.hpp"

namespace quasiwork {

// Complex variance law of the asymptotic quasiprobability,
// p_q(w) ~ Re[(2 pi v_q)^{-1/2} exp(-(w-w_bar)^2 / 2 v_q)], v_q = sigma2 + i r.
struct GaussianWorkLaw {
  double w_bar = 0.0;
  double sigma2 = 0.0;
  double r_q = 0.0;
  int L = 0;
  cplx v() const { return {sigma2, r_q}; }
  double sigma() const;
  double operator()(double w) const;  // real (possibly negative) density
  bool strong_negativity() const { return r_q > sigma2; }
};

// Intensive cumulant function g_q(u) = (2 pi)^{-1} int_0^pi ln(X^{(k)}/Z_k^2) dk.
cplx g_q(const QuenchSpec& spec, double u, double abs_tol = 1e-10);

double mean_work(const QuenchSpec& spec);      // extensive, ~ L
double variance_work(const QuenchSpec& spec);  // extensive
double r_q(const QuenchSpec& spec);            // extensive, odd under q -> 1-q

GaussianWorkLaw gaussian_law(const QuenchSpec& spec);
GaussianWorkLaw gaussian_law(const QuenchSpec& spec, double q);

double negativity_asymptotic(const GaussianWorkLaw& law);
double kurtosis_asymptotic(const GaussianWorkLaw& law);
double fourth_moment_asymptotic(const GaussianWorkLaw& law);

// beta -> 0 closed forms of (d_u g(0), d_u^2 g(0)) for a constant phase.
std::pair<cplx, cplx> high_temp_derivatives(const QuenchSpec& spec);

// W_ex = -<w> in the beta -> 0 limit (coherence-extracted work).
double work_extracted_high_temp(const QuenchSpec& spec);

// Scaling-limit coherent work (lambda0 near 1, couplings J = c/(2a)):
// (lambda0 - lambda_tau) sin(2 phi_pi) L / (pi beta) * g_FD(beta m c^2).
double coherent_work_scaling(double lambda0, double lambda_tau, double phi_pi, int L,
                             double beta, double J);
double fermi_dirac(double x);  // 1 / (1 + e^{|x|})
// Quadrature of int_0^inf y / (sqrt(1+y^2) cosh^2(x sqrt(1+y^2)/2)) dy.
double fermi_dirac_integral_quadrature(double x);
double fermi_dirac_integral_closed(double x);  // 4 / ((1+e^{|x|}) |x|)

// int |complex Gaussian| dw by quadrature (oracle for negativity_asymptotic).
double negativity_modulus_quadrature(const GaussianWorkLaw& law);

}  // namespace quasiwork
