#pragma once

#include <vector>

#include "quasiwork/dense_oracle.hpp"
#include "quasiwork/types.hpp"

namespace quasiwork {

// Mixture rho_0 = eta |Psi_G(0)><Psi_G(0)| + (1-eta) I/D at infinite
// temperature; eigenvalues {eta + (1-eta)/D, (1-eta)/D x (D-1)}.
struct CoherenceLaw {
  double eta = 0.0;
  double D = 0.0;
  double p_top() const { return eta + (1.0 - eta) / D; }
  double p_rest() const { return (1.0 - eta) / D; }
};

// <e^{itC}> = D^{it} (p_top^{it+1} + (D-1) p_rest^{it+1}).
cplx coherence_chf(const CoherenceLaw& law, double t);

// -i d_u G(0,t): weighted average of w_1 (coherent Gibbs work) and
// w_2 = D dF - w_1.
cplx duG(const CoherenceLaw& law, double w_mean, double delta_F, double t);

// Cumulants of s = beta w + C from oracle joint atoms.
std::vector<double> cumulants_from_atoms(const std::vector<oracle::JointAtom>& atoms,
                                         double beta, int order);
// Partial sums dF_N = beta^{-1} sum_{n<=N} (-1)^{n+1} kappa_n(s)/n!.
std::vector<double> cumulant_series(const std::vector<oracle::JointAtom>& atoms,
                                    double beta, int order);
// Cumulants of a plain weighted sample list (synthetic laws).
std::vector<double> cumulants_from_samples(const std::vector<std::pair<double, double>>&
                                               weighted_values,
                                           int order);

// dF = <w> - beta sigma_w^2/2 - sigma_wC for Gaussian s.
double gaussian_bound(double mean_w, double var_w, double cov_wC, double beta);

struct JointMoments {
  double mean_w = 0.0, var_w = 0.0;
  double mean_C = 0.0, cov_wC = 0.0;
};
JointMoments joint_moments(const std::vector<oracle::JointAtom>& atoms);

}  // namespace quasiwork
