#include "quasiwork/coherence.hpp"

#include <cmath>

namespace quasiwork {

namespace {

// p^{it+1} for real p > 0.
cplx cpow_it1(double p, double t) {
  if (!(p > 0.0)) return 0.0;
  return p * std::exp(I * t * std::log(p));
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

std::vector<double> cumulants_from_moments(const std::vector<double>& m, int order) {
  std::vector<double> kappa(static_cast<size_t>(order) + 1, 0.0);
  for (int n = 1; n <= order; ++n) {
    double k = m[static_cast<size_t>(n)];
    for (int j = 1; j < n; ++j)
      k -= binom(n - 1, j - 1) * kappa[static_cast<size_t>(j)] *
           m[static_cast<size_t>(n - j)];
    kappa[static_cast<size_t>(n)] = k;
  }
  return kappa;
}

}  // namespace

cplx coherence_chf(const CoherenceLaw& law, double t) {
  if (law.eta < 0.0 || law.eta > 1.0) throw ContractError("coherence_chf: eta in [0,1]");
  const cplx dit = std::exp(I * t * std::log(law.D));
  return dit * (cpow_it1(law.p_top(), t) + (law.D - 1.0) * cpow_it1(law.p_rest(), t));
}

cplx duG(const CoherenceLaw& law, double w_mean, double delta_F, double t) {
  double w1;
  if (law.eta > 0.0) {
    w1 = (w_mean - (1.0 - law.eta) * delta_F) / law.eta;
  } else {
    if (std::abs(w_mean - delta_F) > 1e-10)
      throw ContractError("duG: eta = 0 inconsistent with <w> != dF");
    w1 = delta_F;
  }
  // Tr{rho^{1+it} dH} = p_top^{1+it} w1 + p_rest^{1+it} (D dF - w1); the
  // degenerate subspace contributes through its trace, so only the
  // normalization carries the (D-1) multiplicity.
  const double w2 = law.D * delta_F - w1;
  const cplx a = cpow_it1(law.p_top(), t);
  const cplx r = cpow_it1(law.p_rest(), t);
  return (a * w1 + r * w2) / (a + (law.D - 1.0) * r);
}

std::vector<double> cumulants_from_atoms(const std::vector<oracle::JointAtom>& atoms,
                                         double beta, int order) {
  std::vector<double> m(static_cast<size_t>(order) + 1, 0.0);
  for (const auto& a : atoms) {
    const double s = beta * a.w + a.C;
    double pw = 1.0;
    for (int n = 0; n <= order; ++n) {
      m[static_cast<size_t>(n)] += a.mass * pw;
      pw *= s;
    }
  }
  return cumulants_from_moments(m, order);
}

std::vector<double> cumulant_series(const std::vector<oracle::JointAtom>& atoms,
                                    double beta, int order) {
  if (!(beta > 0.0)) throw ContractError("cumulant_series: beta must be positive");
  const std::vector<double> kappa = cumulants_from_atoms(atoms, beta, order);
  std::vector<double> partial;
  double acc = 0.0;
  double fact = 1.0;
  for (int n = 1; n <= order; ++n) {
    fact *= n;
    acc += ((n % 2 == 1) ? 1.0 : -1.0) * kappa[static_cast<size_t>(n)] / fact;
    partial.push_back(acc / beta);
  }
  return partial;
}

std::vector<double> cumulants_from_samples(
    const std::vector<std::pair<double, double>>& weighted_values, int order) {
  std::vector<double> m(static_cast<size_t>(order) + 1, 0.0);
  for (const auto& [s, wgt] : weighted_values) {
    double pw = 1.0;
    for (int n = 0; n <= order; ++n) {
      m[static_cast<size_t>(n)] += wgt * pw;
      pw *= s;
    }
  }
  return cumulants_from_moments(m, order);
}

double gaussian_bound(double mean_w, double var_w, double cov_wC, double beta) {
  if (!(beta > 0.0)) throw ContractError("gaussian_bound: beta must be positive");
  return mean_w - beta * var_w / 2.0 - cov_wC;
}

JointMoments joint_moments(const std::vector<oracle::JointAtom>& atoms) {
  JointMoments jm;
  double m2w = 0.0, mwc = 0.0;
  for (const auto& a : atoms) {
    jm.mean_w += a.mass * a.w;
    jm.mean_C += a.mass * a.C;
    m2w += a.mass * a.w * a.w;
    mwc += a.mass * a.w * a.C;
  }
  jm.var_w = m2w - jm.mean_w * jm.mean_w;
  jm.cov_wC = mwc - jm.mean_w * jm.mean_C;
  return jm;
}

}  // namespace quasiwork
