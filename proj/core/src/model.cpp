#include "quasiwork/model.hpp"

#include <algorithm>
#include <cmath>

namespace quasiwork {

PhaseProfile PhaseProfile::constant(double phi) {
  PhaseProfile p;
  p.kind = Kind::Constant;
  p.phi = phi;
  return p;
}

PhaseProfile PhaseProfile::alternating(double phi_odd, double phi_even) {
  PhaseProfile p;
  p.kind = Kind::Alternating;
  p.phi_odd = phi_odd;
  p.phi_even = phi_even;
  return p;
}

PhaseProfile PhaseProfile::per_mode(std::vector<double> phis) {
  PhaseProfile p;
  p.kind = Kind::PerMode;
  p.phis = std::move(phis);
  return p;
}

double PhaseProfile::value(int n) const {
  switch (kind) {
    case Kind::Constant:
      return phi;
    case Kind::Alternating:
      return (n % 2 != 0) ? phi_odd : phi_even;
    case Kind::PerMode:
      if (n < 0 || n >= static_cast<int>(phis.size()))
        throw ContractError("PhaseProfile: per-mode index out of range");
      return phis[static_cast<size_t>(n)];
  }
  return 0.0;
}

double PhaseProfile::constant_value() const {
  if (kind != Kind::Constant)
    throw ContractError("PhaseProfile: constant profile required here");
  return phi;
}

void QuenchSpec::validate() const {
  if (L <= 0 || L % 2 != 0) throw ContractError("QuenchSpec: L must be a positive even integer");
  if (beta < 0.0) throw ContractError("QuenchSpec: beta must be >= 0");
  if (beta > 50.0) throw ContractError("QuenchSpec: beta capped at 50");
  if (q < 0.0 || q > 1.0) throw ContractError("QuenchSpec: q must lie in [0,1]");
  if (!(J > 0.0)) throw ContractError("QuenchSpec: J must be positive");
}

std::vector<double> momenta(int L, Sector sector) {
  if (L <= 0 || L % 2 != 0) throw ContractError("momenta: L must be a positive even integer");
  std::vector<double> ks;
  ks.reserve(static_cast<size_t>(L));
  for (int n = -L / 2 + 1; n <= L / 2; ++n) {
    double x = (sector == Sector::Odd) ? static_cast<double>(n)
                                       : static_cast<double>(n) - 0.5;
    ks.push_back(2.0 * PI * x / static_cast<double>(L));
  }
  std::sort(ks.begin(), ks.end());
  return ks;
}

double dispersion(double lambda, double k) {
  const double a = lambda + std::cos(k);
  const double b = std::sin(k);
  return 2.0 * std::hypot(a, b);
}

DVector dvector(double lambda, double k) {
  const double eps = dispersion(lambda, k);
  if (eps < 1e-14)
    throw ContractError("dvector: gap closure, direction undefined (eps_k < 1e-14)");
  Eigen::Vector3d d(0.0, std::sin(k), -(lambda + std::cos(k)));
  return DVector{d / d.norm(), eps};
}

double cross_x(const Eigen::Vector3d& dhat, const Eigen::Vector3d& dhat_prime) {
  return dhat.y() * dhat_prime.z() - dhat.z() * dhat_prime.y();
}

ParitySigns parity_signs(double lambda0, double lambda_tau) {
  if (std::abs(std::abs(lambda0) - 1.0) < 1e-12)
    throw ContractError("parity_signs: |lambda0| = 1 boundary, sign convention undefined");
  ParitySigns s;
  s.eta_minus = (std::abs(lambda0) > 1.0) ? -1 : 1;
  s.s_pi = ((std::abs(lambda0) < 1.0 && lambda_tau > 1.0) ||
            (std::abs(lambda_tau) < 1.0 && lambda0 > 1.0))
               ? -1
               : 1;
  s.s0 = ((std::abs(lambda0) < 1.0 && lambda_tau < -1.0) ||
          (std::abs(lambda_tau) < 1.0 && lambda0 < -1.0))
             ? -1
             : 1;
  return s;
}

ModeTable ModeTable::build(const QuenchSpec& spec, Sector sector) {
  spec.validate();
  ModeTable t;
  t.sector = sector;
  if (sector == Sector::Even) {
    t.eta = 1;
  } else {
    const ParitySigns s = parity_signs(spec.lambda0, spec.lambda_tau);
    t.eta = s.eta_minus;
    t.s0 = s.s0;
    t.s_pi = s.s_pi;
  }
  const int L = spec.L;
  const int n_lo = (sector == Sector::Even) ? 1 : 0;
  const int n_hi = L / 2;
  for (int n = n_lo; n <= n_hi; ++n) {
    ModeEntry e;
    const double x = (sector == Sector::Odd) ? static_cast<double>(n)
                                             : static_cast<double>(n) - 0.5;
    e.k = 2.0 * PI * x / static_cast<double>(L);
    e.eps = dispersion(spec.lambda0, e.k);
    e.eps_prime = dispersion(spec.lambda_tau, e.k);
    e.phi = spec.phases.value(n);
    e.paired = !(sector == Sector::Odd && (n == 0 || n == n_hi));
    if (e.paired) {
      const DVector d = dvector(spec.lambda0, e.k);
      const DVector dp = dvector(spec.lambda_tau, e.k);
      e.dhat = d.dhat;
      e.dhat_prime = dp.dhat;
      e.cross_x = cross_x(e.dhat, e.dhat_prime);
    }
    t.entries.push_back(e);
  }
  return t;
}

namespace {

// ln(2 cosh x) and ln(2 sinh x) for x >= 0, safe for large x.
double log_2cosh(double x) { return x + std::log1p(std::exp(-2.0 * x)); }
double log_2sinh(double x) {
  if (x <= 0.0) return -std::numeric_limits<double>::infinity();
  return x + std::log1p(-std::exp(-2.0 * x));
}

struct SectorLogs {
  double log_cosh_prod;
  double log_sinh_prod;  // -inf when some eps vanishes or beta = 0
};

SectorLogs sector_logs(int L, double beta, double lambda0, Sector s) {
  SectorLogs out{0.0, 0.0};
  for (double k : momenta(L, s)) {
    const double x = beta * dispersion(lambda0, k) / 2.0;
    out.log_cosh_prod += log_2cosh(x);
    out.log_sinh_prod += log_2sinh(x);
  }
  return out;
}

}  // namespace

double log_partition_function(int L, double beta, double lambda0) {
  if (L <= 0 || L % 2 != 0) throw ContractError("partition_function: L must be even");
  if (beta < 0.0) throw ContractError("partition_function: beta must be >= 0");
  const int eta_minus = (std::abs(lambda0) > 1.0) ? -1 : 1;
  const SectorLogs ev = sector_logs(L, beta, lambda0, Sector::Even);
  const SectorLogs od = sector_logs(L, beta, lambda0, Sector::Odd);
  const double terms[4] = {ev.log_cosh_prod, ev.log_sinh_prod, od.log_cosh_prod,
                           od.log_sinh_prod};
  const double signs[4] = {1.0, 1.0, 1.0, static_cast<double>(eta_minus)};
  double m = -std::numeric_limits<double>::infinity();
  for (double t : terms) m = std::max(m, t);
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) {
    if (std::isfinite(terms[i])) acc += signs[i] * std::exp(terms[i] - m);
  }
  if (!(acc > 0.0)) throw NumericalError("partition_function: nonpositive accumulation");
  return m + std::log(0.5 * acc);
}

double partition_function(int L, double beta, double lambda0) {
  return std::exp(log_partition_function(L, beta, lambda0));
}

double free_energy_change(int L, double beta, double lambda0, double lambda_tau) {
  if (!(beta > 0.0)) throw ContractError("free_energy_change: beta must be > 0");
  return -(log_partition_function(L, beta, lambda_tau) -
           log_partition_function(L, beta, lambda0)) /
         beta;
}

}  // namespace quasiwork
