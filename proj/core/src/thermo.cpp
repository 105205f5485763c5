#include "quasiwork/thermo.hpp"

#include <cmath>

#include "quasiwork/global_quench.hpp"
#include "quasiwork/quadrature.hpp"

namespace quasiwork {

namespace {

double sech(double x) {
  const double e = std::exp(-std::abs(x));
  return 2.0 * e / (1.0 + e * e);
}

void require_off_critical(const QuenchSpec& spec, const char* who) {
  if (std::abs(std::abs(spec.lambda0) - 1.0) < 1e-12)
    throw ContractError(std::string(who) + ": |lambda0| = 1 not allowed");
}

QuadratureOptions thermo_options(const QuenchSpec& spec, double abs_tol = 1e-10) {
  QuadratureOptions opt;
  opt.abs_tol = abs_tol;
  // The integrand steepens where the gap closes; seed panels near k = pi
  // (lambda0 ~ 1) and k = 0 (lambda0 ~ -1).
  if (std::abs(spec.lambda0 - 1.0) < 0.2) opt.breakpoints = {PI - 0.3, PI - 0.05};
  if (std::abs(spec.lambda0 + 1.0) < 0.2) opt.breakpoints = {0.05, 0.3};
  return opt;
}

}  // namespace

cplx g_q(const QuenchSpec& spec, double u, double abs_tol) {
  spec.validate();
  require_off_critical(spec, "g_q");
  const bool coherent = spec.initial_state == InitialState::CoherentGibbs;
  const double phi = coherent ? spec.phases.constant_value() : 0.0;
  auto w = [&](double k) -> cplx {
    const double eps = dispersion(spec.lambda0, k);
    const double eps_p = dispersion(spec.lambda_tau, k);
    ModeEntry e;
    e.k = k;
    e.eps = eps;
    e.eps_prime = eps_p;
    e.dhat = dvector(spec.lambda0, k).dhat;
    e.dhat_prime = dvector(spec.lambda_tau, k).dhat;
    e.cross_x = cross_x(e.dhat, e.dhat_prime);
    e.phi = phi;
    cplx f = mode_factor_thermal(e, spec.beta, u);
    if (coherent) f += mode_factor_coherent(e, spec.q, u);
    const double zk2 = 2.0 * (1.0 + std::cosh(spec.beta * eps));  // Z_k^2
    return f / zk2;
  };
  // Endpoints k = 0, pi are excluded (dhat may be undefined there at |lambda|=1);
  // the integrand extends continuously, so clip by a vanishing margin.
  const double margin = 1e-9;
  QuadratureOptions opt = thermo_options(spec, abs_tol);
  return integrate_log_unwrapped(w, margin, PI - margin, opt) / (2.0 * PI);
}

double mean_work(const QuenchSpec& spec) {
  spec.validate();
  require_off_critical(spec, "mean_work");
  const bool coherent = spec.initial_state == InitialState::CoherentGibbs;
  const double sin2phi =
      coherent ? std::sin(2.0 * spec.phases.constant_value()) : 0.0;
  auto f = [&](double k) {
    const double eps = dispersion(spec.lambda0, k);
    const double x = spec.beta * eps / 2.0;
    const double s = sech(x);
    return (2.0 * (spec.lambda0 + std::cos(k)) * std::tanh(x) +
            std::sin(k) * sin2phi * s * s) /
           eps;
  };
  return (spec.lambda0 - spec.lambda_tau) * spec.L / PI *
         integrate(f, 0.0, PI, thermo_options(spec));
}

double variance_work(const QuenchSpec& spec) {
  spec.validate();
  require_off_critical(spec, "variance_work");
  const bool coherent = spec.initial_state == InitialState::CoherentGibbs;
  const double sin2phi =
      coherent ? std::sin(2.0 * spec.phases.constant_value()) : 0.0;
  auto f = [&](double k) {
    const double eps = dispersion(spec.lambda0, k);
    const double x = spec.beta * eps / 2.0;
    const double s2 = sech(x) * sech(x);
    const double t = std::tanh(x);
    const double mix =
        std::sin(k) * sin2phi * s2 + 2.0 * (spec.lambda0 + std::cos(k)) * t;
    return (2.0 - s2) - 2.0 / (eps * eps) * mix * mix;
  };
  const double dl = spec.lambda0 - spec.lambda_tau;
  return dl * dl * spec.L / PI * integrate(f, 0.0, PI, thermo_options(spec));
}

double r_q(const QuenchSpec& spec) {
  spec.validate();
  if (spec.initial_state == InitialState::Gibbs) return 0.0;
  if (spec.q == 0.5) return 0.0;
  const double cos2phi = std::cos(2.0 * spec.phases.constant_value());
  auto f = [&](double k) {
    const double x = spec.beta * dispersion(spec.lambda0, k) / 2.0;
    const double s = sech(x);
    return std::sin(k) * cos2phi * s * s;
  };
  return 2.0 * (1.0 - 2.0 * spec.q) * (spec.lambda_tau - spec.lambda0) * spec.L / PI *
         integrate(f, 0.0, PI, thermo_options(spec));
}

double GaussianWorkLaw::sigma() const { return std::sqrt(sigma2); }

double GaussianWorkLaw::operator()(double w) const {
  if (!(sigma2 > 0.0)) throw ContractError("GaussianWorkLaw: nonpositive variance");
  const cplx vq(sigma2, r_q);
  const double x = w - w_bar;
  const cplx val = std::exp(-x * x / (2.0 * vq)) / std::sqrt(2.0 * PI * vq);
  return val.real();
}

GaussianWorkLaw gaussian_law(const QuenchSpec& spec) {
  return gaussian_law(spec, spec.q);
}

GaussianWorkLaw gaussian_law(const QuenchSpec& spec, double q) {
  GaussianWorkLaw law;
  law.w_bar = mean_work(spec);
  law.sigma2 = variance_work(spec);
  law.r_q = r_q(spec.with_q(q));
  law.L = spec.L;
  if (!(law.sigma2 > 0.0))
    throw NumericalError("gaussian_law: nonpositive variance");
  return law;
}

double negativity_asymptotic(const GaussianWorkLaw& law) {
  return std::pow(law.sigma2 * law.sigma2 + law.r_q * law.r_q, 0.25) / law.sigma();
}

double kurtosis_asymptotic(const GaussianWorkLaw& law) {
  return 3.0 - 3.0 * law.r_q * law.r_q / (law.sigma2 * law.sigma2);
}

double fourth_moment_asymptotic(const GaussianWorkLaw& law) {
  const double w = law.w_bar;
  return w * w * w * w + 6.0 * w * w * law.sigma2 + 3.0 * law.sigma2 * law.sigma2 -
         3.0 * law.r_q * law.r_q;
}

std::pair<cplx, cplx> high_temp_derivatives(const QuenchSpec& spec) {
  const double l0 = spec.lambda0;
  if (std::abs(std::abs(l0) - 1.0) < 1e-12)
    throw ContractError("high_temp_derivatives: |lambda0| = 1 boundary");
  const double dl = spec.lambda_tau - l0;
  const double phi = spec.phases.constant_value();
  const double a0 = std::abs(l0);
  const cplx d1 = -I * dl / (2.0 * PI * a0) * std::sin(2.0 * phi) *
                  (1.0 + a0 - std::abs(1.0 - a0));
  const double s2 = std::sin(2.0 * phi) * std::sin(2.0 * phi);
  const cplx d2 =
      -dl * dl *
          (1.0 - (1.0 + l0 * l0 - (1.0 + a0) * std::abs(1.0 - a0)) / (8.0 * l0 * l0) * s2) -
      4.0 * I / PI * dl * (1.0 - 2.0 * spec.q) * std::cos(2.0 * phi);
  return {d1, d2};
}

double work_extracted_high_temp(const QuenchSpec& spec) {
  const double l0 = spec.lambda0;
  const double a0 = std::abs(l0);
  return (spec.lambda_tau - l0) * spec.L / (2.0 * PI * a0) *
         std::sin(2.0 * spec.phases.constant_value()) *
         (1.0 + a0 - std::abs(1.0 - a0));
}

double fermi_dirac(double x) { return 1.0 / (1.0 + std::exp(std::abs(x))); }

double coherent_work_scaling(double lambda0, double lambda_tau, double phi_pi, int L,
                             double beta, double J) {
  const double mc2 = 2.0 * J * (1.0 - lambda0);
  return (lambda0 - lambda_tau) * std::sin(2.0 * phi_pi) * L / (PI * beta) *
         fermi_dirac(beta * mc2);
}

double fermi_dirac_integral_quadrature(double x) {
  if (!(x != 0.0)) throw ContractError("fermi_dirac_integral: x must be nonzero");
  const double ax = std::abs(x);
  const double y_max = std::sqrt(std::pow(1.0 + 45.0 / ax, 2) - 1.0);
  auto f = [&](double y) {
    const double t = std::sqrt(1.0 + y * y);
    const double s = sech(ax * t / 2.0);
    return y / t * s * s;
  };
  QuadratureOptions opt;
  opt.abs_tol = 1e-12;
  return integrate(f, 0.0, y_max, opt);
}

double fermi_dirac_integral_closed(double x) {
  const double ax = std::abs(x);
  return 4.0 / ((1.0 + std::exp(ax)) * ax);
}

double negativity_modulus_quadrature(const GaussianWorkLaw& law) {
  const cplx vq = law.v();
  const double sig_eff = std::abs(vq) / law.sigma();
  auto f = [&](double w) {
    const double x = w - law.w_bar;
    return std::abs(std::exp(-x * x / (2.0 * vq)) / std::sqrt(2.0 * PI * vq));
  };
  QuadratureOptions opt;
  opt.abs_tol = 1e-10;
  return integrate(f, law.w_bar - 20.0 * sig_eff, law.w_bar + 20.0 * sig_eff, opt);
}

}  // namespace quasiwork
