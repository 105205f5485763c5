#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "quasiwork/global_quench.hpp"
#include "quasiwork/inversion.hpp"
#include "quasiwork/thermo.hpp"

using namespace quasiwork;

TEST_CASE("analytic gaussian pair") {
  auto chi = [](double u) { return cplx(std::exp(-u * u / 2.0), 0.0); };
  const WorkHistogram h = histogram(chi, 0.05, 8.0, -8.0, 8.0);
  CHECK(h.mass() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(h.imag_residue <= 1e-8);
  CHECK_FALSE(h.aliasing_warning);
  // bin masses match the exact bin integrals of the standard normal
  double sup_mass = 0.0, sup_density = 0.0;
  for (size_t i = 0; i < h.w.size(); ++i) {
    const double lo = (h.w[i] - h.dw / 2) / std::sqrt(2.0);
    const double hi = (h.w[i] + h.dw / 2) / std::sqrt(2.0);
    const double exact = 0.5 * (std::erf(hi) - std::erf(lo));
    sup_mass = std::max(sup_mass, std::abs(h.p[i] - exact));
    const double pdf = std::exp(-h.w[i] * h.w[i] / 2.0) / std::sqrt(2 * PI);
    sup_density = std::max(sup_density, std::abs(h.density(i) - pdf));
  }
  CHECK(sup_mass <= 1e-6 * 0.05);  // quadrature exact; p_n is the bin integral
  CHECK(sup_density <= 1e-4);      // density differs by the O(dw^2) bin average
}

TEST_CASE("single atom lands in its bin") {
  const double a = 0.7;
  auto chi = [&](double u) { return std::exp(I * u * a); };
  // An atomic chi never decays: the truncated sinc integral leaks
  // ~ 2/(pi^2 K) of the mass, vanishing only as K grows.
  double leak_prev = 1.0;
  for (double K : {8.0, 64.0, 512.0}) {
    const WorkHistogram h = histogram(chi, 0.05, K, -3.0, 3.0);
    CHECK(h.aliasing_warning);  // |chi| = 1 at the interval edge
    double in_bin = 0.0, elsewhere = 0.0;
    for (size_t i = 0; i < h.w.size(); ++i) {
      if (std::abs(h.w[i] - a) < 0.025)
        in_bin += h.p[i];
      else
        elsewhere += std::abs(h.p[i]);
    }
    const double leak = std::abs(1.0 - in_bin);
    CHECK(leak <= 1.2 * 2.0 / (PI * PI * K));
    CHECK(leak < leak_prev);
    leak_prev = leak;
    CHECK(elsewhere <= 4.0 / K);
  }
  CHECK(leak_prev <= 1e-3);
}

TEST_CASE("input contracts") {
  auto chi = [](double u) { return cplx(std::exp(-u * u), 0.0); };
  CHECK_THROWS_AS(histogram(chi, 0.0, 8.0, -1.0, 1.0), ContractError);
  CHECK_THROWS_AS(histogram(chi, 0.1, -1.0, -1.0, 1.0), ContractError);
  CHECK_THROWS_AS(histogram(chi, 0.1, 8.0, 1.0, -1.0), ContractError);
  // heavy-tailed chi trips the aliasing warning
  auto slow = [](double u) { return cplx(1.0 / (1.0 + u * u), 0.0); };
  const WorkHistogram h = histogram(slow, 0.5, 2.0, -4.0, 4.0);
  CHECK(h.aliasing_warning);
}

TEST_CASE("finite-size histogram: moments at L = 10") {
  QuenchSpec s;
  s.L = 10;
  s.beta = 1.0;
  s.lambda0 = 0.5;
  s.lambda_tau = 1.5;
  s.q = 0.5;
  s.phases = PhaseProfile::constant(PI / 4);
  GlobalQuenchSystem sys(s);
  const GaussianWorkLaw law = gaussian_law(s);
  const double dw = law.sigma() / 50.0;
  const double w_lo = law.w_bar - 12 * law.sigma();
  const double w_hi = law.w_bar + 12 * law.sigma();
  auto chi_fn = [&](double u) { return sys.chi(u); };
  const WorkHistogram h = histogram(chi_fn, dw, 8.0, w_lo, w_hi);
  CHECK(h.mass() == doctest::Approx(1.0).epsilon(1e-6));
  // L = 10 chi does not decay within the truncated interval; the histogram
  // reports that through the aliasing flag while the low moments stay good
  CHECK(h.aliasing_warning);
  const double m1 = moments_fd(s, 1);
  const double m2 = moments_fd(s, 2);
  CHECK(h.moment(1) == doctest::Approx(m1).epsilon(0.005));
  CHECK(h.moment(2) == doctest::Approx(m2).epsilon(0.005));
}

TEST_CASE("refinement convergence on the fig-2 asymptotic law") {
  // Finite-L curves carry a non-decaying recurrence tail (|chi| ~ 1e-4 at
  // L = 50), so bin-level refinement stability needs the decaying asymptotic
  // characteristic function of the same configuration.
  QuenchSpec s;
  s.L = 50;
  s.beta = 1.0;
  s.lambda0 = 0.5;
  s.lambda_tau = 1.5;
  s.q = 0.5;
  s.phases = PhaseProfile::constant(PI / 4);
  const GaussianWorkLaw law = gaussian_law(s);
  auto chi_fn = [&](double u) {
    return std::exp(I * u * law.w_bar - u * u * law.v() / 2.0);
  };
  const double dw = law.sigma() / 50.0;
  const double w_lo = law.w_bar - 10 * law.sigma();
  const double w_hi = law.w_bar + 10 * law.sigma();
  const WorkHistogram h = histogram(chi_fn, dw, 8.0, w_lo, w_hi);
  CHECK_FALSE(h.aliasing_warning);
  CHECK(h.mass() == doctest::Approx(1.0).epsilon(1e-6));
  // halving dw changes the reported densities by < 1e-4
  const WorkHistogram h2 = histogram(chi_fn, dw / 2.0, 8.0, w_lo, w_hi);
  double worst = 0.0;
  for (size_t i = 0; i < h.w.size(); ++i) {
    for (size_t j = 0; j < h2.w.size(); ++j) {
      if (std::abs(h2.w[j] - h.w[i]) < 1e-12)
        worst = std::max(worst, std::abs(h2.density(j) - h.density(i)));
    }
  }
  CHECK(worst <= 1e-4);
}

TEST_CASE("negativity integral") {
  // nonnegative histogram
  auto chi = [](double u) { return cplx(std::exp(-u * u / 2.0), 0.0); };
  const WorkHistogram h = histogram(chi, 0.05, 8.0, -8.0, 8.0);
  CHECK(negativity_integral(h) == doctest::Approx(1.0).epsilon(1e-6));

  // Fig. 1 parameters: q = 0 develops negativity, q = 1/2 stays a probability
  QuenchSpec fig1;
  fig1.L = 50;
  fig1.beta = 1.0;
  fig1.lambda0 = 0.9;
  fig1.lambda_tau = 1.1;
  fig1.q = 0.0;
  fig1.phases = PhaseProfile::constant(0.0);
  const GaussianWorkLaw law0 = gaussian_law(fig1, 0.0);
  const GaussianWorkLaw law5 = gaussian_law(fig1, 0.5);
  auto chf_of_law = [](const GaussianWorkLaw& law) {
    return [law](double u) {
      return std::exp(I * u * law.w_bar - u * u * law.v() / 2.0);
    };
  };
  const double sig_eff0 = std::abs(law0.v()) / law0.sigma();
  const WorkHistogram h0 = histogram(chf_of_law(law0), sig_eff0 / 40.0, 8.0,
                                     law0.w_bar - 14 * sig_eff0,
                                     law0.w_bar + 14 * sig_eff0);
  CHECK(negativity_integral(h0) > 1.01);
  const WorkHistogram h5 = histogram(chf_of_law(law5), law5.sigma() / 40.0, 8.0,
                                     law5.w_bar - 14 * law5.sigma(),
                                     law5.w_bar + 14 * law5.sigma());
  CHECK(negativity_integral(h5) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("curve-interpolated inversion") {
  QuenchSpec s;
  s.L = 6;
  s.beta = 1.0;
  s.lambda0 = 0.5;
  s.lambda_tau = 1.5;
  s.q = 0.5;
  s.phases = PhaseProfile::constant(PI / 4);
  const double dw = 0.2;
  const double u_max = 2 * PI * 8.0 / dw;
  std::vector<double> grid;
  const int n = 200001;
  for (int i = 0; i < n; ++i) grid.push_back(-u_max + 2 * u_max * i / (n - 1));
  const CharacteristicCurve curve = chi_curve(s, grid);
  const WorkHistogram hc = histogram(curve, dw, 8.0, -10.0, 10.0);
  GlobalQuenchSystem sys(s);
  const WorkHistogram hf = histogram([&](double u) { return sys.chi(u); }, dw, 8.0,
                                     -10.0, 10.0);
  double worst = 0.0;
  for (size_t i = 0; i < hc.p.size(); ++i)
    worst = std::max(worst, std::abs(hc.p[i] - hf.p[i]));
  CHECK(worst <= 1e-5);
  // a curve that does not span the truncated interval is rejected
  CHECK_THROWS_AS(histogram(chi_curve(s, {-1.0, 0.0, 1.0}), dw, 8.0, -1.0, 1.0),
                  ContractError);
}
