#include "quasiwork/finite_diff.hpp"

#include <cmath>
#include <map>
#include <vector>

namespace quasiwork {

namespace {

// Minimal central stencils, error O(h^2). Coefficients for f(j*h), j = -m..m.
struct Stencil {
  int half_width;
  std::vector<double> coeff;  // index j + half_width
  double h_power;             // divide by h^h_power (== n)
};

Stencil stencil(int n) {
  switch (n) {
    case 1: return {1, {-0.5, 0.0, 0.5}, 1};
    case 2: return {1, {1.0, -2.0, 1.0}, 2};
    case 3: return {2, {-0.5, 1.0, 0.0, -1.0, 0.5}, 3};
    case 4: return {2, {1.0, -4.0, 6.0, -4.0, 1.0}, 4};
    case 5: return {3, {-0.5, 2.0, -2.5, 0.0, 2.5, -2.0, 0.5}, 5};
    case 6: return {3, {1.0, -6.0, 15.0, -20.0, 15.0, -6.0, 1.0}, 6};
    default:
      throw ContractError("central_derivative: order must be in 1..6");
  }
}

cplx apply_stencil(const std::function<cplx(double)>& f, const Stencil& s, double h,
                   std::map<double, cplx>& cache) {
  cplx acc = 0.0;
  for (int j = -s.half_width; j <= s.half_width; ++j) {
    const double c = s.coeff[static_cast<size_t>(j + s.half_width)];
    if (c == 0.0) continue;
    const double u = j * h;
    auto it = cache.find(u);
    if (it == cache.end()) it = cache.emplace(u, f(u)).first;
    acc += c * it->second;
  }
  return acc / std::pow(h, s.h_power);
}

}  // namespace

std::vector<double> central_stencil_points(int n, double h) {
  const Stencil s = stencil(n);
  std::vector<double> pts;
  for (double step : {h, h / 2.0, h / 4.0})
    for (int j = -s.half_width; j <= s.half_width; ++j) pts.push_back(j * step);
  return pts;
}

DerivativeResult central_derivative(const std::function<cplx(double)>& f, int n,
                                    double h) {
  const Stencil s = stencil(n);
  std::map<double, cplx> cache;
  // Richardson table over steps h / 2^i, eliminating h^2 then h^4.
  cplx T[3][3];
  for (int i = 0; i < 3; ++i) T[i][0] = apply_stencil(f, s, h / std::pow(2.0, i), cache);
  for (int j = 1; j < 3; ++j)
    for (int i = j; i < 3; ++i) {
      const double w = std::pow(4.0, j);
      T[i][j] = (w * T[i][j - 1] - T[i - 1][j - 1]) / (w - 1.0);
    }
  DerivativeResult r;
  r.value = T[2][2];
  // |T22 - T21| bounds the residual of the last Richardson level; the true
  // error of T22 is O(h^6) and smaller still.
  r.err_estimate = std::abs(T[2][2] - T[2][1]);
  double sample_scale = 0.0;
  for (const auto& [u, v] : cache) sample_scale = std::max(sample_scale, std::abs(v));
  // Roundoff propagated through the smallest-step stencil.
  const double noise_floor =
      64.0 * 2.2e-16 * sample_scale / std::pow(h / 4.0, n);
  const double scale = std::max(std::abs(r.value), 1e-30);
  r.converged = r.err_estimate <= std::max({2e-4 * scale, noise_floor, 1e-12});
  return r;
}

double moment_from_chf(const std::function<cplx(double)>& chi, int n, double h) {
  const DerivativeResult d = central_derivative(chi, n, h);
  if (!d.converged)
    throw NumericalError("moment_from_chf: Richardson extrapolation did not settle");
  cplx pref = 1.0;
  for (int i = 0; i < n; ++i) pref *= -I;
  const cplx m = pref * d.value;
  const double scale = std::max(std::abs(m), 1.0);
  if (std::abs(m.imag()) > 1e-7 * scale)
    throw NumericalError("moment_from_chf: imaginary residue exceeds 1e-7");
  return m.real();
}

}  // namespace quasiwork
