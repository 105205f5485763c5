#include "quasiwork/inversion.hpp"

#include <algorithm>
#include <cmath>

namespace quasiwork {

namespace {

double sinc(double x) { return (std::abs(x) < 1e-8) ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

}  // namespace

double WorkHistogram::mass() const {
  double s = 0.0;
  for (double x : p) s += x;
  return s;
}

double WorkHistogram::moment(int n) const {
  double s = 0.0;
  for (size_t i = 0; i < p.size(); ++i) s += p[i] * std::pow(w[i], n);
  return s;
}

WorkHistogram histogram(const std::function<cplx(double)>& chi, double dw, double K,
                        double w_lo, double w_hi) {
  if (!(dw > 0.0)) throw ContractError("histogram: dw must be positive");
  if (!(K > 0.0)) throw ContractError("histogram: K must be positive");
  if (!(w_hi > w_lo)) throw ContractError("histogram: empty w range");

  WorkHistogram h;
  h.dw = dw;
  h.K = K;
  const long n_lo = static_cast<long>(std::ceil(w_lo / dw));
  const long n_hi = static_cast<long>(std::floor(w_hi / dw));
  for (long n = n_lo; n <= n_hi; ++n) h.w.push_back(n * dw);
  h.p.assign(h.w.size(), 0.0);

  const double u_max = 2.0 * PI * K / dw;
  const double rate = std::max({std::abs(w_lo), std::abs(w_hi), 1.0});
  const double du_target = 2.0 * PI / (40.0 * rate);
  long n_samp = static_cast<long>(std::ceil(2.0 * u_max / du_target));
  n_samp = std::max<long>(n_samp | 1l, 4001);  // odd, symmetric grid through u = 0
  const double du = 2.0 * u_max / static_cast<double>(n_samp - 1);

  std::vector<cplx> samples(static_cast<size_t>(n_samp));
  std::vector<double> edge_mag(static_cast<size_t>(n_samp), 0.0);
#pragma omp parallel for schedule(static)
  for (long j = 0; j < n_samp; ++j) {
    const double u = -u_max + j * du;
    double wgt = (j == 0 || j == n_samp - 1) ? 0.5 : 1.0;
    const cplx cj = chi(u);
    samples[static_cast<size_t>(j)] = wgt * cj * sinc(u * dw / 2.0);
    if (j < 8 || j >= n_samp - 8) edge_mag[static_cast<size_t>(j)] = std::abs(cj);
  }
  // |chi| near the interval ends (the sinc kernel vanishes exactly at the
  // edge, so test the bare characteristic function).
  h.aliasing_warning =
      *std::max_element(edge_mag.begin(), edge_mag.end()) > 1e-6;

  std::vector<double> imag_res(h.w.size(), 0.0);
#pragma omp parallel for schedule(static)
  for (long b = 0; b < static_cast<long>(h.w.size()); ++b) {
    const double wn = h.w[static_cast<size_t>(b)];
    // phase recurrence for e^{-i u_j w_n}
    cplx phase = std::exp(-I * (-u_max) * wn);
    const cplx step = std::exp(-I * du * wn);
    cplx acc = 0.0;
    for (long j = 0; j < n_samp; ++j) {
      acc += samples[static_cast<size_t>(j)] * phase;
      phase *= step;
    }
    const cplx pn = dw / (2.0 * PI) * du * acc;
    h.p[static_cast<size_t>(b)] = pn.real();
    imag_res[static_cast<size_t>(b)] = std::abs(pn.imag());
  }
  h.imag_residue = *std::max_element(imag_res.begin(), imag_res.end());
  return h;
}

WorkHistogram histogram(const CharacteristicCurve& curve, double dw, double K,
                        double w_lo, double w_hi) {
  if (curve.u_grid.size() < 2) throw ContractError("histogram: curve too short");
  const double u_max = 2.0 * PI * K / dw;
  if (curve.u_grid.front() > -u_max || curve.u_grid.back() < u_max)
    throw ContractError("histogram: curve does not cover the truncated u-interval");
  auto interp = [&](double u) -> cplx {
    auto it = std::lower_bound(curve.u_grid.begin(), curve.u_grid.end(), u);
    if (it == curve.u_grid.begin()) return curve.values.front();
    if (it == curve.u_grid.end()) return curve.values.back();
    const size_t i = static_cast<size_t>(it - curve.u_grid.begin());
    const double t = (u - curve.u_grid[i - 1]) / (curve.u_grid[i] - curve.u_grid[i - 1]);
    return (1.0 - t) * curve.values[i - 1] + t * curve.values[i];
  };
  return histogram(interp, dw, K, w_lo, w_hi);
}

double negativity_integral(const WorkHistogram& hist) {
  double s = 0.0;
  for (double x : hist.p) s += std::abs(x);
  return s;
}

}  // namespace quasiwork
