#include "quasiwork/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace quasiwork {

namespace {

// Kronrod-15 nodes/weights on [-1,1] with the embedded Gauss-7 rule.
constexpr double XGK[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,                0.207784955007898,
    0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
constexpr double WGK[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
constexpr double WG[4] = {0.129484966168870, 0.279705391489277,
                          0.381830050505119, 0.417959183673469};

template <typename T>
struct PanelResult {
  T kronrod;
  double err;
};

template <typename T>
PanelResult<T> gk15(const std::function<T(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  T fk[15];
  T k_sum = T{};
  for (int i = 0; i < 15; ++i) {
    fk[i] = f(c + hw * XGK[i]);
    k_sum += WGK[i] * fk[i];
  }
  T g_sum = WG[3] * fk[7];
  for (int i = 0; i < 3; ++i) g_sum += WG[i] * (fk[2 * i + 1] + fk[13 - 2 * i]);
  const T kronrod = hw * k_sum;
  const double err = std::abs(hw * (k_sum - g_sum));
  return {kronrod, std::pow(200.0 * err, 1.5) < err ? err : err};
}

template <typename T>
T adaptive(const std::function<T(double)>& f, double a, double b, double tol,
           int depth, int max_depth) {
  const PanelResult<T> r = gk15(f, a, b);
  if (r.err <= tol || depth >= max_depth) {
    if (depth >= max_depth && r.err > 100.0 * tol)
      throw NumericalError("integrate: adaptive quadrature did not converge");
    return r.kronrod;
  }
  const double m = 0.5 * (a + b);
  return adaptive(f, a, m, tol / 2.0, depth + 1, max_depth) +
         adaptive(f, m, b, tol / 2.0, depth + 1, max_depth);
}

template <typename T>
T run(const std::function<T(double)>& f, double a, double b,
      const QuadratureOptions& opt) {
  std::vector<double> edges{a};
  for (double x : opt.breakpoints)
    if (x > a && x < b) edges.push_back(x);
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  T total = T{};
  const double tol = opt.abs_tol / static_cast<double>(edges.size() - 1);
  for (size_t i = 0; i + 1 < edges.size(); ++i)
    total += adaptive(f, edges[i], edges[i + 1], tol, 0, opt.max_depth);
  return total;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opt) {
  return run<double>(f, a, b, opt);
}

cplx integrate_complex(const std::function<cplx(double)>& f, double a, double b,
                       const QuadratureOptions& opt) {
  return run<cplx>(f, a, b, opt);
}

cplx integrate_log_unwrapped(const std::function<cplx(double)>& w, double a, double b,
                             const QuadratureOptions& opt, int initial_sweep_points) {
  // Ordered reference sweep fixing the winding number m(k) of arg w.
  int n = initial_sweep_points;
  std::vector<double> ks;
  std::vector<double> theta;  // unwrapped phase at ks
  for (int attempt = 0;; ++attempt) {
    ks.assign(static_cast<size_t>(n) + 1, 0.0);
    theta.assign(static_cast<size_t>(n) + 1, 0.0);
    bool ok = true;
    double prev = 0.0;
    for (int i = 0; i <= n; ++i) {
      ks[static_cast<size_t>(i)] = a + (b - a) * i / n;
      const cplx v = w(ks[static_cast<size_t>(i)]);
      double th = std::arg(v);
      if (i > 0) {
        while (th - prev > PI) th -= 2.0 * PI;
        while (th - prev < -PI) th += 2.0 * PI;
        if (std::abs(th - prev) > PI / 2.0) ok = false;
      }
      theta[static_cast<size_t>(i)] = th;
      prev = th;
    }
    if (ok) break;
    if (attempt >= 6)
      throw NumericalError(
          "integrate_log_unwrapped: branch ambiguity, phase jump > pi/2 persists");
    n *= 2;
  }
  const double dk = (b - a) / n;
  auto f = [&](double k) -> cplx {
    const cplx v = w(k);
    // Interpolate the reference phase and round to the nearest branch.
    size_t i = static_cast<size_t>(std::clamp((k - a) / dk, 0.0, static_cast<double>(n - 1)));
    const double t = (k - ks[i]) / dk;
    const double th_ref = (1.0 - t) * theta[i] + t * theta[i + 1];
    const double principal = std::arg(v);
    const double m = std::round((th_ref - principal) / (2.0 * PI));
    return cplx(std::log(std::abs(v)), principal + 2.0 * PI * m);
  };
  return integrate_complex(f, a, b, opt);
}

}  // namespace quasiwork
