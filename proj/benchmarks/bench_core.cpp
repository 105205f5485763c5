#include <benchmark/benchmark.h>

#include <random>

#include "quasiwork/global_quench.hpp"
#include "quasiwork/inversion.hpp"
#include "quasiwork/pfaffian.hpp"
#include "quasiwork/quadratic_form.hpp"
#include "quasiwork/thermo.hpp"

using namespace quasiwork;

namespace {

QuenchSpec fig2_spec(int L) {
  QuenchSpec s;
  s.L = L;
  s.beta = 1.0;
  s.lambda0 = 0.5;
  s.lambda_tau = 1.5;
  s.q = 0.5;
  s.phases = PhaseProfile::constant(PI / 4);
  return s;
}

void BM_FiniteSizeX(benchmark::State& state) {
  GlobalQuenchSystem sys(fig2_spec(static_cast<int>(state.range(0))));
  double u = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sys.X(u, 0.25));
    u += 1e-4;
  }
}
BENCHMARK(BM_FiniteSizeX)->Arg(50)->Arg(200)->Arg(1000);

void BM_Pfaffian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const cplx v(gauss(rng), gauss(rng));
      g(i, j) = v;
      g(j, i) = -v;
    }
  for (auto _ : state) benchmark::DoNotOptimize(pfaffian(g));
}
BENCHMARK(BM_Pfaffian)->Arg(20)->Arg(100)->Arg(200);

void BM_LocalQuenchPsi2(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  const LocalQuenchSystem sys =
      make_local_quench(1.0, L, 0.9, 1, PhaseProfile::alternating(PI, 0.0));
  double u = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sys.X(LocalState::Psi2, u, 0.25, 0.4));
    u += 1e-5;
  }
}
BENCHMARK(BM_LocalQuenchPsi2)->Arg(20)->Arg(50);

void BM_MeanWorkQuadrature(benchmark::State& state) {
  QuenchSpec s = fig2_spec(50);
  s.lambda0 = 0.95;  // near-critical integrand
  s.lambda_tau = 1.05;
  for (auto _ : state) benchmark::DoNotOptimize(mean_work(s));
}
BENCHMARK(BM_MeanWorkQuadrature);

void BM_Histogram(benchmark::State& state) {
  GlobalQuenchSystem sys(fig2_spec(10));
  const GaussianWorkLaw law = gaussian_law(fig2_spec(10));
  for (auto _ : state) {
    benchmark::DoNotOptimize(histogram([&](double u) { return sys.chi(u); },
                                       law.sigma() / 20.0, 4.0,
                                       law.w_bar - 8 * law.sigma(),
                                       law.w_bar + 8 * law.sigma()));
  }
}
BENCHMARK(BM_Histogram);

}  // namespace

BENCHMARK_MAIN();
