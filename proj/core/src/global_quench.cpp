#include "quasiwork/global_quench.hpp"

#include <cmath>

#include "quasiwork/finite_diff.hpp"

namespace quasiwork {

cplx mode_factor_thermal(const ModeEntry& e, double beta, double u) {
  const cplx z = (u - I * beta) * e.eps;
  const double dd = e.dhat.dot(e.dhat_prime);
  return 2.0 * (std::cos(z) * std::cos(u * e.eps_prime) +
                std::sin(z) * std::sin(u * e.eps_prime) * dd + 1.0);
}

cplx mode_factor_coherent(const ModeEntry& e, double q, double u) {
  const double sign = detail::coherent_sign_fault ? -1.0 : 1.0;
  return sign * (-2.0 * I) * std::sin(u * e.eps_prime) *
         std::sin(u * (2.0 * q - 1.0) * e.eps - 2.0 * e.phi) * e.cross_x;
}

std::pair<cplx, cplx> mode_factor_unpaired(const ModeEntry& e, double beta, double u,
                                           int s_k) {
  const cplx z = 0.5 * (beta * e.eps - I * u * (s_k * e.eps_prime - e.eps));
  return {2.0 * std::cosh(z), 2.0 * std::sinh(z)};
}

namespace {

// Product accumulated as mant * exp(log_scale), |mant| kept near 1.
struct ScaledProduct {
  cplx mant{1.0, 0.0};
  double log_scale = 0.0;
  void mul(const cplx& f) {
    mant *= f;
    const double a = std::abs(mant);
    if (a == 0.0) {
      log_scale = -std::numeric_limits<double>::infinity();
      mant = 0.0;
    } else if (a > 1e100 || a < 1e-100) {
      log_scale += std::log(a);
      mant /= a;
    }
  }
};

struct SectorProducts {
  ScaledProduct x;        // prod X^{(k)}
  ScaledProduct x_prime;  // prod X'^{(k)}
};

SectorProducts sector_products(const ModeTable& t, const QuenchSpec& spec, double q,
                               double u) {
  SectorProducts p;
  const bool coherent = spec.initial_state == InitialState::CoherentGibbs;
  for (const ModeEntry& e : t.entries) {
    if (e.paired) {
      cplx f = mode_factor_thermal(e, spec.beta, u);
      if (coherent) f += mode_factor_coherent(e, q, u);
      p.x.mul(f);
      p.x_prime.mul(f - 4.0);
    } else {
      const int s_k = (e.k == 0.0) ? t.s0 : t.s_pi;
      const auto [xk, xpk] = mode_factor_unpaired(e, spec.beta, u, s_k);
      p.x.mul(xk);
      p.x_prime.mul(xpk);
    }
  }
  return p;
}

}  // namespace

GlobalQuenchSystem::GlobalQuenchSystem(const QuenchSpec& spec)
    : spec_(spec),
      even_(ModeTable::build(spec, Sector::Even)),
      odd_(ModeTable::build(spec, Sector::Odd)),
      log_z_(log_partition_function(spec.L, spec.beta, spec.lambda0)) {
  max_eps_ = 0.0;
  for (const auto& t : {even_, odd_})
    for (const ModeEntry& e : t.entries)
      max_eps_ = std::max({max_eps_, e.eps, e.eps_prime});
}

cplx GlobalQuenchSystem::X(double u, double q) const {
  const SectorProducts pe = sector_products(even_, spec_, q, u);
  const SectorProducts po = sector_products(odd_, spec_, q, u);
  const cplx mants[4] = {pe.x.mant, pe.x_prime.mant, po.x.mant, po.x_prime.mant};
  const double logs[4] = {pe.x.log_scale, pe.x_prime.log_scale, po.x.log_scale,
                          po.x_prime.log_scale};
  const double signs[4] = {1.0, static_cast<double>(even_.eta), 1.0,
                           static_cast<double>(odd_.eta)};
  double m = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i)
    if (mants[i] != 0.0) m = std::max(m, logs[i]);
  if (!std::isfinite(m)) return 0.0;
  cplx acc = 0.0;
  for (int i = 0; i < 4; ++i)
    if (mants[i] != 0.0) acc += signs[i] * mants[i] * std::exp(logs[i] - m);
  return 0.5 * acc * std::exp(m - log_z_);
}

cplx GlobalQuenchSystem::chi(double u) const {
  return 0.5 * (X(u, spec_.q) + X(u, 1.0 - spec_.q));
}

double GlobalQuenchSystem::fd_step() const {
  return 0.16 / (spec_.L * std::max(max_eps_, 1e-12));
}

cplx finite_size_X(const QuenchSpec& spec, double u) {
  return GlobalQuenchSystem(spec).X(u);
}

cplx chi(const QuenchSpec& spec, double u) { return GlobalQuenchSystem(spec).chi(u); }

CharacteristicCurve chi_curve(const QuenchSpec& spec, const std::vector<double>& u_grid) {
  GlobalQuenchSystem sys(spec);
  CharacteristicCurve c;
  c.kind = CharacteristicCurve::Kind::Chi;
  c.spec = spec;
  c.u_grid = u_grid;
  c.values.resize(u_grid.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < static_cast<long>(u_grid.size()); ++i)
    c.values[static_cast<size_t>(i)] = sys.chi(u_grid[static_cast<size_t>(i)]);
  return c;
}

CharacteristicCurve x_curve(const QuenchSpec& spec, const std::vector<double>& u_grid) {
  GlobalQuenchSystem sys(spec);
  CharacteristicCurve c;
  c.kind = CharacteristicCurve::Kind::Xq;
  c.spec = spec;
  c.u_grid = u_grid;
  c.values.resize(u_grid.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < static_cast<long>(u_grid.size()); ++i)
    c.values[static_cast<size_t>(i)] = sys.X(u_grid[static_cast<size_t>(i)]);
  return c;
}

double moments_fd(const QuenchSpec& spec, int n) {
  if (n < 1 || n > 6) throw ContractError("moments_fd: n must be in 1..6");
  GlobalQuenchSystem sys(spec);
  return moment_from_chf([&](double u) { return sys.chi(u); }, n, sys.fd_step());
}

}  // namespace quasiwork
