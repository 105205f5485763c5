#include "quasiwork/quadratic_form.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "quasiwork/finite_diff.hpp"
#include "quasiwork/pfaffian.hpp"

namespace quasiwork {

void QuadraticFermionForm::validate(double tol) const {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
    throw ContractError("QuadraticFermionForm: A, B must be square and same size");
  const double scale =
      std::max(1.0, std::max(A.cwiseAbs().maxCoeff(), B.cwiseAbs().maxCoeff()));
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > tol * scale)
    throw ContractError("QuadraticFermionForm: A must be symmetric");
  if ((B + B.transpose()).cwiseAbs().maxCoeff() > tol * scale)
    throw ContractError("QuadraticFermionForm: B must be antisymmetric");
}

QuadraticFermionForm chain_form(double lambda, int L, Sector bc) {
  if (L < 2 || L % 2 != 0) throw ContractError("chain_form: L must be even, >= 2");
  QuadraticFermionForm f;
  f.A = Eigen::MatrixXd::Zero(L, L);
  f.B = Eigen::MatrixXd::Zero(L, L);
  f.A.diagonal().setConstant(-2.0 * lambda);
  for (int i = 0; i < L; ++i) {
    const int j = (i + 1) % L;
    // Bond sign flips on the (L,1) closure in the antiperiodic sector.
    const double s = (j == 0 && i == L - 1 && bc == Sector::Even) ? -1.0 : 1.0;
    f.A(i, j) += -s;
    f.A(j, i) += -s;
    f.B(i, j) += -s;
    f.B(j, i) += +s;
  }
  return f;
}

std::pair<QuadraticFermionForm, QuadraticFermionForm> build_chain_form(
    double lambda0, int L, double local_field, int site) {
  if (site < 1 || site > L) throw ContractError("build_chain_form: site out of range");
  QuadraticFermionForm h = chain_form(lambda0, L, Sector::Even);
  QuadraticFermionForm hp = h;
  hp.A(site - 1, site - 1) -= 2.0 * local_field;
  return {h, hp};
}

Eigen::MatrixXd ModeDecomposition::phi_mat() const {
  if (complex_modes) throw ContractError("phi_mat: real decomposition required");
  return (g + h).real();
}

Eigen::MatrixXd ModeDecomposition::psi_mat() const {
  if (complex_modes) throw ContractError("psi_mat: real decomposition required");
  return (g - h).real();
}

ModeDecomposition diagonalize(const QuadraticFermionForm& form) {
  form.validate();
  const int L = form.size();
  const Eigen::MatrixXd M = form.A + form.B;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  // A + B = psi^T eps phi with psi = U^T, phi = V^T; reorder eps ascending with
  // a stable tie-break on the SVD output index.
  std::vector<int> order(static_cast<size_t>(L));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return svd.singularValues()(a) < svd.singularValues()(b);
  });
  Eigen::MatrixXd phi(L, L), psi(L, L);
  Eigen::VectorXd eps(L);
  for (int r = 0; r < L; ++r) {
    const int o = order[static_cast<size_t>(r)];
    eps(r) = svd.singularValues()(o);
    phi.row(r) = svd.matrixV().col(o).transpose();
    psi.row(r) = svd.matrixU().col(o).transpose();
    Eigen::Index imax = 0;
    phi.row(r).cwiseAbs().maxCoeff(&imax);
    if (phi(r, imax) < 0.0) {
      phi.row(r) *= -1.0;
      psi.row(r) *= -1.0;
    }
  }
  ModeDecomposition dec;
  dec.eps = eps;
  dec.g = (0.5 * (phi + psi)).cast<cplx>();
  dec.h = (0.5 * (phi - psi)).cast<cplx>();
  dec.complex_modes = false;
  return dec;
}

ModeDecomposition momentum_modes(double lambda0, int L) {
  const auto ks = momenta(L, Sector::Even);
  ModeDecomposition dec;
  dec.complex_modes = true;
  dec.g = Eigen::MatrixXcd::Zero(L, L);
  dec.h = Eigen::MatrixXcd::Zero(L, L);
  dec.eps = Eigen::VectorXd::Zero(L);
  const double norm = 1.0 / std::sqrt(static_cast<double>(L));
  for (int m = 0; m < L; ++m) {
    const double k = ks[static_cast<size_t>(m)];
    const double eps = dispersion(lambda0, k);
    if (eps < 1e-14)
      throw ContractError("momentum_modes: gap closure, Bogoliubov angle undefined");
    const double theta = std::atan2(2.0 * std::sin(k) / eps,
                                    -2.0 * (lambda0 + std::cos(k)) / eps);
    dec.eps(m) = eps;
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    for (int j = 1; j <= L; ++j) {
      const cplx ph = std::exp(-I * k * static_cast<double>(j)) * norm;
      dec.g(m, j - 1) = c * ph;
      dec.h(m, j - 1) = -I * s * ph;
    }
  }
  return dec;
}

OverlapKernel overlap_kernel(const ModeDecomposition& dec,
                             const ModeDecomposition& dec_prime) {
  if (dec.g.rows() != dec_prime.g.rows())
    throw ContractError("overlap_kernel: incompatible mode counts");
  OverlapKernel k;
  k.g_tilde = dec.g * dec_prime.g.adjoint() + dec.h * dec_prime.h.adjoint();
  k.h_tilde = dec.g * dec_prime.h.transpose() + dec.h * dec_prime.g.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(k.g_tilde);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  k.condition_number = (smin > 0.0) ? smax / smin : std::numeric_limits<double>::infinity();
  if (!(k.condition_number < 1e12))
    throw NumericalError("overlap_kernel: singular g_tilde (vacuum overlap zero)");
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(k.g_tilde);
  Eigen::MatrixXcd G = lu.solve(-k.h_tilde);
  G = 0.5 * (G - G.transpose()).eval();
  const double resid = (k.g_tilde * G + k.h_tilde).cwiseAbs().maxCoeff();
  if (resid > 1e-10 * std::max(1.0, k.h_tilde.cwiseAbs().maxCoeff()))
    throw NumericalError("overlap_kernel: kernel residual too large");
  k.G = G;
  return k;
}

LocalQuenchSystem::LocalQuenchSystem(double lambda0, int L, double local_field,
                                     int site, const PhaseProfile& phases)
    : L_(L), local_field_(local_field) {
  if (L < 2 || L % 2 != 0) throw ContractError("LocalQuenchSystem: L must be even");
  auto [h0, h1] = build_chain_form(lambda0, L, local_field, site);
  dec_ = momentum_modes(lambda0, L);
  dec_prime_ = diagonalize(h1);
  init(phases);
}

LocalQuenchSystem::LocalQuenchSystem(const ModeDecomposition& dec,
                                     const ModeDecomposition& dec_prime,
                                     const PhaseProfile& phases,
                                     double local_field_hint)
    : L_(static_cast<int>(dec.g.rows())),
      local_field_(local_field_hint),
      dec_(dec),
      dec_prime_(dec_prime) {
  init(phases);
}

void LocalQuenchSystem::init(const PhaseProfile& phases) {
  const int L = L_;
  eps_ = dec_.eps;
  eps_prime_ = dec_prime_.eps;
  const OverlapKernel k = overlap_kernel(dec_, dec_prime_);
  P_ = k.g_tilde;
  Q_ = k.h_tilde;
  G_ = k.G;
  cond_ = k.condition_number;
  sum_eps_diff_half_ = 0.5 * (eps_.sum() - eps_prime_.sum());
  // phi_k per mode in momenta() order; phi_{-k} = phi_k via |k|'s grid index.
  phi_ = Eigen::VectorXd::Zero(L);
  const auto ks = momenta(L, Sector::Even);
  for (int m = 0; m < L; ++m) {
    const int n_idx = static_cast<int>(
        std::lround(std::abs(ks[static_cast<size_t>(m)]) * L / (2.0 * PI) + 0.5));
    phi_(m) = phases.value(n_idx);
  }
  // s_{k,k'} over the same mode order (ascending momenta).
  sign_ = Eigen::MatrixXd::Zero(L, L);
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j) sign_(i, j) = (i > j) ? 1.0 : (i < j ? -1.0 : 0.0);
}

Eigen::VectorXcd LocalQuenchSystem::standard_amplitudes(double beta) const {
  Eigen::VectorXcd b(L_);
  for (int m = 0; m < L_; ++m) b(m) = std::exp(cplx(-0.5 * beta * eps_(m), phi_(m)));
  return b;
}

Eigen::MatrixXcd LocalQuenchSystem::gamma0(double u) const {
  const int L = L_;
  const Eigen::VectorXcd ph_plus = (I * u * eps_prime_.array()).exp();
  Eigen::MatrixXcd Gt(L, L);
  for (int m = 0; m < L; ++m)
    for (int n = 0; n < L; ++n) Gt(m, n) = G_(m, n) * ph_plus(m) * ph_plus(n);
  Eigen::MatrixXcd g0(2 * L, 2 * L);
  g0.topLeftCorner(L, L) = G_.conjugate();
  g0.topRightCorner(L, L) = -Eigen::MatrixXcd::Identity(L, L);
  g0.bottomLeftCorner(L, L) = Eigen::MatrixXcd::Identity(L, L);
  g0.bottomRightCorner(L, L) = -Gt;
  return g0;
}

cplx LocalQuenchSystem::ground_state_chf(double u) const {
  return std::exp(I * u * sum_eps_diff_half_) * pfaffian(gamma0(u)) /
         pfaffian(gamma0(0.0));
}

double LocalQuenchSystem::max_eps() const {
  return std::max({eps_.maxCoeff(), eps_prime_.maxCoeff(), std::abs(local_field_)});
}

cplx LocalQuenchSystem::X_raw(LocalState state, double u, double q,
                              const Eigen::VectorXcd& b) const {
  const int L = L_;
  Eigen::VectorXcd c(L), d(L);
  for (int k = 0; k < L; ++k) {
    c(k) = std::conj(b(k)) * std::exp(-I * u * (1.0 - q) * eps_(k));
    d(k) = b(k) * std::exp(-I * u * q * eps_(k));
  }
  const Eigen::VectorXcd ph_plus = (I * u * eps_prime_.array()).exp();
  const Eigen::VectorXcd ph_minus = (-I * u * eps_prime_.array()).exp();

  // Bra side expands alpha_k, ket side alpha_k^dag (conjugated kernels).
  Eigen::MatrixXcd Umat = c.asDiagonal() * P_;
  Eigen::MatrixXcd Vmat = c.asDiagonal() * Q_;
  Eigen::MatrixXcd Upmat = (d.asDiagonal() * P_.conjugate()) * ph_plus.asDiagonal();
  Eigen::MatrixXcd Vpmat = (d.asDiagonal() * Q_.conjugate()) * ph_minus.asDiagonal();

  const Eigen::VectorXcd uv = Umat.colwise().sum();
  const Eigen::VectorXcd vv = Vmat.colwise().sum();
  const Eigen::VectorXcd upv = Upmat.colwise().sum();
  const Eigen::VectorXcd vpv = Vpmat.colwise().sum();

  const Eigen::MatrixXcd gamma0_u = gamma0(u);

  const Eigen::MatrixXcd M1 = uv * vpv.transpose() - vpv * uv.transpose();
  const Eigen::MatrixXcd M2 = uv * upv.transpose() - vpv * vv.transpose();
  const Eigen::MatrixXcd M3 = vv * upv.transpose() - upv * vv.transpose();
  Eigen::MatrixXcd M(2 * L, 2 * L);
  M.topLeftCorner(L, L) = -M1;
  M.topRightCorner(L, L) = -M2;
  M.bottomLeftCorner(L, L) = M2.transpose();
  M.bottomRightCorner(L, L) = -M3;

  const cplx pf = pfaffian(gamma0_u);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(gamma0_u);
  cplx bracket = 1.0 + 0.5 * lu.solve(M).trace();
  bracket += (vv.array() * vpv.array()).sum();

  if (state == LocalState::Psi2) {
    const Eigen::MatrixXcd S = sign_.cast<cplx>();
    const Eigen::MatrixXcd V1 = Umat.transpose() * S * Umat;
    const Eigen::MatrixXcd V2 = Umat.transpose() * S * Vmat;
    const Eigen::MatrixXcd V3 = Vmat.transpose() * S * Vmat;
    const Eigen::MatrixXcd Vp1 = Vpmat.transpose() * S * Vpmat;
    const Eigen::MatrixXcd Vp2 = Vpmat.transpose() * S * Upmat;
    const Eigen::MatrixXcd Vp3 = Upmat.transpose() * S * Upmat;

    Eigen::MatrixXcd Vb(2 * L, 2 * L), Vpb(2 * L, 2 * L), Vpp(2 * L, 2 * L);
    Vb.topLeftCorner(L, L) = V1;
    Vb.topRightCorner(L, L) = V2;
    Vb.bottomLeftCorner(L, L) = -V2.transpose();
    Vb.bottomRightCorner(L, L) = V3;
    Vpb.topLeftCorner(L, L) = Vp1;
    Vpb.topRightCorner(L, L) = Vp2;
    Vpb.bottomLeftCorner(L, L) = -Vp2.transpose();
    Vpb.bottomRightCorner(L, L) = Vp3;
    Vpp.topLeftCorner(L, L) = V2 * Vp1 + Vp1 * V2.transpose();
    Vpp.topRightCorner(L, L) = V2 * Vp2 - Vp1 * V3;
    Vpp.bottomLeftCorner(L, L) = V3 * Vp1 - Vp2.transpose() * V2.transpose();
    Vpp.bottomRightCorner(L, L) = V3 * Vp2 + Vp2.transpose() * V3;

    const Eigen::MatrixXcd GiV = lu.solve(Vb);
    const Eigen::MatrixXcd GiVp = lu.solve(Vpb);
    const cplx trV2 = V2.trace();
    const cplx trVp2 = Vp2.trace();
    const cplx trGiV = GiV.trace();
    const cplx trGiVp = GiVp.trace();
    bracket += 0.5 * (trGiV - trGiVp);
    bracket += 0.5 * (trV2 - trVp2);
    bracket += -0.25 * trV2 * trVp2;
    bracket += -0.25 * trV2 * trGiVp;
    bracket += -0.25 * trVp2 * trGiV;
    bracket += -0.5 * (V3 * Vp1).trace();
    bracket += 0.5 * lu.solve(Vpp).trace();
    bracket += 0.5 * (GiV * GiVp).trace();
    bracket += -0.25 * trGiV * trGiVp;
  }

  return std::exp(I * u * sum_eps_diff_half_) * pf * bracket;
}

cplx LocalQuenchSystem::X(LocalState state, double u, double q, double beta) const {
  const Eigen::VectorXcd b = standard_amplitudes(beta);
  return X_raw(state, u, q, b) / X_raw(state, 0.0, q, b);
}

cplx LocalQuenchSystem::X_psi1_amplitudes(double u, double q,
                                          const Eigen::VectorXcd& b) const {
  if (b.size() != L_) throw ContractError("X_psi1_amplitudes: one amplitude per mode");
  return X_raw(LocalState::Psi1, u, q, b) / X_raw(LocalState::Psi1, 0.0, q, b);
}

cplx LocalQuenchSystem::chi(LocalState state, double u, double q, double beta) const {
  return 0.5 * (X(state, u, q, beta) + X(state, u, 1.0 - q, beta));
}

LocalQuenchSystem make_local_quench(double lambda0, int L, double local_field,
                                    int site, const PhaseProfile& phases) {
  double eps = local_field;
  for (int attempt = 0;; ++attempt) {
    try {
      return LocalQuenchSystem(lambda0, L, eps, site, phases);
    } catch (const NumericalError&) {
      if (attempt >= 2) throw;
      eps += 1e-9;
    }
  }
}

std::vector<double> fourth_moment_sweep(int L, double lambda0, double beta, double q,
                                        const PhaseProfile& phases,
                                        const std::vector<double>& eps_grid, int site,
                                        LocalState state) {
  std::vector<double> out(eps_grid.size(), 0.0);
  std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(dynamic)
  for (long idx = 0; idx < static_cast<long>(eps_grid.size()); ++idx) {
    try {
      const double eps_loc = eps_grid[static_cast<size_t>(idx)];
      if (eps_loc == 0.0) {
        out[static_cast<size_t>(idx)] = 0.0;
        continue;
      }
      const LocalQuenchSystem sys =
          make_local_quench(lambda0, L, eps_loc, site, phases);
      const double h_base = 0.05 / sys.max_eps();
      out[static_cast<size_t>(idx)] = moment_from_chf(
          [&](double u) { return sys.chi(state, u, q, beta); }, 4, 4.0 * h_base);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace quasiwork
