#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "quasiwork/model.hpp"
#include "quasiwork/types.hpp"

namespace quasiwork {

// H = sum a^dag A a + (1/2)(a^dag B a^dag + h.c.) - (1/2) tr A + offset,
// A symmetric, B antisymmetric, both real.
struct QuadraticFermionForm {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  double offset = 0.0;
  int size() const { return static_cast<int>(A.rows()); }
  void validate(double tol = 1e-12) const;
};

// Uniform transverse-field chain in the fermion picture; Even = antiperiodic
// closure, Odd = periodic.
QuadraticFermionForm chain_form(double lambda, int L, Sector bc);

// (H, H') for the local quench H' = H(lambda0) - eps sigma^z_l, even sector.
std::pair<QuadraticFermionForm, QuadraticFermionForm> build_chain_form(
    double lambda0, int L, double local_field, int site);

// alpha_k = sum_i g_{ki} a_i + h_{ki} a_i^dag. Row order is the builder's:
// diagonalize() sorts eps ascending, momentum_modes() keeps momenta() order.
struct ModeDecomposition {
  Eigen::MatrixXcd g;
  Eigen::MatrixXcd h;
  Eigen::VectorXd eps;
  bool complex_modes = false;
  Eigen::MatrixXd phi_mat() const;  // g + h, real case only
  Eigen::MatrixXd psi_mat() const;  // g - h
};

// SVD route: A + B = psi^T diag(eps) phi, eps >= 0 ascending, sign gauge fixed
// by the largest-magnitude entry of each phi row.
ModeDecomposition diagonalize(const QuadraticFermionForm& form);

// Plane-wave Bogoliubov modes of the even-sector uniform chain,
// g_{kj} = cos(theta_k/2) e^{-ikj}/sqrt(L), h_{kj} = -i sin(theta_k/2) e^{-ikj}/sqrt(L).
ModeDecomposition momentum_modes(double lambda0, int L);

struct OverlapKernel {
  Eigen::MatrixXcd g_tilde;  // alpha = g_tilde alpha' + h_tilde alpha'^dag
  Eigen::MatrixXcd h_tilde;
  Eigen::MatrixXcd G;  // antisymmetric, g_tilde G + h_tilde = 0
  double condition_number = 0.0;
};
OverlapKernel overlap_kernel(const ModeDecomposition& dec,
                             const ModeDecomposition& dec_prime);

enum class LocalState { Psi1, Psi2 };

// Local quench engine: X_q(u) for |Psi_1>, |Psi_2> via the Pfaffian overlap
// expansion. Construction precomputes the kernel; evaluations are pure.
class LocalQuenchSystem {
 public:
  LocalQuenchSystem(double lambda0, int L, double local_field, int site,
                    const PhaseProfile& phases);
  // Custom decompositions (gauge studies, perturbed kernels).
  LocalQuenchSystem(const ModeDecomposition& dec, const ModeDecomposition& dec_prime,
                    const PhaseProfile& phases, double local_field_hint = 0.0);

  cplx X(LocalState state, double u, double q, double beta) const;  // normalized
  cplx chi(LocalState state, double u, double q, double beta) const;
  // Psi1-type state with arbitrary per-mode amplitudes b_k in place of
  // e^{-beta eps_k/2 + i phi_k}; the stored phase profile is ignored.
  cplx X_psi1_amplitudes(double u, double q, const Eigen::VectorXcd& b) const;
  // Ground-state characteristic function e^{iu sum(eps-eps')/2} Pf ratio.
  cplx ground_state_chf(double u) const;

  const Eigen::VectorXd& eps() const { return eps_; }
  const Eigen::VectorXd& eps_prime() const { return eps_prime_; }
  double max_eps() const;
  double kernel_condition() const { return cond_; }
  const ModeDecomposition& modes() const { return dec_; }
  const ModeDecomposition& modes_prime() const { return dec_prime_; }

 private:
  void init(const PhaseProfile& phases);
  Eigen::MatrixXcd gamma0(double u) const;
  cplx X_raw(LocalState state, double u, double q, const Eigen::VectorXcd& b) const;
  Eigen::VectorXcd standard_amplitudes(double beta) const;

  int L_;
  double local_field_;
  ModeDecomposition dec_, dec_prime_;
  Eigen::VectorXd eps_, eps_prime_, phi_;
  Eigen::MatrixXcd P_, Q_, G_;  // g_tilde, h_tilde, kernel
  Eigen::MatrixXd sign_;        // s_{k,k'} antisymmetrizer
  double sum_eps_diff_half_;
  double cond_;
};

// Builds the system, retrying with a 1e-9 nudge of the local field when the
// vacuum-overlap kernel is singular (measure-zero parameter accidents).
LocalQuenchSystem make_local_quench(double lambda0, int L, double local_field,
                                    int site, const PhaseProfile& phases);

// <w^4> of chi_q for each local field in the grid.
std::vector<double> fourth_moment_sweep(int L, double lambda0, double beta, double q,
                                        const PhaseProfile& phases,
                                        const std::vector<double>& eps_grid, int site,
                                        LocalState state);

}  // namespace quasiwork
