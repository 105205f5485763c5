#pragma once

#include <Eigen/Dense>
#include <vector>

#include "quasiwork/model.hpp"
#include "quasiwork/quadratic_form.hpp"
#include "quasiwork/types.hpp"

// Brute-force 2^L reference implementations. Everything here is built directly
// from definitions (dense matrices, full eigendecompositions) and exists to
// validate the fast paths; sizes are capped at desk scale.
namespace quasiwork::oracle {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

struct EigenSystem {
  VectorXd evals;   // ascending, stable tie-break on original index
  MatrixXcd evecs;  // columns; each column's largest-|entry| fixed real positive
};
EigenSystem eigensystem(const MatrixXcd& H, double herm_tol = 1e-12);

// -lambda sum sigma^z - sum sigma^x sigma^x with periodic closure. Real
// symmetric in the computational basis (bit = 1 means spin up).
MatrixXd spin_hamiltonian(double lambda, int L);

// Jordan-Wigner-ordered Fock operators, site labels 1..L.
MatrixXcd fock_annihilation(int L, int site);
// a_k = L^{-1/2} sum_j e^{-ikj} a_j
MatrixXcd fock_momentum_annihilation(int L, double k);
MatrixXcd parity_operator(int L);

// sum a^dag A a + (1/2)(a^dag B a^dag + h.c.) - (1/2) tr A + offset.
// A Hermitian, B antisymmetric (complex allowed), L <= 12.
MatrixXcd fock_hamiltonian(const MatrixXcd& A, const MatrixXcd& B, double offset);
MatrixXcd fock_hamiltonian(const QuadraticFermionForm& form);

// P+ H+ P+ + P- H- P- assembled from the two boundary sectors.
MatrixXcd full_fock_hamiltonian(double lambda, int L);

// Union of parity-sector free-fermion energies (the physical spectrum).
std::vector<double> free_fermion_spectrum(double lambda, int L);

// Bogoliubov quasiparticles of one sector as dense Fock operators, plus the
// sector vacuum (ground state of the quadratic H_s over the whole Fock space).
struct SectorModes {
  Sector sector;
  std::vector<double> ks;    // all momenta of K_s, ascending
  std::vector<double> eps;   // eps_k(lambda)
  std::vector<double> phi;   // phase attached to each mode (phi_{-k} = phi_k)
  std::vector<MatrixXcd> alpha;  // annihilation operators
  VectorXcd vacuum;
  MatrixXcd hamiltonian;
};
SectorModes build_sector_modes(double lambda, int L, Sector sector,
                               const PhaseProfile& phases = {});

// |Psi_G> = P+|Psi_G^+> + P-|Psi_G^->, per-mode Gibbs amplitudes and phases.
VectorXcd coherent_gibbs_fock(double lambda0, int L, double beta,
                              const PhaseProfile& phases);
MatrixXcd gibbs_density_fock(double lambda0, int L, double beta);

// Z^{-1/2} sum_j e^{-beta E_j/2 + i phi_j} |E_j> in an arbitrary eigenbasis.
VectorXcd coherent_gibbs_state(const EigenSystem& es, double beta,
                               const std::vector<double>& phases);

// Dephasing map in the es basis.
MatrixXcd dephase(const MatrixXcd& rho, const EigenSystem& es);
double von_neumann_entropy(const MatrixXcd& rho);

// X_q(u) evaluated densely; precomputes the basis overlap so that a u-sweep
// costs O(dim^2) per point.
class OracleX {
 public:
  OracleX(const VectorXcd& psi, const EigenSystem& es0, const EigenSystem& es1);
  OracleX(double beta, const EigenSystem& es0, const EigenSystem& es1);  // Gibbs
  cplx X(double u, double q) const;
  cplx chi(double u, double q) const;

 private:
  bool pure_;
  VectorXcd psi0_;
  VectorXd rho_diag_;
  MatrixXcd T_;  // <E_i | E'_k>
  VectorXd e0_, e1_;
};

struct WorkAtom {
  double w;
  double mass;
};
using WorkAtomList = std::vector<WorkAtom>;

// p_q(w) atoms for a sudden quench; masses merged within w-tolerance.
WorkAtomList quasiprobability_direct(const MatrixXcd& rho0, const EigenSystem& es0,
                                     const EigenSystem& es1, double q,
                                     double merge_tol = 1e-9);
double atoms_mass(const WorkAtomList& atoms);
double atoms_moment(const WorkAtomList& atoms, int n);
cplx atoms_chf(const WorkAtomList& atoms, double u);
double atoms_exp_mean(const WorkAtomList& atoms, double coef);  // <e^{coef w}>
double atoms_min_mass(const WorkAtomList& atoms);

// Closed-form (-i)^n d^n X_q(0), symmetrized over q <-> 1-q; n <= 8.
double moments_closed_form(const MatrixXcd& rho0, const EigenSystem& es0,
                           const EigenSystem& es1, double q, int n);

struct CoherenceAtom {
  double C;
  double weight;
};
std::vector<CoherenceAtom> coherence_distribution(const MatrixXcd& rho0,
                                                  const EigenSystem& es0,
                                                  double merge_tol = 1e-9);

struct JointAtom {
  double w;
  double C;
  double mass;
};
// Joint (w, C) quasiprobability atoms at the symmetric choice q = 1/2.
std::vector<JointAtom> joint_atoms(const MatrixXcd& rho0, const EigenSystem& es0,
                                   const EigenSystem& es1, double merge_tol = 1e-9);
cplx joint_characteristic(const MatrixXcd& rho0, const EigenSystem& es0,
                          const EigenSystem& es1, double u, double t);

// Appendix-F style qubit detector protocol: evolves detector x system through
// the two coupling windows and reads X_q(u) off the detector coherence.
cplx qubit_detector(const MatrixXcd& rho0, const EigenSystem& es0,
                    const EigenSystem& es1, double u, double q,
                    const Eigen::Matrix2cd& rho_detector, double omega = 0.37);

}  // namespace quasiwork::oracle
