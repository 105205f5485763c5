#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "quasiwork/types.hpp"

namespace quasiwork {

// Phase assignment phi_k for the positive-momentum modes, with phi_{-k} = phi_k
// enforced by construction (only k >= 0 is ever stored or queried).
// The index n labels the grid: even sector k = 2*pi*(n-1/2)/L with n = 1..L/2,
// odd sector k = 2*pi*n/L with n = 0..L/2.
struct PhaseProfile {
  enum class Kind { Constant, Alternating, PerMode };
  Kind kind = Kind::Constant;
  double phi = 0.0;
  double phi_odd = 0.0;
  double phi_even = 0.0;
  std::vector<double> phis;  // PerMode, indexed by n as above

  static PhaseProfile constant(double phi);
  static PhaseProfile alternating(double phi_odd, double phi_even);
  static PhaseProfile per_mode(std::vector<double> phis);

  double value(int n) const;
  bool is_constant() const { return kind == Kind::Constant; }
  // Constant profiles only; thermodynamic-limit quadratures need phi as a
  // function of k and the alternating pattern has no continuum limit.
  double constant_value() const;
};

struct QuenchSpec {
  int L = 2;
  double beta = 0.0;
  double lambda0 = 0.0;
  double lambda_tau = 0.0;
  double q = 0.5;
  PhaseProfile phases{};
  InitialState initial_state = InitialState::CoherentGibbs;
  double J = 1.0;

  void validate() const;  // L even > 0, beta in [0, 50], q in [0, 1]
  QuenchSpec with_q(double new_q) const {
    QuenchSpec s = *this;
    s.q = new_q;
    return s;
  }
};

struct ModeEntry {
  double k = 0.0;
  double eps = 0.0;        // eps_k(lambda0)
  double eps_prime = 0.0;  // eps_k(lambda_tau)
  Eigen::Vector3d dhat = Eigen::Vector3d::Zero();
  Eigen::Vector3d dhat_prime = Eigen::Vector3d::Zero();
  double cross_x = 0.0;  // (dhat x dhat')_x
  double phi = 0.0;
  bool paired = true;  // false for k = 0, pi (odd sector)
};

struct ModeTable {
  Sector sector = Sector::Even;
  std::vector<ModeEntry> entries;  // k >= 0, ascending
  int eta = 1;
  int s0 = 1;       // odd sector only
  int s_pi = 1;     // odd sector only
  static ModeTable build(const QuenchSpec& spec, Sector sector);
};

std::vector<double> momenta(int L, Sector sector);

double dispersion(double lambda, double k);

struct DVector {
  Eigen::Vector3d dhat;
  double eps;
};
// Unit vector of d_k = (0, sin k, -(lambda + cos k)); rejects gap closure.
DVector dvector(double lambda, double k);

double cross_x(const Eigen::Vector3d& dhat, const Eigen::Vector3d& dhat_prime);

struct ParitySigns {
  int eta_minus;
  int s0;
  int s_pi;
};
ParitySigns parity_signs(double lambda0, double lambda_tau);

double partition_function(int L, double beta, double lambda0);
double log_partition_function(int L, double beta, double lambda0);

// -beta^{-1} ln(Z(lambda_tau)/Z(lambda0)); beta > 0.
double free_energy_change(int L, double beta, double lambda0, double lambda_tau);

}  // namespace quasiwork
