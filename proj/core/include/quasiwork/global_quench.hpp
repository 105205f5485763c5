#pragma once

#include <vector>

#include "quasiwork/model.hpp"
#include "quasiwork/types.hpp"

namespace quasiwork {

struct CharacteristicCurve {
  enum class Kind { Xq, Chi };
  Kind kind = Kind::Chi;
  std::vector<double> u_grid;
  std::vector<cplx> values;
  QuenchSpec spec;
};

// Paired-mode incoherent factor X^{(k),th}_q(u).
cplx mode_factor_thermal(const ModeEntry& e, double beta, double u);
// Paired-mode coherent factor X^{(k),coh}_q(u), purely imaginary.
cplx mode_factor_coherent(const ModeEntry& e, double q, double u);
// Unpaired k = 0, pi factors: (X^{(k)}, X'^{(k)}) = 2cosh, 2sinh of the same argument.
std::pair<cplx, cplx> mode_factor_unpaired(const ModeEntry& e, double beta, double u,
                                           int s_k);

// Exact finite-size characteristic functions. Mode tables and ln Z are built
// once per spec; evaluations are pure and safe to call concurrently.
class GlobalQuenchSystem {
 public:
  explicit GlobalQuenchSystem(const QuenchSpec& spec);

  cplx X(double u) const { return X(u, spec_.q); }
  cplx X(double u, double q) const;
  cplx chi(double u) const;  // (X_q + X_{1-q}) / 2

  const QuenchSpec& spec() const { return spec_; }
  double max_eps() const { return max_eps_; }
  double fd_step() const;  // Richardson base step for moments

 private:
  QuenchSpec spec_;
  ModeTable even_, odd_;
  double log_z_;
  double max_eps_;
};

cplx finite_size_X(const QuenchSpec& spec, double u);
cplx chi(const QuenchSpec& spec, double u);
CharacteristicCurve chi_curve(const QuenchSpec& spec, const std::vector<double>& u_grid);
CharacteristicCurve x_curve(const QuenchSpec& spec, const std::vector<double>& u_grid);

// <w^n> by Richardson-extrapolated central differences of chi at u = 0.
double moments_fd(const QuenchSpec& spec, int n);

namespace detail {
// Test hook: flips the sign of the coherent mode factor to exercise the
// verification suite's fault reporting. Never set in production paths.
inline bool coherent_sign_fault = false;
}  // namespace detail

}  // namespace quasiwork
