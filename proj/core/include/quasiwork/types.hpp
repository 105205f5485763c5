#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace quasiwork {

using cplx = std::complex<double>;
inline constexpr cplx I{0.0, 1.0};
inline constexpr double PI = 3.14159265358979323846;

enum class Sector { Even, Odd };
enum class InitialState { Gibbs, CoherentGibbs };

// Contract violations (bad arguments, invariants broken by the caller).
struct ContractError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Numerical failures (non-converged quadrature/extrapolation, singular kernels).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requested sizes beyond the dense desk-scale caps.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace quasiwork
