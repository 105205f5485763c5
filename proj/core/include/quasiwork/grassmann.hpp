#pragma once

#include <Eigen/Dense>
#include <vector>

#include "quasiwork/types.hpp"

// Small symbolic Grassmann algebra over <= 12 generators with a fixed Berezin
// measure: integral d theta_1 ... d theta_{2n} of theta_{2n} ... theta_1 = 1,
// so that integral e^{-theta^T Gamma theta / 2} = Pf(Gamma).
namespace quasiwork {

struct GrassmannElement {
  int n_gen = 0;
  std::vector<cplx> coeff;  // indexed by generator bitmask, ascending order

  explicit GrassmannElement(int n);
  static GrassmannElement scalar(int n, cplx value);
  static GrassmannElement generator(int n, int i);
  GrassmannElement operator+(const GrassmannElement& other) const;
  GrassmannElement operator*(const GrassmannElement& other) const;
  GrassmannElement operator*(cplx s) const;
  bool is_zero(double tol = 0.0) const;
};

// exp of a Grassmann-even element (series terminates by nilpotency).
GrassmannElement grassmann_exp(const GrassmannElement& x);

// e^{-1/2 theta^T Gamma theta} for antisymmetric Gamma over 2n generators.
GrassmannElement gaussian_weight(const Eigen::MatrixXcd& gamma);

cplx berezin_integral(const GrassmannElement& x);

// Recursive cofactor Pfaffian for small matrices (reference implementation).
cplx pfaffian_reference(const Eigen::MatrixXcd& gamma);

// Residuals of the two- and four-point Gaussian-integral identities against
// their trace closed forms, maximized over index choices.
double two_point_identity_residual(const Eigen::MatrixXcd& gamma);
double four_point_identity_residual(const Eigen::MatrixXcd& gamma);

}  // namespace quasiwork
