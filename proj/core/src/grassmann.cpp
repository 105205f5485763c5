#include "quasiwork/grassmann.hpp"

#include <cmath>
#include <functional>

namespace quasiwork {

GrassmannElement::GrassmannElement(int n) : n_gen(n) {
  if (n < 0 || n > 12) throw ContractError("GrassmannElement: <= 12 generators");
  coeff.assign(1ull << n, cplx(0.0));
}

GrassmannElement GrassmannElement::scalar(int n, cplx value) {
  GrassmannElement e(n);
  e.coeff[0] = value;
  return e;
}

GrassmannElement GrassmannElement::generator(int n, int i) {
  if (i < 0 || i >= n) throw ContractError("GrassmannElement: generator index");
  GrassmannElement e(n);
  e.coeff[1ull << i] = 1.0;
  return e;
}

GrassmannElement GrassmannElement::operator+(const GrassmannElement& other) const {
  if (n_gen != other.n_gen) throw ContractError("GrassmannElement: size mismatch");
  GrassmannElement r(n_gen);
  for (size_t m = 0; m < coeff.size(); ++m) r.coeff[m] = coeff[m] + other.coeff[m];
  return r;
}

GrassmannElement GrassmannElement::operator*(cplx s) const {
  GrassmannElement r(n_gen);
  for (size_t m = 0; m < coeff.size(); ++m) r.coeff[m] = coeff[m] * s;
  return r;
}

GrassmannElement GrassmannElement::operator*(const GrassmannElement& other) const {
  if (n_gen != other.n_gen) throw ContractError("GrassmannElement: size mismatch");
  GrassmannElement r(n_gen);
  for (size_t a = 0; a < coeff.size(); ++a) {
    if (coeff[a] == cplx(0.0)) continue;
    for (size_t b = 0; b < other.coeff.size(); ++b) {
      if (other.coeff[b] == cplx(0.0) || (a & b) != 0) continue;
      // Sign: number of crossings moving each generator of b past those of a
      // with a larger index.
      int crossings = 0;
      uint64_t bb = b;
      while (bb) {
        const int i = __builtin_ctzll(bb);
        bb &= bb - 1;
        crossings += __builtin_popcountll(a >> (i + 1));
      }
      const double sgn = (crossings % 2 == 0) ? 1.0 : -1.0;
      r.coeff[a | b] += sgn * coeff[a] * other.coeff[b];
    }
  }
  return r;
}

bool GrassmannElement::is_zero(double tol) const {
  for (const cplx& c : coeff)
    if (std::abs(c) > tol) return false;
  return true;
}

GrassmannElement grassmann_exp(const GrassmannElement& x) {
  GrassmannElement acc = GrassmannElement::scalar(x.n_gen, 1.0);
  GrassmannElement term = GrassmannElement::scalar(x.n_gen, 1.0);
  for (int j = 1; j <= x.n_gen + 1; ++j) {
    term = term * x;
    term = term * cplx(1.0 / j);
    if (term.is_zero()) break;
    acc = acc + term;
  }
  return acc;
}

GrassmannElement gaussian_weight(const Eigen::MatrixXcd& gamma) {
  const int n = static_cast<int>(gamma.rows());
  if (gamma.cols() != n || n % 2 != 0)
    throw ContractError("gaussian_weight: even-dimensional square matrix required");
  GrassmannElement quad(n);
  // -1/2 theta^T Gamma theta = -sum_{i<j} Gamma_ij theta_i theta_j
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      quad.coeff[(1ull << i) | (1ull << j)] -= gamma(i, j);
  return grassmann_exp(quad);
}

cplx berezin_integral(const GrassmannElement& x) {
  if (x.n_gen % 2 != 0) throw ContractError("berezin_integral: even generator count");
  const int n_pairs = x.n_gen / 2;
  const double sgn = (n_pairs % 2 == 0) ? 1.0 : -1.0;
  return sgn * x.coeff[(1ull << x.n_gen) - 1];
}

cplx pfaffian_reference(const Eigen::MatrixXcd& gamma) {
  const int n = static_cast<int>(gamma.rows());
  if (n % 2 != 0) return 0.0;
  if (n == 0) return 1.0;
  std::vector<int> idx(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = i;
  // Pf(A) = sum_{j} (-1)^j A(i0, ij) Pf(A with rows/cols i0, ij removed)
  std::function<cplx(const std::vector<int>&)> rec =
      [&](const std::vector<int>& ids) -> cplx {
    if (ids.empty()) return 1.0;
    cplx acc = 0.0;
    double sgn = 1.0;
    for (size_t j = 1; j < ids.size(); ++j) {
      std::vector<int> rest;
      for (size_t t = 1; t < ids.size(); ++t)
        if (t != j) rest.push_back(ids[t]);
      acc += sgn * gamma(ids[0], ids[j]) * rec(rest);
      sgn = -sgn;
    }
    return acc;
  };
  return rec(idx);
}

namespace {

Eigen::MatrixXcd x_matrix(int n, int i, int j) {
  Eigen::MatrixXcd X = Eigen::MatrixXcd::Zero(n, n);
  X(i, j) = 1.0;
  X(j, i) = -1.0;
  return X;
}

}  // namespace

double two_point_identity_residual(const Eigen::MatrixXcd& gamma) {
  const int n = static_cast<int>(gamma.rows());
  const GrassmannElement weight = gaussian_weight(gamma);
  const Eigen::MatrixXcd gi = gamma.inverse();
  const cplx pf = pfaffian_reference(gamma);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const GrassmannElement mono =
          GrassmannElement::generator(n, i) * GrassmannElement::generator(n, j);
      const cplx lhs = berezin_integral(mono * weight);
      const cplx rhs = -0.5 * (gi * x_matrix(n, i, j)).trace() * pf;
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

double four_point_identity_residual(const Eigen::MatrixXcd& gamma) {
  const int n = static_cast<int>(gamma.rows());
  if (n < 4) throw ContractError("four_point_identity: need >= 4 generators");
  const GrassmannElement weight = gaussian_weight(gamma);
  const Eigen::MatrixXcd gi = gamma.inverse();
  const cplx pf = pfaffian_reference(gamma);
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          if (i == j || i == k || i == l || j == k || j == l || k == l) continue;
          const GrassmannElement mono = GrassmannElement::generator(n, i) *
                                        GrassmannElement::generator(n, j) *
                                        GrassmannElement::generator(n, k) *
                                        GrassmannElement::generator(n, l);
          const cplx lhs = berezin_integral(mono * weight);
          const Eigen::MatrixXcd a = gi * x_matrix(n, i, j);
          const Eigen::MatrixXcd b = gi * x_matrix(n, k, l);
          const cplx rhs =
              (-0.5 * (a * b).trace() + 0.25 * a.trace() * b.trace()) * pf;
          worst = std::max(worst, std::abs(lhs - rhs));
        }
  return worst;
}

}  // namespace quasiwork
