#include "quasiwork/dense_oracle.hpp"

#include <algorithm>
#include <cmath>

namespace quasiwork::oracle {

namespace {

int popcount_below(uint64_t state, int bit) {
  const uint64_t mask = (bit == 0) ? 0ull : ((1ull << bit) - 1ull);
  return __builtin_popcountll(state & mask);
}

double jw_sign(uint64_t state, int bit) {
  return (popcount_below(state, bit) % 2 == 0) ? 1.0 : -1.0;
}

void check_dim(int L, int cap, const char* who) {
  if (L < 1) throw ContractError(std::string(who) + ": L must be positive");
  if (L > cap)
    throw ResourceError(std::string(who) + ": L beyond desk-scale cap " +
                        std::to_string(cap));
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

}  // namespace

EigenSystem eigensystem(const MatrixXcd& H, double herm_tol) {
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  if ((H - H.adjoint()).cwiseAbs().maxCoeff() > herm_tol * scale)
    throw ContractError("eigensystem: matrix not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(H);
  if (solver.info() != Eigen::Success)
    throw NumericalError("eigensystem: diagonalization failed");
  EigenSystem es;
  es.evals = solver.eigenvalues();
  es.evecs = solver.eigenvectors();
  // Deterministic gauge: rotate each column so its largest-|entry| is real > 0.
  for (Eigen::Index c = 0; c < es.evecs.cols(); ++c) {
    Eigen::Index imax = 0;
    es.evecs.col(c).cwiseAbs().maxCoeff(&imax);
    const cplx v = es.evecs(imax, c);
    if (std::abs(v) > 0) es.evecs.col(c) *= std::conj(v) / std::abs(v);
  }
  return es;
}

MatrixXd spin_hamiltonian(double lambda, int L) {
  check_dim(L, 14, "spin_hamiltonian");
  const uint64_t dim = 1ull << L;
  MatrixXd H = MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                              static_cast<Eigen::Index>(dim));
  for (uint64_t n = 0; n < dim; ++n) {
    double diag = 0.0;
    for (int i = 0; i < L; ++i) diag -= lambda * (((n >> i) & 1ull) ? 1.0 : -1.0);
    H(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) += diag;
    for (int bond = 0; bond < L; ++bond) {
      const int i = bond;
      const int j = (bond + 1) % L;
      const uint64_t m = n ^ (1ull << i) ^ (1ull << j);
      H(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) -= 1.0;
    }
  }
  return H;
}

MatrixXcd fock_annihilation(int L, int site) {
  check_dim(L, 12, "fock_annihilation");
  if (site < 1 || site > L) throw ContractError("fock_annihilation: site out of range");
  const int bit = site - 1;
  const uint64_t dim = 1ull << L;
  MatrixXcd a = MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                static_cast<Eigen::Index>(dim));
  for (uint64_t n = 0; n < dim; ++n) {
    if ((n >> bit) & 1ull)
      a(static_cast<Eigen::Index>(n ^ (1ull << bit)), static_cast<Eigen::Index>(n)) =
          jw_sign(n, bit);
  }
  return a;
}

MatrixXcd fock_momentum_annihilation(int L, double k) {
  const uint64_t dim = 1ull << L;
  MatrixXcd a = MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                static_cast<Eigen::Index>(dim));
  for (int j = 1; j <= L; ++j)
    a += std::exp(-I * k * static_cast<double>(j)) * fock_annihilation(L, j);
  return a / std::sqrt(static_cast<double>(L));
}

MatrixXcd parity_operator(int L) {
  const uint64_t dim = 1ull << L;
  MatrixXcd P = MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                static_cast<Eigen::Index>(dim));
  for (uint64_t n = 0; n < dim; ++n)
    P(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) =
        (__builtin_popcountll(n) % 2 == 0) ? 1.0 : -1.0;
  return P;
}

MatrixXcd fock_hamiltonian(const MatrixXcd& A, const MatrixXcd& B, double offset) {
  const int L = static_cast<int>(A.rows());
  check_dim(L, 12, "fock_hamiltonian");
  const double scale = std::max(1.0, std::max(A.cwiseAbs().maxCoeff(),
                                              B.cwiseAbs().maxCoeff()));
  if ((A - A.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw ContractError("fock_hamiltonian: A must be Hermitian");
  if ((B + B.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw ContractError("fock_hamiltonian: B must be antisymmetric");

  const uint64_t dim = 1ull << L;
  MatrixXcd H = MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                static_cast<Eigen::Index>(dim));
  const double half_tr = 0.5 * A.real().trace();
  for (uint64_t n = 0; n < dim; ++n) {
    double diag = offset - half_tr;
    for (int i = 0; i < L; ++i)
      if ((n >> i) & 1ull) diag += A(i, i).real();
    H(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) += diag;

    for (int i = 0; i < L; ++i) {
      for (int j = 0; j < L; ++j) {
        if (i == j) continue;
        // hopping A_ij a^dag_i a_j
        if (A(i, j) != cplx(0.0) && ((n >> j) & 1ull)) {
          const uint64_t m = n ^ (1ull << j);
          if (!((m >> i) & 1ull)) {
            const double sgn = jw_sign(n, j) * jw_sign(m, i);
            H(static_cast<Eigen::Index>(m | (1ull << i)),
              static_cast<Eigen::Index>(n)) += A(i, j) * sgn;
          }
        }
        // pairing (1/2) B_ij a^dag_i a^dag_j
        if (B(i, j) != cplx(0.0) && !((n >> j) & 1ull)) {
          const uint64_t m = n | (1ull << j);
          if (!((m >> i) & 1ull)) {
            const double sgn = jw_sign(n, j) * jw_sign(m, i);
            H(static_cast<Eigen::Index>(m | (1ull << i)),
              static_cast<Eigen::Index>(n)) += 0.5 * B(i, j) * sgn;
          }
        }
        // h.c.: (1/2) conj(B_ij) a_j a_i
        if (B(i, j) != cplx(0.0) && ((n >> i) & 1ull)) {
          const uint64_t m = n ^ (1ull << i);
          if ((m >> j) & 1ull) {
            const double sgn = jw_sign(n, i) * jw_sign(m, j);
            H(static_cast<Eigen::Index>(m ^ (1ull << j)),
              static_cast<Eigen::Index>(n)) += 0.5 * std::conj(B(i, j)) * sgn;
          }
        }
      }
    }
  }
  return H;
}

MatrixXcd fock_hamiltonian(const QuadraticFermionForm& form) {
  form.validate();
  return fock_hamiltonian(form.A.cast<cplx>(), form.B.cast<cplx>(), form.offset);
}

MatrixXcd full_fock_hamiltonian(double lambda, int L) {
  const MatrixXcd Hp = fock_hamiltonian(chain_form(lambda, L, Sector::Even));
  const MatrixXcd Hm = fock_hamiltonian(chain_form(lambda, L, Sector::Odd));
  const uint64_t dim = 1ull << L;
  MatrixXcd H = MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                static_cast<Eigen::Index>(dim));
  for (uint64_t r = 0; r < dim; ++r) {
    const bool re = (__builtin_popcountll(r) % 2 == 0);
    for (uint64_t c = 0; c < dim; ++c) {
      const bool ce = (__builtin_popcountll(c) % 2 == 0);
      if (re && ce)
        H(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            Hp(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      else if (!re && !ce)
        H(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            Hm(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return H;
}

std::vector<double> free_fermion_spectrum(double lambda, int L) {
  check_dim(L, 14, "free_fermion_spectrum");
  std::vector<double> spectrum;
  spectrum.reserve(1ull << L);
  for (Sector s : {Sector::Even, Sector::Odd}) {
    const auto ks = momenta(L, s);
    std::vector<double> eps;
    for (double k : ks) eps.push_back(dispersion(lambda, k));
    const int want_parity =
        (s == Sector::Even) ? 0 : ((std::abs(lambda) > 1.0) ? 1 : 0);
    const uint64_t dim = 1ull << L;
    for (uint64_t n = 0; n < dim; ++n) {
      if (__builtin_popcountll(n) % 2 != want_parity) continue;
      double E = 0.0;
      for (int i = 0; i < L; ++i)
        E += eps[static_cast<size_t>(i)] * ((((n >> i) & 1ull) ? 1.0 : 0.0) - 0.5);
      spectrum.push_back(E);
    }
  }
  std::sort(spectrum.begin(), spectrum.end());
  return spectrum;
}

SectorModes build_sector_modes(double lambda, int L, Sector sector,
                               const PhaseProfile& phases) {
  check_dim(L, 12, "build_sector_modes");
  SectorModes sm;
  sm.sector = sector;
  // Pair-grouped tensor order (k1, -k1, k2, -k2, ..., 0, pi): the product-state
  // factorization of X_q holds for this grouping, not for ascending momenta.
  for (double k : momenta(L, sector)) {
    if (k > 1e-12 && k < PI - 1e-12) {
      sm.ks.push_back(k);
      sm.ks.push_back(-k);
    }
  }
  for (double k : momenta(L, sector)) {
    if (std::abs(k) < 1e-12) sm.ks.push_back(k);
  }
  for (double k : momenta(L, sector)) {
    if (std::abs(k - PI) < 1e-12) sm.ks.push_back(k);
  }
  sm.hamiltonian = fock_hamiltonian(chain_form(lambda, L, sector));
  const EigenSystem es = eigensystem(sm.hamiltonian);
  sm.vacuum = es.evecs.col(0);
  for (double k : sm.ks) {
    sm.eps.push_back(dispersion(lambda, k));
    const double kk = std::abs(k);
    const int n_idx = (sector == Sector::Even)
                          ? static_cast<int>(std::lround(kk * L / (2.0 * PI) + 0.5))
                          : static_cast<int>(std::lround(kk * L / (2.0 * PI)));
    sm.phi.push_back(phases.value(n_idx));
    const double tol = 1e-12;
    if (std::abs(k) < tol) {
      MatrixXcd a0 = fock_momentum_annihilation(L, 0.0);
      sm.alpha.push_back(lambda > -1.0 ? MatrixXcd(a0.adjoint()) : a0);
    } else if (std::abs(k - PI) < tol) {
      MatrixXcd api = fock_momentum_annihilation(L, PI);
      sm.alpha.push_back(lambda > 1.0 ? MatrixXcd(api.adjoint()) : api);
    } else {
      const double eps_k = dispersion(lambda, k);
      const double theta =
          std::atan2(2.0 * std::sin(k) / eps_k, -2.0 * (lambda + std::cos(k)) / eps_k);
      const MatrixXcd ak = fock_momentum_annihilation(L, k);
      const MatrixXcd amk_dag = fock_momentum_annihilation(L, -k).adjoint();
      sm.alpha.push_back(std::cos(theta / 2.0) * ak -
                         I * std::sin(theta / 2.0) * amk_dag);
    }
  }
  return sm;
}

VectorXcd coherent_gibbs_fock(double lambda0, int L, double beta,
                              const PhaseProfile& phases) {
  const double log_z = log_partition_function(L, beta, lambda0);
  const uint64_t dim = 1ull << L;
  VectorXcd psi = VectorXcd::Zero(static_cast<Eigen::Index>(dim));
  for (Sector s : {Sector::Even, Sector::Odd}) {
    const SectorModes sm = build_sector_modes(lambda0, L, s, phases);
    VectorXcd v = sm.vacuum;
    double sum_eps = 0.0;
    // The first tensor factor is the leftmost creation operator, so apply the
    // per-mode factors in reverse list order.
    for (size_t mm = sm.ks.size(); mm-- > 0;) {
      sum_eps += sm.eps[mm];
      const cplx amp = std::exp(cplx(-beta * sm.eps[mm] / 2.0, sm.phi[mm]));
      v = v + amp * (sm.alpha[mm].adjoint() * v).eval();
    }
    v *= std::exp(beta * sum_eps / 4.0 - log_z / 2.0);
    // Keep only the parity components that are eigenstates of H in sector s.
    const int want = (s == Sector::Even) ? 0 : 1;
    for (uint64_t n = 0; n < dim; ++n)
      if (__builtin_popcountll(n) % 2 != want) v(static_cast<Eigen::Index>(n)) = 0.0;
    psi += v;
  }
  return psi;
}

MatrixXcd gibbs_density_fock(double lambda0, int L, double beta) {
  const EigenSystem es = eigensystem(full_fock_hamiltonian(lambda0, L));
  const double e0 = es.evals.minCoeff();
  VectorXd w = (-(beta) * (es.evals.array() - e0)).exp();
  w /= w.sum();
  return es.evecs * w.asDiagonal() * es.evecs.adjoint();
}

VectorXcd coherent_gibbs_state(const EigenSystem& es, double beta,
                               const std::vector<double>& phases) {
  const Eigen::Index dim = es.evals.size();
  if (static_cast<Eigen::Index>(phases.size()) != dim)
    throw ContractError("coherent_gibbs_state: one phase per eigenstate required");
  const double e0 = es.evals.minCoeff();
  VectorXcd amp(dim);
  double z = 0.0;
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double w = std::exp(-beta * (es.evals(j) - e0));
    z += w;
    amp(j) = std::sqrt(w) * std::exp(I * phases[static_cast<size_t>(j)]);
  }
  amp /= std::sqrt(z);
  return es.evecs * amp;
}

MatrixXcd dephase(const MatrixXcd& rho, const EigenSystem& es) {
  const VectorXcd diag = (es.evecs.adjoint() * rho * es.evecs).diagonal();
  return es.evecs * diag.asDiagonal() * es.evecs.adjoint();
}

double von_neumann_entropy(const MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(rho);
  double S = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double p = solver.eigenvalues()(i);
    if (p > 1e-15) S -= p * std::log(p);
  }
  return S;
}

OracleX::OracleX(const VectorXcd& psi, const EigenSystem& es0, const EigenSystem& es1)
    : pure_(true), e0_(es0.evals), e1_(es1.evals) {
  psi0_ = es0.evecs.adjoint() * psi;
  T_ = es0.evecs.adjoint() * es1.evecs;
}

OracleX::OracleX(double beta, const EigenSystem& es0, const EigenSystem& es1)
    : pure_(false), e0_(es0.evals), e1_(es1.evals) {
  const double e0 = es0.evals.minCoeff();
  rho_diag_ = (-(beta) * (es0.evals.array() - e0)).exp();
  rho_diag_ /= rho_diag_.sum();
  T_ = es0.evecs.adjoint() * es1.evecs;
}

cplx OracleX::X(double u, double q) const {
  const Eigen::Index dim = e0_.size();
  VectorXcd phase1 = (I * u * e1_.array()).exp();
  if (pure_) {
    VectorXcd a = (-(I * u * q) * e0_.array()).exp() * psi0_.array();
    VectorXcd b = (-(I * u * (1.0 - q)) * e0_.array()).exp() * psi0_.array().conjugate();
    // X = b^T T diag(e^{iuE'}) T^dag a
    VectorXcd ta = T_.adjoint() * a;
    ta.array() *= phase1.array();
    return b.transpose() * (T_ * ta);
  }
  cplx acc = 0.0;
  for (Eigen::Index j = 0; j < dim; ++j) {
    cplx inner = 0.0;
    for (Eigen::Index k = 0; k < dim; ++k)
      inner += std::norm(T_(j, k)) * phase1(k);
    acc += rho_diag_(j) * std::exp(-I * u * e0_(j)) * inner;
  }
  return acc;
}

cplx OracleX::chi(double u, double q) const {
  return 0.5 * (X(u, q) + X(u, 1.0 - q));
}

WorkAtomList quasiprobability_direct(const MatrixXcd& rho0, const EigenSystem& es0,
                                     const EigenSystem& es1, double q,
                                     double merge_tol) {
  const Eigen::Index dim = es0.evals.size();
  if (rho0.rows() != dim || es1.evals.size() != dim)
    throw ContractError("quasiprobability_direct: dimension mismatch");
  if (dim > 128)
    throw ResourceError("quasiprobability_direct: dense atom sum capped at dim 128");
  const MatrixXcd rho_t = es0.evecs.adjoint() * rho0 * es0.evecs;
  const MatrixXcd T = es0.evecs.adjoint() * es1.evecs;
  std::vector<WorkAtom> raw;
  raw.reserve(static_cast<size_t>(dim) * dim * dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) {
      const cplx r = rho_t(i, j);
      if (std::abs(r) < 1e-18) continue;
      for (Eigen::Index k = 0; k < dim; ++k) {
        const double mass = (r * T(j, k) * std::conj(T(i, k))).real();
        if (mass == 0.0) continue;
        raw.push_back({es1.evals(k) - q * es0.evals(i) - (1.0 - q) * es0.evals(j),
                       mass});
      }
    }
  std::sort(raw.begin(), raw.end(),
            [](const WorkAtom& a, const WorkAtom& b) { return a.w < b.w; });
  WorkAtomList merged;
  for (const WorkAtom& a : raw) {
    if (!merged.empty() && std::abs(a.w - merged.back().w) <= merge_tol)
      merged.back().mass += a.mass;
    else
      merged.push_back(a);
  }
  return merged;
}

double atoms_mass(const WorkAtomList& atoms) {
  double s = 0.0;
  for (const auto& a : atoms) s += a.mass;
  return s;
}

double atoms_moment(const WorkAtomList& atoms, int n) {
  double s = 0.0;
  for (const auto& a : atoms) s += a.mass * std::pow(a.w, n);
  return s;
}

cplx atoms_chf(const WorkAtomList& atoms, double u) {
  cplx s = 0.0;
  for (const auto& a : atoms) s += a.mass * std::exp(I * u * a.w);
  return s;
}

double atoms_exp_mean(const WorkAtomList& atoms, double coef) {
  double s = 0.0;
  for (const auto& a : atoms) s += a.mass * std::exp(coef * a.w);
  return s;
}

double atoms_min_mass(const WorkAtomList& atoms) {
  double m = 0.0;
  for (const auto& a : atoms) m = std::min(m, a.mass);
  return m;
}

double moments_closed_form(const MatrixXcd& rho0, const EigenSystem& es0,
                           const EigenSystem& es1, double q, int n) {
  if (n < 0 || n > 8) throw ContractError("moments_closed_form: n must be in 0..8");
  const Eigen::Index dim = es0.evals.size();
  const MatrixXcd rho_t = es0.evecs.adjoint() * rho0 * es0.evecs;
  const MatrixXcd T = es0.evecs.adjoint() * es1.evecs;

  // W_k = (H'^k) in the H eigenbasis; M_k(x,y) = rho_t(x,y) W_k(y,x).
  std::vector<MatrixXcd> Mk(static_cast<size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    VectorXcd ek = es1.evals.array().pow(k).cast<cplx>();
    MatrixXcd Wk = T * ek.asDiagonal() * T.adjoint();
    Mk[static_cast<size_t>(k)] = rho_t.cwiseProduct(Wk.transpose());
  }
  std::vector<VectorXd> e0p(static_cast<size_t>(n) + 1);
  for (int p = 0; p <= n; ++p) e0p[static_cast<size_t>(p)] = es0.evals.array().pow(p);

  auto deriv = [&](double qq) -> cplx {
    cplx total = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double sk = ((n - k) % 2 == 0) ? 1.0 : -1.0;
      for (int l = 0; l <= n - k; ++l) {
        const double c = sk * binom(n, k) * binom(n - k, l) *
                         std::pow(qq, n - k - l) * std::pow(1.0 - qq, l);
        if (c == 0.0) continue;
        const cplx tr = e0p[static_cast<size_t>(n - k - l)].transpose().cast<cplx>() *
                        Mk[static_cast<size_t>(k)] *
                        e0p[static_cast<size_t>(l)].cast<cplx>();
        total += c * tr;
      }
    }
    (void)dim;
    return total;
  };
  const cplx m = 0.5 * (deriv(q) + deriv(1.0 - q));
  if (std::abs(m.imag()) > 1e-8 * std::max(1.0, std::abs(m)))
    throw NumericalError("moments_closed_form: imaginary residue");
  return m.real();
}

std::vector<CoherenceAtom> coherence_distribution(const MatrixXcd& rho0,
                                                  const EigenSystem& es0,
                                                  double merge_tol) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> rsolve(rho0);
  const VectorXd R = rsolve.eigenvalues();
  const MatrixXcd O = es0.evecs.adjoint() * rsolve.eigenvectors();  // <E_i|R_n>
  const Eigen::Index dim = R.size();
  VectorXd rho_ii = VectorXd::Zero(dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index nn = 0; nn < dim; ++nn)
      if (R(nn) > 1e-15) rho_ii(i) += R(nn) * std::norm(O(i, nn));
  std::vector<CoherenceAtom> raw;
  for (Eigen::Index nn = 0; nn < dim; ++nn) {
    if (R(nn) <= 1e-14) continue;  // zero-eigenvalue branch carries zero weight
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double wgt = R(nn) * std::norm(O(i, nn));
      if (wgt < 1e-18) continue;
      raw.push_back({std::log(R(nn)) - std::log(rho_ii(i)), wgt});
    }
  }
  std::sort(raw.begin(), raw.end(),
            [](const CoherenceAtom& a, const CoherenceAtom& b) { return a.C < b.C; });
  std::vector<CoherenceAtom> merged;
  for (const auto& a : raw) {
    if (!merged.empty() && std::abs(a.C - merged.back().C) <= merge_tol)
      merged.back().weight += a.weight;
    else
      merged.push_back(a);
  }
  return merged;
}

std::vector<JointAtom> joint_atoms(const MatrixXcd& rho0, const EigenSystem& es0,
                                   const EigenSystem& es1, double merge_tol) {
  const Eigen::Index dim = es0.evals.size();
  if (dim > 64) throw ResourceError("joint_atoms: dense 4-index sum capped at dim 64");
  Eigen::SelfAdjointEigenSolver<MatrixXcd> rsolve(rho0);
  const VectorXd R = rsolve.eigenvalues();
  const MatrixXcd r = es0.evecs.adjoint() * rsolve.eigenvectors();  // <E_i|R_n>
  const MatrixXcd T = es0.evecs.adjoint() * es1.evecs;
  VectorXd rho_ii = VectorXd::Zero(dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index nn = 0; nn < dim; ++nn)
      if (R(nn) > 1e-15) rho_ii(i) += R(nn) * std::norm(r(i, nn));

  struct RawAtom {
    double w, C;
    cplx mass;
  };
  std::vector<RawAtom> raw;
  for (Eigen::Index nn = 0; nn < dim; ++nn) {
    if (R(nn) <= 1e-14) continue;
    const double logR = std::log(R(nn));
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (std::abs(r(i, nn)) < 1e-16) continue;
      for (Eigen::Index j = 0; j < dim; ++j) {
        if (std::abs(r(j, nn)) < 1e-16) continue;
        const cplx pre = R(nn) * std::conj(r(i, nn)) * r(j, nn);
        const double C =
            logR - 0.5 * (std::log(rho_ii(i)) + std::log(rho_ii(j)));
        for (Eigen::Index k = 0; k < dim; ++k) {
          const cplx mass = pre * T(i, k) * std::conj(T(j, k));
          if (std::abs(mass) < 1e-20) continue;
          raw.push_back(
              {es1.evals(k) - 0.5 * (es0.evals(i) + es0.evals(j)), C, mass});
        }
      }
    }
  }
  std::sort(raw.begin(), raw.end(), [](const RawAtom& a, const RawAtom& b) {
    return a.w != b.w ? a.w < b.w : a.C < b.C;
  });
  std::vector<JointAtom> merged;
  cplx acc = 0.0;
  for (size_t idx = 0; idx < raw.size(); ++idx) {
    if (!merged.empty() && std::abs(raw[idx].w - merged.back().w) <= merge_tol &&
        std::abs(raw[idx].C - merged.back().C) <= merge_tol) {
      acc += raw[idx].mass;
      merged.back().mass = acc.real();
    } else {
      acc = raw[idx].mass;
      merged.push_back({raw[idx].w, raw[idx].C, acc.real()});
    }
  }
  // Drop numerical dust (eigensolver cross-talk between near-degenerate
  // clusters produces atoms with vanishing mass and meaningless C). The
  // threshold stays small: exponential averages amplify atom masses.
  std::vector<JointAtom> kept;
  for (const auto& a : merged)
    if (std::abs(a.mass) > 1e-15) kept.push_back(a);
  return kept;
}

cplx joint_characteristic(const MatrixXcd& rho0, const EigenSystem& es0,
                          const EigenSystem& es1, double u, double t) {
  const Eigen::Index dim = es0.evals.size();
  Eigen::SelfAdjointEigenSolver<MatrixXcd> rsolve(rho0);
  const VectorXd R = rsolve.eigenvalues();
  // rho0^{1+it} restricted to the support.
  VectorXcd rpow(dim);
  for (Eigen::Index nn = 0; nn < dim; ++nn)
    rpow(nn) = (R(nn) > 1e-14)
                   ? R(nn) * std::exp(I * t * std::log(R(nn)))
                   : cplx(0.0);
  const MatrixXcd rho_pow = rsolve.eigenvectors() * rpow.asDiagonal() *
                            rsolve.eigenvectors().adjoint();
  const MatrixXcd P = es0.evecs.adjoint() * rho_pow * es0.evecs;
  const MatrixXcd rho_t = es0.evecs.adjoint() * rho0 * es0.evecs;
  VectorXcd dmid(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double pii = std::max(rho_t(i, i).real(), 1e-300);
    dmid(i) = std::exp(-I * (0.5 * u * es0.evals(i)) - I * (0.5 * t * std::log(pii)));
  }
  const MatrixXcd T = es0.evecs.adjoint() * es1.evecs;
  const VectorXcd ph1 = (I * u * es1.evals.array()).exp();
  const MatrixXcd W = T * ph1.asDiagonal() * T.adjoint();
  return (P * dmid.asDiagonal() * W * dmid.asDiagonal()).trace();
}

cplx qubit_detector(const MatrixXcd& rho0, const EigenSystem& es0,
                    const EigenSystem& es1, double u, double q,
                    const Eigen::Matrix2cd& rho_detector, double omega) {
  const cplx coh0 = rho_detector(0, 1);  // <e|rho_D|g>
  if (std::abs(coh0) < 1e-15)
    throw ContractError("qubit_detector: initial detector coherence is zero");
  // Couplings: t_D = t'_D = 1, (1-delta_e) = u q, (1-delta_g) = -u(1-q),
  // delta'_e = u, delta'_g = 0.
  auto evolve = [](const EigenSystem& es, double c) -> MatrixXcd {
    const VectorXcd ph = (-I * c * es.evals.array()).exp();
    return es.evecs * ph.asDiagonal() * es.evecs.adjoint();
  };
  const MatrixXcd Ue = std::exp(-I * omega) * evolve(es0, u * q);
  const MatrixXcd Ug = evolve(es0, -u * (1.0 - q));
  const MatrixXcd Upe = std::exp(-I * omega) * evolve(es1, 1.0 - u);
  const MatrixXcd Upg = evolve(es1, 1.0);
  const MatrixXcd Beg = Upe * Ue * (coh0 * rho0) * Ug.adjoint() * Upg.adjoint();
  const cplx coh_f = Beg.trace();
  const double t_elapsed = 2.0;  // t_D + t'_D, sudden quench in between
  return coh_f * std::exp(I * omega * t_elapsed) / coh0;
}

}  // namespace quasiwork::oracle
