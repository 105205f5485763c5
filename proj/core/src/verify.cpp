#include "quasiwork/verify.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <random>
#include <sstream>

#include "quasiwork/coherence.hpp"
#include "quasiwork/dense_oracle.hpp"
#include "quasiwork/global_quench.hpp"
#include "quasiwork/grassmann.hpp"
#include "quasiwork/pfaffian.hpp"
#include "quasiwork/quadratic_form.hpp"

namespace quasiwork {

namespace {

std::string describe(const QuenchSpec& s) {
  std::ostringstream os;
  os << "L=" << s.L << " lambda0=" << s.lambda0 << " lambda_tau=" << s.lambda_tau
     << " beta=" << s.beta << " q=" << s.q << " phi="
     << (s.phases.kind == PhaseProfile::Kind::Constant ? s.phases.phi : -1.0)
     << (s.initial_state == InitialState::Gibbs ? " gibbs" : " coherent");
  return os.str();
}

struct Worst {
  double err = 0.0;
  std::string detail;
  void update(double e, const std::string& d) {
    if (e > err) {
      err = e;
      detail = d;
    }
  }
};

CheckResult oracle_equivalence(const std::vector<int>& sizes,
                               const std::vector<std::pair<double, double>>& lpairs,
                               const std::vector<double>& betas,
                               const std::vector<double>& qs,
                               const std::vector<double>& phis, int n_u) {
  Worst worst;
  for (int L : sizes) {
    for (auto [l0, l1] : lpairs) {
      const oracle::EigenSystem es0 =
          oracle::eigensystem(oracle::full_fock_hamiltonian(l0, L));
      const oracle::EigenSystem es1 =
          oracle::eigensystem(oracle::full_fock_hamiltonian(l1, L));
      for (double beta : betas) {
        for (double phi : phis) {
          for (InitialState st : {InitialState::Gibbs, InitialState::CoherentGibbs}) {
            QuenchSpec spec;
            spec.L = L;
            spec.beta = beta;
            spec.lambda0 = l0;
            spec.lambda_tau = l1;
            spec.phases = PhaseProfile::constant(phi);
            spec.initial_state = st;
            GlobalQuenchSystem fast(spec);
            std::unique_ptr<oracle::OracleX> ox;
            if (st == InitialState::Gibbs) {
              ox = std::make_unique<oracle::OracleX>(beta, es0, es1);
            } else {
              const Eigen::VectorXcd psi =
                  oracle::coherent_gibbs_fock(l0, L, beta, spec.phases);
              ox = std::make_unique<oracle::OracleX>(psi, es0, es1);
            }
            for (double q : qs) {
              for (int iu = 0; iu < n_u; ++iu) {
                const double u = -5.0 + 10.0 * iu / (n_u - 1);
                const double err = std::abs(fast.X(u, q) - ox->X(u, q));
                QuenchSpec worst_spec = spec;
                worst_spec.q = q;
                worst.update(err, describe(worst_spec) + " u=" + std::to_string(u));
              }
            }
          }
        }
      }
    }
  }
  CheckResult c;
  c.name = "oracle_equivalence_global";
  c.bound = 1e-9;
  c.max_err = worst.err;
  c.pass = worst.err <= c.bound;
  c.detail = worst.detail;
  return c;
}

CheckResult normalization_check(const std::vector<int>& sizes) {
  Worst worst;
  for (int L : sizes) {
    for (double l0 : {0.4, 0.9, 1.3}) {
      for (double l1 : {0.7, 1.6}) {
        for (double beta : {0.3, 2.0}) {
          QuenchSpec spec;
          spec.L = L;
          spec.beta = beta;
          spec.lambda0 = l0;
          spec.lambda_tau = l1;
          spec.q = 0.25;
          spec.phases = PhaseProfile::constant(0.6);
          GlobalQuenchSystem sys(spec);
          worst.update(std::abs(sys.X(0.0) - 1.0), describe(spec));
          QuenchSpec ident = spec;
          ident.lambda_tau = l0;
          GlobalQuenchSystem sys2(ident);
          worst.update(std::abs(sys2.X(1.7) - 1.0), describe(ident) + " identity-quench");
        }
      }
    }
  }
  CheckResult c;
  c.name = "finite_size_normalization";
  c.bound = 1e-12;
  c.max_err = worst.err;
  c.pass = worst.err <= c.bound;
  c.detail = worst.detail;
  return c;
}

CheckResult gibbs_q_independence() {
  Worst worst;
  for (int L : {4, 8, 32}) {
    QuenchSpec spec;
    spec.L = L;
    spec.beta = 1.1;
    spec.lambda0 = 0.7;
    spec.lambda_tau = 1.4;
    spec.initial_state = InitialState::Gibbs;
    GlobalQuenchSystem sys(spec);
    for (double u : {0.4, 2.2}) {
      const cplx a = sys.X(u, 0.0);
      const cplx b = sys.X(u, 0.5);
      worst.update(std::abs(a - b), describe(spec) + " u=" + std::to_string(u));
    }
  }
  CheckResult c;
  c.name = "gibbs_chi_q_independent";
  c.bound = 1e-12;
  c.max_err = worst.err;
  c.pass = worst.err <= c.bound;
  c.detail = worst.detail;
  return c;
}

CheckResult jarzynski_and_masses(int n_random, unsigned seed) {
  Worst worst;
  std::mt19937 rng(seed);
  // Exponential averages amplify atom-mass roundoff by e^{beta (E_max - E'_min)};
  // the draw domain keeps that factor below ~1e5 so the 1e-10 bound is meaningful.
  std::uniform_real_distribution<double> ul(0.3, 1.4);
  std::uniform_real_distribution<double> ub(0.3, 0.9);
  std::uniform_real_distribution<double> uq(0.0, 1.0);
  std::uniform_real_distribution<double> uphi(0.0, PI);
  const int L = 4;
  for (int it = 0; it < n_random; ++it) {
    QuenchSpec spec;
    spec.L = L;
    spec.lambda0 = ul(rng);
    spec.lambda_tau = ul(rng);
    spec.beta = ub(rng);
    spec.q = uq(rng);
    spec.phases = PhaseProfile::constant(uphi(rng));
    if (std::abs(std::abs(spec.lambda0) - 1.0) < 0.02) spec.lambda0 += 0.05;
    const oracle::EigenSystem es0 =
        oracle::eigensystem(oracle::full_fock_hamiltonian(spec.lambda0, L));
    const oracle::EigenSystem es1 =
        oracle::eigensystem(oracle::full_fock_hamiltonian(spec.lambda_tau, L));
    const Eigen::MatrixXcd rho_g = oracle::gibbs_density_fock(spec.lambda0, L, spec.beta);
    const auto atoms = oracle::quasiprobability_direct(rho_g, es0, es1, spec.q);
    const double dF = free_energy_change(L, spec.beta, spec.lambda0, spec.lambda_tau);
    const double jarz = oracle::atoms_exp_mean(atoms, -spec.beta);
    worst.update(std::abs(jarz - std::exp(-spec.beta * dF)), describe(spec) + " jarzynski");
    worst.update(std::abs(oracle::atoms_mass(atoms) - 1.0), describe(spec) + " mass");
    worst.update(std::max(0.0, -(oracle::atoms_min_mass(atoms) + 1e-12)),
                 describe(spec) + " tpm-positivity");

    // Coherence statistics need phi_j attached to the same eigenbasis that
    // defines C, and a full-rank state with thermal incoherent part.
    std::vector<double> phases(static_cast<size_t>(es0.evals.size()));
    for (auto& p : phases) p = uphi(rng);
    const Eigen::VectorXcd psi = oracle::coherent_gibbs_state(es0, spec.beta, phases);
    const double eta = 0.1 + 0.8 * uq(rng);
    Eigen::VectorXd gw = (-spec.beta * (es0.evals.array() - es0.evals.minCoeff())).exp();
    gw /= gw.sum();
    const Eigen::MatrixXcd rho_c =
        eta * psi * psi.adjoint() +
        (1.0 - eta) * (es0.evecs * gw.asDiagonal() * es0.evecs.adjoint());
    const auto joint = oracle::joint_atoms(rho_c, es0, es1);
    double fluct = 0.0;
    for (const auto& a : joint) fluct += a.mass * std::exp(-spec.beta * a.w - a.C);
    worst.update(std::abs(fluct - std::exp(-spec.beta * dF)),
                 describe(spec) + " fluctuation-relation");
  }
  CheckResult c;
  c.name = "oracle_atom_identities";
  c.bound = 1e-10;
  c.max_err = worst.err;
  c.pass = worst.err <= c.bound;
  c.detail = worst.detail;
  return c;
}

CheckResult partition_checks() {
  Worst worst;
  for (int L : {2, 6, 12, 60}) {
    const double z = partition_function(L, 0.0, 0.8);
    worst.update(std::abs(z / std::pow(2.0, L) - 1.0),
                 "beta=0 L=" + std::to_string(L));
  }
  for (int L : {2, 4}) {
    for (double beta : {1.0, 2.0}) {
      for (double l0 : {0.7, 1.5}) {
        const oracle::EigenSystem es =
            oracle::eigensystem(oracle::full_fock_hamiltonian(l0, L));
        double z_dense = 0.0;
        for (Eigen::Index i = 0; i < es.evals.size(); ++i)
          z_dense += std::exp(-beta * es.evals(i));
        const double z = partition_function(L, beta, l0);
        worst.update(std::abs(z / z_dense - 1.0),
                     "L=" + std::to_string(L) + " beta=" + std::to_string(beta));
      }
    }
  }
  CheckResult c;
  c.name = "partition_function";
  c.bound = 1e-10;
  c.max_err = worst.err;
  c.pass = worst.err <= c.bound;
  c.detail = worst.detail;
  return c;
}

CheckResult spectra_match(const std::vector<int>& sizes) {
  Worst worst;
  for (int L : sizes) {
    for (double lambda : {0.5, 0.9, 1.5}) {
      const Eigen::MatrixXd hs = oracle::spin_hamiltonian(lambda, L);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> sol(hs);
      const auto ff = oracle::free_fermion_spectrum(lambda, L);
      double err = 0.0;
      for (size_t i = 0; i < ff.size(); ++i)
        err = std::max(err, std::abs(sol.eigenvalues()(static_cast<Eigen::Index>(i)) -
                                     ff[i]));
      worst.update(err, "L=" + std::to_string(L) + " lambda=" + std::to_string(lambda));
    }
  }
  CheckResult c;
  c.name = "spin_vs_free_fermion_spectra";
  c.bound = 1e-10;
  c.max_err = worst.err;
  c.pass = worst.err <= c.bound;
  c.detail = worst.detail;
  return c;
}

CheckResult pfaffian_identities(unsigned seed) {
  Worst worst;
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int n : {2, 4}) {
    for (int rep = 0; rep < 20; ++rep) {
      Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          const cplx v(gauss(rng), gauss(rng));
          g(i, j) = v;
          g(j, i) = -v;
        }
      const cplx pf = pfaffian(g);
      const cplx pf_ref = pfaffian_reference(g);
      worst.update(std::abs(pf - pf_ref), "pf-vs-reference n=" + std::to_string(n));
      worst.update(std::abs(pf * pf - g.determinant()),
                   "pf^2-vs-det n=" + std::to_string(n));
      worst.update(two_point_identity_residual(g), "two-point n=" + std::to_string(n));
      if (n >= 4)
        worst.update(four_point_identity_residual(g),
                     "four-point n=" + std::to_string(n));
    }
  }
  CheckResult c;
  c.name = "pfaffian_grassmann_identities";
  c.bound = 1e-11;
  c.max_err = worst.err;
  c.pass = worst.err <= c.bound;
  c.detail = worst.detail;
  return c;
}

CheckResult moment_contracts(const std::vector<int>& sizes) {
  Worst worst;
  for (int L : sizes) {
    QuenchSpec spec;
    spec.L = L;
    spec.beta = 1.0;
    spec.lambda0 = 0.5;
    spec.lambda_tau = 1.5;
    spec.phases = PhaseProfile::constant(PI / 4.0);
    for (int n : {1, 2}) {
      const double a = moments_fd(spec.with_q(0.0), n);
      const double b = moments_fd(spec.with_q(0.5), n);
      worst.update(std::abs(a - b) / std::max(1e-30, std::abs(b)),
                   describe(spec) + " n=" + std::to_string(n));
    }
  }
  CheckResult c;
  c.name = "first_two_moments_q_independent";
  c.bound = 1e-8;
  c.max_err = worst.err;
  c.pass = worst.err <= c.bound;
  c.detail = worst.detail;
  return c;
}

CheckResult local_quench_oracle(const std::vector<int>& sizes) {
  Worst worst;
  for (int L : sizes) {
    const double lambda0 = 0.8;
    const double field = 0.8;
    const int site = 1;
    const PhaseProfile phases = PhaseProfile::alternating(PI, 0.0);
    const LocalQuenchSystem sys = make_local_quench(lambda0, L, field, site, phases);

    auto [h0f, h1f] = build_chain_form(lambda0, L, field, site);
    const oracle::EigenSystem es0 = oracle::eigensystem(oracle::fock_hamiltonian(h0f));
    const oracle::EigenSystem es1 = oracle::eigensystem(oracle::fock_hamiltonian(h1f));
    const ModeDecomposition modes = sys.modes();

    // Dense alpha_k^dag from the same rows.
    std::vector<Eigen::MatrixXcd> adag;
    for (int m = 0; m < L; ++m) {
      Eigen::MatrixXcd op =
          Eigen::MatrixXcd::Zero(es0.evals.size(), es0.evals.size());
      for (int j = 1; j <= L; ++j) {
        const Eigen::MatrixXcd aj = oracle::fock_annihilation(L, j);
        op += modes.g(m, j - 1) * aj + modes.h(m, j - 1) * aj.adjoint();
      }
      adag.push_back(op.adjoint());
    }
    const Eigen::VectorXcd vac = es0.evecs.col(0);
    for (double beta : {0.4, 1.0}) {
      Eigen::VectorXcd psi1 = vac;
      Eigen::VectorXcd psi2 = vac;
      for (int m = 0; m < L; ++m) {
        const double phi_m = [&] {
          const auto ks = momenta(L, Sector::Even);
          const int n_idx = static_cast<int>(
              std::lround(std::abs(ks[static_cast<size_t>(m)]) * L / (2.0 * PI) + 0.5));
          return phases.value(n_idx);
        }();
        const cplx b = std::exp(cplx(-beta * modes.eps(m) / 2.0, phi_m));
        psi1 += b * (adag[static_cast<size_t>(m)] * vac).eval();
      }
      // Psi2 = vacuum + one-particle + antisymmetrized two-particle piece.
      psi2 = psi1;
      const auto ks = momenta(L, Sector::Even);
      auto phi_of = [&](int m) {
        const int n_idx = static_cast<int>(
            std::lround(std::abs(ks[static_cast<size_t>(m)]) * L / (2.0 * PI) + 0.5));
        return phases.value(n_idx);
      };
      for (int m = 0; m < L; ++m)
        for (int mm = 0; mm < m; ++mm) {
          const cplx b = std::exp(cplx(-beta * (modes.eps(m) + modes.eps(mm)) / 2.0,
                                       phi_of(m) + phi_of(mm)));
          psi2 += b * (adag[static_cast<size_t>(m)] *
                       (adag[static_cast<size_t>(mm)] * vac).eval())
                          .eval();
        }
      psi1.normalize();
      psi2.normalize();
      for (double q : {0.0, 0.5}) {
        for (double u : {0.3, 1.1}) {
          const oracle::OracleX ox1(psi1, es0, es1);
          const oracle::OracleX ox2(psi2, es0, es1);
          worst.update(std::abs(sys.X(LocalState::Psi1, u, q, beta) - ox1.X(u, q)),
                       "psi1 L=" + std::to_string(L) + " beta=" + std::to_string(beta) +
                           " q=" + std::to_string(q) + " u=" + std::to_string(u));
          worst.update(std::abs(sys.X(LocalState::Psi2, u, q, beta) - ox2.X(u, q)),
                       "psi2 L=" + std::to_string(L) + " beta=" + std::to_string(beta) +
                           " q=" + std::to_string(q) + " u=" + std::to_string(u));
        }
      }
    }
  }
  CheckResult c;
  c.name = "oracle_equivalence_local";
  c.bound = 1e-9;
  c.max_err = worst.err;
  c.pass = worst.err <= c.bound;
  c.detail = worst.detail;
  return c;
}

}  // namespace

std::string VerifyReport::to_json() const {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(16);
  os << "{\"level\":\"" << (level == VerifyLevel::Quick ? "quick" : "full")
     << "\",\"passed\":" << (passed ? "true" : "false") << ",\"seconds\":" << seconds
     << ",\"checks\":[";
  for (size_t i = 0; i < checks.size(); ++i) {
    const CheckResult& c = checks[i];
    os << "{\"name\":\"" << c.name << "\",\"pass\":" << (c.pass ? "true" : "false")
       << ",\"max_err\":" << c.max_err << ",\"bound\":" << c.bound << ",\"detail\":\""
       << c.detail << "\"}" << (i + 1 < checks.size() ? "," : "");
  }
  os << "]}";
  return os.str();
}

VerifyReport run_verification(VerifyLevel level) {
  const auto t0 = std::chrono::steady_clock::now();
  VerifyReport rep;
  rep.level = level;
  const bool full = level == VerifyLevel::Full;

  const std::vector<int> sizes = full ? std::vector<int>{2, 4, 6} : std::vector<int>{2, 4};
  const std::vector<std::pair<double, double>> lpairs =
      full ? std::vector<std::pair<double, double>>{{0.5, 1.5}, {1.5, 0.5}, {0.3, 0.6},
                                                    {1.2, 1.8}, {0.9, 1.1}, {0.6, 0.6}}
           : std::vector<std::pair<double, double>>{{0.5, 1.5}, {1.5, 0.5}, {1.2, 1.8}};
  const std::vector<double> betas = full ? std::vector<double>{0.2, 1.0, 5.0}
                                         : std::vector<double>{0.2, 1.0};
  const std::vector<double> qs = full ? std::vector<double>{0.0, 0.25, 0.5}
                                      : std::vector<double>{0.0, 0.5};
  const std::vector<double> phis = {0.0, PI / 4.0};
  const int n_u = full ? 21 : 11;

  rep.checks.push_back(oracle_equivalence(sizes, lpairs, betas, qs, phis, n_u));
  rep.checks.push_back(normalization_check(sizes));
  rep.checks.push_back(gibbs_q_independence());
  rep.checks.push_back(jarzynski_and_masses(full ? 20 : 8, 20240517u));
  rep.checks.push_back(partition_checks());
  rep.checks.push_back(spectra_match(full ? std::vector<int>{2, 4, 6}
                                          : std::vector<int>{2, 4}));
  if (full) {
    rep.checks.push_back(pfaffian_identities(887231u));
    rep.checks.push_back(moment_contracts({4, 8}));
    rep.checks.push_back(local_quench_oracle({4, 6}));
  }

  rep.passed = true;
  for (const auto& c : rep.checks) rep.passed = rep.passed && c.pass;
  rep.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace quasiwork
