#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "quasiwork/dense_oracle.hpp"
#include "quasiwork/model.hpp"

using namespace quasiwork;

TEST_CASE("momenta grids") {
  CHECK(momenta(4, Sector::Even) ==
        std::vector<double>{-3 * PI / 4, -PI / 4, PI / 4, 3 * PI / 4});
  CHECK(momenta(4, Sector::Odd) == std::vector<double>{-PI / 2, 0.0, PI / 2, PI});
  CHECK(momenta(2, Sector::Even) == std::vector<double>{-PI / 2, PI / 2});
  CHECK_THROWS_AS(momenta(3, Sector::Even), ContractError);
  CHECK_THROWS_AS(momenta(0, Sector::Odd), ContractError);
  CHECK_THROWS_AS(momenta(-4, Sector::Odd), ContractError);
}

TEST_CASE("dispersion") {
  CHECK(dispersion(1.0, PI) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(dispersion(0.0, PI / 2) == doctest::Approx(2.0));
  CHECK(dispersion(2.0, 0.0) == doctest::Approx(6.0));
  // norm dominates both components
  for (double lambda : {-1.7, 0.2, 1.0, 2.5}) {
    for (int i = 0; i <= 40; ++i) {
      const double k = -PI + 2 * PI * i / 40.0;
      const double e = dispersion(lambda, k);
      CHECK(e >= std::abs(2 * (lambda + std::cos(k))) - 1e-14);
      CHECK(e >= 2 * std::abs(std::sin(k)) - 1e-14);
      CHECK(dispersion(lambda, -k) == doctest::Approx(e).epsilon(1e-14));
    }
  }
}

TEST_CASE("dvector") {
  auto d1 = dvector(0.0, PI / 2);
  CHECK(d1.dhat.isApprox(Eigen::Vector3d(0, 1, 0), 1e-14));
  auto d2 = dvector(2.0, 0.0);
  CHECK(d2.dhat.isApprox(Eigen::Vector3d(0, 0, -1), 1e-14));
  CHECK(d2.eps == doctest::Approx(6.0));
  // gap closure refused
  CHECK_THROWS_AS(dvector(1.0, PI), ContractError);

  // cross product against its symbolic evaluation
  const double l0 = 0.9, l1 = 1.1, k = PI / 2;
  const auto da = dvector(l0, k), db = dvector(l1, k);
  const double got = cross_x(da.dhat, db.dhat);
  const double expected = 4.0 * std::sin(k) * (l0 - l1) / (da.eps * db.eps);
  CHECK(got == doctest::Approx(expected).epsilon(1e-14));
  // for a field quench both vectors live in the y-z plane
  const Eigen::Vector3d full = da.dhat.cross(db.dhat);
  CHECK(std::abs(full.y()) <= 1e-14);
  CHECK(std::abs(full.z()) <= 1e-14);
  CHECK(full.x() == doctest::Approx(got).epsilon(1e-14));
}

TEST_CASE("parity signs") {
  auto s1 = parity_signs(0.5, 1.5);
  CHECK(s1.eta_minus == 1);
  CHECK(s1.s_pi == -1);
  CHECK(s1.s0 == 1);
  auto s2 = parity_signs(1.5, 0.5);
  CHECK(s2.eta_minus == -1);
  CHECK(s2.s_pi == -1);
  CHECK(s2.s0 == 1);
  auto s3 = parity_signs(0.5, 0.6);
  CHECK(s3.eta_minus == 1);
  CHECK(s3.s_pi == 1);
  CHECK(s3.s0 == 1);
  auto s4 = parity_signs(0.5, -1.5);
  CHECK(s4.s0 == -1);
  CHECK_THROWS_AS(parity_signs(1.0, 0.5), ContractError);
}

TEST_CASE("partition function") {
  for (int L : {2, 6, 14, 80}) {
    CHECK(partition_function(L, 0.0, 0.33) ==
          doctest::Approx(std::pow(2.0, L)).epsilon(1e-12));
  }
  // dense oracle cross-checks
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(oracle::spin_hamiltonian(0.7, 2));
    double z = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      z += std::exp(-1.0 * es.eigenvalues()(i));
    CHECK(partition_function(2, 1.0, 0.7) == doctest::Approx(z).epsilon(1e-10));
  }
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(oracle::spin_hamiltonian(1.5, 4));
    double z = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
      z += std::exp(-2.0 * es.eigenvalues()(i));
    CHECK(partition_function(4, 2.0, 1.5) == doctest::Approx(z).epsilon(1e-10));
  }
  // log-domain path survives sizes where the plain product overflows
  CHECK(std::isfinite(log_partition_function(400, 5.0, 1.2)));
}

TEST_CASE("mode table") {
  QuenchSpec spec;
  spec.L = 8;
  spec.beta = 1.0;
  spec.lambda0 = 0.6;
  spec.lambda_tau = 1.4;
  spec.phases = PhaseProfile::alternating(PI, 0.0);
  const ModeTable even = ModeTable::build(spec, Sector::Even);
  const ModeTable odd = ModeTable::build(spec, Sector::Odd);
  CHECK(even.entries.size() == 4);
  CHECK(odd.entries.size() == 5);
  CHECK(even.eta == 1);
  CHECK(odd.eta == 1);
  CHECK(odd.s_pi == -1);
  for (const auto& e : even.entries) {
    CHECK(e.paired);
    CHECK(std::abs(e.dhat.norm() - 1.0) <= 1e-12);
    CHECK(std::abs(e.dhat_prime.norm() - 1.0) <= 1e-12);
    CHECK(e.eps == doctest::Approx(dispersion(spec.lambda0, e.k)).epsilon(1e-14));
  }
  CHECK_FALSE(odd.entries.front().paired);  // k = 0
  CHECK_FALSE(odd.entries.back().paired);   // k = pi
  // alternating phases keyed on the grid index n
  CHECK(even.entries[0].phi == PI);   // n = 1
  CHECK(even.entries[1].phi == 0.0);  // n = 2
  CHECK(even.entries[2].phi == PI);
}

TEST_CASE("quench spec validation") {
  QuenchSpec s;
  s.L = 4;
  s.beta = 1.0;
  s.q = 0.5;
  CHECK_NOTHROW(s.validate());
  s.L = 5;
  CHECK_THROWS_AS(s.validate(), ContractError);
  s.L = 4;
  s.beta = -0.1;
  CHECK_THROWS_AS(s.validate(), ContractError);
  s.beta = 51.0;
  CHECK_THROWS_AS(s.validate(), ContractError);
  s.beta = 1.0;
  s.q = 1.2;
  CHECK_THROWS_AS(s.validate(), ContractError);
}

TEST_CASE("free energy change vs dense") {
  const int L = 4;
  const double beta = 1.3, l0 = 0.8, l1 = 1.7;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e0(oracle::spin_hamiltonian(l0, L));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e1(oracle::spin_hamiltonian(l1, L));
  double z0 = 0, z1 = 0;
  for (int i = 0; i < e0.eigenvalues().size(); ++i) {
    z0 += std::exp(-beta * e0.eigenvalues()(i));
    z1 += std::exp(-beta * e1.eigenvalues()(i));
  }
  CHECK(free_energy_change(L, beta, l0, l1) ==
        doctest::Approx(-std::log(z1 / z0) / beta).epsilon(1e-12));
}
