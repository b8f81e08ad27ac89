#include <cmath>

#include "doctest.h"
#include "mixrabi/reference_diag.hpp"

using namespace mixrabi;
using doctest::Approx;

TEST_CASE("hamiltonian structure") {
  const int M = 30;
  const ModelParams p{0.8, 0.3, 0.2, 0.1};
  const auto h = build_hamiltonian(p, M).entries;
  CHECK(h.rows() == 2 * M);
  CHECK((h - h.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  for (int n = 0; n < M; ++n) {
    CHECK(h(n, n) == Approx(n + 0.05));
    CHECK(h(M + n, M + n) == Approx(n - 0.05));
    CHECK(h(n, M + n) == Approx(-0.4));
  }
  CHECK(h(0, 1) == Approx(0.3));
  CHECK(h(M, M + 1) == Approx(-0.3));
  CHECK(h(0, 2) == Approx(0.2 * std::sqrt(2.0)));
  CHECK(h(M + 1, M + 3) == Approx(-0.2 * std::sqrt(6.0)));
  CHECK(h(0, M + 1) == 0.0);
  CHECK_THROWS_AS(build_hamiltonian(p, 10), InvalidParameter);
}

TEST_CASE("decoupled limits") {
  auto sys = eigen_solve(build_hamiltonian({0.0, 0.0, 0.0, 0.0}, 40), 10);
  for (int k = 0; k < 10; ++k) CHECK(sys.energies(k) == Approx(k / 2).epsilon(1e-12));

  const double g1 = 0.6;
  sys = eigen_solve(build_hamiltonian({0.0, g1, 0.0, 0.0}, 120), 8);
  for (int k = 0; k < 8; ++k) CHECK(sys.energies(k) == Approx(k / 2 - g1 * g1).epsilon(1e-10));

  const ModelParams p{0.0, 0.1, 0.2, 0.0};
  const auto lv = oracle_levels(p, 6);
  CHECK(lv.energies(0) == Approx(-0.0584091).epsilon(1e-6));
  std::vector<double> poles;
  for (Family f : {Family::A, Family::B})
    for (int n = 0; n < 6; ++n) poles.push_back(pole_energy(f, n, p));
  std::sort(poles.begin(), poles.end());
  for (int k = 0; k < 6; ++k) CHECK(std::abs(lv.energies(k) - poles[k]) < 1e-10);
}

TEST_CASE("eigen solve checks") {
  const ModelParams p{0.5, 0.1, 0.2, 0.0};
  const auto sys = eigen_solve(build_hamiltonian(p, 200), 12, 1e-8, true);
  CHECK(sys.max_residual <= 1e-10);
  CHECK(sys.max_drift <= 1e-8);
  for (int k = 1; k < 12; ++k) CHECK(sys.energies(k) >= sys.energies(k - 1));
  const Eigen::MatrixXd StS = sys.states.transpose() * sys.states;
  CHECK((StS - Eigen::MatrixXd::Identity(12, 12)).norm() < 1e-10);
  CHECK_THROWS_AS(eigen_solve(build_hamiltonian(p, 20), 30), InvalidParameter);
}

TEST_CASE("truncation grows until converged") {
  CHECK(default_truncation(0.1) == 200);
  CHECK(default_truncation(0.4) == 600);
  CHECK(default_truncation(0.47) == 1200);
  OracleOptions opt;
  opt.M = 40;
  const auto lv = oracle_levels({0.5, 1.0, 0.3, 0.0}, 6, opt);
  CHECK(lv.M > 40);
  CHECK(lv.max_drift <= 1e-8);
}

TEST_CASE("window and ground state") {
  const ModelParams p{0.5, 0.1, 0.2, 0.0};
  const auto w = oracle_window(p, -1.0, 4.0);
  const auto lv = oracle_levels(p, static_cast<int>(w.size()));
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(w[i] == Approx(lv.energies(i)).epsilon(1e-10));
  const auto gs = ground_state(p);
  CHECK(gs.energy == Approx(lv.energies(0)).epsilon(1e-10));
  CHECK(gs.state.amplitudes.norm() == Approx(1.0).epsilon(1e-12));
}
