#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "mixrabi/fock.hpp"

using namespace mixrabi;
using doctest::Approx;

namespace {

double fact_sqrt(int n) { return std::sqrt(std::tgamma(n + 1.0)); }

}  // namespace

TEST_CASE("ladder matrices") {
  auto [a2, ad2] = ladder_matrices(2);
  CHECK(a2.entries(0, 1) == 1.0);
  CHECK(a2.entries.cwiseAbs().sum() == 1.0);
  auto [a, ad] = ladder_matrices(4);
  CHECK(a.entries(2, 3) == Approx(std::sqrt(3.0)));
  CHECK(ad.entries(3, 2) == Approx(std::sqrt(3.0)));
  auto [b, bd] = ladder_matrices(30);
  const Eigen::MatrixXd comm = b.entries * bd.entries - bd.entries * b.entries;
  CHECK((comm.topLeftCorner(29, 29) - Eigen::MatrixXd::Identity(29, 29)).norm() < 1e-12);
}

TEST_CASE("squeeze matrix") {
  const double r = 0.4;
  const auto S = squeeze_matrix(r, 120).entries;
  CHECK(S(0, 0) == Approx(1.0 / std::sqrt(std::cosh(r))).epsilon(1e-12));
  CHECK(S(2, 0) == Approx(-std::tanh(r) * std::sqrt(2.0) / (2 * std::sqrt(std::cosh(r)))).epsilon(1e-12));
  CHECK((squeeze_matrix(0.0, 10).entries - Eigen::MatrixXd::Identity(10, 10)).norm() == 0.0);
  // orthogonal on the well-resolved corner
  const Eigen::MatrixXd StS = S.transpose() * S;
  CHECK((StS.topLeftCorner(40, 40) - Eigen::MatrixXd::Identity(40, 40)).norm() < 1e-10);
}

TEST_CASE("displacement matrix") {
  const double w = 0.7;
  const auto D = displacement_matrix(w, 100).entries;
  CHECK(D(0, 0) == Approx(std::exp(-w * w / 2)).epsilon(1e-13));
  for (int n = 0; n < 12; ++n) {
    // <n|D^dag(w)|0> = D(0, n)
    CHECK(D(0, n) == Approx(std::exp(-w * w / 2) * std::pow(-w, n) / fact_sqrt(n)).epsilon(1e-12));
  }
  CHECK((displacement_matrix(0.0, 8).entries - Eigen::MatrixXd::Identity(8, 8)).norm() == 0.0);
  const auto Dc = displacement_matrix(std::complex<double>(w, 0.0), 100);
  CHECK((Dc.real() - D).norm() < 1e-12);
  CHECK(Dc.imag().norm() < 1e-12);
}

TEST_CASE("overlap table at g2 = 0 is a pure displacement") {
  const double g1 = 0.3;
  const auto fr = build_frame({0.5, g1, 0.0, 0.0});
  const auto t = overlap_table(fr, Family::A, 15);
  for (int n = 0; n <= 15; ++n) {
    CHECK(t.row0[n] == Approx(std::exp(-g1 * g1 / 2) * std::pow(g1, n) / fact_sqrt(n)).epsilon(1e-12));
  }
}

TEST_CASE("overlap table parity at g1 = 0") {
  const auto fr = build_frame({0.5, 0.0, 0.3, 0.0});
  const auto t = overlap_table(fr, Family::A, 20);
  for (int n = 1; n <= 20; n += 2) CHECK(std::abs(t.row0[n]) < 1e-14);
  for (int n = 0; n <= 20; n += 2) CHECK(std::abs(t.row1[n]) < 1e-14);
}

TEST_CASE("overlap table near the naive product estimate") {
  const auto fr = build_frame({0.5, 0.1, 0.2, 0.0});
  const auto t = overlap_table(fr, Family::A, 10);
  const double naive = std::exp(-fr.w * fr.w / 2) / std::sqrt(std::cosh(fr.r));
  CHECK(std::abs(t.row0[0] / naive - 1) < 0.05);
  const auto t2 = overlap_table(fr, Family::A, 10, 2 * t.dim);
  for (int n = 0; n <= 10; ++n) CHECK(std::abs(t.row0[n] - t2.row0[n]) < 1e-10);
}

TEST_CASE("closed-form overlaps agree with the matrix route") {
  for (double g2 : {0.0, 0.1, 0.3, 0.45}) {
    for (double g1 : {0.0, 0.4, 1.0}) {
      const ModelParams p{1.0, g1, g2, 0.0};
      const auto fr = build_frame(p);
      for (Family fam : {Family::A, Family::B}) {
        const int n_max = 20;
        const auto t = overlap_table(fr, fam, n_max);
        const auto c = projection_overlaps<double>(fr, fam, n_max);
        for (int n = 0; n <= n_max; ++n) {
          CHECK(std::abs(t.row0[n] - c.row0[n]) < 1e-11);
          CHECK(std::abs(t.row1[n] - c.row1[n]) < 1e-11);
        }
      }
    }
  }
}

TEST_CASE("overlap table rejects thin truncation") {
  const auto fr = build_frame({0.5, 0.1, 0.2, 0.0});
  CHECK_THROWS_AS(overlap_table(fr, Family::A, 30, 100), InvalidParameter);
}

TEST_CASE("overlap cache round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "mixrabi_test_cache";
  std::filesystem::remove_all(dir);
  OverlapCache cache(dir);
  const ModelParams p{0.5, 0.2, 0.25, 0.0};
  const auto built = cache.get(p, Family::B, 12);
  const auto loaded = cache.load(p.g1, p.g2, Family::B, 12, built.dim);
  REQUIRE(loaded.has_value());
  CHECK(loaded->family == Family::B);
  CHECK(loaded->dim == built.dim);
  for (int n = 0; n <= 12; ++n) {
    CHECK(loaded->row0[n] == built.row0[n]);
    CHECK(loaded->row1[n] == built.row1[n]);
  }
  CHECK_FALSE(cache.load(p.g1, 0.26, Family::B, 12, built.dim).has_value());
  CHECK(OverlapCache::key_hash(0.2, 0.25, Family::A, 12, 200) != OverlapCache::key_hash(0.2, 0.25, Family::B, 12, 200));
  std::filesystem::remove_all(dir);
}
