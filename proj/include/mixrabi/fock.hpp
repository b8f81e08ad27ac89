// fock.hpp: truncated Fock-space operators and Bogoliubov-state overlaps

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mixrabi/common.hpp"
#include "mixrabi/model.hpp"

namespace mixrabi {

struct TruncatedOperator {
  Eigen::MatrixXd entries;
  int dim() const { return static_cast<int>(entries.rows()); }
};

/// Annihilation and creation matrices on span{|0>, ..., |M-1>}.
std::pair<TruncatedOperator, TruncatedOperator> ladder_matrices(int M);

/// S(r) = exp((r/2)(a^2 - a^dag^2)) by scaling and squaring.
TruncatedOperator squeeze_matrix(double r, int M);

/// D(w) = exp(w (a^dag - a)) for real w.
TruncatedOperator displacement_matrix(double w, int M);

/// D(alpha) = exp(alpha a^dag - conj(alpha) a).
Eigen::MatrixXcd displacement_matrix(std::complex<double> alpha, int M);

/// <0|n>_X and <1|n>_X for n = 0..n_max, where |n>_A = S(r) D^dag(w)|n> and
/// |n>_B = S^dag(r) D^dag(w')|n>.
struct OverlapTable {
  Family family{Family::A};
  int n_max{0};
  int dim{0};  // truncation used to build the table
  std::vector<double> row0;
  std::vector<double> row1;
};

int default_overlap_dim(const BogoliubovFrame& frame, int n_max);

/// Builds the table from explicit truncated matrices. M = 0 picks
/// default_overlap_dim. Throws ConvergenceFailure when the table moves by more
/// than 1e-10 between M and M + 50.
OverlapTable overlap_table(const BogoliubovFrame& frame, Family family, int n_max, int M = 0);

/// Unweighted overlaps <0|n>_X, <1|n>_X from the Bargmann-space generating
/// function of the squeezed-displaced vacuum:
///   sum_n t^n/n! sqrt(n!) <0|n>_X = psi0 exp(p t + q t^2 / 2),
/// with p = w(u - s)/u, q = s/u, s = +v (A) or -v (B), and
///   sqrt(n!) <1|n>_X = (n sqrt((n-1)!) <0|n-1>_X - w sqrt(n!) <0|n>_X) / u.
/// Stays accurate in relative terms for every n, unlike the matrix route.
template <class Real>
struct ProjectionOverlaps {
  std::vector<Real> row0;
  std::vector<Real> row1;
};

template <class Real>
ProjectionOverlaps<Real> projection_overlaps(const FrameT<Real>& fr, Family family, int n_max) {
  using std::exp;
  using std::sqrt;
  const Real s = family == Family::A ? fr.v : Real(-fr.v);
  const Real w = family == Family::A ? fr.w : fr.w_prime;
  const Real p = w * (fr.u - s) / fr.u;
  const Real q = s / fr.u;
  const Real psi0 = exp(-(w * w) / (2 * fr.u * (fr.u + s))) / sqrt(fr.u);

  ProjectionOverlaps<Real> out;
  out.row0.assign(n_max + 1, Real(0));
  out.row1.assign(n_max + 1, Real(0));
  auto& o = out.row0;
  o[0] = psi0;
  if (n_max >= 1) o[1] = p * psi0;
  for (int n = 1; n < n_max; ++n) {
    o[n + 1] = (p * o[n] + q * sqrt(Real(n)) * o[n - 1]) / sqrt(Real(n + 1));
  }
  out.row1[0] = -w * o[0] / fr.u;
  for (int n = 1; n <= n_max; ++n) {
    out.row1[n] = (sqrt(Real(n)) * o[n - 1] - w * o[n]) / fr.u;
  }
  return out;
}

// On-disk cache of matrix-route overlap tables.
//
// Layout (little endian): 8-byte magic "MRBOVL\0\0", u32 version, u8 family,
// 3 bytes padding, f64 g1, f64 g2, u32 n_max, u32 dim, u64 key hash, then
// 2*(n_max+1) f64 values row-major (row0 then row1).
class OverlapCache {
 public:
  static constexpr std::uint32_t kVersion = 1;

  explicit OverlapCache(std::filesystem::path dir);

  static std::uint64_t key_hash(double g1, double g2, Family family, int n_max, int dim);

  std::filesystem::path path_for(double g1, double g2, Family family, int n_max, int dim) const;
  std::optional<OverlapTable> load(double g1, double g2, Family family, int n_max, int dim) const;
  void store(double g1, double g2, const OverlapTable& table) const;

  /// Cached overlap_table; builds and stores on a miss.
  OverlapTable get(const ModelParams& p, Family family, int n_max, int dim = 0) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace mixrabi
