// reference_diag.hpp: truncated Fock-space diagonalization (the oracle)
//
// Basis order is spin ⊗ Fock: index s*M + n with s = 0 for spin-up.

#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "mixrabi/common.hpp"
#include "mixrabi/model.hpp"

namespace mixrabi {

struct DenseHamiltonian {
  int M{0};
  Eigen::MatrixXd entries;  // 2M x 2M
  // Rebuilds the same operator at another truncation; used by the vary-M check.
  std::function<DenseHamiltonian(int)> rebuild;
};

struct EigenSystem {
  Eigen::VectorXd energies;  // ascending
  Eigen::MatrixXd states;    // columns, spin ⊗ Fock; empty when only energies were asked for
  int M{0};
  double max_residual{0.0};
  double max_drift{0.0};  // |E_k(M) - E_k(M + 50)| over retained levels
};

struct StateVector {
  int M{0};
  Eigen::VectorXcd amplitudes;  // length 2M
};

/// H = -Delta/2 sigma_x + a^dag a + sigma_z (g1 (a^dag + a) + g2 (a^dag^2 + a^2)) + epsilon/2 sigma_z.
DenseHamiltonian build_hamiltonian(const ModelParams& p, int M);

/// Lowest k eigenpairs with residual and vary-M checks. Throws
/// ConvergenceFailure when a level moves by more than conv_tol under M -> M + 50
/// or the residual exceeds 1e-10.
EigenSystem eigen_solve(const DenseHamiltonian& h, int k, double conv_tol = 1e-8, bool vectors = true);

/// Default truncation: 200 for g2 <= 0.3, 600 up to 0.45, 1200 above.
int default_truncation(double g2);

struct OracleOptions {
  int M{0};  // 0 = default_truncation, doubled until converged
  int max_M{9600};
  double conv_tol{1e-8};
};

/// Every eigenvalue in [lo, hi], converged in M (doubling as needed).
std::vector<double> oracle_window(const ModelParams& p, double lo, double hi, OracleOptions opt = {});

/// Lowest k eigenvalues, converged in M.
EigenSystem oracle_levels(const ModelParams& p, int k, OracleOptions opt = {}, bool vectors = false);

/// Same, for any operator family given by its builder.
EigenSystem converged_levels(const std::function<DenseHamiltonian(int)>& build, int k, int M0,
                             OracleOptions opt = {}, bool vectors = false);

struct GroundState {
  double energy{0.0};
  StateVector state;
};

/// Lowest eigenpair; M = 0 picks the truncation automatically.
GroundState ground_state(const ModelParams& p, int M = 0);
GroundState ground_state_of(const std::function<DenseHamiltonian(int)>& build, int M0);

}  // namespace mixrabi
