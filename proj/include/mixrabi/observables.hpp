// observables.hpp: expectation values, Wigner function and unitary dynamics

#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "mixrabi/effective.hpp"
#include "mixrabi/reference_diag.hpp"

namespace mixrabi {

/// |up>|n> or |down>|n> on a truncation M.
StateVector basis_state(int M, int spin, int n);

/// <sigma_z ⊗ I>
double magnetization(const StateVector& psi);

/// <I ⊗ a^dag a>; warns when the top Fock level holds more than 1e-8.
double photon_number(const StateVector& psi);

/// Partial trace over the spin, M x M.
Eigen::MatrixXcd reduced_field_density(const StateVector& psi);

struct WignerAxes {
  std::vector<double> re;
  std::vector<double> im;
};

/// [-5, 5] on both axes with 101 points each.
WignerAxes default_wigner_axes();
WignerAxes wigner_axes(double lo, double hi, int points);

struct WignerGrid {
  WignerAxes axes;
  Eigen::MatrixXd values;  // values(i, j) at alpha = re[i] + i im[j]
  int M{0};                // truncation used for the displacement operators

  /// Riemann sum of W over the grid.
  double integral() const;
};

/// W(alpha) = (2/pi) Tr[rho D(alpha) Pi D^dag(alpha)]. The density is padded
/// with empty Fock levels so the displaced parity is accurate on the grid.
WignerGrid wigner(const Eigen::MatrixXcd& rho, const WignerAxes& axes);

/// States |psi(t)> = sum_k exp(-i E_k t) <k|psi0> |k> from the full
/// eigendecomposition of h.
std::vector<StateVector> evolve(const DenseHamiltonian& h, const StateVector& psi0, const std::vector<double>& t_list);

std::vector<double> default_time_grid();  // 0..20, step 0.02

struct FidelitySeries {
  std::vector<double> t;
  std::vector<double> F_eff;
  std::vector<double> F_1P;
  int M{0};
};

/// |<psi_eff(t)|psi(t)>| and |<psi_1P(t)|psi(t)>| from |up>|0>.
FidelitySeries fidelity_series(const ModelParams& p, const std::vector<double>& t_list, int M = 0);

struct OrderParameterRow {
  double ratio{0.0};  // g1_eff / g1c_eff
  double g2{0.0};
  double g1{0.0};
  double M{0.0};
  double N_ph{0.0};
};

/// Ground-state M and N_ph over g1_eff/g1c_eff, with g1 = ratio g1c_eff sqrt(beta).
std::vector<OrderParameterRow> sweep_order_parameters(double delta, const std::vector<double>& g2_list,
                                                      const std::vector<double>& ratio_grid);

}  // namespace mixrabi
