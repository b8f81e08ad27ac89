// effective.hpp: effective biased one-photon model of the mixed coupling
//
//   H_eff = (eps + eps_eff)/2 sigma_z - Delta/2 sigma_x - (1 - beta)/2
//           + beta a^dag a + g1/sqrt(beta) sigma_z (a^dag + a)

#pragma once

#include <string>
#include <vector>

#include "mixrabi/model.hpp"
#include "mixrabi/reference_diag.hpp"

namespace mixrabi {

struct EffectiveParams {
  double epsilon_eff{0.0};  // 4 g2 g1^2 / (1 - 4 g2^2)
  double omega_eff{1.0};    // beta
  double g1_eff{0.0};       // g1 / sqrt(beta)
  double shift{0.0};        // -(1 - beta)/2
  double g1c_eff{0.0};      // sqrt(Delta omega_eff)/2
};

EffectiveParams effective_params(const ModelParams& p);

DenseHamiltonian build_effective_hamiltonian(const ModelParams& p, int M);

/// Unbiased one-photon model with the bare frequency and coupling (g2 and
/// epsilon ignored).
DenseHamiltonian build_one_photon_hamiltonian(const ModelParams& p, int M);

struct SpectrumComparisonRow {
  double epsilon{0.0};
  std::string model;  // "full" or "eff"
  int n{0};
  double dE{0.0};  // E_n - E_0
};

struct SpectrumComparison {
  std::vector<SpectrumComparisonRow> rows;
  double symmetry_point{0.0};  // epsilon = -eps_eff
};

/// delta E_n(eps) = E_n - E_0 for n = 1..k, full and effective models.
SpectrumComparison compare_spectra(const ModelParams& p, const std::vector<double>& eps_grid, int k,
                                   OracleOptions opt = {});

}  // namespace mixrabi
