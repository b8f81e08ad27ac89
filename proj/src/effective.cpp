#include "mixrabi/effective.hpp"

#include <cmath>

#include "mixrabi/gfunction.hpp"

namespace mixrabi {

EffectiveParams effective_params(const ModelParams& p) {
  validate(p, std::max(kDefaultG2Cap, p.g2));
  const double beta2 = 1.0 - 4.0 * p.g2 * p.g2;
  const double beta = std::sqrt(beta2);
  EffectiveParams e;
  e.epsilon_eff = 4.0 * p.g2 * p.g1 * p.g1 / beta2;
  e.omega_eff = beta;
  e.g1_eff = p.g1 / std::sqrt(beta);
  e.shift = -(1.0 - beta) / 2;
  e.g1c_eff = std::sqrt(p.delta * beta) / 2;
  return e;
}

namespace {

DenseHamiltonian one_photon(double delta, double omega, double g, double bias, double shift, int M) {
  if (M < 20) throw InvalidParameter("Hamiltonian truncation M must be >= 20");
  DenseHamiltonian h;
  h.M = M;
  h.entries = Eigen::MatrixXd::Zero(2 * M, 2 * M);
  auto& H = h.entries;
  for (int s = 0; s < 2; ++s) {
    const double sz = s == 0 ? 1.0 : -1.0;
    const int o = s * M;
    for (int n = 0; n < M; ++n) {
      H(o + n, o + n) = omega * n + sz * bias / 2 + shift;
      if (n + 1 < M) H(o + n, o + n + 1) = H(o + n + 1, o + n) = sz * g * std::sqrt(n + 1.0);
    }
  }
  for (int n = 0; n < M; ++n) H(n, M + n) = H(M + n, n) = -delta / 2;
  return h;
}

}  // namespace

DenseHamiltonian build_effective_hamiltonian(const ModelParams& p, int M) {
  const auto e = effective_params(p);
  auto h = one_photon(p.delta, e.omega_eff, e.g1_eff, p.epsilon + e.epsilon_eff, e.shift, M);
  h.rebuild = [p](int m) { return build_effective_hamiltonian(p, m); };
  return h;
}

DenseHamiltonian build_one_photon_hamiltonian(const ModelParams& p, int M) {
  validate(p, std::max(kDefaultG2Cap, p.g2));
  auto h = one_photon(p.delta, 1.0, p.g1, 0.0, 0.0, M);
  h.rebuild = [p](int m) { return build_one_photon_hamiltonian(p, m); };
  return h;
}

SpectrumComparison compare_spectra(const ModelParams& p, const std::vector<double>& eps_grid, int k,
                                   OracleOptions opt) {
  if (k < 1) throw InvalidParameter("compare_spectra: k must be >= 1");
  SpectrumComparison out;
  out.symmetry_point = -effective_params(p).epsilon_eff;
  std::vector<std::vector<SpectrumComparisonRow>> per(eps_grid.size());
  parallel_for(eps_grid.size(), [&](std::size_t i) {
    ModelParams q = p;
    q.epsilon = eps_grid[i];
    const int M0 = opt.M > 0 ? opt.M : default_truncation(q.g2);
    const auto full = converged_levels([q](int m) { return build_hamiltonian(q, m); }, k + 1, M0, opt);
    const auto eff = converged_levels([q](int m) { return build_effective_hamiltonian(q, m); }, k + 1, M0, opt);
    for (int n = 1; n <= k; ++n) per[i].push_back({q.epsilon, "full", n, full.energies(n) - full.energies(0)});
    for (int n = 1; n <= k; ++n) per[i].push_back({q.epsilon, "eff", n, eff.energies(n) - eff.energies(0)});
  });
  for (auto& v : per) out.rows.insert(out.rows.end(), v.begin(), v.end());
  return out;
}

}  // namespace mixrabi
