#include "mixrabi/observables.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "mixrabi/gfunction.hpp"

namespace mixrabi {

StateVector basis_state(int M, int spin, int n) {
  if (n < 0 || n >= M || (spin != 0 && spin != 1)) throw InvalidParameter("basis_state: index out of range");
  StateVector s;
  s.M = M;
  s.amplitudes = Eigen::VectorXcd::Zero(2 * M);
  s.amplitudes(spin * M + n) = 1.0;
  return s;
}

double magnetization(const StateVector& psi) {
  const int M = psi.M;
  return psi.amplitudes.head(M).squaredNorm() - psi.amplitudes.tail(M).squaredNorm();
}

double photon_number(const StateVector& psi) {
  const int M = psi.M;
  double n_ph = 0.0;
  for (int n = 0; n < M; ++n) n_ph += n * (std::norm(psi.amplitudes(n)) + std::norm(psi.amplitudes(M + n)));
  const double top = std::norm(psi.amplitudes(M - 1)) + std::norm(psi.amplitudes(2 * M - 1));
  if (top > 1e-8) {
    std::ostringstream os;
    os << "photon_number: top Fock level holds " << top << " (truncation M=" << M << " leaks)";
    Warnings::add(os.str());
  }
  return n_ph;
}

Eigen::MatrixXcd reduced_field_density(const StateVector& psi) {
  const int M = psi.M;
  const Eigen::VectorXcd up = psi.amplitudes.head(M);
  const Eigen::VectorXcd dn = psi.amplitudes.tail(M);
  return up * up.adjoint() + dn * dn.adjoint();
}

// ---------------------------------------------------------------------------

WignerAxes wigner_axes(double lo, double hi, int points) {
  if (points < 2 || !(lo < hi)) throw InvalidParameter("wigner axes need lo < hi and >= 2 points");
  WignerAxes ax;
  for (int i = 0; i < points; ++i) ax.re.push_back(lo + (hi - lo) * i / (points - 1));
  ax.im = ax.re;
  return ax;
}

WignerAxes default_wigner_axes() { return wigner_axes(-5.0, 5.0, 101); }

double WignerGrid::integral() const {
  auto step = [](const std::vector<double>& v) { return v.size() > 1 ? (v.back() - v.front()) / (v.size() - 1) : 0.0; };
  return values.sum() * step(axes.re) * step(axes.im);
}

namespace {

// exp(-i t X) restricted to a block of rows or columns, for a real symmetric
// generator X diagonalized once.
class HermitianExp {
 public:
  explicit HermitianExp(const Eigen::MatrixXd& X) : es_(X) {}
  // rows [0, k) of exp(-i t X)
  Eigen::MatrixXcd top_rows(double t, int k) const {
    const Eigen::MatrixXcd V = es_.eigenvectors().cast<std::complex<double>>();
    return V.topRows(k) * phases(t).asDiagonal() * V.adjoint();
  }
  // columns [0, k) of exp(-i t X)
  Eigen::MatrixXcd left_cols(double t, int k) const {
    const Eigen::MatrixXcd V = es_.eigenvectors().cast<std::complex<double>>();
    return V * phases(t).asDiagonal() * V.topRows(k).adjoint();
  }

 private:
  Eigen::VectorXcd phases(double t) const {
    return (std::complex<double>(0, -t) * es_.eigenvalues().cast<std::complex<double>>()).array().exp();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_;
};

// Smallest K with every diagonal entry of rho beyond K negligible.
int support_of(const Eigen::MatrixXcd& rho) {
  int K = 1;
  for (int n = 0; n < rho.rows(); ++n) {
    if (std::abs(rho(n, n)) > 1e-16) K = n + 1;
  }
  return K;
}

}  // namespace

// D(a) Pi D^dag(a) = D(2a) Pi, and D(2x + 2iy) = exp(4ixy) D(2x) D(2iy), so
//   W(x + iy) = (2/pi) Re[exp(4ixy) Tr(rho D(2x) D(2iy) Pi)].
// Only the K x M and M x K corners of the two real-axis displacements enter.
WignerGrid wigner(const Eigen::MatrixXcd& rho, const WignerAxes& axes) {
  const int M0 = static_cast<int>(rho.rows());
  const int K = support_of(rho);
  double amax = 0.0;
  for (double x : axes.re) amax = std::max(amax, std::abs(x));
  for (double y : axes.im) amax = std::max(amax, std::abs(y));
  const double r2 = 4 * 2 * amax * amax;  // |2 alpha|^2 at the grid corner
  const int M = static_cast<int>(std::ceil(K + r2 + 20 * std::sqrt(r2 + 1) + 60));
  if (K > M0 - 2) {
    std::ostringstream os;
    os << "wigner: density occupies the top of its truncation (M=" << M0 << ")";
    Warnings::add(os.str());
  }
  const Eigen::MatrixXcd rhoK = rho.topLeftCorner(K, K);

  // With U = diag(i^n): U (a^dag + a) U^dag = i (a^dag - a), hence
  // D(s) = exp(s (a^dag - a)) = U exp(-i s (a^dag + a)) U^dag and
  // D(is) = exp(is (a^dag + a)) = exp(-i s (-(a^dag + a))).
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(M, M);
  for (int n = 1; n < M; ++n) q(n - 1, n) = q(n, n - 1) = std::sqrt(static_cast<double>(n));
  Eigen::VectorXcd U(M);
  for (int n = 0; n < M; ++n) U(n) = std::pow(std::complex<double>(0, 1), n % 4);
  const HermitianExp ex(q);
  const HermitianExp ey(-q);
  Eigen::VectorXcd parity(K);
  for (int n = 0; n < K; ++n) parity(n) = n % 2 == 0 ? 1.0 : -1.0;

  const int nx = static_cast<int>(axes.re.size());
  const int ny = static_cast<int>(axes.im.size());
  std::vector<Eigen::MatrixXcd> A(nx), B(ny);
  parallel_for(static_cast<std::size_t>(nx), [&](std::size_t i) {
    const Eigen::MatrixXcd Dx = U.head(K).asDiagonal() * ex.top_rows(2 * axes.re[i], K) * U.conjugate().asDiagonal();
    A[i] = rhoK * Dx;  // K x M
  });
  parallel_for(static_cast<std::size_t>(ny), [&](std::size_t j) {
    B[j] = (ey.left_cols(2 * axes.im[j], K) * parity.asDiagonal()).transpose();  // K x M, transposed
  });
  WignerGrid out;
  out.axes = axes;
  out.M = M;
  out.values.resize(nx, ny);
  parallel_for(static_cast<std::size_t>(nx), [&](std::size_t i) {
    for (int j = 0; j < ny; ++j) {
      const std::complex<double> tr = (A[i].array() * B[j].array()).sum();
      const std::complex<double> ph = std::exp(std::complex<double>(0, 4 * axes.re[i] * axes.im[j]));
      out.values(static_cast<Eigen::Index>(i), j) = 2.0 / std::numbers::pi * (ph * tr).real();
    }
  });
  return out;
}

// ---------------------------------------------------------------------------

std::vector<StateVector> evolve(const DenseHamiltonian& h, const StateVector& psi0, const std::vector<double>& t_list) {
  if (psi0.M != h.M) throw InvalidParameter("evolve: state and Hamiltonian truncations differ");
  if (std::abs(psi0.amplitudes.norm() - 1.0) > 1e-10) throw InvalidParameter("evolve: initial state not normalized");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.entries);
  if (es.info() != Eigen::Success) throw ConvergenceFailure("evolve: eigendecomposition failed");
  const Eigen::MatrixXcd V = es.eigenvectors().cast<std::complex<double>>();
  const Eigen::VectorXcd c0 = V.adjoint() * psi0.amplitudes;
  std::vector<StateVector> out(t_list.size());
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    const Eigen::VectorXcd ph =
        (std::complex<double>(0, -t_list[i]) * es.eigenvalues().cast<std::complex<double>>()).array().exp();
    out[i].M = h.M;
    out[i].amplitudes = V * (ph.array() * c0.array()).matrix();
  }
  return out;
}

std::vector<double> default_time_grid() {
  std::vector<double> t;
  for (int i = 0; i <= 1000; ++i) t.push_back(0.02 * i);
  return t;
}

FidelitySeries fidelity_series(const ModelParams& p, const std::vector<double>& t_list, int M) {
  for (std::size_t i = 1; i < t_list.size(); ++i) {
    if (t_list[i] < t_list[i - 1]) throw InvalidParameter("fidelity_series: t_list must be ascending");
  }
  if (M == 0) M = p.g2 <= 0.3 ? 120 : 240;
  const StateVector psi0 = basis_state(M, 0, 0);
  const auto full = evolve(build_hamiltonian(p, M), psi0, t_list);
  const auto eff = evolve(build_effective_hamiltonian(p, M), psi0, t_list);
  const auto one = evolve(build_one_photon_hamiltonian(p, M), psi0, t_list);
  FidelitySeries f;
  f.t = t_list;
  f.M = M;
  double leak = 0.0;
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    f.F_eff.push_back(std::abs(eff[i].amplitudes.dot(full[i].amplitudes)));
    f.F_1P.push_back(std::abs(one[i].amplitudes.dot(full[i].amplitudes)));
    for (const auto* s : {&full[i], &eff[i], &one[i]}) {
      leak = std::max(leak, std::norm(s->amplitudes(M - 1)) + std::norm(s->amplitudes(2 * M - 1)));
    }
  }
  if (leak > 1e-8) {
    std::ostringstream os;
    os << "fidelity_series: top Fock level reaches " << leak << " at M=" << M;
    Warnings::add(os.str());
  }
  return f;
}

std::vector<OrderParameterRow> sweep_order_parameters(double delta, const std::vector<double>& g2_list,
                                                      const std::vector<double>& ratio_grid) {
  std::vector<OrderParameterRow> rows;
  for (double g2 : g2_list) {
    for (double ratio : ratio_grid) {
      const double beta = std::sqrt(1 - 4 * g2 * g2);
      const double g1c_eff = std::sqrt(delta * beta) / 2;
      rows.push_back({ratio, g2, ratio * g1c_eff * std::sqrt(beta), 0.0, 0.0});
    }
  }
  parallel_for(rows.size(), [&](std::size_t i) {
    const auto gs = ground_state({delta, rows[i].g1, rows[i].g2, 0.0});
    rows[i].M = magnetization(gs.state);
    rows[i].N_ph = photon_number(gs.state);
  });
  return rows;
}

}  // namespace mixrabi
