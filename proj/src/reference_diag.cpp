#include "mixrabi/reference_diag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <lapacke.h>

namespace mixrabi {

DenseHamiltonian build_hamiltonian(const ModelParams& p, int M) {
  if (M < 20) throw InvalidParameter("build_hamiltonian: M must be >= 20");
  validate(p, std::max(kDefaultG2Cap, p.g2));
  DenseHamiltonian h;
  h.M = M;
  h.entries = Eigen::MatrixXd::Zero(2 * M, 2 * M);
  auto& H = h.entries;
  for (int s = 0; s < 2; ++s) {
    const double sz = s == 0 ? 1.0 : -1.0;
    const int o = s * M;
    for (int n = 0; n < M; ++n) {
      H(o + n, o + n) = n + sz * p.epsilon / 2;
      if (n + 1 < M) {
        const double x = sz * p.g1 * std::sqrt(n + 1.0);
        H(o + n, o + n + 1) = H(o + n + 1, o + n) = x;
      }
      if (n + 2 < M) {
        const double y = sz * p.g2 * std::sqrt((n + 1.0) * (n + 2.0));
        H(o + n, o + n + 2) = H(o + n + 2, o + n) = y;
      }
    }
  }
  for (int n = 0; n < M; ++n) H(n, M + n) = H(M + n, n) = -p.delta / 2;
  h.rebuild = [p](int m) { return build_hamiltonian(p, m); };
  return h;
}

int default_truncation(double g2) {
  if (g2 <= 0.3) return 200;
  if (g2 <= 0.45) return 600;
  return 1200;
}

namespace {

// Interleaved order (2n + s) turns the spin ⊗ Fock matrix into a narrow band.
int interleaved(int i, int M) { return i < M ? 2 * i : 2 * (i - M) + 1; }

struct BandSolve {
  std::vector<double> w;
  Eigen::MatrixXd z;  // spin ⊗ Fock order
};

// range 'I': levels il..iu (1-based); range 'V': levels in (vl, vu].
BandSolve band_solve(const Eigen::MatrixXd& H, int M, char range, int il, int iu, double vl, double vu,
                     bool vectors) {
  const int n = 2 * M;
  int kd = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (H(i, j) != 0.0) kd = std::max(kd, std::abs(interleaved(i, M) - interleaved(j, M)));
    }
  }
  const int ldab = kd + 1;
  std::vector<double> ab(static_cast<std::size_t>(ldab) * n, 0.0);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int ii = interleaved(i, M), jj = interleaved(j, M);
      if (ii <= jj && jj - ii <= kd) ab[static_cast<std::size_t>(kd + ii - jj) + static_cast<std::size_t>(jj) * ldab] = H(i, j);
    }
  }
  const char jobz = vectors ? 'V' : 'N';
  const int cols = range == 'I' ? iu - il + 1 : n;
  std::vector<double> q(vectors ? static_cast<std::size_t>(n) * n : 1);
  std::vector<double> w(n);
  std::vector<double> z(vectors ? static_cast<std::size_t>(n) * cols : 1);
  std::vector<lapack_int> ifail(n);
  lapack_int found = 0;
  const double abstol = 2 * LAPACKE_dlamch('S');
  const lapack_int info =
      LAPACKE_dsbevx(LAPACK_COL_MAJOR, jobz, range, 'U', n, kd, ab.data(), ldab, q.data(), vectors ? n : 1, vl, vu,
                     il, iu, abstol, &found, w.data(), z.data(), vectors ? n : 1, ifail.data());
  if (info != 0) {
    throw ConvergenceFailure("dsbevx failed with info=" + std::to_string(info));
  }
  BandSolve out;
  out.w.assign(w.begin(), w.begin() + found);
  if (vectors) {
    out.z.resize(n, found);
    for (int c = 0; c < found; ++c) {
      for (int i = 0; i < n; ++i) out.z(i, c) = z[static_cast<std::size_t>(c) * n + interleaved(i, M)];
    }
  }
  return out;
}

std::vector<double> lowest(const DenseHamiltonian& h, int k) {
  return band_solve(h.entries, h.M, 'I', 1, k, 0, 0, false).w;
}

double max_drift(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

EigenSystem eigen_solve(const DenseHamiltonian& h, int k, double conv_tol, bool vectors) {
  if (k < 1 || k > h.M / 2) throw InvalidParameter("eigen_solve: need 1 <= k <= M/2");
  const auto bs = band_solve(h.entries, h.M, 'I', 1, k, 0, 0, vectors);
  EigenSystem es;
  es.M = h.M;
  es.energies = Eigen::Map<const Eigen::VectorXd>(bs.w.data(), static_cast<Eigen::Index>(bs.w.size()));
  if (vectors) {
    es.states = bs.z;
    for (int c = 0; c < es.states.cols(); ++c) {
      const double r = (h.entries * es.states.col(c) - es.energies(c) * es.states.col(c)).norm();
      es.max_residual = std::max(es.max_residual, r);
    }
    if (es.max_residual > 1e-10) {
      std::ostringstream os;
      os << "eigen_solve: residual " << es.max_residual << " exceeds 1e-10";
      throw ConvergenceFailure(os.str());
    }
  }
  if (h.rebuild) {
    const auto bigger = lowest(h.rebuild(h.M + 50), k);
    es.max_drift = max_drift(bs.w, bigger);
    if (es.max_drift > conv_tol) {
      std::ostringstream os;
      os << "eigen_solve: levels moved by " << es.max_drift << " between M=" << h.M << " and M=" << h.M + 50;
      throw ConvergenceFailure(os.str());
    }
  }
  return es;
}

EigenSystem converged_levels(const std::function<DenseHamiltonian(int)>& build, int k, int M0, OracleOptions opt,
                             bool vectors) {
  int M = std::max(M0, 2 * k);
  double last_drift = 0.0;
  double prev_E0 = std::numeric_limits<double>::infinity();
  while (M <= opt.max_M) {
    const auto h = build(M);
    const auto w = lowest(h, k);
    const auto w2 = lowest(build(M + 50), k);
    if (w[0] > prev_E0 + 1e-12) {
      Warnings::add("variational monotonicity violated: E0 rose when M was increased");
    }
    prev_E0 = w[0];
    last_drift = max_drift(w, w2);
    if (last_drift <= opt.conv_tol) {
      EigenSystem es = eigen_solve(h, k, opt.conv_tol, vectors);
      return es;
    }
    M *= 2;
  }
  std::ostringstream os;
  os << "truncated diagonalization not converged up to M=" << opt.max_M << " (last drift " << last_drift << ")";
  throw ConvergenceFailure(os.str());
}

EigenSystem oracle_levels(const ModelParams& p, int k, OracleOptions opt, bool vectors) {
  const int M0 = opt.M > 0 ? opt.M : default_truncation(p.g2);
  return converged_levels([p](int m) { return build_hamiltonian(p, m); }, k, M0, opt, vectors);
}

std::vector<double> oracle_window(const ModelParams& p, double lo, double hi, OracleOptions opt) {
  int M = opt.M > 0 ? opt.M : default_truncation(p.g2);
  // count the levels below hi at the starting truncation; truncation only
  // raises eigenvalues, so the converged count can only grow
  while (true) {
    const auto h = build_hamiltonian(p, M);
    const double floor = -1e300;
    const auto below = band_solve(h.entries, M, 'V', 0, 0, floor, hi + 0.1, false).w;
    const int k = static_cast<int>(below.size());
    if (k == 0) return {};
    if (k > M / 2) {
      M *= 2;
      if (M > opt.max_M) throw ConvergenceFailure("oracle_window: window too high for the truncation limit");
      continue;
    }
    OracleOptions o = opt;
    o.M = M;
    const auto es = oracle_levels(p, k, o, false);
    // a converged run at larger M may reveal extra levels below hi + 0.1
    const auto check = band_solve(build_hamiltonian(p, es.M).entries, es.M, 'V', 0, 0, floor, hi + 0.1, false).w;
    if (static_cast<int>(check.size()) != k) {
      M = es.M;
      continue;
    }
    std::vector<double> out;
    for (int i = 0; i < es.energies.size(); ++i) {
      if (es.energies(i) >= lo && es.energies(i) <= hi) out.push_back(es.energies(i));
    }
    return out;
  }
}

GroundState ground_state_of(const std::function<DenseHamiltonian(int)>& build, int M0) {
  const auto es = converged_levels(build, 1, M0, {}, true);
  GroundState gs;
  gs.energy = es.energies(0);
  gs.state.M = es.M;
  gs.state.amplitudes = es.states.col(0).cast<std::complex<double>>();
  return gs;
}

GroundState ground_state(const ModelParams& p, int M) {
  if (M > 0) {
    const auto es = eigen_solve(build_hamiltonian(p, M), 1, 1e-8, true);
    GroundState gs;
    gs.energy = es.energies(0);
    gs.state.M = es.M;
    gs.state.amplitudes = es.states.col(0).cast<std::complex<double>>();
    return gs;
  }
  return ground_state_of([p](int m) { return build_hamiltonian(p, m); }, default_truncation(p.g2));
}

}  // namespace mixrabi
