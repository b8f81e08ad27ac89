// exceptional.hpp: eigenvalues sitting exactly on a pole line
//
// At E = pole(family, m) the coefficient f_m must vanish and e_m becomes a
// free unknown. The enlarged determinant (5x5 for m >= 2, 4x4 otherwise) is a
// function of g2 alone once (Delta, g1) are fixed.

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mixrabi/gfunction.hpp"

namespace mixrabi {

struct ExceptionalProblem {
  Family family{Family::A};
  int m{0};
  double delta{0.5};
  double g1{0.1};

  ModelParams params(double g2) const { return {delta, g1, g2, 0.0}; }
  double energy(double g2) const { return pole_energy(family, m, params(g2)); }
};

struct ExceptionalMatrix {
  int size{0};
  Eigen::MatrixXd entries;
  double g2{0.0};
  double energy{0.0};
  int N{0};
  int digits{0};
  GValue det;
};

struct ExceptionalOptions {
  int N{0};        // 0 = auto_series_length at each g2
  int digits{-1};  // -1 = pilot per evaluation
  double pole_guard{kDefaultPoleGuard};
  double g2_tol{1e-12};
  int cert_extra{20};
  double oracle_tol{1e-6};
  bool verify{true};  // oracle and singular-value checks at each root
};

ExceptionalMatrix exc_matrix(const ExceptionalProblem& prob, double g2, const ExceptionalOptions& opt = {});
GValue exc_g_value(const ExceptionalProblem& prob, double g2, const ExceptionalOptions& opt = {});

/// g2 values in (lo, hi) where pole(family, m) meets a pole of the other
/// family; the enlarged determinant is singular there, not zero.
std::vector<double> coincidence_g2(const ExceptionalProblem& prob, double lo, double hi);

/// 500 points evenly spaced on [0.005, 0.495].
std::vector<double> default_exceptional_grid();

struct ExceptionalRoot {
  double g2_star{0.0};
  double energy{0.0};
  Family family{Family::A};
  int m{0};
  double residual{0.0};      // log10 |det| at g2_star
  double oracle_gap{-1.0};   // distance to the nearest oracle eigenvalue; -1 if not verified
  double sv_ratio{-1.0};     // smallest / largest singular value, columns normalized
  bool spurious{false};      // failed oracle verification
};

std::vector<ExceptionalRoot> find_exceptional_roots(const ExceptionalProblem& prob, const std::vector<double>& g2_grid,
                                                    const ExceptionalOptions& opt = {});

}  // namespace mixrabi
