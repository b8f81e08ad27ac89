#include "mixrabi/exceptional.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gengine.hpp"
#include "mixrabi/reference_diag.hpp"

namespace mixrabi {

namespace {

int series_length(const ExceptionalProblem& prob, double g2, const ExceptionalOptions& opt, int extra = 0) {
  const int N = opt.N > 0 ? opt.N : auto_series_length(prob.params(g2));
  return std::max(N, prob.m + 10) + extra;
}

ExceptionalMatrix evaluate(const ExceptionalProblem& prob, double g2, const ExceptionalOptions& opt, int extra) {
  if (!(g2 > 0.0 && g2 < 0.5)) throw InvalidParameter("exceptional: g2 must lie in (0, 1/2)");
  if (prob.m < 0) throw InvalidParameter("exceptional: m must be >= 0");
  const ModelParams p = prob.params(g2);
  validate(p, std::max(kDefaultG2Cap, g2));
  const int N = series_length(prob, g2, opt, extra);
  const detail::ExceptionalSpec spec{prob.family, prob.m};
  const double E = prob.energy(g2);
  int digits = opt.digits;
  if (digits < 0) digits = digits_for_peak(detail::pilot_peak(p, E, N, opt.pole_guard, spec));
  const GMatrix g = detail::evaluate_g(p, E, N, digits, opt.pole_guard, spec);
  ExceptionalMatrix out;
  out.size = g.size;
  out.entries = g.entries;
  out.g2 = g2;
  out.energy = E;
  out.N = N;
  out.digits = g.digits;
  out.det = g.det;
  return out;
}

int sign_at(const ExceptionalProblem& prob, double g2, const ExceptionalOptions& opt, int extra = 0) {
  return evaluate(prob, g2, opt, extra).det.sign;
}

double sv_ratio(const Eigen::MatrixXd& a) {
  Eigen::MatrixXd b = a;
  for (int j = 0; j < b.cols(); ++j) {
    const double n = b.col(j).norm();
    if (n > 0) b.col(j) /= n;
  }
  const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(b).singularValues();
  return s(s.size() - 1) / s(0);
}

}  // namespace

ExceptionalMatrix exc_matrix(const ExceptionalProblem& prob, double g2, const ExceptionalOptions& opt) {
  return evaluate(prob, g2, opt, 0);
}

GValue exc_g_value(const ExceptionalProblem& prob, double g2, const ExceptionalOptions& opt) {
  return exc_matrix(prob, g2, opt).det;
}

std::vector<double> coincidence_g2(const ExceptionalProblem& prob, double lo, double hi) {
  // pole_A(m) = pole_B(n) needs beta^3 (n - m) = 4 g2 g1^2 with n > m, and the
  // mirror for family B; the left side falls and the right side rises in g2,
  // so every offset k = |n - m| has exactly one solution in (0, 1/2).
  std::vector<double> out;
  if (prob.g1 == 0.0) return out;
  const double c = 4 * prob.g1 * prob.g1;
  for (int k = 1;; ++k) {
    if (prob.family == Family::B && k > prob.m) break;
    auto f = [&](double g2) { return std::pow(1 - 4 * g2 * g2, 1.5) * k - c * g2; };
    double a = 0.0, b = 0.5;
    for (int it = 0; it < 200 && b - a > 1e-16; ++it) {
      const double mid = 0.5 * (a + b);
      (f(mid) > 0 ? a : b) = mid;
    }
    const double root = 0.5 * (a + b);
    if (root >= hi) break;  // roots move toward 1/2 as k grows
    if (root > lo) out.push_back(root);
    if (k > 100000) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> default_exceptional_grid() {
  std::vector<double> g(500);
  for (int i = 0; i < 500; ++i) g[i] = 0.005 + (0.495 - 0.005) * i / 499.0;
  return g;
}

std::vector<ExceptionalRoot> find_exceptional_roots(const ExceptionalProblem& prob, const std::vector<double>& g2_grid,
                                                    const ExceptionalOptions& opt) {
  if (g2_grid.size() < 2) throw InvalidParameter("exceptional grid needs at least two points");
  std::vector<double> grid = g2_grid;
  std::sort(grid.begin(), grid.end());
  if (!(grid.front() > 0.0 && grid.back() < 0.5)) throw InvalidParameter("exceptional grid must lie inside (0, 1/2)");

  // Grid points on either side of a coincidence are never paired into a
  // bracket: the determinant changes sign there through a pole.
  const auto singular = coincidence_g2(prob, grid.front(), grid.back());
  constexpr double kSingularOffset = 1e-6;
  std::vector<double> pts;
  for (double g : grid) {
    const bool close = std::any_of(singular.begin(), singular.end(),
                                   [&](double s) { return std::abs(s - g) < kSingularOffset; });
    if (!close) pts.push_back(g);
  }
  for (double s : singular) {
    pts.push_back(s - kSingularOffset);
    pts.push_back(s + kSingularOffset);
  }
  std::sort(pts.begin(), pts.end());

  std::vector<int> signs(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    try {
      signs[i] = sign_at(prob, pts[i], opt);
    } catch (const PoleProximity&) {
      signs[i] = 0;  // excluded from brackets
    }
  });

  auto crosses_singular = [&](double a, double b) {
    return std::any_of(singular.begin(), singular.end(), [&](double s) { return s > a && s < b; });
  };

  struct Bracket {
    double lo, hi;
    int slo;
  };
  std::vector<Bracket> brackets;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (crosses_singular(pts[i], pts[i + 1])) continue;
    if (signs[i] != 0 && signs[i + 1] != 0 && signs[i] != signs[i + 1]) {
      brackets.push_back({pts[i], pts[i + 1], signs[i]});
    }
  }

  std::vector<ExceptionalRoot> roots(brackets.size());
  parallel_for(brackets.size(), [&](std::size_t i) {
    double lo = brackets[i].lo, hi = brackets[i].hi;
    const int slo = brackets[i].slo;
    while (hi - lo > opt.g2_tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const int s = sign_at(prob, mid, opt);
      if (s == 0) {
        lo = hi = mid;
        break;
      }
      (s == slo ? lo : hi) = mid;
    }
    ExceptionalRoot r;
    r.g2_star = 0.5 * (lo + hi);
    r.energy = prob.energy(r.g2_star);
    r.family = prob.family;
    r.m = prob.m;
    const auto mat = evaluate(prob, r.g2_star, opt, 0);
    r.residual = mat.det.log10_abs;
    // N-certification: the longer series must change sign within a small band
    const double band = 1e-9;
    const int a = sign_at(prob, std::max(grid.front() * 0.5, r.g2_star - band), opt, opt.cert_extra);
    const int b = sign_at(prob, r.g2_star + band, opt, opt.cert_extra);
    if (a == b && a != 0) {
      std::ostringstream os;
      os << "exceptional root " << to_string(prob.family) << prob.m << " at g2=" << r.g2_star
         << " moved under N -> N+" << opt.cert_extra;
      Warnings::add(os.str());
    }
    if (opt.verify) {
      r.sv_ratio = sv_ratio(mat.entries);
      const auto levels = oracle_window(prob.params(r.g2_star), r.energy - 0.05, r.energy + 0.05);
      double gap = HUGE_VAL;
      for (double e : levels) gap = std::min(gap, std::abs(e - r.energy));
      r.oracle_gap = gap;
      r.spurious = !(gap < opt.oracle_tol);
    }
    roots[i] = r;
  });
  return roots;
}

}  // namespace mixrabi
