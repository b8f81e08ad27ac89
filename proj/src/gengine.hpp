// gengine.hpp: assembly of G-function matrices at a given working precision
//
// Private to the library: gfunction.cpp and exceptional.cpp instantiate it
// for double and Mp.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "mixrabi/fock.hpp"
#include "mixrabi/gfunction.hpp"
#include "mixrabi/precision.hpp"
#include "mixrabi/recurrence.hpp"

namespace mixrabi::detail {

struct ExceptionalSpec {
  Family family;
  int m;
};

template <class Real>
struct Assembled {
  int size{0};
  std::vector<Real> a;  // row-major size x size
  double scale_log{0.0};
  double peak_log10{-HUGE_VAL};  // log10 of the largest single term in any sum

  Real& at(int i, int j) { return a[i * size + j]; }
  const Real& at(int i, int j) const { return a[i * size + j]; }
};

template <class Real>
struct ColumnSums {
  Real s_f0, s_f1, s_e0, s_e1;  // sum F o0, F o1, E o0, E o1
  Real peak;
};

template <class Real>
ColumnSums<Real> column_sums(const CoefficientSeries<Real>& s, const ProjectionOverlaps<Real>& o) {
  using std::abs;
  ColumnSums<Real> c{Real(0), Real(0), Real(0), Real(0), Real(0)};
  const std::size_t n = s.e.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Real t0 = s.f[i] * o.row0[i];
    const Real t1 = s.f[i] * o.row1[i];
    const Real t2 = s.e[i] * o.row0[i];
    const Real t3 = s.e[i] * o.row1[i];
    c.s_f0 += t0;
    c.s_f1 += t1;
    c.s_e0 += t2;
    c.s_e1 += t3;
    c.peak = std::max({c.peak, Real(abs(t0)), Real(abs(t1)), Real(abs(t2)), Real(abs(t3))});
  }
  return c;
}

// Row order G(0,0), G(0,1), G(1,0), G(1,1): projections of the spin-down
// identity (f_n vs e'_n) on |0>, |1>, then of the spin-up identity (e_n vs f'_n).
template <class Real>
std::vector<Real> column_rows(const ColumnSums<Real>& c, Family family) {
  if (family == Family::A) return {c.s_f0, c.s_f1, c.s_e0, c.s_e1};
  return {-c.s_e0, -c.s_e1, -c.s_f0, -c.s_f1};
}

// With exc set, E is ignored and the pole energy of (family, m) is used,
// computed at the working precision.
template <class Real>
Assembled<Real> assemble(const ModelParams& p, const Real& E, int N, double pole_guard,
                         const std::optional<ExceptionalSpec>& exc) {
  const Real energy = exc ? pole_energy_t<Real>(exc->family, exc->m, Real(p.g1), Real(p.g2)) : E;
  const auto ctx = RecurrenceContext<Real>::make(p, energy, N, pole_guard);
  const auto ovA = projection_overlaps<Real>(ctx.frame, Family::A, N);
  const auto ovB = projection_overlaps<Real>(ctx.frame, Family::B, N);
  const bool three = ctx.three_term();

  struct Column {
    Family family;
    Seed seed;
  };
  std::vector<Column> cols;
  auto add_family = [&](Family fam) {
    const bool special = exc && exc->family == fam;
    const int m = special ? exc->m : -1;
    if (m != 0) cols.push_back({fam, Seed::f0()});
    if (!three && m != 1) cols.push_back({fam, Seed::f1()});
  };
  add_family(Family::A);
  add_family(Family::B);
  if (exc) cols.push_back({exc->family, Seed::em(exc->m)});

  std::vector<int> rows = three ? std::vector<int>{0, 2} : std::vector<int>{0, 1, 2, 3};
  const bool closure_row = exc && (three ? exc->m >= 1 : exc->m >= 2);

  Assembled<Real> out;
  out.size = static_cast<int>(cols.size());
  const int nrows = static_cast<int>(rows.size()) + (closure_row ? 1 : 0);
  if (nrows != out.size) {
    throw InvalidParameter("exceptional system is not square for this (family, m)");
  }
  out.a.assign(out.size * out.size, Real(0));
  Real peak(0);
  for (int j = 0; j < out.size; ++j) {
    const auto& col = cols[j];
    const bool special = exc && exc->family == col.family;
    const auto series = special ? propagate_exceptional(ctx, col.family, exc->m, col.seed)
                                : propagate(ctx, col.family, col.seed);
    const auto sums = column_sums(series, col.family == Family::A ? ovA : ovB);
    const auto r = column_rows(sums, col.family);
    for (std::size_t i = 0; i < rows.size(); ++i) out.at(static_cast<int>(i), j) = r[rows[i]];
    if (closure_row) out.at(static_cast<int>(rows.size()), j) = special ? series.closure : Real(0);
    out.scale_log += series.log_scale;
    peak = std::max(peak, sums.peak);
  }
  out.peak_log10 = log10_abs(peak);
  return out;
}

struct DetResult {
  int sign{0};
  double log10_abs{-HUGE_VAL};
};

/// Determinant by LU with partial pivoting.
template <class Real>
DetResult determinant(std::vector<Real> a, int n) {
  using std::abs;
  int sign = 1;
  double log10_total = 0.0;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i) {
      if (abs(a[i * n + k]) > abs(a[piv * n + k])) piv = i;
    }
    if (a[piv * n + k] == 0) return {0, -HUGE_VAL};
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
      sign = -sign;
    }
    const Real pivot = a[k * n + k];
    if (pivot < 0) sign = -sign;
    log10_total += log10_abs(pivot);
    for (int i = k + 1; i < n; ++i) {
      const Real factor = a[i * n + k] / pivot;
      if (factor == 0) continue;
      for (int j = k; j < n; ++j) a[i * n + j] -= factor * a[k * n + j];
    }
  }
  return {sign, log10_total};
}

template <class Real>
GMatrix to_gmatrix(const Assembled<Real>& as, double E, int N, int digits) {
  GMatrix g;
  g.size = as.size;
  g.E = E;
  g.N = N;
  g.digits = digits;
  g.scale_log = as.scale_log;
  g.peak_log10 = as.peak_log10;
  g.entries.resize(as.size, as.size);
  for (int i = 0; i < as.size; ++i) {
    for (int j = 0; j < as.size; ++j) g.entries(i, j) = to_double(as.at(i, j));
  }
  const auto d = determinant(as.a, as.size);
  g.det = GValue{d.sign, d.log10_abs, as.scale_log};
  return g;
}

/// Assembles and reduces the matrix at the given precision (0 = double).
/// A double run that overflows is redone in multiprecision.
GMatrix evaluate_g(const ModelParams& p, double E, int N, int digits, double pole_guard,
                   const std::optional<ExceptionalSpec>& exc);

/// Largest single term of the projected sums, from a low-precision run.
double pilot_peak(const ModelParams& p, double E, int N, double pole_guard,
                  const std::optional<ExceptionalSpec>& exc);

}  // namespace mixrabi::detail
