// recurrence.hpp: coefficient series of the Bogoliubov-frame expansions
//
// In frame A an eigenstate is expanded as
//   |psi> = sum_n sqrt(n!) ( e_n |n>_A , f_n |n>_A )
// and in frame B as sum_n sqrt(n!) ( f'_n |n>_B , e'_n |n>_B ). Projecting the
// Schroedinger equation gives e_n = (Delta/2) f_n / (pole(n) - E) and a
// five-term recurrence that fixes every f_n from the seeds f_0, f_1.
//
// Series are stored with the sqrt(n!) weight folded in, F_n = sqrt(n!) f_n and
// likewise for e, so that G-function sums are plain dot products with the
// unweighted overlaps and nothing overflows for N in the hundreds.

#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "mixrabi/common.hpp"
#include "mixrabi/model.hpp"
#include "mixrabi/precision.hpp"

namespace mixrabi {

inline constexpr double kDefaultPoleGuard = 1e-8;

enum class SeedKind {
  F0,  // f_0 = 1, f_1 = 0
  F1,  // f_0 = 0, f_1 = 1
  EM,  // exceptional mode: all f seeds zero, e_m = 1
};

struct Seed {
  SeedKind kind{SeedKind::F0};
  int m{-1};  // only for EM

  static Seed f0() { return {SeedKind::F0, -1}; }
  static Seed f1() { return {SeedKind::F1, -1}; }
  static Seed em(int m) { return {SeedKind::EM, m}; }
};

std::string to_string(const Seed& s);

template <class Real>
struct RecurrenceContext {
  FrameT<Real> frame;
  Real delta;
  Real g1;
  Real g2;
  Real E;
  int N{60};
  double pole_guard{kDefaultPoleGuard};

  static RecurrenceContext make(const ModelParams& p, const Real& E, int N,
                                double pole_guard = kDefaultPoleGuard) {
    RecurrenceContext c;
    c.delta = Real(p.delta);
    c.g1 = Real(p.g1);
    c.g2 = Real(p.g2);
    c.frame = make_frame<Real>(c.g1, c.g2);
    c.E = E;
    c.N = N;
    c.pole_guard = pole_guard;
    return c;
  }

  /// Omega(n, E) = (1 + 4 g2^2)/beta * n - E
  Real omega(int n) const { return frame.omega_slope * n - E; }

  Real pole(Family family, int n) const {
    const Real denom = family == Family::A ? Real(1 + 2 * g2) : Real(1 - 2 * g2);
    return frame.beta * n - (1 - frame.beta) / 2 - g1 * g1 / denom;
  }

  // At g2 = 0 the recurrence degenerates to the three-term one-photon form.
  bool three_term() const { return g2 == 0; }
};

template <class Real>
struct CoefficientSeries {
  Family family{Family::A};
  Seed seed;
  std::vector<Real> f;  // sqrt(n!) f_n
  std::vector<Real> e;  // sqrt(n!) e_n
  double log_scale{0.0};  // log10 of the factor divided out of the whole series
  // Exceptional mode only: value the recurrence assigns to sqrt(m!) f_m before
  // it is forced to zero. Its vanishing is the extra linear condition.
  Real closure{0};

  double unweighted_f(int n) const { return to_double(f[n]) / std::sqrt(std::tgamma(n + 1.0)); }
  double unweighted_e(int n) const { return to_double(e[n]) / std::sqrt(std::tgamma(n + 1.0)); }
};

/// e_n from f_n: (Delta/2) f_n / (pole(family, n) - E). Works for weighted or
/// unweighted coefficients alike.
template <class Real>
Real e_from_f(int n, const Real& f_n, const RecurrenceContext<Real>& ctx, Family family) {
  using std::abs;
  if (f_n == 0) return Real(0);
  const Real gap = ctx.pole(family, n) - ctx.E;
  if (abs(gap) < ctx.pole_guard) {
    std::ostringstream os;
    os << "trial energy " << to_double(ctx.E) << " within " << ctx.pole_guard << " of pole "
       << to_string(family) << n;
    throw PoleProximity(os.str());
  }
  return ctx.delta / 2 * f_n / gap;
}

namespace detail {

// Coefficients of the five-term recurrence
//   D (k+1)(k+2) f_{k+2} = -Delta/2 e_k + (Omega(k)+h) f_k - 2W (f_{k-1} + (k+1) f_{k+1}) + S f_{k-2}
// with (W, S, D) = ((u-v)^2 w, -2uv, 2uv) for A and ((u+v)^2 w', 2uv, -2uv) for B.
template <class Real>
struct RecurrenceCoefficients {
  Real W, S, D, h;
};

template <class Real>
RecurrenceCoefficients<Real> coefficients(const RecurrenceContext<Real>& ctx, Family family) {
  const auto& fr = ctx.frame;
  if (family == Family::A) {
    const Real d = fr.u - fr.v;
    return {d * d * fr.w, -2 * fr.uv, 2 * fr.uv, fr.h_A};
  }
  const Real s = fr.u + fr.v;
  return {s * s * fr.w_prime, 2 * fr.uv, -2 * fr.uv, fr.h_B};
}

// Weighted form of the five-term step, returns sqrt((k+2)!) f_{k+2}.
template <class Real>
Real five_term_step(int k, const std::vector<Real>& F, const Real& Ek, const RecurrenceContext<Real>& ctx,
                    const RecurrenceCoefficients<Real>& c) {
  using std::sqrt;
  const Real zero(0);
  const Real& Fk = F[k];
  const Real& Fk1 = F[k + 1];
  const Real& Fkm1 = k >= 1 ? F[k - 1] : zero;
  const Real& Fkm2 = k >= 2 ? F[k - 2] : zero;
  const Real norm = sqrt(Real((k + 1) * (k + 2)));
  Real acc = -ctx.delta / 2 * Ek + (ctx.omega(k) + c.h) * Fk;
  if (k >= 1) acc -= 2 * c.W * sqrt(Real(k)) * Fkm1;
  if (k >= 2) acc += c.S * sqrt(Real(k * (k - 1))) * Fkm2;
  return (acc / norm - 2 * c.W * Fk1 / sqrt(Real(k + 2))) / c.D;
}

// Weighted three-term step at g2 = 0, returns sqrt((k+1)!) f_{k+1}.
template <class Real>
Real three_term_step(int k, const std::vector<Real>& F, const Real& Ek, const RecurrenceContext<Real>& ctx,
                     const RecurrenceCoefficients<Real>& c) {
  using std::sqrt;
  Real acc = (ctx.omega(k) + c.h) * F[k] - ctx.delta / 2 * Ek;
  if (k >= 1) acc -= 2 * c.W * sqrt(Real(k)) * F[k - 1];
  return acc / (2 * c.W * sqrt(Real(k + 1)));
}

// Joint rescaling for double series; the common factor drops out of every
// determinant zero. Multiprecision series never need it.
template <class Real>
void maybe_rescale(CoefficientSeries<Real>& s, int upto, const Real& newest_f, const Real& newest_e) {
  if constexpr (std::is_same_v<Real, double>) {
    constexpr double kThreshold = 1e150;
    const double peak = std::max(std::abs(newest_f), std::abs(newest_e));
    if (!std::isfinite(peak)) {
      throw Overflow("coefficient series overflowed double range");
    }
    if (peak > kThreshold) {
      const int ex = std::ilogb(peak);
      for (int i = 0; i <= upto; ++i) s.f[i] = std::ldexp(s.f[i], -ex);
      for (std::size_t i = 0; i < s.e.size(); ++i) s.e[i] = std::ldexp(s.e[i], -ex);
      s.closure = std::ldexp(s.closure, -ex);
      s.log_scale += ex * std::log10(2.0);
    }
  } else {
    (void)s;
    (void)upto;
    (void)newest_f;
    (void)newest_e;
  }
}

template <class Real>
CoefficientSeries<Real> run(const RecurrenceContext<Real>& ctx, Family family, Seed seed, int forced_zero) {
  const int N = ctx.N;
  if (N < 1) throw InvalidParameter("series length N must be >= 1");
  CoefficientSeries<Real> s;
  s.family = family;
  s.seed = seed;
  s.f.assign(N + 3, Real(0));
  s.e.assign(N + 1, Real(0));
  switch (seed.kind) {
    case SeedKind::F0: s.f[0] = 1; break;
    case SeedKind::F1: s.f[1] = 1; break;
    case SeedKind::EM: break;
  }
  const auto c = coefficients(ctx, family);
  const bool three = ctx.three_term();
  if (three && c.W == 0) {
    throw InvalidParameter("recurrence undefined at g1 = g2 = 0 (use the analytic branch)");
  }

  for (int k = 0; k <= N; ++k) {
    if (k == forced_zero) {
      s.e[k] = seed.kind == SeedKind::EM ? Real(1) : Real(0);
    } else {
      s.e[k] = e_from_f(k, s.f[k], ctx, family);
    }
    if (three) {
      s.f[k + 1] = three_term_step(k, s.f, s.e[k], ctx, c);
      if (k + 1 == forced_zero) {
        s.closure = s.f[k + 1];
        s.f[k + 1] = 0;
      }
    } else {
      s.f[k + 2] = five_term_step(k, s.f, s.e[k], ctx, c);
      if (k + 2 == forced_zero) {
        s.closure = s.f[k + 2];
        s.f[k + 2] = 0;
      }
    }
    const int last = three ? k + 1 : k + 2;
    maybe_rescale(s, last, s.f[last], s.e[k]);
  }
  s.f.resize(N + 1);
  return s;
}

}  // namespace detail

/// Propagates seed F0 or F1 through the recurrence up to index ctx.N.
/// At g2 = 0 only F0 is free (f_1 follows from f_0).
template <class Real>
CoefficientSeries<Real> propagate(const RecurrenceContext<Real>& ctx, Family family, Seed seed) {
  if (seed.kind == SeedKind::EM) {
    throw InvalidParameter("propagate: exceptional seeds need propagate_exceptional");
  }
  if (ctx.three_term() && seed.kind == SeedKind::F1) {
    throw InvalidParameter("propagate: at g2 = 0 f_1 is fixed by f_0; only seed F0 is free");
  }
  return detail::run(ctx, family, seed, -1);
}

/// Series at E = pole(family, m) with f_m forced to zero and e_m promoted to
/// an unknown. Seeds: F0, F1, EM(m) for m >= 2; for m < 2 the f seed that
/// would set f_m is excluded.
template <class Real>
CoefficientSeries<Real> propagate_exceptional(const RecurrenceContext<Real>& ctx, Family family, int m,
                                              Seed seed) {
  using std::abs;
  if (m < 0) throw InvalidParameter("exceptional index m must be >= 0");
  if (m > ctx.N) throw InvalidParameter("exceptional index m exceeds series length");
  const Real pole = ctx.pole(family, m);
  const Real tol = 1e-12 * (1 + abs(pole));
  if (abs(ctx.E - pole) > tol) {
    throw InvalidParameter("propagate_exceptional: E is not on the pole line " + std::string(to_string(family)) +
                           std::to_string(m));
  }
  if (seed.kind == SeedKind::EM && seed.m != m) {
    throw InvalidParameter("propagate_exceptional: EM seed index does not match m");
  }
  if ((seed.kind == SeedKind::F0 && m == 0) || (seed.kind == SeedKind::F1 && m == 1)) {
    throw InvalidParameter("propagate_exceptional: seed f_m is forced to zero");
  }
  if (ctx.three_term() && seed.kind == SeedKind::F1) {
    throw InvalidParameter("propagate_exceptional: at g2 = 0 only seed F0 is free");
  }
  // The pole itself must be skipped by e_from_f; widen nothing else.
  return detail::run(ctx, family, seed, m);
}

}  // namespace mixrabi
