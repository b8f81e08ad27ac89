// model.hpp: model parameters, Bogoliubov frame and closed-form pole structure
//
// Energies are in units of the cavity frequency (omega = 1). The spin basis
// puts spin-up (sigma_z = +1) first; the upper diagonal block carries +g1.

#pragma once

#include <cmath>

#include "mixrabi/common.hpp"

namespace mixrabi {

inline constexpr double kDefaultG2Cap = 0.49999;

struct ModelParams {
  double delta{1.0};    // qubit tunneling
  double g1{0.0};       // one-photon coupling
  double g2{0.0};       // two-photon coupling, [0, 1/2)
  double epsilon{0.0};  // static bias epsilon*sigma_z/2
};

/// Throws InvalidParameter unless delta >= 0, g1 >= 0 and 0 <= g2 <= g2_cap < 1/2.
/// delta == 0 is accepted; the spectral routines treat it analytically.
void validate(const ModelParams& p, double g2_cap = kDefaultG2Cap);

/// Constants of the two Bogoliubov transformations
///   A = u a + v a^dag + w,    B = u a - v a^dag + w'.
template <class Real>
struct FrameT {
  Real beta;
  Real u, v;
  Real w, w_prime;
  Real h_A, h_B;
  Real uv;
  Real omega_slope;  // (1 + 4 g2^2) / beta, slope of Omega(n, E) in n
};

struct BogoliubovFrame : FrameT<double> {
  double r{0.0};  // squeeze parameter, arccosh(u)
};

template <class Real>
FrameT<Real> make_frame(const Real& g1, const Real& g2) {
  using std::sqrt;
  FrameT<Real> f;
  f.beta = sqrt(Real(1) - 4 * g2 * g2);
  f.u = sqrt((1 + f.beta) / (2 * f.beta));
  f.v = sqrt((1 - f.beta) / (2 * f.beta));
  const Real s = f.u * f.u + f.v * f.v;  // = 1/beta
  f.w = s / (f.u + f.v) * g1;
  f.w_prime = s / (f.v - f.u) * g1;
  f.uv = f.u * f.v;
  const Real dm = f.u - f.v;
  const Real dp = f.u + f.v;
  f.h_A = f.v * f.v + dm * dm * f.w * f.w * (1 - 2 * g2) + 2 * g1 * dm * f.w + 2 * g2 * f.uv;
  f.h_B = f.v * f.v + dp * dp * f.w_prime * f.w_prime * (1 + 2 * g2) - 2 * g1 * dp * f.w_prime +
          2 * g2 * f.uv;
  f.omega_slope = (1 + 4 * g2 * g2) / f.beta;
  return f;
}

BogoliubovFrame build_frame(const ModelParams& p);

template <class Real>
Real pole_energy_t(Family family, int n, const Real& g1, const Real& g2) {
  using std::sqrt;
  const Real beta = sqrt(Real(1) - 4 * g2 * g2);
  const Real denom = family == Family::A ? Real(1 + 2 * g2) : Real(1 - 2 * g2);
  return beta * n - (1 - beta) / 2 - g1 * g1 / denom;
}

/// Energy where the family's e_n coefficient diverges:
///   beta n - (1 - beta)/2 - g1^2 / (1 +/- 2 g2)   (+ for A, - for B).
double pole_energy(Family family, int n, const ModelParams& p);

/// B-pole minus A-pole at equal n, 4 g2 g1^2 / beta^2.
double pole_gap(const ModelParams& p);

struct CollapseLimits {
  double finite_A;   // common limit of all A poles as g2 -> 1/2
  bool divergent_B;  // B poles run to -infinity
};

CollapseLimits collapse_limits(double g1);

}  // namespace mixrabi
