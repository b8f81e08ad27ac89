// Acceptance suite: one PASS/FAIL line per criterion.
//
// usage: acceptance CLI_PATH [criterion ...]
// Exit status is the number of failed criteria.

#include <unistd.h>

#include <algorithm>
#include <cstdarg>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mixrabi/effective.hpp"
#include "mixrabi/exceptional.hpp"
#include "mixrabi/gfunction.hpp"
#include "mixrabi/observables.hpp"
#include "mixrabi/reference_diag.hpp"
#include "reference_qrm.hpp"

using namespace mixrabi;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass{false};
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Independent pole formula.
double pole(Family f, int n, double g1, double g2) {
  const double beta = std::sqrt(1 - 4 * g2 * g2);
  return beta * n - (1 - beta) / 2 - g1 * g1 / (f == Family::A ? 1 + 2 * g2 : 1 - 2 * g2);
}

double distance_to_pole(double E, double g1, double g2) {
  double d = HUGE_VAL;
  for (Family f : {Family::A, Family::B}) {
    const double beta = std::sqrt(1 - 4 * g2 * g2);
    const int n0 = std::max(0, static_cast<int>(std::floor((E - pole(f, 0, g1, g2)) / beta)));
    for (int n = std::max(0, n0 - 2); n <= n0 + 2; ++n) d = std::min(d, std::abs(E - pole(f, n, g1, g2)));
  }
  return d;
}

double nearest(const std::vector<double>& xs, double x) {
  double best = HUGE_VAL;
  for (double y : xs) best = std::min(best, std::abs(x - y));
  return best;
}

// Moves a window bound off any pole line.
double off_pole(double E, const ModelParams& p, double dir) {
  while (distance_to_pole(E, p.g1, p.g2) < 1e-5) E += dir * 1e-5;
  return E;
}

struct Equivalence {
  int roots{0}, levels{0};
  int unmatched_roots{0}, missed_levels{0};
  double worst{0.0};
  double seconds{0.0};
};

// Two-sided comparison of G-roots and converged diagonalization in
// [E0 - 0.2, E0 + 4].
Equivalence equivalence(const ModelParams& p) {
  const auto t0 = std::chrono::steady_clock::now();
  const double E0 = oracle_levels(p, 1).energies(0);
  const double lo = off_pole(E0 - 0.2, p, -1), hi = off_pole(E0 + 4.0, p, +1);
  const auto spec = find_roots(p, lo, hi);
  const auto oracle = oracle_window(p, lo - 1e-5, hi + 1e-5);
  Equivalence q;
  for (const auto& r : spec.roots) {
    ++q.roots;
    const double d = nearest(oracle, r.E);
    q.worst = std::max(q.worst, d);
    if (!(d < 1e-6)) ++q.unmatched_roots;
  }
  std::vector<double> roots;
  for (const auto& r : spec.roots) roots.push_back(r.E);
  for (double e : oracle) {
    if (e < lo + 1e-6 || e > hi - 1e-6) continue;
    if (distance_to_pole(e, p.g1, p.g2) < 1e-6) continue;  // exceptional, not a G-root
    ++q.levels;
    const double d = nearest(roots, e);
    q.worst = std::max(q.worst, d);
    if (!(d < 1e-6)) ++q.missed_levels;
  }
  q.seconds = seconds_since(t0);
  return q;
}

// ---------------------------------------------------------------------------

Outcome c1() {
  Outcome o{true, ""};
  for (double g2 : {0.2, 0.47}) {
    const auto q = equivalence({0.5, 0.1, g2, 0.0});
    const bool ok = q.unmatched_roots == 0 && q.missed_levels == 0 && q.roots > 0 && q.seconds < 30.0;
    o.pass = o.pass && ok;
    o.detail += fmt("g2=%.2f: %d roots, %d off-pole levels, worst %.1e, %.1f s; ", g2, q.roots, q.levels, q.worst,
                    q.seconds);
  }
  return o;
}

Outcome c2() {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> ud(0.2, 2.0), ug1(0.0, 1.0), ug2(0.0, 0.4);
  const auto t0 = std::chrono::steady_clock::now();
  int bad = 0, roots = 0;
  double worst = 0.0, slowest = 0.0;
  std::string failures;
  for (int i = 0; i < 20; ++i) {
    const ModelParams p{ud(rng), ug1(rng), ug2(rng), 0.0};
    const auto q = equivalence(p);
    roots += q.roots;
    worst = std::max(worst, q.worst);
    slowest = std::max(slowest, q.seconds);
    if (q.unmatched_roots || q.missed_levels || q.roots == 0) {
      ++bad;
      failures += fmt(" (%.3f,%.3f,%.3f)", p.delta, p.g1, p.g2);
    }
  }
  const double total = seconds_since(t0);
  Outcome o;
  o.pass = bad == 0 && total < 600.0;
  o.detail = fmt("20 triples, %d roots, worst %.1e, slowest %.1f s, total %.1f s", roots, worst, slowest, total);
  if (bad) o.detail += ", mismatches at" + failures;
  return o;
}

Outcome c3() {
  Outcome o{true, ""};
  double worst1 = 0.0;
  int n1 = 0;
  for (auto [delta, g1] : std::vector<std::pair<double, double>>{{0.5, 0.1}, {1.0, 0.5}, {0.7, 1.0}, {2.0, 0.8}}) {
    const double lo = -g1 * g1 - delta / 2 - 0.3, hi = lo + 5.0;
    const auto s = find_roots({delta, g1, 0.0, 0.0}, lo, hi);
    const auto ref = reference::one_photon_spectrum(delta, g1, lo, hi);
    if (s.roots.size() != ref.size()) {
      o.pass = false;
      o.detail += fmt("one-photon count %zu vs %zu at (%.1f,%.1f); ", s.roots.size(), ref.size(), delta, g1);
      continue;
    }
    for (std::size_t i = 0; i < ref.size(); ++i) worst1 = std::max(worst1, std::abs(s.roots[i].E - ref[i]));
    n1 += static_cast<int>(ref.size());
  }
  double worst2 = 0.0, ref_drift = 0.0;
  int n2 = 0;
  for (double delta : {0.5, 1.5}) {
    for (double g2 : {0.1, 0.25, 0.4}) {
      const int M = g2 < 0.3 ? 400 : 1000;
      const auto ref = reference::two_photon_levels(delta, g2, M, 8);
      const auto ref2 = reference::two_photon_levels(delta, g2, M + 100, 8);
      const auto lv = lowest_levels({delta, 0.0, g2, 0.0}, 8);
      for (int k = 0; k < 8; ++k) {
        worst2 = std::max(worst2, std::abs(lv[k] - ref[k]));
        ref_drift = std::max(ref_drift, std::abs(ref[k] - ref2[k]));
      }
      n2 += 8;
    }
  }
  o.pass = o.pass && worst1 < 1e-8 && worst2 < 1e-8;
  o.detail += fmt("g2=0 vs one-photon G-function: %d levels, worst %.1e; g1=0 vs two-photon diagonalization: %d "
                  "levels, worst %.1e (reference drift %.1e)",
                  n1, worst1, n2, worst2, ref_drift);
  return o;
}

Outcome c4() {
  Outcome o{true, ""};
  double worst = 0.0;
  int count = 0;
  for (auto [g1, g2] : std::vector<std::pair<double, double>>{{0.1, 0.2}, {0.5, 0.3}, {1.0, 0.45}, {0.3, 0.0}, {0.7, 0.1}}) {
    const ModelParams p{0.0, g1, g2, 0.0};
    const double lo = off_pole(std::min(pole(Family::A, 0, g1, g2), pole(Family::B, 0, g1, g2)) - 0.5, p, -1);
    const double hi = off_pole(lo + 6.0, p, +1);
    const auto s = find_roots(p, lo, hi);
    std::vector<double> expect;
    for (Family f : {Family::A, Family::B})
      for (int n = 0;; ++n) {
        const double e = pole(f, n, g1, g2);
        if (e > hi) break;
        if (e >= lo) expect.push_back(e);
      }
    std::sort(expect.begin(), expect.end());
    if (!s.analytic || s.roots.size() != expect.size()) {
      o.pass = false;
      o.detail += fmt("count %zu vs %zu at g1=%.1f g2=%.2f; ", s.roots.size(), expect.size(), g1, g2);
      continue;
    }
    for (std::size_t i = 0; i < expect.size(); ++i) worst = std::max(worst, std::abs(s.roots[i].E - expect[i]));
    count += static_cast<int>(expect.size());
  }
  o.pass = o.pass && worst < 1e-10;
  o.detail += fmt("%d levels on 5 parameter points, worst %.1e", count, worst);
  return o;
}

Outcome c5() {
  double worst = 0.0, worst_literal = 0.0, worst_fn = 0.0;
  for (double g1 : {0.05, 0.1, 0.5, 1.0}) {
    for (double g2 : {0.01, 0.1, 0.2, 0.3, 0.4, 0.45, 0.49}) {
      const ModelParams p{0.5, g1, g2, 0.0};
      const double beta2 = 1 - 4 * g2 * g2;
      const double gap = 4 * g2 * g1 * g1 / beta2;
      worst_fn = std::max(worst_fn, std::abs(pole_gap(p) - gap));
      for (int n = 0; n <= 10; ++n) {
        const double a = pole_energy(Family::A, n, p), b = pole_energy(Family::B, n, p);
        worst = std::max(worst, std::abs((a - b) - gap));
        worst_literal = std::max(worst_literal, std::abs((b - a) - gap));
      }
    }
  }
  const bool identity = worst < 1e-12 && worst_fn < 1e-12;
  const double g1 = 0.1, g2 = 0.4999;
  double spread = 0.0;
  int worst_n = 0;
  for (int n = 0; n <= 10; ++n) {
    const double d = std::abs(pole_energy(Family::A, n, {0.5, g1, g2, 0.0}) + (1 + g1 * g1) / 2);
    if (d > spread) {
      spread = d;
      worst_n = n;
    }
  }
  const bool collapse = spread < 0.02;
  Outcome o;
  o.pass = identity && collapse;
  o.detail = fmt("E_A(n) - E_B(n) = 4 g2 g1^2/beta^2: worst %.1e (%s); as literally signed, E_B - E_A: worst %.2e; "
                 "collapse at g2=0.4999, g1=0.1: max_n<=10 |E_A(n) + (1+g1^2)/2| = %.4f at n=%d vs 0.02 (%s)",
                 worst, identity ? "ok" : "fail", worst_literal, spread, worst_n, collapse ? "ok" : "fail");
  return o;
}

Outcome c6() {
  std::vector<double> E;
  std::string d;
  for (double g2 : {0.40, 0.45, 0.47, 0.49}) {
    E.push_back(lowest_levels({0.5, 0.1, g2, 0.0}, 1).front());
    d += fmt("E0(%.2f)=%.6f ", g2, E.back());
  }
  bool dec = true;
  for (std::size_t i = 1; i < E.size(); ++i) dec = dec && E[i] < E[i - 1];
  // cross-check the first three against diagonalization
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double g2 = std::vector<double>{0.40, 0.45, 0.47}[i];
    worst = std::max(worst, std::abs(oracle_levels({0.5, 0.1, g2, 0.0}, 1).energies(0) - E[i]));
  }
  return {dec && worst < 1e-6, d + fmt("strictly decreasing: %s, oracle agreement %.1e", dec ? "yes" : "no", worst)};
}

Outcome c7() {
  const auto grid = default_exceptional_grid();
  Outcome o{true, ""};
  std::map<std::string, int> accepted;
  int rejected = 0;
  double worst_gap = 0.0;
  for (auto [fam, m] : std::vector<std::pair<Family, int>>{{Family::B, 1}, {Family::B, 0}, {Family::A, 0}, {Family::A, 1}}) {
    const ExceptionalProblem prob{fam, m, 0.5, 0.1};
    const auto roots = find_exceptional_roots(prob, grid);
    const std::string key = std::string(to_string(fam)) + std::to_string(m);
    accepted[key] = 0;
    for (const auto& r : roots) {
      if (r.spurious) {
        ++rejected;
        continue;
      }
      ++accepted[key];
      const double E = prob.energy(r.g2_star);
      const auto lv = oracle_window(prob.params(r.g2_star), E - 1e-3, E + 1e-3);
      const double gap = nearest(lv, E);
      worst_gap = std::max(worst_gap, gap);
      if (!(gap < 1e-6)) o.pass = false;
    }
  }
  o.pass = o.pass && accepted["B1"] == 1 && accepted["B0"] == 0 && accepted["A0"] >= 2 && accepted["A1"] >= 2;
  o.detail = fmt("B1: %d, B0: %d, A0: %d, A1: %d accepted roots, %d rejected; worst oracle gap %.1e", accepted["B1"],
                 accepted["B0"], accepted["A0"], accepted["A1"], rejected, worst_gap);
  return o;
}

Outcome c8() {
  const ModelParams base{0.5, 0.1, 0.0, 0.0};
  const int K = 12;
  std::vector<double> coarse;
  for (int i = 1; i <= 192; ++i) coarse.push_back(0.0025 * i);
  const auto sw = spectrum_sweep(base, coarse, K);
  if (!sw.errors.empty()) return {false, "sweep failed: " + sw.errors.front()};
  std::map<double, std::vector<double>> lv;
  for (const auto& r : sw.levels) lv[r.g2].push_back(r.E);
  std::vector<double> gs;
  std::vector<std::vector<double>> L;
  for (auto& [g, v] : lv) {
    gs.push_back(g);
    L.push_back(v);
  }

  struct Hood {
    int k;
    double g2;
  };
  std::vector<Hood> hoods;
  for (int k = 0; k + 1 < K; ++k) {
    for (std::size_t i = 1; i + 1 < gs.size(); ++i) {
      auto gap = [&](std::size_t j) { return L[j][k + 1] - L[j][k]; };
      if (!(gap(i) < gap(i - 1) && gap(i) <= gap(i + 1))) continue;
      // an apparent crossing: the two levels squeeze a pair of A and B pole lines
      const auto between = poles_in({0.5, 0.1, gs[i], 0.0}, L[i][k], L[i][k + 1]);
      std::set<Family> fams;
      for (const auto& q : between) fams.insert(q.family);
      if (fams.size() == 2) hoods.push_back({k, gs[i]});
    }
  }
  if (hoods.empty()) return {false, "no apparent crossings found"};

  Outcome o{true, ""};
  double min_gap = HUGE_VAL;
  int exc_found = 0;
  for (const auto& h : hoods) {
    std::vector<double> fine;
    for (int j = -30; j <= 30; ++j) fine.push_back(h.g2 + 1e-4 * j);
    const auto sf = spectrum_sweep(base, fine, h.k + 2);
    if (!sf.errors.empty()) return {false, "fine sweep failed: " + sf.errors.front()};
    std::map<double, std::vector<double>> fl;
    for (const auto& r : sf.levels) fl[r.g2].push_back(r.E);
    double best = HUGE_VAL, at = h.g2;
    for (auto& [g, v] : fl) {
      if (v[h.k + 1] - v[h.k] < best) {
        best = v[h.k + 1] - v[h.k];
        at = g;
      }
    }
    min_gap = std::min(min_gap, best);
    // no level may touch a pole line between the pair anywhere in the neighborhood
    std::set<std::pair<Family, int>> lines;
    for (double g : fine) {
      for (const auto& q : poles_in({0.5, 0.1, g, 0.0}, fl[g][h.k], fl[g][h.k + 1])) lines.insert({q.family, q.n});
    }
    int found = 0;
    for (const auto& [fam, m] : lines) {
      ExceptionalOptions eo;
      eo.verify = false;
      found += static_cast<int>(find_exceptional_roots({fam, m, 0.5, 0.1}, fine, eo).size());
    }
    exc_found += found;
    o.detail += fmt("levels %d-%d near g2=%.4f: min gap %.3e at %.4f, %zu pole lines, %d exceptional roots; ", h.k,
                    h.k + 1, h.g2, best, at, lines.size(), found);
  }
  o.pass = min_gap > 1e-8 && exc_found == 0;
  o.detail += fmt("overall min gap %.3e", min_gap);
  return o;
}

Outcome c9() {
  Outcome o{true, ""};
  const double eps = effective_params({1.0, 1.0, 0.05, 0.0}).epsilon_eff;
  const double expect = 0.2 / 0.99;
  const bool e1 = std::abs(eps - expect) < 1e-12;

  double worst0 = 0.0;
  for (auto [delta, g1] : std::vector<std::pair<double, double>>{{1.0, 1.0}, {0.5, 0.3}, {2.0, 0.7}}) {
    const ModelParams p{delta, g1, 0.0, 0.0};
    const auto a = build_effective_hamiltonian(p, 150), b = build_hamiltonian(p, 150);
    worst0 = std::max(worst0, (a.entries - b.entries).cwiseAbs().maxCoeff());
    const auto ea = eigen_solve(a, 10, 1e-8, false).energies, eb = eigen_solve(b, 10, 1e-8, false).energies;
    worst0 = std::max(worst0, (ea - eb).cwiseAbs().maxCoeff());
  }
  const bool e2 = worst0 < 1e-12;

  double worst_flip = 0.0;
  for (double g2 : {0.05, 0.1, 0.3}) {
    const ModelParams p{1.0, 1.0, g2, 0.0};
    const double ee = effective_params(p).epsilon_eff;
    for (double b : {0.2, 0.7, 1.5}) {
      ModelParams plus = p, minus = p;
      plus.epsilon = b - ee;
      minus.epsilon = -b - ee;
      const auto ep = converged_levels([&](int M) { return build_effective_hamiltonian(plus, M); }, 8, 200).energies;
      const auto em = converged_levels([&](int M) { return build_effective_hamiltonian(minus, M); }, 8, 200).energies;
      worst_flip = std::max(worst_flip, (ep - em).cwiseAbs().maxCoeff());
    }
  }
  const bool e3 = worst_flip < 1e-8;

  double worst_lv = 0.0;
  for (double g2 : {0.0, 0.025, 0.05, 0.075, 0.1}) {
    const ModelParams p{1.0, 1.0, g2, 0.0};
    const auto full = oracle_levels(p, 6).energies;
    const auto eff = converged_levels([&](int M) { return build_effective_hamiltonian(p, M); }, 6, 200).energies;
    worst_lv = std::max(worst_lv, (full - eff).cwiseAbs().maxCoeff());
  }
  const bool e4 = worst_lv < 0.02;

  o.pass = e1 && e2 && e3 && e4;
  o.detail = fmt("eps_eff(1, 0.05) = %.15f (|err| %.1e); g2=0 eff vs full %.1e; bias flip %.1e; lowest 6 levels "
                 "g2<=0.1 worst %.4f",
                 eps, std::abs(eps - expect), worst0, worst_flip, worst_lv);
  return o;
}

Outcome c10() {
  Outcome o{true, ""};
  // vacuum Wigner function
  Eigen::MatrixXcd vac = Eigen::MatrixXcd::Zero(1, 1);
  vac(0, 0) = 1.0;
  const auto axes = default_wigner_axes();
  const auto Wv = wigner(vac, axes);
  double worst_vac = 0.0;
  for (std::size_t i = 0; i < axes.re.size(); ++i)
    for (std::size_t j = 0; j < axes.im.size(); ++j) {
      const double a2 = axes.re[i] * axes.re[i] + axes.im[j] * axes.im[j];
      worst_vac = std::max(worst_vac, std::abs(Wv.values(i, j) - 2 / std::numbers::pi * std::exp(-2 * a2)));
    }
  // normalization: vacuum and the ground states of the Wigner figure
  double worst_norm = std::abs(Wv.integral() - 1);
  for (double g2 : {0.1, 0.3}) {
    const ModelParams p{1.0, 1.0, g2, 0.0};
    const auto full = ground_state(p);
    const auto eff = ground_state_of([&](int M) { return build_effective_hamiltonian(p, M); }, 200);
    for (const auto* gs : {&full, &eff}) {
      worst_norm = std::max(worst_norm, std::abs(wigner(reduced_field_density(gs->state), axes).integral() - 1));
    }
  }
  const bool w = worst_vac < 1e-8 && worst_norm < 1e-2;

  // fidelity
  const auto f = fidelity_series({1.0, 1.0, 0.05, 0.0}, default_time_grid());
  double me = 0, m1 = 0;
  for (std::size_t i = 0; i < f.t.size(); ++i) {
    me += f.F_eff[i];
    m1 += f.F_1P[i];
  }
  me /= f.t.size();
  m1 /= f.t.size();
  const bool fid = std::abs(f.F_eff[0] - 1) < 1e-12 && me > m1;

  // magnetization, full vs effective
  double worst_M = 0.0;
  for (int i = 0; i <= 12; ++i) {
    const ModelParams p{1.0, 1.0, 0.025 * i, 0.0};
    const auto full = ground_state(p);
    const auto eff = ground_state_of([&](int M) { return build_effective_hamiltonian(p, M); }, 200);
    worst_M = std::max(worst_M, std::abs(magnetization(full.state) - magnetization(eff.state)));
  }
  const bool mag = worst_M < 0.05;

  // order parameters at Delta = 5
  std::vector<double> ratios;
  for (int i = 1; i <= 20; ++i) ratios.push_back(0.1 * i);
  const std::vector<double> g2s{0.1, 0.2, 0.3, 0.4};
  const auto rows = sweep_order_parameters(5.0, g2s, ratios);
  double max_M = -HUGE_VAL;
  bool nph = true;
  for (double g2 : g2s) {
    double at05 = NAN, at15 = NAN;
    for (const auto& r : rows) {
      if (r.g2 != g2) continue;
      max_M = std::max(max_M, r.M);
      if (std::abs(r.ratio - 0.5) < 1e-9) at05 = r.N_ph;
      if (std::abs(r.ratio - 1.5) < 1e-9) at15 = r.N_ph;
    }
    nph = nph && at15 > at05;
  }
  const bool order = max_M < 0 && nph;

  o.pass = w && fid && mag && order;
  o.detail = fmt("vacuum W err %.1e, worst normalization err %.1e; F_eff(0)=%.15f, mean F_eff %.4f vs F_1P %.4f; "
                 "M full vs eff (g2<=0.3) worst %.4f; Delta=5 max M %.2e, N_ph(1.5)>N_ph(0.5) for all g2: %s",
                 worst_vac, worst_norm, f.F_eff[0], me, m1, worst_M, max_M, nph ? "yes" : "no");
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

Outcome c11(const std::string& cli) {
  if (cli.empty() || !fs::exists(cli)) return {false, "CLI binary not found"};
  const fs::path root = fs::temp_directory_path() / ("mixrabi_accept_" + std::to_string(::getpid()));
  fs::remove_all(root);
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"spectrum", "spectrum --delta 0.5 --g1 0.1 --g2 0.2 --window -1 4 --oracle"},
      {"sweep", "sweep --delta 0.5 --g1 0.1 --g2-grid 0 0.45 46 --levels 6"},
      {"exceptional", "exceptional --delta 0.5 --g1 0.1 --family B --m 1 --curve"},
      {"transmission", "transmission --delta 0.5 --g1 1 --g2 0.1 --eps-grid -1 1 11 --levels 3"},
  };
  int compared = 0, differing = 0;
  std::string bad;
  for (const auto& [name, args] : runs) {
    for (const char* tag : {"a", "b"}) {
      const fs::path out = root / tag / (name + ".csv");
      const std::string cmd = cli + " " + args + " --out " + out.string() + " > /dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0) return {false, "CLI run failed: " + args};
    }
    for (const auto& entry : fs::directory_iterator(root / "a")) {
      const auto fname = entry.path().filename().string();
      if (fname.rfind(name, 0) != 0) continue;
      const fs::path other = root / "b" / fname;
      if (entry.path().extension() == ".csv") {
        ++compared;
        if (slurp(entry.path()) != slurp(other)) {
          ++differing;
          bad += " " + fname;
        }
      } else if (fname.find(".manifest.json") != std::string::npos) {
        auto ja = nlohmann::json::parse(slurp(entry.path())), jb = nlohmann::json::parse(slurp(other));
        ja.erase("timestamp");
        jb.erase("timestamp");
        // output paths differ by construction
        ja["config"]["output"].erase("path");
        jb["config"]["output"].erase("path");
        ++compared;
        if (ja != jb) {
          ++differing;
          bad += " " + fname;
        }
      }
    }
  }
  fs::remove_all(root);
  Outcome o;
  o.pass = differing == 0 && compared > 0;
  o.detail = fmt("%d files compared across two runs of 4 commands, %d differ", compared, differing) + bad;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  std::set<int> only;
  for (int i = 2; i < argc; ++i) only.insert(std::atoi(argv[i]));

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"G-function vs diagonalization at Delta=0.5, g1=0.1", c1},
      {"randomized equivalence, 20 triples", c2},
      {"one-photon and two-photon reduction limits", c3},
      {"zero-tunneling analytic branch", c4},
      {"pole gap identity and collapse limit", c5},
      {"lowest level decreases toward collapse", c6},
      {"exceptional solutions at Delta=0.5, g1=0.1", c7},
      {"apparent crossings are avoided", c8},
      {"effective model", c9},
      {"observables", c10},
      {"determinism of CLI output", [&] { return c11(cli); }},
  };

  int failed = 0;
  const auto t_all = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("[%2d] %s  %s (%.1f s): %s\n", id, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                seconds_since(t0), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance: %d failed, total %.1f s\n", failed, seconds_since(t_all));
  return failed;
}
