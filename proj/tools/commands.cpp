#include "commands.hpp"

#include <cmath>
#include <sstream>

#include "mixrabi/effective.hpp"
#include "mixrabi/exceptional.hpp"
#include "mixrabi/gfunction.hpp"
#include "mixrabi/observables.hpp"
#include "mixrabi/reference_diag.hpp"

namespace mixrabi::cli {

namespace {

using nlohmann::json;

long long I(int v) { return v; }
std::string S(Family f) { return std::string(to_string(f)); }

GOptions g_options(const RunConfig& c) {
  GOptions o;
  o.N = c.numeric.N;
  o.digits = c.numeric.digits;
  o.root_tol = c.numeric.root_tol;
  o.cert_tol = c.numeric.cert_tol;
  o.resolution = c.numeric.resolution;
  return o;
}

OracleOptions oracle_options(const RunConfig& c) {
  OracleOptions o;
  o.M = c.numeric.M;
  o.conv_tol = c.numeric.conv_tol;
  return o;
}

// Signed, logarithmically compressed G for plotting: sign * asinh(|G|).
double compressed(int sign, double log10_abs) {
  if (sign == 0) return 0.0;
  const double mag = log10_abs > 8 ? log10_abs * std::log(10.0) + std::log(2.0) : std::asinh(std::pow(10.0, log10_abs));
  return sign * mag;
}

Table pole_table(const std::vector<PoleLine>& poles) {
  Table t{"poles", {"family", "n", "E"}, {}, 2, {3}};
  for (const auto& q : poles) t.rows.push_back({S(q.family), I(q.n), q.E});
  return t;
}

Table oracle_table(const std::vector<double>& levels) {
  Table t{"oracle", {"index", "E"}, {}, 1, {2}};
  for (std::size_t i = 0; i < levels.size(); ++i) t.rows.push_back({static_cast<long long>(i), levels[i]});
  return t;
}

RunResult cmd_frame(const RunConfig& c) {
  validate(c.params);
  const auto f = build_frame(c.params);
  const double gap = pole_gap(c.params);
  const auto lim = collapse_limits(c.params.g1);
  Table t{"", {"quantity", "value"}, {}, 1, {2}};
  auto add = [&](const std::string& k, double v) { t.rows.push_back({k, v}); };
  add("beta", f.beta);
  add("u", f.u);
  add("v", f.v);
  add("r", f.r);
  add("w", f.w);
  add("w_prime", f.w_prime);
  add("h_A", f.h_A);
  add("h_B", f.h_B);
  add("pole_gap", gap);
  add("collapse_A", lim.finite_A);
  Table poles{"poles", {"family", "n", "E"}, {}, 2, {3}};
  for (Family fam : {Family::A, Family::B}) {
    for (int n = 0; n <= c.numeric.n_poles; ++n) poles.rows.push_back({S(fam), I(n), pole_energy(fam, n, c.params)});
  }
  std::ostringstream os;
  os.precision(10);
  os << "beta = " << f.beta << "\nu = " << f.u << "\nv = " << f.v << "\nw = " << f.w << "\nw' = " << f.w_prime
     << "\npole_A(0) = " << pole_energy(Family::A, 0, c.params) << "\npole_B(0) = "
     << pole_energy(Family::B, 0, c.params) << "\npole gap = " << gap << "\n";
  RunResult r;
  r.tables = {t, poles};
  r.text = os.str();
  return r;
}

RunResult cmd_gcurve(const RunConfig& c) {
  const auto& n = c.numeric;
  const double res = n.resolution > 0 ? n.resolution : 0.002;
  GOptions opt = g_options(c);
  opt.resolution = 0.0;
  const auto sc = scan(c.params, n.window[0], n.window[1], res, opt);
  Table t{"", {"E", "sign", "log10_abs", "G_compressed"}, {}, 1, {4}};
  for (const auto& p : sc.points) t.rows.push_back({p.E, I(p.sign), p.log10_abs, compressed(p.sign, p.log10_abs)});
  RunResult r;
  r.tables = {t, pole_table(sc.poles)};
  if (n.oracle) r.tables.push_back(oracle_table(oracle_window(c.params, n.window[0], n.window[1], oracle_options(c))));
  r.truncations = {{"N", sc.N}, {"digits", sc.digits}, {"excluded_points", sc.excluded}};
  r.text = std::to_string(sc.points.size()) + " points, " + std::to_string(sc.poles.size()) + " poles\n";
  return r;
}

RunResult cmd_spectrum(const RunConfig& c) {
  const auto& n = c.numeric;
  const auto s = find_roots(c.params, n.window[0], n.window[1], g_options(c));
  Table t{"", {"index", "E", "bracket_lo", "bracket_hi", "residual_log10", "N", "drift", "digits"}, {}, 1, {2}};
  std::ostringstream os;
  os.precision(12);
  for (std::size_t i = 0; i < s.roots.size(); ++i) {
    const auto& q = s.roots[i];
    t.rows.push_back({static_cast<long long>(i), q.E, q.lo, q.hi, q.residual_log10, I(q.N), q.drift, I(q.digits)});
    os << "E_" << i << " = " << q.E << "\n";
  }
  Table poles{"poles", {"family", "n", "E"}, {}, 2, {3}};
  for (const auto& q : poles_in(c.params, n.window[0], n.window[1])) poles.rows.push_back({S(q.family), I(q.n), q.E});
  RunResult r;
  r.tables = {t, poles};
  if (n.oracle) r.tables.push_back(oracle_table(oracle_window(c.params, n.window[0], n.window[1], oracle_options(c))));
  r.truncations = {{"N", s.N}, {"digits", s.digits}};
  r.summary = {{"roots", s.roots.size()}, {"analytic", s.analytic}};
  r.text = os.str();
  return r;
}

RunResult cmd_sweep(const RunConfig& c) {
  const Grid grid = c.numeric.g2_grid.value_or(Grid{0.0, 0.49, 50});
  const auto sw = spectrum_sweep(c.params, grid.points(), c.numeric.levels, g_options(c));
  Table t{"", {"g2", "level", "E"}, {}, 1, {3}};
  for (const auto& q : sw.levels) t.rows.push_back({q.g2, I(q.level), q.E});
  Table poles{"poles", {"g2", "family", "n", "E"}, {}, 1, {4}};
  for (const auto& q : sw.poles) poles.rows.push_back({q.g2, S(q.family), I(q.n), q.E});
  for (const auto& e : sw.errors) Warnings::add(e);
  if (!sw.errors.empty() && sw.levels.empty()) throw ConvergenceFailure("sweep: every grid point failed");
  RunResult r;
  r.tables = {t, poles};
  r.summary = {{"points", grid.count}, {"failed_points", sw.errors.size()}};
  r.text = std::to_string(sw.levels.size()) + " level rows, " + std::to_string(sw.errors.size()) + " failed points\n";
  return r;
}

RunResult cmd_exceptional(const RunConfig& c) {
  const auto& n = c.numeric;
  const ExceptionalProblem prob{parse_family(n.family), n.m, c.params.delta, c.params.g1};
  ExceptionalOptions opt;
  opt.N = n.N;
  opt.digits = n.digits;
  const auto grid = n.exc_grid.points();
  const auto roots = find_exceptional_roots(prob, grid, opt);
  Table t{"", {"family", "m", "g2_star", "energy", "residual_log10", "oracle_gap", "sv_ratio", "spurious"}, {}, 3, {4}};
  std::ostringstream os;
  os.precision(12);
  int accepted = 0;
  for (const auto& q : roots) {
    t.rows.push_back({S(q.family), I(q.m), q.g2_star, q.energy, q.residual, q.oracle_gap, q.sv_ratio,
                      I(q.spurious ? 1 : 0)});
    if (!q.spurious) ++accepted;
    os << to_string(q.family) << q.m << ": g2* = " << q.g2_star << ", E = " << q.energy
       << (q.spurious ? " (rejected by oracle)" : "") << "\n";
  }
  os << roots.size() << " root(s)\n";
  RunResult r;
  r.tables = {t};
  if (n.curve) {
    Table curve{"curve", {"g2", "sign", "log10_abs", "G_compressed"}, {}, 1, {4}};
    std::vector<std::vector<Cell>> rows(grid.size());
    std::vector<char> keep(grid.size(), 0);
    parallel_for(grid.size(), [&](std::size_t i) {
      try {
        const auto v = exc_g_value(prob, grid[i], opt);
        rows[i] = {grid[i], I(v.sign), v.log10_abs + v.scale_log, compressed(v.sign, v.log10_abs)};
        keep[i] = 1;
      } catch (const PoleProximity&) {
      }
    });
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (keep[i]) curve.rows.push_back(std::move(rows[i]));
    r.tables.push_back(std::move(curve));
  }
  r.summary = {{"roots", roots.size()}, {"accepted", accepted}};
  r.text = os.str();
  return r;
}

RunResult cmd_diag(const RunConfig& c) {
  const auto sys = oracle_levels(c.params, c.numeric.levels, oracle_options(c));
  Table t{"", {"n", "E"}, {}, 1, {2}};
  std::ostringstream os;
  os.precision(12);
  for (int k = 0; k < sys.energies.size(); ++k) {
    t.rows.push_back({I(k), sys.energies(k)});
    os << "E_" << k << " = " << sys.energies(k) << "\n";
  }
  RunResult r;
  r.tables = {t};
  r.truncations = {{"M", sys.M}, {"max_residual", sys.max_residual}, {"max_drift", sys.max_drift}};
  r.text = os.str();
  return r;
}

RunResult cmd_effective(const RunConfig& c) {
  std::vector<double> g2s = c.numeric.g2_grid ? c.numeric.g2_grid->points() : std::vector<double>{c.params.g2};
  struct Row {
    EffectiveParams e;
    double E_full, E_eff, M_full, M_eff, N_full, N_eff;
    int M_used;
  };
  std::vector<Row> rows(g2s.size());
  parallel_for(g2s.size(), [&](std::size_t i) {
    ModelParams p = c.params;
    p.g2 = g2s[i];
    validate(p);
    const int M0 = c.numeric.M > 0 ? c.numeric.M : default_truncation(p.g2);
    const auto full = ground_state(p, c.numeric.M);
    const auto eff = ground_state_of([p](int M) { return build_effective_hamiltonian(p, M); }, M0);
    rows[i] = {effective_params(p),
               full.energy,
               eff.energy,
               magnetization(full.state),
               magnetization(eff.state),
               photon_number(full.state),
               photon_number(eff.state),
               full.state.M};
  });
  Table t{"",
          {"g2", "epsilon_eff", "omega_eff", "g1_eff", "g1c_eff", "shift", "E0_full", "E0_eff", "M_full", "M_eff",
           "Nph_full", "Nph_eff", "M_trunc"},
          {},
          1,
          {9, 10}};
  for (std::size_t i = 0; i < g2s.size(); ++i) {
    const auto& q = rows[i];
    t.rows.push_back({g2s[i], q.e.epsilon_eff, q.e.omega_eff, q.e.g1_eff, q.e.g1c_eff, q.e.shift, q.E_full, q.E_eff,
                      q.M_full, q.M_eff, q.N_full, q.N_eff, I(q.M_used)});
  }
  std::ostringstream os;
  os.precision(12);
  const auto& e0 = rows.front().e;
  os << "epsilon_eff = " << e0.epsilon_eff << "\nomega_eff = " << e0.omega_eff << "\ng1_eff = " << e0.g1_eff
     << "\ng1c_eff = " << e0.g1c_eff << "\n";
  RunResult r;
  r.tables = {t};
  r.text = os.str();
  return r;
}

RunResult cmd_dynamics(const RunConfig& c) {
  std::vector<double> ts;
  const int steps = static_cast<int>(std::floor(c.numeric.t_max / c.numeric.dt + 1e-9));
  for (int i = 0; i <= steps; ++i) ts.push_back(i * c.numeric.dt);
  const auto f = fidelity_series(c.params, ts, c.numeric.M);
  Table t{"", {"t", "F_eff", "F_1P"}, {}, 1, {2, 3}};
  double me = 0, m1 = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    t.rows.push_back({f.t[i], f.F_eff[i], f.F_1P[i]});
    me += f.F_eff[i];
    m1 += f.F_1P[i];
  }
  me /= ts.size();
  m1 /= ts.size();
  RunResult r;
  r.tables = {t};
  r.truncations = {{"M", f.M}};
  r.summary = {{"mean_F_eff", me}, {"mean_F_1P", m1}};
  std::ostringstream os;
  os << "mean F_eff = " << me << ", mean F_1P = " << m1 << "\n";
  r.text = os.str();
  return r;
}

RunResult cmd_wigner(const RunConfig& c) {
  const auto& n = c.numeric;
  validate(c.params);
  GroundState gs;
  if (n.model == "full") {
    gs = ground_state(c.params, n.M);
  } else {
    const ModelParams p = c.params;
    gs = ground_state_of([p](int M) { return build_effective_hamiltonian(p, M); },
                         n.M > 0 ? n.M : default_truncation(p.g2));
  }
  const auto axes = wigner_axes(n.wigner_grid.lo, n.wigner_grid.hi, n.wigner_grid.count);
  const auto W = wigner(reduced_field_density(gs.state), axes);
  Table t{"", {"re", "im", "W"}, {}, 1, {3}};
  for (std::size_t i = 0; i < axes.re.size(); ++i)
    for (std::size_t j = 0; j < axes.im.size(); ++j) t.rows.push_back({axes.re[i], axes.im[j], W.values(i, j)});
  RunResult r;
  r.tables = {t};
  r.truncations = {{"M_state", gs.state.M}, {"M_wigner", W.M}};
  r.summary = {{"integral", W.integral()}, {"energy", gs.energy}, {"N_ph", photon_number(gs.state)}};
  std::ostringstream os;
  os << "integral = " << W.integral() << "\n";
  r.text = os.str();
  return r;
}

RunResult cmd_transmission(const RunConfig& c) {
  const auto cmp = compare_spectra(c.params, c.numeric.eps_grid.points(), c.numeric.levels, oracle_options(c));
  Table t{"", {"epsilon", "model", "n", "dE"}, {}, 1, {4}};
  for (const auto& q : cmp.rows) t.rows.push_back({q.epsilon, q.model, I(q.n), q.dE});
  RunResult r;
  r.tables = {t};
  r.summary = {{"symmetry_point", cmp.symmetry_point}};
  std::ostringstream os;
  os << "symmetry point epsilon = " << cmp.symmetry_point << "\n";
  r.text = os.str();
  return r;
}

RunResult cmd_order_params(const RunConfig& c) {
  const auto rows = sweep_order_parameters(c.params.delta, c.numeric.g2_list, c.numeric.ratio_grid.points());
  Table t{"", {"ratio", "g2", "g1", "M", "N_ph"}, {}, 1, {4, 5}};
  for (const auto& q : rows) t.rows.push_back({q.ratio, q.g2, q.g1, q.M, q.N_ph});
  RunResult r;
  r.tables = {t};
  r.text = std::to_string(rows.size()) + " rows\n";
  return r;
}

}  // namespace

RunResult run_command(const RunConfig& c) {
  const std::string& k = c.command;
  if (k == "frame") return cmd_frame(c);
  if (k == "gcurve") return cmd_gcurve(c);
  if (k == "spectrum") return cmd_spectrum(c);
  if (k == "sweep") return cmd_sweep(c);
  if (k == "exceptional") return cmd_exceptional(c);
  if (k == "diag") return cmd_diag(c);
  if (k == "effective") return cmd_effective(c);
  if (k == "dynamics") return cmd_dynamics(c);
  if (k == "wigner") return cmd_wigner(c);
  if (k == "transmission") return cmd_transmission(c);
  if (k == "order-params") return cmd_order_params(c);
  throw InvalidParameter("unknown command '" + k + "'");
}

}  // namespace mixrabi::cli
