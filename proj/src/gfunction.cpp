#include "mixrabi/gfunction.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <sstream>
#include <thread>

#include "gengine.hpp"

namespace mixrabi {

namespace detail {

namespace {
constexpr unsigned kPilotDigits = 25;
}

GMatrix evaluate_g(const ModelParams& p, double E, int N, int digits, double pole_guard,
                   const std::optional<ExceptionalSpec>& exc) {
  if (digits == 0) {
    try {
      return to_gmatrix(assemble<double>(p, E, N, pole_guard, exc), E, N, 0);
    } catch (const Overflow&) {
      digits = std::max(40, digits_for_peak(pilot_peak(p, E, N, pole_guard, exc)));
    }
  }
  MpScope scope(static_cast<unsigned>(digits));
  const auto as = assemble<Mp>(p, Mp(E), N, pole_guard, exc);
  return to_gmatrix(as, E, N, digits);
}

double pilot_peak(const ModelParams& p, double E, int N, double pole_guard,
                  const std::optional<ExceptionalSpec>& exc) {
  MpScope scope(kPilotDigits);
  return assemble<Mp>(p, Mp(E), N, pole_guard, exc).peak_log10;
}

}  // namespace detail

int auto_series_length(const ModelParams& p) {
  const double beta = std::sqrt(1.0 - 4.0 * p.g2 * p.g2);
  return std::max(60, static_cast<int>(std::ceil(60.0 / beta)));
}

int digits_for_peak(double peak_log10) {
  if (!(peak_log10 >= 3.0)) return 0;
  return static_cast<int>(std::ceil(1.3 * peak_log10 + 30.0));
}

double pilot_peak_log10(const ModelParams& p, double E, int N, double pole_guard) {
  return detail::pilot_peak(p, E, N, pole_guard, std::nullopt);
}

// ---------------------------------------------------------------------------

GFunction::GFunction(const ModelParams& p, GOptions opt) : p_(p), opt_(opt) {
  validate(p_, std::max(kDefaultG2Cap, p_.g2));
  N_ = opt_.N > 0 ? opt_.N : auto_series_length(p_);
  if (opt_.digits >= 0) {
    digits_ = opt_.digits;
    calibrated_ = true;
  }
}

void GFunction::calibrate(const std::vector<double>& energies) {
  if (opt_.digits >= 0) return;
  double peak = -HUGE_VAL;
  for (double E : energies) {
    try {
      peak = std::max(peak, pilot_peak_log10(p_, E, N_, opt_.pole_guard));
    } catch (const PoleProximity&) {
    }
  }
  digits_ = digits_for_peak(peak);
  calibrated_ = true;
}

GMatrix GFunction::matrix(double E) const {
  int digits = digits_;
  if (!calibrated_) digits = digits_for_peak(pilot_peak_log10(p_, E, N_, opt_.pole_guard));
  return detail::evaluate_g(p_, E, N_, digits, opt_.pole_guard, std::nullopt);
}

GValue GFunction::value(double E) const { return matrix(E).det; }

GFunction GFunction::with_series_length(int N) const {
  GOptions o = opt_;
  o.N = N;
  return GFunction(p_, o);
}

GMatrix g_matrix(double E, const ModelParams& p, int N) {
  GOptions o;
  o.N = N;
  return GFunction(p, o).matrix(E);
}

GValue g_value(double E, const ModelParams& p, int N) { return g_matrix(E, p, N).det; }

// ---------------------------------------------------------------------------

std::vector<PoleLine> poles_in(const ModelParams& p, double lo, double hi) {
  std::vector<PoleLine> out;
  for (Family fam : {Family::A, Family::B}) {
    for (int n = 0;; ++n) {
      const double e = pole_energy(fam, n, p);
      if (e > hi) break;
      if (e >= lo) out.push_back({fam, n, e});
      if (n > 1000000) break;
    }
  }
  std::sort(out.begin(), out.end(), [](const PoleLine& a, const PoleLine& b) {
    if (a.E != b.E) return a.E < b.E;
    return a.family < b.family;
  });
  return out;
}

double spectrum_floor(const ModelParams& p) {
  return std::min(pole_energy(Family::A, 0, p), pole_energy(Family::B, 0, p)) - p.delta / 2;
}

double level_ceiling(const ModelParams& p, int k) {
  // k-th entry of the merged pole multiset (both families are increasing in n)
  int ia = 0, ib = 0;
  double e = 0.0;
  for (int i = 0; i <= k; ++i) {
    const double ea = pole_energy(Family::A, ia, p);
    const double eb = pole_energy(Family::B, ib, p);
    if (ea <= eb) {
      e = ea;
      ++ia;
    } else {
      e = eb;
      ++ib;
    }
  }
  return e + p.delta / 2;
}

namespace {

constexpr double kPoleOffset = 1e-7;

bool near_any_pole(const std::vector<PoleLine>& poles, double E, double radius) {
  return std::any_of(poles.begin(), poles.end(),
                     [&](const PoleLine& q) { return std::abs(q.E - E) < radius; });
}

struct Interval {
  double lo, hi;
};

std::vector<Interval> open_intervals(const ModelParams& p, double E_lo, double E_hi) {
  const auto poles = poles_in(p, E_lo, E_hi);
  std::vector<double> cuts{E_lo};
  for (const auto& q : poles) cuts.push_back(q.E);
  cuts.push_back(E_hi);
  std::vector<Interval> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = i == 0 ? cuts[i] : cuts[i] + kPoleOffset * (1 + std::abs(cuts[i]));
    const double b = i + 2 == cuts.size() ? cuts[i + 1] : cuts[i + 1] - kPoleOffset * (1 + std::abs(cuts[i + 1]));
    if (b > a) out.push_back({a, b});
  }
  return out;
}

// The len/8 cap in interval_grid resolves every interval, including the narrow
// ones of width pole_gap between an A and a B pole, so the global step only
// has to resolve the wide ones.
double default_step(const GOptions& opt) { return opt.resolution > 0 ? opt.resolution : 0.01; }

std::vector<double> interval_grid(const Interval& iv, double step) {
  const double len = iv.hi - iv.lo;
  const double h = std::min(step, len / 8);
  const int n = std::max(2, static_cast<int>(std::ceil(len / h)) + 1);
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = iv.lo + len * i / (n - 1);
  xs.back() = iv.hi;
  return xs;
}

// Interval midpoints serve as pilot energies; they sit as far from poles as
// the window allows.
std::vector<double> pilot_energies(const std::vector<Interval>& ivs) {
  std::vector<double> es;
  const std::size_t stride = std::max<std::size_t>(1, ivs.size() / 16);
  for (std::size_t i = 0; i < ivs.size(); i += stride) es.push_back(0.5 * (ivs[i].lo + ivs[i].hi));
  if (!ivs.empty()) es.push_back(0.5 * (ivs.back().lo + ivs.back().hi));
  return es;
}

struct Bracket {
  double lo, hi;
  int sign_lo;
};

Root refine(const GFunction& g, Bracket b, double tol) {
  double lo = b.lo, hi = b.hi;
  int slo = b.sign_lo;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const int s = g.value(mid).sign;
    if (s == 0) {
      lo = hi = mid;
      break;
    }
    if (s == slo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  Root r;
  r.lo = lo;
  r.hi = hi;
  r.E = 0.5 * (lo + hi);
  r.N = g.series_length();
  r.residual_log10 = g.value(r.E).log10_abs;
  return r;
}

std::vector<Bracket> sign_changes(const GFunction& g, const std::vector<double>& xs) {
  std::vector<int> signs(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) { signs[i] = g.value(xs[i]).sign; });
  std::vector<Bracket> out;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (signs[i] != 0 && signs[i + 1] != 0 && signs[i] != signs[i + 1]) {
      out.push_back({xs[i], xs[i + 1], signs[i]});
    } else if (signs[i] == 0) {
      out.push_back({xs[i], xs[i], 0});
    }
  }
  return out;
}

// Certifies a root against a longer series. Returns the drift, or a negative
// value when the longer series shows no sign change within cert_tol.
double certify(const GFunction& longer, const Root& r, const GOptions& opt) {
  const double a = r.E - opt.cert_tol;
  const double b = r.E + opt.cert_tol;
  const int sa = longer.value(a).sign;
  const int sb = longer.value(b).sign;
  if (sa == 0 || sb == 0) return 0.0;
  if (sa == sb) return -1.0;
  const Root r2 = refine(longer, {a, b, sa}, std::min(opt.root_tol, opt.cert_tol * 1e-3));
  return std::abs(r2.E - r.E);
}

std::vector<Root> roots_in_interval(const ModelParams& p, const Interval& iv, const GOptions& opt,
                                    int N0) {
  int N = N0;
  const double step = default_step(opt);
  const auto xs = interval_grid(iv, step);
  std::ostringstream failures;
  while (N <= opt.max_N) {
    GOptions o = opt;
    o.N = N;
    GFunction g(p, o);
    g.calibrate({0.5 * (iv.lo + iv.hi)});
    GOptions o2 = o;
    o2.N = N + opt.cert_extra;
    GFunction longer(p, o2);
    longer.calibrate({0.5 * (iv.lo + iv.hi)});

    const auto brackets = sign_changes(g, xs);
    std::vector<Root> roots;
    bool ok = true;
    for (const auto& br : brackets) {
      Root r = br.sign_lo == 0 ? Root{br.lo, br.lo, br.lo, -HUGE_VAL, N, 0.0, 0} : refine(g, br, opt.root_tol);
      const double drift = certify(longer, r, opt);
      if (drift < 0 || drift > opt.cert_tol) {
        ok = false;
        failures << " root near " << r.E << " unstable at N=" << N << ';';
        break;
      }
      r.drift = drift;
      r.digits = std::max(g.digits(), longer.digits());
      roots.push_back(r);
    }
    if (ok) return roots;
    N = static_cast<int>(std::ceil(1.5 * N));
  }
  throw UnstableRoot("G-function roots failed N-certification up to N=" + std::to_string(opt.max_N) + ":" +
                     failures.str());
}

Spectrum analytic_spectrum(const ModelParams& p, double E_lo, double E_hi) {
  Spectrum s;
  s.analytic = true;
  std::vector<double> es;
  if (p.delta == 0.0) {
    for (const auto& q : poles_in(p, E_lo, E_hi)) es.push_back(q.E);
  } else {
    for (int n = 0; n - p.delta / 2 <= E_hi; ++n) {
      for (double e : {n - p.delta / 2, n + p.delta / 2}) {
        if (e >= E_lo && e <= E_hi) es.push_back(e);
      }
    }
  }
  std::sort(es.begin(), es.end());
  for (double e : es) s.roots.push_back({e, e, e, -HUGE_VAL, 0, 0.0, 0});
  return s;
}

}  // namespace

Spectrum find_roots(const ModelParams& p, double E_lo, double E_hi, GOptions opt) {
  validate(p, std::max(kDefaultG2Cap, p.g2));
  if (!(E_lo < E_hi)) throw InvalidParameter("find_roots: need E_lo < E_hi");
  Spectrum s;
  if (p.delta == 0.0 || (p.g1 == 0.0 && p.g2 == 0.0)) {
    s = analytic_spectrum(p, E_lo, E_hi);
  } else {
    const auto all_poles = poles_in(p, E_lo - 1.0, E_hi + 1.0);
    if (near_any_pole(all_poles, E_lo, kPoleOffset) || near_any_pole(all_poles, E_hi, kPoleOffset)) {
      throw InvalidParameter("find_roots: window bound lies on a pole");
    }
    const int N0 = opt.N > 0 ? opt.N : auto_series_length(p);
    const auto ivs = open_intervals(p, E_lo, E_hi);
    int N_max_used = N0;
    for (const auto& iv : ivs) {
      const auto roots = roots_in_interval(p, iv, opt, N0);
      for (const auto& r : roots) {
        N_max_used = std::max(N_max_used, r.N);
        s.digits = std::max(s.digits, r.digits);
      }
      s.roots.insert(s.roots.end(), roots.begin(), roots.end());
    }
    s.N = N_max_used;
  }
  for (const auto& q : poles_in(p, E_lo, E_hi)) {
    (q.family == Family::A ? s.poles_A : s.poles_B).push_back(q.E);
  }
  std::sort(s.roots.begin(), s.roots.end(), [](const Root& a, const Root& b) { return a.E < b.E; });
  return s;
}

std::vector<double> lowest_levels(const ModelParams& p, int k, GOptions opt) {
  if (k < 1) throw InvalidParameter("lowest_levels: k must be >= 1");
  const auto poles = poles_in(p, spectrum_floor(p) - 2.0, level_ceiling(p, k - 1) + 2.0);
  double lo = spectrum_floor(p) - 0.05;
  double hi = level_ceiling(p, k - 1) + 0.05;
  while (near_any_pole(poles, lo, 1e-6)) lo -= 1e-3;
  while (near_any_pole(poles, hi, 1e-6)) hi += 1e-3;
  const auto spec = find_roots(p, lo, hi, opt);
  if (static_cast<int>(spec.roots.size()) < k) {
    std::ostringstream os;
    os << "only " << spec.roots.size() << " regular levels below " << hi << " (wanted " << k
       << "); missing levels may lie on pole lines";
    throw ConvergenceFailure(os.str());
  }
  std::vector<double> out;
  for (int i = 0; i < k; ++i) out.push_back(spec.roots[i].E);
  return out;
}

SweepResult spectrum_sweep(const ModelParams& base, const std::vector<double>& g2_grid, int k_levels,
                           GOptions opt) {
  struct PointResult {
    std::vector<double> levels;
    std::string error;
  };
  std::vector<PointResult> results(g2_grid.size());
  parallel_for(g2_grid.size(), [&](std::size_t i) {
    ModelParams p = base;
    p.g2 = g2_grid[i];
    try {
      results[i].levels = lowest_levels(p, k_levels, opt);
    } catch (const Error& e) {
      std::ostringstream os;
      os << "g2=" << p.g2 << ": " << e.what();
      results[i].error = os.str();
    }
  });
  SweepResult out;
  for (std::size_t i = 0; i < g2_grid.size(); ++i) {
    for (std::size_t k = 0; k < results[i].levels.size(); ++k) {
      out.levels.push_back({g2_grid[i], static_cast<int>(k), results[i].levels[k]});
    }
    if (!results[i].error.empty()) out.errors.push_back(results[i].error);
    ModelParams p = base;
    p.g2 = g2_grid[i];
    const double top = level_ceiling(p, k_levels - 1);
    for (Family fam : {Family::A, Family::B}) {
      for (int n = 0;; ++n) {
        const double e = pole_energy(fam, n, p);
        if (e > top) break;
        out.poles.push_back({p.g2, fam, n, e});
      }
    }
  }
  return out;
}

SpectralScan scan(const ModelParams& p, double E_lo, double E_hi, double resolution, GOptions opt) {
  if (!(E_lo < E_hi)) throw InvalidParameter("scan: need E_lo < E_hi");
  if (!(resolution > 0)) throw InvalidParameter("scan: resolution must be > 0");
  GFunction g(p, opt);
  SpectralScan out;
  out.poles = poles_in(p, E_lo, E_hi);
  const int n = static_cast<int>(std::floor((E_hi - E_lo) / resolution + 1e-9)) + 1;
  std::vector<double> xs;
  for (int i = 0; i < n; ++i) {
    const double E = E_lo + i * resolution;
    if (near_any_pole(out.poles, E, opt.pole_guard)) {
      ++out.excluded;
      continue;
    }
    xs.push_back(E);
  }
  g.calibrate(pilot_energies(open_intervals(p, E_lo, E_hi)));
  out.points.resize(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    const auto v = g.value(xs[i]);
    out.points[i] = {xs[i], v.sign, v.log10_abs + v.scale_log};
  });
  out.N = g.series_length();
  out.digits = g.digits();
  return out;
}

// ---------------------------------------------------------------------------

int thread_count() {
  static const int cached = [] {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("RABI_THREADS")) {
      const int cap = std::atoi(env);
      if (cap >= 1) hw = std::min(hw, static_cast<unsigned>(cap));
    }
    return static_cast<int>(hw);
  }();
  return cached;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(thread_count()));
  std::vector<std::exception_ptr> errors(n);
  auto body = [&](std::size_t start) {
    for (std::size_t i = start; i < n; i += workers) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    body(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(body, t);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace mixrabi
