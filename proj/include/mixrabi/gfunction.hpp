// gfunction.hpp: G-function determinant, energy scans and the regular spectrum

#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mixrabi/common.hpp"
#include "mixrabi/model.hpp"
#include "mixrabi/recurrence.hpp"

namespace mixrabi {

struct GOptions {
  int N{0};       // series length; 0 = auto_series_length
  int digits{-1};  // working precision in decimal digits; 0 = double, -1 = auto (pilot run)
  double pole_guard{kDefaultPoleGuard};
  double root_tol{1e-10};
  int cert_extra{20};      // certification re-run at N + cert_extra
  double cert_tol{1e-8};   // allowed root drift under N -> N + cert_extra
  int max_N{2000};
  double resolution{0.0};  // root-search grid step; 0 = 0.01, always capped at interval/8
};

/// max(60, ceil(60/beta)): convergence slows like 1/beta near collapse.
int auto_series_length(const ModelParams& p);

/// Determinant value kept as sign and log10 magnitude; scale_log is the log10
/// of the common factor removed from the columns (already excluded from log10_abs).
struct GValue {
  int sign{0};
  double log10_abs{0.0};
  double scale_log{0.0};
};

struct GMatrix {
  int size{4};
  Eigen::MatrixXd entries;  // rows G00, G01, G10, G11; columns f0, f1, f0', f1'
  double E{0.0};
  int N{0};
  double scale_log{0.0};
  int digits{0};  // 0 when assembled in double
  double peak_log10{0.0};
  GValue det;
};

/// Evaluator bound to one parameter point. Picks series length and working
/// precision once (calibrate) and reuses them for every energy.
class GFunction {
 public:
  explicit GFunction(const ModelParams& p, GOptions opt = {});

  const ModelParams& params() const { return p_; }
  const GOptions& options() const { return opt_; }
  int series_length() const { return N_; }
  int digits() const { return digits_; }

  /// Chooses the working precision from the largest term met at the given
  /// energies. No-op when options fixed the precision.
  void calibrate(const std::vector<double>& energies);

  GMatrix matrix(double E) const;
  GValue value(double E) const;

  /// Same parameters and precision policy, different series length.
  GFunction with_series_length(int N) const;

 private:
  ModelParams p_;
  GOptions opt_;
  int N_{60};
  int digits_{0};
  bool calibrated_{false};
};

/// Working precision for a pilot peak term of 10^peak: double when the sums
/// are benign, otherwise enough digits to absorb the cancellation.
int digits_for_peak(double peak_log10);

double pilot_peak_log10(const ModelParams& p, double E, int N, double pole_guard);

GMatrix g_matrix(double E, const ModelParams& p, int N = 0);
GValue g_value(double E, const ModelParams& p, int N = 0);

/// Sorted merged poles of both families inside [lo, hi].
struct PoleLine {
  Family family{Family::A};
  int n{0};
  double E{0.0};
};
std::vector<PoleLine> poles_in(const ModelParams& p, double lo, double hi);

struct ScanPoint {
  double E{0.0};
  int sign{0};
  double log10_abs{0.0};
};

struct SpectralScan {
  std::vector<ScanPoint> points;
  std::vector<PoleLine> poles;
  int excluded{0};
  int N{0};
  int digits{0};
};

SpectralScan scan(const ModelParams& p, double E_lo, double E_hi, double resolution, GOptions opt = {});

struct Root {
  double E{0.0};
  double lo{0.0}, hi{0.0};  // final bracket
  double residual_log10{0.0};  // log10 |G| at the refined root (scaled)
  int N{0};
  double drift{0.0};  // |E(N) - E(N + cert_extra)|
  int digits{0};      // working precision, 0 = double
};

struct Spectrum {
  std::vector<Root> roots;
  std::vector<double> poles_A;
  std::vector<double> poles_B;
  int N{0};
  int digits{0};
  bool analytic{false};  // Delta = 0 or g1 = g2 = 0 closed-form branch
};

Spectrum find_roots(const ModelParams& p, double E_lo, double E_hi, GOptions opt = {});

/// Lower bound on every eigenvalue: min(pole_A(0), pole_B(0)) - Delta/2.
double spectrum_floor(const ModelParams& p);

/// Upper bound on the k-th eigenvalue (k from 0): k-th merged pole + Delta/2.
double level_ceiling(const ModelParams& p, int k);

/// Lowest k regular levels.
std::vector<double> lowest_levels(const ModelParams& p, int k, GOptions opt = {});

struct SweepRow {
  double g2{0.0};
  int level{0};
  double E{0.0};
};

struct SweepPoleRow {
  double g2{0.0};
  Family family{Family::A};
  int n{0};
  double E{0.0};
};

struct SweepResult {
  std::vector<SweepRow> levels;
  std::vector<SweepPoleRow> poles;
  std::vector<std::string> errors;  // per-point failures; the sweep continues
};

SweepResult spectrum_sweep(const ModelParams& base, const std::vector<double>& g2_grid, int k_levels,
                           GOptions opt = {});

/// Runs fn(i) for i in [0, n) on up to RABI_THREADS worker threads. The first
/// exception by index is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);
int thread_count();

}  // namespace mixrabi
