// run_config.hpp: declarative description of one CLI run

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mixrabi/model.hpp"

namespace mixrabi::cli {

inline const std::vector<std::string> kCommands = {
    "frame", "gcurve", "spectrum", "sweep", "exceptional", "diag",
    "effective", "dynamics", "wigner", "transmission", "order-params"};

struct Grid {
  double lo{0.0};
  double hi{1.0};
  int count{2};

  std::vector<double> points() const;
};

struct Numeric {
  int N{0};          // series length, 0 = auto
  int M{0};          // Fock truncation per spin, 0 = auto
  int digits{-1};    // G-function working precision, -1 = auto, 0 = double
  double root_tol{1e-10};
  double cert_tol{1e-8};
  double conv_tol{1e-8};
  double resolution{0.0};  // gcurve sampling step / root-search grid step, 0 = default
  std::array<double, 2> window{-1.0, 4.0};
  int levels{8};
  int n_poles{10};
  std::optional<Grid> g2_grid;  // sweep default 0..0.49 in 50 points; effective default {g2}
  Grid exc_grid{0.005, 0.495, 500};
  Grid eps_grid{-2.0, 2.0, 81};
  Grid ratio_grid{0.0, 2.0, 41};
  std::vector<double> g2_list{0.1, 0.2, 0.3, 0.4};
  std::string family{"A"};
  int m{0};
  double t_max{20.0};
  double dt{0.02};
  Grid wigner_grid{-5.0, 5.0, 101};
  std::string model{"full"};  // wigner: full | eff
  bool oracle{false};         // gcurve/spectrum: also write the diagonalization levels
  bool curve{false};          // exceptional: also write the determinant along the g2 grid
};

struct Output {
  std::string path;  // empty = <command>.<format> in the working directory
  std::string format{"csv"};
  bool gnuplot_stub{false};
};

struct RunConfig {
  std::string command;
  ModelParams params{0.5, 0.1, 0.2, 0.0};
  Numeric numeric;
  Output output;
};

void to_json(nlohmann::json& j, const RunConfig& c);

/// Overwrites the fields present in j. Unknown keys and wrong types throw
/// InvalidParameter.
void apply_json(RunConfig& c, const nlohmann::json& j);

/// Schema-level checks (command name, grid sizes, formats); model parameters
/// are checked by the library.
void check(const RunConfig& c);

}  // namespace mixrabi::cli
