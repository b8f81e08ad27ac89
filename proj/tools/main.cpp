// mixrabi: command-line front end
//
// Every run is a pure function of its RunConfig. Flags fill the config,
// --config FILE overrides them, and each output gets a manifest beside it.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "commands.hpp"
#include "mixrabi/gfunction.hpp"
#include "output.hpp"
#include "run_config.hpp"

#ifndef MIXRABI_VERSION
#define MIXRABI_VERSION "unknown"
#endif

namespace fs = std::filesystem;
using namespace mixrabi;
using namespace mixrabi::cli;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitConvergence = 3;

// Raw flag values that need conversion after parsing.
struct Pending {
  std::vector<double> window, g2_grid, exc_grid, eps_grid, ratio_grid, wigner_grid;
};

Grid to_grid(const std::vector<double>& v, const char* name) {
  const double count = v.at(2);
  if (count != std::floor(count) || count < 1) {
    throw InvalidParameter(std::string(name) + ": COUNT must be a positive integer");
  }
  return {v[0], v[1], static_cast<int>(count)};
}

void add_params(CLI::App* s, RunConfig& c, bool with_g2 = true, bool with_eps = true) {
  s->add_option("--delta", c.params.delta, "qubit tunneling Delta")->capture_default_str();
  s->add_option("--g1", c.params.g1, "one-photon coupling")->capture_default_str();
  if (with_g2) s->add_option("--g2", c.params.g2, "two-photon coupling, [0, 1/2)")->capture_default_str();
  if (with_eps) s->add_option("--epsilon", c.params.epsilon, "static bias epsilon sigma_z / 2")->capture_default_str();
}

void add_series(CLI::App* s, RunConfig& c) {
  auto& n = c.numeric;
  s->add_option("--N", n.N, "series length (0 = auto)")->capture_default_str();
  s->add_option("--digits", n.digits, "working precision in digits (-1 = auto, 0 = double)")->capture_default_str();
  s->add_option("--root-tol", n.root_tol, "bisection tolerance")->capture_default_str();
  s->add_option("--cert-tol", n.cert_tol, "allowed root drift under N -> N+20")->capture_default_str();
}

void add_truncation(CLI::App* s, RunConfig& c) {
  s->add_option("--M", c.numeric.M, "Fock truncation per spin (0 = auto)")->capture_default_str();
  s->add_option("--conv-tol", c.numeric.conv_tol, "vary-M convergence tolerance")->capture_default_str();
}

void add_output(CLI::App* s, RunConfig& c) {
  s->add_option("--out", c.output.path, "output file (default <command>.<format>)");
  s->add_option("--format", c.output.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  s->add_flag("--gnuplot-stub", c.output.gnuplot_stub, "also write a gnuplot script per table");
}

void add_window(CLI::App* s, Pending& pend) {
  s->add_option("--window", pend.window, "energy window LO HI, default -1 4")->expected(2);
}

void add_grid(CLI::App* s, const std::string& flag, std::vector<double>& store, const std::string& help) {
  s->add_option(flag, store, help + " (LO HI COUNT)")->expected(3);
}

std::string code_version() {
#ifdef MIXRABI_GIT
  return std::string(MIXRABI_VERSION) + "+" + MIXRABI_GIT;
#else
  return MIXRABI_VERSION;
#endif
}

nlohmann::json base_manifest(const RunConfig& c) {
  return {{"config", c},
          {"code_version", code_version()},
          {"timestamp", utc_timestamp()},
          {"threads", thread_count()}};
}

void write_manifest(const fs::path& main, nlohmann::json m) {
  fs::path p = main;
  p.replace_filename(main.stem().string() + ".manifest.json");
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary);
  os << m.dump(2) << '\n';
}

fs::path main_path(const RunConfig& c) {
  if (!c.output.path.empty()) return c.output.path;
  return c.command + "." + c.output.format;
}

int execute(const RunConfig& c) {
  const fs::path out = main_path(c);
  Warnings::drain();
  RunResult r;
  try {
    r = run_command(c);
  } catch (const InvalidParameter&) {
    throw;
  } catch (const Error& e) {
    const bool convergence = dynamic_cast<const ConvergenceFailure*>(&e) || dynamic_cast<const UnstableRoot*>(&e) ||
                             dynamic_cast<const Overflow*>(&e) || dynamic_cast<const PoleProximity*>(&e);
    if (!convergence) throw;
    auto m = base_manifest(c);
    m["status"] = "convergence_failure";
    m["error"] = e.what();
    m["warnings"] = Warnings::drain();
    m["outputs"] = nlohmann::json::array();
    write_manifest(out, m);
    std::cerr << "convergence failure: " << e.what() << "\n";
    return kExitConvergence;
  }

  nlohmann::json outputs = nlohmann::json::array();
  for (const auto& t : r.tables) {
    const fs::path p = table_path(out, t);
    if (c.output.format == "csv") {
      write_csv(t, p);
    } else {
      write_json(t, p);
    }
    if (c.output.gnuplot_stub) write_gnuplot_stub(t, p, c.output.format);
    outputs.push_back(p.filename().string());
  }
  const auto warnings = Warnings::drain();
  auto m = base_manifest(c);
  m["status"] = "ok";
  m["outputs"] = outputs;
  m["truncations"] = r.truncations;
  m["summary"] = r.summary;
  m["warnings"] = warnings;
  write_manifest(out, m);

  std::cout << r.text;
  std::cout << "wrote " << out.string();
  if (!warnings.empty()) std::cout << " (" << warnings.size() << " warning(s), see manifest)";
  std::cout << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectrum, exceptional points and observables of the mixed one- and two-photon Rabi model"};
  app.require_subcommand(0, 1);
  std::string config_file;
  app.add_option("--config", config_file, "JSON RunConfig; its fields override the flags");
  app.set_version_flag("--version", code_version());

  RunConfig c;
  Pending pend;
  std::map<std::string, CLI::App*> subs;
  auto sub = [&](const std::string& name, const std::string& help) {
    auto* s = app.add_subcommand(name, help);
    s->fallthrough();
    subs[name] = s;
    add_output(s, c);
    return s;
  };

  auto* s = sub("frame", "Bogoliubov frame constants, poles and pole gap");
  add_params(s, c, true, false);
  s->add_option("--n-poles", c.numeric.n_poles, "highest pole index listed")->capture_default_str();

  s = sub("gcurve", "G-function along an energy window, with pole lines");
  add_params(s, c, true, false);
  add_series(s, c);
  add_window(s, pend);
  s->add_option("--resolution", c.numeric.resolution, "energy step (0 = 0.002)")->capture_default_str();
  s->add_flag("--oracle", c.numeric.oracle, "also write diagonalization eigenvalues in the window");
  add_truncation(s, c);

  s = sub("spectrum", "regular eigenvalues in a window from the zeros of G");
  add_params(s, c, true, false);
  add_series(s, c);
  add_window(s, pend);
  s->add_option("--resolution", c.numeric.resolution, "root-search grid step (0 = 0.01, capped at interval/8)");
  s->add_flag("--oracle", c.numeric.oracle, "also write diagonalization eigenvalues in the window");
  add_truncation(s, c);

  s = sub("sweep", "lowest levels and pole lines over a g2 grid");
  add_params(s, c, false, false);
  add_series(s, c);
  add_grid(s, "--g2-grid", pend.g2_grid, "g2 grid, default 0 0.49 50");
  s->add_option("--levels", c.numeric.levels, "levels per grid point")->capture_default_str();

  s = sub("exceptional", "g2 values where a level sits exactly on a pole line");
  add_params(s, c, false, false);
  s->add_option("--family", c.numeric.family, "pole family A or B")->capture_default_str();
  s->add_option("--m", c.numeric.m, "pole index")->capture_default_str();
  add_grid(s, "--exc-grid", pend.exc_grid, "g2 bracketing grid, default 0.005 0.495 500");
  s->add_flag("--curve", c.numeric.curve, "also write the exceptional determinant along the grid");
  s->add_option("--N", c.numeric.N, "series length (0 = auto)")->capture_default_str();
  s->add_option("--digits", c.numeric.digits, "working precision (-1 = auto)")->capture_default_str();

  s = sub("diag", "lowest levels by truncated diagonalization");
  add_params(s, c);
  add_truncation(s, c);
  s->add_option("--levels", c.numeric.levels, "number of levels")->capture_default_str();

  s = sub("effective", "effective-model parameters and ground state vs the full model");
  add_params(s, c, true, false);
  add_truncation(s, c);
  add_grid(s, "--g2-grid", pend.g2_grid, "g2 grid (default: the single --g2)");

  s = sub("dynamics", "fidelity of the effective and one-photon models from |up,0>");
  add_params(s, c, true, false);
  s->add_option("--M", c.numeric.M, "Fock truncation (0 = auto)")->capture_default_str();
  s->add_option("--t-max", c.numeric.t_max, "final time")->capture_default_str();
  s->add_option("--dt", c.numeric.dt, "time step")->capture_default_str();

  s = sub("wigner", "Wigner function of the ground-state field");
  add_params(s, c, true, false);
  s->add_option("--M", c.numeric.M, "Fock truncation (0 = auto)")->capture_default_str();
  s->add_option("--model", c.numeric.model, "full or eff")->check(CLI::IsMember({"full", "eff"}))->capture_default_str();
  add_grid(s, "--wigner-grid", pend.wigner_grid, "grid on both axes, default -5 5 101");

  s = sub("transmission", "level differences E_n - E_0 against the bias, full and effective");
  add_params(s, c, true, false);
  add_truncation(s, c);
  add_grid(s, "--eps-grid", pend.eps_grid, "bias grid, default -2 2 81");
  s->add_option("--levels", c.numeric.levels, "highest n")->capture_default_str();

  s = sub("order-params", "ground-state M and N_ph against g1_eff / g1c_eff");
  s->add_option("--delta", c.params.delta, "qubit tunneling Delta")->capture_default_str();
  s->add_option("--g2-list", c.numeric.g2_list, "g2 values")->delimiter(',')->capture_default_str();
  add_grid(s, "--ratio-grid", pend.ratio_grid, "scaled coupling grid, default 0 2 41");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    for (const auto& [name, sc] : subs) {
      if (sc->parsed()) c.command = name;
    }
    if (!pend.window.empty()) c.numeric.window = {pend.window.at(0), pend.window.at(1)};
    if (!pend.g2_grid.empty()) c.numeric.g2_grid = to_grid(pend.g2_grid, "--g2-grid");
    if (!pend.exc_grid.empty()) c.numeric.exc_grid = to_grid(pend.exc_grid, "--exc-grid");
    if (!pend.eps_grid.empty()) c.numeric.eps_grid = to_grid(pend.eps_grid, "--eps-grid");
    if (!pend.ratio_grid.empty()) c.numeric.ratio_grid = to_grid(pend.ratio_grid, "--ratio-grid");
    if (!pend.wigner_grid.empty()) c.numeric.wigner_grid = to_grid(pend.wigner_grid, "--wigner-grid");
    if (!config_file.empty()) {
      std::ifstream is(config_file);
      if (!is) throw InvalidParameter("cannot read config " + config_file);
      nlohmann::json j;
      try {
        is >> j;
      } catch (const nlohmann::json::exception& e) {
        throw InvalidParameter(std::string("config is not valid JSON: ") + e.what());
      }
      apply_json(c, j);
    }
    if (c.command.empty()) throw InvalidParameter("no command given (use a subcommand or \"command\" in --config)");
    check(c);
    return execute(c);
  } catch (const InvalidParameter& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
