#include "run_config.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <set>

#include "mixrabi/common.hpp"

namespace mixrabi::cli {

using nlohmann::json;

std::vector<double> Grid::points() const {
  // Rounded to 15 significant digits so that 0..0.3 in 4 points gives 0.1,
  // not 0.09999999999999999.
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) {
    const double x = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    out[i] = std::strtod(buf, nullptr);
  }
  return out;
}

namespace {

json grid_json(const Grid& g) { return {{"lo", g.lo}, {"hi", g.hi}, {"count", g.count}}; }

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw InvalidParameter("config: '" + where + "' must be an object");
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw InvalidParameter("config: unknown key '" + where + "." + key + "'");
  }
}

template <class T>
void take(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidParameter("config: wrong type for '" + where + "." + key + "'");
  }
}

Grid read_grid(const json& j, const std::string& where) {
  reject_unknown(j, {"lo", "hi", "count"}, where);
  Grid g;
  take(j, "lo", g.lo, where);
  take(j, "hi", g.hi, where);
  take(j, "count", g.count, where);
  return g;
}

void check_grid(const Grid& g, const char* name) {
  if (g.count < 1) throw InvalidParameter(std::string(name) + ": count must be >= 1");
  if (g.count > 1 && !(g.lo < g.hi)) throw InvalidParameter(std::string(name) + ": need lo < hi");
}

}  // namespace

void to_json(json& j, const RunConfig& c) {
  const auto& n = c.numeric;
  j = json{
      {"command", c.command},
      {"params", {{"delta", c.params.delta}, {"g1", c.params.g1}, {"g2", c.params.g2}, {"epsilon", c.params.epsilon}}},
      {"numeric",
       {{"N", n.N},
        {"M", n.M},
        {"digits", n.digits},
        {"root_tol", n.root_tol},
        {"cert_tol", n.cert_tol},
        {"conv_tol", n.conv_tol},
        {"resolution", n.resolution},
        {"window", n.window},
        {"levels", n.levels},
        {"n_poles", n.n_poles},
        {"g2_grid", n.g2_grid ? grid_json(*n.g2_grid) : json(nullptr)},
        {"exc_grid", grid_json(n.exc_grid)},
        {"eps_grid", grid_json(n.eps_grid)},
        {"ratio_grid", grid_json(n.ratio_grid)},
        {"g2_list", n.g2_list},
        {"family", n.family},
        {"m", n.m},
        {"t_max", n.t_max},
        {"dt", n.dt},
        {"wigner_grid", grid_json(n.wigner_grid)},
        {"model", n.model},
        {"oracle", n.oracle},
        {"curve", n.curve}}},
      {"output", {{"path", c.output.path}, {"format", c.output.format}, {"gnuplot_stub", c.output.gnuplot_stub}}},
  };
}

void apply_json(RunConfig& c, const json& j) {
  reject_unknown(j, {"command", "params", "numeric", "output"}, "config");
  take(j, "command", c.command, "config");
  if (j.contains("params")) {
    const auto& p = j["params"];
    reject_unknown(p, {"delta", "g1", "g2", "epsilon"}, "params");
    take(p, "delta", c.params.delta, "params");
    take(p, "g1", c.params.g1, "params");
    take(p, "g2", c.params.g2, "params");
    take(p, "epsilon", c.params.epsilon, "params");
  }
  if (j.contains("numeric")) {
    const auto& q = j["numeric"];
    auto& n = c.numeric;
    reject_unknown(q,
                   {"N", "M", "digits", "root_tol", "cert_tol", "conv_tol", "resolution", "window", "levels",
                    "n_poles", "g2_grid", "exc_grid", "eps_grid", "ratio_grid", "g2_list", "family", "m", "t_max",
                    "dt", "wigner_grid", "model", "oracle", "curve"},
                   "numeric");
    take(q, "N", n.N, "numeric");
    take(q, "M", n.M, "numeric");
    take(q, "digits", n.digits, "numeric");
    take(q, "root_tol", n.root_tol, "numeric");
    take(q, "cert_tol", n.cert_tol, "numeric");
    take(q, "conv_tol", n.conv_tol, "numeric");
    take(q, "resolution", n.resolution, "numeric");
    take(q, "window", n.window, "numeric");
    take(q, "levels", n.levels, "numeric");
    take(q, "n_poles", n.n_poles, "numeric");
    if (q.contains("g2_grid")) {
      if (q["g2_grid"].is_null()) {
        n.g2_grid.reset();
      } else {
        n.g2_grid = read_grid(q["g2_grid"], "numeric.g2_grid");
      }
    }
    if (q.contains("exc_grid")) n.exc_grid = read_grid(q["exc_grid"], "numeric.exc_grid");
    if (q.contains("eps_grid")) n.eps_grid = read_grid(q["eps_grid"], "numeric.eps_grid");
    if (q.contains("ratio_grid")) n.ratio_grid = read_grid(q["ratio_grid"], "numeric.ratio_grid");
    if (q.contains("wigner_grid")) n.wigner_grid = read_grid(q["wigner_grid"], "numeric.wigner_grid");
    take(q, "g2_list", n.g2_list, "numeric");
    take(q, "family", n.family, "numeric");
    take(q, "m", n.m, "numeric");
    take(q, "t_max", n.t_max, "numeric");
    take(q, "dt", n.dt, "numeric");
    take(q, "model", n.model, "numeric");
    take(q, "oracle", n.oracle, "numeric");
    take(q, "curve", n.curve, "numeric");
  }
  if (j.contains("output")) {
    const auto& o = j["output"];
    reject_unknown(o, {"path", "format", "gnuplot_stub"}, "output");
    take(o, "path", c.output.path, "output");
    take(o, "format", c.output.format, "output");
    take(o, "gnuplot_stub", c.output.gnuplot_stub, "output");
  }
}

void check(const RunConfig& c) {
  if (std::find(kCommands.begin(), kCommands.end(), c.command) == kCommands.end()) {
    throw InvalidParameter("unknown command '" + c.command + "'");
  }
  const auto& n = c.numeric;
  if (c.output.format != "csv" && c.output.format != "json") throw InvalidParameter("format must be csv or json");
  if (n.N < 0) throw InvalidParameter("N must be >= 0");
  if (n.M < 0) throw InvalidParameter("M must be >= 0");
  if (n.digits < -1) throw InvalidParameter("digits must be >= -1");
  if (!(n.window[0] < n.window[1])) throw InvalidParameter("window: need lo < hi");
  if (n.levels < 1) throw InvalidParameter("levels must be >= 1");
  if (n.n_poles < 0) throw InvalidParameter("n_poles must be >= 0");
  if (n.resolution < 0) throw InvalidParameter("resolution must be >= 0");
  if (!(n.root_tol > 0 && n.cert_tol > 0 && n.conv_tol > 0)) throw InvalidParameter("tolerances must be > 0");
  if (n.g2_grid) check_grid(*n.g2_grid, "g2_grid");
  check_grid(n.exc_grid, "exc_grid");
  check_grid(n.eps_grid, "eps_grid");
  check_grid(n.ratio_grid, "ratio_grid");
  check_grid(n.wigner_grid, "wigner_grid");
  if (n.g2_list.empty()) throw InvalidParameter("g2_list must not be empty");
  parse_family(n.family);
  if (n.m < 0) throw InvalidParameter("m must be >= 0");
  if (!(n.t_max >= 0 && n.dt > 0)) throw InvalidParameter("need t_max >= 0 and dt > 0");
  if (n.model != "full" && n.model != "eff") throw InvalidParameter("model must be full or eff");
}

}  // namespace mixrabi::cli
