#include "output.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "mixrabi/common.hpp"

namespace mixrabi::cli {

namespace fs = std::filesystem;

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0) x = 0.0;  // no "-0"
  char buf[40];
  // %g honors LC_NUMERIC; the CLI never changes the "C" locale it starts in
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  return os;
}

}  // namespace

void write_csv(const Table& t, const fs::path& path) {
  auto os = open_out(path);
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
    os << '\n';
  }
}

void write_json(const Table& t, const fs::path& path) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& c : row) std::visit([&](const auto& v) { r.push_back(v); }, c);
    rows.push_back(std::move(r));
  }
  auto os = open_out(path);
  os << nlohmann::json{{"columns", t.columns}, {"rows", rows}}.dump(1) << '\n';
}

fs::path table_path(const fs::path& main, const Table& t) {
  if (t.name.empty()) return main;
  fs::path p = main;
  p.replace_filename(main.stem().string() + "_" + t.name + main.extension().string());
  return p;
}

void write_gnuplot_stub(const Table& t, const fs::path& data, const std::string& format) {
  if (format != "csv") return;  // gnuplot reads the CSV form only
  fs::path gp = data;
  gp.replace_extension(".gp");
  auto os = open_out(gp);
  os << "set datafile separator ','\n";
  os << "set key autotitle columnhead\n";
  os << "set xlabel '" << t.columns.at(t.plot_x - 1) << "'\n";
  os << "plot ";
  for (std::size_t i = 0; i < t.plot_y.size(); ++i) {
    os << (i ? ", \\\n     " : "") << "'" << data.filename().string() << "' using " << t.plot_x << ":" << t.plot_y[i]
       << " with linespoints";
  }
  os << '\n';
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace mixrabi::cli
