// output.hpp: tables, CSV/JSON writers and the run manifest

#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace mixrabi::cli {

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::string name;  // "" for the main output, otherwise a suffix such as "poles"
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  // gnuplot hints: x column and the y columns to draw (1-based)
  int plot_x{1};
  std::vector<int> plot_y{2};
};

/// 17 significant digits, '.' decimal point regardless of locale.
std::string format_number(double x);

void write_csv(const Table& t, const std::filesystem::path& path);
void write_json(const Table& t, const std::filesystem::path& path);

/// Path of table t next to the main output: <stem>_<name>.<ext>.
std::filesystem::path table_path(const std::filesystem::path& main, const Table& t);

void write_gnuplot_stub(const Table& t, const std::filesystem::path& data, const std::string& format);

std::string utc_timestamp();

}  // namespace mixrabi::cli
