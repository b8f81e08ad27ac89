// commands.hpp: one computation per CLI command

#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "output.hpp"
#include "run_config.hpp"

namespace mixrabi::cli {

struct RunResult {
  std::vector<Table> tables;  // tables[0] is the main output
  nlohmann::json truncations = nlohmann::json::object();
  nlohmann::json summary = nlohmann::json::object();
  std::string text;  // short human-readable report for stdout
};

/// Runs c.command. Library exceptions propagate to the caller.
RunResult run_command(const RunConfig& c);

}  // namespace mixrabi::cli
