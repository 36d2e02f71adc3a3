#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "output.hpp"

namespace susyg::cli {

const std::vector<std::string>& command_names();

// Runs one data command for one resolved case. Case-specific facts
// (case tag, spacing, cyclic rules) go into info.
Table run_command(const std::string& command, const Resolved& run, nlohmann::json& info);

// Runs every case, merges the tables and writes the output file (or stdout).
void run_and_write(const std::string& command, const RunConfig& cfg, std::ostream& stdout_stream);

// Invariant suite; prints a pass/fail table and returns true when all pass.
bool run_validate(const Resolved& run, std::ostream& os);

}  // namespace susyg::cli
