#pragma once

#include "feec/checks.hpp"

#include <map>
#include <string>

namespace feec {

// Plain `key = value` file with '#' comments. Duplicate keys are rejected.
std::map<std::string, std::string> parse_config_file(const std::string& path);

// Canonical CSV form of a convergence table: 17-significant-digit numbers,
// empty rate cells on the first row. Byte-stable for identical inputs.
std::string table_csv(const ConvergenceTable& table);

// Entry point behind the feec-heat binary. Subcommands: convergence, run,
// mesh-info, check. Exit codes: 0 ok, 1 invalid config/usage, 2 solver
// failure, 3 property-check failure.
int run_cli(int argc, const char* const* argv);

}  // namespace feec
