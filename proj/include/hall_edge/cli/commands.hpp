#pragma once

#include <string>

#include "hall_edge/cli/params.hpp"
#include "hall_edge/cli/records.hpp"

namespace hall_edge::cli {

// Runs one non-sweep command on validated parameters. Library errors
// propagate unchanged.
RunResult execute(const std::string& command, const ParamSet& params);

}  // namespace hall_edge::cli
