#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hall_edge/cli/params.hpp"
#include "hall_edge/cli/records.hpp"
#include "hall_edge/errors.hpp"

// hall_edge <command> [--key value ...] [--config file.json] [--output path]
//           [--format csv|json] [--plot file.svg] [--column name]
// hall_edge sweep --target <command> --range key=start:stop:step|v1,v2,..
//           [--range ...] [--set key=value ...] [output options]
namespace hall_edge::cli {

// 0 ok, 2 config, 3 precondition, 4 accuracy, 5 resource, 1 internal.
int exit_code(ErrorKind kind);

struct SweepSpec {
  std::string target;
  std::vector<std::pair<std::string, Json>> ranges;  // key -> range text or JSON array
  Json fixed = Json::object();
};

// Expands "start:stop:step" (inclusive) or "v1,v2,..." into canonical values.
// Throws ConfigError for empty or malformed ranges.
std::vector<Json> expand_range(const ParamSpec& spec, const Json& range);

// Cartesian product of the ranges in order (the first range varies slowest);
// one record per point, written in point order whatever the thread count.
RunResult run_sweep(const SweepSpec& sweep, int threads);

// Parallelism cap from HALL_EDGE_THREADS, else the hardware concurrency.
int thread_cap();

// Full command-line entry point. Errors are reported on `err` as one JSON
// object per line; the return value is the process exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hall_edge::cli
