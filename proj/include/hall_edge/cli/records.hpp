#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hall_edge/cli/params.hpp"

namespace hall_edge::cli {

using Value = std::variant<double, cplx, long long, bool, std::string>;

struct Output {
  std::string name;
  Value value;
};

struct Provenance {
  std::string module;
  std::string operation;
  std::optional<double> tolerance;
};

struct ResultRecord {
  Json inputs = Json::object();
  std::vector<Output> outputs;
  Provenance provenance;
  double seconds = 0.0;  // wall clock; serialised only in the metadata block

  const Value* find(const std::string& name) const;
};

struct RunResult {
  std::string command;
  Json context;  // sweep description; null for single commands
  std::vector<ResultRecord> records;
  std::string x_key;  // input used as abscissa for plots, empty for record index
  std::vector<std::string> warnings;
  double seconds = 0.0;
};

inline constexpr int kSchemaVersion = 1;

Json value_to_json(const Value& v);
Value value_from_json(const Json& j);

Json record_to_json(const ResultRecord& r);
ResultRecord record_from_json(const Json& j);

// {"schema_version", "command", ["context",] "records", "metadata"}. Everything outside
// "metadata" is a deterministic function of the inputs.
std::string to_json_document(const RunResult& result, bool with_metadata = true);
RunResult from_json_document(const std::string& text);

// One row per record: input columns, then outputs; complex outputs become
// name_re, name_im. Numbers use %.17g.
std::string to_csv(const RunResult& result);

// Real part of a numeric value (or of a complex value's magnitude when
// `magnitude` is set). Throws ConfigError for non-numeric values.
double numeric(const Value& v, bool magnitude = false);

}  // namespace hall_edge::cli
