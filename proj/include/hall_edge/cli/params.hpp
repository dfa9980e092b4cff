#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "hall_edge/numerics.hpp"

namespace hall_edge::cli {

using Json = nlohmann::ordered_json;

enum class ParamType { integer, real, boolean, choice, real_list, complex_list };

struct ParamSpec {
  std::string name;
  ParamType type;
  Json default_value;  // null: required
  std::optional<double> min;
  std::optional<double> max;
  bool min_exclusive = false;
  bool allow_inf = false;  // reals only; "inf" is accepted and echoed as a string
  std::vector<std::string> choices;
  std::string help;
};

struct CommandSchema {
  std::string command;
  std::string module;
  std::vector<ParamSpec> params;

  const ParamSpec* find(const std::string& name) const;
};

const std::vector<CommandSchema>& command_schemas();
// Throws ConfigError for an unknown command.
const CommandSchema& schema_for(const std::string& command);

// Validated parameter values in schema order, stored in canonical JSON form.
class ParamSet {
 public:
  ParamSet() = default;
  explicit ParamSet(Json values) : values_(std::move(values)) {}

  const Json& json() const { return values_; }
  bool has(const std::string& name) const { return values_.contains(name) && !values_[name].is_null(); }
  long long integer(const std::string& name) const;
  double real(const std::string& name) const;
  bool boolean(const std::string& name) const;
  std::string text(const std::string& name) const;
  std::vector<double> reals(const std::string& name) const;
  std::vector<cplx> complexes(const std::string& name) const;

 private:
  const Json& at(const std::string& name) const;
  Json values_ = Json::object();
};

// Raw values may be JSON typed values or strings as they came from the
// command line. A string starting with '=' is a derived value "=KEY op NUMBER"
// (op one of + - * /) or "=KEY", evaluated after the literal values; integer
// results of '/' round toward negative infinity. Unknown keys, type
// mismatches, constraint violations and missing required keys throw
// ConfigError.
ParamSet resolve(const CommandSchema& schema, const Json& raw);

// "1.5", "-2i", "0.3-0.8i", "1e-3+2e-1i"
cplx parse_complex(const std::string& text);

}  // namespace hall_edge::cli
