#include "hall_edge/cli/records.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "hall_edge/errors.hpp"

namespace hall_edge::cli {

namespace {

Json real_to_json(double x) {
  if (std::isfinite(x)) return Json(x);
  return Json{{"nonfinite", std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf")}};
}

double real_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  const std::string s = j.at("nonfinite").get<std::string>();
  if (s == "inf") return inf;
  if (s == "-inf") return -inf;
  return std::nan("");
}

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_cell(const Json& j) {
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  if (j.is_number()) return format_real(j.get<double>());
  if (j.is_boolean()) return j.get<bool>() ? "true" : "false";
  if (j.is_string()) return csv_escape(j.get<std::string>());
  if (j.is_object() && j.contains("re")) return format_real(j["re"].get<double>()) + (j["im"].get<double>() < 0 ? "" : "+") + format_real(j["im"].get<double>()) + "i";
  if (j.is_array()) {
    std::string s;
    for (const auto& item : j) s += (s.empty() ? "" : ";") + csv_cell(item);
    return csv_escape(s);
  }
  return csv_escape(j.dump());
}

}  // namespace

const Value* ResultRecord::find(const std::string& name) const {
  for (const auto& o : outputs)
    if (o.name == name) return &o.value;
  return nullptr;
}

Json value_to_json(const Value& v) {
  return std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) {
          return real_to_json(x);
        } else if constexpr (std::is_same_v<T, cplx>) {
          return Json{{"re", real_to_json(x.real())}, {"im", real_to_json(x.imag())}};
        } else {
          return Json(x);
        }
      },
      v);
}

Value value_from_json(const Json& j) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) return j.get<long long>();
  if (j.is_number_float()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  if (j.is_object() && j.contains("re") && j.contains("im"))
    return cplx{real_from_json(j["re"]), real_from_json(j["im"])};
  if (j.is_object() && j.contains("nonfinite")) return real_from_json(j);
  throw ConfigError("unrecognised output value " + j.dump());
}

Json record_to_json(const ResultRecord& r) {
  Json outputs = Json::object();
  for (const auto& o : r.outputs) outputs[o.name] = value_to_json(o.value);
  Json prov = Json::object();
  prov["module"] = r.provenance.module;
  prov["operation"] = r.provenance.operation;
  prov["tolerance"] = r.provenance.tolerance ? Json(*r.provenance.tolerance) : Json(nullptr);
  return Json{{"inputs", r.inputs}, {"outputs", outputs}, {"provenance", prov}};
}

ResultRecord record_from_json(const Json& j) {
  ResultRecord r;
  r.inputs = j.at("inputs");
  for (const auto& [name, value] : j.at("outputs").items()) r.outputs.push_back({name, value_from_json(value)});
  const Json& p = j.at("provenance");
  r.provenance.module = p.at("module").get<std::string>();
  r.provenance.operation = p.at("operation").get<std::string>();
  if (!p.at("tolerance").is_null()) r.provenance.tolerance = p["tolerance"].get<double>();
  return r;
}

std::string to_json_document(const RunResult& result, bool with_metadata) {
  Json doc = Json::object();
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = result.command;
  if (!result.context.is_null()) doc["context"] = result.context;
  Json records = Json::array();
  for (const auto& r : result.records) records.push_back(record_to_json(r));
  doc["records"] = records;
  if (with_metadata) {
    Json timing = Json::array();
    for (const auto& r : result.records) timing.push_back(r.seconds);
    doc["metadata"] = Json{{"wall_seconds", result.seconds}, {"record_seconds", timing}, {"warnings", result.warnings}};
  }
  return doc.dump(2) + "\n";
}

RunResult from_json_document(const std::string& text) {
  const Json doc = Json::parse(text);
  RunResult result;
  result.command = doc.at("command").get<std::string>();
  if (doc.contains("context")) result.context = doc["context"];
  for (const auto& r : doc.at("records")) result.records.push_back(record_from_json(r));
  if (doc.contains("metadata")) {
    const Json& m = doc["metadata"];
    result.seconds = m.value("wall_seconds", 0.0);
    if (m.contains("record_seconds"))
      for (std::size_t k = 0; k < result.records.size() && k < m["record_seconds"].size(); ++k)
        result.records[k].seconds = m["record_seconds"][k].get<double>();
    if (m.contains("warnings")) result.warnings = m["warnings"].get<std::vector<std::string>>();
  }
  return result;
}

std::string to_csv(const RunResult& result) {
  std::vector<std::string> input_cols;
  std::set<std::string> seen_inputs;
  std::vector<std::pair<std::string, bool>> output_cols;  // name, complex
  std::set<std::string> seen_outputs;
  for (const auto& r : result.records) {
    for (const auto& [key, value] : r.inputs.items())
      if (seen_inputs.insert(key).second) input_cols.push_back(key);
    for (const auto& o : r.outputs)
      if (seen_outputs.insert(o.name).second)
        output_cols.push_back({o.name, std::holds_alternative<cplx>(o.value)});
  }

  std::string out;
  bool first = true;
  auto cell = [&](const std::string& s) {
    if (!first) out += ',';
    out += s;
    first = false;
  };
  for (const auto& c : input_cols) cell(csv_escape(c));
  for (const auto& [name, is_complex] : output_cols) {
    if (is_complex) {
      cell(csv_escape(name + "_re"));
      cell(csv_escape(name + "_im"));
    } else {
      cell(csv_escape(name));
    }
  }
  out += '\n';

  for (const auto& r : result.records) {
    first = true;
    for (const auto& c : input_cols) cell(r.inputs.contains(c) ? csv_cell(r.inputs[c]) : "");
    for (const auto& [name, is_complex] : output_cols) {
      const Value* v = r.find(name);
      if (is_complex) {
        const cplx z = v && std::holds_alternative<cplx>(*v) ? std::get<cplx>(*v) : cplx{std::nan(""), std::nan("")};
        cell(v ? format_real(z.real()) : "");
        cell(v ? format_real(z.imag()) : "");
        continue;
      }
      if (!v) {
        cell("");
        continue;
      }
      std::visit(
          [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, double>) {
              cell(format_real(x));
            } else if constexpr (std::is_same_v<T, cplx>) {
              cell(format_real(x.real()));
            } else if constexpr (std::is_same_v<T, long long>) {
              cell(std::to_string(x));
            } else if constexpr (std::is_same_v<T, bool>) {
              cell(x ? "true" : "false");
            } else {
              cell(csv_escape(x));
            }
          },
          *v);
    }
    out += '\n';
  }
  return out;
}

double numeric(const Value& v, bool magnitude) {
  return std::visit(
      [&](const auto& x) -> double {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) {
          return magnitude ? std::abs(x) : x;
        } else if constexpr (std::is_same_v<T, cplx>) {
          return magnitude ? std::abs(x) : x.real();
        } else if constexpr (std::is_same_v<T, long long>) {
          return static_cast<double>(x);
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? 1.0 : 0.0;
        } else {
          throw ConfigError("output '" + x + "' is not numeric");
        }
      },
      v);
}

}  // namespace hall_edge::cli
