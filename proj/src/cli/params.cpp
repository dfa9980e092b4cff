#include "hall_edge/cli/params.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "hall_edge/errors.hpp"

namespace hall_edge::cli {

namespace {

ParamSpec integer(std::string name, long long def, std::optional<double> min, std::optional<double> max,
                  std::string help) {
  return {std::move(name), ParamType::integer, Json(def), min, max, false, false, {}, std::move(help)};
}

ParamSpec real(std::string name, double def, std::optional<double> min, bool exclusive, std::string help) {
  return {std::move(name), ParamType::real, Json(def), min, std::nullopt, exclusive, false, {}, std::move(help)};
}

ParamSpec choice(std::string name, std::vector<std::string> choices, std::string help) {
  Json def = choices.front();
  return {std::move(name), ParamType::choice, def, std::nullopt, std::nullopt, false, false, std::move(choices),
          std::move(help)};
}

ParamSpec real_list(std::string name, std::vector<double> def, std::string help) {
  return {std::move(name), ParamType::real_list, Json(def), std::nullopt, std::nullopt, false, false, {},
          std::move(help)};
}

ParamSpec complex_list(std::string name, std::vector<cplx> def, std::string help) {
  Json arr = Json::array();
  for (const cplx z : def) arr.push_back(Json{{"re", z.real()}, {"im", z.imag()}});
  return {std::move(name), ParamType::complex_list, arr, std::nullopt, std::nullopt, false, false, {},
          std::move(help)};
}

ParamSpec beta_param(Json def) {
  ParamSpec p{"beta", ParamType::real, std::move(def), 0.0, std::nullopt, true, true, {},
              "inverse temperature (inf for zero temperature)"};
  return p;
}

std::vector<ParamSpec> field_params() {
  return {real("B", 1.0, 0.0, true, "magnetic field"), real("E", 0.25, 0.0, false, "harmonic confinement strength")};
}

std::vector<CommandSchema> build_schemas() {
  std::vector<CommandSchema> all;

  auto add = [&](std::string cmd, std::string module, std::vector<ParamSpec> params) {
    all.push_back({std::move(cmd), std::move(module), std::move(params)});
  };
  auto with_field = [](std::vector<ParamSpec> extra) {
    auto v = field_params();
    for (auto& p : extra) v.push_back(std::move(p));
    return v;
  };

  add("spectrum", "single_particle",
      with_field({integer("n-max", 2, 0, 1000, "largest Landau level index"),
                  integer("m-max", 2, 0, 1000, "largest angular quantum number")}));
  add("wavefunction", "single_particle",
      with_field({integer("n", 0, 0, 170, "Landau level"), integer("m", 0, 0, 170, "angular quantum number"),
                  real("x1", 0.0, std::nullopt, false, "position x1"),
                  real("x2", 0.0, std::nullopt, false, "position x2")}));
  add("density", "single_particle",
      with_field({integer("m-max", 100, 0, 1e7, "number of lowest-level states summed"),
                  real("x1", 0.0, std::nullopt, false, "position x1"),
                  real("x2", 0.0, std::nullopt, false, "position x2")}));
  add("dynamics", "single_particle",
      with_field({real("x1", 1.0, std::nullopt, false, "initial x1"),
                  real("x2", 0.0, std::nullopt, false, "initial x2"),
                  real("p1", 0.0, std::nullopt, false, "initial p1"),
                  real("p2", 0.5, std::nullopt, false, "initial p2"),
                  real("t-max", 10.0, 0.0, true, "final time"),
                  integer("samples", 200, 1, 1e6, "number of output times"),
                  choice("method", {"both", "analytic", "rk4"}, "propagation method"),
                  real("step", 0.0, 0.0, false, "rk4 step (0 selects the default)"),
                  real("energy-tolerance", 1e-8, 0.0, true, "allowed rk4 energy drift")}));
  add("current-algebra", "fock_space",
      {choice("quantity", {"central-term", "two-point", "variance-tail", "double-commutator", "backends"},
              "quantity to tabulate"),
       integer("M", 10, 1, 1e6, "mode window half-width"),
       integer("M-prime", 5, 0, 1e6, "inner window for the variance tail"),
       integer("p-max", 3, 0, 1e6, "largest |p| tabulated"),
       integer("p", 1, std::nullopt, std::nullopt, "current index p"),
       integer("p-prime", -1, std::nullopt, std::nullopt, "current index p'"),
       integer("k", 0, std::nullopt, std::nullopt, "mode index of a_k^*"), beta_param("inf")});
  add("correlator", "bosonization",
      {choice("quantity", {"two-point", "n-point", "brute-force", "propagator", "charge-commutator"},
              "quantity to evaluate"),
       real("eps", 0.1, 0.0, true, "cutoff"), real("alpha", 1.0, std::nullopt, false, "charge of the two-point function"),
       real("theta", 0.0, std::nullopt, false, "angle theta"),
       real("theta-prime", 1.0, std::nullopt, false, "angle theta'"),
       real_list("charges", {1.0, -1.0}, "insertion charges"),
       real_list("angles", {0.0, 1.0}, "insertion angles"),
       integer("modes", 100, 1, 1e6, "oscillator modes P"),
       integer("max-occupation", 15, 1, 1000, "per-mode occupation cutoff"),
       real("work-limit", 5e9, 0.0, true, "cap on modes * insertions * (N_max+1)^3"),
       integer("nu", 1, 1, 1000, "filling denominator"), real("center", 0.0, std::nullopt, false, "bump center"),
       real("width", 0.2, 0.0, true, "bump width"), real("amplitude", 1.0, std::nullopt, false, "bump amplitude"),
       real_list("grid", {0.0}, "evaluation angles for the charge commutator")});
  add("anyon", "bosonization",
      {integer("nu", 1, 1, 1000, "statistics exponent"), real_list("xs", {0.0, 1.0}, "positions x_k"),
       real_list("ys", {0.5, 1.5}, "positions y_k"), real("eps", 0.1, 0.0, true, "cutoff"),
       real("velocity", 1e-3, 0.0, true, "rescaling velocity for the vertex correlator")});
  add("laughlin", "laughlin",
      {choice("quantity", {"closed-form", "correlator", "slater", "finite-temperature"}, "quantity to evaluate"),
       complex_list("poles", {{0.3, -0.8}, {-1.1, -0.5}}, "poles z_l, Im z < 0"),
       integer("nu", 1, 1, 1000, "order of the zeros"), real("eps", 0.1, 0.0, true, "cutoff"),
       real_list("xs", {0.2, -0.5}, "positions x_k"), beta_param(10.0),
       real("abs-tol", 1e-13, 0.0, true, "quadrature absolute tolerance"),
       real("rel-tol", 1e-11, 0.0, true, "quadrature relative tolerance"),
       integer("max-intervals", 20000, 1, 1e7, "quadrature interval budget"),
       choice("scheme", {"factorised", "nested"}, "quadrature scheme")});
  return all;
}

[[noreturn]] void bad(const std::string& name, const std::string& why) {
  throw ConfigError("parameter '" + name + "': " + why);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

bool parse_double(const std::string& t, double& out) {
  const std::string s = trim(t);
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

double to_real(const ParamSpec& spec, const Json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    double d;
    const std::string s = trim(v.get<std::string>());
    if (spec.allow_inf && s == "inf") return inf;
    if (parse_double(s, d) && std::isfinite(d)) return d;
  }
  bad(spec.name, "expected a real number, got " + v.dump());
}

long long to_integer(const ParamSpec& spec, const Json& v) {
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d && std::abs(d) < 9e15) return static_cast<long long>(d);
  }
  if (v.is_string()) {
    const std::string s = trim(v.get<std::string>());
    long long out = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    if (r.ec == std::errc() && r.ptr == s.data() + s.size() && !s.empty()) return out;
  }
  bad(spec.name, "expected an integer, got " + v.dump());
}

void check_range(const ParamSpec& spec, double x) {
  if (spec.min) {
    if (spec.min_exclusive ? !(x > *spec.min) : !(x >= *spec.min)) {
      std::ostringstream os;
      os.precision(17);
      os << "value " << x << " must be " << (spec.min_exclusive ? "> " : ">= ") << *spec.min;
      bad(spec.name, os.str());
    }
  }
  if (spec.max && !(x <= *spec.max)) {
    std::ostringstream os;
    os.precision(17);
    os << "value " << x << " must be <= " << *spec.max;
    bad(spec.name, os.str());
  }
}

Json canonical_complex(const ParamSpec& spec, const Json& v) {
  cplx z;
  if (v.is_number()) {
    z = v.get<double>();
  } else if (v.is_string()) {
    try {
      z = parse_complex(v.get<std::string>());
    } catch (const ConfigError& e) {
      bad(spec.name, e.what());
    }
  } else if (v.is_object() && v.contains("re") && v.contains("im") && v["re"].is_number() && v["im"].is_number()) {
    z = {v["re"].get<double>(), v["im"].get<double>()};
  } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    z = {v[0].get<double>(), v[1].get<double>()};
  } else {
    bad(spec.name, "expected a complex number, got " + v.dump());
  }
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) bad(spec.name, "non-finite complex value");
  return Json{{"re", z.real()}, {"im", z.imag()}};
}

Json canonical(const ParamSpec& spec, const Json& raw) {
  switch (spec.type) {
    case ParamType::integer: {
      const long long n = to_integer(spec, raw);
      check_range(spec, static_cast<double>(n));
      return Json(n);
    }
    case ParamType::real: {
      const double x = to_real(spec, raw);
      check_range(spec, x);
      return x == inf ? Json("inf") : Json(x);
    }
    case ParamType::boolean: {
      if (raw.is_boolean()) return raw;
      if (raw.is_string()) {
        const std::string s = trim(raw.get<std::string>());
        if (s == "true" || s == "1") return Json(true);
        if (s == "false" || s == "0") return Json(false);
      }
      bad(spec.name, "expected true or false, got " + raw.dump());
    }
    case ParamType::choice: {
      if (raw.is_string()) {
        const std::string s = trim(raw.get<std::string>());
        for (const auto& c : spec.choices)
          if (c == s) return Json(s);
      }
      std::string options;
      for (const auto& c : spec.choices) options += (options.empty() ? "" : ", ") + c;
      bad(spec.name, "expected one of {" + options + "}, got " + raw.dump());
    }
    case ParamType::real_list: {
      Json items = Json::array();
      if (raw.is_array()) {
        items = raw;
      } else if (raw.is_string()) {
        const std::string s = trim(raw.get<std::string>());
        if (!s.empty())
          for (const auto& item : split(s, ',')) items.push_back(item);
      } else if (raw.is_number()) {
        items.push_back(raw);
      }
      Json out = Json::array();
      ParamSpec element = spec;
      element.allow_inf = false;
      for (const auto& item : items) out.push_back(to_real(element, item));
      if (out.empty()) bad(spec.name, "list must not be empty");
      return out;
    }
    case ParamType::complex_list: {
      Json out = Json::array();
      if (raw.is_array() && !(raw.size() == 2 && raw[0].is_number() && raw[1].is_number())) {
        for (const auto& item : raw) out.push_back(canonical_complex(spec, item));
      } else if (raw.is_string()) {
        const std::string s = trim(raw.get<std::string>());
        if (!s.empty())
          for (const auto& item : split(s, ',')) out.push_back(canonical_complex(spec, Json(item)));
      } else {
        out.push_back(canonical_complex(spec, raw));
      }
      if (out.empty()) bad(spec.name, "list must not be empty");
      return out;
    }
  }
  throw InternalError("unhandled parameter type");
}

bool is_expression(const Json& v) {
  return v.is_string() && !v.get<std::string>().empty() && v.get<std::string>()[0] == '=';
}

Json evaluate_expression(const ParamSpec& spec, const std::string& text, const Json& resolved) {
  if (spec.type != ParamType::integer && spec.type != ParamType::real)
    bad(spec.name, "derived values are only allowed for numeric parameters");
  const std::string body = trim(text.substr(1));
  std::size_t pos = 0;
  while (pos < body.size() && (std::isalnum(static_cast<unsigned char>(body[pos])) || body[pos] == '-' ||
                               body[pos] == '_')) {
    // A '-' is part of the key only when followed by a letter ("M-prime").
    if (body[pos] == '-' && !(pos + 1 < body.size() && std::isalpha(static_cast<unsigned char>(body[pos + 1]))))
      break;
    ++pos;
  }
  const std::string key = body.substr(0, pos);
  if (key.empty() || !resolved.contains(key)) bad(spec.name, "derived value refers to unknown key '" + key + "'");
  const Json& ref = resolved[key];
  if (!ref.is_number()) bad(spec.name, "derived value must refer to a finite numeric parameter");
  const std::string rest = trim(body.substr(pos));
  if (rest.empty()) return canonical(spec, ref);
  const char op = rest[0];
  double operand;
  if (std::string("+-*/").find(op) == std::string::npos || !parse_double(rest.substr(1), operand))
    bad(spec.name, "malformed derived value '" + text + "'");
  if (spec.type == ParamType::integer && ref.is_number_integer() && std::floor(operand) == operand) {
    const long long a = ref.get<long long>();
    const auto b = static_cast<long long>(operand);
    long long r = 0;
    switch (op) {
      case '+': r = a + b; break;
      case '-': r = a - b; break;
      case '*': r = a * b; break;
      default: {
        if (b == 0) bad(spec.name, "division by zero in derived value");
        r = a / b;
        if ((a % b != 0) && ((a < 0) != (b < 0))) --r;
      }
    }
    return canonical(spec, Json(r));
  }
  const double a = ref.get<double>();
  double r = 0.0;
  switch (op) {
    case '+': r = a + operand; break;
    case '-': r = a - operand; break;
    case '*': r = a * operand; break;
    default: r = a / operand;
  }
  if (spec.type == ParamType::integer) r = std::floor(r);
  return canonical(spec, Json(r));
}

}  // namespace

const ParamSpec* CommandSchema::find(const std::string& name) const {
  for (const auto& p : params)
    if (p.name == name) return &p;
  return nullptr;
}

const std::vector<CommandSchema>& command_schemas() {
  static const std::vector<CommandSchema> schemas = build_schemas();
  return schemas;
}

const CommandSchema& schema_for(const std::string& command) {
  for (const auto& s : command_schemas())
    if (s.command == command) return s;
  throw ConfigError("unknown command '" + command + "'");
}

const Json& ParamSet::at(const std::string& name) const {
  if (!has(name)) throw InternalError("parameter '" + name + "' is not set");
  return values_[name];
}

long long ParamSet::integer(const std::string& name) const { return at(name).get<long long>(); }

double ParamSet::real(const std::string& name) const {
  const Json& v = at(name);
  if (v.is_string()) return inf;
  return v.get<double>();
}

bool ParamSet::boolean(const std::string& name) const { return at(name).get<bool>(); }

std::string ParamSet::text(const std::string& name) const { return at(name).get<std::string>(); }

std::vector<double> ParamSet::reals(const std::string& name) const { return at(name).get<std::vector<double>>(); }

std::vector<cplx> ParamSet::complexes(const std::string& name) const {
  std::vector<cplx> out;
  for (const auto& z : at(name)) out.emplace_back(z["re"].get<double>(), z["im"].get<double>());
  return out;
}

ParamSet resolve(const CommandSchema& schema, const Json& raw) {
  if (!raw.is_object()) throw ConfigError("parameters must be a key-value object");
  for (const auto& [key, value] : raw.items())
    if (schema.find(key) == nullptr)
      throw ConfigError("unknown parameter '" + key + "' for command '" + schema.command + "'");

  Json literal = Json::object();
  for (const auto& spec : schema.params) {
    if (raw.contains(spec.name) && !is_expression(raw[spec.name]))
      literal[spec.name] = canonical(spec, raw[spec.name]);
    else if (!raw.contains(spec.name) && !spec.default_value.is_null())
      literal[spec.name] = canonical(spec, spec.default_value);
  }
  Json out = Json::object();
  for (const auto& spec : schema.params) {
    if (raw.contains(spec.name) && is_expression(raw[spec.name]))
      out[spec.name] = evaluate_expression(spec, raw[spec.name].get<std::string>(), literal);
    else if (literal.contains(spec.name))
      out[spec.name] = literal[spec.name];
    else
      throw ConfigError("missing required parameter '" + spec.name + "'");
  }
  return ParamSet(out);
}

cplx parse_complex(const std::string& text) {
  std::string s = trim(text);
  if (s.empty()) throw ConfigError("empty complex number");
  double re = 0.0, im = 0.0;
  if (s.back() != 'i') {
    if (!parse_double(s, re)) throw ConfigError("malformed complex number '" + text + "'");
    return {re, 0.0};
  }
  s.pop_back();
  // Split at the last sign that is not an exponent sign or the leading sign.
  std::size_t split_at = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split_at = k;
      break;
    }
  }
  const std::string re_part = split_at == std::string::npos ? "" : s.substr(0, split_at);
  std::string im_part = split_at == std::string::npos ? s : s.substr(split_at);
  if (im_part == "" || im_part == "+") im_part = "1";
  if (im_part == "-") im_part = "-1";
  if (!re_part.empty() && !parse_double(re_part, re)) throw ConfigError("malformed complex number '" + text + "'");
  if (!parse_double(im_part, im)) throw ConfigError("malformed complex number '" + text + "'");
  return {re, im};
}

}  // namespace hall_edge::cli
