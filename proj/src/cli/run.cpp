#include "hall_edge/cli/run.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "hall_edge/cli/commands.hpp"
#include "hall_edge/cli/svg.hpp"

namespace hall_edge::cli {

namespace {

constexpr std::size_t kMaxSweepPoints = 1'000'000;

struct Invocation {
  std::string command;
  Json params = Json::object();
  std::string output;
  std::string format;
  std::string plot;
  std::string column;
  SweepSpec sweep;
};

Json read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  Json cfg;
  try {
    cfg = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!cfg.is_object()) throw ConfigError("config file must hold a JSON object");
  static const char* allowed[] = {"command", "parameters", "output", "format", "plot", "column", "target", "ranges"};
  for (const auto& [key, value] : cfg.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown config file key '" + key + "'");
  }
  return cfg;
}

std::string config_string(const Json& cfg, const char* key) {
  if (!cfg.contains(key)) return "";
  if (!cfg[key].is_string()) throw ConfigError(std::string("config key '") + key + "' must be a string");
  return cfg[key].get<std::string>();
}

std::pair<std::string, std::string> split_assignment(const std::string& text, const char* flag) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError(std::string(flag) + " expects key=value, got '" + text + "'");
  return {text.substr(0, eq), text.substr(eq + 1)};
}

// Locates --config before the real parse so file values can seed defaults.
std::string find_config_path(const std::vector<std::string>& args) {
  for (std::size_t k = 1; k < args.size(); ++k) {
    if (args[k] == "--config") {
      if (k + 1 >= args.size()) throw ConfigError("--config requires a file path");
      return args[k + 1];
    }
    if (args[k].rfind("--config=", 0) == 0) return args[k].substr(9);
  }
  return "";
}

bool wants_help(const std::vector<std::string>& args) {
  for (std::size_t k = 1; k < args.size(); ++k)
    if (args[k] == "--help" || args[k] == "-h") return true;
  return false;
}

std::string overview() {
  std::ostringstream os;
  os << "usage: hall_edge <command> [--key value ...] [--config file.json] [--output path]\n"
        "                 [--format csv|json] [--plot file.svg] [--column name]\n"
        "       hall_edge sweep --target <command> --range key=start:stop:step|v1,v2,...\n"
        "                 [--range ...] [--set key=value ...]\n\ncommands:\n";
  for (const auto& s : command_schemas()) os << "  " << s.command << "  (" << s.module << ")\n";
  os << "  sweep\n\nRun 'hall_edge <command> --help' for the parameters of a command.\n";
  return os.str();
}

std::string describe_default(const ParamSpec& p) {
  if (p.default_value.is_null()) return "required";
  if (p.type == ParamType::complex_list) {
    std::string s;
    for (const auto& z : p.default_value) {
      std::ostringstream os;
      os << z["re"].get<double>() << (z["im"].get<double>() < 0 ? "" : "+") << z["im"].get<double>() << "i";
      s += (s.empty() ? "" : ",") + os.str();
    }
    return "default " + s;
  }
  if (p.default_value.is_array()) {
    std::string s;
    for (const auto& v : p.default_value) s += (s.empty() ? "" : ",") + v.dump();
    return "default " + s;
  }
  return "default " + (p.default_value.is_string() ? p.default_value.get<std::string>() : p.default_value.dump());
}

Invocation parse_invocation(const std::vector<std::string>& args, std::ostream& out, bool& help_shown) {
  help_shown = false;
  Invocation inv;
  const std::string config_path = find_config_path(args);
  const Json cfg = config_path.empty() ? Json::object() : read_config(config_path);

  if (args.size() > 1 && !args[1].empty() && args[1][0] != '-') inv.command = args[1];
  else inv.command = config_string(cfg, "command");
  if (inv.command.empty()) {
    if (wants_help(args)) {
      out << overview();
      help_shown = true;
      return inv;
    }
    throw ConfigError("no command given; run 'hall_edge --help'");
  }
  const bool is_sweep = inv.command == "sweep";
  const CommandSchema* schema = is_sweep ? nullptr : &schema_for(inv.command);

  CLI::App app("hall_edge " + inv.command, "hall_edge");
  std::string command_arg, config_arg;
  app.add_option("command", command_arg, "command to run");
  app.add_option("--config", config_arg, "JSON file equivalent to flags; flags override it");
  app.add_option("--output", inv.output, "output path (default: standard output)");
  app.add_option("--format", inv.format, "csv or json (default: from extension, else json)");
  app.add_option("--plot", inv.plot, "write a static SVG plot");
  app.add_option("--column", inv.column, "output column to plot (name, name_re, name_im or name_abs)");

  std::map<std::string, std::string> flag_values;
  std::vector<std::string> range_args, set_args;
  std::string target;
  if (is_sweep) {
    app.add_option("--target", target, "command evaluated at every sweep point");
    app.add_option("--range", range_args, "key=start:stop:step or key=v1,v2,...")->take_all();
    app.add_option("--set", set_args, "fixed key=value for the target")->take_all();
  } else {
    for (const auto& p : schema->params)
      app.add_option("--" + p.name, flag_values[p.name], p.help + " (" + describe_default(p) + ")");
  }

  std::vector<std::string> argv_tail(args.begin() + 1, args.end());
  std::reverse(argv_tail.begin(), argv_tail.end());
  try {
    app.parse(argv_tail);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    help_shown = true;
    return inv;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(std::string("command line: ") + e.what());
  }

  if (inv.output.empty()) inv.output = config_string(cfg, "output");
  if (inv.format.empty()) inv.format = config_string(cfg, "format");
  if (inv.plot.empty()) inv.plot = config_string(cfg, "plot");
  if (inv.column.empty()) inv.column = config_string(cfg, "column");

  Json params = cfg.contains("parameters") ? cfg["parameters"] : Json::object();
  if (!params.is_object()) throw ConfigError("config key 'parameters' must be an object");

  if (is_sweep) {
    inv.sweep.target = target.empty() ? config_string(cfg, "target") : target;
    if (inv.sweep.target.empty()) throw ConfigError("sweep requires --target");
    if (cfg.contains("ranges")) {
      if (!cfg["ranges"].is_object()) throw ConfigError("config key 'ranges' must be an object");
      for (const auto& [k, v] : cfg["ranges"].items()) inv.sweep.ranges.push_back({k, v});
    }
    if (!range_args.empty()) inv.sweep.ranges.clear();
    for (const auto& r : range_args) {
      const auto [k, v] = split_assignment(r, "--range");
      inv.sweep.ranges.push_back({k, Json(v)});
    }
    for (const auto& s : set_args) {
      const auto [k, v] = split_assignment(s, "--set");
      params[k] = v;
    }
    inv.sweep.fixed = params;
  } else {
    if (cfg.contains("target") || cfg.contains("ranges"))
      throw ConfigError("'target' and 'ranges' are only valid for sweep");
    for (const auto& p : schema->params)
      if (app.get_option("--" + p.name)->count() > 0) params[p.name] = flag_values[p.name];
    inv.params = params;
  }

  if (inv.format.empty())
    inv.format = (inv.output.size() >= 4 && inv.output.substr(inv.output.size() - 4) == ".csv") ? "csv" : "json";
  if (inv.format != "csv" && inv.format != "json")
    throw ConfigError("--format must be csv or json, got '" + inv.format + "'");
  return inv;
}

double range_number(const ParamSpec& spec, const std::string& text) {
  char* end = nullptr;
  const std::string s = text;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
    throw ConfigError("range for '" + spec.name + "': malformed number '" + text + "'");
  return v;
}

// Plot column lookup with optional _re/_im/_abs suffix.
double column_value(const ResultRecord& r, const std::string& column) {
  if (const Value* v = r.find(column)) return numeric(*v);
  for (const char* suffix : {"_re", "_im", "_abs"}) {
    const std::string s = suffix;
    if (column.size() > s.size() && column.compare(column.size() - s.size(), s.size(), s) == 0) {
      const Value* v = r.find(column.substr(0, column.size() - s.size()));
      if (!v) break;
      if (s == "_abs") return numeric(*v, true);
      if (s == "_im") return std::holds_alternative<cplx>(*v) ? std::get<cplx>(*v).imag() : 0.0;
      return numeric(*v);
    }
  }
  throw PlotError("no output column '" + column + "'");
}

std::string default_column(const RunResult& result) {
  for (const auto& o : result.records.front().outputs) {
    if (std::holds_alternative<std::string>(o.value)) continue;
    return o.name;
  }
  throw PlotError("no numeric output to plot");
}

double axis_value(const Json& v, std::size_t index) {
  if (v.is_number()) return v.get<double>();
  return static_cast<double>(index);
}

std::string make_plot(const RunResult& result, const std::string& requested) {
  if (result.records.empty()) throw PlotError("no records to plot");
  const std::string column = requested.empty() ? default_column(result) : requested;
  PlotLabels labels;
  labels.y = column;
  labels.provenance = "hall_edge " + result.command;
  const auto& prov = result.records.front().provenance;
  labels.provenance += "; " + prov.module + "." + prov.operation + "; " + std::to_string(result.records.size()) + " records";

  if (!result.context.is_null()) {
    const Json& ranges = result.context["ranges"];
    const std::size_t per_point = result.context["records_per_point"].get<std::size_t>();
    labels.provenance += "; sweep " + result.context.dump();
    if (ranges.size() == 1) {
      const auto& [key, values] = *ranges.items().begin();
      std::vector<double> x, y;
      for (std::size_t i = 0; i < values.size(); ++i) {
        x.push_back(axis_value(values[i], i));
        y.push_back(column_value(result.records[i * per_point], column));
      }
      labels.title = column + " vs " + key;
      labels.x = key;
      return line_plot_svg(x, y, labels);
    }
    auto it = ranges.items().begin();
    const std::string kx = it.key();
    const Json vx = it.value();
    ++it;
    const std::string ky = it.key();
    const Json vy = it.value();
    std::vector<double> xs, ys, grid(vx.size() * vy.size());
    for (std::size_t i = 0; i < vx.size(); ++i) xs.push_back(axis_value(vx[i], i));
    for (std::size_t j = 0; j < vy.size(); ++j) ys.push_back(axis_value(vy[j], j));
    for (std::size_t i = 0; i < vx.size(); ++i)
      for (std::size_t j = 0; j < vy.size(); ++j)
        grid[j * vx.size() + i] = column_value(result.records[(i * vy.size() + j) * per_point], column);
    labels.title = column + " over (" + kx + ", " + ky + ")";
    labels.x = kx;
    labels.y = ky;
    return heatmap_svg(xs, ys, grid, labels, column);
  }

  std::vector<double> x, y;
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const auto& r = result.records[i];
    x.push_back(result.x_key.empty() || !r.inputs.contains(result.x_key) ? static_cast<double>(i)
                                                                         : axis_value(r.inputs[result.x_key], i));
    y.push_back(column_value(r, column));
  }
  labels.title = column + " (" + result.command + ")";
  labels.x = result.x_key.empty() ? "record" : result.x_key;
  return line_plot_svg(x, y, labels);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ResourceError("cannot open '" + path + "' for writing");
  f << content;
  f.close();
  if (!f) throw ResourceError("failed writing '" + path + "'");
}

void report(std::ostream& err, const std::string& level, const std::string& kind, int code, const std::string& msg) {
  Json j = Json::object();
  j[level] = Json{{"kind", kind}, {"exit_code", code}, {"message", msg}};
  err << j.dump() << '\n';
}

}  // namespace

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config: return 2;
    case ErrorKind::precondition: return 3;
    case ErrorKind::accuracy: return 4;
    case ErrorKind::resource: return 5;
    case ErrorKind::internal: return 1;
  }
  return 1;
}

std::vector<Json> expand_range(const ParamSpec& spec, const Json& range) {
  if (spec.type == ParamType::real_list || spec.type == ParamType::complex_list)
    throw ConfigError("parameter '" + spec.name + "' is a list and cannot be swept");
  std::vector<Json> raw;
  if (range.is_array()) {
    for (const auto& v : range) raw.push_back(v);
  } else if (range.is_string()) {
    const std::string text = range.get<std::string>();
    const auto colon = std::count(text.begin(), text.end(), ':');
    if (colon == 2) {
      if (spec.type != ParamType::integer && spec.type != ParamType::real)
        throw ConfigError("range for '" + spec.name + "': start:stop:step needs a numeric parameter");
      const auto c1 = text.find(':');
      const auto c2 = text.find(':', c1 + 1);
      const double start = range_number(spec, text.substr(0, c1));
      const double stop = range_number(spec, text.substr(c1 + 1, c2 - c1 - 1));
      const double step = range_number(spec, text.substr(c2 + 1));
      if (step == 0.0 || (stop - start) * step < 0.0)
        throw ConfigError("range for '" + spec.name + "' is empty");
      const double count = std::floor((stop - start) / step + 1e-9) + 1.0;
      if (count > static_cast<double>(kMaxSweepPoints))
        throw ConfigError("range for '" + spec.name + "' has too many points");
      for (long long k = 0; k < static_cast<long long>(count); ++k) {
        const double v = start + static_cast<double>(k) * step;
        if (spec.type == ParamType::integer) {
          if (std::floor(v) != v) throw ConfigError("range for '" + spec.name + "' produces non-integer values");
          raw.push_back(Json(static_cast<long long>(v)));
        } else {
          raw.push_back(Json(v));
        }
      }
    } else if (colon == 0) {
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ','))
        if (!item.empty()) raw.push_back(Json(item));
    } else {
      throw ConfigError("range for '" + spec.name + "': expected start:stop:step or a comma list");
    }
  } else {
    throw ConfigError("range for '" + spec.name + "' must be a string or an array");
  }
  if (raw.empty()) throw ConfigError("range for '" + spec.name + "' is empty");

  // Canonicalise each value through the schema.
  CommandSchema single{"range", "", {spec}};
  std::vector<Json> out;
  for (const auto& v : raw) {
    Json obj = Json::object();
    obj[spec.name] = v;
    out.push_back(resolve(single, obj).json()[spec.name]);
  }
  return out;
}

int thread_cap() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const char* env = std::getenv("HALL_EDGE_THREADS");
  if (env == nullptr || *env == '\0') return static_cast<int>(hw);
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) throw ConfigError("HALL_EDGE_THREADS must be a positive integer");
  return static_cast<int>(std::min<long>(v, 1024));
}

RunResult run_sweep(const SweepSpec& sweep, int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  if (sweep.target == "sweep") throw ConfigError("sweep target cannot be sweep");
  const CommandSchema& schema = schema_for(sweep.target);
  if (sweep.ranges.empty() || sweep.ranges.size() > 2)
    throw ConfigError("sweep needs one or two ranged parameters, got " + std::to_string(sweep.ranges.size()));
  if (sweep.ranges.size() == 2 && sweep.ranges[0].first == sweep.ranges[1].first)
    throw ConfigError("parameter '" + sweep.ranges[0].first + "' is ranged twice");

  Json context = Json::object();
  context["target"] = sweep.target;
  context["ranges"] = Json::object();
  std::vector<std::vector<Json>> axes;
  for (const auto& [key, text] : sweep.ranges) {
    const ParamSpec* spec = schema.find(key);
    if (spec == nullptr) throw ConfigError("unknown parameter '" + key + "' for command '" + sweep.target + "'");
    if (sweep.fixed.contains(key)) throw ConfigError("parameter '" + key + "' is both ranged and fixed");
    axes.push_back(expand_range(*spec, text));
    context["ranges"][key] = axes.back();
  }

  std::size_t total = 1;
  for (const auto& a : axes) total *= a.size();
  if (total > kMaxSweepPoints) throw ConfigError("sweep has too many points");

  // Validate every point before running any of them.
  std::vector<ParamSet> points;
  points.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    Json raw = sweep.fixed;
    std::size_t rem = idx;
    for (std::size_t a = axes.size(); a-- > 0;) {
      raw[sweep.ranges[a].first] = axes[a][rem % axes[a].size()];
      rem /= axes[a].size();
    }
    points.push_back(resolve(schema, raw));
  }

  std::vector<RunResult> results(total);
  std::vector<std::exception_ptr> errors(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      try {
        results[i] = execute(sweep.target, points[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n_threads = static_cast<int>(std::min<std::size_t>(std::max(threads, 1), total));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  RunResult out;
  out.command = "sweep";
  const std::size_t per_point = results.front().records.size();
  for (const auto& r : results)
    if (r.records.size() != per_point) throw InternalError("sweep points produced different record counts");
  context["records_per_point"] = per_point;
  out.context = context;
  for (auto& r : results)
    for (auto& rec : r.records) out.records.push_back(std::move(rec));
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    bool help = false;
    const Invocation inv = parse_invocation(args, out, help);
    if (help) return 0;

    RunResult result = inv.command == "sweep" ? run_sweep(inv.sweep, thread_cap())
                                              : execute(inv.command, resolve(schema_for(inv.command), inv.params));

    std::string plot_svg;
    if (!inv.plot.empty()) {
      try {
        plot_svg = make_plot(result, inv.column);
      } catch (const std::exception& e) {
        const std::string msg = std::string("plot skipped: ") + e.what();
        result.warnings.push_back(msg);
        report(err, "warning", "plot", 0, msg);
      }
    }

    const std::string text = inv.format == "csv" ? to_csv(result) : to_json_document(result);
    if (inv.output.empty() || inv.output == "-") out << text;
    else write_file(inv.output, text);

    if (!plot_svg.empty()) {
      try {
        write_file(inv.plot, plot_svg);
      } catch (const std::exception& e) {
        report(err, "warning", "plot", 0, std::string("plot skipped: ") + e.what());
      }
    }
    return 0;
  } catch (const Error& e) {
    const int code = exit_code(e.kind());
    report(err, "error", to_string(e.kind()), code, e.what());
    return code;
  } catch (const nlohmann::json::exception& e) {
    report(err, "error", "config", 2, e.what());
    return 2;
  } catch (const std::bad_alloc&) {
    report(err, "error", "resource", 5, "out of memory");
    return 5;
  } catch (const std::exception& e) {
    report(err, "error", "internal", 1, e.what());
    return 1;
  }
}

}  // namespace hall_edge::cli
