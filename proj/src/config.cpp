#include "pspec/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace pspec {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

long long to_integer(const std::string& s) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("not an integer: '" + s + "'");
  return v;
}

std::uint64_t to_unsigned(const std::string& s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("not an unsigned integer: '" + s + "'");
  return v;
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ConfigError("not a boolean: '" + s + "'");
}

std::vector<double> to_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item)));
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

int in_range(long long v, long long lo, long long hi, const char* what) {
  if (v < lo || v > hi) {
    throw ConfigError(std::string(what) + " = " + std::to_string(v) + " outside [" +
                      std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return static_cast<int>(v);
}

double positive(double v, const char* what) {
  if (!(v > 0.0)) throw ConfigError(std::string(what) + " must be positive");
  return v;
}

std::string one_of(const std::string& v, std::initializer_list<const char*> allowed, const char* what) {
  for (const char* a : allowed) {
    if (v == a) return v;
  }
  std::string msg = std::string(what) + " = '" + v + "' is not one of";
  for (const char* a : allowed) msg += std::string(" ") + a;
  throw ConfigError(msg);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string fmt_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s;
}

struct Key {
  const char* name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      {"command",
       [](RunConfig& c, const std::string& v) {
         c.command = one_of(v, {"mesh", "eigen", "symmetrize", "verify", "sweep", "oracle"}, "command");
       },
       [](const RunConfig& c) { return c.command; }},
      {"mesh.kind",
       [](RunConfig& c, const std::string& v) {
         c.mesh.kind = one_of(v, {"icosphere", "ellipsoid", "circle", "interval", "file"}, "mesh.kind");
       },
       [](const RunConfig& c) { return c.mesh.kind; }},
      {"mesh.level",
       [](RunConfig& c, const std::string& v) { c.mesh.level = in_range(to_integer(v), 0, 8, "mesh.level"); },
       [](const RunConfig& c) { return std::to_string(c.mesh.level); }},
      {"mesh.aspect",
       [](RunConfig& c, const std::string& v) {
         c.mesh.aspect = to_double(v);
         if (!(c.mesh.aspect >= 1.0 && c.mesh.aspect <= 2.0)) throw ConfigError("mesh.aspect outside [1, 2]");
       },
       [](const RunConfig& c) { return fmt(c.mesh.aspect); }},
      {"mesh.normalize", [](RunConfig& c, const std::string& v) { c.mesh.normalize = to_bool(v); },
       [](const RunConfig& c) { return std::string(c.mesh.normalize ? "true" : "false"); }},
      {"mesh.segments",
       [](RunConfig& c, const std::string& v) {
         c.mesh.segments = in_range(to_integer(v), 3, 1000000, "mesh.segments");
       },
       [](const RunConfig& c) { return std::to_string(c.mesh.segments); }},
      {"mesh.length",
       [](RunConfig& c, const std::string& v) { c.mesh.length = positive(to_double(v), "mesh.length"); },
       [](const RunConfig& c) { return fmt(c.mesh.length); }},
      {"mesh.path", [](RunConfig& c, const std::string& v) { c.mesh.path = v; },
       [](const RunConfig& c) { return c.mesh.path; }},
      {"problem",
       [](RunConfig& c, const std::string& v) { c.problem = one_of(v, {"closed", "dirichlet"}, "problem"); },
       [](const RunConfig& c) { return c.problem; }},
      {"domain.threshold", [](RunConfig& c, const std::string& v) { c.domain_threshold = to_double(v); },
       [](const RunConfig& c) { return fmt(c.domain_threshold); }},
      {"p",
       [](RunConfig& c, const std::string& v) {
         c.p = to_list(v);
         for (double p : c.p) static_cast<void>(PExponent(p));
       },
       [](const RunConfig& c) { return fmt_list(c.p); }},
      {"solver.tolerance",
       [](RunConfig& c, const std::string& v) { c.solver.tolerance = positive(to_double(v), "solver.tolerance"); },
       [](const RunConfig& c) { return fmt(c.solver.tolerance); }},
      {"solver.stage_tolerance",
       [](RunConfig& c, const std::string& v) {
         c.solver.stage_tolerance = positive(to_double(v), "solver.stage_tolerance");
       },
       [](const RunConfig& c) { return fmt(c.solver.stage_tolerance); }},
      {"solver.patience",
       [](RunConfig& c, const std::string& v) { c.solver.patience = in_range(to_integer(v), 1, 1000, "solver.patience"); },
       [](const RunConfig& c) { return std::to_string(c.solver.patience); }},
      {"solver.max_iterations",
       [](RunConfig& c, const std::string& v) {
         c.solver.max_iterations = in_range(to_integer(v), 1, 10000000, "solver.max_iterations");
       },
       [](const RunConfig& c) { return std::to_string(c.solver.max_iterations); }},
      {"solver.continuation_step",
       [](RunConfig& c, const std::string& v) {
         c.solver.continuation_step = to_double(v);
         if (!(c.solver.continuation_step > 0.0 && c.solver.continuation_step <= 0.25)) {
           throw ConfigError("solver.continuation_step outside (0, 0.25]");
         }
       },
       [](const RunConfig& c) { return fmt(c.solver.continuation_step); }},
      {"field", [](RunConfig& c, const std::string& v) { c.field = v; },
       [](const RunConfig& c) { return c.field; }},
      {"sweep.aspects",
       [](RunConfig& c, const std::string& v) {
         c.aspects = to_list(v);
         for (double a : c.aspects) {
           if (!(a >= 1.0 && a <= 2.0)) throw ConfigError("sweep.aspects entry outside [1, 2]");
         }
       },
       [](const RunConfig& c) { return fmt_list(c.aspects); }},
      {"oracle.n",
       [](RunConfig& c, const std::string& v) { c.oracle_n = in_range(to_integer(v), 1, 64, "oracle.n"); },
       [](const RunConfig& c) { return std::to_string(c.oracle_n); }},
      {"oracle.problem",
       [](RunConfig& c, const std::string& v) {
         c.oracle_problem = one_of(v, {"hemisphere", "interval"}, "oracle.problem");
       },
       [](const RunConfig& c) { return c.oracle_problem; }},
      {"battery.smooth_fields",
       [](RunConfig& c, const std::string& v) {
         c.smooth_fields = in_range(to_integer(v), 0, 100000, "battery.smooth_fields");
       },
       [](const RunConfig& c) { return std::to_string(c.smooth_fields); }},
      {"battery.bump_fields",
       [](RunConfig& c, const std::string& v) { c.bump_fields = in_range(to_integer(v), 0, 100000, "battery.bump_fields"); },
       [](const RunConfig& c) { return std::to_string(c.bump_fields); }},
      {"battery.gromov_fields",
       [](RunConfig& c, const std::string& v) {
         c.gromov_fields = in_range(to_integer(v), 0, 100000, "battery.gromov_fields");
       },
       [](const RunConfig& c) { return std::to_string(c.gromov_fields); }},
      {"battery.croke_fields",
       [](RunConfig& c, const std::string& v) {
         c.croke_fields = in_range(to_integer(v), 0, 100000, "battery.croke_fields");
       },
       [](const RunConfig& c) { return std::to_string(c.croke_fields); }},
      {"out", [](RunConfig& c, const std::string& v) { c.out_dir = v; },
       [](const RunConfig& c) { return c.out_dir; }},
      {"seed", [](RunConfig& c, const std::string& v) { c.seed = to_unsigned(v); },
       [](const RunConfig& c) { return std::to_string(c.seed); }},
  };
  return table;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError(where + "missing key");
    if (value.empty()) throw ConfigError(where + "missing value for '" + key + "'");
    const auto& table = keys();
    const auto it = std::find_if(table.begin(), table.end(), [&](const Key& k) { return key == k.name; });
    if (it == table.end()) throw ConfigError(where + "unknown key '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError(where + "duplicate key '" + key + "'");
    try {
      it->set(cfg, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    } catch (const std::out_of_range& e) {
      throw ConfigError(where + e.what());
    }
  }
  if (cfg.command.empty()) throw ConfigError("missing required key \"command\"");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<std::pair<std::string, std::string>> config_entries(const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const Key& k : keys()) out.emplace_back(k.name, k.get(cfg));
  return out;
}

}  // namespace pspec
